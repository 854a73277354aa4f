//! Minibatch neighbor sampling plus the two dataset-construction samplers:
//! the DURW crawler and lexicon-seeded graph diffusion.

mod diffusion;
mod durw;
mod neighbors;

pub use diffusion::{diffusion_scores, lexicon_seed_scores, select_candidates};
pub use durw::{durw_sample, durw_walk, DurwSample};
pub use neighbors::{sample_neighbors, Hop, SampledBlock, DEFAULT_FANOUTS};
