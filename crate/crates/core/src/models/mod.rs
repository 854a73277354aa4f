//! Classifier forward passes: logistic regression, feed-forward networks and
//! GraphSAGE with mean, max-pool or attention aggregation.

mod checkpoint;
mod config;
mod forward;
mod gradcheck;
mod params;

pub use checkpoint::{load_checkpoint, save_checkpoint, MANIFEST_FILE};
pub use config::{parse_kv, Aggregator, ModelConfig, ModelKind};
pub use gradcheck::check_model_gradients;
pub use forward::{lr_forward, mlp_forward, sage_forward, InputFeatures, Model, SageOutput};
pub use params::{init_params, param_shapes, ModelParams, GLOROT_UNIFORM};

pub use crate::ndiff::sigmoid;

pub(crate) use forward::build;
