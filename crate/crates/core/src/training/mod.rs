//! Class-weighted training with Adam, stratified k-fold splits and the
//! per-fold train/score loop.

mod folds;
mod optim;
mod train;

pub use folds::{stratified_kfold, Fold, FoldPlan};
pub use optim::{adam_step, bce_terms, class_weight, weighted_bce_loss, AdamConfig, AdamState};
pub use train::{fit, parse_run_config, train, train_fold, FoldResult, TrainConfig, TrainRun};
