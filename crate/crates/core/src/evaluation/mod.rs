//! Classification metrics, predictive-equality fairness, error cohorts,
//! prediction files and report documents.

mod cohort;
mod fairness;
mod metrics;
mod predictions;
mod report;

pub use cohort::{error_cohort_stats, Cohort, CohortColumns, CohortStats, CohortTable};
pub use fairness::{fairness_report, FairnessReport, GroupStats, UNASSIGNED};
pub use metrics::{auc, confusion, prf, threshold_sweep, ConfusionMatrix, Metric, Prf, DEFAULT_THRESHOLD};
pub use predictions::{
    labeled_columns, parse_predictions, read_predictions, write_predictions, write_predictions_to, Prediction,
};
pub use report::{evaluate_predictions, metric_block, EvalReport, FoldMean, KvDoc, MetricBlock};
