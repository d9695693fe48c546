//! Cross-validated evaluation of classifier configurations.

pub mod classifier;
pub mod cv;
pub mod report;
pub mod stats;

pub use classifier::{Classifier, ClassifierConfig, ClassifierKind, InnerCvK, Pipeline, Predictor};
pub use cv::{
    cross_validate, cross_validate_sequential, sweep_k, time_config, EvalReport, PhaseTimes,
    SweepResult, DEFAULT_KS,
};
pub use report::{OutputFormat, ResultTable};
pub use stats::{paired_t_test, SignificanceResult, DEFAULT_T_THRESHOLD};
