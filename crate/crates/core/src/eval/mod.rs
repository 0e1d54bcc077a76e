//! Classifier, cross-validation and synthetic data for judging feature sets.

pub mod boost;
pub mod cv;
pub mod metrics;
pub mod synth;

pub use boost::{best_stump, train_adaboost, BoostConfig, Dataset, DecisionStump, StumpEnsemble};
pub use cv::{
    comparison_table, cross_validate, stratified_folds, EvalConfig, EvalReport, MaskingPolicy,
};
pub use metrics::{Confusion, FoldMetrics};
pub use synth::{generate_homophily_graph, HomophilyParams};
