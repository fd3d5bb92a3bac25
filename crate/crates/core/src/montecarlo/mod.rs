//! Seeded trial ensembles over random set models and the bound checks built
//! on them.

mod checks;
mod experiment;
pub mod stats;

pub use checks::{
    check_chernoff, check_lower_bound_pap, check_lower_bound_product, check_selector_moment, lambda_expectation,
    majorant_scaling_study, probability_estimate, ChernoffCheck, FittedCheck, LambdaExpectation, ModelFamily,
    ProbabilityEstimate, ScalingPoint, ScalingStudy, SelectorMomentCheck,
};
pub use experiment::{run_trials, ExperimentReport, ExperimentSpec, Statistic, TrialRecord, CSV_HEADER};
