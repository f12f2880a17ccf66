//! Walk-forward evaluation: cross-validation schedules, weekly rank
//! correlation, strategy statistics and a ridge baseline.

mod baseline;
mod cv;
mod evaluate;
mod metrics;

pub use baseline::{fit_ridge, RidgeModel};
pub use cv::{
    default_cv_schemes, make_cv_schemes, weeks_between, CvScheme, Period, DEFAULT_SCHEDULE, MIN_TEST_GAP_WEEKS,
    MIN_VALIDATION_GAP_WEEKS,
};
pub use evaluate::{evaluate_predictions, Evaluation, PredictionTable};
pub use metrics::{max_drawdown, spearman_corr, strategy_report, CorrSeries, Spearman, StrategyReport};
