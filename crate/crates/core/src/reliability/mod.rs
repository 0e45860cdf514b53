//! Inverse reliability analysis for independent normal random variables.

mod asosl;
mod line_search;
mod normal;

pub use asosl::{
    asosl_mpp, AsoslParams, MppResult, PerformanceFunction, SecantPoint, StartPoint, TraceRecord,
};
pub use line_search::{
    backtracking_line_search, second_order_step_bound, LineSearchStep, MAX_BACKTRACKS,
};
pub use normal::{
    failure_probability, from_standard_normal, std_normal_cdf, to_standard_normal,
    RandomVariableSpec,
};
