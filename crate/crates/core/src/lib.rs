//! Reliability-based robust multi-objective design optimization.
//!
//! Candidates `(d, β)` are scored by a robust (neighborhood-averaged) objective
//! penalized by inverse-reliability checks of every probabilistic constraint
//! at radius β, and a multi-objective DE trades the objective against β.
//!
//! Numeric routines are generic over [`Real`] (`f32` or `f64`); the shipped
//! problems in [`problems`] and the [`stats`] module use `f64`.

pub mod error;
pub mod optimize;
pub mod pareto;
pub mod problems;
pub mod rbrdo;
pub mod reliability;
pub mod robustness;
pub mod sampling;
pub mod scalar;
pub mod stats;

pub use error::{Error, Result};
pub use optimize::{de_minimize, mode_optimize, ConstrainedProblem, DeParams, Evaluator, ModeParams};
pub use pareto::{dominates, non_dominated_filter, Bounds, DecisionVector, Dominance, EvaluatedSolution, ParetoArchive, Sense};
pub use rbrdo::{build_mo_problem, evaluate_rbrdo, sweep_robustness, MppPlacement, RbdoEvaluator, RbrdoEvaluator, RbrdoProblem};
pub use reliability::{asosl_mpp, AsoslParams, MppResult, PerformanceFunction, RandomVariableSpec};
pub use robustness::{RobustnessSpec, RobustnessStrategy};
pub use sampling::RngStream;
pub use scalar::Real;

pub type Bounds64 = Bounds<f64>;
pub type Bounds32 = Bounds<f32>;
pub type Solution64 = EvaluatedSolution<f64>;
pub type Solution32 = EvaluatedSolution<f32>;
pub type ParetoArchive64 = ParetoArchive<f64>;
pub type ParetoArchive32 = ParetoArchive<f32>;
pub type AsoslParams64 = AsoslParams<f64>;
pub type AsoslParams32 = AsoslParams<f32>;
pub type MppResult64 = MppResult<f64>;
pub type MppResult32 = MppResult<f32>;
pub type RbrdoProblem64 = RbrdoProblem<f64>;
pub type RbrdoProblem32 = RbrdoProblem<f32>;
pub type RobustnessSpec64 = RobustnessSpec<f64>;
pub type RobustnessSpec32 = RobustnessSpec<f32>;
