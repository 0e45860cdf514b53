//! The four shipped applications and a name registry.

pub mod benchmark;
pub mod catalyst;
pub mod heat_exchanger;
pub mod reactor;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::optimize::ConstrainedProblem;
use crate::rbrdo::RbrdoProblem;

pub use benchmark::ConstraintFamily;
pub use catalyst::{CatalystControl, ControlSource};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemId {
    Benchmark,
    HeatExchanger,
    Reactor,
    Catalyst,
}

/// Variant switches for the shipped problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ProblemOptions {
    pub benchmark_family: ConstraintFamily,
    pub catalyst_controls: ControlSource,
}

impl ProblemId {
    pub const ALL: [ProblemId; 4] = [Self::Benchmark, Self::HeatExchanger, Self::Reactor, Self::Catalyst];

    pub fn name(self) -> &'static str {
        match self {
            Self::Benchmark => "benchmark",
            Self::HeatExchanger => "heat-exchanger",
            Self::Reactor => "reactor",
            Self::Catalyst => "catalyst",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Self::Benchmark => "min d1 + d2, three nonlinear constraints, 2 design variables",
            Self::HeatExchanger => "min total area of a 3-stage exchanger network, 5 design variables",
            Self::Reactor => "max outlet concentration of two CSTRs in series, 2 design variables",
            Self::Catalyst => "max yield of a catalyst mixing profile, 3 controls + 2 switch times",
        }
    }

    /// Noise levels of the default sweep.
    pub fn delta_levels(self) -> &'static [f64] {
        match self {
            Self::Catalyst => &[0.0, 0.15, 0.2],
            _ => &[0.0, 0.05, 0.1],
        }
    }

    /// Reliability index used for fixed-β runs when none is given.
    pub fn default_beta(self) -> f64 {
        match self {
            Self::Catalyst => 1.6,
            _ => 3.0,
        }
    }

    pub fn deterministic(self, opts: &ProblemOptions) -> ConstrainedProblem<f64> {
        match self {
            Self::Benchmark => benchmark::deterministic(opts.benchmark_family),
            Self::HeatExchanger => heat_exchanger::deterministic(),
            Self::Reactor => reactor::deterministic(),
            Self::Catalyst => catalyst::deterministic(),
        }
    }

    /// Uncertain form without robustness; δ levels are applied by the caller.
    pub fn rbrdo(self, opts: &ProblemOptions) -> Result<RbrdoProblem<f64>> {
        match self {
            Self::Benchmark => benchmark::rbrdo(opts.benchmark_family),
            Self::HeatExchanger => heat_exchanger::rbrdo(),
            Self::Reactor => reactor::rbrdo(),
            Self::Catalyst => catalyst::rbrdo(opts.catalyst_controls),
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let known: Vec<&str> = Self::ALL.iter().map(|p| p.name()).collect();
            Error::InvalidParameter(format!("unknown problem '{s}' (known: {})", known.join(", ")))
        })
    }
}
