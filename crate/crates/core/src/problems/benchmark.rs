//! Two-variable benchmark: minimize `d₁ + d₂` under three nonlinear constraints.
//!
//! Performance functions follow the crate convention `G > 0` safe; the
//! deterministic constraints are `g = −G(d) ≤ 0`.

use crate::error::Result;
use crate::optimize::ConstrainedProblem;
use crate::pareto::{Bounds, Sense};
use crate::rbrdo::{ObjectiveContext, RandomInput, RbrdoProblem, Spread};
use crate::reliability::PerformanceFunction;

/// Standard deviation of both random inputs.
pub const SIGMA: f64 = 0.3;
pub const BETA_RANGE: (f64, f64) = (1.0, 3.0);

/// Sign variants of the constraint set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConstraintFamily {
    /// `G₁ = X₁²X₂/20 − 1`, `G₂ = (X₁+X₂−5)²/30 + (X₁−X₂−12)²/120 − 1`,
    /// `G₃ = 80/(X₁²+8X₂+5) − 1`.
    #[default]
    Standard,
    /// Second term of `G₂` subtracted instead of added.
    FlippedSecondTerm,
    /// `−8X₂` in the denominator of `G₃`.
    NegativeDenominator,
}

impl ConstraintFamily {
    pub fn name(self) -> &'static str {
        match self {
            Self::Standard => "standard",
            Self::FlippedSecondTerm => "flipped-second-term",
            Self::NegativeDenominator => "negative-denominator",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::Standard, Self::FlippedSecondTerm, Self::NegativeDenominator]
            .into_iter()
            .find(|f| f.name() == s)
    }

    fn g2_sign(self) -> f64 {
        if self == Self::FlippedSecondTerm {
            -1.0
        } else {
            1.0
        }
    }

    fn g3_sign(self) -> f64 {
        if self == Self::NegativeDenominator {
            -1.0
        } else {
            1.0
        }
    }
}

pub fn objective(d: &[f64]) -> f64 {
    d[0] + d[1]
}

/// `G_i(x)` for `i ∈ {0, 1, 2}`.
pub fn performance(i: usize, x: &[f64], family: ConstraintFamily) -> f64 {
    let (x1, x2) = (x[0], x[1]);
    match i {
        0 => x1 * x1 * x2 / 20.0 - 1.0,
        1 => {
            let s = x1 + x2 - 5.0;
            let q = x1 - x2 - 12.0;
            s * s / 30.0 + family.g2_sign() * q * q / 120.0 - 1.0
        }
        2 => 80.0 / (x1 * x1 + family.g3_sign() * 8.0 * x2 + 5.0) - 1.0,
        _ => panic!("benchmark has three constraints (asked for {i})"),
    }
}

/// `∂G_i/∂x`.
pub fn performance_gradient(i: usize, x: &[f64], family: ConstraintFamily) -> Vec<f64> {
    let (x1, x2) = (x[0], x[1]);
    match i {
        0 => vec![x1 * x2 / 10.0, x1 * x1 / 20.0],
        1 => {
            let s = (x1 + x2 - 5.0) / 15.0;
            let q = family.g2_sign() * (x1 - x2 - 12.0) / 60.0;
            vec![s + q, s - q]
        }
        2 => {
            let k = family.g3_sign() * 8.0;
            let den = x1 * x1 + k * x2 + 5.0;
            let c = -80.0 / (den * den);
            vec![c * 2.0 * x1, c * k]
        }
        _ => panic!("benchmark has three constraints (asked for {i})"),
    }
}

pub fn bounds() -> Bounds<f64> {
    Bounds::new(vec![0.0, 0.0], vec![10.0, 10.0]).expect("static bounds")
}

pub fn deterministic(family: ConstraintFamily) -> ConstrainedProblem<f64> {
    (0..3).fold(ConstrainedProblem::new(bounds(), Sense::Minimize, objective), |p, i| {
        p.inequality(move |d: &[f64]| -performance(i, d, family))
    })
}

pub fn constraint(i: usize, family: ConstraintFamily) -> PerformanceFunction<f64> {
    PerformanceFunction::new(format!("g{}", i + 1), move |_d: &[f64], x: &[f64]| performance(i, x, family))
        .with_gradient(move |_d, x| performance_gradient(i, x, family))
}

/// Decision `(d₁, d₂)`, random inputs `X ~ N(d, 0.3²)`, β ∈ [1, 3].
pub fn rbrdo(family: ConstraintFamily) -> Result<RbrdoProblem<f64>> {
    let p = RbrdoProblem::new("benchmark", bounds(), BETA_RANGE, vec![Sense::Minimize], |ctx: &ObjectiveContext<'_, f64>| {
        Ok(vec![objective(ctx.d)])
    })?
    .objective_names(&["f"])?
    .random_input(RandomInput::design(0, Spread::Absolute(SIGMA)))
    .random_input(RandomInput::design(1, Spread::Absolute(SIGMA)));
    Ok((0..3).fold(p, |p, i| p.constraint(constraint(i, family))))
}
