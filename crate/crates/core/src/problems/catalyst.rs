//! Catalyst mixing in a tubular reactor with a three-segment control profile.
//!
//! `y₁' = v(10y₂ − y₁)`, `y₂' = v(y₁ − 10y₂) − (1 − v)y₂`, `y(0) = (1, 0)`,
//! and the yield `1 − y₁(1) − y₂(1)` is maximized.

use crate::error::{Error, Result};
use crate::optimize::ConstrainedProblem;
use crate::pareto::{Bounds, Sense};
use crate::rbrdo::{ObjectiveContext, RandomInput, RbrdoProblem, Spread};
use crate::reliability::PerformanceFunction;

/// Default RK4 step.
pub const STEP: f64 = 1e-3;
pub const COV: f64 = 0.1;
pub const BETA_RANGE: (f64, f64) = (0.1, 5.0);
/// Lower bound on the control means (the means must stay positive).
pub const MIN_MEAN: f64 = 1e-6;
/// Smallest admissible second switch time above 0.5.
pub const SECOND_SWITCH_FLOOR: f64 = 0.5 + 1e-12;

/// Piecewise-constant control: `values[k]` on `(t_k, t_{k+1}]` with
/// `t₀ = 0`, `t₃ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalystControl {
    pub values: [f64; 3],
    pub switches: [f64; 2],
}

impl CatalystControl {
    pub fn new(values: [f64; 3], switches: [f64; 2]) -> Result<Self> {
        let [t1, t2] = switches;
        if !(0.0..=0.5).contains(&t1) || !(t2 > 0.5 && t2 <= 1.0) {
            return Err(Error::invalid(format!(
                "switch times must satisfy 0 <= t1 <= 0.5 < t2 <= 1 (got {t1}, {t2})"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("control values must be finite"));
        }
        Ok(Self { values, switches })
    }

    /// `(start, end, value)` of each segment.
    pub fn segments(&self) -> [(f64, f64, f64); 3] {
        let [t1, t2] = self.switches;
        [
            (0.0, t1, self.values[0]),
            (t1, t2, self.values[1]),
            (t2, 1.0, self.values[2]),
        ]
    }
}

fn rhs(v: f64, y: [f64; 2]) -> [f64; 2] {
    [v * (10.0 * y[1] - y[0]), v * (y[0] - 10.0 * y[1]) - (1.0 - v) * y[1]]
}

/// Classical RK4 with `ceil(len/h)` equal steps per segment.
pub fn simulate_rk4(control: &CatalystControl, h: f64) -> [f64; 2] {
    let mut y = [1.0, 0.0];
    for (a, b, v) in control.segments() {
        let len = b - a;
        if len <= 0.0 {
            continue;
        }
        let n = (len / h).ceil().max(1.0) as usize;
        let dt = len / n as f64;
        for _ in 0..n {
            let k1 = rhs(v, y);
            let k2 = rhs(v, [y[0] + 0.5 * dt * k1[0], y[1] + 0.5 * dt * k1[1]]);
            let k3 = rhs(v, [y[0] + 0.5 * dt * k2[0], y[1] + 0.5 * dt * k2[1]]);
            let k4 = rhs(v, [y[0] + dt * k3[0], y[1] + dt * k3[1]]);
            for i in 0..2 {
                y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
    }
    y
}

/// `(y₁(1), y₂(1))` by RK4 at the default step.
pub fn simulate(control: &CatalystControl) -> [f64; 2] {
    simulate_rk4(control, STEP)
}

/// Exact propagation: each segment is linear time-invariant, and the 2×2
/// system matrix always has two distinct real eigenvalues.
pub fn simulate_exact(control: &CatalystControl) -> [f64; 2] {
    let mut y = [1.0, 0.0];
    for (a, b, v) in control.segments() {
        let t = b - a;
        if t <= 0.0 {
            continue;
        }
        let m = [[-v, 10.0 * v], [v, -10.0 * v - (1.0 - v)]];
        let s = 0.5 * (m[0][0] + m[1][1]);
        let p = 0.5 * (m[0][0] - m[1][1]);
        let q = (p * p + m[0][1] * m[1][0]).sqrt();
        // e^{Mt} = e^{st} (cosh(qt) I + sinh(qt)/q (M − sI))
        let c = (q * t).cosh();
        let sh = if q > 0.0 { (q * t).sinh() / q } else { t };
        let e = (s * t).exp();
        let n = [[m[0][0] - s, m[0][1]], [m[1][0], m[1][1] - s]];
        y = [
            e * (c * y[0] + sh * (n[0][0] * y[0] + n[0][1] * y[1])),
            e * (c * y[1] + sh * (n[1][0] * y[0] + n[1][1] * y[1])),
        ];
    }
    y
}

pub fn yield_of(y: [f64; 2]) -> f64 {
    1.0 - y[0] - y[1]
}

/// Yield from `(v₀, v₁, v₂, t₁, t₂)`; invalid switch times give NaN.
pub fn objective(z: &[f64]) -> f64 {
    match CatalystControl::new([z[0], z[1], z[2]], [z[3], z[4]]) {
        Ok(c) => yield_of(simulate(&c)),
        Err(_) => f64::NAN,
    }
}

/// Where the control values fed to the simulator come from in the
/// uncertain problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ControlSource {
    /// The MPP value of each control (the outcome of the inverse reliability analysis).
    #[default]
    Mpp,
    /// The control means.
    Mean,
}

impl ControlSource {
    pub fn name(self) -> &'static str {
        match self {
            Self::Mpp => "mpp",
            Self::Mean => "mean",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::Mpp, Self::Mean].into_iter().find(|c| c.name() == s)
    }
}

pub fn deterministic_bounds() -> Bounds<f64> {
    Bounds::new(vec![0.0, 0.0, 0.0, 0.0, SECOND_SWITCH_FLOOR], vec![1.0, 1.0, 1.0, 0.5, 1.0]).expect("static bounds")
}

/// Deterministic problem over `(v₀, v₁, v₂, t₁, t₂)`.
pub fn deterministic() -> ConstrainedProblem<f64> {
    ConstrainedProblem::new(deterministic_bounds(), Sense::Maximize, objective)
}

pub fn rbrdo_bounds() -> Bounds<f64> {
    Bounds::new(
        vec![MIN_MEAN, MIN_MEAN, MIN_MEAN, 0.0, SECOND_SWITCH_FLOOR],
        vec![1.0, 1.0, 1.0, 0.5, 1.0],
    )
    .expect("static bounds")
}

/// `g_i(X) = X_i`.
pub fn constraint(i: usize) -> PerformanceFunction<f64> {
    PerformanceFunction::new(format!("g{}", i + 1), move |_d: &[f64], x: &[f64]| x[i]).with_gradient(move |_d, x| {
        let mut g = vec![0.0; x.len()];
        g[i] = 1.0;
        g
    })
}

/// Decision `(μ₀, μ₁, μ₂, t₁, t₂)`, controls `X_i ~ N(μ_i, (0.1μ_i)²)`,
/// β ∈ [0.1, 5]; robustness noise touches the means only.
pub fn rbrdo(source: ControlSource) -> Result<RbrdoProblem<f64>> {
    let p = RbrdoProblem::new(
        "catalyst",
        rbrdo_bounds(),
        BETA_RANGE,
        vec![Sense::Maximize],
        move |ctx: &ObjectiveContext<'_, f64>| {
            let d = ctx.d;
            let values = match source {
                ControlSource::Mean => [d[0], d[1], d[2]],
                ControlSource::Mpp => {
                    let x = |i: usize| ctx.mpp[i].x_star[i];
                    [x(0), x(1), x(2)]
                }
            };
            let c = CatalystControl::new(values, [d[3], d[4]])?;
            Ok(vec![yield_of(simulate(&c))])
        },
    )?
    .objective_names(&["f"])?
    .noise_mask(vec![true, true, true, false, false])?;
    let p = (0..3).fold(p, |p, i| {
        p.random_input(RandomInput::design(i, Spread::Relative(COV)))
            .constraint(constraint(i))
    });
    Ok(match source {
        ControlSource::Mpp => p.objective_uses_mpp(),
        ControlSource::Mean => p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_control_freezes_state() {
        let c = CatalystControl::new([0.0; 3], [0.2, 0.8]).unwrap();
        let y = simulate(&c);
        assert_eq!(y[0], 1.0);
        assert_eq!(yield_of(y), 0.0);
        let e = simulate_exact(&c);
        assert!((e[0] - 1.0).abs() < 1e-15 && e[1] == 0.0);
    }

    #[test]
    fn switch_times_validated() {
        assert!(CatalystControl::new([1.0; 3], [0.6, 0.8]).is_err());
        assert!(CatalystControl::new([1.0; 3], [0.2, 0.5]).is_err());
        assert!(objective(&[1.0, 0.2, 0.0, 0.1, 0.5]).is_nan());
    }

    #[test]
    fn mass_is_lost_only_to_product() {
        let c = CatalystControl::new([1.0, 0.3, 0.1], [0.15, 0.7]).unwrap();
        let y = simulate_exact(&c);
        let f = yield_of(y);
        assert!(f > 0.0 && f < 1.0 && y[0] > 0.0 && y[1] > 0.0);
    }
}
