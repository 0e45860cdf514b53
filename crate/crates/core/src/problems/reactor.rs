//! Two CSTRs in series with `A → B → C`: maximize the outlet concentration of B
//! under a cost bound `√V₁ + √V₂ ≤ 4`.
//!
//! The reduced form eliminates the four mass balances and keeps
//! `d = (c_A1, c_A2)`; the rate constants `k₁..k₄` are the random inputs.

use crate::error::Result;
use crate::optimize::ConstrainedProblem;
use crate::pareto::{Bounds, Sense};
use crate::rbrdo::{ObjectiveContext, RandomInput, RbrdoProblem, Spread};
use crate::reliability::PerformanceFunction;

pub const RATES: [f64; 4] = [0.09755988, 0.09658428, 0.0391908, 0.03527172];
pub const COV: f64 = 0.15;
pub const BETA_RANGE: (f64, f64) = (0.1, 5.0);
/// Slope of the constraint extension for `c_A2 > c_A1`.
pub const GUARD: f64 = 1e6;
/// Feed concentration c_A0.
pub const FEED: f64 = 1.0;

/// Outlet concentration of B in terms of `(c_A1, c_A2)` and rates `k`.
pub fn objective(d: &[f64], k: &[f64]) -> f64 {
    let (d1, d2) = (d[0], d[1]);
    let y1 = k[0] * d1;
    let y2 = k[1] * d2;
    let p = y1 + k[2] * (1.0 - d1);
    y2 * (y1 * (1.0 - d1) - p * (d2 - d1)) / (p * (y2 + k[3] * (d1 - d2)))
}

fn radicands(d: &[f64], k: &[f64]) -> (f64, f64) {
    let (d1, d2) = (d[0], d[1]);
    ((1.0 - d1) / (k[0] * d1), (d1 - d2) / (k[1] * d2))
}

/// `√((1−d₁)/(k₁d₁)) + √((d₁−d₂)/(k₂d₂)) − 4` (`≤ 0` feasible). Negative
/// radicands contribute zero to the root and `GUARD` times their magnitude
/// (in concentration units) instead, so the value stays finite and continuous.
pub fn cost_constraint(d: &[f64], k: &[f64]) -> f64 {
    let (a, b) = radicands(d, k);
    let over = (d[1] - d[0]).max(0.0) + (d[0] - 1.0).max(0.0);
    a.max(0.0).sqrt() + b.max(0.0).sqrt() - 4.0 + GUARD * over
}

/// `∂/∂k` of [`cost_constraint`].
pub fn cost_gradient(d: &[f64], k: &[f64]) -> Vec<f64> {
    let (a, b) = radicands(d, k);
    vec![
        -a.max(0.0).sqrt() / (2.0 * k[0]),
        -b.max(0.0).sqrt() / (2.0 * k[1]),
        0.0,
        0.0,
    ]
}

pub fn reduced_bounds() -> Bounds<f64> {
    Bounds::new(vec![1e-5, 1e-5], vec![1.0, 1.0]).expect("static bounds")
}

/// Reduced deterministic problem at the mean rates.
pub fn deterministic() -> ConstrainedProblem<f64> {
    ConstrainedProblem::new(reduced_bounds(), Sense::Maximize, |d: &[f64]| objective(d, &RATES))
        .inequality(|d: &[f64]| cost_constraint(d, &RATES))
}

/// Full state `(c_A1, c_A2, c_B1, c_B2, V₁, V₂)` solving the mass balances.
pub fn full_state(d: &[f64], k: &[f64]) -> [f64; 6] {
    let (a1, a2) = (d[0], d[1]);
    let v1 = (FEED - a1) / (k[0] * a1);
    let v2 = (a1 - a2) / (k[1] * a2);
    let b1 = (FEED - a1) / (1.0 + k[2] * v1);
    let b2 = (b1 + a1 - a2) / (1.0 + k[3] * v2);
    [a1, a2, b1, b2, v1, v2]
}

/// Mass balance residuals of the full form.
pub fn mass_balances(z: &[f64], k: &[f64]) -> [f64; 4] {
    let (a1, a2, b1, b2, v1, v2) = (z[0], z[1], z[2], z[3], z[4], z[5]);
    [
        a1 - FEED + k[0] * a1 * v1,
        a2 - a1 + k[1] * a2 * v2,
        b1 + a1 - FEED + k[2] * b1 * v1,
        b2 - b1 + a2 - a1 + k[3] * b2 * v2,
    ]
}

pub fn full_bounds() -> Bounds<f64> {
    Bounds::new(vec![0.0; 6], vec![1.0, 1.0, 1.0, 1.0, 16.0, 16.0]).expect("static bounds")
}

/// Full 6-variable form with the four mass balances as equalities.
pub fn full_nlp() -> ConstrainedProblem<f64> {
    let p = ConstrainedProblem::new(full_bounds(), Sense::Maximize, |z: &[f64]| z[3])
        .inequality(|z: &[f64]| z[4].sqrt() + z[5].sqrt() - 4.0);
    (0..4).fold(p, |p, i| p.equality(move |z: &[f64]| mass_balances(z, &RATES)[i]))
}

pub fn constraint() -> PerformanceFunction<f64> {
    PerformanceFunction::new("g1", |d: &[f64], x: &[f64]| -cost_constraint(d, x))
        .with_gradient(|d, x| cost_gradient(d, x).into_iter().map(|v| -v).collect())
}

/// Decision `(c_A1, c_A2)`, random rates with c.o.v. 0.15, β ∈ [0.1, 5]; the
/// objective is evaluated at the mean rates.
pub fn rbrdo() -> Result<RbrdoProblem<f64>> {
    let p = RbrdoProblem::new(
        "reactor",
        reduced_bounds(),
        BETA_RANGE,
        vec![Sense::Maximize],
        |ctx: &ObjectiveContext<'_, f64>| Ok(vec![objective(ctx.d, &RATES)]),
    )?
    .objective_names(&["f"])?;
    let p = RATES
        .iter()
        .fold(p, |p, &m| p.random_input(RandomInput::fixed(m, Spread::Relative(COV))));
    Ok(p.constraint(constraint()))
}
