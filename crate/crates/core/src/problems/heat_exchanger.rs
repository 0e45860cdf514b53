//! Three-stage heat exchanger network: minimize the total area `A₁ + A₂ + A₃`.
//!
//! The reduced problem has `d = (A₁, A₂, A₃, T₁, T₂)`; the constant terms of its
//! three constraints are the random inputs `X₁..X₈`.

use crate::error::Result;
use crate::optimize::ConstrainedProblem;
use crate::pareto::{Bounds, Sense};
use crate::rbrdo::{ObjectiveContext, RandomInput, RbrdoProblem, Spread};
use crate::reliability::PerformanceFunction;

pub const MEANS: [f64; 8] = [2500.0 / 3.0, 300.0, 250000.0 / 3.0, 400.0, 1250.0, 1.25e6, 2500.0, 100.0];
pub const COV: f64 = 0.05;
pub const BETA_RANGE: (f64, f64) = (0.1, 3.0);

pub fn total_area(d: &[f64]) -> f64 {
    d[0] + d[1] + d[2]
}

/// Left-hand sides of the reduced constraints (`≤ 0` feasible) with constants `x`.
pub fn reduced_constraints(d: &[f64], x: &[f64]) -> [f64; 3] {
    let (a1, a2, a3, t1, t2) = (d[0], d[1], d[2], d[3], d[4]);
    [
        a1 * t1 + x[0] * t1 - x[1] * a1 - x[2],
        t2 * a2 - x[3] * a2 - x[4] * (t1 - t2),
        x[5] - x[6] * t2 - x[7] * a3,
    ]
}

/// `∂g_i/∂x` of the reduced constraints.
pub fn reduced_gradient(i: usize, d: &[f64]) -> Vec<f64> {
    let (a1, a2, a3, t1, t2) = (d[0], d[1], d[2], d[3], d[4]);
    let mut g = vec![0.0; 8];
    match i {
        0 => {
            g[0] = t1;
            g[1] = -a1;
            g[2] = -1.0;
        }
        1 => {
            g[3] = -a2;
            g[4] = -(t1 - t2);
        }
        2 => {
            g[5] = 1.0;
            g[6] = -t2;
            g[7] = -a3;
        }
        _ => panic!("heat exchanger has three constraints (asked for {i})"),
    }
    g
}

pub fn reduced_bounds() -> Bounds<f64> {
    Bounds::new(vec![1e2, 1e3, 1e3, 10.0, 10.0], vec![1e4, 1e4, 1e4, 1e3, 1e3]).expect("static bounds")
}

/// Reduced 5-variable deterministic problem at the mean constants.
pub fn deterministic() -> ConstrainedProblem<f64> {
    (0..3).fold(ConstrainedProblem::new(reduced_bounds(), Sense::Minimize, total_area), |p, i| {
        p.inequality(move |d: &[f64]| reduced_constraints(d, &MEANS)[i])
    })
}

/// Full 8-variable form `(A₁, A₂, A₃, T₁, T₂, t₁₂, t₂₂, t₃₂)`.
pub fn full_constraints(z: &[f64]) -> [f64; 6] {
    let (a1, a2, a3, t1, t2, t12, t22, t32) = (z[0], z[1], z[2], z[3], z[4], z[5], z[6], z[7]);
    [
        (t1 + t12) / 400.0 - 1.0,
        (t2 + t22 - t1) / 400.0 - 1.0,
        (t32 - t2) / 100.0 - 1.0,
        a1 * (100.0 - t12) + 2500.0 / 3.0 * t1 - 250000.0 / 3.0,
        a2 * (t1 - t22) - 1250.0 * t1 + 1250.0 * t2,
        a3 * (t2 - t32) - 2500.0 * t2 + 1.25e6,
    ]
}

pub fn full_bounds() -> Bounds<f64> {
    let mut lo = vec![1e2, 1e3, 1e3];
    let mut hi = vec![1e4; 3];
    lo.extend([10.0; 5]);
    hi.extend([1e3; 5]);
    Bounds::new(lo, hi).expect("static bounds")
}

pub fn full_nlp() -> ConstrainedProblem<f64> {
    (0..6).fold(ConstrainedProblem::new(full_bounds(), Sense::Minimize, total_area), |p, i| {
        p.inequality(move |z: &[f64]| full_constraints(z)[i])
    })
}

/// Full-form point with the heat balances active.
pub fn expand(d: &[f64]) -> [f64; 8] {
    let (t1, t2) = (d[3], d[4]);
    [d[0], d[1], d[2], t1, t2, 400.0 - t1, 400.0 + t1 - t2, t2 + 100.0]
}

pub fn constraint(i: usize) -> PerformanceFunction<f64> {
    PerformanceFunction::new(format!("g{}", i + 1), move |d: &[f64], x: &[f64]| -reduced_constraints(d, x)[i])
        .with_gradient(move |d, _x| reduced_gradient(i, d).into_iter().map(|v| -v).collect())
}

/// Decision `(A₁, A₂, A₃, T₁, T₂)`, eight random constants with c.o.v. 0.05,
/// β ∈ [0.1, 3].
pub fn rbrdo() -> Result<RbrdoProblem<f64>> {
    let p = RbrdoProblem::new(
        "heat-exchanger",
        reduced_bounds(),
        BETA_RANGE,
        vec![Sense::Minimize],
        |ctx: &ObjectiveContext<'_, f64>| Ok(vec![total_area(ctx.d)]),
    )?
    .objective_names(&["A_T"])?;
    let p = MEANS
        .iter()
        .fold(p, |p, &m| p.random_input(RandomInput::fixed(m, Spread::Relative(COV))));
    Ok((0..3).fold(p, |p, i| p.constraint(constraint(i))))
}
