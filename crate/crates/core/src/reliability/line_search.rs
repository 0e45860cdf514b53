use crate::error::{Error, Result};
use crate::scalar::{dot, Real};

/// Maximum number of step reductions tried by [`backtracking_line_search`].
pub const MAX_BACKTRACKS: usize = 60;

/// Accepted step of a backtracking search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearchStep<T> {
    pub tau: T,
    /// Objective value at `u − tau·d`.
    pub value: T,
    /// False when no trial met the Armijo condition and `tau` is the smallest one tried.
    pub satisfied: bool,
    pub trials: usize,
}

/// Backtracking along `−d` from `u`: returns the largest `τ = t̄·s_bʲ` with
/// `G(u − τd) ≤ G(u) − α_b τ dᵀd`.
pub fn backtracking_line_search<T, G>(
    g: G,
    u: &[T],
    g_u: T,
    d: &[T],
    t_bar: T,
    alpha_b: T,
    s_b: T,
) -> Result<LineSearchStep<T>>
where
    T: Real,
    G: Fn(&[T]) -> T,
{
    if !(t_bar > T::zero()) {
        return Err(Error::invalid(format!("step upper bound must be > 0 (got {t_bar})")));
    }
    let dd = dot(d, d);
    if dd == T::zero() {
        return Err(Error::GradientVanished { norm_sq: 0.0 });
    }
    let mut trial = vec![T::zero(); u.len()];
    let mut tau = t_bar;
    let mut value = g_u;
    for j in 0..=MAX_BACKTRACKS {
        for ((t, &ui), &di) in trial.iter_mut().zip(u).zip(d) {
            *t = ui - tau * di;
        }
        value = g(&trial);
        if value <= g_u - alpha_b * tau * dd {
            return Ok(LineSearchStep {
                tau,
                value,
                satisfied: true,
                trials: j + 1,
            });
        }
        if j < MAX_BACKTRACKS {
            tau = tau * s_b;
        }
    }
    log::debug!("Armijo condition not met after {MAX_BACKTRACKS} reductions; tau = {tau}");
    Ok(LineSearchStep {
        tau,
        value,
        satisfied: false,
        trials: MAX_BACKTRACKS + 1,
    })
}

/// Secant estimate of the next step-length upper bound.
///
/// `t̄ = τ²dᵀd / (2(G_curr − G_prev + τdᵀd))`; when that is not positive the
/// step is extended by `η = (G_prev − G_curr − τdᵀd)/dᵀd + δ_η` and the formula
/// is re-evaluated with `τ + η`.
pub fn second_order_step_bound<T: Real>(
    g_prev: T,
    g_curr: T,
    d_prev: &[T],
    tau_prev: T,
    delta_eta: T,
) -> Result<T> {
    let dd = dot(d_prev, d_prev);
    if dd < T::lit(1e-30) {
        return Err(Error::GradientVanished {
            norm_sq: dd.to_f64_lossy(),
        });
    }
    if !(tau_prev > T::zero()) {
        return Err(Error::invalid(format!("previous step must be > 0 (got {tau_prev})")));
    }
    let bound = |tau: T| tau * tau * dd / (T::lit(2.0) * (g_curr - g_prev + tau * dd));
    let t = bound(tau_prev);
    if t > T::zero() && t.is_finite() {
        return Ok(t);
    }
    let eta = (g_prev - g_curr - tau_prev * dd) / dd + delta_eta;
    let t = bound(tau_prev + eta);
    if t > T::zero() && t.is_finite() {
        Ok(t)
    } else {
        // τ + η = 0 exactly; keep the last accepted step
        Ok(tau_prev)
    }
}
