//! Most-probable-point search on the β-sphere with an adaptive second-order step length.
//!
//! Each iteration takes a steepest-descent step `u − τ∇G(u)`, with τ found by
//! backtracking below a secant-estimated upper bound, then projects back onto
//! the sphere of radius β. Iteration stops once consecutive iterates are
//! closer than ε.

use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use super::line_search::{backtracking_line_search, second_order_step_bound};
use super::normal::RandomVariableSpec;
use crate::error::{check_len, Error, Result};
use crate::sampling::RngStream;
use crate::scalar::{dot, norm, Real};

type ValueFn<T> = Arc<dyn Fn(&[T], &[T]) -> T + Send + Sync>;
type GradientFn<T> = Arc<dyn Fn(&[T], &[T]) -> Vec<T> + Send + Sync>;

/// Performance function `g(d, x)`: positive means safe, `g ≤ 0` is failure.
///
/// An analytic gradient with respect to `x` may be attached; otherwise the
/// U-space gradient is taken by central differences.
#[derive(Clone)]
pub struct PerformanceFunction<T> {
    name: String,
    value: ValueFn<T>,
    gradient: Option<GradientFn<T>>,
}

impl<T: Real> PerformanceFunction<T> {
    pub fn new<F>(name: impl Into<String>, value: F) -> Self
    where
        F: Fn(&[T], &[T]) -> T + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            value: Arc::new(value),
            gradient: None,
        }
    }

    /// Attaches `∂g/∂x`.
    pub fn with_gradient<F>(mut self, gradient: F) -> Self
    where
        F: Fn(&[T], &[T]) -> Vec<T> + Send + Sync + 'static,
    {
        self.gradient = Some(Arc::new(gradient));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn has_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn value(&self, d: &[T], x: &[T]) -> T {
        (self.value)(d, x)
    }

    pub fn gradient_x(&self, d: &[T], x: &[T]) -> Option<Vec<T>> {
        self.gradient.as_ref().map(|g| g(d, x))
    }

    /// `G(u) = g(d, μ + σ∘u)`.
    pub fn value_u(&self, d: &[T], rv: &[RandomVariableSpec<T>], u: &[T]) -> T {
        self.value(d, &to_x(u, rv))
    }

    /// `∇G(u)`: analytic when available, else central differences.
    pub fn gradient_u(&self, d: &[T], rv: &[RandomVariableSpec<T>], u: &[T]) -> Vec<T> {
        match &self.gradient {
            Some(grad) => grad(d, &to_x(u, rv))
                .into_iter()
                .zip(rv)
                .map(|(g, r)| g * r.std())
                .collect(),
            None => self.fd_gradient_u(d, rv, u),
        }
    }

    /// Central-difference U-space gradient with step `h·max(1, |u_i|)`.
    pub fn fd_gradient_u(&self, d: &[T], rv: &[RandomVariableSpec<T>], u: &[T]) -> Vec<T> {
        let base = if T::epsilon() < T::lit(1e-12) {
            T::lit(1e-6)
        } else {
            T::epsilon().cbrt()
        };
        let mut probe = u.to_vec();
        (0..u.len())
            .map(|i| {
                let h = base * T::one().max(u[i].abs());
                probe[i] = u[i] + h;
                let up = self.value_u(d, rv, &probe);
                probe[i] = u[i] - h;
                let down = self.value_u(d, rv, &probe);
                probe[i] = u[i];
                (up - down) / (h + h)
            })
            .collect()
    }
}

impl<T> fmt::Debug for PerformanceFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PerformanceFunction")
            .field("name", &self.name)
            .field("analytic_gradient", &self.gradient.is_some())
            .finish()
    }
}

fn to_x<T: Real>(u: &[T], rv: &[RandomVariableSpec<T>]) -> Vec<T> {
    u.iter().zip(rv).map(|(&u, r)| r.mean() + r.std() * u).collect()
}

/// Which value of `G` at the end of the previous step enters the step-bound secant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SecantPoint {
    /// `G(u⁽ᵏ⁾ − τd⁽ᵏ⁾)`, the accepted line-search point before projection.
    #[default]
    Ray,
    /// `G(u⁽ᵏ⁺¹⁾)` after projection onto the sphere.
    Sphere,
}

/// Where the iteration starts on the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StartPoint {
    /// `β (1, …, 1) / √n`.
    #[default]
    Diagonal,
    /// Uniform random direction from the given seed.
    Random(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsoslParams<T> {
    /// Target reliability index (sphere radius).
    pub beta_t: T,
    /// Search interval extension δ_η used when the secant bound is not positive.
    pub delta_eta: T,
    /// Armijo constant.
    pub alpha_b: T,
    /// Backtracking shrink factor.
    pub s_b: T,
    /// Stop when `‖u⁽ᵏ⁺¹⁾ − u⁽ᵏ⁾‖ < epsilon`.
    pub epsilon: T,
    pub max_iters: usize,
    pub start: StartPoint,
    pub secant: SecantPoint,
    /// Record one [`TraceRecord`] per iteration.
    pub keep_trace: bool,
}

impl<T: Real> Default for AsoslParams<T> {
    fn default() -> Self {
        Self {
            beta_t: T::lit(3.0),
            delta_eta: T::one(),
            alpha_b: T::lit(1e-4),
            s_b: T::lit(0.5),
            epsilon: T::lit(1e-6),
            max_iters: 200,
            start: StartPoint::Diagonal,
            secant: SecantPoint::Ray,
            keep_trace: false,
        }
    }
}

impl<T: Real> AsoslParams<T> {
    pub fn with_beta(mut self, beta_t: T) -> Self {
        self.beta_t = beta_t;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::invalid(format!("asosl: {what}")));
        if !(self.beta_t > T::zero() && self.beta_t.is_finite()) {
            return bad("beta_t must be > 0");
        }
        if !(self.delta_eta > T::zero()) {
            return bad("delta_eta must be > 0");
        }
        if !(self.alpha_b > T::zero() && self.alpha_b < T::one()) {
            return bad("alpha_b must lie in (0, 1)");
        }
        if !(self.s_b > T::zero() && self.s_b < T::one()) {
            return bad("s_b must lie in (0, 1)");
        }
        if !(self.epsilon > T::zero()) {
            return bad("epsilon must be > 0");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be >= 1");
        }
        Ok(())
    }
}

/// One iteration of the search.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord<T> {
    pub k: usize,
    pub u: Vec<T>,
    pub g: T,
    pub tau: T,
    pub t_bar: T,
    pub error: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MppResult<T> {
    pub u_star: Vec<T>,
    pub x_star: Vec<T>,
    /// `g` at the most probable point; the probabilistic constraint holds iff `g_star > 0`.
    pub g_star: T,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<TraceRecord<T>>,
}

impl<T: Real> MppResult<T> {
    pub fn satisfied(&self) -> bool {
        self.g_star > T::zero()
    }

    /// Writes the trace as comma-separated text: `k,u_1..u_n,G,tau,t_bar,error`.
    pub fn write_trace<W: Write>(&self, mut w: W) -> io::Result<()> {
        let n = self.u_star.len();
        let mut header = vec!["k".to_string()];
        header.extend((1..=n).map(|i| format!("u_{i}")));
        header.extend(["G", "tau", "t_bar", "error"].map(String::from));
        writeln!(w, "{}", header.join(","))?;
        for r in &self.trace {
            let mut row = vec![r.k.to_string()];
            row.extend(r.u.iter().map(|v| v.to_string()));
            row.extend([r.g, r.tau, r.t_bar, r.error].iter().map(|v| v.to_string()));
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

fn project<T: Real>(u: &mut [T], radius: T) -> bool {
    let n = norm(u);
    if !(n > T::zero() && n.is_finite()) {
        return false;
    }
    let scale = radius / n;
    u.iter_mut().for_each(|v| *v = *v * scale);
    true
}

fn start_point<T: Real>(n: usize, params: &AsoslParams<T>) -> Vec<T> {
    let mut u = match params.start {
        StartPoint::Diagonal => vec![T::one(); n],
        StartPoint::Random(seed) => {
            let mut rng = RngStream::new(seed);
            // Box–Muller gives an isotropic direction
            (0..n)
                .map(|_| {
                    let a: f64 = 1.0 - rng.uniform_f64();
                    let b: f64 = rng.uniform_f64();
                    T::lit((-2.0 * a.ln()).sqrt() * (std::f64::consts::TAU * b).cos())
                })
                .collect()
        }
    };
    if !project(&mut u, params.beta_t) {
        u = vec![T::one(); n];
        project(&mut u, params.beta_t);
    }
    u
}

/// Number of consecutive increases of G that trigger a halving of the step cap.
const OSCILLATION_WINDOW: usize = 5;

/// Times an apparent fixed point with an outward gradient is perturbed before it is accepted.
const MAX_KICKS: usize = 3;

/// Deterministic, direction-breaking offset of relative size 1e-2.
fn kick<T: Real>(u: &mut [T], radius: T, round: usize) {
    let n = u.len();
    for (i, v) in u.iter_mut().enumerate() {
        let sign = if (i + round) % 2 == 0 { T::one() } else { -T::one() };
        let w = T::from_usize_lossy(i + 1) / T::from_usize_lossy(n + round);
        *v = *v + radius * T::lit(1e-2) * sign * w;
    }
    project(u, radius);
}

/// Minimizes `G(u) = g(d, μ + σ∘u)` on `‖u‖ = β_t`.
///
/// Without convergence the best iterate seen is returned with `converged = false`.
pub fn asosl_mpp<T: Real>(
    g: &PerformanceFunction<T>,
    rv: &[RandomVariableSpec<T>],
    d: &[T],
    params: &AsoslParams<T>,
) -> Result<MppResult<T>> {
    params.validate()?;
    if rv.is_empty() {
        return Err(Error::EmptyInput("random variables"));
    }
    let n = rv.len();
    let beta = params.beta_t;
    let big_g = |u: &[T]| g.value_u(d, rv, u);

    let mut u = start_point(n, params);
    let mut g_u = big_g(&u);
    let mut grad = g.gradient_u(d, rv, &u);
    check_len(n, grad.len())?;

    let mut trace = Vec::new();
    if params.keep_trace {
        trace.push(TraceRecord {
            k: 0,
            u: u.clone(),
            g: g_u,
            tau: T::zero(),
            t_bar: T::one(),
            error: T::nan(),
        });
    }

    let mut t_bar = T::one();
    let mut cap = T::infinity();
    let mut rises = 0usize;
    let mut best = (u.clone(), g_u);
    let mut converged = false;
    let mut iterations = 0;
    let mut kicks = 0;

    for k in 0..params.max_iters {
        let dd = dot(&grad, &grad);
        if dd < T::lit(1e-30) {
            return Err(Error::GradientVanished {
                norm_sq: dd.to_f64_lossy(),
            });
        }
        let step = backtracking_line_search(&big_g, &u, g_u, &grad, t_bar, params.alpha_b, params.s_b)?;
        let mut next: Vec<T> = u.iter().zip(&grad).map(|(&ui, &di)| ui - step.tau * di).collect();
        if !project(&mut next, beta) {
            log::debug!("asosl: descent step reached the origin at iteration {k}");
            break;
        }
        let g_next = big_g(&next);
        let grad_next = g.gradient_u(d, rv, &next);
        let error = next
            .iter()
            .zip(&u)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum::<T>()
            .sqrt();

        // along the ray the secant sees the curvature of G itself; on the
        // sphere a linear G gives ΔG → 0 and the bound halves every step
        let g_secant = match params.secant {
            SecantPoint::Ray => step.value,
            SecantPoint::Sphere => g_next,
        };
        let mut t_next = second_order_step_bound(g_u, g_secant, &grad, step.tau, params.delta_eta)?;
        if g_next > g_u {
            rises += 1;
            if rises >= OSCILLATION_WINDOW {
                cap = cap.min(t_next) / T::lit(2.0);
                rises = 0;
                log::debug!("asosl: {OSCILLATION_WINDOW} consecutive increases, step cap now {cap}");
            }
        } else {
            rises = 0;
        }
        t_next = t_next.min(cap);

        iterations = k + 1;
        if params.keep_trace {
            trace.push(TraceRecord {
                k: iterations,
                u: next.clone(),
                g: g_next,
                tau: step.tau,
                t_bar: t_next,
                error,
            });
        }
        u = next;
        g_u = g_next;
        grad = grad_next;
        t_bar = t_next;
        if g_u < best.1 {
            best = (u.clone(), g_u);
        }
        if error < params.epsilon {
            // a gradient pointing away from the origin marks the maximum of G
            // on the sphere (the projection maps the step back onto it)
            if dot(&grad, &u) > T::zero() && kicks < MAX_KICKS {
                if n == 1 {
                    // the sphere is {−β, β}: take the antipode if it is lower
                    let flipped = [-u[0]];
                    if big_g(&flipped) >= g_u {
                        converged = true;
                        break;
                    }
                    u = flipped.to_vec();
                } else {
                    kick(&mut u, beta, kicks);
                }
                kicks += 1;
                g_u = big_g(&u);
                grad = g.gradient_u(d, rv, &u);
                t_bar = T::one();
                rises = 0;
                log::debug!("asosl: left a stationary maximum of G (kick {kicks})");
                continue;
            }
            converged = true;
            break;
        }
    }

    let (u_star, g_star) = if converged { (u, g_u) } else { best };
    let x_star = to_x(&u_star, rv);
    Ok(MppResult {
        u_star,
        x_star,
        g_star,
        iterations,
        converged,
        trace,
    })
}
