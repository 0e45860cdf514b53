//! Differential evolution for single- and multi-objective problems.

mod de;
mod mode;
mod sorting;

use std::io::{self, Write};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{check_len, Error, Result};
use crate::pareto::{Bounds, DecisionVector, EvaluatedSolution, Sense};
use crate::sampling::RngStream;
use crate::scalar::Real;

pub use de::{de_minimize, DeParams, DeResult};
pub use mode::{mode_optimize, offspring_count, ModeParams, ModeResult};
pub use sorting::{crowding_distance, fast_non_dominated_sort};

/// Default penalty coefficient Ψ.
pub const DEFAULT_PSI: f64 = 1e6;

/// Equality constraints count as satisfied when `|h| ≤` this tolerance.
pub const EQUALITY_TOLERANCE: f64 = 1e-8;

/// A problem the optimizers can search.
///
/// `evaluate` returns selection-ready objectives: any constraint penalty is
/// already folded in, and `constraint_violation` records the raw violation so
/// infeasible points can be kept out of archives.
pub trait Evaluator<T: Real>: Sync {
    fn bounds(&self) -> &Bounds<T>;

    fn senses(&self) -> &[Sense];

    fn evaluate(&self, x: &[T], rng: &mut RngStream) -> Result<EvaluatedSolution<T>>;
}

/// `f + Ψ·v` for minimization, `f − Ψ·v` for maximization. Non-finite results
/// saturate at the worst finite value for the sense.
pub fn penalized_fitness<T: Real>(f: T, violation: T, psi: T, sense: Sense) -> T {
    let v = match sense {
        Sense::Minimize => f + psi * violation,
        Sense::Maximize => f - psi * violation,
    };
    if v.is_finite() {
        v
    } else {
        worst_value(sense)
    }
}

pub(crate) fn worst_value<T: Real>(sense: Sense) -> T {
    match sense {
        Sense::Minimize => T::max_value(),
        Sense::Maximize => T::min_value(),
    }
}

/// Placeholder for a point whose evaluation failed: worst objectives, maximal violation.
pub(crate) fn rejected<T: Real>(x: &[T], senses: &[Sense]) -> EvaluatedSolution<T> {
    let decision = DecisionVector::new(x.to_vec()).expect("optimizer points are finite");
    EvaluatedSolution::new(
        decision,
        senses.iter().map(|&s| worst_value(s)).collect(),
        T::max_value(),
    )
}

type ScalarFn<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;

/// Scalar objective with inequality (`g(x) ≤ 0`) and equality (`h(x) = 0`)
/// constraints handled by a static penalty.
#[derive(Clone)]
pub struct ConstrainedProblem<T> {
    bounds: Bounds<T>,
    senses: [Sense; 1],
    objective: ScalarFn<T>,
    inequalities: Vec<ScalarFn<T>>,
    equalities: Vec<ScalarFn<T>>,
    psi: T,
}

impl<T: Real> ConstrainedProblem<T> {
    pub fn new<F>(bounds: Bounds<T>, sense: Sense, objective: F) -> Self
    where
        F: Fn(&[T]) -> T + Send + Sync + 'static,
    {
        Self {
            bounds,
            senses: [sense],
            objective: Arc::new(objective),
            inequalities: Vec::new(),
            equalities: Vec::new(),
            psi: T::lit(DEFAULT_PSI),
        }
    }

    pub fn inequality<F>(mut self, g: F) -> Self
    where
        F: Fn(&[T]) -> T + Send + Sync + 'static,
    {
        self.inequalities.push(Arc::new(g));
        self
    }

    pub fn equality<F>(mut self, h: F) -> Self
    where
        F: Fn(&[T]) -> T + Send + Sync + 'static,
    {
        self.equalities.push(Arc::new(h));
        self
    }

    pub fn with_psi(mut self, psi: T) -> Result<Self> {
        if !(psi > T::zero() && psi.is_finite()) {
            return Err(Error::invalid(format!("penalty coefficient must be > 0 (got {psi})")));
        }
        self.psi = psi;
        Ok(self)
    }

    pub fn sense(&self) -> Sense {
        self.senses[0]
    }

    pub fn objective(&self, x: &[T]) -> T {
        (self.objective)(x)
    }

    /// `Σ max(g_i, 0) + Σ_{|h_j| > tol} |h_j|`; NaN constraint values count as infinite.
    pub fn violation(&self, x: &[T]) -> T {
        let tol = T::lit(EQUALITY_TOLERANCE);
        let ineq = self.inequalities.iter().map(|g| {
            let v = g(x);
            if v.is_nan() {
                T::infinity()
            } else {
                v.max(T::zero())
            }
        });
        let eq = self.equalities.iter().map(|h| {
            let v = h(x).abs();
            if v.is_nan() {
                T::infinity()
            } else if v > tol {
                v
            } else {
                T::zero()
            }
        });
        ineq.chain(eq).fold(T::zero(), |a, b| a + b)
    }
}

impl<T: Real> Evaluator<T> for ConstrainedProblem<T> {
    fn bounds(&self) -> &Bounds<T> {
        &self.bounds
    }

    fn senses(&self) -> &[Sense] {
        &self.senses
    }

    fn evaluate(&self, x: &[T], _rng: &mut RngStream) -> Result<EvaluatedSolution<T>> {
        check_len(self.bounds.dim(), x.len())?;
        let v = self.violation(x);
        let f = self.objective(x);
        let f = if f.is_nan() { worst_value(self.sense()) } else { f };
        let fit = penalized_fitness(f, v, self.psi, self.sense());
        let v = if v.is_finite() { v } else { T::max_value() };
        Ok(EvaluatedSolution::new(DecisionVector::new(x.to_vec())?, vec![fit], v))
    }
}

/// One line of an optimizer history dump.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord<T> {
    pub generation: usize,
    pub evaluations: usize,
    /// Best selection fitness (single objective) or size of the first front.
    pub best: T,
    /// Mean selection fitness (single objective) or feasible count.
    pub mean: T,
}

/// Writes `generation,evaluations,best,mean` rows.
pub fn write_history<T: Real, W: Write>(records: &[GenerationRecord<T>], mut w: W) -> io::Result<()> {
    writeln!(w, "generation,evaluations,best,mean")?;
    for r in records {
        writeln!(w, "{},{},{},{}", r.generation, r.evaluations, r.best, r.mean)?;
    }
    Ok(())
}

/// Evaluates `points` with one derived substream each; results do not depend
/// on `threads`.
pub(crate) fn evaluate_batch<T, E>(
    evaluator: &E,
    points: &[Vec<T>],
    seed: u64,
    generation: usize,
    threads: usize,
) -> Result<Vec<EvaluatedSolution<T>>>
where
    T: Real,
    E: Evaluator<T> + ?Sized,
{
    let eval_one = |(i, x): (usize, &Vec<T>)| -> Result<EvaluatedSolution<T>> {
        let mut rng = RngStream::for_evaluation(seed, generation, i);
        match evaluator.evaluate(x, &mut rng) {
            Ok(s) => Ok(s),
            Err(e) if e.is_usage() => Err(e),
            Err(e) => {
                log::debug!("candidate {i} of generation {generation} rejected: {e}");
                Ok(rejected(x, evaluator.senses()))
            }
        }
    };
    if threads <= 1 {
        return points.iter().enumerate().map(eval_one).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    pool.install(|| points.par_iter().enumerate().map(eval_one).collect())
}

/// DE rand/1/bin trial for `target`: mutant `x_a + F(x_b − x_c)` with distinct
/// donors, binomial crossover with one guaranteed mutant coordinate, clamped
/// to the bounds.
pub(crate) fn rand1bin<T: Real>(
    pop: &[Vec<T>],
    target: usize,
    f: T,
    cr: f64,
    bounds: &Bounds<T>,
    rng: &mut RngStream,
) -> Vec<T> {
    let np = pop.len();
    let pick = |rng: &mut RngStream, taken: &[usize]| loop {
        let k = rng.index(np);
        if !taken.contains(&k) {
            return k;
        }
    };
    let a = pick(rng, &[target]);
    let b = pick(rng, &[target, a]);
    let c = pick(rng, &[target, a, b]);
    let n = bounds.dim();
    let forced = rng.index(n);
    let mut trial: Vec<T> = (0..n)
        .map(|j| {
            if j == forced || rng.uniform_f64() < cr {
                pop[a][j] + f * (pop[b][j] - pop[c][j])
            } else {
                pop[target][j]
            }
        })
        .collect();
    bounds.clamp(&mut trial);
    trial
}

/// Latin Hypercube initial population scaled to the bounds.
pub(crate) fn initial_population<T: Real>(np: usize, bounds: &Bounds<T>, rng: &mut RngStream) -> Result<Vec<Vec<T>>> {
    let unit = crate::sampling::latin_hypercube::<T>(np, bounds.dim(), rng)?;
    Ok(unit
        .into_iter()
        .map(|row| {
            let mut x: Vec<T> = row
                .into_iter()
                .enumerate()
                .map(|(j, q)| bounds.lower()[j] + (bounds.upper()[j] - bounds.lower()[j]) * q)
                .collect();
            bounds.clamp(&mut x);
            x
        })
        .collect())
}
