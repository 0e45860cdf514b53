//! Decision and objective vectors, Pareto dominance and the non-dominated archive.

use crate::error::{check_len, Error, Result};
use crate::scalar::Real;

/// Optimization direction of a single objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    /// Returns true when `a` is strictly better than `b` under this sense.
    #[inline]
    pub fn better<T: Real>(self, a: T, b: T) -> bool {
        match self {
            Sense::Minimize => a < b,
            Sense::Maximize => a > b,
        }
    }

    /// Maps a value to the minimization frame (`x` or `-x`).
    #[inline]
    pub fn to_min<T: Real>(self, x: T) -> T {
        match self {
            Sense::Minimize => x,
            Sense::Maximize => -x,
        }
    }

    pub fn flipped(self) -> Sense {
        match self {
            Sense::Minimize => Sense::Maximize,
            Sense::Maximize => Sense::Minimize,
        }
    }
}

/// Outcome of a pairwise dominance test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    ADominates,
    BDominates,
    NoDominance,
}

/// Axis-aligned box `lower <= x <= upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds<T> {
    lower: Vec<T>,
    upper: Vec<T>,
}

impl<T: Real> Bounds<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::EmptyInput("bounds"));
        }
        check_len(lower.len(), upper.len())?;
        for (i, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite()) || lo > hi {
                return Err(Error::invalid(format!(
                    "bounds[{i}]: lower {lo} / upper {hi} must be finite with lower <= upper"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| lo <= v && v <= hi)
    }

    /// Clamps `x` into the box in place.
    pub fn clamp(&self, x: &mut [T]) {
        for (v, (&lo, &hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.max(lo).min(hi);
        }
    }

    /// Cartesian product with another box (used to append the reliability coordinate).
    pub fn extended(&self, lower: T, upper: T) -> Result<Self> {
        let mut lo = self.lower.clone();
        let mut hi = self.upper.clone();
        lo.push(lower);
        hi.push(upper);
        Self::new(lo, hi)
    }
}

/// Finite-valued decision vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionVector<T>(Vec<T>);

impl<T: Real> DecisionVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("decision[{i}] is not finite")));
        }
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }
}

impl<T> std::ops::Deref for DecisionVector<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.0
    }
}

/// A decision vector with its (selection-ready) objective values and feasibility record.
///
/// `objectives` already carry any constraint penalty; a solution is feasible exactly
/// when `constraint_violation == 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluatedSolution<T> {
    pub decision: DecisionVector<T>,
    pub objectives: Vec<T>,
    pub constraint_violation: T,
}

impl<T: Real> EvaluatedSolution<T> {
    pub fn new(decision: DecisionVector<T>, objectives: Vec<T>, constraint_violation: T) -> Self {
        let constraint_violation = if constraint_violation > T::zero() {
            constraint_violation
        } else {
            T::zero()
        };
        Self {
            decision,
            objectives,
            constraint_violation,
        }
    }

    pub fn feasible(&self) -> bool {
        self.constraint_violation == T::zero()
    }
}

/// Pareto dominance between two objective vectors.
pub fn dominates_objectives<T: Real>(a: &[T], b: &[T], senses: &[Sense]) -> Result<Dominance> {
    check_len(senses.len(), a.len())?;
    check_len(senses.len(), b.len())?;
    let mut a_better = false;
    let mut b_better = false;
    for ((&x, &y), &s) in a.iter().zip(b).zip(senses) {
        if s.better(x, y) {
            a_better = true;
        } else if s.better(y, x) {
            b_better = true;
        }
        if a_better && b_better {
            return Ok(Dominance::NoDominance);
        }
    }
    Ok(match (a_better, b_better) {
        (true, false) => Dominance::ADominates,
        (false, true) => Dominance::BDominates,
        _ => Dominance::NoDominance,
    })
}

/// Pareto dominance between two evaluated solutions.
pub fn dominates<T: Real>(
    a: &EvaluatedSolution<T>,
    b: &EvaluatedSolution<T>,
    senses: &[Sense],
) -> Result<Dominance> {
    dominates_objectives(&a.objectives, &b.objectives, senses)
}

/// Returns the maximal elements of `pop` under dominance, in their original order.
pub fn non_dominated_filter<T: Real>(
    pop: &[EvaluatedSolution<T>],
    senses: &[Sense],
) -> Result<Vec<EvaluatedSolution<T>>> {
    if pop.is_empty() {
        return Err(Error::EmptyInput("population"));
    }
    let mut keep = vec![true; pop.len()];
    for i in 0..pop.len() {
        if !keep[i] {
            continue;
        }
        for j in (i + 1)..pop.len() {
            if !keep[j] {
                continue;
            }
            match dominates(&pop[i], &pop[j], senses)? {
                Dominance::ADominates => keep[j] = false,
                Dominance::BDominates => {
                    keep[i] = false;
                    break;
                }
                Dominance::NoDominance => {}
            }
        }
    }
    Ok(pop
        .iter()
        .zip(keep)
        .filter_map(|(s, k)| k.then(|| s.clone()))
        .collect())
}

/// Mutually non-dominated set of feasible solutions.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoArchive<T> {
    members: Vec<EvaluatedSolution<T>>,
    senses: Vec<Sense>,
}

impl<T: Real> ParetoArchive<T> {
    pub fn new(senses: Vec<Sense>) -> Self {
        Self {
            members: Vec::new(),
            senses,
        }
    }

    /// Builds an archive by inserting every solution of `solutions`.
    pub fn from_solutions<I>(senses: Vec<Sense>, solutions: I) -> Result<Self>
    where
        I: IntoIterator<Item = EvaluatedSolution<T>>,
    {
        let mut archive = Self::new(senses);
        for s in solutions {
            archive.insert(s)?;
        }
        Ok(archive)
    }

    pub fn members(&self) -> &[EvaluatedSolution<T>] {
        &self.members
    }

    pub fn senses(&self) -> &[Sense] {
        &self.senses
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn into_members(self) -> Vec<EvaluatedSolution<T>> {
        self.members
    }

    /// Inserts `s` unless it is infeasible, dominated, or repeats a member's
    /// objective vector exactly; evicts members `s` dominates. Returns whether `s` was added.
    pub fn insert(&mut self, s: EvaluatedSolution<T>) -> Result<bool> {
        check_len(self.senses.len(), s.objectives.len())?;
        if !s.feasible() {
            return Ok(false);
        }
        let mut dominated_by_s = Vec::new();
        for (i, m) in self.members.iter().enumerate() {
            if m.objectives == s.objectives {
                return Ok(false);
            }
            match dominates(m, &s, &self.senses)? {
                Dominance::ADominates => return Ok(false),
                Dominance::BDominates => dominated_by_s.push(i),
                Dominance::NoDominance => {}
            }
        }
        for &i in dominated_by_s.iter().rev() {
            self.members.remove(i);
        }
        self.members.push(s);
        Ok(true)
    }

    /// Inserts every member of `other`.
    pub fn merge(&mut self, other: &ParetoArchive<T>) -> Result<()> {
        for m in &other.members {
            self.insert(m.clone())?;
        }
        Ok(())
    }
}
