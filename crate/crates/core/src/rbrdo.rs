//! Reliability-based robust design: robust objectives penalized by the
//! inverse-reliability check of every probabilistic constraint, with the
//! reliability index β appended as an extra objective to maximize.

use std::fmt;
use std::sync::Arc;

use crate::error::{check_len, Error, Result};
use crate::optimize::{mode_optimize, penalized_fitness, Evaluator, ModeParams, ModeResult, DEFAULT_PSI};
use crate::pareto::{Bounds, DecisionVector, EvaluatedSolution, ParetoArchive, Sense};
use crate::reliability::{asosl_mpp, AsoslParams, MppResult, PerformanceFunction, RandomVariableSpec};
use crate::robustness::{aggregate, RobustnessSpec, RobustnessStrategy};
use crate::sampling::RngStream;
use crate::scalar::Real;

/// Where the mean of a random input comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeanSource<T> {
    Fixed(T),
    /// The design coordinate with this index.
    Design(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Spread<T> {
    /// Standard deviation.
    Absolute(T),
    /// Coefficient of variation σ/|μ|.
    Relative(T),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomInput<T> {
    pub mean: MeanSource<T>,
    pub spread: Spread<T>,
}

impl<T: Real> RandomInput<T> {
    pub fn fixed(mean: T, spread: Spread<T>) -> Self {
        Self {
            mean: MeanSource::Fixed(mean),
            spread,
        }
    }

    pub fn design(index: usize, spread: Spread<T>) -> Self {
        Self {
            mean: MeanSource::Design(index),
            spread,
        }
    }

    /// Distribution at design point `d`.
    pub fn at(&self, d: &[T]) -> Result<RandomVariableSpec<T>> {
        let mean = match self.mean {
            MeanSource::Fixed(m) => m,
            MeanSource::Design(i) => *d.get(i).ok_or(Error::DimensionMismatch {
                expected: i + 1,
                found: d.len(),
            })?,
        };
        match self.spread {
            Spread::Absolute(s) => RandomVariableSpec::normal(mean, s),
            Spread::Relative(c) => RandomVariableSpec::with_cov(mean, c),
        }
    }
}

/// Where the probabilistic constraints are checked when the objectives are
/// averaged over a neighborhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MppPlacement {
    /// At every neighborhood sample; the penalty is the mean over samples.
    #[default]
    PerSample,
    /// Once, at the nominal design.
    Nominal,
}

/// Inputs handed to the objective function.
#[derive(Debug)]
pub struct ObjectiveContext<'a, T> {
    /// Design point (possibly a perturbed neighborhood sample).
    pub d: &'a [T],
    pub beta: T,
    /// One result per probabilistic constraint, computed at `d`; empty unless
    /// the problem asks for them through [`RbrdoProblem::objective_uses_mpp`].
    pub mpp: &'a [MppResult<T>],
}

type ObjectiveFn<T> = Arc<dyn Fn(&ObjectiveContext<'_, T>) -> Result<Vec<T>> + Send + Sync>;

#[derive(Clone)]
pub struct RbrdoProblem<T> {
    name: String,
    design_bounds: Bounds<T>,
    beta_bounds: (T, T),
    random_inputs: Vec<RandomInput<T>>,
    objective: ObjectiveFn<T>,
    objective_names: Vec<String>,
    senses: Vec<Sense>,
    constraints: Vec<PerformanceFunction<T>>,
    equalities: usize,
    noise_mask: Vec<bool>,
    objective_uses_mpp: bool,
    pub robustness: RobustnessSpec<T>,
    pub asosl: AsoslParams<T>,
    pub psi: T,
    pub placement: MppPlacement,
}

impl<T: fmt::Debug> fmt::Debug for RbrdoProblem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RbrdoProblem")
            .field("name", &self.name)
            .field("design_bounds", &self.design_bounds)
            .field("beta_bounds", &self.beta_bounds)
            .field("senses", &self.senses)
            .field("constraints", &self.constraints)
            .field("robustness", &self.robustness)
            .field("placement", &self.placement)
            .finish()
    }
}

impl<T: Real> RbrdoProblem<T> {
    /// Problem with no random inputs or constraints yet.
    pub fn new<F>(
        name: impl Into<String>,
        design_bounds: Bounds<T>,
        beta_bounds: (T, T),
        senses: Vec<Sense>,
        objective: F,
    ) -> Result<Self>
    where
        F: Fn(&ObjectiveContext<'_, T>) -> Result<Vec<T>> + Send + Sync + 'static,
    {
        let n = design_bounds.dim();
        let (lo, hi) = beta_bounds;
        if !(lo > T::zero() && lo <= hi && hi.is_finite()) {
            return Err(Error::invalid(format!("beta bounds must satisfy 0 < lower <= upper (got {lo}, {hi})")));
        }
        if senses.is_empty() {
            return Err(Error::EmptyInput("objective senses"));
        }
        let names = (1..=senses.len()).map(|i| format!("f{i}")).collect();
        Ok(Self {
            name: name.into(),
            design_bounds,
            beta_bounds,
            random_inputs: Vec::new(),
            objective: Arc::new(objective),
            objective_names: names,
            senses,
            constraints: Vec::new(),
            equalities: 0,
            noise_mask: vec![true; n],
            objective_uses_mpp: false,
            robustness: RobustnessSpec::none(n),
            asosl: AsoslParams::default(),
            psi: T::lit(DEFAULT_PSI),
            placement: MppPlacement::default(),
        })
    }

    pub fn random_input(mut self, input: RandomInput<T>) -> Self {
        self.random_inputs.push(input);
        self
    }

    pub fn constraint(mut self, g: PerformanceFunction<T>) -> Self {
        self.constraints.push(g);
        self
    }

    pub fn objective_names(mut self, names: &[&str]) -> Result<Self> {
        check_len(self.senses.len(), names.len())?;
        self.objective_names = names.iter().map(|s| s.to_string()).collect();
        Ok(self)
    }

    /// Coordinates of `d` that robustness sampling may perturb.
    pub fn noise_mask(mut self, mask: Vec<bool>) -> Result<Self> {
        check_len(self.design_bounds.dim(), mask.len())?;
        self.noise_mask = mask;
        Ok(self)
    }

    /// Makes the MPP of every constraint available to the objective.
    pub fn objective_uses_mpp(mut self) -> Self {
        self.objective_uses_mpp = true;
        self
    }

    /// Declares equality constraints that were not eliminated; such problems are rejected.
    pub fn with_equalities(mut self, count: usize) -> Self {
        self.equalities = count;
        self
    }

    pub fn with_robustness(mut self, spec: RobustnessSpec<T>) -> Result<Self> {
        check_len(self.design_bounds.dim(), spec.delta.len())?;
        spec.validate()?;
        self.robustness = spec;
        Ok(self)
    }

    /// Same strategy and sample count with δ = `level` on every coordinate.
    /// A positive level on a problem without a strategy selects the effective mean.
    pub fn with_delta_level(mut self, level: T) -> Result<Self> {
        let mut spec = self.robustness.clone();
        spec.delta = vec![level; self.design_bounds.dim()];
        if matches!(spec.strategy, RobustnessStrategy::None) && level > T::zero() {
            spec.strategy = RobustnessStrategy::EffectiveMean;
            spec.samples = spec.samples.max(50);
        }
        spec.validate()?;
        self.robustness = spec;
        Ok(self)
    }

    pub fn with_asosl(mut self, params: AsoslParams<T>) -> Result<Self> {
        params.validate()?;
        self.asosl = params;
        Ok(self)
    }

    pub fn with_psi(mut self, psi: T) -> Result<Self> {
        if !(psi > T::zero() && psi.is_finite()) {
            return Err(Error::invalid(format!("penalty coefficient must be > 0 (got {psi})")));
        }
        self.psi = psi;
        Ok(self)
    }

    pub fn with_placement(mut self, placement: MppPlacement) -> Self {
        self.placement = placement;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn design_bounds(&self) -> &Bounds<T> {
        &self.design_bounds
    }

    pub fn beta_bounds(&self) -> (T, T) {
        self.beta_bounds
    }

    pub fn senses(&self) -> &[Sense] {
        &self.senses
    }

    pub fn names(&self) -> &[String] {
        &self.objective_names
    }

    pub fn constraints(&self) -> &[PerformanceFunction<T>] {
        &self.constraints
    }

    pub fn random_inputs(&self) -> &[RandomInput<T>] {
        &self.random_inputs
    }

    /// Checks the parts that the builders cannot check one at a time.
    pub fn validate(&self) -> Result<()> {
        if self.equalities > 0 {
            return Err(Error::UnresolvedEqualities(self.equalities));
        }
        if !self.constraints.is_empty() && self.random_inputs.is_empty() {
            return Err(Error::invalid("probabilistic constraints need at least one random input"));
        }
        let n = self.design_bounds.dim();
        for (i, r) in self.random_inputs.iter().enumerate() {
            if let MeanSource::Design(k) = r.mean {
                if k >= n {
                    return Err(Error::invalid(format!("random input {i} refers to design coordinate {k} of {n}")));
                }
            }
        }
        check_len(n, self.robustness.delta.len())?;
        self.robustness.validate()?;
        self.asosl.validate()
    }

    /// Distributions of the random inputs at `d`.
    pub fn random_vars(&self, d: &[T]) -> Result<Vec<RandomVariableSpec<T>>> {
        self.random_inputs.iter().map(|r| r.at(d)).collect()
    }

    /// MPP search of every constraint at design `d` and radius `beta`.
    pub fn mpp_all(&self, d: &[T], beta: T) -> Result<Vec<MppResult<T>>> {
        let rv = self.random_vars(d)?;
        let params = self.asosl.with_beta(beta);
        self.constraints.iter().map(|g| asosl_mpp(g, &rv, d, &params)).collect()
    }

    /// Raw objective values at `d`.
    pub fn objective_at(&self, d: &[T], beta: T, mpp: &[MppResult<T>]) -> Result<Vec<T>> {
        let out = (self.objective)(&ObjectiveContext { d, beta, mpp })?;
        check_len(self.senses.len(), out.len())?;
        if let Some(i) = out.iter().position(|v| !v.is_finite()) {
            return Err(Error::Model(format!("objective {i} is not finite at {d:?}")));
        }
        Ok(out)
    }

    /// Robustness spec with the noise mask applied.
    fn effective_spec(&self) -> RobustnessSpec<T> {
        let mut spec = self.robustness.clone();
        for (d, &on) in spec.delta.iter_mut().zip(&self.noise_mask) {
            if !on {
                *d = T::zero();
            }
        }
        spec
    }
}

/// Decision vector layout `(d, β)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate<T> {
    pub d: Vec<T>,
    pub beta: T,
}

impl<T: Real> Candidate<T> {
    pub fn new(d: Vec<T>, beta: T) -> Self {
        Self { d, beta }
    }

    /// Splits `(d_1, …, d_n, β)`.
    pub fn from_decision(x: &[T]) -> Result<Self> {
        let (&beta, d) = x.split_last().ok_or(Error::EmptyInput("decision vector"))?;
        Ok(Self { d: d.to_vec(), beta })
    }

    pub fn to_decision(&self) -> Vec<T> {
        let mut x = self.d.clone();
        x.push(self.beta);
        x
    }
}

/// Breakdown of one RBRDO evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct RbrdoEvaluation<T> {
    /// Penalized objectives followed by β.
    pub objectives: Vec<T>,
    /// Robust objectives before the reliability penalty.
    pub robust: Vec<T>,
    /// `Σ_i max(−g_i*, 0)`, averaged over samples under [`MppPlacement::PerSample`].
    pub penalty: T,
    /// `g_i*` at the nominal design.
    pub g_star: Vec<T>,
    pub type2_violation: T,
    /// False when any MPP search stopped without meeting its tolerance.
    pub mpp_converged: bool,
}

impl<T: Real> RbrdoEvaluation<T> {
    pub fn violation(&self) -> T {
        self.penalty + self.type2_violation
    }
}

fn shortfall<T: Real>(mpp: &[MppResult<T>]) -> T {
    mpp.iter().map(|r| (-r.g_star).max(T::zero())).fold(T::zero(), |a, b| a + b)
}

/// Evaluates a candidate: robust objectives, MPP checks at radius β, penalty.
pub fn evaluate_rbrdo<T: Real>(
    problem: &RbrdoProblem<T>,
    candidate: &Candidate<T>,
    rng: &mut RngStream,
) -> Result<RbrdoEvaluation<T>> {
    let d = &candidate.d;
    let beta = candidate.beta;
    check_len(problem.design_bounds.dim(), d.len())?;
    let (lo, hi) = problem.beta_bounds;
    if !(beta >= lo && beta <= hi) {
        return Err(Error::invalid(format!("beta {beta} outside [{lo}, {hi}]")));
    }

    let spec = problem.effective_spec();
    let degenerate = spec.is_degenerate();
    let per_sample = problem.placement == MppPlacement::PerSample && !degenerate;

    let nominal_mpp = problem.mpp_all(d, beta)?;
    let mut converged = nominal_mpp.iter().all(|r| r.converged);
    let nominal_ctx: &[MppResult<T>] = if problem.objective_uses_mpp { &nominal_mpp } else { &[] };
    let nominal = problem.objective_at(d, beta, nominal_ctx)?;

    let mut penalty = shortfall(&nominal_mpp);
    let sample_values = if degenerate {
        vec![nominal.clone()]
    } else {
        let points = spec.neighborhood(d, rng)?;
        let mut values = Vec::with_capacity(points.len());
        let mut total = T::zero();
        for (j, xi) in points.iter().enumerate() {
            let wrap = |e: Error| Error::Sample {
                sample: j,
                source: Box::new(e),
            };
            let mpp = if per_sample || problem.objective_uses_mpp {
                problem.mpp_all(xi, beta).map_err(wrap)?
            } else {
                Vec::new()
            };
            if per_sample {
                total = total + shortfall(&mpp);
                converged &= mpp.iter().all(|r| r.converged);
            }
            let ctx: &[MppResult<T>] = if problem.objective_uses_mpp { &mpp } else { &[] };
            values.push(problem.objective_at(xi, beta, ctx).map_err(wrap)?);
        }
        if per_sample {
            penalty = total / T::from_usize_lossy(points.len());
        }
        values
    };
    if !converged {
        log::debug!("MPP search did not converge at d = {d:?}, beta = {beta}; best iterate used");
    }

    let robust = aggregate(&spec.strategy, Some(&nominal), &sample_values, &problem.senses)?;
    let mut objectives: Vec<T> = robust
        .objectives
        .iter()
        .zip(&problem.senses)
        .map(|(&f, &s)| penalized_fitness(f, penalty, problem.psi, s))
        .collect();
    objectives.push(beta);
    Ok(RbrdoEvaluation {
        objectives,
        robust: robust.objectives,
        penalty,
        g_star: nominal_mpp.iter().map(|r| r.g_star).collect(),
        type2_violation: robust.violation,
        mpp_converged: converged,
    })
}

/// Multi-objective view of a problem: decision `(d, β)`, objectives `(𝓕…, β)`.
#[derive(Debug, Clone)]
pub struct RbrdoEvaluator<T> {
    problem: RbrdoProblem<T>,
    bounds: Bounds<T>,
    senses: Vec<Sense>,
}

impl<T: Real> RbrdoEvaluator<T> {
    pub fn problem(&self) -> &RbrdoProblem<T> {
        &self.problem
    }
}

pub fn build_mo_problem<T: Real>(problem: RbrdoProblem<T>) -> Result<RbrdoEvaluator<T>> {
    problem.validate()?;
    let (lo, hi) = problem.beta_bounds;
    let bounds = problem.design_bounds.extended(lo, hi)?;
    let mut senses = problem.senses.clone();
    senses.push(Sense::Maximize);
    Ok(RbrdoEvaluator {
        problem,
        bounds,
        senses,
    })
}

impl<T: Real> Evaluator<T> for RbrdoEvaluator<T> {
    fn bounds(&self) -> &Bounds<T> {
        &self.bounds
    }

    fn senses(&self) -> &[Sense] {
        &self.senses
    }

    fn evaluate(&self, x: &[T], rng: &mut RngStream) -> Result<EvaluatedSolution<T>> {
        let c = Candidate::from_decision(x)?;
        let e = evaluate_rbrdo(&self.problem, &c, rng)?;
        let v = e.violation();
        Ok(EvaluatedSolution::new(DecisionVector::new(x.to_vec())?, e.objectives, v))
    }
}

/// Single-objective view at a fixed reliability index (the RBDO problem).
#[derive(Debug, Clone)]
pub struct RbdoEvaluator<T> {
    problem: RbrdoProblem<T>,
    beta: T,
}

impl<T: Real> RbdoEvaluator<T> {
    pub fn new(problem: RbrdoProblem<T>, beta: T) -> Result<Self> {
        problem.validate()?;
        if problem.senses.len() != 1 {
            return Err(Error::invalid("fixed-beta search needs exactly one objective"));
        }
        let (lo, hi) = problem.beta_bounds;
        if !(beta > T::zero() && beta.is_finite()) {
            return Err(Error::invalid(format!("beta must be > 0 (got {beta})")));
        }
        if beta < lo || beta > hi {
            log::debug!("fixed beta {beta} lies outside the problem's range [{lo}, {hi}]");
        }
        let mut problem = problem;
        problem.beta_bounds = (beta.min(lo), beta.max(hi));
        Ok(Self { problem, beta })
    }

    pub fn problem(&self) -> &RbrdoProblem<T> {
        &self.problem
    }

    pub fn beta(&self) -> T {
        self.beta
    }
}

impl<T: Real> Evaluator<T> for RbdoEvaluator<T> {
    fn bounds(&self) -> &Bounds<T> {
        &self.problem.design_bounds
    }

    fn senses(&self) -> &[Sense] {
        &self.problem.senses
    }

    fn evaluate(&self, x: &[T], rng: &mut RngStream) -> Result<EvaluatedSolution<T>> {
        let e = evaluate_rbrdo(&self.problem, &Candidate::new(x.to_vec(), self.beta), rng)?;
        let v = e.violation();
        let mut objectives = e.objectives;
        objectives.pop();
        Ok(EvaluatedSolution::new(DecisionVector::new(x.to_vec())?, objectives, v))
    }
}

/// Seed used for the δ level `level` of a sweep started from `seed`.
pub fn level_seed<T: Real>(seed: u64, level: T) -> u64 {
    RngStream::substream(seed, level.to_f64_lossy().to_bits()).next_seed()
}

/// One MODE run per δ level; a failing level does not stop the others.
pub fn sweep_robustness<T: Real>(
    problem: &RbrdoProblem<T>,
    levels: &[T],
    params: &ModeParams,
) -> Vec<(T, Result<ModeResult<T>>)> {
    levels
        .iter()
        .map(|&level| {
            let run = || {
                if !(level >= T::zero() && level.is_finite()) {
                    return Err(Error::invalid(format!("delta level must be finite and >= 0 (got {level})")));
                }
                let eval = build_mo_problem(problem.clone().with_delta_level(level)?)?;
                let mut p = *params;
                p.de.seed = level_seed(params.de.seed, level);
                mode_optimize(&eval, &p)
            };
            (level, run())
        })
        .collect()
}

/// Representative members of a two-objective `(𝓕, β)` archive.
#[derive(Debug, Clone, PartialEq)]
pub struct Compromise<T> {
    /// Best first objective.
    pub best_objective: EvaluatedSolution<T>,
    /// Largest β.
    pub most_reliable: EvaluatedSolution<T>,
    /// Member closest (normalized Euclidean) to the midpoint of the objective ranges.
    pub intermediate: EvaluatedSolution<T>,
}

pub fn compromise<T: Real>(archive: &ParetoArchive<T>) -> Result<Compromise<T>> {
    let members = archive.members();
    if members.is_empty() {
        return Err(Error::EmptyInput("archive"));
    }
    let senses = archive.senses();
    let m = senses.len();
    let pick = |better: &dyn Fn(&EvaluatedSolution<T>, &EvaluatedSolution<T>) -> bool| {
        let mut best = &members[0];
        for s in &members[1..] {
            if better(s, best) {
                best = s;
            }
        }
        best.clone()
    };
    let best_objective = pick(&|a, b| senses[0].better(a.objectives[0], b.objectives[0]));
    let most_reliable = pick(&|a, b| a.objectives[m - 1] > b.objectives[m - 1]);
    let lo: Vec<T> = (0..m).map(|r| members.iter().map(|s| s.objectives[r]).fold(T::infinity(), T::min)).collect();
    let hi: Vec<T> = (0..m).map(|r| members.iter().map(|s| s.objectives[r]).fold(T::neg_infinity(), T::max)).collect();
    let half = T::lit(0.5);
    let dist = |s: &EvaluatedSolution<T>| {
        (0..m)
            .map(|r| {
                let range = hi[r] - lo[r];
                if range > T::zero() {
                    let z = (s.objectives[r] - lo[r]) / range - half;
                    z * z
                } else {
                    T::zero()
                }
            })
            .sum::<T>()
    };
    let intermediate = pick(&|a, b| dist(a) < dist(b));
    Ok(Compromise {
        best_objective,
        most_reliable,
        intermediate,
    })
}
