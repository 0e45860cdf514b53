use super::{evaluate_batch, initial_population, rand1bin, Evaluator, GenerationRecord};
use crate::error::{Error, Result};
use crate::pareto::EvaluatedSolution;
use crate::sampling::RngStream;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeParams {
    /// Amplification factor F.
    pub f: f64,
    /// Crossover probability CR.
    pub cr: f64,
    /// Population size NP.
    pub np: usize,
    pub generations: usize,
    pub seed: u64,
    /// Worker threads for candidate evaluation; results are identical for any value.
    pub threads: usize,
}

impl Default for DeParams {
    fn default() -> Self {
        Self {
            f: 0.5,
            cr: 0.8,
            np: 50,
            generations: 100,
            seed: 1,
            threads: 1,
        }
    }
}

impl DeParams {
    pub fn validate(&self) -> Result<()> {
        if self.np < 4 {
            return Err(Error::invalid(format!("DE needs NP >= 4 (got {})", self.np)));
        }
        if !(self.f > 0.0 && self.f.is_finite()) {
            return Err(Error::invalid(format!("DE amplification F must be > 0 (got {})", self.f)));
        }
        if !(0.0..=1.0).contains(&self.cr) {
            return Err(Error::invalid(format!("DE crossover CR must lie in [0, 1] (got {})", self.cr)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct DeResult<T> {
    pub best: EvaluatedSolution<T>,
    pub population: Vec<EvaluatedSolution<T>>,
    pub history: Vec<GenerationRecord<T>>,
    pub evaluations: usize,
}

/// Classic DE rand/1/bin on the first objective (in its own sense).
pub fn de_minimize<T, E>(evaluator: &E, params: &DeParams) -> Result<DeResult<T>>
where
    T: Real,
    E: Evaluator<T> + ?Sized,
{
    params.validate()?;
    let sense = *evaluator
        .senses()
        .first()
        .ok_or(Error::EmptyInput("objective senses"))?;
    let fitness = |s: &EvaluatedSolution<T>| sense.to_min(s.objectives[0]);
    let bounds = evaluator.bounds();
    let f = T::lit(params.f);

    let mut driver = RngStream::new(params.seed);
    let mut xs = initial_population(params.np, bounds, &mut driver)?;
    let mut pop = evaluate_batch(evaluator, &xs, params.seed, 0, params.threads)?;
    let mut evaluations = pop.len();
    let mut history = Vec::with_capacity(params.generations + 1);
    let record = |generation: usize, evaluations: usize, pop: &[EvaluatedSolution<T>]| {
        let fits: Vec<T> = pop.iter().map(fitness).collect();
        let best = fits.iter().copied().fold(T::infinity(), T::min);
        let mean = fits.iter().copied().sum::<T>() / T::from_usize_lossy(fits.len());
        GenerationRecord {
            generation,
            evaluations,
            best: sense.to_min(best),
            mean: sense.to_min(mean),
        }
    };
    history.push(record(0, evaluations, &pop));

    for generation in 1..=params.generations {
        let trials: Vec<Vec<T>> = (0..params.np)
            .map(|i| rand1bin(&xs, i, f, params.cr, bounds, &mut driver))
            .collect();
        let evaluated = evaluate_batch(evaluator, &trials, params.seed, generation, params.threads)?;
        evaluations += evaluated.len();
        for (i, (trial, sol)) in trials.into_iter().zip(evaluated).enumerate() {
            if fitness(&sol) <= fitness(&pop[i]) {
                xs[i] = trial;
                pop[i] = sol;
            }
        }
        history.push(record(generation, evaluations, &pop));
    }

    let best = pop
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| {
            fitness(a)
                .partial_cmp(&fitness(b))
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(i.cmp(j))
        })
        .map(|(_, s)| s.clone())
        .expect("population is nonempty");
    Ok(DeResult {
        best,
        population: pop,
        history,
        evaluations,
    })
}
