//! MODE-like multi-objective DE.
//!
//! Variation is DE rand/1/bin; survival is by non-dominated rank and crowding
//! distance over the parent + offspring pool. The offspring count starts at
//! `R·NP` and shrinks by the reduction factor `r` every generation down to
//! `NP`, which approximates the pseudo-front/reduction mechanics of MODE.

use super::de::DeParams;
use super::sorting::{crowding_distance, fast_non_dominated_sort};
use super::{evaluate_batch, initial_population, rand1bin, Evaluator, GenerationRecord};
use crate::error::{Error, Result};
use crate::pareto::{EvaluatedSolution, ParetoArchive};
use crate::sampling::RngStream;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    pub de: DeParams,
    /// Reduction parameter r in (0, 1].
    pub r: f64,
    /// Number of pseudo-fronts R.
    pub pseudo_fronts: usize,
}

impl Default for ModeParams {
    fn default() -> Self {
        Self {
            de: DeParams {
                generations: 500,
                ..DeParams::default()
            },
            r: 0.9,
            pseudo_fronts: 10,
        }
    }
}

impl ModeParams {
    pub fn validate(&self) -> Result<()> {
        self.de.validate()?;
        if !(self.r > 0.0 && self.r <= 1.0) {
            return Err(Error::invalid(format!("reduction parameter r must lie in (0, 1] (got {})", self.r)));
        }
        if self.pseudo_fronts == 0 {
            return Err(Error::invalid("number of pseudo-fronts R must be >= 1"));
        }
        Ok(())
    }
}

/// Offspring produced in `generation` (1-based): `max(NP, round(R·NP·r^g))`.
pub fn offspring_count(generation: usize, params: &ModeParams) -> usize {
    let np = params.de.np;
    let start = (params.pseudo_fronts * np) as f64;
    let shrunk = (start * params.r.powi(generation.min(i32::MAX as usize) as i32)).round();
    np.max(shrunk as usize)
}

#[derive(Debug, Clone)]
pub struct ModeResult<T> {
    /// Feasible non-dominated members of the final population.
    pub archive: ParetoArchive<T>,
    pub population: Vec<EvaluatedSolution<T>>,
    /// `best` holds the size of the first front, `mean` the feasible count.
    pub history: Vec<GenerationRecord<T>>,
    pub evaluations: usize,
}

fn select<T: Real>(pool: &[EvaluatedSolution<T>], np: usize, senses: &[crate::pareto::Sense]) -> Result<Vec<usize>> {
    let mut chosen = Vec::with_capacity(np);
    for front in fast_non_dominated_sort(pool, senses)? {
        if chosen.len() + front.len() <= np {
            chosen.extend(front);
            if chosen.len() == np {
                break;
            }
            continue;
        }
        let members: Vec<EvaluatedSolution<T>> = front.iter().map(|&i| pool[i].clone()).collect();
        let dist = crowding_distance(&members, senses)?;
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.sort_by(|&a, &b| {
            dist[b]
                .partial_cmp(&dist[a])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(front[a].cmp(&front[b]))
        });
        chosen.extend(order.into_iter().take(np - chosen.len()).map(|k| front[k]));
        break;
    }
    Ok(chosen)
}

fn record<T: Real>(
    generation: usize,
    evaluations: usize,
    pop: &[EvaluatedSolution<T>],
    senses: &[crate::pareto::Sense],
) -> Result<GenerationRecord<T>> {
    let first = fast_non_dominated_sort(pop, senses)?[0].len();
    let feasible = pop.iter().filter(|s| s.feasible()).count();
    Ok(GenerationRecord {
        generation,
        evaluations,
        best: T::from_usize_lossy(first),
        mean: T::from_usize_lossy(feasible),
    })
}

pub fn mode_optimize<T, E>(evaluator: &E, params: &ModeParams) -> Result<ModeResult<T>>
where
    T: Real,
    E: Evaluator<T> + ?Sized,
{
    params.validate()?;
    let senses = evaluator.senses().to_vec();
    if senses.len() < 2 {
        return Err(Error::invalid(format!(
            "multi-objective search needs >= 2 objectives (got {})",
            senses.len()
        )));
    }
    let de = &params.de;
    let bounds = evaluator.bounds();
    let f = T::lit(de.f);

    let mut driver = RngStream::new(de.seed);
    let mut xs = initial_population(de.np, bounds, &mut driver)?;
    let mut pop = evaluate_batch(evaluator, &xs, de.seed, 0, de.threads)?;
    let mut evaluations = pop.len();
    let mut history = vec![record(0, evaluations, &pop, &senses)?];

    for generation in 1..=de.generations {
        let count = offspring_count(generation, params);
        let trials: Vec<Vec<T>> = (0..count)
            .map(|k| rand1bin(&xs, k % de.np, f, de.cr, bounds, &mut driver))
            .collect();
        let offspring = evaluate_batch(evaluator, &trials, de.seed, generation, de.threads)?;
        evaluations += offspring.len();

        let mut pool_x = std::mem::take(&mut xs);
        pool_x.extend(trials);
        let mut pool = std::mem::take(&mut pop);
        pool.extend(offspring);
        let keep = select(&pool, de.np, &senses)?;
        xs = keep.iter().map(|&i| pool_x[i].clone()).collect();
        pop = keep.iter().map(|&i| pool[i].clone()).collect();
        history.push(record(generation, evaluations, &pop, &senses)?);
    }

    let archive = ParetoArchive::from_solutions(senses, pop.iter().filter(|s| s.feasible()).cloned())?;
    Ok(ModeResult {
        archive,
        population: pop,
        history,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pareto::{Bounds, DecisionVector, Sense};
    use crate::sampling::RngStream;

    struct Schaffer {
        bounds: Bounds<f64>,
    }

    impl Evaluator<f64> for Schaffer {
        fn bounds(&self) -> &Bounds<f64> {
            &self.bounds
        }
        fn senses(&self) -> &[Sense] {
            &[Sense::Minimize, Sense::Minimize]
        }
        fn evaluate(&self, x: &[f64], _rng: &mut RngStream) -> Result<EvaluatedSolution<f64>> {
            let v = x[0];
            Ok(EvaluatedSolution::new(
                DecisionVector::new(x.to_vec())?,
                vec![v * v, (v - 2.0).powi(2)],
                0.0,
            ))
        }
    }

    #[test]
    fn offspring_schedule() {
        let p = ModeParams::default();
        assert_eq!(offspring_count(1, &p), 450);
        assert_eq!(offspring_count(2, &p), 405);
        assert_eq!(offspring_count(100, &p), 50);
    }

    #[test]
    fn schaffer_front_spans_endpoints() {
        let prob = Schaffer {
            bounds: Bounds::new(vec![-5.0], vec![5.0]).unwrap(),
        };
        let r = mode_optimize(&prob, &ModeParams::default()).unwrap();
        let m = r.archive.members();
        assert!(m.len() >= 30);
        let near = |a: f64, b: f64| m.iter().any(|s| (s.objectives[0] - a).abs() < 0.05 && (s.objectives[1] - b).abs() < 0.05);
        assert!(near(0.0, 4.0) && near(4.0, 0.0));
        assert!(m.iter().all(|s| (-1e-9..=2.0 + 1e-9).contains(&s.decision[0])));
    }

    #[test]
    fn rejects_single_objective() {
        let b = Bounds::new(vec![0.0], vec![1.0]).unwrap();
        let p = crate::optimize::ConstrainedProblem::new(b, Sense::Minimize, |x: &[f64]| x[0]);
        assert!(mode_optimize(&p, &ModeParams::default()).unwrap_err().is_usage());
    }
}
