//! Robust counterparts of an objective vector over a δ-neighborhood.
//!
//! Three strategies are available: the effective mean (objectives replaced by
//! their neighborhood average), the Type II cut (nominal objectives, with a
//! feasibility limit on the normalized deviation) and the penalty-based form
//! (nominal objectives worsened by their mean relative deviation).

use crate::error::{check_len, Error, Result};
use crate::pareto::Sense;
use crate::sampling::{neighborhood_samples, NeighborhoodSpec, RngStream, SamplingScheme};
use crate::scalar::{norm, Real};

/// Denominators below this magnitude raise [`Error::DivisionHazard`].
pub const DIVISION_FLOOR: f64 = 1e-12;

/// How the perturbed objective vector of the Type II cut is formed from the samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregator {
    #[default]
    Mean,
    /// Per objective, the worst sample value with respect to its sense.
    Worst,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RobustnessStrategy<T> {
    /// Nominal objectives, no sampling.
    None,
    EffectiveMean,
    TypeII { eta: T, aggregator: Aggregator },
    PenaltyBased,
}

impl<T> RobustnessStrategy<T> {
    pub fn name(&self) -> &'static str {
        match self {
            RobustnessStrategy::None => "none",
            RobustnessStrategy::EffectiveMean => "effective-mean",
            RobustnessStrategy::TypeII { .. } => "type-ii",
            RobustnessStrategy::PenaltyBased => "penalty",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessSpec<T> {
    pub strategy: RobustnessStrategy<T>,
    /// Relative half-widths, one per decision coordinate.
    pub delta: Vec<T>,
    /// Neighborhood sample count M.
    pub samples: usize,
    pub scheme: SamplingScheme,
}

impl<T: Real> RobustnessSpec<T> {
    pub fn new(strategy: RobustnessStrategy<T>, delta: Vec<T>, samples: usize) -> Result<Self> {
        let spec = Self {
            strategy,
            delta,
            samples,
            scheme: SamplingScheme::LatinHypercube,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// No robustness treatment for an `n`-dimensional decision vector.
    pub fn none(n: usize) -> Self {
        Self {
            strategy: RobustnessStrategy::None,
            delta: vec![T::zero(); n],
            samples: 1,
            scheme: SamplingScheme::LatinHypercube,
        }
    }

    /// Effective mean with the same δ on every coordinate.
    pub fn effective_mean(n: usize, delta: T, samples: usize) -> Result<Self> {
        Self::new(RobustnessStrategy::EffectiveMean, vec![delta; n], samples)
    }

    pub fn with_scheme(mut self, scheme: SamplingScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(i) = self.delta.iter().position(|d| !(*d >= T::zero() && d.is_finite())) {
            return Err(Error::invalid(format!("delta[{i}] must be finite and >= 0")));
        }
        if !matches!(self.strategy, RobustnessStrategy::None) && self.samples == 0 {
            return Err(Error::invalid("robustness sample count M must be >= 1"));
        }
        if let RobustnessStrategy::TypeII { eta, .. } = self.strategy {
            if !(eta > T::zero() && eta.is_finite()) {
                return Err(Error::invalid(format!("type II threshold eta must be > 0 (got {eta})")));
            }
        }
        Ok(())
    }

    /// True when sampling cannot move any coordinate.
    pub fn is_degenerate(&self) -> bool {
        matches!(self.strategy, RobustnessStrategy::None) || self.delta.iter().all(|d| *d == T::zero())
    }

    /// Neighborhood points around `x`; the single point `x` when degenerate.
    pub fn neighborhood(&self, x: &[T], rng: &mut RngStream) -> Result<Vec<Vec<T>>> {
        check_len(self.delta.len(), x.len())?;
        if self.is_degenerate() {
            return Ok(vec![x.to_vec()]);
        }
        let spec = NeighborhoodSpec::new(x.to_vec(), self.delta.clone(), self.samples)?;
        neighborhood_samples(&spec, self.scheme, rng)
    }
}

/// Robust objective vector plus the Type II feasibility excess.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustValue<T> {
    pub objectives: Vec<T>,
    /// `max(ratio − η, 0)` for Type II, zero otherwise.
    pub violation: T,
}

fn evaluate_all<T, F>(f: &F, points: &[Vec<T>]) -> Result<Vec<Vec<T>>>
where
    T: Real,
    F: Fn(&[T]) -> Result<Vec<T>>,
{
    points
        .iter()
        .enumerate()
        .map(|(j, p)| {
            f(p).map_err(|e| Error::Sample {
                sample: j,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Coordinate-wise mean of equally long vectors.
pub fn mean_vector<T: Real>(values: &[Vec<T>]) -> Result<Vec<T>> {
    let first = values.first().ok_or(Error::EmptyInput("sample values"))?;
    let m = T::from_usize_lossy(values.len());
    let mut acc = vec![T::zero(); first.len()];
    for v in values {
        check_len(acc.len(), v.len())?;
        for (a, &x) in acc.iter_mut().zip(v) {
            *a = *a + x;
        }
    }
    Ok(acc.into_iter().map(|a| a / m).collect())
}

fn worst_vector<T: Real>(values: &[Vec<T>], senses: &[Sense]) -> Result<Vec<T>> {
    let first = values.first().ok_or(Error::EmptyInput("sample values"))?;
    check_len(senses.len(), first.len())?;
    let mut out = first.clone();
    for v in &values[1..] {
        check_len(out.len(), v.len())?;
        for ((o, &x), s) in out.iter_mut().zip(v).zip(senses) {
            if s.better(*o, x) {
                *o = x;
            }
        }
    }
    Ok(out)
}

/// Mean relative absolute deviation `P_r = (1/M) Σ_j |f_r(ξ_j) − f_r(x)| / |f_r(x)|`.
pub fn relative_deviation<T: Real>(nominal: &[T], samples: &[Vec<T>]) -> Result<Vec<T>> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("sample values"));
    }
    let m = T::from_usize_lossy(samples.len());
    nominal
        .iter()
        .enumerate()
        .map(|(r, &f0)| {
            if !(f0.abs() >= T::lit(DIVISION_FLOOR)) {
                return Err(Error::DivisionHazard {
                    what: "f_r(x)",
                    magnitude: f0.abs().to_f64_lossy(),
                });
            }
            let mut sum = T::zero();
            for s in samples {
                check_len(nominal.len(), s.len())?;
                sum = sum + (s[r] - f0).abs();
            }
            Ok(sum / m / f0.abs())
        })
        .collect()
}

/// `‖f_eff − f‖ / ‖f‖`.
pub fn type2_ratio<T: Real>(f_val: &[T], f_eff: &[T]) -> Result<T> {
    check_len(f_val.len(), f_eff.len())?;
    let denom = norm(f_val);
    if !(denom >= T::lit(DIVISION_FLOOR)) {
        return Err(Error::DivisionHazard {
            what: "||f(x)||",
            magnitude: denom.to_f64_lossy(),
        });
    }
    let diff: Vec<T> = f_eff.iter().zip(f_val).map(|(&a, &b)| a - b).collect();
    Ok(norm(&diff) / denom)
}

pub fn type2_feasible<T: Real>(f_val: &[T], f_eff: &[T], eta: T) -> Result<bool> {
    Ok(type2_ratio(f_val, f_eff)? <= eta)
}

/// Combines nominal and per-sample objective values according to `strategy`.
///
/// `nominal` is required by Type II and the penalty form; the effective mean
/// only uses the samples.
pub fn aggregate<T: Real>(
    strategy: &RobustnessStrategy<T>,
    nominal: Option<&[T]>,
    samples: &[Vec<T>],
    senses: &[Sense],
) -> Result<RobustValue<T>> {
    let need_nominal = || nominal.ok_or_else(|| Error::invalid("nominal objectives required"));
    match *strategy {
        RobustnessStrategy::None => Ok(RobustValue {
            objectives: match nominal {
                Some(f) => f.to_vec(),
                None => samples.first().ok_or(Error::EmptyInput("sample values"))?.clone(),
            },
            violation: T::zero(),
        }),
        RobustnessStrategy::EffectiveMean => Ok(RobustValue {
            objectives: mean_vector(samples)?,
            violation: T::zero(),
        }),
        RobustnessStrategy::TypeII { eta, aggregator } => {
            let f = need_nominal()?;
            let perturbed = match aggregator {
                Aggregator::Mean => mean_vector(samples)?,
                Aggregator::Worst => worst_vector(samples, senses)?,
            };
            let ratio = type2_ratio(f, &perturbed)?;
            Ok(RobustValue {
                objectives: f.to_vec(),
                violation: (ratio - eta).max(T::zero()),
            })
        }
        RobustnessStrategy::PenaltyBased => {
            let f = need_nominal()?;
            check_len(senses.len(), f.len())?;
            let p = relative_deviation(f, samples)?;
            Ok(RobustValue {
                objectives: f
                    .iter()
                    .zip(&p)
                    .zip(senses)
                    .map(|((&v, &p), s)| match s {
                        Sense::Minimize => v + p,
                        Sense::Maximize => v - p,
                    })
                    .collect(),
                violation: T::zero(),
            })
        }
    }
}

/// Sampled effective mean `(1/M) Σ_j f(ξ_j)`; exactly `f(x)` when δ = 0.
pub fn effective_mean<T, F>(f: F, x: &[T], spec: &RobustnessSpec<T>, rng: &mut RngStream) -> Result<Vec<T>>
where
    T: Real,
    F: Fn(&[T]) -> Result<Vec<T>>,
{
    spec.validate()?;
    if spec.is_degenerate() {
        check_len(spec.delta.len(), x.len())?;
        return f(x);
    }
    let points = spec.neighborhood(x, rng)?;
    mean_vector(&evaluate_all(&f, &points)?)
}

/// Nominal objectives worsened by their mean relative deviation over the neighborhood.
pub fn penalty_robust<T, F>(
    f: F,
    x: &[T],
    senses: &[Sense],
    spec: &RobustnessSpec<T>,
    rng: &mut RngStream,
) -> Result<Vec<T>>
where
    T: Real,
    F: Fn(&[T]) -> Result<Vec<T>>,
{
    spec.validate()?;
    let nominal = f(x)?;
    let points = spec.neighborhood(x, rng)?;
    let values = evaluate_all(&f, &points)?;
    Ok(aggregate(&RobustnessStrategy::PenaltyBased, Some(&nominal), &values, senses)?.objectives)
}

/// Robust objectives for any strategy in `spec`.
pub fn robust_objectives<T, F>(
    f: F,
    x: &[T],
    senses: &[Sense],
    spec: &RobustnessSpec<T>,
    rng: &mut RngStream,
) -> Result<RobustValue<T>>
where
    T: Real,
    F: Fn(&[T]) -> Result<Vec<T>>,
{
    spec.validate()?;
    match spec.strategy {
        RobustnessStrategy::None => Ok(RobustValue {
            objectives: f(x)?,
            violation: T::zero(),
        }),
        RobustnessStrategy::EffectiveMean => Ok(RobustValue {
            objectives: effective_mean(&f, x, spec, rng)?,
            violation: T::zero(),
        }),
        RobustnessStrategy::TypeII { .. } | RobustnessStrategy::PenaltyBased => {
            let nominal = f(x)?;
            let points = spec.neighborhood(x, rng)?;
            let values = evaluate_all(&f, &points)?;
            aggregate(&spec.strategy, Some(&nominal), &values, senses)
        }
    }
}
