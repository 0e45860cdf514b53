//! Seeded random streams, Latin Hypercube designs and δ-neighborhood samples.
//!
//! Streams are ChaCha8 generators. A substream is the generator seeded with the
//! run seed and switched to an explicit ChaCha stream index, so independent
//! evaluations can draw in parallel without sharing state.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_len, Error, Result};
use crate::scalar::Real;

/// Reproducible random stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    /// Stream `stream` of the generator keyed by `seed`.
    pub fn substream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    /// Substream keyed by a (generation, candidate) pair. Generation `g` maps
    /// to stream `(g + 1) << 32 | candidate`, leaving stream 0 for the driver.
    pub fn for_evaluation(seed: u64, generation: usize, candidate: usize) -> Self {
        let stream = ((generation as u64 + 1) << 32) | (candidate as u64 & 0xffff_ffff);
        Self::substream(seed, stream)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform<T: Real>(&mut self) -> T {
        unit_to_real(self.rng.random::<f64>())
    }

    pub fn uniform_f64(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn shuffle<E>(&mut self, items: &mut [E]) {
        items.shuffle(&mut self.rng);
    }

    /// Fresh 64-bit value, used to seed child runs.
    pub fn next_seed(&mut self) -> u64 {
        self.rng.random::<u64>()
    }
}

/// Converts an `f64` in `[0, 1)` to `T`, keeping the result strictly below one
/// even when narrowing rounds up.
fn unit_to_real<T: Real>(u: f64) -> T {
    let v = T::lit(u);
    if v >= T::one() {
        T::one() - T::epsilon() / T::lit(2.0)
    } else {
        v
    }
}

/// How neighborhood points are spread inside the δ-box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplingScheme {
    #[default]
    LatinHypercube,
    /// Independent uniform draws.
    Uniform,
}

/// `m × n` Latin Hypercube design in `[0, 1)`: per column, exactly one point in
/// each stratum `[k/m, (k+1)/m)`, jittered uniformly within the stratum.
pub fn latin_hypercube<T: Real>(m: usize, n: usize, rng: &mut RngStream) -> Result<Vec<Vec<T>>> {
    if m == 0 || n == 0 {
        return Err(Error::invalid(format!(
            "latin hypercube needs m >= 1 and n >= 1 (got {m} x {n})"
        )));
    }
    let mut out = vec![vec![T::zero(); n]; m];
    let mut strata: Vec<usize> = (0..m).collect();
    let width = 1.0 / m as f64;
    for col in 0..n {
        rng.shuffle(&mut strata);
        for (row, &k) in strata.iter().enumerate() {
            let lo = k as f64 * width;
            // stay inside [k/m, (k+1)/m) after rounding
            let v = (lo + rng.uniform_f64() * width).min(lo + width * (1.0 - f64::EPSILON));
            out[row][col] = unit_to_real(v);
        }
    }
    Ok(out)
}

fn uniform_design<T: Real>(m: usize, n: usize, rng: &mut RngStream) -> Result<Vec<Vec<T>>> {
    if m == 0 || n == 0 {
        return Err(Error::invalid(format!(
            "uniform design needs m >= 1 and n >= 1 (got {m} x {n})"
        )));
    }
    Ok((0..m)
        .map(|_| (0..n).map(|_| rng.uniform()).collect())
        .collect())
}

/// Relative neighborhood `[x_i − δ_i x_i, x_i + δ_i x_i]` around `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodSpec<T> {
    center: Vec<T>,
    noise: Vec<T>,
    count: usize,
}

impl<T: Real> NeighborhoodSpec<T> {
    pub fn new(center: Vec<T>, noise: Vec<T>, count: usize) -> Result<Self> {
        check_len(center.len(), noise.len())?;
        if center.is_empty() {
            return Err(Error::EmptyInput("neighborhood center"));
        }
        if count == 0 {
            return Err(Error::invalid("neighborhood sample count must be >= 1"));
        }
        if let Some(i) = noise.iter().position(|d| !(*d >= T::zero() && d.is_finite())) {
            return Err(Error::invalid(format!("noise[{i}] must be finite and >= 0")));
        }
        Ok(Self {
            center,
            noise,
            count,
        })
    }

    pub fn center(&self) -> &[T] {
        &self.center
    }

    pub fn noise(&self) -> &[T] {
        &self.noise
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Interval `(lo, hi)` spanned by coordinate `i`.
    pub fn interval(&self, i: usize) -> (T, T) {
        let a = self.center[i] * (T::one() - self.noise[i]);
        let b = self.center[i] * (T::one() + self.noise[i]);
        (a.min(b), a.max(b))
    }
}

/// Draws `count` points of the neighborhood. Coordinates with zero noise are
/// returned exactly; the others are affine images of the unit design clamped to
/// their interval.
pub fn neighborhood_samples<T: Real>(
    spec: &NeighborhoodSpec<T>,
    scheme: SamplingScheme,
    rng: &mut RngStream,
) -> Result<Vec<Vec<T>>> {
    let n = spec.center.len();
    for (i, (&x, &d)) in spec.center.iter().zip(&spec.noise).enumerate() {
        if d > T::zero() && x.abs() < T::lit(1e-12) {
            log::debug!("neighborhood coordinate {i} is degenerate: |x| = {x} with delta = {d}");
        }
    }
    let unit = match scheme {
        SamplingScheme::LatinHypercube => latin_hypercube::<T>(spec.count, n, rng)?,
        SamplingScheme::Uniform => uniform_design::<T>(spec.count, n, rng)?,
    };
    Ok(unit
        .into_iter()
        .map(|row| {
            row.into_iter()
                .enumerate()
                .map(|(i, q)| {
                    if spec.noise[i] == T::zero() {
                        return spec.center[i];
                    }
                    let (lo, hi) = spec.interval(i);
                    (lo + (hi - lo) * q).max(lo).min(hi)
                })
                .collect()
        })
        .collect())
}
