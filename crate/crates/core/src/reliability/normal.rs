use crate::error::{check_len, Error, Result};
use crate::scalar::Real;

/// Independent normal random variable `N(mean, std²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomVariableSpec<T> {
    mean: T,
    std: T,
}

impl<T: Real> RandomVariableSpec<T> {
    pub fn normal(mean: T, std: T) -> Result<Self> {
        if !(std > T::zero() && std.is_finite() && mean.is_finite()) {
            return Err(Error::invalid(format!(
                "normal variable needs finite mean and std > 0 (mean {mean}, std {std})"
            )));
        }
        Ok(Self { mean, std })
    }

    /// `N(mean, (cov * |mean|)²)`.
    pub fn with_cov(mean: T, cov: T) -> Result<Self> {
        Self::normal(mean, cov * mean.abs())
    }

    pub fn mean(&self) -> T {
        self.mean
    }

    pub fn std(&self) -> T {
        self.std
    }
}

/// `u_i = (x_i − μ_i) / σ_i`.
pub fn to_standard_normal<T: Real>(x: &[T], rv: &[RandomVariableSpec<T>]) -> Result<Vec<T>> {
    check_len(rv.len(), x.len())?;
    Ok(x.iter().zip(rv).map(|(&x, r)| (x - r.mean) / r.std).collect())
}

/// `x_i = μ_i + σ_i u_i`.
pub fn from_standard_normal<T: Real>(u: &[T], rv: &[RandomVariableSpec<T>]) -> Result<Vec<T>> {
    check_len(rv.len(), u.len())?;
    Ok(u.iter().zip(rv).map(|(&u, r)| r.mean + r.std * u).collect())
}

/// Standard normal CDF, evaluated through the complementary error function in `f64`.
pub fn std_normal_cdf<T: Real>(z: T) -> T {
    let z = z.to_f64_lossy();
    T::lit(0.5 * libm::erfc(-z / std::f64::consts::SQRT_2))
}

/// `p_f = Φ(−β)`.
pub fn failure_probability<T: Real>(beta: T) -> T {
    std_normal_cdf(-beta)
}
