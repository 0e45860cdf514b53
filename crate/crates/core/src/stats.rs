//! Degree-2 least-squares fits of fronts and their goodness-of-fit statistics.

use std::fmt;

use crate::error::{check_len, Error, Result};

/// Denominator of the RMS error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RmsConvention {
    /// `√(SQR / (n − 3))`.
    #[default]
    ResidualDof,
    /// `√(SQR / n)`.
    Population,
}

impl RmsConvention {
    pub fn name(self) -> &'static str {
        match self {
            Self::ResidualDof => "dof",
            Self::Population => "population",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::ResidualDof, Self::Population].into_iter().find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitReport {
    /// `(a₀, a₁, a₂)` of `a₀ + a₁x + a₂x²`.
    pub coefficients: [f64; 3],
    pub sqr: f64,
    pub r2: f64,
    pub r2_adj: f64,
    pub rms: f64,
    pub n: usize,
}

impl fmt::Display for FitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a0, a1, a2] = self.coefficients;
        write!(
            f,
            "n={} a0={a0:e} a1={a1:e} a2={a2:e} SQR={:e} R2={:.6} R2_adj={:.6} RMS={:e}",
            self.n, self.sqr, self.r2, self.r2_adj, self.rms
        )
    }
}

fn eval(c: &[f64; 3], x: f64) -> f64 {
    c[0] + x * (c[1] + x * c[2])
}

/// Gaussian elimination with partial pivoting on a 3×3 system.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let m = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= m * a[col][k];
            }
            b[row] -= m * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Least-squares `(a₀, a₁, a₂)`. The abscissa is centered and scaled before
/// the normal equations are formed.
pub fn polyfit2(x: &[f64], y: &[f64]) -> Result<[f64; 3]> {
    check_len(x.len(), y.len())?;
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Fit("data contain non-finite values".into()));
    }
    let mut distinct = x.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::Fit(format!(
            "quadratic fit needs >= 3 distinct x values (got {})",
            distinct.len()
        )));
    }
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let s = x.iter().map(|v| (v - m).abs()).fold(0.0, f64::max);
    let z: Vec<f64> = x.iter().map(|v| (v - m) / s).collect();

    let mut ata = [[0.0; 3]; 3];
    let mut aty = [0.0; 3];
    for (&zi, &yi) in z.iter().zip(y) {
        let row = [1.0, zi, zi * zi];
        for r in 0..3 {
            aty[r] += row[r] * yi;
            for c in 0..3 {
                ata[r][c] += row[r] * row[c];
            }
        }
    }
    let b = solve3(ata, aty).ok_or_else(|| Error::Fit("normal equations are singular".into()))?;
    Ok([
        b[0] - b[1] * m / s + b[2] * m * m / (s * s),
        b[1] / s - 2.0 * b[2] * m / (s * s),
        b[2] / (s * s),
    ])
}

pub fn goodness_of_fit(x: &[f64], y: &[f64], coefficients: &[f64; 3], rms: RmsConvention) -> Result<FitReport> {
    check_len(x.len(), y.len())?;
    let n = x.len();
    if n <= 3 {
        return Err(Error::Fit(format!("adjusted statistics need n > 3 points (got {n})")));
    }
    let nf = n as f64;
    let mean = y.iter().sum::<f64>() / nf;
    let sqr: f64 = x.iter().zip(y).map(|(&xi, &yi)| (yi - eval(coefficients, xi)).powi(2)).sum();
    let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let r2 = if sst > 0.0 { 1.0 - sqr / sst } else { 1.0 };
    let r2_adj = 1.0 - (1.0 - r2) * (nf - 1.0) / (nf - 3.0);
    let denom = match rms {
        RmsConvention::ResidualDof => nf - 3.0,
        RmsConvention::Population => nf,
    };
    Ok(FitReport {
        coefficients: *coefficients,
        sqr,
        r2,
        r2_adj,
        rms: (sqr / denom).sqrt(),
        n,
    })
}

/// [`polyfit2`] followed by [`goodness_of_fit`].
pub fn fit_report(x: &[f64], y: &[f64], rms: RmsConvention) -> Result<FitReport> {
    let c = polyfit2(x, y)?;
    goodness_of_fit(x, y, &c, rms)
}
