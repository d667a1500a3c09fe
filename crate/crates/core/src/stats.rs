//! Descriptive statistics and volatility-clustering diagnostics
//! (Ljung-Box on squared returns, Engle's ARCH-LM).

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::math;

pub const DEFAULT_LAG: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum StatsError {
    #[error("series of length {len} is too short (need at least {need})")]
    SeriesTooShort { len: usize, need: usize },
    #[error("series has zero variance; higher moments are undefined")]
    DegenerateSeries,
    #[error("ARCH-LM regression is singular (collinear or constant lags)")]
    SingularRegression,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeriesSummary {
    pub n_obs: usize,
    pub mean: f64,
    pub max: f64,
    pub min: f64,
    pub std_dev: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub q2_stat: f64,
    pub arch_stat: f64,
    pub lag: usize,
}

pub fn summarize(x: &[f64], lag: usize) -> Result<SeriesSummary, StatsError> {
    let n = x.len();
    if n < lag + 2 {
        return Err(StatsError::SeriesTooShort { len: n, need: lag + 2 });
    }
    let nf = n as f64;
    let mean = math::mean(x);
    let ss: f64 = x.iter().map(|v| (v - mean) * (v - mean)).sum();
    if ss == 0.0 {
        return Err(StatsError::DegenerateSeries);
    }
    let std_dev = math::sqrt(ss / (nf - 1.0));
    let s_pop = math::sqrt(ss / nf);
    let (m3, m4) = x.iter().fold((0.0, 0.0), |(a, b), v| {
        let z = (v - mean) / s_pop;
        (a + z * z * z, b + z * z * z * z)
    });
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = x.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(SeriesSummary {
        n_obs: n,
        mean,
        max,
        min,
        std_dev,
        skewness: m3 / nf,
        excess_kurtosis: m4 / nf - 3.0,
        q2_stat: ljung_box_squared(x, lag)?,
        arch_stat: arch_lm(x, lag)?,
        lag,
    })
}

fn squared_demeaned(x: &[f64]) -> Vec<f64> {
    let mean = math::mean(x);
    x.iter().map(|v| (v - mean) * (v - mean)).collect()
}

/// Ljung-Box Q on the squared demeaned series:
/// `Q = n(n+2) * sum_{k=1..lag} rho_k^2 / (n-k)`.
///
/// A constant squared series has all autocorrelations defined as zero.
pub fn ljung_box_squared(x: &[f64], lag: usize) -> Result<f64, StatsError> {
    let n = x.len();
    if n <= lag {
        return Err(StatsError::SeriesTooShort { len: n, need: lag + 1 });
    }
    let sq = squared_demeaned(x);
    if lag == 0 || sq.iter().all(|v| *v == sq[0]) {
        return Ok(0.0);
    }
    let sq_mean = math::mean(&sq);
    let c: Vec<f64> = sq.iter().map(|v| v - sq_mean).collect();
    let denom: f64 = c.iter().map(|v| v * v).sum();
    if denom == 0.0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let mut q = 0.0;
    for k in 1..=lag {
        let rho = c[k..].iter().zip(&c[..n - k]).map(|(a, b)| a * b).sum::<f64>() / denom;
        q += rho * rho / (nf - k as f64);
    }
    Ok(nf * (nf + 2.0) * q)
}

/// Engle's ARCH-LM statistic: regress `e_t^2` on a constant and
/// `e_{t-1}^2 .. e_{t-lag}^2` (with `e` the demeaned series) and return
/// `n_eff * R^2`, `n_eff = n - lag`.
pub fn arch_lm(x: &[f64], lag: usize) -> Result<f64, StatsError> {
    let n = x.len();
    if n <= 2 * lag {
        return Err(StatsError::SeriesTooShort { len: n, need: 2 * lag + 1 });
    }
    if lag == 0 {
        // Constant-only regression explains nothing.
        return Ok(0.0);
    }
    let mut sq = squared_demeaned(x);
    // R^2 is scale free; rescaling keeps the pivot test meaningful for
    // series whose squares are tiny.
    let scale = math::mean(&sq);
    if !(scale > 0.0) {
        return Err(StatsError::SingularRegression);
    }
    for v in &mut sq {
        *v /= scale;
    }

    let n_eff = n - lag;
    let p = lag + 1;
    let regressors = |t: usize, j: usize| if j == 0 { 1.0 } else { sq[t - j] };
    let mut xtx = vec![0.0; p * p];
    let mut xty = vec![0.0; p];
    for t in lag..n {
        for i in 0..p {
            let ri = regressors(t, i);
            xty[i] += ri * sq[t];
            for j in i..p {
                xtx[i * p + j] += ri * regressors(t, j);
            }
        }
    }
    for i in 0..p {
        for j in 0..i {
            xtx[i * p + j] = xtx[j * p + i];
        }
    }
    let beta = solve_normal_equations(xtx, xty, p)?;

    let y = &sq[lag..];
    let y_mean = math::mean(y);
    let mut ssr = 0.0;
    let mut sst = 0.0;
    for (off, &yt) in y.iter().enumerate() {
        let t = lag + off;
        let fit: f64 = (0..p).map(|j| beta[j] * regressors(t, j)).sum();
        ssr += (yt - fit) * (yt - fit);
        sst += (yt - y_mean) * (yt - y_mean);
    }
    if sst == 0.0 {
        return Err(StatsError::SingularRegression);
    }
    let r2 = (1.0 - ssr / sst).clamp(0.0, 1.0);
    Ok(n_eff as f64 * r2)
}

/// Gaussian elimination with partial pivoting on a dense `p x p` system.
/// Singular when a pivot falls below 1e-12 of the largest initial diagonal.
fn solve_normal_equations(mut a: Vec<f64>, mut b: Vec<f64>, p: usize) -> Result<Vec<f64>, StatsError> {
    let largest = (0..p).map(|i| a[i * p + i].abs()).fold(0.0, f64::max);
    let tol = 1e-12 * largest;
    if !(largest > 0.0) {
        return Err(StatsError::SingularRegression);
    }
    for col in 0..p {
        let pivot_row = (col..p)
            .max_by(|&r, &s| a[r * p + col].abs().total_cmp(&a[s * p + col].abs()))
            .unwrap_or(col);
        if a[pivot_row * p + col].abs() < tol {
            return Err(StatsError::SingularRegression);
        }
        if pivot_row != col {
            for j in 0..p {
                a.swap(col * p + j, pivot_row * p + j);
            }
            b.swap(col, pivot_row);
        }
        let pivot = a[col * p + col];
        for r in col + 1..p {
            let f = a[r * p + col] / pivot;
            if f == 0.0 {
                continue;
            }
            for j in col..p {
                a[r * p + j] -= f * a[col * p + j];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; p];
    for r in (0..p).rev() {
        let tail: f64 = (r + 1..p).map(|j| a[r * p + j] * x[j]).sum();
        x[r] = (b[r] - tail) / a[r * p + r];
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Confidence {
    P90,
    P95,
    P99,
}

// Upper-tail chi-square quantiles, df 1..=30, columns 90/95/99%.
const CHI2_TABLE: [[f64; 3]; 30] = [
    [2.7055, 3.8415, 6.6349],
    [4.6052, 5.9915, 9.2103],
    [6.2514, 7.8147, 11.3449],
    [7.7794, 9.4877, 13.2767],
    [9.2364, 11.0705, 15.0863],
    [10.6446, 12.5916, 16.8119],
    [12.0170, 14.0671, 18.4753],
    [13.3616, 15.5073, 20.0902],
    [14.6837, 16.9190, 21.6660],
    [15.9872, 18.3070, 23.2093],
    [17.2750, 19.6751, 24.7250],
    [18.5493, 21.0261, 26.2170],
    [19.8119, 22.3620, 27.6882],
    [21.0641, 23.6848, 29.1412],
    [22.3071, 24.9958, 30.5779],
    [23.5418, 26.2962, 31.9999],
    [24.7690, 27.5871, 33.4087],
    [25.9894, 28.8693, 34.8053],
    [27.2036, 30.1435, 36.1909],
    [28.4120, 31.4104, 37.5662],
    [29.6151, 32.6706, 38.9322],
    [30.8133, 33.9244, 40.2894],
    [32.0069, 35.1725, 41.6384],
    [33.1962, 36.4150, 42.9798],
    [34.3816, 37.6525, 44.3141],
    [35.5632, 38.8851, 45.6417],
    [36.7412, 40.1133, 46.9629],
    [37.9159, 41.3371, 48.2782],
    [39.0875, 42.5570, 49.5879],
    [40.2560, 43.7730, 50.8922],
];

/// Chi-square critical value for `df` in 1..=30.
pub fn chi_square_critical(df: usize, level: Confidence) -> Option<f64> {
    let row = CHI2_TABLE.get(df.checked_sub(1)?)?;
    Some(match level {
        Confidence::P90 => row[0],
        Confidence::P95 => row[1],
        Confidence::P99 => row[2],
    })
}
