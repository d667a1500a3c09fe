//! Log returns, forward realized volatility, and the supervised dataset
//! (eight lagged endogenous/exogenous features, realized-vol target,
//! train-fitted min-max scaling, seeded random split).

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use chrono::NaiveDate;
use rand::seq::SliceRandom;
use thiserror::Error;

use crate::ingest::PriceTable;
use crate::math;
use crate::network::{Network, NetworkError, SampleSet};

/// Forward window length in trading days (roughly one month).
pub const DEFAULT_VOL_WINDOW: usize = 21;
pub const DEFAULT_TRAIN_FRAC: f64 = 0.8;

pub const FEATURE_NAMES: [&str; 8] = [
    "close",
    "return",
    "volume",
    "realized_vol_lag1",
    "sse50_return",
    "bond3m_change",
    "bond6m_change",
    "fx",
];
pub const N_FEATURES: usize = FEATURE_NAMES.len();

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FeatureError {
    #[error("non-positive price {value} at index {index}")]
    NonPositivePrice { index: usize, value: f64 },
    #[error("need at least {need} values, got {len}")]
    TooShort { len: usize, need: usize },
    #[error("window d={d} needs at least {} returns, got {len}", d + 1)]
    WindowTooLarge { d: usize, len: usize },
    #[error("window d must be at least 1")]
    ZeroWindow,
    #[error("source column `{0}` not found")]
    MissingColumn(String),
    #[error("only {rows} usable rows after feature construction (need {need})")]
    InsufficientRows { rows: usize, need: usize },
    #[error("feature `{feature}` is constant over the training rows")]
    ConstantFeature { feature: String },
    #[error("normalization range is empty (min {min} >= max {max})")]
    DegenerateRange { min: f64, max: f64 },
    #[error("train fraction {0} must lie in (0, 1]")]
    InvalidTrainFraction(f64),
}

/// `L_t = ln(P_t / P_{t-1})`.
pub fn log_returns(prices: &[f64]) -> Result<Vec<f64>, FeatureError> {
    if prices.len() < 2 {
        return Err(FeatureError::TooShort { len: prices.len(), need: 2 });
    }
    if let Some((index, &value)) = prices.iter().enumerate().find(|(_, p)| !(**p > 0.0)) {
        return Err(FeatureError::NonPositivePrice { index, value });
    }
    Ok(prices.windows(2).map(|w| math::ln(w[1] / w[0])).collect())
}

/// Forward realized volatility. Entry `t` covers the `d + 1` returns
/// `L_t ..= L_{t+d}`, centred on their own mean, with divisor `d`:
///
/// `RV_t = sqrt( sum_{i=t}^{t+d} (L_i - mean)^2 / d )`
///
/// Output length is `len(L) - d`.
pub fn realized_vol(returns: &[f64], d: usize) -> Result<Vec<f64>, FeatureError> {
    if d == 0 {
        return Err(FeatureError::ZeroWindow);
    }
    if returns.len() < d + 1 {
        return Err(FeatureError::WindowTooLarge { d, len: returns.len() });
    }
    let df = d as f64;
    Ok(returns
        .windows(d + 1)
        .map(|w| {
            let m = math::mean(w);
            math::sqrt(w.iter().map(|l| (l - m) * (l - m)).sum::<f64>() / df)
        })
        .collect())
}

/// Min-max scaling onto [-1, 1].
pub fn normalize(v: f64, min: f64, max: f64) -> Result<f64, FeatureError> {
    if !(max > min) {
        return Err(FeatureError::DegenerateRange { min, max });
    }
    Ok(2.0 * (v - min) / (max - min) - 1.0)
}

pub fn denormalize(u: f64, min: f64, max: f64) -> Result<f64, FeatureError> {
    if !(max > min) {
        return Err(FeatureError::DegenerateRange { min, max });
    }
    Ok((u + 1.0) / 2.0 * (max - min) + min)
}

/// Fitted min-max range of one feature.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NormParams {
    pub min: f64,
    pub max: f64,
}

impl NormParams {
    pub fn apply(&self, v: f64) -> f64 {
        2.0 * (v - self.min) / (self.max - self.min) - 1.0
    }

    pub fn invert(&self, u: f64) -> f64 {
        (u + 1.0) / 2.0 * (self.max - self.min) + self.min
    }
}

/// Names of the raw table columns the features are derived from.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SourceColumns {
    pub close: String,
    pub volume: String,
    /// SSE 50 index level; its log return becomes a feature.
    pub sse50: String,
    /// 3-month treasury yield; its day-over-day change becomes a feature.
    pub bond3m: String,
    pub bond6m: String,
    /// RMB/USD rate, used as is.
    pub fx: String,
}

impl Default for SourceColumns {
    fn default() -> Self {
        Self {
            close: "close".into(),
            volume: "volume".into(),
            sse50: "sse50".into(),
            bond3m: "bond3m".into(),
            bond6m: "bond6m".into(),
            fx: "fx".into(),
        }
    }
}

impl SourceColumns {
    pub fn names(&self) -> [&str; 6] {
        [
            &self.close,
            &self.volume,
            &self.sse50,
            &self.bond3m,
            &self.bond6m,
            &self.fx,
        ]
    }
}

/// Unscaled feature rows with their targets, in date order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRows {
    pub dates: Vec<NaiveDate>,
    /// Row-major, `N_FEATURES` columns.
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl FeatureRows {
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * N_FEATURES..(i + 1) * N_FEATURES]
    }
}

/// Builds one row per price date `t` with every feature defined:
/// close_t, L_t, volume_t, RV_{t-1}, SSE50 return_t, Δbond3m_t, Δbond6m_t,
/// fx_t, and target RV_t.
pub fn feature_rows(
    table: &PriceTable,
    cols: &SourceColumns,
    d: usize,
) -> Result<FeatureRows, FeatureError> {
    let get = |name: &str| {
        table
            .column(name)
            .ok_or_else(|| FeatureError::MissingColumn(name.to_string()))
    };
    let close = get(&cols.close)?;
    let volume = get(&cols.volume)?;
    let sse50 = get(&cols.sse50)?;
    let bond3m = get(&cols.bond3m)?;
    let bond6m = get(&cols.bond6m)?;
    let fx = get(&cols.fx)?;

    let n = table.len();
    if d == 0 {
        return Err(FeatureError::ZeroWindow);
    }
    if n < d + 3 {
        return Err(FeatureError::InsufficientRows {
            rows: n.saturating_sub(d + 2),
            need: 1,
        });
    }
    // returns[j] belongs to price date j + 1; so does vol[j].
    let returns = log_returns(close)?;
    let vol = realized_vol(&returns, d)?;
    let sse_returns = log_returns(sse50)?;

    let rows = 2..n - d;
    let mut x = Vec::with_capacity(rows.len() * N_FEATURES);
    let mut y = Vec::with_capacity(rows.len());
    let mut dates = Vec::with_capacity(rows.len());
    for t in rows {
        x.extend_from_slice(&[
            close[t],
            returns[t - 1],
            volume[t],
            vol[t - 2],
            sse_returns[t - 1],
            bond3m[t] - bond3m[t - 1],
            bond6m[t] - bond6m[t - 1],
            fx[t],
        ]);
        y.push(vol[t - 1]);
        dates.push(table.dates()[t]);
    }
    Ok(FeatureRows { dates, x, y })
}

/// Uniform random partition of `0..n` into sorted train and test index sets.
pub fn split_indices(n: usize, train_frac: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>), FeatureError> {
    if !(train_frac > 0.0 && train_frac <= 1.0) {
        return Err(FeatureError::InvalidTrainFraction(train_frac));
    }
    if n == 0 {
        return Err(FeatureError::InsufficientRows { rows: 0, need: 1 });
    }
    let n_train = (math::round(train_frac * n as f64) as usize).clamp(1, n);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut crate::seeded_rng(seed));
    let mut test = idx.split_off(n_train);
    idx.sort_unstable();
    test.sort_unstable();
    Ok((idx, test))
}

/// Supervised-learning view: scaled features, targets, split.
///
/// Targets are kept in natural units in `y`; the network is trained on
/// their min-max image under `target_norm` (fitted on training rows, like
/// the features) and its outputs are mapped back with
/// [`Dataset::unscale_target`].
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub feature_names: Vec<String>,
    pub dates: Vec<NaiveDate>,
    /// Scaled features, row-major, `N_FEATURES` columns.
    pub x: Vec<f64>,
    /// Next-step realized volatility, natural units.
    pub y: Vec<f64>,
    pub norm_params: Vec<NormParams>,
    pub target_norm: NormParams,
    pub train_idx: Vec<usize>,
    pub test_idx: Vec<usize>,
    pub seed: u64,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let k = self.n_features();
        &self.x[i * k..(i + 1) * k]
    }

    pub fn subset(&self, idx: &[usize]) -> SampleSet {
        let mut inputs = Vec::with_capacity(idx.len() * self.n_features());
        let mut targets = Vec::with_capacity(idx.len());
        for &i in idx {
            inputs.extend_from_slice(self.row(i));
            targets.push(self.target_norm.apply(self.y[i]));
        }
        SampleSet::new(inputs, targets, self.n_features(), 1)
            .expect("dataset rows have consistent width")
    }

    pub fn train_set(&self) -> SampleSet {
        self.subset(&self.train_idx)
    }

    pub fn test_set(&self) -> SampleSet {
        self.subset(&self.test_idx)
    }

    pub fn all_rows(&self) -> SampleSet {
        let all: Vec<usize> = (0..self.len()).collect();
        self.subset(&all)
    }

    pub fn unscale_target(&self, u: f64) -> f64 {
        self.target_norm.invert(u)
    }

    /// Network forecasts for the given rows, in natural units.
    pub fn forecast(&self, net: &Network, idx: &[usize]) -> Result<Vec<f64>, NetworkError> {
        let out = net.predict(&self.subset(idx))?;
        Ok(out.into_iter().map(|u| self.unscale_target(u)).collect())
    }

    pub fn targets(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter().map(|&i| self.y[i]).collect()
    }
}

/// Per-feature (min, max) over the given rows.
pub fn fit_norm(rows: &FeatureRows, fit_on: &[usize]) -> Result<Vec<NormParams>, FeatureError> {
    let mut params = Vec::with_capacity(N_FEATURES);
    for (j, name) in FEATURE_NAMES.iter().enumerate() {
        let (min, max) = fit_on.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
            let v = rows.row(i)[j];
            (lo.min(v), hi.max(v))
        });
        if !(max > min) {
            return Err(FeatureError::ConstantFeature {
                feature: (*name).to_string(),
            });
        }
        params.push(NormParams { min, max });
    }
    Ok(params)
}

pub fn fit_target_norm(y: &[f64], fit_on: &[usize]) -> Result<NormParams, FeatureError> {
    let (min, max) = fit_on
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| (lo.min(y[i]), hi.max(y[i])));
    if !(max > min) {
        return Err(FeatureError::ConstantFeature {
            feature: "target".to_string(),
        });
    }
    Ok(NormParams { min, max })
}

/// Scales every row with the given params; values outside the fitted
/// range are left unclipped.
pub fn apply_norm(rows: &FeatureRows, params: &[NormParams]) -> Vec<f64> {
    rows.x
        .chunks(N_FEATURES)
        .flat_map(|r| r.iter().zip(params).map(|(v, p)| p.apply(*v)))
        .collect()
}

pub fn build_dataset(
    table: &PriceTable,
    cols: &SourceColumns,
    d: usize,
    seed: u64,
    train_frac: f64,
) -> Result<Dataset, FeatureError> {
    let rows = feature_rows(table, cols, d)?;
    if rows.len() < 2 {
        return Err(FeatureError::InsufficientRows {
            rows: rows.len(),
            need: 2,
        });
    }
    let (train_idx, test_idx) = split_indices(rows.len(), train_frac, seed)?;
    let norm_params = fit_norm(&rows, &train_idx)?;
    let target_norm = fit_target_norm(&rows.y, &train_idx)?;
    let x = apply_norm(&rows, &norm_params);
    Ok(Dataset {
        feature_names: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        dates: rows.dates,
        x,
        y: rows.y,
        norm_params,
        target_norm,
        train_idx,
        test_idx,
        seed,
    })
}
