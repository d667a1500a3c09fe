//! Seeded synthetic market: GARCH(1,1) index returns plus volume and four
//! exogenous series loosely driven by the same shocks.

use alloc::string::ToString;
use alloc::vec::Vec;

use chrono::{Datelike, Days, NaiveDate, Weekday};
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::ingest::{IngestError, RawTable};
use crate::math;

/// Row count of the reference sample.
pub const DEFAULT_ROWS: usize = 2783;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("alpha + beta = {0} must be below 1 for a stationary process")]
    NonStationary(f64),
    #[error("invalid GARCH parameters: {0}")]
    InvalidParams(&'static str),
    #[error(transparent)]
    Table(#[from] IngestError),
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct GarchParams {
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Daily drift of the log return.
    pub mu: f64,
    pub n: usize,
    pub seed: u64,
}

impl Default for GarchParams {
    fn default() -> Self {
        Self {
            omega: 1e-5,
            alpha: 0.1,
            beta: 0.85,
            mu: 3e-4,
            n: DEFAULT_ROWS,
            seed: 0,
        }
    }
}

impl GarchParams {
    pub fn validate(&self) -> Result<(), SynthError> {
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(SynthError::InvalidParams("omega must be positive"));
        }
        if !(self.alpha >= 0.0) || !(self.beta >= 0.0) {
            return Err(SynthError::InvalidParams("alpha and beta must be non-negative"));
        }
        if !self.mu.is_finite() {
            return Err(SynthError::InvalidParams("mu must be finite"));
        }
        let persistence = self.alpha + self.beta;
        if !(persistence < 1.0) {
            return Err(SynthError::NonStationary(persistence));
        }
        Ok(())
    }

    /// `omega / (1 - alpha - beta)`.
    pub fn unconditional_variance(&self) -> f64 {
        self.omega / (1.0 - self.alpha - self.beta)
    }
}

/// `r_t = mu + sigma_t z_t`, `sigma_t^2 = omega + alpha r_{t-1}^2 + beta sigma_{t-1}^2`,
/// started at the unconditional variance.
pub fn simulate_returns(p: &GarchParams) -> Result<Vec<f64>, SynthError> {
    p.validate()?;
    let mut rng = crate::seeded_rng(p.seed);
    Ok(garch_path(p, &mut rng))
}

fn garch_path<R: Rng>(p: &GarchParams, rng: &mut R) -> Vec<f64> {
    let mut var = p.unconditional_variance();
    let mut out = Vec::with_capacity(p.n);
    for _ in 0..p.n {
        let z: f64 = rng.sample(StandardNormal);
        let r = p.mu + math::sqrt(var) * z;
        out.push(r);
        var = p.omega + p.alpha * r * r + p.beta * var;
    }
    out
}

fn weekdays(start: NaiveDate, n: usize) -> Vec<NaiveDate> {
    let mut d = start;
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(d);
        }
        d = d + Days::new(1);
    }
    out
}

/// Full synthetic table with columns `close, volume, sse50, bond3m, bond6m, fx`
/// on consecutive weekdays starting 2014-05-06.
pub fn generate(p: &GarchParams) -> Result<RawTable, SynthError> {
    p.validate()?;
    let mut rng = crate::seeded_rng(p.seed);
    let returns = garch_path(p, &mut rng);
    let sd = math::sqrt(p.unconditional_variance());

    let mut noise = || -> f64 { rng.sample(StandardNormal) };
    let n = p.n;
    let mut close = Vec::with_capacity(n);
    let mut volume = Vec::with_capacity(n);
    let mut sse50 = Vec::with_capacity(n);
    let mut bond3m = Vec::with_capacity(n);
    let mut bond6m = Vec::with_capacity(n);
    let mut fx = Vec::with_capacity(n);

    let (mut log_close, mut log_sse, mut log_fx) = (0.0f64, 0.0f64, 0.0f64);
    let (mut y3, mut prev_r) = (2.5f64, 0.0f64);
    for &r in &returns {
        log_close += r;
        log_sse += 0.9 * r + 0.3 * sd * noise();
        log_fx += -0.05 * r + 0.002 * noise();
        y3 += -2.0 * prev_r + 0.01 * noise() + 0.002 * (2.5 - y3);
        let spread = 0.15 + 0.02 * noise();
        // Volume rises with the size of the day's move relative to its scale.
        let vol = math::exp(18.0 + 0.8 * (r - p.mu).abs() / sd + 0.25 * noise());

        close.push(Some(100.0 * math::exp(log_close)));
        volume.push(Some(vol));
        sse50.push(Some(2500.0 * math::exp(log_sse)));
        bond3m.push(Some(y3));
        bond6m.push(Some(y3 + spread));
        fx.push(Some(6.2 * math::exp(log_fx)));
        prev_r = r;
    }

    let start = NaiveDate::from_ymd_opt(2014, 5, 6).expect("valid start date");
    let columns = [
        ("close", close),
        ("volume", volume),
        ("sse50", sse50),
        ("bond3m", bond3m),
        ("bond6m", bond6m),
        ("fx", fx),
    ]
    .into_iter()
    .map(|(name, v)| (name.to_string(), v))
    .collect();
    Ok(RawTable::new(weekdays(start, n), columns)?)
}
