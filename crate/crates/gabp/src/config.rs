use std::fs;
use std::path::{Path, PathBuf};

use gabp_core::evolve::GaConfig;
use gabp_core::features::{SourceColumns, DEFAULT_TRAIN_FRAC, DEFAULT_VOL_WINDOW, N_FEATURES};
use gabp_core::ingest::DEFAULT_Z_THRESHOLD;
use gabp_core::network::{Activation, BpConfig, NetShape, DEFAULT_HIDDEN};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Everything a `train` run depends on. Every field has a default, so `{}`
/// is a valid configuration file.
///
/// `ga.seed` is overwritten by `seed`, which also drives the train/test split
/// and the plain-BP initial draw. `workers` and `out_dir` do not affect any
/// artifact and are left out of the saved copy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub data: Option<PathBuf>,
    pub columns: SourceColumns,
    pub vol_window: usize,
    pub hidden: usize,
    pub activation: Activation,
    pub ga: GaConfig,
    pub bp: BpConfig,
    pub train_frac: f64,
    pub z_threshold: f64,
    pub seed: u64,
    pub skip_ga: bool,
    #[serde(skip_serializing)]
    pub workers: usize,
    #[serde(skip_serializing)]
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            data: None,
            columns: SourceColumns::default(),
            vol_window: DEFAULT_VOL_WINDOW,
            hidden: DEFAULT_HIDDEN,
            activation: Activation::Tanh,
            ga: GaConfig::default(),
            bp: BpConfig::default(),
            train_frac: DEFAULT_TRAIN_FRAC,
            z_threshold: DEFAULT_Z_THRESHOLD,
            seed: 0,
            skip_ga: false,
            workers: 1,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Saved form: `ga.seed` shows the master seed actually used.
    pub fn to_json(&self) -> String {
        let resolved = Self { ga: self.ga_config(), ..self.clone() };
        serde_json::to_string_pretty(&resolved).expect("config serializes")
    }

    pub fn shape(&self) -> Result<NetShape> {
        Ok(NetShape::new(N_FEATURES, self.hidden, 1)?)
    }

    /// GA settings with the master seed applied.
    pub fn ga_config(&self) -> GaConfig {
        GaConfig { seed: self.seed, ..self.ga.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.data.is_none() {
            return Err(Error::Config("no data file given".into()));
        }
        if !(self.z_threshold > 0.0) {
            return Err(Error::Config("z_threshold must be positive".into()));
        }
        self.shape()?;
        self.ga_config().validate()?;
        Ok(())
    }
}
