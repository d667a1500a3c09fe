use std::fs;
use std::path::Path;

use gabp_core::features::{NormParams, SourceColumns};
use gabp_core::network::{Activation, NetShape, Network};
use gabp_core::Dataset;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MODEL_FORMAT: u32 = 1;
const OUTPUT_ACTIVATION: &str = "linear";

/// Persisted network plus everything needed to rebuild its inputs from a
/// raw table: source columns, window, outlier threshold and the
/// train-fitted scaling of features and target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format: u32,
    pub shape: NetShape,
    pub hidden_activation: Activation,
    pub output_activation: String,
    /// W1 row-major, b1, W2 row-major, b2.
    pub genes: Vec<f64>,
    pub feature_names: Vec<String>,
    pub columns: SourceColumns,
    pub vol_window: usize,
    pub z_threshold: f64,
    pub norm_params: Vec<NormParams>,
    pub target_norm: NormParams,
}

impl ModelFile {
    pub fn new(net: &Network, data: &Dataset, columns: &SourceColumns, vol_window: usize, z_threshold: f64) -> Self {
        Self {
            format: MODEL_FORMAT,
            shape: net.shape(),
            hidden_activation: net.activation(),
            output_activation: OUTPUT_ACTIVATION.into(),
            genes: net.genes().to_vec(),
            feature_names: data.feature_names.clone(),
            columns: columns.clone(),
            vol_window,
            z_threshold,
            norm_params: data.norm_params.clone(),
            target_norm: data.target_norm,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: Self = serde_json::from_str(text).map_err(|e| Error::ModelParse(e.to_string()))?;
        if m.format != MODEL_FORMAT {
            return Err(Error::ModelParse(format!("unsupported format {}", m.format)));
        }
        if m.output_activation != OUTPUT_ACTIVATION {
            return Err(Error::ModelParse(format!("unsupported output activation `{}`", m.output_activation)));
        }
        if m.norm_params.len() != m.feature_names.len() {
            return Err(Error::ModelParse(format!(
                "{} feature names but {} scaling entries",
                m.feature_names.len(),
                m.norm_params.len()
            )));
        }
        if m.shape.n_out != 1 {
            return Err(Error::ModelParse(format!("expected one output, found {}", m.shape.n_out)));
        }
        m.network()?;
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn network(&self) -> Result<Network> {
        Network::from_genes(self.shape, &self.genes, self.hidden_activation)
            .map_err(|e| Error::ModelParse(e.to_string()))
    }
}
