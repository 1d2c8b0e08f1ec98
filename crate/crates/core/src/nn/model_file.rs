//! Portable self-describing network serialization.
//!
//! The file is JSON with a format tag and version, layer dims, activations
//! and row-major weights. f64 values print in shortest-roundtrip form, so a
//! save/load cycle reproduces predictions bit for bit.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Activation, Layer, Mlp};
use crate::{Error, Result};

pub const MLP_FORMAT_TAG: &str = "hetlab-mlp";
pub const MLP_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MlpFile {
    pub format: String,
    pub version: u32,
    pub input_dim: usize,
    pub seed: u64,
    pub layers: Vec<LayerFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayerFile {
    pub width: usize,
    pub activation: Activation,
    /// Row-major (width × fan_in).
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

pub fn mlp_to_file(mlp: &Mlp) -> MlpFile {
    MlpFile {
        format: MLP_FORMAT_TAG.to_string(),
        version: MLP_FORMAT_VERSION,
        input_dim: mlp.input_dim(),
        seed: mlp.seed(),
        layers: mlp
            .layers()
            .iter()
            .map(|l| LayerFile {
                width: l.out_dim(),
                activation: l.activation(),
                weights: l.weights().to_vec(),
                biases: l.biases().to_vec(),
            })
            .collect(),
    }
}

pub fn mlp_from_file(file: &MlpFile) -> Result<Mlp> {
    if file.format != MLP_FORMAT_TAG || file.version != MLP_FORMAT_VERSION {
        return Err(Error::ModelFormat {
            expected: format!("{MLP_FORMAT_TAG} v{MLP_FORMAT_VERSION}"),
            found: format!("{} v{}", file.format, file.version),
        });
    }
    let mut layers = Vec::with_capacity(file.layers.len());
    let mut in_dim = file.input_dim;
    for spec in &file.layers {
        layers.push(Layer {
            in_dim,
            out_dim: spec.width,
            weights: spec.weights.clone(),
            biases: spec.biases.clone(),
            activation: spec.activation,
        });
        in_dim = spec.width;
    }
    Mlp::from_parts(file.input_dim, layers, file.seed)
}

pub fn save_mlp(mlp: &Mlp, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&mlp_to_file(mlp))
        .map_err(|e| Error::ModelEncoding(e.to_string()))?;
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_mlp(path: &Path) -> Result<Mlp> {
    let text = std::fs::read_to_string(path)?;
    let file: MlpFile =
        serde_json::from_str(&text).map_err(|e| Error::ModelEncoding(e.to_string()))?;
    mlp_from_file(&file)
}
