//! Minimal fully-connected network engine: forward pass, MSE loss, manual
//! backpropagation and seeded initialization. Training lives in
//! [`train`](crate::nn::train), file serialization in
//! [`model_file`](crate::nn::model_file).

mod model_file;
mod train;

pub use model_file::{load_mlp, mlp_from_file, mlp_to_file, save_mlp, LayerFile, MlpFile};
pub use train::{train, EarlyStop, OptimizerKind, TrainConfig};

pub(crate) use train::OptimizerState;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const SELU_ALPHA: f64 = 1.6732632423543772;
pub const SELU_LAMBDA: f64 = 1.0507009873554805;

/// Hidden layer width bounds used by the architecture search.
pub const MIN_HIDDEN_WIDTH: usize = 4;
pub const MAX_HIDDEN_WIDTH: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Selu,
    Tanh,
    Relu,
    Sigmoid,
    Identity,
}

impl Activation {
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Selu => {
                if z > 0.0 {
                    SELU_LAMBDA * z
                } else {
                    SELU_LAMBDA * SELU_ALPHA * (z.exp() - 1.0)
                }
            }
            Activation::Tanh => z.tanh(),
            Activation::Relu => z.max(0.0),
            Activation::Sigmoid => 1.0 / (1.0 + (-z).exp()),
            Activation::Identity => z,
        }
    }

    /// Derivative dy/dz expressed through the activation output y.
    pub fn grad_from_output(self, y: f64) -> f64 {
        match self {
            Activation::Selu => {
                if y > 0.0 {
                    SELU_LAMBDA
                } else {
                    // y = λα(e^z − 1)  ⇒  λα e^z = y + λα
                    y + SELU_LAMBDA * SELU_ALPHA
                }
            }
            Activation::Tanh => 1.0 - y * y,
            Activation::Relu => {
                if y > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Sigmoid => y * (1.0 - y),
            Activation::Identity => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Selu => "selu",
            Activation::Tanh => "tanh",
            Activation::Relu => "relu",
            Activation::Sigmoid => "sigmoid",
            Activation::Identity => "identity",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "selu" => Ok(Activation::Selu),
            "tanh" => Ok(Activation::Tanh),
            "relu" => Ok(Activation::Relu),
            "sigmoid" => Ok(Activation::Sigmoid),
            "identity" => Ok(Activation::Identity),
            other => Err(Error::domain(format!("unknown activation `{other}`"))),
        }
    }
}

/// Width + activation of one hidden layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub width: usize,
    pub activation: Activation,
}

impl LayerSpec {
    /// Validates the hidden-width window \[4, 128\]. Output layers are built
    /// directly by [`Mlp::new`] and are exempt.
    pub fn new(width: usize, activation: Activation) -> Result<Self> {
        if !(MIN_HIDDEN_WIDTH..=MAX_HIDDEN_WIDTH).contains(&width) {
            return Err(Error::domain(format!(
                "hidden width {width} outside [{MIN_HIDDEN_WIDTH}, {MAX_HIDDEN_WIDTH}]"
            )));
        }
        Ok(Self { width, activation })
    }
}

/// One dense layer; weights are row-major with shape (out_dim, in_dim).
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    in_dim: usize,
    out_dim: usize,
    weights: Vec<f64>,
    biases: Vec<f64>,
    activation: Activation,
}

impl Layer {
    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    pub fn biases_mut(&mut self) -> &mut [f64] {
        &mut self.biases
    }

    fn forward_into(&self, input: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for o in 0..self.out_dim {
            let row = &self.weights[o * self.in_dim..(o + 1) * self.in_dim];
            let z: f64 = row
                .iter()
                .zip(input)
                .map(|(w, x)| w * x)
                .sum::<f64>()
                + self.biases[o];
            out.push(self.activation.apply(z));
        }
    }
}

/// Fully-connected network with an explicit initialization seed.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    input_dim: usize,
    layers: Vec<Layer>,
    seed: u64,
}

impl Mlp {
    /// Builds a network with seeded balanced-variance initialization:
    /// weights uniform in ±√(6/(fan_in+fan_out)), biases zero.
    pub fn new(
        input_dim: usize,
        hidden: &[LayerSpec],
        output_dim: usize,
        output_activation: Activation,
        seed: u64,
    ) -> Result<Self> {
        if input_dim == 0 || output_dim == 0 {
            return Err(Error::domain("input and output dims must be at least 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut layers = Vec::with_capacity(hidden.len() + 1);
        let mut in_dim = input_dim;
        for spec in hidden {
            layers.push(init_layer(&mut rng, in_dim, spec.width, spec.activation));
            in_dim = spec.width;
        }
        layers.push(init_layer(&mut rng, in_dim, output_dim, output_activation));
        Ok(Self {
            input_dim,
            layers,
            seed,
        })
    }

    /// Rebuilds a network from explicit parameters (model file loading).
    pub fn from_parts(input_dim: usize, layers: Vec<Layer>, seed: u64) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::domain("network needs at least one layer"));
        }
        let mut expected = input_dim;
        for (i, layer) in layers.iter().enumerate() {
            if layer.in_dim != expected {
                return Err(Error::shape(
                    format!("layer {i} input dim"),
                    expected,
                    layer.in_dim,
                ));
            }
            if layer.weights.len() != layer.in_dim * layer.out_dim
                || layer.biases.len() != layer.out_dim
            {
                return Err(Error::shape(
                    format!("layer {i} parameter count"),
                    layer.in_dim * layer.out_dim,
                    layer.weights.len(),
                ));
            }
            expected = layer.out_dim;
        }
        Ok(Self {
            input_dim,
            layers,
            seed,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().map(|l| l.out_dim).unwrap_or(0)
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Layer] {
        &mut self.layers
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n_parameters(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.biases.len())
            .sum()
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim {
            return Err(Error::shape("forward input", self.input_dim, x.len()));
        }
        let mut current = x.to_vec();
        let mut next = Vec::new();
        for layer in &self.layers {
            layer.forward_into(&current, &mut next);
            std::mem::swap(&mut current, &mut next);
        }
        Ok(current)
    }

    pub fn forward_batch(&self, xs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        xs.iter().map(|x| self.forward(x)).collect()
    }

    /// Forward pass keeping every layer's activation for backpropagation.
    fn forward_trace(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut trace = Vec::with_capacity(self.layers.len());
        let mut current = x;
        let mut owned;
        for layer in &self.layers {
            let mut out = Vec::new();
            layer.forward_into(current, &mut out);
            trace.push(out);
            owned = trace.last().unwrap();
            current = owned;
        }
        trace
    }

    /// Gradient of the Eq.-8 MSE loss (1/2n)·Σ‖y−a‖² over a full batch.
    pub fn backward(&self, inputs: &[Vec<f64>], targets: &[Vec<f64>]) -> Result<Gradients> {
        if inputs.len() != targets.len() {
            return Err(Error::shape("backward batch", inputs.len(), targets.len()));
        }
        if inputs.is_empty() {
            return Err(Error::domain("backward needs at least one sample"));
        }
        let n = inputs.len() as f64;
        let out_dim = self.output_dim();
        let mut d_outputs = Vec::with_capacity(inputs.len());
        for (x, t) in inputs.iter().zip(targets) {
            if t.len() != out_dim {
                return Err(Error::shape("target width", out_dim, t.len()));
            }
            let pred = self.forward(x)?;
            d_outputs.push(
                pred.iter()
                    .zip(t)
                    .map(|(p, a)| (p - a) / n)
                    .collect::<Vec<f64>>(),
            );
        }
        let (grads, _) = self.backward_from(inputs, &d_outputs)?;
        Ok(grads)
    }

    /// Backpropagates arbitrary upstream output gradients, returning the
    /// parameter gradients and the gradient with respect to each input row
    /// (the latter feeds the GAN generator update).
    pub fn backward_from(
        &self,
        inputs: &[Vec<f64>],
        d_outputs: &[Vec<f64>],
    ) -> Result<(Gradients, Vec<Vec<f64>>)> {
        if inputs.len() != d_outputs.len() {
            return Err(Error::shape(
                "upstream gradient batch",
                inputs.len(),
                d_outputs.len(),
            ));
        }
        let mut grads = Gradients::zeros(self);
        let mut d_inputs = Vec::with_capacity(inputs.len());
        for (x, d_out) in inputs.iter().zip(d_outputs) {
            if x.len() != self.input_dim {
                return Err(Error::shape("forward input", self.input_dim, x.len()));
            }
            if d_out.len() != self.output_dim() {
                return Err(Error::shape(
                    "upstream gradient width",
                    self.output_dim(),
                    d_out.len(),
                ));
            }
            let trace = self.forward_trace(x);
            let mut delta = d_out.clone();
            for (l, layer) in self.layers.iter().enumerate().rev() {
                let outputs = &trace[l];
                for (d, &y) in delta.iter_mut().zip(outputs) {
                    *d *= layer.activation.grad_from_output(y);
                }
                let layer_input: &[f64] = if l == 0 { x } else { &trace[l - 1] };
                let dw = &mut grads.d_weights[l];
                for (o, &dz) in delta.iter().enumerate() {
                    grads.d_biases[l][o] += dz;
                    let row = &mut dw[o * layer.in_dim..(o + 1) * layer.in_dim];
                    for (w, &xi) in row.iter_mut().zip(layer_input) {
                        *w += dz * xi;
                    }
                }
                // dL/d(layer input) = Wᵀ · dz
                let mut d_prev = vec![0.0; layer.in_dim];
                for (o, &dz) in delta.iter().enumerate() {
                    let row = &layer.weights[o * layer.in_dim..(o + 1) * layer.in_dim];
                    for (dp, &w) in d_prev.iter_mut().zip(row) {
                        *dp += w * dz;
                    }
                }
                delta = d_prev;
            }
            d_inputs.push(delta);
        }
        Ok((grads, d_inputs))
    }
}

fn init_layer(rng: &mut ChaCha8Rng, in_dim: usize, out_dim: usize, activation: Activation) -> Layer {
    let bound = (6.0 / (in_dim + out_dim) as f64).sqrt();
    let weights = (0..in_dim * out_dim)
        .map(|_| rng.gen_range(-bound..bound))
        .collect();
    Layer {
        in_dim,
        out_dim,
        weights,
        biases: vec![0.0; out_dim],
        activation,
    }
}

/// Parameter gradients matching an [`Mlp`] layer by layer.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub d_weights: Vec<Vec<f64>>,
    pub d_biases: Vec<Vec<f64>>,
}

impl Gradients {
    fn zeros(mlp: &Mlp) -> Self {
        Self {
            d_weights: mlp
                .layers
                .iter()
                .map(|l| vec![0.0; l.weights.len()])
                .collect(),
            d_biases: mlp
                .layers
                .iter()
                .map(|l| vec![0.0; l.biases.len()])
                .collect(),
        }
    }
}

/// Mean squared error L = (1/2n)·Σ‖y−a‖² over a batch of n samples.
pub fn mse_loss(predictions: &[Vec<f64>], targets: &[Vec<f64>]) -> Result<f64> {
    if predictions.len() != targets.len() {
        return Err(Error::shape(
            "loss batch",
            predictions.len(),
            targets.len(),
        ));
    }
    if predictions.is_empty() {
        return Err(Error::domain("loss needs at least one sample"));
    }
    let mut total = 0.0;
    for (p, t) in predictions.iter().zip(targets) {
        if p.len() != t.len() {
            return Err(Error::shape("loss sample width", t.len(), p.len()));
        }
        total += p
            .iter()
            .zip(t)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>();
    }
    Ok(total / (2.0 * predictions.len() as f64))
}
