//! Training loop and optimizers for [`Mlp`].

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{mse_loss, Gradients, Mlp};
use crate::{Error, Result};

pub const MOMENTUM_BETA: f64 = 0.9;
pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    Sgd,
    Momentum,
    Adam,
}

impl OptimizerKind {
    pub fn name(self) -> &'static str {
        match self {
            OptimizerKind::Sgd => "sgd",
            OptimizerKind::Momentum => "momentum",
            OptimizerKind::Adam => "adam",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "sgd" => Ok(OptimizerKind::Sgd),
            "momentum" => Ok(OptimizerKind::Momentum),
            "adam" => Ok(OptimizerKind::Adam),
            other => Err(Error::domain(format!("unknown optimizer `{other}`"))),
        }
    }
}

/// Stops training once the loss improvement over `patience` epochs falls
/// below `min_rel_improvement` relative to the earlier loss.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EarlyStop {
    pub patience: usize,
    pub min_rel_improvement: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub optimizer: OptimizerKind,
    /// None trains full-batch (the default); Some(b) shuffles each epoch with
    /// the config seed.
    pub batch_size: Option<usize>,
    pub seed: u64,
    pub early_stop: Option<EarlyStop>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 500,
            learning_rate: 0.01,
            optimizer: OptimizerKind::Adam,
            batch_size: None,
            seed: 0,
            early_stop: None,
        }
    }
}

/// Per-parameter state for momentum and Adam.
pub(crate) struct OptimizerState {
    kind: OptimizerKind,
    step: u64,
    m_w: Vec<Vec<f64>>,
    m_b: Vec<Vec<f64>>,
    v_w: Vec<Vec<f64>>,
    v_b: Vec<Vec<f64>>,
}

impl OptimizerState {
    pub(crate) fn new(mlp: &Mlp, kind: OptimizerKind) -> Self {
        let zeros_w: Vec<Vec<f64>> = mlp
            .layers()
            .iter()
            .map(|l| vec![0.0; l.weights().len()])
            .collect();
        let zeros_b: Vec<Vec<f64>> = mlp
            .layers()
            .iter()
            .map(|l| vec![0.0; l.biases().len()])
            .collect();
        Self {
            kind,
            step: 0,
            m_w: zeros_w.clone(),
            m_b: zeros_b.clone(),
            v_w: zeros_w,
            v_b: zeros_b,
        }
    }

    pub(crate) fn apply(&mut self, mlp: &mut Mlp, grads: &Gradients, lr: f64) {
        self.step += 1;
        for l in 0..mlp.layers().len() {
            let layer = &mut mlp.layers_mut()[l];
            match self.kind {
                OptimizerKind::Sgd => {
                    for (w, g) in layer.weights_mut().iter_mut().zip(&grads.d_weights[l]) {
                        *w -= lr * g;
                    }
                    for (b, g) in layer.biases_mut().iter_mut().zip(&grads.d_biases[l]) {
                        *b -= lr * g;
                    }
                }
                OptimizerKind::Momentum => {
                    for ((w, g), v) in layer
                        .weights_mut()
                        .iter_mut()
                        .zip(&grads.d_weights[l])
                        .zip(&mut self.m_w[l])
                    {
                        *v = MOMENTUM_BETA * *v + g;
                        *w -= lr * *v;
                    }
                    for ((b, g), v) in layer
                        .biases_mut()
                        .iter_mut()
                        .zip(&grads.d_biases[l])
                        .zip(&mut self.m_b[l])
                    {
                        *v = MOMENTUM_BETA * *v + g;
                        *b -= lr * *v;
                    }
                }
                OptimizerKind::Adam => {
                    let bias1 = 1.0 - ADAM_BETA1.powi(self.step as i32);
                    let bias2 = 1.0 - ADAM_BETA2.powi(self.step as i32);
                    let mut update = |p: &mut f64, g: f64, m: &mut f64, v: &mut f64| {
                        *m = ADAM_BETA1 * *m + (1.0 - ADAM_BETA1) * g;
                        *v = ADAM_BETA2 * *v + (1.0 - ADAM_BETA2) * g * g;
                        let m_hat = *m / bias1;
                        let v_hat = *v / bias2;
                        *p -= lr * m_hat / (v_hat.sqrt() + ADAM_EPS);
                    };
                    for ((w, &g), (m, v)) in layer
                        .weights_mut()
                        .iter_mut()
                        .zip(&grads.d_weights[l])
                        .zip(self.m_w[l].iter_mut().zip(&mut self.v_w[l]))
                    {
                        update(w, g, m, v);
                    }
                    for ((b, &g), (m, v)) in layer
                        .biases_mut()
                        .iter_mut()
                        .zip(&grads.d_biases[l])
                        .zip(self.m_b[l].iter_mut().zip(&mut self.v_b[l]))
                    {
                        update(b, g, m, v);
                    }
                }
            }
        }
    }
}

/// Trains on scaled inputs/targets and returns the loss history: one entry
/// per epoch evaluated before the update, plus the loss after the final
/// update. Deterministic given the config seed.
pub fn train(
    mlp: &mut Mlp,
    inputs: &[Vec<f64>],
    targets: &[Vec<f64>],
    config: &TrainConfig,
) -> Result<Vec<f64>> {
    if config.epochs == 0 {
        return Err(Error::domain("epochs must be at least 1"));
    }
    if !(config.learning_rate > 0.0) {
        return Err(Error::domain(format!(
            "learning rate must be positive, got {}",
            config.learning_rate
        )));
    }
    if inputs.len() != targets.len() {
        return Err(Error::shape("training batch", inputs.len(), targets.len()));
    }
    if inputs.is_empty() {
        return Err(Error::domain("training needs at least one sample"));
    }

    let mut optimizer = OptimizerState::new(mlp, config.optimizer);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..inputs.len()).collect();
    let mut history = Vec::with_capacity(config.epochs + 1);

    for epoch in 0..config.epochs {
        let loss = mse_loss(&mlp.forward_batch(inputs)?, targets)?;
        if !loss.is_finite() {
            return Err(Error::TrainingDiverged { epoch });
        }
        history.push(loss);
        if let Some(stop) = config.early_stop {
            if epoch >= stop.patience {
                let earlier = history[epoch - stop.patience];
                if earlier - loss < stop.min_rel_improvement * earlier.abs() {
                    return Ok(history);
                }
            }
        }
        match config.batch_size {
            None => {
                let grads = mlp.backward(inputs, targets)?;
                optimizer.apply(mlp, &grads, config.learning_rate);
            }
            Some(batch) => {
                let batch = batch.max(1);
                order.shuffle(&mut rng);
                for chunk in order.chunks(batch) {
                    let xs: Vec<Vec<f64>> = chunk.iter().map(|&i| inputs[i].clone()).collect();
                    let ts: Vec<Vec<f64>> = chunk.iter().map(|&i| targets[i].clone()).collect();
                    let grads = mlp.backward(&xs, &ts)?;
                    optimizer.apply(mlp, &grads, config.learning_rate);
                }
            }
        }
    }
    let final_loss = mse_loss(&mlp.forward_batch(inputs)?, targets)?;
    if !final_loss.is_finite() {
        return Err(Error::TrainingDiverged {
            epoch: config.epochs,
        });
    }
    history.push(final_loss);
    Ok(history)
}
