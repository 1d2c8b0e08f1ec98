//! Tabular GAN augmentation: a small generator/discriminator pair trained on
//! the scaled table, a physical boundary filter for the generated rows, and
//! nearest-record MAPE as the similarity metric.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::nn::{Activation, LayerSpec, Mlp, OptimizerKind, OptimizerState};
use crate::{Error, Result};

/// Sigmoid outputs are clamped to this window inside the cross-entropy so the
/// loss and its gradient stay finite.
const BCE_EPS: f64 = 1e-7;

/// Per-feature [lower, upper] acceptance window in scaled space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundarySpec {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoundarySpec {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::shape("boundary widths", lower.len(), upper.len()));
        }
        for (j, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo < hi) {
                return Err(Error::domain(format!(
                    "boundary for feature {j}: lower {lo} must be below upper {hi}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// Default windows: lower 0 everywhere; upper 2.0 for scaled thrust, 1.4
    /// for scaled efficiency, 1.5 for everything else.
    pub fn defaults_for(feature_names: &[String]) -> Self {
        let upper = feature_names
            .iter()
            .map(|name| match name.as_str() {
                "thrust_mn" => 2.0,
                "eta_anode" => 1.4,
                _ => 1.5,
            })
            .collect();
        Self {
            lower: vec![0.0; feature_names.len()],
            upper,
        }
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn contains(&self, row: &[f64]) -> Result<bool> {
        if row.len() != self.len() {
            return Err(Error::shape("boundary row width", self.len(), row.len()));
        }
        Ok(row
            .iter()
            .enumerate()
            .all(|(j, &v)| v >= self.lower[j] && v <= self.upper[j]))
    }
}

/// GAN architecture and training knobs. The generator emits unconstrained
/// linear outputs (out-of-range rows are handled by the boundary filter); the
/// discriminator ends in a sigmoid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GanConfig {
    pub noise_dim: usize,
    pub generator_hidden: Vec<LayerSpec>,
    /// Activation on the generator's output layer.
    pub generator_output: Activation,
    pub discriminator_hidden: Vec<LayerSpec>,
    pub epochs: usize,
    pub lr_generator: f64,
    pub lr_discriminator: f64,
    /// Smoothed label for real rows in the discriminator update.
    pub real_label: f64,
    /// Discriminator updates per generator update.
    pub disc_steps: usize,
    /// Rows the discriminator judges jointly. 1 is a per-row critic; 2 lets
    /// it see sample diversity, which penalizes mode collapse.
    pub pack_size: usize,
    /// Noise rows per generator update (defaults to the real-row count).
    pub gen_batch: Option<usize>,
    /// Cosine-decay floor for both learning rates (1.0 disables decay).
    pub lr_floor: f64,
    pub seed: u64,
}

impl Default for GanConfig {
    fn default() -> Self {
        Self {
            noise_dim: 8,
            generator_hidden: vec![
                LayerSpec {
                    width: 32,
                    activation: Activation::Relu,
                },
                LayerSpec {
                    width: 32,
                    activation: Activation::Relu,
                },
            ],
            generator_output: Activation::Identity,
            discriminator_hidden: vec![
                LayerSpec {
                    width: 32,
                    activation: Activation::Relu,
                },
                LayerSpec {
                    width: 16,
                    activation: Activation::Relu,
                },
            ],
            epochs: 1500,
            lr_generator: 2e-3,
            lr_discriminator: 2e-3,
            real_label: 0.9,
            disc_steps: 1,
            pack_size: 2,
            gen_batch: None,
            lr_floor: 1.0,
            seed: 0,
        }
    }
}

/// Trained generator/discriminator pair with the real rows it was fitted on.
#[derive(Debug, Clone)]
pub struct GanModel {
    pub generator: Mlp,
    pub discriminator: Mlp,
    pub real_rows: Vec<Vec<f64>>,
    pub bounds: BoundarySpec,
    pub generator_loss: Vec<f64>,
    pub discriminator_loss: Vec<f64>,
}

/// A batch of generated rows with per-row nearest-record MAPE and the
/// boundary-filter verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticBatch {
    pub rows: Vec<Vec<f64>>,
    pub mape_pct: Vec<f64>,
    pub kept: Vec<bool>,
}

impl SyntheticBatch {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn kept_rows(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .zip(&self.kept)
            .filter(|(_, &k)| k)
            .map(|(r, _)| r.clone())
            .collect()
    }

    pub fn outlier_fraction(&self) -> f64 {
        if self.kept.is_empty() {
            return 0.0;
        }
        self.kept.iter().filter(|&&k| !k).count() as f64 / self.kept.len() as f64
    }

    pub fn mean_mape_pct(&self) -> f64 {
        if self.mape_pct.is_empty() {
            return 0.0;
        }
        self.mape_pct.iter().sum::<f64>() / self.mape_pct.len() as f64
    }
}

/// Adversarial training on rows scaled to [0, 1]: each epoch updates the
/// discriminator on a real-vs-fake batch with binary cross-entropy, then the
/// generator on the discriminator's feedback. Deterministic given the seed.
pub fn train_gan(
    scaled_rows: &[Vec<f64>],
    bounds: BoundarySpec,
    config: &GanConfig,
) -> Result<GanModel> {
    if scaled_rows.len() < 8 {
        return Err(Error::InsufficientData {
            needed: 8,
            got: scaled_rows.len(),
        });
    }
    if config.noise_dim == 0 {
        return Err(Error::domain("noise_dim must be at least 1"));
    }
    if config.epochs == 0 {
        return Err(Error::domain("epochs must be at least 1"));
    }
    let width = scaled_rows[0].len();
    if bounds.len() != width {
        return Err(Error::shape("boundary spec width", width, bounds.len()));
    }
    for (i, row) in scaled_rows.iter().enumerate() {
        if row.len() != width {
            return Err(Error::shape(format!("scaled row {i}"), width, row.len()));
        }
    }

    let mut generator = Mlp::new(
        config.noise_dim,
        &config.generator_hidden,
        width,
        config.generator_output,
        config.seed,
    )?;
    // start the fakes at the data centroid
    let centroid: Vec<f64> = (0..width)
        .map(|j| scaled_rows.iter().map(|r| r[j]).sum::<f64>() / scaled_rows.len() as f64)
        .collect();
    if let Some(last) = generator.layers_mut().last_mut() {
        last.biases_mut().copy_from_slice(&centroid);
    }
    let pack = config.pack_size.max(1);
    let mut discriminator = Mlp::new(
        width * pack,
        &config.discriminator_hidden,
        1,
        Activation::Sigmoid,
        config.seed.wrapping_add(1),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(2));
    let n_real = scaled_rows.len();
    let mut gen_opt = OptimizerState::new(&generator, OptimizerKind::Adam);
    let mut disc_opt = OptimizerState::new(&discriminator, OptimizerKind::Adam);
    let mut generator_loss = Vec::with_capacity(config.epochs);
    let mut discriminator_loss = Vec::with_capacity(config.epochs);

    let disc_steps = config.disc_steps.max(1);
    for epoch in 0..config.epochs {
        // cosine decay from 1 down to lr_floor across the run
        let progress = epoch as f64 / config.epochs as f64;
        let decay = config.lr_floor
            + (1.0 - config.lr_floor) * 0.5 * (1.0 + (std::f64::consts::PI * progress).cos());
        let lr_d = config.lr_discriminator * decay;
        let lr_g = config.lr_generator * decay;

        // discriminator step(s): packed real rows (smoothed label) vs packed
        // fresh fakes (label 0)
        let mut d_loss = 0.0;
        for _ in 0..disc_steps {
            let real_packs: Vec<Vec<f64>> = (0..n_real)
                .map(|_| {
                    let mut packed = Vec::with_capacity(width * pack);
                    for _ in 0..pack {
                        packed.extend_from_slice(&scaled_rows[rng.gen_range(0..n_real)]);
                    }
                    packed
                })
                .collect();
            let noise = sample_noise(&mut rng, n_real * pack, config.noise_dim);
            let fake_packs = pack_rows(&generator.forward_batch(&noise)?, pack);
            let mut disc_in = real_packs;
            disc_in.extend(fake_packs);
            let mut labels = vec![config.real_label; n_real];
            labels.extend(vec![0.0; n_real]);
            let preds = discriminator.forward_batch(&disc_in)?;
            d_loss = bce_loss(&preds, &labels);
            if !d_loss.is_finite() {
                return Err(Error::TrainingDiverged { epoch });
            }
            let upstream = bce_output_grad(&preds, &labels);
            let (d_grads, _) = discriminator.backward_from(&disc_in, &upstream)?;
            disc_opt.apply(&mut discriminator, &d_grads, lr_d);
        }

        // generator step: push fresh fake packs toward the "real" label
        let n_gen = config.gen_batch.unwrap_or(n_real).max(1);
        let noise = sample_noise(&mut rng, n_gen * pack, config.noise_dim);
        let fakes = generator.forward_batch(&noise)?;
        let packs = pack_rows(&fakes, pack);
        let preds = discriminator.forward_batch(&packs)?;
        let ones = vec![1.0; n_gen];
        let g_loss = bce_loss(&preds, &ones);
        if !g_loss.is_finite() {
            return Err(Error::TrainingDiverged { epoch });
        }
        let upstream = bce_output_grad(&preds, &ones);
        let (_, d_packs) = discriminator.backward_from(&packs, &upstream)?;
        let d_fakes = unpack_rows(&d_packs, width, pack);
        let (g_grads, _) = generator.backward_from(&noise, &d_fakes)?;
        gen_opt.apply(&mut generator, &g_grads, lr_g);

        discriminator_loss.push(d_loss);
        generator_loss.push(g_loss);
    }

    Ok(GanModel {
        generator,
        discriminator,
        real_rows: scaled_rows.to_vec(),
        bounds,
        generator_loss,
        discriminator_loss,
    })
}

/// Samples `n` rows from the generator, scoring each against the nearest real
/// record and flagging boundary violations. Pure given (model, seed).
pub fn generate(gan: &GanModel, n: usize, seed: u64) -> Result<SyntheticBatch> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = sample_noise(&mut rng, n, gan.generator.input_dim());
    let rows = gan.generator.forward_batch(&noise)?;
    let mut mape_pct = Vec::with_capacity(n);
    let mut kept = Vec::with_capacity(n);
    for row in &rows {
        mape_pct.push(nearest_record_deviation(row, &gan.real_rows) * 100.0);
        kept.push(gan.bounds.contains(row)?);
    }
    Ok(SyntheticBatch {
        rows,
        mape_pct,
        kept,
    })
}

/// Order-stable partition of rows into (kept, outliers) by the boundary spec.
pub fn boundary_filter(
    rows: &[Vec<f64>],
    bounds: &BoundarySpec,
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let mut kept = Vec::new();
    let mut outliers = Vec::new();
    for row in rows {
        if bounds.contains(row)? {
            kept.push(row.clone());
        } else {
            outliers.push(row.clone());
        }
    }
    Ok((kept, outliers))
}

/// Mean absolute percentage error of fake rows against their nearest real
/// record: per fake row, the real row minimizing the mean absolute relative
/// deviation across features; zero-valued real features are skipped with the
/// feature count adjusted.
pub fn similarity_mape(fake: &[Vec<f64>], real: &[Vec<f64>]) -> Result<f64> {
    if fake.is_empty() || real.is_empty() {
        return Err(Error::domain(
            "similarity needs non-empty fake and real sets",
        ));
    }
    let width = real[0].len();
    for row in fake.iter().chain(real) {
        if row.len() != width {
            return Err(Error::shape("similarity row width", width, row.len()));
        }
    }
    let total: f64 = fake
        .iter()
        .map(|row| nearest_record_deviation(row, real))
        .sum();
    Ok(total / fake.len() as f64 * 100.0)
}

/// Min over real rows of the pair's mean absolute relative deviation.
fn nearest_record_deviation(fake: &[f64], real: &[Vec<f64>]) -> f64 {
    real.iter()
        .map(|r| pair_deviation(fake, r))
        .fold(f64::INFINITY, f64::min)
}

fn pair_deviation(fake: &[f64], real: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut count = 0usize;
    for (&f, &r) in fake.iter().zip(real) {
        if r != 0.0 {
            sum += ((f - r) / r).abs();
            count += 1;
        }
    }
    if count == 0 {
        // no comparable feature: identical all-zero rows match, anything else
        // is maximally dissimilar
        if fake.iter().zip(real).all(|(&f, &r)| f == r) {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        sum / count as f64
    }
}

/// Classification accuracy of the trained discriminator on packed real rows
/// mixed with `n_fake` freshly generated rows (threshold 0.5). A healthy,
/// non-collapsed run sits strictly between chance and perfection.
pub fn discriminator_accuracy(gan: &GanModel, n_fake: usize, seed: u64) -> Result<f64> {
    let width = gan.real_rows[0].len();
    let pack = gan.discriminator.input_dim() / width;
    let batch = generate(gan, n_fake * pack, seed)?;
    let mut correct = 0usize;
    let mut total = 0usize;
    // deterministic circular pairing of the real rows
    let n_real = gan.real_rows.len();
    for i in 0..n_real {
        let mut packed = Vec::with_capacity(width * pack);
        for k in 0..pack {
            packed.extend_from_slice(&gan.real_rows[(i + k) % n_real]);
        }
        let p = gan.discriminator.forward(&packed)?[0];
        correct += (p >= 0.5) as usize;
        total += 1;
    }
    for packed in pack_rows(&batch.rows, pack) {
        let p = gan.discriminator.forward(&packed)?[0];
        correct += (p < 0.5) as usize;
        total += 1;
    }
    Ok(correct as f64 / total as f64)
}

/// Concatenates consecutive rows into packs of `pack` rows.
fn pack_rows(rows: &[Vec<f64>], pack: usize) -> Vec<Vec<f64>> {
    rows.chunks(pack)
        .filter(|c| c.len() == pack)
        .map(|c| c.concat())
        .collect()
}

/// Splits pack gradients back into per-row gradients.
fn unpack_rows(packs: &[Vec<f64>], width: usize, pack: usize) -> Vec<Vec<f64>> {
    let mut rows = Vec::with_capacity(packs.len() * pack);
    for p in packs {
        for k in 0..pack {
            rows.push(p[k * width..(k + 1) * width].to_vec());
        }
    }
    rows
}

fn sample_noise(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.sample(StandardNormal)).collect())
        .collect()
}

fn bce_loss(predictions: &[Vec<f64>], labels: &[f64]) -> f64 {
    let n = labels.len() as f64;
    predictions
        .iter()
        .zip(labels)
        .map(|(p, &t)| {
            let p = p[0].clamp(BCE_EPS, 1.0 - BCE_EPS);
            -(t * p.ln() + (1.0 - t) * (1.0 - p).ln())
        })
        .sum::<f64>()
        / n
}

fn bce_output_grad(predictions: &[Vec<f64>], labels: &[f64]) -> Vec<Vec<f64>> {
    let n = labels.len() as f64;
    predictions
        .iter()
        .zip(labels)
        .map(|(p, &t)| {
            let p = p[0].clamp(BCE_EPS, 1.0 - BCE_EPS);
            vec![(p - t) / (p * (1.0 - p) * n)]
        })
        .collect()
}
