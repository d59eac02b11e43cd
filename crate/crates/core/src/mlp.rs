//! Single-hidden-layer regressor trained from scratch.
//!
//! The network is `sigmoid(V . relu(W x + b) + c)`: one ReLU hidden layer and
//! a single sigmoid output neuron, trained full-batch with ADAM under MSE plus
//! an L2 penalty on weights (biases are exempt). One ADAM step is taken per
//! epoch; the snapshot with the lowest development-set MSE wins, earliest
//! epoch on ties.
//!
//! Conventions pinned here because tests depend on them:
//! - ReLU subgradient at exactly 0 is 0.
//! - Initial weights are uniform in +-sqrt(6/(fan_in+fan_out)) per layer,
//!   drawn from a SplitMix64 stream in row-major hidden-weight order, then
//!   output weights; biases start at 0.
//! - Bias terms can be disabled (`use_bias = false`) to recover the literal
//!   bias-free formulation.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::rng::SplitMix64;
use crate::{LabeledRow, ScoreModel};

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpParameters {
    pub input_dim: usize,
    pub hidden_dim: usize,
    /// Row-major `hidden_dim x input_dim`.
    pub hidden_weights: Vec<f64>,
    pub hidden_bias: Vec<f64>,
    pub output_weights: Vec<f64>,
    pub output_bias: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub hidden_size: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_epsilon: f64,
    pub l2_lambda: f64,
    pub seed: u64,
    pub use_bias: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            hidden_size: 32,
            epochs: 250,
            learning_rate: 0.001,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_epsilon: 1e-8,
            l2_lambda: 1e-4,
            seed: 0,
            use_bias: true,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), CoreError> {
        let ok = self.epochs >= 1
            && self.hidden_size >= 1
            && self.learning_rate > 0.0
            && (0.0..1.0).contains(&self.adam_beta1)
            && (0.0..1.0).contains(&self.adam_beta2)
            && self.l2_lambda >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(CoreError::InvalidConfig("train config out of range".to_string()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub dev_mse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingTrace {
    pub epochs: Vec<EpochRecord>,
    pub best_epoch: usize,
}

/// Gradients (or ADAM moments) shaped like [`MlpParameters`].
#[derive(Debug, Clone, PartialEq)]
pub struct MlpGradients {
    pub hidden_weights: Vec<f64>,
    pub hidden_bias: Vec<f64>,
    pub output_weights: Vec<f64>,
    pub output_bias: f64,
}

impl MlpParameters {
    pub fn n_params(&self) -> usize {
        self.hidden_weights.len() + self.hidden_bias.len() + self.output_weights.len() + 1
    }

    /// Flat layout: hidden weights, output weights, hidden biases, output
    /// bias. Weight entries come first so the L2 region is a prefix.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut flat = Vec::with_capacity(self.n_params());
        flat.extend_from_slice(&self.hidden_weights);
        flat.extend_from_slice(&self.output_weights);
        flat.extend_from_slice(&self.hidden_bias);
        flat.push(self.output_bias);
        flat
    }

    pub fn from_flat(input_dim: usize, hidden_dim: usize, flat: &[f64]) -> Self {
        let wh = hidden_dim * input_dim;
        Self {
            input_dim,
            hidden_dim,
            hidden_weights: flat[..wh].to_vec(),
            output_weights: flat[wh..wh + hidden_dim].to_vec(),
            hidden_bias: flat[wh + hidden_dim..wh + 2 * hidden_dim].to_vec(),
            output_bias: flat[wh + 2 * hidden_dim],
        }
    }

    /// Number of leading flat entries subject to the L2 penalty.
    pub fn weight_count(&self) -> usize {
        self.hidden_weights.len() + self.output_weights.len()
    }
}

impl MlpGradients {
    pub fn to_flat(&self) -> Vec<f64> {
        let mut flat = Vec::with_capacity(
            self.hidden_weights.len() + self.output_weights.len() + self.hidden_bias.len() + 1,
        );
        flat.extend_from_slice(&self.hidden_weights);
        flat.extend_from_slice(&self.output_weights);
        flat.extend_from_slice(&self.hidden_bias);
        flat.push(self.output_bias);
        flat
    }
}

/// Fan-balanced uniform initialization, fully determined by `seed`.
pub fn init_mlp(seed: u64, input_dim: usize, hidden_dim: usize) -> MlpParameters {
    let mut rng = SplitMix64::new(seed);
    let hidden_bound = libm::sqrt(6.0 / (input_dim + hidden_dim) as f64);
    let hidden_weights = (0..hidden_dim * input_dim)
        .map(|_| rng.uniform(-hidden_bound, hidden_bound))
        .collect();
    let output_bound = libm::sqrt(6.0 / (hidden_dim + 1) as f64);
    let output_weights = (0..hidden_dim)
        .map(|_| rng.uniform(-output_bound, output_bound))
        .collect();
    MlpParameters {
        input_dim,
        hidden_dim,
        hidden_weights,
        hidden_bias: vec![0.0; hidden_dim],
        output_weights,
        output_bias: 0.0,
    }
}

impl MlpParameters {
    fn hidden_activations(&self, x: &[f64]) -> Vec<f64> {
        let mut hidden = Vec::with_capacity(self.hidden_dim);
        for j in 0..self.hidden_dim {
            let row = &self.hidden_weights[j * self.input_dim..(j + 1) * self.input_dim];
            let mut a = self.hidden_bias[j];
            for (w, xi) in row.iter().zip(x) {
                a += w * xi;
            }
            hidden.push(if a > 0.0 { a } else { 0.0 });
        }
        hidden
    }

    pub fn forward(&self, x: &[f64]) -> Result<f64, CoreError> {
        if x.len() != self.input_dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.input_dim,
                got: x.len(),
            });
        }
        let hidden = self.hidden_activations(x);
        let mut z = self.output_bias;
        for (v, h) in self.output_weights.iter().zip(&hidden) {
            z += v * h;
        }
        Ok(sigmoid(z))
    }
}

impl ScoreModel for MlpParameters {
    fn predict(&self, x: &[f64]) -> Result<f64, CoreError> {
        self.forward(x)
    }
}

/// Mean squared error over the batch plus `l2_lambda * sum(w^2)` over weights.
pub fn mlp_loss(params: &MlpParameters, batch: &[LabeledRow], l2_lambda: f64) -> Result<f64, CoreError> {
    if batch.is_empty() {
        return Err(CoreError::EmptyBatch);
    }
    let mut sse = 0.0;
    for row in batch {
        let y = params.forward(&row.features)?;
        let e = row.target - y;
        sse += e * e;
    }
    let mut penalty = 0.0;
    for w in params.hidden_weights.iter().chain(&params.output_weights) {
        penalty += w * w;
    }
    Ok(sse / batch.len() as f64 + l2_lambda * penalty)
}

/// Exact backpropagation gradient of [`mlp_loss`].
pub fn mlp_gradients(
    params: &MlpParameters,
    batch: &[LabeledRow],
    l2_lambda: f64,
) -> Result<MlpGradients, CoreError> {
    if batch.is_empty() {
        return Err(CoreError::EmptyBatch);
    }
    let d = params.input_dim;
    let h = params.hidden_dim;
    let n = batch.len() as f64;
    let mut g_hw = vec![0.0; d * h];
    let mut g_hb = vec![0.0; h];
    let mut g_ow = vec![0.0; h];
    let mut g_ob = 0.0;

    for row in batch {
        if row.features.len() != d {
            return Err(CoreError::DimensionMismatch {
                expected: d,
                got: row.features.len(),
            });
        }
        let hidden = params.hidden_activations(&row.features);
        let mut z = params.output_bias;
        for (v, hj) in params.output_weights.iter().zip(&hidden) {
            z += v * hj;
        }
        let y = sigmoid(z);
        // d(mse)/dz for this sample; sigma'(z) = y(1-y).
        let dz = 2.0 * (y - row.target) * y * (1.0 - y) / n;
        g_ob += dz;
        for j in 0..h {
            g_ow[j] += dz * hidden[j];
            // ReLU subgradient at 0 is 0: active only when the unit is
            // strictly positive.
            if hidden[j] > 0.0 {
                let da = dz * params.output_weights[j];
                g_hb[j] += da;
                let row_grad = &mut g_hw[j * d..(j + 1) * d];
                for (g, xi) in row_grad.iter_mut().zip(&row.features) {
                    *g += da * xi;
                }
            }
        }
    }

    if l2_lambda > 0.0 {
        for (g, w) in g_hw.iter_mut().zip(&params.hidden_weights) {
            *g += 2.0 * l2_lambda * w;
        }
        for (g, w) in g_ow.iter_mut().zip(&params.output_weights) {
            *g += 2.0 * l2_lambda * w;
        }
    }

    Ok(MlpGradients {
        hidden_weights: g_hw,
        hidden_bias: g_hb,
        output_weights: g_ow,
        output_bias: g_ob,
    })
}

/// ADAM first/second moment accumulators over the flat parameter layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
}

impl AdamState {
    pub fn new(n_params: usize) -> Self {
        Self {
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
        }
    }
}

/// One ADAM step with bias correction; `step_index` starts at 1.
pub fn adam_update(
    state: &mut AdamState,
    params: &mut MlpParameters,
    grads: &MlpGradients,
    config: &TrainConfig,
    step_index: usize,
) {
    debug_assert!(step_index >= 1);
    let mut flat = params.to_flat();
    let g_flat = grads.to_flat();
    let b1 = config.adam_beta1;
    let b2 = config.adam_beta2;
    let bc1 = 1.0 - libm::pow(b1, step_index as f64);
    let bc2 = 1.0 - libm::pow(b2, step_index as f64);
    let bias_start = if config.use_bias { flat.len() } else { params.weight_count() };
    for i in 0..flat.len() {
        let g = g_flat[i];
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
        state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
        if i >= bias_start {
            continue; // bias-free mode keeps biases frozen at 0
        }
        let m_hat = state.m[i] / bc1;
        let v_hat = state.v[i] / bc2;
        flat[i] -= config.learning_rate * m_hat / (libm::sqrt(v_hat) + config.adam_epsilon);
    }
    *params = MlpParameters::from_flat(params.input_dim, params.hidden_dim, &flat);
}

fn dev_mse(params: &MlpParameters, dev: &[LabeledRow]) -> Result<f64, CoreError> {
    let mut sse = 0.0;
    for row in dev {
        let e = row.target - params.forward(&row.features)?;
        sse += e * e;
    }
    Ok(sse / dev.len() as f64)
}

/// Full-batch ADAM training with best-dev-epoch selection.
pub fn train_mlp(
    train: &[LabeledRow],
    dev: &[LabeledRow],
    config: &TrainConfig,
) -> Result<(MlpParameters, TrainingTrace), CoreError> {
    if train.is_empty() || dev.is_empty() {
        return Err(CoreError::EmptyDataset);
    }
    config.validate()?;
    let input_dim = train[0].features.len();
    let mut params = init_mlp(config.seed, input_dim, config.hidden_size);
    let mut state = AdamState::new(params.n_params());

    let mut best_params = params.clone();
    let mut best_mse = f64::INFINITY;
    let mut best_epoch = 0;
    let mut epochs = Vec::with_capacity(config.epochs);

    for epoch in 1..=config.epochs {
        let grads = mlp_gradients(&params, train, config.l2_lambda)?;
        adam_update(&mut state, &mut params, &grads, config, epoch);
        let train_loss = mlp_loss(&params, train, config.l2_lambda)?;
        let mse = dev_mse(&params, dev)?;
        epochs.push(EpochRecord {
            epoch,
            train_loss,
            dev_mse: mse,
        });
        if mse < best_mse {
            best_mse = mse;
            best_epoch = epoch;
            best_params = params.clone();
        }
    }

    Ok((best_params, TrainingTrace { epochs, best_epoch }))
}
