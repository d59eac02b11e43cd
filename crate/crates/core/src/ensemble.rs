//! Seed-averaged ensemble of independently trained regressors.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::mlp::{train_mlp, MlpParameters, TrainConfig, TrainingTrace};
use crate::rng::member_seed;
use crate::{LabeledRow, ScoreModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub members: Vec<MlpParameters>,
    pub member_seeds: Vec<u64>,
}

impl Ensemble {
    /// Mean of member predictions, summed in member order.
    pub fn predict(&self, x: &[f64]) -> Result<f64, CoreError> {
        let mut sum = 0.0;
        for member in &self.members {
            sum += member.forward(x)?;
        }
        Ok(sum / self.members.len() as f64)
    }
}

impl ScoreModel for Ensemble {
    fn predict(&self, x: &[f64]) -> Result<f64, CoreError> {
        Ensemble::predict(self, x)
    }
}

/// Train `m` members that differ only in their initialization seed.
///
/// Member `l` uses `member_seed(base_seed, l)`, so the artifact depends only
/// on `(data, config, m, base_seed)` and never on training order.
pub fn train_ensemble(
    train: &[LabeledRow],
    dev: &[LabeledRow],
    config: &TrainConfig,
    m: usize,
    base_seed: u64,
) -> Result<(Ensemble, Vec<TrainingTrace>), CoreError> {
    if m < 1 {
        return Err(CoreError::InvalidConfig(alloc::string::String::from(
            "ensemble size must be at least 1",
        )));
    }
    let mut members = Vec::with_capacity(m);
    let mut member_seeds = Vec::with_capacity(m);
    let mut traces = Vec::with_capacity(m);
    for l in 0..m {
        let seed = member_seed(base_seed, l as u64);
        let member_config = TrainConfig { seed, ..config.clone() };
        let (params, trace) = train_mlp(train, dev, &member_config)?;
        members.push(params);
        member_seeds.push(seed);
        traces.push(trace);
    }
    Ok((Ensemble { members, member_seeds }, traces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mlp::sigmoid;
    use crate::rng::SplitMix64;
    use alloc::vec;

    fn toy_data() -> (Vec<LabeledRow>, Vec<LabeledRow>) {
        let mut rng = SplitMix64::new(4);
        let make = |rng: &mut SplitMix64, n: usize| {
            (0..n)
                .map(|_| {
                    let x = rng.uniform(-2.0, 2.0);
                    LabeledRow { features: vec![x], target: sigmoid(2.0 * x) }
                })
                .collect::<Vec<_>>()
        };
        (make(&mut rng, 30), make(&mut rng, 8))
    }

    fn small_config() -> TrainConfig {
        TrainConfig { hidden_size: 3, epochs: 40, ..TrainConfig::default() }
    }

    #[test]
    fn single_member_matches_plain_training() {
        let (train, dev) = toy_data();
        let config = small_config();
        let (ensemble, _) = train_ensemble(&train, &dev, &config, 1, 123).unwrap();
        let solo_config = TrainConfig { seed: member_seed(123, 0), ..config };
        let (solo, _) = train_mlp(&train, &dev, &solo_config).unwrap();
        assert_eq!(ensemble.members[0], solo);
        let x = [0.4];
        assert_eq!(ensemble.predict(&x).unwrap(), solo.forward(&x).unwrap());
    }

    #[test]
    fn prediction_is_mean_and_bounded_by_members() {
        let (train, dev) = toy_data();
        let (ensemble, _) = train_ensemble(&train, &dev, &small_config(), 4, 9).unwrap();
        let x = [0.7];
        let preds: Vec<f64> = ensemble.members.iter().map(|p| p.forward(&x).unwrap()).collect();
        let mean = preds.iter().sum::<f64>() / preds.len() as f64;
        let y = ensemble.predict(&x).unwrap();
        assert!((y - mean).abs() <= f64::EPSILON);
        let lo = preds.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = preds.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(y >= lo && y <= hi);
    }

    #[test]
    fn retraining_is_deterministic() {
        let (train, dev) = toy_data();
        let (e1, _) = train_ensemble(&train, &dev, &small_config(), 3, 77).unwrap();
        let (e2, _) = train_ensemble(&train, &dev, &small_config(), 3, 77).unwrap();
        assert_eq!(e1, e2);
    }

    #[test]
    fn members_differ() {
        let (train, dev) = toy_data();
        let (e, _) = train_ensemble(&train, &dev, &small_config(), 2, 5).unwrap();
        assert_ne!(e.members[0], e.members[1]);
    }
}
