//! The full training pipeline: split, standardize, fit, profile, package.
//!
//! Shared by the CLI and the end-to-end tests so both exercise exactly the
//! same path. Standardization is fitted on the training split only; the good
//! profile (mean raw features of programs scoring above the threshold) is
//! likewise computed from the training split.

use std::ops::RangeInclusive;

use pydesign_core::baselines::{fit_cart, fit_linear_regression, fit_sigmoid_linear};
use pydesign_core::ensemble::train_ensemble;
use pydesign_core::feedback::compute_good_profile;
use pydesign_core::metrics::{avg_accuracy, mse_metric};
use pydesign_core::mlp::{train_mlp, TrainConfig};
use pydesign_core::split::{split_items, SplitSpec};
use pydesign_core::standardize::Standardizer;
use pydesign_core::{CoreError, LabeledRow};

use crate::artifact::{
    CartMeta, MetricSummary, ModelArtifact, ModelKind, ModelPayload, SplitMetrics, TrainMeta,
};
use crate::corpus::LoadedExample;

pub const DEFAULT_GOOD_THRESHOLD: f64 = 0.75;
pub const DEFAULT_CART_DEPTH: usize = 10;
pub const DEFAULT_CART_MIN_LEAF: usize = 2;

#[derive(Debug, Clone)]
pub struct TrainRequest {
    pub kind: ModelKind,
    pub split: SplitSpec,
    pub config: TrainConfig,
    pub ensemble_size: usize,
    pub good_threshold: f64,
    pub cart_max_depth: usize,
    pub cart_min_leaf: usize,
    pub depth_sweep: Option<RangeInclusive<usize>>,
}

impl TrainRequest {
    pub fn new(kind: ModelKind, split: SplitSpec, config: TrainConfig) -> Self {
        Self {
            kind,
            split,
            config,
            ensemble_size: 10,
            good_threshold: DEFAULT_GOOD_THRESHOLD,
            cart_max_depth: DEFAULT_CART_DEPTH,
            cart_min_leaf: DEFAULT_CART_MIN_LEAF,
            depth_sweep: None,
        }
    }
}

fn rows_for(examples: &[LoadedExample], standardizer: &Standardizer) -> Result<Vec<LabeledRow>, CoreError> {
    examples
        .iter()
        .map(|e| {
            Ok(LabeledRow { features: standardizer.apply(&e.features.values)?, target: e.score })
        })
        .collect()
}

fn metrics_on(
    model: &dyn pydesign_core::ScoreModel,
    rows: &[LabeledRow],
) -> Result<SplitMetrics, CoreError> {
    let preds: Vec<f64> =
        rows.iter().map(|r| model.predict(&r.features)).collect::<Result<_, _>>()?;
    let truths: Vec<f64> = rows.iter().map(|r| r.target).collect();
    Ok(SplitMetrics {
        mse: mse_metric(&preds, &truths)?,
        avg_accuracy: avg_accuracy(&preds, &truths)?,
    })
}

/// Train a model of the requested kind end to end and package the artifact.
pub fn train_pipeline(
    examples: &[LoadedExample],
    req: &TrainRequest,
) -> Result<ModelArtifact, CoreError> {
    let (train, dev, test) = split_items(examples, &req.split)?;

    let raw_train: Vec<Vec<f64>> = train.iter().map(|e| e.features.values.clone()).collect();
    let standardizer = Standardizer::fit(&raw_train)?;

    let train_rows = rows_for(&train, &standardizer)?;
    let dev_rows = rows_for(&dev, &standardizer)?;
    let test_rows = rows_for(&test, &standardizer)?;

    let mut member_seeds = Vec::new();
    let mut best_epochs = Vec::new();
    let mut cart_meta = None;

    let payload = match req.kind {
        ModelKind::Mlp => {
            let (params, trace) = train_mlp(&train_rows, &dev_rows, &req.config)?;
            member_seeds.push(req.config.seed);
            best_epochs.push(trace.best_epoch);
            ModelPayload::Mlp(params)
        }
        ModelKind::Ensemble => {
            if req.ensemble_size < 1 {
                return Err(CoreError::InvalidConfig(
                    "ensemble size must be at least 1".to_string(),
                ));
            }
            let (ensemble, traces) = train_ensemble(
                &train_rows,
                &dev_rows,
                &req.config,
                req.ensemble_size,
                req.config.seed,
            )?;
            member_seeds = ensemble.member_seeds.clone();
            best_epochs = traces.iter().map(|t| t.best_epoch).collect();
            ModelPayload::Ensemble(ensemble)
        }
        ModelKind::Linear => ModelPayload::Linear(fit_linear_regression(&train_rows)?),
        ModelKind::SigmoidLinear => {
            member_seeds.push(req.config.seed);
            ModelPayload::SigmoidLinear(fit_sigmoid_linear(&train_rows, &dev_rows, &req.config)?)
        }
        ModelKind::Cart => {
            let (depth, sweep) = match &req.depth_sweep {
                Some(range) => {
                    let mut sweep = Vec::new();
                    let mut best: Option<(usize, f64)> = None;
                    for depth in range.clone() {
                        let tree = fit_cart(&train_rows, depth, req.cart_min_leaf)?;
                        let dev_mse = metrics_on(&tree, &dev_rows)?.mse;
                        sweep.push((depth, dev_mse));
                        if best.is_none_or(|(_, m)| dev_mse < m) {
                            best = Some((depth, dev_mse));
                        }
                    }
                    let (depth, _) =
                        best.ok_or_else(|| CoreError::InvalidConfig("empty depth sweep".to_string()))?;
                    (depth, Some(sweep))
                }
                None => (req.cart_max_depth, None),
            };
            cart_meta = Some(CartMeta {
                max_depth: depth,
                min_leaf: req.cart_min_leaf,
                depth_sweep: sweep,
            });
            ModelPayload::Cart(fit_cart(&train_rows, depth, req.cart_min_leaf)?)
        }
    };

    let metrics = MetricSummary {
        train: metrics_on(payload.model(), &train_rows)?,
        dev: metrics_on(payload.model(), &dev_rows)?,
        test: metrics_on(payload.model(), &test_rows)?,
    };

    let good_examples: Vec<(Vec<f64>, f64)> =
        train.iter().map(|e| (e.features.values.clone(), e.score)).collect();
    let good_profile = match compute_good_profile(&good_examples, req.good_threshold) {
        Ok(profile) => Some(profile),
        Err(CoreError::NoGoodPrograms) => None,
        Err(e) => return Err(e),
    };

    let train_meta = TrainMeta {
        config: req.config.clone(),
        base_seed: req.config.seed,
        member_seeds,
        best_epochs,
        train_size: train.len(),
        dev_size: dev.len(),
        test_size: test.len(),
        metrics,
        cart: cart_meta,
    };

    Ok(ModelArtifact::new(payload, standardizer, good_profile, train_meta))
}

/// Metrics for an already-trained artifact over a labeled example set.
pub fn evaluate_artifact(
    artifact: &ModelArtifact,
    examples: &[LoadedExample],
) -> Result<SplitMetrics, CoreError> {
    if examples.is_empty() {
        return Err(CoreError::EmptyDataset);
    }
    let preds: Vec<f64> = examples
        .iter()
        .map(|e| artifact.predict_raw(&e.features.values))
        .collect::<Result<_, _>>()?;
    let truths: Vec<f64> = examples.iter().map(|e| e.score).collect();
    Ok(SplitMetrics {
        mse: mse_metric(&preds, &truths)?,
        avg_accuracy: avg_accuracy(&preds, &truths)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::generate_synthetic_corpus;

    fn corpus() -> Vec<LoadedExample> {
        let dir = tempfile::tempdir().unwrap();
        let manifest = generate_synthetic_corpus(40, 11, dir.path()).unwrap();
        crate::corpus::load_corpus(&manifest).unwrap()
    }

    fn small_config(seed: u64) -> TrainConfig {
        TrainConfig { hidden_size: 8, epochs: 40, seed, ..TrainConfig::default() }
    }

    #[test]
    fn linear_pipeline_produces_complete_artifact() {
        let examples = corpus();
        let split = SplitSpec::new(0.7, 0.15, 0.15, 5).unwrap();
        let req = TrainRequest::new(ModelKind::Linear, split, small_config(5));
        let artifact = train_pipeline(&examples, &req).unwrap();
        assert_eq!(artifact.model_kind, ModelKind::Linear);
        assert_eq!(artifact.train_meta.train_size, 28);
        assert_eq!(artifact.train_meta.dev_size, 6);
        assert_eq!(artifact.train_meta.test_size, 6);
        assert!(artifact.good_profile.is_some());
        assert!(artifact.train_meta.metrics.train.mse.is_finite());
    }

    #[test]
    fn ensemble_pipeline_records_member_seeds() {
        let examples = corpus();
        let split = SplitSpec::new(0.7, 0.15, 0.15, 5).unwrap();
        let mut req = TrainRequest::new(ModelKind::Ensemble, split, small_config(9));
        req.ensemble_size = 3;
        let artifact = train_pipeline(&examples, &req).unwrap();
        assert_eq!(artifact.train_meta.member_seeds.len(), 3);
        assert_eq!(artifact.train_meta.best_epochs.len(), 3);
    }

    #[test]
    fn pipeline_is_deterministic() {
        let examples = corpus();
        let split = SplitSpec::new(0.7, 0.15, 0.15, 2).unwrap();
        let req = TrainRequest::new(ModelKind::Mlp, split, small_config(3));
        let a = train_pipeline(&examples, &req).unwrap();
        let b = train_pipeline(&examples, &req).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn cart_depth_sweep_picks_lowest_dev_mse() {
        let examples = corpus();
        let split = SplitSpec::new(0.7, 0.15, 0.15, 4).unwrap();
        let mut req = TrainRequest::new(ModelKind::Cart, split, small_config(4));
        req.depth_sweep = Some(1..=6);
        let artifact = train_pipeline(&examples, &req).unwrap();
        let meta = artifact.train_meta.cart.unwrap();
        let sweep = meta.depth_sweep.unwrap();
        let best = sweep.iter().map(|&(_, m)| m).fold(f64::INFINITY, f64::min);
        let chosen = sweep.iter().find(|&&(d, _)| d == meta.max_depth).unwrap();
        assert_eq!(chosen.1, best);
    }

    #[test]
    fn evaluate_matches_train_meta_on_train_metrics() {
        let examples = corpus();
        let split = SplitSpec::new(0.7, 0.15, 0.15, 8).unwrap();
        let req = TrainRequest::new(ModelKind::Linear, split, small_config(8));
        let artifact = train_pipeline(&examples, &req).unwrap();
        let (train, _, _) = split_items(&examples, &split).unwrap();
        let on_train = evaluate_artifact(&artifact, &train).unwrap();
        assert!((on_train.mse - artifact.train_meta.metrics.train.mse).abs() < 1e-12);
    }
}
