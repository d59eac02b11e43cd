//! Versioned on-disk model artifact.
//!
//! A single JSON document carrying everything prediction and feedback need:
//! the standardizer, the good-program profile, the model payload, and the
//! training metadata. Loading fails closed on any unknown format or feature
//! schema version. Weights are stored as decimal text by the JSON encoding;
//! `f64` round-trips exactly, so save → load → predict is bit-identical.

use std::fs;
use std::path::Path;

use pydesign_core::baselines::{LinearModel, RegressionTree, SigmoidLinearModel};
use pydesign_core::ensemble::Ensemble;
use pydesign_core::feedback::GoodProfile;
use pydesign_core::mlp::{MlpParameters, TrainConfig};
use pydesign_core::standardize::Standardizer;
use pydesign_core::{CoreError, ScoreModel, SCHEMA_VERSION};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Mlp,
    Ensemble,
    Linear,
    SigmoidLinear,
    Cart,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ModelKind::Mlp => "mlp",
            ModelKind::Ensemble => "ensemble",
            ModelKind::Linear => "linear",
            ModelKind::SigmoidLinear => "sigmoid-linear",
            ModelKind::Cart => "cart",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mlp" => Ok(ModelKind::Mlp),
            "ensemble" => Ok(ModelKind::Ensemble),
            "linear" => Ok(ModelKind::Linear),
            "sigmoid-linear" => Ok(ModelKind::SigmoidLinear),
            "cart" => Ok(ModelKind::Cart),
            other => Err(format!(
                "unknown model kind `{other}` (expected mlp, ensemble, linear, sigmoid-linear, or cart)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "weights", rename_all = "kebab-case")]
pub enum ModelPayload {
    Mlp(MlpParameters),
    Ensemble(Ensemble),
    Linear(LinearModel),
    SigmoidLinear(SigmoidLinearModel),
    Cart(RegressionTree),
}

impl ModelPayload {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelPayload::Mlp(_) => ModelKind::Mlp,
            ModelPayload::Ensemble(_) => ModelKind::Ensemble,
            ModelPayload::Linear(_) => ModelKind::Linear,
            ModelPayload::SigmoidLinear(_) => ModelKind::SigmoidLinear,
            ModelPayload::Cart(_) => ModelKind::Cart,
        }
    }

    pub fn model(&self) -> &dyn ScoreModel {
        match self {
            ModelPayload::Mlp(m) => m,
            ModelPayload::Ensemble(m) => m,
            ModelPayload::Linear(m) => m,
            ModelPayload::SigmoidLinear(m) => m,
            ModelPayload::Cart(m) => m,
        }
    }
}

/// Metric pair on one split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitMetrics {
    pub mse: f64,
    pub avg_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub train: SplitMetrics,
    pub dev: SplitMetrics,
    pub test: SplitMetrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartMeta {
    pub max_depth: usize,
    pub min_leaf: usize,
    /// `(depth, dev mse)` when a sweep selected the depth.
    pub depth_sweep: Option<Vec<(usize, f64)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainMeta {
    pub config: TrainConfig,
    pub base_seed: u64,
    pub member_seeds: Vec<u64>,
    pub best_epochs: Vec<usize>,
    pub train_size: usize,
    pub dev_size: usize,
    pub test_size: usize,
    pub metrics: MetricSummary,
    pub cart: Option<CartMeta>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArtifact {
    pub format_version: String,
    pub model_kind: ModelKind,
    pub feature_schema_version: String,
    pub standardizer: Standardizer,
    pub good_profile: Option<GoodProfile>,
    pub payload: ModelPayload,
    pub train_meta: TrainMeta,
}

#[derive(Debug, thiserror::Error)]
pub enum ArtifactError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: not a model artifact: {source}")]
    Malformed {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("unsupported {field} `{got}` (this build reads `{expected}`)")]
    VersionMismatch { field: &'static str, expected: &'static str, got: String },
    #[error("artifact kind field says {declared} but the payload is {actual}")]
    KindMismatch { declared: ModelKind, actual: ModelKind },
}

impl ModelArtifact {
    pub fn new(
        payload: ModelPayload,
        standardizer: Standardizer,
        good_profile: Option<GoodProfile>,
        train_meta: TrainMeta,
    ) -> Self {
        Self {
            format_version: FORMAT_VERSION.to_string(),
            model_kind: payload.kind(),
            feature_schema_version: SCHEMA_VERSION.to_string(),
            standardizer,
            good_profile,
            payload,
            train_meta,
        }
    }

    /// Standardize raw features with the stored statistics, then predict.
    pub fn predict_raw(&self, raw: &[f64]) -> Result<f64, CoreError> {
        let x = self.standardizer.apply(raw)?;
        self.payload.model().predict(&x)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("artifact serializes");
        text.push('\n');
        text
    }

    pub fn save(&self, path: &Path) -> Result<(), ArtifactError> {
        fs::write(path, self.to_json())
            .map_err(|source| ArtifactError::Io { path: path.display().to_string(), source })
    }

    pub fn load(path: &Path) -> Result<Self, ArtifactError> {
        let text = fs::read_to_string(path)
            .map_err(|source| ArtifactError::Io { path: path.display().to_string(), source })?;
        let artifact: ModelArtifact = serde_json::from_str(&text)
            .map_err(|source| ArtifactError::Malformed { path: path.display().to_string(), source })?;
        if artifact.format_version != FORMAT_VERSION {
            return Err(ArtifactError::VersionMismatch {
                field: "format_version",
                expected: FORMAT_VERSION,
                got: artifact.format_version,
            });
        }
        if artifact.feature_schema_version != SCHEMA_VERSION {
            return Err(ArtifactError::VersionMismatch {
                field: "feature_schema_version",
                expected: SCHEMA_VERSION,
                got: artifact.feature_schema_version,
            });
        }
        if artifact.model_kind != artifact.payload.kind() {
            return Err(ArtifactError::KindMismatch {
                declared: artifact.model_kind,
                actual: artifact.payload.kind(),
            });
        }
        Ok(artifact)
    }
}
