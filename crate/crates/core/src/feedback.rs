//! Counterfactual "increase/decrease" feedback.
//!
//! The good profile is the per-feature mean over training programs scoring
//! strictly above the threshold, kept in raw feature units so suggestions are
//! expressible in natural terms. Feedback substitutes one raw feature at a
//! time with the profile mean, re-standardizes, and keeps the substitution
//! when the model's score goes up.

use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::features::FEATURE_COUNT;
use crate::schema::FeatureSchema;
use crate::standardize::Standardizer;
use crate::ScoreModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoodProfile {
    pub threshold: f64,
    /// Raw (unstandardized) feature units.
    pub mean_features: Vec<f64>,
    pub n_good: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increase,
    Decrease,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Suggestion {
    pub feature_id: u8,
    pub feature_name: String,
    pub direction: Direction,
    pub current_value: f64,
    pub target_value: f64,
    pub baseline_score: f64,
    pub counterfactual_score: f64,
    pub delta: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackReport {
    pub program_path: String,
    pub baseline_score: f64,
    /// Ordered by delta descending, ties by feature id ascending.
    pub suggestions: Vec<Suggestion>,
}

/// Sentence templates keyed by feature id and direction. Defaults are built
/// mechanically from the schema descriptions; load overrides on top.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageTable {
    pub entries: alloc::collections::BTreeMap<(u8, Direction), String>,
}

impl MessageTable {
    pub fn defaults(schema: &FeatureSchema) -> Self {
        let mut entries = alloc::collections::BTreeMap::new();
        for def in &schema.features {
            entries.insert((def.id, Direction::Increase), FeatureSchema::default_increase_phrase(def));
            entries.insert((def.id, Direction::Decrease), FeatureSchema::default_decrease_phrase(def));
        }
        Self { entries }
    }

    pub fn message(&self, id: u8, direction: Direction) -> &str {
        self.entries
            .get(&(id, direction))
            .map(String::as_str)
            .unwrap_or("adjust this feature")
    }
}

/// Mean raw feature vector over examples scoring strictly above `threshold`.
pub fn compute_good_profile(
    examples: &[(Vec<f64>, f64)],
    threshold: f64,
) -> Result<GoodProfile, CoreError> {
    let good: Vec<&Vec<f64>> = examples
        .iter()
        .filter(|(_, score)| *score > threshold)
        .map(|(features, _)| features)
        .collect();
    if good.is_empty() {
        return Err(CoreError::NoGoodPrograms);
    }
    let d = good[0].len();
    let mut mean = alloc::vec![0.0; d];
    for features in &good {
        for (m, x) in mean.iter_mut().zip(features.iter()) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= good.len() as f64;
    }
    Ok(GoodProfile { threshold, mean_features: mean, n_good: good.len() })
}

/// One counterfactual substitution per feature; a suggestion is emitted iff
/// the substituted score strictly beats the baseline and the feature actually
/// differs from the profile mean.
pub fn generate_feedback(
    model: &dyn ScoreModel,
    standardizer: &Standardizer,
    profile: &GoodProfile,
    program_path: &str,
    raw_features: &[f64],
    schema: &FeatureSchema,
    table: &MessageTable,
) -> Result<FeedbackReport, CoreError> {
    if raw_features.len() != FEATURE_COUNT || profile.mean_features.len() != FEATURE_COUNT {
        return Err(CoreError::DimensionMismatch {
            expected: FEATURE_COUNT,
            got: raw_features.len(),
        });
    }
    let baseline = model.predict(&standardizer.apply(raw_features)?)?;

    let mut suggestions = Vec::new();
    for def in &schema.features {
        let i = def.id as usize - 1;
        let current = raw_features[i];
        let target = profile.mean_features[i];
        if current == target {
            continue;
        }
        let mut substituted = raw_features.to_vec();
        substituted[i] = target;
        let counterfactual = model.predict(&standardizer.apply(&substituted)?)?;
        if counterfactual <= baseline {
            continue;
        }
        let direction = if current > target { Direction::Decrease } else { Direction::Increase };
        suggestions.push(Suggestion {
            feature_id: def.id,
            feature_name: String::from(def.name),
            direction,
            current_value: current,
            target_value: target,
            baseline_score: baseline,
            counterfactual_score: counterfactual,
            delta: counterfactual - baseline,
            message: String::from(table.message(def.id, direction)),
        });
    }
    suggestions.sort_by(|a, b| {
        b.delta
            .partial_cmp(&a.delta)
            .unwrap()
            .then(a.feature_id.cmp(&b.feature_id))
    });

    Ok(FeedbackReport {
        program_path: String::from(program_path),
        baseline_score: baseline,
        suggestions,
    })
}

/// Plain-text rendering: header plus numbered suggestion sentences.
pub fn render_text(report: &FeedbackReport) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "{}: score {:.2}", report.program_path, report.baseline_score);
    if report.suggestions.is_empty() {
        out.push_str("No design improvements found above threshold.\n");
        return out;
    }
    for (i, s) in report.suggestions.iter().enumerate() {
        let _ = writeln!(out, "  {}. {}", i + 1, s.message);
    }
    out
}
