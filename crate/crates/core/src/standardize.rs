//! Per-feature z-scoring with training-set statistics.
//!
//! Fitted on the training split only; dev/test and incoming programs are
//! transformed with the stored statistics. Constant columns (population std
//! of zero) map to 0 instead of dividing by zero.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    /// Population standard deviations.
    pub stds: Vec<f64>,
    pub constant_mask: Vec<bool>,
}

impl Standardizer {
    pub fn fit(rows: &[Vec<f64>]) -> Result<Self, CoreError> {
        if rows.is_empty() {
            return Err(CoreError::EmptyDataset);
        }
        let d = rows[0].len();
        let n = rows.len() as f64;
        let mut means = alloc::vec![0.0; d];
        for row in rows {
            if row.len() != d {
                return Err(CoreError::DimensionMismatch { expected: d, got: row.len() });
            }
            for (m, x) in means.iter_mut().zip(row) {
                *m += x;
            }
        }
        for m in &mut means {
            *m /= n;
        }
        let mut vars = alloc::vec![0.0; d];
        for row in rows {
            for ((v, x), m) in vars.iter_mut().zip(row).zip(&means) {
                let e = x - m;
                *v += e * e;
            }
        }
        let stds: Vec<f64> = vars.iter().map(|v| libm::sqrt(v / n)).collect();
        let constant_mask = stds.iter().map(|&s| s == 0.0).collect();
        Ok(Self { means, stds, constant_mask })
    }

    pub fn apply(&self, raw: &[f64]) -> Result<Vec<f64>, CoreError> {
        if raw.len() != self.means.len() {
            return Err(CoreError::DimensionMismatch {
                expected: self.means.len(),
                got: raw.len(),
            });
        }
        Ok(raw
            .iter()
            .zip(&self.means)
            .zip(&self.stds)
            .map(|((x, m), s)| if *s == 0.0 { 0.0 } else { (x - m) / s })
            .collect())
    }
}
