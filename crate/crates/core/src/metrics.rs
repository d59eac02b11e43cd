//! Evaluation metrics: mean squared error and average accuracy
//! (`1 - mean absolute error`). Predictions outside [0, 1] are consumed
//! as-is; an accuracy term can go negative and is not clamped.

use crate::error::CoreError;

fn check(preds: &[f64], truths: &[f64]) -> Result<(), CoreError> {
    if preds.len() != truths.len() {
        return Err(CoreError::LengthMismatch { left: preds.len(), right: truths.len() });
    }
    if preds.is_empty() {
        return Err(CoreError::EmptyDataset);
    }
    Ok(())
}

pub fn mse_metric(preds: &[f64], truths: &[f64]) -> Result<f64, CoreError> {
    check(preds, truths)?;
    let sse: f64 = preds.iter().zip(truths).map(|(p, t)| (t - p) * (t - p)).sum();
    Ok(sse / preds.len() as f64)
}

pub fn avg_accuracy(preds: &[f64], truths: &[f64]) -> Result<f64, CoreError> {
    check(preds, truths)?;
    // Computed as 1 - MAE so the identity holds exactly in floating point.
    let abs_sum: f64 = preds.iter().zip(truths).map(|(p, t)| (p - t).abs()).sum();
    Ok(1.0 - abs_sum / preds.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn mse_examples() {
        assert_eq!(mse_metric(&[0.3, 0.7], &[0.3, 0.7]).unwrap(), 0.0);
        assert_eq!(mse_metric(&[0.5], &[1.0]).unwrap(), 0.25);
        assert_eq!(mse_metric(&[0.0, 1.0], &[1.0, 0.0]).unwrap(), 1.0);
    }

    #[test]
    fn accuracy_examples() {
        assert_eq!(avg_accuracy(&[0.2, 0.8], &[0.2, 0.8]).unwrap(), 1.0);
        assert!((avg_accuracy(&[0.1, 0.3], &[0.2, 0.2]).unwrap() - 0.9).abs() < 1e-15);
        // unclamped: a wildly wrong prediction produces a negative term
        assert_eq!(avg_accuracy(&[2.0], &[0.0]).unwrap(), -1.0);
    }

    #[test]
    fn errors() {
        assert_eq!(mse_metric(&[0.1], &[]), Err(CoreError::LengthMismatch { left: 1, right: 0 }));
        assert_eq!(avg_accuracy(&[], &[]), Err(CoreError::EmptyDataset));
    }

    #[test]
    fn accuracy_is_one_minus_mae() {
        let mut rng = crate::rng::SplitMix64::new(17);
        let preds: Vec<f64> = (0..100).map(|_| rng.uniform(-0.5, 1.5)).collect();
        let truths: Vec<f64> = (0..100).map(|_| rng.next_f64()).collect();
        let mae = preds.iter().zip(&truths).map(|(p, t)| (p - t).abs()).sum::<f64>()
            / preds.len() as f64;
        assert_eq!(avg_accuracy(&preds, &truths).unwrap(), 1.0 - mae);
    }
}
