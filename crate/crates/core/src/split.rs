//! Seed-deterministic train/dev/test splitting.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_ratio: f64,
    pub dev_ratio: f64,
    pub test_ratio: f64,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(train_ratio: f64, dev_ratio: f64, test_ratio: f64, seed: u64) -> Result<Self, CoreError> {
        let sum = train_ratio + dev_ratio + test_ratio;
        if train_ratio < 0.0 || dev_ratio < 0.0 || test_ratio < 0.0 || (sum - 1.0).abs() > 1e-9 {
            return Err(CoreError::InvalidConfig(alloc::string::String::from(
                "split ratios must be non-negative and sum to 1",
            )));
        }
        Ok(Self { train_ratio, dev_ratio, test_ratio, seed })
    }
}

/// `(train, dev, test)` pieces of a split.
pub type Split<T> = (Vec<T>, Vec<T>, Vec<T>);

/// Fisher-Yates shuffle of `0..n`, then contiguous cuts: `floor(n*train)` for
/// train, `floor(n*dev)` for dev, remainder test. Disjoint and exhaustive.
pub fn split_indices(n: usize, spec: &SplitSpec) -> Result<Split<usize>, CoreError> {
    let n_train = (n as f64 * spec.train_ratio) as usize;
    let n_dev = (n as f64 * spec.dev_ratio) as usize;
    let n_test = n - n_train - n_dev;
    if n_train == 0 || n_dev == 0 || n_test == 0 {
        return Err(CoreError::TooFewExamples { available: n, train: n_train, dev: n_dev, test: n_test });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = SplitMix64::new(spec.seed);
    for i in (1..n).rev() {
        let j = rng.next_below((i + 1) as u64) as usize;
        order.swap(i, j);
    }
    let train = order[..n_train].to_vec();
    let dev = order[n_train..n_train + n_dev].to_vec();
    let test = order[n_train + n_dev..].to_vec();
    Ok((train, dev, test))
}

/// Clone-based convenience over [`split_indices`].
pub fn split_items<T: Clone>(items: &[T], spec: &SplitSpec) -> Result<Split<T>, CoreError> {
    let (a, b, c) = split_indices(items.len(), spec)?;
    let pick = |idx: &[usize]| idx.iter().map(|&i| items[i].clone()).collect();
    Ok((pick(&a), pick(&b), pick(&c)))
}
