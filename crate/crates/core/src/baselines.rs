//! Comparison regressors: closed-form linear regression, a CART regression
//! tree, and the sigmoid-wrapped linear model trained with ADAM.

// index loops keep the matrix algebra aligned with its textbook form
#![allow(clippy::needless_range_loop)]

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::mlp::{sigmoid, TrainConfig};
use crate::rng::SplitMix64;
use crate::{LabeledRow, ScoreModel};

// ---------------------------------------------------------------------------
// Linear regression
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
    /// Set when the normal equations were singular and ridge jitter was added.
    pub degenerate: bool,
}

impl LinearModel {
    /// Unclamped affine prediction; may leave [0, 1].
    pub fn predict(&self, x: &[f64]) -> Result<f64, CoreError> {
        if x.len() != self.weights.len() {
            return Err(CoreError::DimensionMismatch {
                expected: self.weights.len(),
                got: x.len(),
            });
        }
        let mut y = self.intercept;
        for (w, xi) in self.weights.iter().zip(x) {
            y += w * xi;
        }
        Ok(y)
    }
}

impl ScoreModel for LinearModel {
    fn predict(&self, x: &[f64]) -> Result<f64, CoreError> {
        LinearModel::predict(self, x)
    }
}

/// Gaussian elimination with partial pivoting. Returns None on a (near)
/// singular system.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()
        })?;
        if a[pivot_row][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Least squares via the normal equations with an intercept column. A
/// singular Gram matrix gets 1e-8 ridge jitter and the degeneracy flag.
pub fn fit_linear_regression(rows: &[LabeledRow]) -> Result<LinearModel, CoreError> {
    let n = rows.len();
    if n == 0 {
        return Err(CoreError::EmptyDataset);
    }
    let d = rows[0].features.len();
    let dim = d + 1; // augmented with the intercept column
    let mut gram = vec![vec![0.0; dim]; dim];
    let mut rhs = vec![0.0; dim];
    for row in rows {
        if row.features.len() != d {
            return Err(CoreError::DimensionMismatch { expected: d, got: row.features.len() });
        }
        let augmented = |i: usize| if i < d { row.features[i] } else { 1.0 };
        for i in 0..dim {
            for j in i..dim {
                gram[i][j] += augmented(i) * augmented(j);
            }
            rhs[i] += augmented(i) * row.target;
        }
    }
    for i in 0..dim {
        for j in 0..i {
            gram[i][j] = gram[j][i];
        }
    }

    let (solution, degenerate) = match solve_dense(gram.clone(), rhs.clone()) {
        Some(s) => (s, false),
        None => {
            for i in 0..dim {
                gram[i][i] += 1e-8;
            }
            let s = solve_dense(gram, rhs).ok_or_else(|| {
                CoreError::InvalidConfig(alloc::string::String::from(
                    "normal equations unsolvable even with ridge jitter",
                ))
            })?;
            (s, true)
        }
    };

    Ok(LinearModel {
        weights: solution[..d].to_vec(),
        intercept: solution[d],
        degenerate,
    })
}

// ---------------------------------------------------------------------------
// Sigmoid-wrapped linear model
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmoidLinearModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
}

impl SigmoidLinearModel {
    pub fn predict(&self, x: &[f64]) -> Result<f64, CoreError> {
        if x.len() != self.weights.len() {
            return Err(CoreError::DimensionMismatch {
                expected: self.weights.len(),
                got: x.len(),
            });
        }
        let mut z = self.intercept;
        for (w, xi) in self.weights.iter().zip(x) {
            z += w * xi;
        }
        Ok(sigmoid(z))
    }
}

impl ScoreModel for SigmoidLinearModel {
    fn predict(&self, x: &[f64]) -> Result<f64, CoreError> {
        SigmoidLinearModel::predict(self, x)
    }
}

/// Train `sigma(w.x + b)` under MSE with the same full-batch ADAM and
/// best-dev-epoch protocol as the network.
pub fn fit_sigmoid_linear(
    train: &[LabeledRow],
    dev: &[LabeledRow],
    config: &TrainConfig,
) -> Result<SigmoidLinearModel, CoreError> {
    if train.is_empty() || dev.is_empty() {
        return Err(CoreError::EmptyDataset);
    }
    config.validate()?;
    let d = train[0].features.len();
    let n = train.len() as f64;

    let mut rng = SplitMix64::new(config.seed);
    let bound = libm::sqrt(6.0 / (d + 1) as f64);
    let mut weights: Vec<f64> = (0..d).map(|_| rng.uniform(-bound, bound)).collect();
    let mut intercept = 0.0;
    let mut m = vec![0.0; d + 1];
    let mut v = vec![0.0; d + 1];

    let dev_mse = |model: &SigmoidLinearModel| -> Result<f64, CoreError> {
        let mut sse = 0.0;
        for row in dev {
            let e = row.target - model.predict(&row.features)?;
            sse += e * e;
        }
        Ok(sse / dev.len() as f64)
    };

    let mut best = SigmoidLinearModel { weights: weights.clone(), intercept };
    let mut best_mse = f64::INFINITY;

    for epoch in 1..=config.epochs {
        let mut g = vec![0.0; d + 1];
        for row in train {
            if row.features.len() != d {
                return Err(CoreError::DimensionMismatch { expected: d, got: row.features.len() });
            }
            let mut z = intercept;
            for (w, xi) in weights.iter().zip(&row.features) {
                z += w * xi;
            }
            let y = sigmoid(z);
            let dz = 2.0 * (y - row.target) * y * (1.0 - y) / n;
            for (gi, xi) in g.iter_mut().zip(&row.features) {
                *gi += dz * xi;
            }
            g[d] += dz;
        }
        for (gi, wi) in g.iter_mut().zip(&weights) {
            *gi += 2.0 * config.l2_lambda * wi;
        }

        let bc1 = 1.0 - libm::pow(config.adam_beta1, epoch as f64);
        let bc2 = 1.0 - libm::pow(config.adam_beta2, epoch as f64);
        for i in 0..=d {
            m[i] = config.adam_beta1 * m[i] + (1.0 - config.adam_beta1) * g[i];
            v[i] = config.adam_beta2 * v[i] + (1.0 - config.adam_beta2) * g[i] * g[i];
            if i == d && !config.use_bias {
                continue;
            }
            let step = config.learning_rate * (m[i] / bc1)
                / (libm::sqrt(v[i] / bc2) + config.adam_epsilon);
            if i < d {
                weights[i] -= step;
            } else {
                intercept -= step;
            }
        }

        let candidate = SigmoidLinearModel { weights: weights.clone(), intercept };
        let mse = dev_mse(&candidate)?;
        if mse < best_mse {
            best_mse = mse;
            best = candidate;
        }
    }

    Ok(best)
}

// ---------------------------------------------------------------------------
// CART regression tree
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf {
        value: f64,
        n_samples: usize,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionTree {
    pub root: TreeNode,
    pub max_depth: usize,
    pub min_leaf: usize,
    pub input_dim: usize,
}

/// Best split of `idx` by weighted child sum-of-squares. Candidates are
/// midpoints between consecutive distinct sorted values; both children must
/// hold at least `min_leaf` samples. Ties break toward the lowest feature
/// index, then the smallest threshold.
pub fn best_split(
    xs: &[Vec<f64>],
    ys: &[f64],
    idx: &[usize],
    min_leaf: usize,
) -> Option<(usize, f64, f64)> {
    let d = xs[idx[0]].len();
    let mut best: Option<(usize, f64, f64)> = None; // (feature, threshold, score)
    for feature in 0..d {
        let mut order: Vec<usize> = idx.to_vec();
        order.sort_by(|&a, &b| xs[a][feature].partial_cmp(&xs[b][feature]).unwrap());

        // prefix sums over the sorted order for O(1) child statistics
        let n = order.len();
        let mut prefix_sum = vec![0.0; n + 1];
        let mut prefix_sq = vec![0.0; n + 1];
        for (k, &i) in order.iter().enumerate() {
            prefix_sum[k + 1] = prefix_sum[k] + ys[i];
            prefix_sq[k + 1] = prefix_sq[k] + ys[i] * ys[i];
        }

        for k in 1..n {
            let lo = xs[order[k - 1]][feature];
            let hi = xs[order[k]][feature];
            if lo == hi {
                continue;
            }
            if k < min_leaf || n - k < min_leaf {
                continue;
            }
            let threshold = lo + (hi - lo) / 2.0;
            // weighted child variance times n == total SSE of the two children
            let left_sse = prefix_sq[k] - prefix_sum[k] * prefix_sum[k] / k as f64;
            let right_sum = prefix_sum[n] - prefix_sum[k];
            let right_sq = prefix_sq[n] - prefix_sq[k];
            let right_sse = right_sq - right_sum * right_sum / (n - k) as f64;
            let score = left_sse + right_sse;
            let better = match &best {
                None => true,
                Some((bf, bt, bs)) => {
                    let (bf, bt, bs) = (*bf, *bt, *bs);
                    score < bs - 1e-12
                        || ((score - bs).abs() <= 1e-12
                            && (feature < bf || (feature == bf && threshold < bt)))
                }
            };
            if better {
                best = Some((feature, threshold, score));
            }
        }
    }
    best
}

fn build_node(
    xs: &[Vec<f64>],
    ys: &[f64],
    idx: &[usize],
    depth: usize,
    max_depth: usize,
    min_leaf: usize,
) -> TreeNode {
    let n = idx.len();
    let mean = idx.iter().map(|&i| ys[i]).sum::<f64>() / n as f64;
    // zero-variance stop, tested on the raw targets so float dust in the
    // mean cannot keep an all-equal node splitting
    let pure = idx.iter().all(|&i| ys[i] == ys[idx[0]]);
    if depth >= max_depth || n < 2 * min_leaf || pure {
        return TreeNode::Leaf { value: mean, n_samples: n };
    }
    let Some((feature, threshold, _)) = best_split(xs, ys, idx, min_leaf) else {
        return TreeNode::Leaf { value: mean, n_samples: n };
    };
    let (left_idx, right_idx): (Vec<usize>, Vec<usize>) =
        idx.iter().partition(|&&i| xs[i][feature] <= threshold);
    TreeNode::Split {
        feature,
        threshold,
        left: Box::new(build_node(xs, ys, &left_idx, depth + 1, max_depth, min_leaf)),
        right: Box::new(build_node(xs, ys, &right_idx, depth + 1, max_depth, min_leaf)),
    }
}

/// Greedy CART induction minimizing weighted child variance.
pub fn fit_cart(
    rows: &[LabeledRow],
    max_depth: usize,
    min_leaf: usize,
) -> Result<RegressionTree, CoreError> {
    if rows.is_empty() {
        return Err(CoreError::EmptyDataset);
    }
    let d = rows[0].features.len();
    for row in rows {
        if row.features.len() != d {
            return Err(CoreError::DimensionMismatch { expected: d, got: row.features.len() });
        }
    }
    let xs: Vec<Vec<f64>> = rows.iter().map(|r| r.features.clone()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.target).collect();
    let idx: Vec<usize> = (0..rows.len()).collect();
    let root = build_node(&xs, &ys, &idx, 0, max_depth, min_leaf.max(1));
    Ok(RegressionTree { root, max_depth, min_leaf: min_leaf.max(1), input_dim: d })
}

impl RegressionTree {
    /// Route by `x[feature] <= threshold` left, else right.
    pub fn predict(&self, x: &[f64]) -> Result<f64, CoreError> {
        if x.len() != self.input_dim {
            return Err(CoreError::DimensionMismatch { expected: self.input_dim, got: x.len() });
        }
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { value, .. } => return Ok(*value),
                TreeNode::Split { feature, threshold, left, right } => {
                    node = if x[*feature] <= *threshold { left } else { right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn d(node: &TreeNode) -> usize {
            match node {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + d(left).max(d(right)),
            }
        }
        d(&self.root)
    }
}

impl ScoreModel for RegressionTree {
    fn predict(&self, x: &[f64]) -> Result<f64, CoreError> {
        RegressionTree::predict(self, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(xs: &[&[f64]], ys: &[f64]) -> Vec<LabeledRow> {
        xs.iter()
            .zip(ys)
            .map(|(x, &y)| LabeledRow { features: x.to_vec(), target: y })
            .collect()
    }

    #[test]
    fn linear_constant_target() {
        let data = rows(&[&[1.0, 2.0], &[3.0, -1.0], &[0.5, 0.5]], &[0.7, 0.7, 0.7]);
        let model = fit_linear_regression(&data).unwrap();
        assert!(model.weights.iter().all(|w| w.abs() < 1e-8), "{:?}", model.weights);
        assert!((model.intercept - 0.7).abs() < 1e-8);
    }

    #[test]
    fn linear_recovers_planted_coefficients() {
        let mut rng = SplitMix64::new(31);
        let data: Vec<LabeledRow> = (0..40)
            .map(|_| {
                let x1 = rng.uniform(-3.0, 3.0);
                let x2 = rng.uniform(-3.0, 3.0);
                LabeledRow { features: vec![x1, x2], target: 2.0 * x1 - 3.0 * x2 + 1.0 }
            })
            .collect();
        let model = fit_linear_regression(&data).unwrap();
        assert!((model.weights[0] - 2.0).abs() < 1e-8);
        assert!((model.weights[1] + 3.0).abs() < 1e-8);
        assert!((model.intercept - 1.0).abs() < 1e-8);
        assert!(!model.degenerate);
    }

    #[test]
    fn linear_residual_orthogonality() {
        let mut rng = SplitMix64::new(77);
        let data: Vec<LabeledRow> = (0..50)
            .map(|_| LabeledRow {
                features: (0..3).map(|_| rng.uniform(-1.0, 1.0)).collect(),
                target: rng.next_f64(),
            })
            .collect();
        let model = fit_linear_regression(&data).unwrap();
        let mut dots = vec![0.0; 4];
        for row in &data {
            let r = row.target - model.predict(&row.features).unwrap();
            for (acc, xi) in dots.iter_mut().zip(row.features.iter().chain(core::iter::once(&1.0))) {
                *acc += r * xi;
            }
        }
        for dot in dots {
            assert!(dot.abs() < 1e-6, "residual dot {dot}");
        }
    }

    #[test]
    fn linear_constant_feature_sets_degenerate_flag() {
        let data = rows(&[&[2.0, 1.0], &[2.0, 2.0], &[2.0, 3.0]], &[0.1, 0.2, 0.3]);
        let model = fit_linear_regression(&data).unwrap();
        assert!(model.degenerate);
        // still fits the informative column
        assert!((model.predict(&[2.0, 2.0]).unwrap() - 0.2).abs() < 1e-4);
    }

    #[test]
    fn linear_predict_examples() {
        let zero = LinearModel { weights: vec![0.0], intercept: 0.0, degenerate: false };
        assert_eq!(zero.predict(&[9.0]).unwrap(), 0.0);
        let m = LinearModel { weights: vec![1.0], intercept: 0.0, degenerate: false };
        assert_eq!(m.predict(&[5.0]).unwrap(), 5.0);
        let m = LinearModel { weights: vec![1.0], intercept: 1.0, degenerate: false };
        assert_eq!(m.predict(&[-1.0]).unwrap(), 0.0);
    }

    #[test]
    fn sigmoid_linear_zero_is_half_and_bounded() {
        let m = SigmoidLinearModel { weights: vec![0.0, 0.0], intercept: 0.0 };
        assert_eq!(m.predict(&[4.0, -4.0]).unwrap(), 0.5);
        let m = SigmoidLinearModel { weights: vec![10.0], intercept: 5.0 };
        let y = m.predict(&[2.0]).unwrap();
        assert!(y > 0.0 && y < 1.0);
    }

    #[test]
    fn sigmoid_linear_learns_separable_data() {
        let mut rng = SplitMix64::new(13);
        let make = |rng: &mut SplitMix64, n: usize| {
            (0..n)
                .map(|_| {
                    let x = rng.uniform(-2.0, 2.0);
                    LabeledRow {
                        features: vec![x],
                        target: if x > 0.0 { 0.95 } else { 0.05 },
                    }
                })
                .collect::<Vec<LabeledRow>>()
        };
        let train = make(&mut rng, 40);
        let dev = make(&mut rng, 10);
        let config = TrainConfig { epochs: 300, l2_lambda: 0.0, seed: 2, ..TrainConfig::default() };
        let model = fit_sigmoid_linear(&train, &dev, &config).unwrap();
        let initial = SigmoidLinearModel {
            weights: {
                let mut r = SplitMix64::new(2);
                let bound = libm::sqrt(6.0 / 2.0);
                vec![r.uniform(-bound, bound)]
            },
            intercept: 0.0,
        };
        let mse = |m: &SigmoidLinearModel| {
            train
                .iter()
                .map(|r| {
                    let e = r.target - m.predict(&r.features).unwrap();
                    e * e
                })
                .sum::<f64>()
                / train.len() as f64
        };
        assert!(mse(&model) < mse(&initial));
    }

    #[test]
    fn sigmoid_linear_is_deterministic() {
        let data = rows(&[&[0.1], &[0.9], &[0.4]], &[0.2, 0.8, 0.5]);
        let config = TrainConfig { epochs: 30, seed: 8, ..TrainConfig::default() };
        let a = fit_sigmoid_linear(&data, &data, &config).unwrap();
        let b = fit_sigmoid_linear(&data, &data, &config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cart_constant_target_is_single_leaf() {
        let data = rows(&[&[1.0], &[2.0], &[3.0]], &[0.4, 0.4, 0.4]);
        let tree = fit_cart(&data, 10, 1).unwrap();
        assert!(
            matches!(tree.root, TreeNode::Leaf { value, n_samples: 3 } if (value - 0.4).abs() < 1e-12)
        );
    }

    #[test]
    fn cart_splits_step_function_at_midpoint() {
        let data = rows(&[&[1.0], &[2.0], &[3.0], &[4.0]], &[0.0, 0.0, 1.0, 1.0]);
        let tree = fit_cart(&data, 10, 2).unwrap();
        match &tree.root {
            TreeNode::Split { feature, threshold, left, right } => {
                assert_eq!(*feature, 0);
                assert_eq!(*threshold, 2.5);
                assert!(matches!(**left, TreeNode::Leaf { value, .. } if value == 0.0));
                assert!(matches!(**right, TreeNode::Leaf { value, .. } if value == 1.0));
            }
            other => panic!("expected split, got {other:?}"),
        }
        assert_eq!(tree.predict(&[2.0]).unwrap(), 0.0);
        // boundary routes left on <=
        assert_eq!(tree.predict(&[2.5]).unwrap(), 0.0);
        assert_eq!(tree.predict(&[2.6]).unwrap(), 1.0);
    }

    #[test]
    fn cart_depth_zero_is_mean_leaf() {
        let data = rows(&[&[1.0], &[2.0]], &[0.0, 1.0]);
        let tree = fit_cart(&data, 0, 1).unwrap();
        assert!(matches!(tree.root, TreeNode::Leaf { value, .. } if value == 0.5));
        assert_eq!(tree.predict(&[99.0]).unwrap(), 0.5);
    }

    #[test]
    fn cart_deeper_never_hurts_training_mse() {
        let mut rng = SplitMix64::new(55);
        let data: Vec<LabeledRow> = (0..40)
            .map(|_| LabeledRow {
                features: vec![rng.next_f64(), rng.next_f64()],
                target: rng.next_f64(),
            })
            .collect();
        let mut prev = f64::INFINITY;
        for depth in 0..8 {
            let tree = fit_cart(&data, depth, 1).unwrap();
            let mse = data
                .iter()
                .map(|r| {
                    let e = r.target - tree.predict(&r.features).unwrap();
                    e * e
                })
                .sum::<f64>()
                / data.len() as f64;
            assert!(mse <= prev + 1e-12, "depth {depth}: {mse} > {prev}");
            prev = mse;
        }
    }
}
