//! Acceptance gate: nine criteria, one pass/fail line each.
//!
//! Criteria 5-7 and 9 share five fully trained 10-member ensembles (hidden
//! 32, 250 epochs) on a 200-program synthetic corpus, built once behind a
//! `OnceLock`. Tolerances are pinned in each criterion; failures print a
//! FAIL line before panicking so the gate always reports its verdict.

use std::sync::OnceLock;
use std::time::Instant;

use pydesign::artifact::{ModelArtifact, ModelKind, ModelPayload};
use pydesign::corpus::{load_corpus, LoadedExample};
use pydesign::parse::parse_text;
use pydesign::pipeline::{train_pipeline, TrainRequest};
use pydesign::synth::generate_synthetic_corpus;
use pydesign_core::baselines::{best_split, fit_cart, fit_linear_regression, TreeNode};
use pydesign_core::feedback::{generate_feedback, Direction, MessageTable};
use pydesign_core::metrics::{avg_accuracy, mse_metric};
use pydesign_core::mlp::{init_mlp, mlp_gradients, mlp_loss, MlpParameters, TrainConfig};
use pydesign_core::rng::SplitMix64;
use pydesign_core::schema::FeatureSchema;
use pydesign_core::split::{split_items, SplitSpec};
use pydesign_core::{extract_features, LabeledRow, ScoreModel};

include!("golden_data.inc");

const CORPUS_N: usize = 200;
const CORPUS_SEED: u64 = 2026;
const SPLIT_SEED: u64 = 7;
const BASE_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

struct Fixture {
    // keeps the generated corpus alive for the whole run
    _dir: tempfile::TempDir,
    examples: Vec<LoadedExample>,
    split: SplitSpec,
    /// One artifact per base seed, each a 10-member ensemble.
    ensembles: Vec<ModelArtifact>,
}

fn fixture() -> &'static Fixture {
    static FIXTURE: OnceLock<Fixture> = OnceLock::new();
    FIXTURE.get_or_init(|| {
        let dir = tempfile::tempdir().expect("tempdir");
        let manifest =
            generate_synthetic_corpus(CORPUS_N, CORPUS_SEED, dir.path()).expect("corpus");
        let examples = load_corpus(&manifest).expect("corpus loads");
        let split = SplitSpec::new(0.7, 0.15, 0.15, SPLIT_SEED).expect("split");
        let ensembles = BASE_SEEDS
            .iter()
            .map(|&seed| {
                let config = TrainConfig { seed, ..TrainConfig::default() };
                let req = TrainRequest::new(ModelKind::Ensemble, split, config);
                train_pipeline(&examples, &req).expect("ensemble trains")
            })
            .collect();
        Fixture { _dir: dir, examples, split, ensembles }
    })
}

fn report(criterion: usize, name: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("acceptance criterion {criterion} ({name}): {verdict} — {detail}");
    assert!(ok, "criterion {criterion} ({name}) failed: {detail}");
}

fn test_rows(artifact: &ModelArtifact) -> Vec<LabeledRow> {
    let fx = fixture();
    let (_, _, test) = split_items(&fx.examples, &fx.split).expect("split");
    test.iter()
        .map(|e| LabeledRow {
            features: artifact.standardizer.apply(&e.features.values).expect("standardize"),
            target: e.score,
        })
        .collect()
}

fn mse_of(model: &dyn ScoreModel, rows: &[LabeledRow]) -> f64 {
    let preds: Vec<f64> = rows.iter().map(|r| model.predict(&r.features).unwrap()).collect();
    let truths: Vec<f64> = rows.iter().map(|r| r.target).collect();
    mse_metric(&preds, &truths).unwrap()
}

#[test]
fn criterion_1_gradient_correctness() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for seed in 0..120u64 {
        let mut rng = SplitMix64::new(0xACCE0001 ^ seed);
        let d = 1 + rng.next_below(5) as usize;
        let h = 1 + rng.next_below(4) as usize;
        let mut params = init_mlp(rng.next_u64(), d, h);
        // keep every unit away from the ReLU kink
        for b in &mut params.hidden_bias {
            *b = rng.uniform(0.1, 0.5);
        }
        params.output_bias = rng.uniform(-0.3, 0.3);
        let batch: Vec<LabeledRow> = (0..1 + rng.next_below(6))
            .map(|_| LabeledRow {
                features: (0..d).map(|_| rng.uniform(-1.0, 1.0)).collect(),
                target: rng.uniform(0.1, 0.9),
            })
            .collect();
        let l2 = if rng.next_f64() < 0.5 { 0.0 } else { 0.01 };

        let analytic = mlp_gradients(&params, &batch, l2).unwrap().to_flat();
        let flat = params.to_flat();
        let step = 1e-5;
        for i in 0..flat.len() {
            let mut plus = flat.clone();
            plus[i] += step;
            let mut minus = flat.clone();
            minus[i] -= step;
            let lp = mlp_loss(&MlpParameters::from_flat(d, h, &plus), &batch, l2).unwrap();
            let lm = mlp_loss(&MlpParameters::from_flat(d, h, &minus), &batch, l2).unwrap();
            let numeric = (lp - lm) / (2.0 * step);
            let denom = analytic[i].abs().max(numeric.abs()).max(1e-6);
            worst = worst.max((analytic[i] - numeric).abs() / denom);
        }
    }
    let detail = format!(
        "120 configurations, max relative error {worst:.2e} (< 1e-4), {:.1?}",
        start.elapsed()
    );
    report(1, "gradient correctness", worst < 1e-4, &detail);
}

#[test]
fn criterion_2_golden_feature_vectors() {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for (name, source, expected) in GOLDEN {
        let (syntax, source_program) = parse_text(source).expect("snippet parses");
        let fv = extract_features(&syntax, &source_program);
        for (i, (got, want)) in fv.values.iter().zip(expected.iter()).enumerate() {
            checked += 1;
            if got != want {
                mismatches.push(format!("{name}[{}]: got {got}, want {want}", i + 1));
            }
        }
    }
    let ok = mismatches.is_empty() && GOLDEN.len() >= 10;
    let detail = format!(
        "{} snippets, {checked} components exact{}",
        GOLDEN.len(),
        if mismatches.is_empty() { String::new() } else { format!("; {mismatches:?}") }
    );
    report(2, "golden feature vectors", ok, &detail);
}

/// Independent exhaustive root-split search: naive SSE over every
/// feature/midpoint pair, same candidate set and tie rules as the library.
fn exhaustive_root_split(xs: &[Vec<f64>], ys: &[f64]) -> Option<(usize, f64)> {
    let n = xs.len();
    let d = xs[0].len();
    let mut best: Option<(usize, f64, f64)> = None;
    for feature in 0..d {
        let mut values: Vec<f64> = xs.iter().map(|x| x[feature]).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for w in values.windows(2) {
            if w[0] == w[1] {
                continue;
            }
            let threshold = w[0] + (w[1] - w[0]) / 2.0;
            let (mut left, mut right) = (Vec::new(), Vec::new());
            for i in 0..n {
                if xs[i][feature] <= threshold {
                    left.push(ys[i]);
                } else {
                    right.push(ys[i]);
                }
            }
            let sse = |side: &[f64]| {
                let mean = side.iter().sum::<f64>() / side.len() as f64;
                side.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>()
            };
            let score = sse(&left) + sse(&right);
            let better = match best {
                None => true,
                Some((bf, bt, bs)) => {
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
    best.map(|(f, t, _)| (f, t))
}

#[test]
fn criterion_3_cart_oracle() {
    let start = Instant::now();
    let mut datasets = 0;
    for seed in 0..50u64 {
        let mut rng = SplitMix64::new(0xACCE0003 ^ seed);
        let n = 4 + rng.next_below(27) as usize;
        let d = 1 + rng.next_below(4) as usize;
        let xs: Vec<Vec<f64>> =
            (0..n).map(|_| (0..d).map(|_| rng.uniform(-2.0, 2.0)).collect()).collect();
        let ys: Vec<f64> = (0..n).map(|_| rng.uniform(0.0, 1.0)).collect();
        let rows: Vec<LabeledRow> = xs
            .iter()
            .zip(&ys)
            .map(|(x, &y)| LabeledRow { features: x.clone(), target: y })
            .collect();

        let idx: Vec<usize> = (0..n).collect();
        let library = best_split(&xs, &ys, &idx, 1).map(|(f, t, _)| (f, t));
        let oracle = exhaustive_root_split(&xs, &ys);
        assert_eq!(library, oracle, "seed {seed}: root split disagrees");

        // depth-1 fit: leaves must hold exact routed-target means
        let tree = fit_cart(&rows, 1, 1).unwrap();
        match &tree.root {
            TreeNode::Leaf { value, n_samples } => {
                assert_eq!(*n_samples, n);
                assert_eq!(*value, ys.iter().sum::<f64>() / n as f64, "seed {seed}");
            }
            TreeNode::Split { feature, threshold, left, right } => {
                let (mut ls, mut rs) = (Vec::new(), Vec::new());
                for i in 0..n {
                    if xs[i][*feature] <= *threshold {
                        ls.push(ys[i]);
                    } else {
                        rs.push(ys[i]);
                    }
                }
                for (side, node) in [(&ls, left), (&rs, right)] {
                    let TreeNode::Leaf { value, n_samples } = node.as_ref() else {
                        panic!("seed {seed}: depth-1 child is not a leaf");
                    };
                    assert_eq!(*n_samples, side.len(), "seed {seed}");
                    assert_eq!(
                        *value,
                        side.iter().sum::<f64>() / side.len() as f64,
                        "seed {seed}: leaf mean"
                    );
                }
            }
        }
        datasets += 1;
    }
    let detail = format!("{datasets} random datasets, {:.1?}", start.elapsed());
    report(3, "cart oracle", datasets == 50, &detail);
}

#[test]
fn criterion_4_linear_recovery() {
    let mut rng = SplitMix64::new(0xACCE0004);
    let d = 6;
    let n = 40;
    let planted: Vec<f64> = (0..d).map(|_| rng.uniform(-2.0, 2.0)).collect();
    let intercept = rng.uniform(-1.0, 1.0);
    let rows: Vec<LabeledRow> = (0..n)
        .map(|_| {
            let x: Vec<f64> = (0..d).map(|_| rng.uniform(-3.0, 3.0)).collect();
            let y = intercept + x.iter().zip(&planted).map(|(a, b)| a * b).sum::<f64>();
            LabeledRow { features: x, target: y }
        })
        .collect();
    let model = fit_linear_regression(&rows).unwrap();

    let coeff_err = model
        .weights
        .iter()
        .zip(&planted)
        .map(|(a, b)| (a - b).abs())
        .fold((model.intercept - intercept).abs(), f64::max);

    // residual orthogonality: X^T r == 0 for the fitted least-squares model
    let mut ortho_err = 0.0f64;
    for j in 0..d {
        let dot: f64 = rows
            .iter()
            .map(|r| r.features[j] * (r.target - model.predict(&r.features).unwrap()))
            .sum();
        ortho_err = ortho_err.max(dot.abs());
    }
    let ok = coeff_err < 1e-8 && ortho_err < 1e-6;
    let detail =
        format!("coefficient error {coeff_err:.2e} (< 1e-8), orthogonality {ortho_err:.2e} (< 1e-6)");
    report(4, "linear regression recovery", ok, &detail);
}

#[test]
fn criterion_5_ensemble_vs_single() {
    let start = Instant::now();
    let fx = fixture();
    let mut ensemble_mses = Vec::new();
    let mut single_mses = Vec::new();
    for artifact in &fx.ensembles {
        let rows = test_rows(artifact);
        let ModelPayload::Ensemble(ensemble) = &artifact.payload else {
            panic!("fixture holds ensembles");
        };
        ensemble_mses.push(mse_of(ensemble, &rows));
        let member_mean = ensemble.members.iter().map(|m| mse_of(m, &rows)).sum::<f64>()
            / ensemble.members.len() as f64;
        single_mses.push(member_mean);
    }
    let ens = ensemble_mses.iter().sum::<f64>() / ensemble_mses.len() as f64;
    let single = single_mses.iter().sum::<f64>() / single_mses.len() as f64;
    let detail = format!(
        "over {} base seeds: ensemble test MSE {ens:.5} <= mean single-model test MSE {single:.5}, {:.1?}",
        BASE_SEEDS.len(),
        start.elapsed()
    );
    report(5, "ensemble vs single", ens <= single, &detail);
}

#[test]
fn criterion_6_end_to_end_accuracy() {
    let start = Instant::now();
    let fx = fixture();
    let artifact = &fx.ensembles[0];
    let rows = test_rows(artifact);
    let preds: Vec<f64> =
        rows.iter().map(|r| artifact.payload.model().predict(&r.features).unwrap()).collect();
    let truths: Vec<f64> = rows.iter().map(|r| r.target).collect();
    let accuracy = avg_accuracy(&preds, &truths).unwrap();
    let detail = format!(
        "ensemble (h=32, 250 epochs, m=10) test average accuracy {:.2}% (floor 85%), {:.1?}",
        accuracy * 100.0,
        start.elapsed()
    );
    report(6, "end-to-end synthetic training", accuracy >= 0.85, &detail);
}

#[test]
fn criterion_7_feedback_soundness() {
    let start = Instant::now();
    let fx = fixture();
    let artifact = &fx.ensembles[0];
    let profile = artifact.good_profile.as_ref().expect("good profile");
    let schema = FeatureSchema::current();
    let table = MessageTable::defaults(&schema);
    let (_, _, test) = split_items(&fx.examples, &fx.split).unwrap();

    let mut suggestions_checked = 0;
    for example in &test {
        let report = generate_feedback(
            artifact.payload.model(),
            &artifact.standardizer,
            profile,
            &example.path,
            &example.features.values,
            &schema,
            &table,
        )
        .unwrap();
        let baseline = artifact.predict_raw(&example.features.values).unwrap();
        for s in &report.suggestions {
            let i = s.feature_id as usize - 1;
            // independent recomputation of the counterfactual
            let mut substituted = example.features.values.clone();
            substituted[i] = profile.mean_features[i];
            let recomputed = artifact.predict_raw(&substituted).unwrap();
            assert_eq!(recomputed, s.counterfactual_score, "{}: feature {}", example.path, i + 1);
            assert!(s.counterfactual_score > baseline, "{}: no improvement", example.path);
            let expected_direction = if s.target_value > s.current_value {
                Direction::Increase
            } else {
                Direction::Decrease
            };
            assert_eq!(s.direction, expected_direction, "{}", example.path);
            assert_ne!(s.current_value, s.target_value, "{}", example.path);
            suggestions_checked += 1;
        }
    }

    // identity substitution: a program already at the good mean gets nothing
    let identity = generate_feedback(
        artifact.payload.model(),
        &artifact.standardizer,
        profile,
        "identity",
        &profile.mean_features,
        &schema,
        &table,
    )
    .unwrap();
    let ok = identity.suggestions.is_empty();
    let detail = format!(
        "{} test programs, {suggestions_checked} suggestions verified, identity substitution clean, {:.1?}",
        test.len(),
        start.elapsed()
    );
    report(7, "feedback soundness", ok, &detail);
}

#[test]
fn criterion_8_metric_identities() {
    let mut rng = SplitMix64::new(0xACCE0008);
    let n = 1000;
    let preds: Vec<f64> = (0..n).map(|_| rng.uniform(-0.5, 1.5)).collect();
    let truths: Vec<f64> = (0..n).map(|_| rng.uniform(0.0, 1.0)).collect();

    let acc = avg_accuracy(&preds, &truths).unwrap();
    let mae = preds.iter().zip(&truths).map(|(p, t)| (p - t).abs()).sum::<f64>() / n as f64;
    let identity_holds = acc == 1.0 - mae;

    let mse = mse_metric(&preds, &truths).unwrap();
    let perfect = avg_accuracy(&truths, &truths).unwrap();

    let ok = identity_holds && mse >= 0.0 && perfect == 1.0;
    let detail = format!(
        "{n} random pairs: avg_accuracy == 1 - MAE exactly ({identity_holds}), MSE {mse:.4} >= 0, perfect accuracy {perfect}"
    );
    report(8, "metric identities", ok, &detail);
}

#[test]
fn criterion_9_determinism_and_round_trip() {
    let start = Instant::now();
    let fx = fixture();
    let first = &fx.ensembles[0];

    // identical (seed, config, data) -> byte-identical artifact
    let config = TrainConfig { seed: BASE_SEEDS[0], ..TrainConfig::default() };
    let req = TrainRequest::new(ModelKind::Ensemble, fx.split, config);
    let second = train_pipeline(&fx.examples, &req).unwrap();
    let bytes_identical = first.to_json() == second.to_json();

    // save -> load -> predict drift
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    first.save(&path).unwrap();
    let loaded = ModelArtifact::load(&path).unwrap();
    let mut drift = 0.0f64;
    for example in &fx.examples {
        let a = first.predict_raw(&example.features.values).unwrap();
        let b = loaded.predict_raw(&example.features.values).unwrap();
        drift = drift.max((a - b).abs());
    }
    let ok = bytes_identical && drift <= 1e-12;
    let detail = format!(
        "retrain byte-identical: {bytes_identical}; save/load prediction drift {drift:.1e} (<= 1e-12), {:.1?}",
        start.elapsed()
    );
    report(9, "determinism and round-trip", ok, &detail);
}
