//! Command-line entry point.
//!
//! Exit codes: 0 success, 1 usage or internal error, 2 input-data error
//! (unparseable submissions, bad manifests, missing inputs). Diagnostics go
//! to stderr, data to stdout.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use pydesign_core::feedback::{generate_feedback, render_text, MessageTable};
use pydesign_core::mlp::TrainConfig;
use pydesign_core::schema::FeatureSchema;
use pydesign_core::split::SplitSpec;

use pydesign::artifact::{ModelArtifact, ModelKind};
use pydesign::corpus::load_corpus;
use pydesign::messages::load_message_table;
use pydesign::parse::parse_text;
use pydesign::pipeline::{evaluate_artifact, train_pipeline, TrainRequest};
use pydesign::synth::generate_synthetic_corpus;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;

struct AppError {
    code: u8,
    message: String,
}

impl AppError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn data(message: impl Into<String>) -> Self {
        Self { code: EXIT_DATA, message: message.into() }
    }
}

type AppResult = Result<(), AppError>;

#[derive(Parser)]
#[command(name = "pydesign", about = "Design-quality grading and feedback for Python programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract the 33 design features from Python files
    Extract(ExtractArgs),
    /// Train a model on a scored corpus and write a model artifact
    Train(TrainArgs),
    /// Report MSE and average accuracy of an artifact on a corpus
    Evaluate(EvaluateArgs),
    /// Predict design scores for Python files
    Grade(GradeArgs),
    /// Generate counterfactual design feedback for Python files
    Feedback(FeedbackArgs),
    /// Generate a synthetic rubric-scored corpus
    GenCorpus(GenCorpusArgs),
}

#[derive(Args)]
struct ExtractArgs {
    /// Python files to extract features from
    inputs: Vec<PathBuf>,
    /// Write the dump here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    /// Corpus manifest (`path,score` or `path,raw_score,max_score`)
    #[arg(long)]
    manifest: PathBuf,
    /// Model kind: mlp, ensemble, linear, sigmoid-linear, or cart
    #[arg(long, default_value = "ensemble")]
    model: ModelKind,
    /// Base seed (falls back to $PYDESIGN_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Ensemble member count
    #[arg(long, default_value_t = 10)]
    ensemble_size: usize,
    /// Hidden layer width
    #[arg(long, default_value_t = 32)]
    hidden: usize,
    /// Training epochs
    #[arg(long, default_value_t = 250)]
    epochs: usize,
    /// Train ADAM without bias terms
    #[arg(long)]
    no_bias: bool,
    /// Train,dev,test ratios
    #[arg(long, default_value = "0.7,0.15,0.15")]
    split: String,
    /// Pick the CART depth from an inclusive range (e.g. 1..15) by dev MSE
    #[arg(long)]
    depth_sweep: Option<String>,
    /// Artifact output path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    artifact: PathBuf,
    #[arg(long)]
    manifest: PathBuf,
}

#[derive(Args)]
struct GradeArgs {
    #[arg(long)]
    artifact: PathBuf,
    /// Python files to grade
    files: Vec<PathBuf>,
}

#[derive(Args)]
struct FeedbackArgs {
    #[arg(long)]
    artifact: PathBuf,
    /// Output format: text or structured (JSON)
    #[arg(long, default_value = "text")]
    format: String,
    /// Keep only the top K suggestions by score improvement
    #[arg(long)]
    top_k: Option<usize>,
    /// Drop suggestions whose score improvement is below this
    #[arg(long, default_value_t = 0.0)]
    min_delta: f64,
    /// Message-table override file (`feature_id,direction,sentence` rows)
    #[arg(long)]
    messages: Option<PathBuf>,
    /// Python files to critique
    files: Vec<PathBuf>,
}

#[derive(Args)]
struct GenCorpusArgs {
    /// Number of programs (at least 20)
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_dir: PathBuf,
}

fn default_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| std::env::var("PYDESIGN_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(0)
}

fn parse_split(text: &str, seed: u64) -> Result<SplitSpec, AppError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| AppError::usage(format!("--split expects three numbers, got `{text}`")))?;
    let [train, dev, test] = parts.as_slice() else {
        return Err(AppError::usage(format!("--split expects three numbers, got `{text}`")));
    };
    SplitSpec::new(*train, *dev, *test, seed).map_err(|e| AppError::usage(e.to_string()))
}

fn parse_depth_sweep(text: &str) -> Result<std::ops::RangeInclusive<usize>, AppError> {
    let bad = || AppError::usage(format!("--depth-sweep expects `lo..hi`, got `{text}`"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo < 1 || hi < lo {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn read_source(path: &PathBuf) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_extract(args: ExtractArgs) -> AppResult {
    if args.inputs.is_empty() {
        return Err(AppError::data("no inputs"));
    }
    let mut records = Vec::new();
    let mut problems = Vec::new();
    for path in &args.inputs {
        let text = match read_source(path) {
            Ok(t) => t,
            Err(e) => {
                problems.push(e);
                continue;
            }
        };
        match parse_text(&text) {
            Ok((syntax, source)) => {
                let fv = pydesign_core::extract_features(&syntax, &source);
                records.push(serde_json::json!({
                    "path": path.display().to_string(),
                    "schema_version": fv.schema_version,
                    "values": fv.values,
                }));
            }
            Err(e) => problems.push(format!("{}: {e}", path.display())),
        }
    }
    if !problems.is_empty() {
        return Err(AppError::data(problems.join("\n")));
    }
    let mut dump = String::new();
    for record in records {
        dump.push_str(&record.to_string());
        dump.push('\n');
    }
    match args.out {
        Some(out) => fs::write(&out, dump)
            .map_err(|e| AppError::data(format!("{}: {e}", out.display())))?,
        None => print!("{dump}"),
    }
    Ok(())
}

fn cmd_train(args: TrainArgs) -> AppResult {
    let seed = default_seed(args.seed);
    let split = parse_split(&args.split, seed)?;
    let examples = load_corpus(&args.manifest).map_err(|e| AppError::data(e.to_string()))?;

    let config = TrainConfig {
        hidden_size: args.hidden,
        epochs: args.epochs,
        seed,
        use_bias: !args.no_bias,
        ..TrainConfig::default()
    };
    let mut req = TrainRequest::new(args.model, split, config);
    req.ensemble_size = args.ensemble_size;
    if let Some(sweep) = &args.depth_sweep {
        req.depth_sweep = Some(parse_depth_sweep(sweep)?);
    }

    let artifact =
        train_pipeline(&examples, &req).map_err(|e| AppError::data(e.to_string()))?;
    artifact.save(&args.out).map_err(|e| AppError::data(e.to_string()))?;

    let m = &artifact.train_meta.metrics;
    println!(
        "train: MSE {:.3}  accuracy {:.2}%",
        m.train.mse,
        m.train.avg_accuracy * 100.0
    );
    println!("dev:   MSE {:.3}  accuracy {:.2}%", m.dev.mse, m.dev.avg_accuracy * 100.0);
    println!("test:  MSE {:.3}  accuracy {:.2}%", m.test.mse, m.test.avg_accuracy * 100.0);
    eprintln!("wrote {}", args.out.display());
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs) -> AppResult {
    let artifact = ModelArtifact::load(&args.artifact).map_err(|e| AppError::data(e.to_string()))?;
    let examples = load_corpus(&args.manifest).map_err(|e| AppError::data(e.to_string()))?;
    let metrics =
        evaluate_artifact(&artifact, &examples).map_err(|e| AppError::data(e.to_string()))?;
    println!(
        "{}: MSE {:.3}  accuracy {:.2}%",
        artifact.model_kind,
        metrics.mse,
        metrics.avg_accuracy * 100.0
    );
    Ok(())
}

fn cmd_grade(args: GradeArgs) -> AppResult {
    if args.files.is_empty() {
        return Err(AppError::data("no inputs"));
    }
    let artifact = ModelArtifact::load(&args.artifact).map_err(|e| AppError::data(e.to_string()))?;
    let mut problems = Vec::new();
    let mut lines = Vec::new();
    for path in &args.files {
        let outcome = read_source(path).and_then(|text| {
            parse_text(&text).map_err(|e| format!("{}: {e}", path.display()))
        });
        match outcome {
            Ok((syntax, source)) => {
                let fv = pydesign_core::extract_features(&syntax, &source);
                match artifact.predict_raw(&fv.values) {
                    Ok(score) => lines.push(format!("{} {score:.4}", path.display())),
                    Err(e) => problems.push(format!("{}: {e}", path.display())),
                }
            }
            Err(e) => problems.push(e),
        }
    }
    for line in lines {
        println!("{line}");
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(AppError::data(problems.join("\n")))
    }
}

fn cmd_feedback(args: FeedbackArgs) -> AppResult {
    if args.files.is_empty() {
        return Err(AppError::data("no inputs"));
    }
    if args.format != "text" && args.format != "structured" {
        return Err(AppError::usage(format!(
            "--format must be text or structured, got `{}`",
            args.format
        )));
    }
    let artifact = ModelArtifact::load(&args.artifact).map_err(|e| AppError::data(e.to_string()))?;
    let Some(profile) = &artifact.good_profile else {
        return Err(AppError::data(
            "artifact has no good-program profile (no training score above the threshold); \
             feedback is unavailable",
        ));
    };
    let schema = FeatureSchema::current();
    let table = match &args.messages {
        Some(path) => load_message_table(path, &schema).map_err(|e| {
            AppError::data(e.problems.iter().map(|p| format!("{}: {p}", e.path)).collect::<Vec<_>>().join("\n"))
        })?,
        None => MessageTable::defaults(&schema),
    };

    let mut problems = Vec::new();
    let mut outputs = Vec::new();
    for path in &args.files {
        let outcome = read_source(path).and_then(|text| {
            parse_text(&text).map_err(|e| format!("{}: {e}", path.display()))
        });
        let (syntax, source) = match outcome {
            Ok(parsed) => parsed,
            Err(e) => {
                problems.push(e);
                continue;
            }
        };
        let fv = pydesign_core::extract_features(&syntax, &source);
        let mut report = generate_feedback(
            artifact.payload.model(),
            &artifact.standardizer,
            profile,
            &path.display().to_string(),
            &fv.values,
            &schema,
            &table,
        )
        .map_err(|e| AppError::data(format!("{}: {e}", path.display())))?;

        report.suggestions.retain(|s| s.delta >= args.min_delta);
        if let Some(k) = args.top_k {
            report.suggestions.truncate(k);
        }
        if args.format == "structured" {
            outputs.push(serde_json::to_string_pretty(&report).expect("report serializes"));
        } else {
            outputs.push(render_text(&report));
        }
    }
    for output in outputs {
        println!("{output}");
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(AppError::data(problems.join("\n")))
    }
}

fn cmd_gen_corpus(args: GenCorpusArgs) -> AppResult {
    let manifest = generate_synthetic_corpus(args.n, args.seed, &args.out_dir)
        .map_err(|e| AppError::data(e.to_string()))?;
    println!("{}", manifest.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let result = match cli.command {
        Command::Extract(args) => cmd_extract(args),
        Command::Train(args) => cmd_train(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Grade(args) => cmd_grade(args),
        Command::Feedback(args) => cmd_feedback(args),
        Command::GenCorpus(args) => cmd_gen_corpus(args),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
