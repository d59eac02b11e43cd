//! Corpus manifest loading.
//!
//! A manifest is a comma-separated UTF-8 text file whose header is either
//! `path,score` or `path,raw_score,max_score`; `#`-prefixed lines are
//! comments and paths resolve relative to the manifest's directory. Loading
//! is atomic: every bad row, unparseable file, and out-of-range score is
//! reported together rather than stopping at the first.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use pydesign_core::{extract_features, FeatureVector};

use crate::parse;

/// One corpus entry with raw (unstandardized) features.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedExample {
    pub path: String,
    pub features: FeatureVector,
    pub score: f64,
}

/// A single problem found while loading.
#[derive(Debug, Clone, PartialEq)]
pub enum CorpusIssue {
    Manifest { line: usize, message: String },
    Syntax { path: String, line: usize, message: String },
    ScoreOutOfRange { path: String, score: f64 },
    Io { path: String, message: String },
}

impl fmt::Display for CorpusIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusIssue::Manifest { line, message } => {
                write!(f, "manifest line {line}: {message}")
            }
            CorpusIssue::Syntax { path, line, message } => {
                write!(f, "{path}: syntax error at line {line}: {message}")
            }
            CorpusIssue::ScoreOutOfRange { path, score } => {
                write!(f, "{path}: score {score} outside [0, 1]")
            }
            CorpusIssue::Io { path, message } => write!(f, "{path}: {message}"),
        }
    }
}

/// Everything wrong with a corpus, reported at once.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusError {
    pub issues: Vec<CorpusIssue>,
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "corpus has {} problem(s):", self.issues.len())?;
        for issue in &self.issues {
            writeln!(f, "  {issue}")?;
        }
        Ok(())
    }
}

impl std::error::Error for CorpusError {}

enum Header {
    Score,
    RawMax,
}

struct Row {
    path: PathBuf,
    display_path: String,
    score: f64,
}

fn parse_manifest(
    manifest_path: &Path,
    text: &str,
    issues: &mut Vec<CorpusIssue>,
) -> Vec<Row> {
    let base = manifest_path.parent().unwrap_or_else(|| Path::new("."));
    let mut header: Option<Header> = None;
    let mut rows = Vec::new();
    let mut seen = std::collections::BTreeSet::new();

    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let Some(header) = &header else {
            header = Some(match fields.as_slice() {
                ["path", "score"] => Header::Score,
                ["path", "raw_score", "max_score"] => Header::RawMax,
                _ => {
                    issues.push(CorpusIssue::Manifest {
                        line: line_no,
                        message: format!(
                            "expected header `path,score` or `path,raw_score,max_score`, got `{line}`"
                        ),
                    });
                    return rows;
                }
            });
            continue;
        };
        let score = match (header, fields.as_slice()) {
            (Header::Score, [_, score]) => match score.parse::<f64>() {
                Ok(s) => s,
                Err(_) => {
                    issues.push(CorpusIssue::Manifest {
                        line: line_no,
                        message: format!("`{score}` is not a number"),
                    });
                    continue;
                }
            },
            (Header::RawMax, [_, raw, max]) => {
                match (raw.parse::<f64>(), max.parse::<f64>()) {
                    (Ok(raw), Ok(max)) if max > 0.0 => raw / max,
                    (Ok(_), Ok(_)) => {
                        issues.push(CorpusIssue::Manifest {
                            line: line_no,
                            message: "max_score must be positive".to_string(),
                        });
                        continue;
                    }
                    _ => {
                        issues.push(CorpusIssue::Manifest {
                            line: line_no,
                            message: format!("`{raw},{max}` is not a number pair"),
                        });
                        continue;
                    }
                }
            }
            _ => {
                issues.push(CorpusIssue::Manifest {
                    line: line_no,
                    message: format!("wrong field count in `{line}`"),
                });
                continue;
            }
        };
        let display_path = fields[0].to_string();
        if !seen.insert(display_path.clone()) {
            issues.push(CorpusIssue::Manifest {
                line: line_no,
                message: format!("duplicate path `{display_path}`"),
            });
            continue;
        }
        rows.push(Row { path: base.join(fields[0]), display_path, score });
    }

    if header.is_none() {
        issues.push(CorpusIssue::Manifest {
            line: 0,
            message: "manifest has no header row".to_string(),
        });
    }
    rows
}

/// Load a manifest: parse every referenced file, extract features, normalize
/// scores. Fails atomically with the full issue list.
pub fn load_corpus(manifest_path: &Path) -> Result<Vec<LoadedExample>, CorpusError> {
    let text = fs::read_to_string(manifest_path).map_err(|e| CorpusError {
        issues: vec![CorpusIssue::Io {
            path: manifest_path.display().to_string(),
            message: e.to_string(),
        }],
    })?;

    let mut issues = Vec::new();
    let rows = parse_manifest(manifest_path, &text, &mut issues);

    let mut examples = Vec::new();
    for row in rows {
        if !(0.0..=1.0).contains(&row.score) {
            issues.push(CorpusIssue::ScoreOutOfRange {
                path: row.display_path.clone(),
                score: row.score,
            });
        }
        let source = match fs::read_to_string(&row.path) {
            Ok(s) => s,
            Err(e) => {
                issues.push(CorpusIssue::Io {
                    path: row.display_path.clone(),
                    message: e.to_string(),
                });
                continue;
            }
        };
        match parse::parse_text(&source) {
            Ok((syntax, source)) => {
                examples.push(LoadedExample {
                    path: row.display_path,
                    features: extract_features(&syntax, &source),
                    score: row.score,
                });
            }
            Err(e) => issues.push(CorpusIssue::Syntax {
                path: row.display_path,
                line: e.line,
                message: e.message,
            }),
        }
    }

    if issues.is_empty() {
        Ok(examples)
    } else {
        Err(CorpusError { issues })
    }
}
