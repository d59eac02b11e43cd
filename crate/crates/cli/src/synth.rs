//! Synthetic rubric-scored corpus generator.
//!
//! Emits parameterized Python programs that toggle five design flaws —
//! module-level mutable globals, magic numbers, one monolithic function
//! instead of small helpers, missing exception handling, and sparse
//! commenting. Each flaw carries a fixed penalty and the rubric score is
//! `1 − Σ penalties` of the flaws present, so labels are a deterministic
//! function of the toggles while surface details (names, list contents,
//! helper counts) vary per program.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use pydesign_core::rng::SplitMix64;

pub const MIN_PROGRAMS: usize = 20;

const PENALTY_GLOBALS: f64 = 0.18;
const PENALTY_MAGIC: f64 = 0.12;
const PENALTY_MONOLITH: f64 = 0.22;
const PENALTY_NO_TRY: f64 = 0.10;
const PENALTY_SPARSE_COMMENTS: f64 = 0.08;

#[derive(Debug, Clone, Copy)]
struct Flaws {
    globals: bool,
    magic: bool,
    monolith: bool,
    no_try: bool,
    sparse_comments: bool,
}

impl Flaws {
    fn all_on() -> Self {
        Self { globals: true, magic: true, monolith: true, no_try: true, sparse_comments: true }
    }

    fn random(rng: &mut SplitMix64) -> Self {
        Self {
            globals: rng.next_below(2) == 1,
            magic: rng.next_below(2) == 1,
            monolith: rng.next_below(2) == 1,
            no_try: rng.next_below(2) == 1,
            sparse_comments: rng.next_below(2) == 1,
        }
    }

    fn score(&self) -> f64 {
        let mut penalty = 0.0;
        if self.globals {
            penalty += PENALTY_GLOBALS;
        }
        if self.magic {
            penalty += PENALTY_MAGIC;
        }
        if self.monolith {
            penalty += PENALTY_MONOLITH;
        }
        if self.no_try {
            penalty += PENALTY_NO_TRY;
        }
        if self.sparse_comments {
            penalty += PENALTY_SPARSE_COMMENTS;
        }
        1.0 - penalty
    }
}

/// Lowest score the rubric can produce (all flaws on).
pub fn min_score() -> f64 {
    Flaws::all_on().score()
}

const DATA_NAMES: &[&str] = &["readings", "samples", "entries", "weights", "counts", "values"];
const HELPER_NAMES: &[&str] =
    &["summarize", "scale_items", "pick_peak", "tally_odd", "smooth", "clip_items"];
const COMMENTS: &[&str] = &[
    "accumulate the running total",
    "track the largest value seen so far",
    "guard against empty input",
    "scale before reporting",
    "walk the collected values",
    "final report",
];

fn pick<'a>(rng: &mut SplitMix64, pool: &[&'a str]) -> &'a str {
    pool[rng.next_below(pool.len() as u64) as usize]
}

struct ProgramWriter {
    lines: Vec<String>,
}

impl ProgramWriter {
    fn new() -> Self {
        Self { lines: Vec::new() }
    }

    fn push(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    /// A comment plus surrounding blank line — only when commenting is on.
    fn comment(&mut self, rng: &mut SplitMix64, indent: &str, sparse: bool) {
        if sparse {
            return;
        }
        if !self.lines.is_empty() {
            self.lines.push(String::new());
        }
        self.push(format!("{indent}# {}", pick(rng, COMMENTS)));
    }

    fn text(self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

fn int_list(rng: &mut SplitMix64, magic: bool, len: usize) -> String {
    let items: Vec<String> = (0..len)
        .map(|_| {
            if magic {
                format!("{}", 17 + rng.next_below(950))
            } else {
                format!("{}", rng.next_below(2))
            }
        })
        .collect();
    format!("[{}]", items.join(", "))
}

fn threshold(rng: &mut SplitMix64, magic: bool) -> String {
    if magic {
        format!("{}", 23 + rng.next_below(400))
    } else {
        "1".to_string()
    }
}

fn loop_block(w: &mut ProgramWriter, rng: &mut SplitMix64, indent: &str, data: &str, magic: bool) {
    let thr = threshold(rng, magic);
    match rng.next_below(3) {
        0 => {
            w.push(format!("{indent}for item in {data}:"));
            w.push(format!("{indent}    if item > {thr}:"));
            w.push(format!("{indent}        total = total + item"));
            w.push(format!("{indent}    else:"));
            w.push(format!("{indent}        total = total + {}", if magic { thr } else { "0".to_string() }));
        }
        1 => {
            w.push(format!("{indent}for item in {data}:"));
            w.push(format!("{indent}    if item > peak:"));
            w.push(format!("{indent}        peak = item"));
        }
        _ => {
            w.push(format!("{indent}index = 0"));
            w.push(format!("{indent}while index < len({data}):"));
            w.push(format!("{indent}    total = total + {data}[index]"));
            w.push(format!("{indent}    index = index + 1"));
        }
    }
}

fn divide_block(w: &mut ProgramWriter, indent: &str, data: &str, no_try: bool) {
    if no_try {
        w.push(format!("{indent}average = total / len({data})"));
    } else {
        w.push(format!("{indent}try:"));
        w.push(format!("{indent}    average = total / len({data})"));
        w.push(format!("{indent}except ZeroDivisionError:"));
        w.push(format!("{indent}    average = 0"));
    }
}

fn generate_program(rng: &mut SplitMix64, flaws: Flaws) -> String {
    let mut w = ProgramWriter::new();
    let data = pick(rng, DATA_NAMES);
    let sparse = flaws.sparse_comments;

    if flaws.globals {
        let n_globals = 3 + rng.next_below(3);
        w.comment(rng, "", sparse);
        for g in 0..n_globals {
            w.push(format!("state_{g} = {}", rng.next_below(2)));
        }
    }

    if flaws.monolith {
        w.comment(rng, "", sparse);
        w.push("def main():".to_string());
        if flaws.globals {
            w.push("    global state_0".to_string());
        }
        let len = 6 + rng.next_below(5) as usize;
        w.push(format!("    {data} = {}", int_list(rng, flaws.magic, len)));
        w.push("    total = 0".to_string());
        w.push("    peak = 0".to_string());
        let blocks = 3 + rng.next_below(2);
        for _ in 0..blocks {
            w.comment(rng, "    ", sparse);
            loop_block(&mut w, rng, "    ", data, flaws.magic);
        }
        w.comment(rng, "    ", sparse);
        divide_block(&mut w, "    ", data, flaws.no_try);
        if flaws.globals {
            w.push("    state_0 = total".to_string());
        }
        w.push("    print(total)".to_string());
        w.push("    print(peak)".to_string());
        w.push("    print(average)".to_string());
    } else {
        let n_helpers = 2 + rng.next_below(3);
        let mut helpers = Vec::new();
        for h in 0..n_helpers {
            let name = format!("{}_{h}", pick(rng, HELPER_NAMES));
            w.comment(rng, "", sparse);
            w.push(format!("def {name}(items):"));
            w.push("    total = 0".to_string());
            w.push("    peak = 0".to_string());
            loop_block(&mut w, rng, "    ", "items", flaws.magic);
            w.push("    return total + peak".to_string());
            helpers.push(name);
        }
        w.comment(rng, "", sparse);
        w.push("def report(items):".to_string());
        if flaws.globals {
            w.push("    global state_0".to_string());
            w.push("    state_0 = state_0 + 1".to_string());
        }
        w.push("    total = 0".to_string());
        for name in &helpers {
            w.push(format!("    total = total + {name}(items)"));
        }
        divide_block(&mut w, "    ", "items", flaws.no_try);
        w.push("    return average".to_string());
        w.comment(rng, "", sparse);
        w.push("def main():".to_string());
        let len = 6 + rng.next_below(5) as usize;
        w.push(format!("    {data} = {}", int_list(rng, flaws.magic, len)));
        w.push(format!("    print(report({data}))"));
    }

    w.push(String::new());
    w.push("main()".to_string());
    w.text()
}

/// Generate `n` programs plus a `path,score` manifest under `out_dir`.
/// Byte-identical for the same `(n, seed)`.
pub fn generate_synthetic_corpus(n: usize, seed: u64, out_dir: &Path) -> io::Result<PathBuf> {
    if n < MIN_PROGRAMS {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            format!("need at least {MIN_PROGRAMS} programs, asked for {n}"),
        ));
    }
    fs::create_dir_all(out_dir)?;

    let mut rng = SplitMix64::new(seed);
    let mut manifest = String::from("# synthetic rubric-scored corpus\npath,score\n");
    for i in 0..n {
        // program 0 pins the rubric minimum so the boundary is always present
        let flaws = if i == 0 { Flaws::all_on() } else { Flaws::random(&mut rng) };
        let body = generate_program(&mut rng, flaws);
        let name = format!("prog_{i:04}.py");
        fs::write(out_dir.join(&name), body)?;
        manifest.push_str(&format!("{name},{:.2}\n", flaws.score()));
    }
    let manifest_path = out_dir.join("manifest.csv");
    fs::write(&manifest_path, manifest)?;
    Ok(manifest_path)
}
