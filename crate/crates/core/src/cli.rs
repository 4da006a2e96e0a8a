//! Command-line surface. All output is byte-deterministic for fixed inputs,
//! seed, and method, whatever `GHFORGE_WORKERS` says; the one exception is
//! the informational time column of `bench`.
//!
//! Exit codes: 0 success/verified, 1 computation failure or identity
//! mismatch, 2 usage errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::correspondence::{Correspondence, CorrespondenceError, DEFAULT_ENUMERATION_CAP};
use crate::embedding::{embed, EmbeddingError, EmbeddingParams, ProductPoint};
use crate::format::{parse_points, parse_space, serialize_embedded, FormatError};
use crate::gh::{
    gh_bruteforce, gh_exact_with, gh_function_pairs, GhError, GhResult, SearchOptions,
};
use crate::metric::{FiniteMetricSpace, MetricError};
use crate::scalar::Scalar;
use crate::verify::{
    embed_linf_points, linf_distance, random_product_point, run_suite, SuiteConfig, VerifyError,
};

/// Default per-search node budget for `verify-theorem`.
pub const DEFAULT_SUITE_BUDGET: u64 = 1_000_000;

#[derive(Parser)]
#[command(
    name = "ghforge",
    version,
    about = "Exact Gromov-Hausdorff distances and l-infinity product gluings for finite metric spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Bruteforce,
    Exact,
}

#[derive(Subcommand)]
enum Command {
    /// Check the metric axioms of a space file.
    Validate { file: PathBuf },
    /// Print the diameter of a space file.
    Diam { file: PathBuf },
    /// Compute the Gromov-Hausdorff distance between two space files.
    Gh {
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        method: MethodArg,
        /// Node budget; when exhausted the result is an upper bound.
        #[arg(long)]
        budget: Option<u64>,
        /// Also print the witness correspondence as label pairs.
        #[arg(long)]
        witness: bool,
    },
    /// Glue the given spaces (one per file, in order) into one space.
    Embed {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Diameter cap r of the construction.
        #[arg(long)]
        r: String,
    },
    /// Run seeded random instances of the product identity check.
    VerifyTheorem {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        instances: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: String,
        #[arg(long, default_value_t = 2)]
        max_block_size: usize,
        #[arg(long, default_value_t = DEFAULT_SUITE_BUDGET)]
        budget: u64,
    },
    /// Embed an l-infinity point file and check the pairwise distances.
    EmbedLinf {
        file: PathBuf,
        /// Write each glued space to this directory instead of stdout.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Node-count and runtime table across methods on a generated corpus.
    Bench {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// Entry point used by the binary; parses `std::env::args`.
pub fn run_cli() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    run(args, &mut stdout, &mut stderr)
}

/// Testable entry point: runs on explicit args and output handles.
pub fn run(args: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };

    let workers = match workers_from_env() {
        Ok(workers) => workers,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            return 2;
        }
    };

    let outcome = match cli.command {
        Command::Validate { file } => cmd_validate(&file, out),
        Command::Diam { file } => cmd_diam(&file, out),
        Command::Gh {
            file_a,
            file_b,
            method,
            budget,
            witness,
        } => cmd_gh(&file_a, &file_b, method, budget, witness, workers, out),
        Command::Embed { files, r } => cmd_embed(&files, &r, out),
        Command::VerifyTheorem {
            seed,
            instances,
            n,
            r,
            max_block_size,
            budget,
        } => cmd_verify(seed, instances, n, &r, max_block_size, budget, workers, out),
        Command::EmbedLinf { file, out_dir } => {
            cmd_embed_linf(&file, out_dir.as_deref(), workers, out)
        }
        Command::Bench { seed } => cmd_bench(seed, workers, out),
    };

    match outcome {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "{}", failure.to_json());
            1
        }
    }
}

fn workers_from_env() -> Result<usize, String> {
    match std::env::var("GHFORGE_WORKERS") {
        Err(std::env::VarError::NotPresent) => Ok(1),
        Err(e) => Err(format!("GHFORGE_WORKERS: {e}")),
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(w) if w >= 1 => Ok(w),
            _ => Err(format!(
                "GHFORGE_WORKERS must be a positive integer, got {raw:?}"
            )),
        },
    }
}

// ---------------------------------------------------------------------------
// Failure reporting
// ---------------------------------------------------------------------------

struct Failure {
    kind: &'static str,
    message: String,
    axiom: Option<(String, Vec<usize>)>,
}

impl Failure {
    fn new(kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            kind,
            message: message.into(),
            axiom: None,
        }
    }

    fn to_json(&self) -> String {
        let mut error = json!({
            "kind": self.kind,
            "message": self.message,
        });
        if let Some((axiom, witness)) = &self.axiom {
            error["axiom"] = json!(axiom);
            error["witness"] = json!(witness);
        }
        json!({ "error": error }).to_string()
    }
}

impl From<MetricError> for Failure {
    fn from(e: MetricError) -> Self {
        match &e {
            MetricError::Axiom(violation) => Failure {
                kind: "axiom",
                message: e.to_string(),
                axiom: Some((violation.kind().to_owned(), violation.witness())),
            },
            _ => Failure::new("metric", e.to_string()),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Metric(inner) => inner.into(),
            FormatError::Embedding(inner) => inner.into(),
            other => Failure::new("parse", other.to_string()),
        }
    }
}

impl From<EmbeddingError> for Failure {
    fn from(e: EmbeddingError) -> Self {
        match e {
            EmbeddingError::Metric(inner) => inner.into(),
            other => Failure::new("embedding", other.to_string()),
        }
    }
}

impl From<CorrespondenceError> for Failure {
    fn from(e: CorrespondenceError) -> Self {
        match e {
            CorrespondenceError::CapExceeded { .. } => Failure::new("cap-exceeded", e.to_string()),
            other => Failure::new("correspondence", other.to_string()),
        }
    }
}

impl From<GhError> for Failure {
    fn from(e: GhError) -> Self {
        match e {
            GhError::Correspondence(inner) => inner.into(),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Embedding(inner) => inner.into(),
            VerifyError::Correspondence(inner) => inner.into(),
            other => Failure::new("verify", other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new("io", e.to_string())
    }
}

fn read_space(path: &PathBuf) -> Result<FiniteMetricSpace, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))?;
    Ok(parse_space(&text)?.space)
}

fn parse_radius(raw: &str) -> Result<Scalar, Failure> {
    raw.parse::<Scalar>()
        .map_err(|e| Failure::new("parse", format!("--r: {e}")))
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_validate(path: &PathBuf, out: &mut dyn Write) -> Result<i32, Failure> {
    let space = read_space(path)?;
    let _ = writeln!(
        out,
        "ok: {} points, diameter {}",
        space.len(),
        space.diameter()
    );
    Ok(0)
}

fn cmd_diam(path: &PathBuf, out: &mut dyn Write) -> Result<i32, Failure> {
    let space = read_space(path)?;
    let _ = writeln!(out, "{}", space.diameter());
    Ok(0)
}

fn witness_lines(
    witness: &Correspondence,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> Vec<String> {
    witness
        .pairs()
        .iter()
        .map(|&(i, j)| (x.label(i).to_owned(), y.label(j).to_owned()))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .map(|(a, b)| format!("  {a} <-> {b}"))
        .collect()
}

fn cmd_gh(
    path_a: &PathBuf,
    path_b: &PathBuf,
    method: MethodArg,
    budget: Option<u64>,
    witness: bool,
    workers: usize,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let x = read_space(path_a)?;
    let y = read_space(path_b)?;
    let result = match method {
        MethodArg::Bruteforce => gh_bruteforce(&x, &y, DEFAULT_ENUMERATION_CAP)?,
        MethodArg::Exact => gh_exact_with(&x, &y, &SearchOptions { budget, workers }),
    };
    let _ = writeln!(out, "{}", result.value);
    if witness {
        let _ = writeln!(out, "witness:");
        for line in witness_lines(&result.witness, &x, &y) {
            let _ = writeln!(out, "{line}");
        }
    }
    let _ = writeln!(out, "nodes: {}", result.nodes_explored);
    let _ = writeln!(out, "method: {}", result.method);
    let _ = writeln!(out, "exact: {}", result.exact);
    Ok(0)
}

fn cmd_embed(files: &[PathBuf], radius: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let r = parse_radius(radius)?;
    let blocks: Vec<FiniteMetricSpace> = files.iter().map(read_space).collect::<Result<_, _>>()?;
    let params = EmbeddingParams::new(r, blocks.len())?;
    let tuple = ProductPoint::new(blocks)?;
    let glued = embed(&tuple, &params)?;
    let _ = writeln!(out, "{}", serialize_embedded(&glued));
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    seed: u64,
    instances: usize,
    n: usize,
    radius: &str,
    max_block_size: usize,
    budget: u64,
    workers: usize,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let r = parse_radius(radius)?;
    let config = SuiteConfig {
        seed,
        instances,
        n,
        r,
        max_block_size,
        budget: Some(budget),
        workers,
    };
    let results = run_suite(&config)?;

    let mut equal = 0usize;
    let mut unequal = 0usize;
    let mut inconclusive = 0usize;
    for instance in &results {
        let report = &instance.report;
        let status = if !report.conclusive {
            inconclusive += 1;
            "inconclusive"
        } else if report.equal {
            equal += 1;
            "yes"
        } else {
            unequal += 1;
            "NO"
        };
        let per_block = report
            .per_block
            .iter()
            .map(Scalar::to_string)
            .collect::<Vec<_>>()
            .join(", ");
        let _ = writeln!(
            out,
            "instance {}: lhs={} rhs={} per-block=[{}] equal={} nodes={}",
            instance.index + 1,
            report.lhs,
            report.rhs,
            per_block,
            status,
            report.stats.glued_nodes + report.stats.block_nodes,
        );
    }
    let _ = writeln!(out, "equal: {equal}/{instances}");
    let _ = writeln!(out, "inconclusive: {inconclusive}");
    Ok(if unequal > 0 { 1 } else { 0 })
}

fn cmd_embed_linf(
    path: &PathBuf,
    out_dir: Option<&std::path::Path>,
    workers: usize,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))?;
    let points = parse_points(&text)?;
    let embedding = embed_linf_points(&points)?;

    match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            for (i, glued) in embedding.spaces.iter().enumerate() {
                let path = dir.join(format!("point_{i}.json"));
                fs::write(&path, serialize_embedded(glued) + "\n")?;
                let _ = writeln!(out, "wrote {}", path.display());
            }
        }
        None => {
            let docs: Vec<serde_json::Value> = embedding
                .spaces
                .iter()
                .map(|glued| {
                    serde_json::from_str(&serialize_embedded(glued)).expect("own output is JSON")
                })
                .collect();
            let _ = writeln!(out, "{}", json!({ "spaces": docs }));
        }
    }

    let options = SearchOptions {
        budget: None,
        workers,
    };
    let mut checked = 0usize;
    let mut matched = 0usize;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let gh = gh_exact_with(
                embedding.spaces[i].space(),
                embedding.spaces[j].space(),
                &options,
            )
            .value;
            let linf = linf_distance(&points[i], &points[j]);
            let ok = gh == linf;
            checked += 1;
            matched += ok as usize;
            let _ = writeln!(
                out,
                "pair ({i},{j}): gh={gh} linf={linf} equal={}",
                if ok { "yes" } else { "NO" }
            );
        }
    }
    let _ = writeln!(out, "linf-check: {matched}/{checked}");
    Ok(if matched == checked { 0 } else { 1 })
}

fn cmd_bench(seed: u64, workers: usize, out: &mut dyn Write) -> Result<i32, Failure> {
    let _ = writeln!(
        out,
        "{:<18} {:<15} {:>8} {:>10} {:>9}",
        "case", "method", "value", "nodes", "time-ms"
    );
    let mut row = |case: &str, method: &str, result: &GhResult, elapsed_ms: u128| {
        let _ = writeln!(
            out,
            "{:<18} {:<15} {:>8} {:>10} {:>9}",
            case,
            method,
            result.value.to_string(),
            result.nodes_explored,
            elapsed_ms
        );
    };

    let r = Scalar::one();
    let mut cases: Vec<(String, FiniteMetricSpace, FiniteMetricSpace)> = Vec::new();
    for (index, size) in [(0u64, 2usize), (1, 3), (2, 4)] {
        let x = random_product_point(seed.wrapping_add(2 * index + 1), 1, &r, size);
        let y = random_product_point(seed.wrapping_add(2 * index + 2), 1, &r, size);
        cases.push((
            format!("rand-{size}x{size}"),
            x.blocks()[0].clone(),
            y.blocks()[0].clone(),
        ));
    }
    let params = EmbeddingParams::new(r.clone(), 2)?;
    let gx = embed(
        &random_product_point(seed.wrapping_add(7), 2, &r, 2),
        &params,
    )?;
    let gy = embed(
        &random_product_point(seed.wrapping_add(8), 2, &r, 2),
        &params,
    )?;
    cases.push((
        "glued-n2".to_owned(),
        gx.space().clone(),
        gy.space().clone(),
    ));

    for (case, x, y) in &cases {
        if x.len() * y.len() <= 16 {
            let start = Instant::now();
            let result = gh_bruteforce(x, y, 16)?;
            row(case, "bruteforce", &result, start.elapsed().as_millis());

            let start = Instant::now();
            let result = gh_function_pairs(x, y);
            row(case, "function-pairs", &result, start.elapsed().as_millis());
        }
        let start = Instant::now();
        let result = gh_exact_with(
            x,
            y,
            &SearchOptions {
                budget: None,
                workers,
            },
        );
        row(case, "exact", &result, start.elapsed().as_millis());
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_to_strings(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("ghforge")
            .chain(args.iter().copied())
            .map(str::to_owned)
            .collect();
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_two() {
        let (code, _, err) = run_to_strings(&["no-such-command"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_to_strings(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("ghforge"));
    }

    #[test]
    fn gh_of_identical_files_prints_zero() {
        let dir = std::env::temp_dir().join(format!("ghforge-cli-test-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("two.json");
        fs::write(&path, r#"{"labels":["a","b"],"matrix":[[0,1],[1,0]]}"#).unwrap();
        let p = path.to_str().unwrap();
        let (code, out, _) = run_to_strings(&["gh", p, p]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next(), Some("0"));
        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn invalid_space_reports_machine_readable_error() {
        let dir = std::env::temp_dir().join(format!("ghforge-cli-bad-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.json");
        fs::write(
            &path,
            r#"{"labels":["a","b","c"],"matrix":[[0,1,10],[1,0,1],[10,1,0]]}"#,
        )
        .unwrap();
        let (code, _, err) = run_to_strings(&["validate", path.to_str().unwrap()]);
        assert_eq!(code, 1);
        let parsed: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(parsed["error"]["kind"], "axiom");
        assert_eq!(parsed["error"]["axiom"], "triangle");
        fs::remove_dir_all(&dir).ok();
    }
}
