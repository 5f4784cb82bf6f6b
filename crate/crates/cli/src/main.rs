mod format;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use steklov_core::families::{exhaustive_minimizer_search, FamilySpec};
use steklov_core::verify::{run_suite, Tolerances};
use steklov_core::{
    check_bounds, steklov_spectrum, BoundReport, Error, GraphWithBoundary, Normalization,
};

use crate::format::{parse_range, sig12, sig12_clean};

const EXIT_PARSE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_PARAMETERS: u8 = 4;

#[derive(Parser)]
#[command(
    name = "steklov",
    version,
    about = "Steklov spectra of graphs with boundary"
)]
struct Cli {
    /// Boundary inner product.
    #[arg(long, global = true, value_enum, default_value_t = Norm::Unit)]
    norm: Norm,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Norm {
    Unit,
    Measure,
}

impl From<Norm> for Normalization {
    fn from(n: Norm) -> Self {
        match n {
            Norm::Unit => Normalization::Unit,
            Norm::Measure => Normalization::Measure,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Path,
    D,
    H,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Steklov eigenvalues of a graph file.
    Spectrum { input: PathBuf },
    /// Compare sigma_1 of a graph file with the lower bounds.
    Bounds { input: PathBuf },
    /// Write a family member as graph JSON.
    Family {
        #[arg(value_enum)]
        kind: Kind,
        #[command(flatten)]
        params: FamilyParams,
    },
    /// Tabulate sigma_1 and the bounds over parameter ranges.
    Sweep {
        #[arg(value_enum)]
        kind: Kind,
        #[command(flatten)]
        params: SweepParams,
    },
    /// Run the reproduction suite.
    Verify,
    /// Exhaustively search small graphs for sigma_1 minimizers.
    Search {
        #[arg(long)]
        b: usize,
        #[arg(long = "dB")]
        d_b: usize,
        #[arg(long)]
        max_vertices: usize,
    },
}

#[derive(clap::Args)]
struct FamilyParams {
    /// Path length (path) or family index (d).
    #[arg(long)]
    n: Option<usize>,
    /// Number of boundary vertices (h, random).
    #[arg(long)]
    b: Option<usize>,
    /// Boundary diameter (h).
    #[arg(long = "dB")]
    d_b: Option<usize>,
    /// Interior vertex count (random).
    #[arg(long)]
    n_interior: Option<usize>,
    /// Edge probability (random).
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    /// Random weights in [0.5, 2] (random).
    #[arg(long)]
    weighted: bool,
}

#[derive(clap::Args)]
struct SweepParams {
    /// Range of n (path, d), e.g. `2..=50`.
    #[arg(long)]
    n: Option<String>,
    /// Range of b (h, random).
    #[arg(long)]
    b: Option<String>,
    /// Range of d_B (h).
    #[arg(long = "dB")]
    d_b: Option<String>,
    /// Range of interior vertex counts (random).
    #[arg(long)]
    n_interior: Option<String>,
    /// Edge probability (random).
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    /// Graphs per parameter tuple (random).
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Random weights in [0.5, 2] (random).
    #[arg(long)]
    weighted: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn params(message: impl Into<String>) -> Self {
        Self::new(EXIT_PARAMETERS, message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_)
            | Error::VertexOutOfRange { .. }
            | Error::Loop(_)
            | Error::DuplicateBoundary(_)
            | Error::DuplicateEdge(..)
            | Error::BadWeight(_) => EXIT_PARSE,
            Error::Invalid(_)
            | Error::Disconnected
            | Error::BoundaryTooSmall(_)
            | Error::EmptyBoundary => EXIT_VALIDATION,
            Error::InvalidParameter(_) | Error::BudgetExceeded(_) => EXIT_PARAMETERS,
            _ => EXIT_NUMERIC,
        };
        let message = match &e {
            Error::Invalid(violations) => {
                let mut m = String::from("invalid graph with boundary:");
                for v in violations {
                    m.push_str(&format!("\n  {v}"));
                }
                m
            }
            _ => e.to_string(),
        };
        Self { code, message }
    }
}

/// Command output plus an optional failure to report after writing it.
struct Outcome {
    text: String,
    failure: Option<Failure>,
}

impl From<String> for Outcome {
    fn from(text: String) -> Self {
        Self {
            text,
            failure: None,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(EXIT_PARAMETERS),
            };
        }
    };
    let result = run(&cli).and_then(|outcome| {
        emit(cli.out.as_deref(), &outcome.text)?;
        outcome.failure.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::params(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe is not worth an error exit.
            let _ = stdout.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let norm = Normalization::from(cli.norm);
    match &cli.command {
        Command::Spectrum { input } => {
            spectrum(&load(input)?, norm, cli.format.unwrap_or(Format::Text))
        }
        Command::Bounds { input } => {
            bounds(&load(input)?, norm, cli.format.unwrap_or(Format::Text))
        }
        Command::Family { kind, params } => family(*kind, params, cli.seed),
        Command::Sweep { kind, params } => sweep(
            *kind,
            params,
            cli.seed,
            norm,
            cli.format.unwrap_or(Format::Csv),
        ),
        Command::Verify => verify(cli.format.unwrap_or(Format::Text)),
        Command::Search {
            b,
            d_b,
            max_vertices,
        } => search(*b, *d_b, *max_vertices, cli.format.unwrap_or(Format::Text)),
    }
}

fn load(path: &Path) -> Result<GraphWithBoundary, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    let g = GraphWithBoundary::from_json_str(&text)?;
    g.ensure_valid()?;
    Ok(g)
}

fn json_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn spectrum(
    g: &GraphWithBoundary,
    norm: Normalization,
    format: Format,
) -> Result<Outcome, Failure> {
    let s = steklov_spectrum(g, norm)?;
    Ok(match format {
        Format::Json => json_text(&s),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let _ = w.write_record(["k", "sigma"]);
            for (k, sigma) in s.sigmas.iter().enumerate() {
                let _ = w.write_record([k.to_string(), sigma.to_string()]);
            }
            csv_text(w)
        }
        Format::Text => {
            let scale = s.sigmas.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let values: Vec<String> = s.sigmas.iter().map(|&x| sig12_clean(x, scale)).collect();
            format!(
                "normalization: {}\nb: {}\nsigma: {}\n",
                s.normalization,
                s.b(),
                values.join(", ")
            )
        }
    }
    .into())
}

fn csv_text(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

fn violation_failure(violations: &[String]) -> Option<Failure> {
    if violations.is_empty() {
        None
    } else {
        Some(Failure::new(
            EXIT_NUMERIC,
            format!("bound violated (numerical bug): {}", violations.join("; ")),
        ))
    }
}

fn bounds(g: &GraphWithBoundary, norm: Normalization, format: Format) -> Result<Outcome, Failure> {
    let r = check_bounds(g, norm)?;
    let text = match format {
        Format::Json => json_text(&r),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let _ = w.write_record([
                "normalization",
                "b",
                "d_B",
                "sigma1",
                "thm1",
                "thm2",
                "weighted",
                "slack",
                "violations",
            ]);
            let _ = w.write_record([
                r.normalization.to_string(),
                r.b.to_string(),
                r.d_b.to_string(),
                r.sigma1.to_string(),
                r.thm1.to_string(),
                r.thm2.to_string(),
                r.weighted.map(|x| x.to_string()).unwrap_or_default(),
                r.slack.to_string(),
                r.violations.join("; "),
            ]);
            csv_text(w)
        }
        Format::Text => bounds_text(&r),
    };
    Ok(Outcome {
        text,
        failure: violation_failure(&r.violations),
    })
}

fn bounds_text(r: &BoundReport) -> String {
    let mut s = format!(
        "normalization: {}\nb: {}\nd_B: {}\nsigma1: {}\nthm1: {}\nthm2: {}\n",
        r.normalization,
        r.b,
        r.d_b,
        sig12(r.sigma1),
        sig12(r.thm1),
        sig12(r.thm2)
    );
    if let Some(w) = r.weighted {
        s.push_str(&format!("weighted: {}\n", sig12(w)));
    }
    s.push_str(&format!("slack: {}\n", sig12(r.slack)));
    for v in &r.violations {
        s.push_str(&format!("VIOLATION {v}\n"));
    }
    s
}

fn require<T>(value: Option<T>, flag: &str, kind: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::params(format!("{kind} needs --{flag}")))
}

fn family(kind: Kind, p: &FamilyParams, seed: Option<u64>) -> Result<Outcome, Failure> {
    let spec = match kind {
        Kind::Path => FamilySpec::Path {
            n: require(p.n, "n", "path")?,
        },
        Kind::D => FamilySpec::DFamily {
            n: require(p.n, "n", "d")?,
        },
        Kind::H => FamilySpec::HFamily {
            b: require(p.b, "b", "h")?,
            d_b: require(p.d_b, "dB", "h")?,
        },
        Kind::Random => FamilySpec::Random {
            n_interior: require(p.n_interior, "n-interior", "random")?,
            b: require(p.b, "b", "random")?,
            p: p.p,
            seed: require(seed, "seed", "random")?,
            weighted: p.weighted,
        },
    };
    let g = spec.build().map_err(|e| Failure::params(e.to_string()))?;
    let mut text = g.to_json_string();
    text.push('\n');
    Ok(text.into())
}

#[derive(Serialize)]
struct SweepRow {
    family: &'static str,
    b: usize,
    #[serde(rename = "d_B")]
    d_b: usize,
    n: usize,
    sigma1: f64,
    thm1: f64,
    thm2: f64,
    weighted: Option<f64>,
    closed_form: Option<f64>,
    slack: f64,
}

fn sweep_specs(kind: Kind, p: &SweepParams, seed: Option<u64>) -> Result<Vec<FamilySpec>, Failure> {
    let range = |value: &Option<String>, flag: &str, kind: &str| -> Result<Vec<usize>, Failure> {
        parse_range(require(value.as_deref(), flag, kind)?)
            .map_err(|e| Failure::params(format!("--{flag}: {e}")))
    };
    Ok(match kind {
        Kind::Path => range(&p.n, "n", "path")?
            .into_iter()
            .map(|n| FamilySpec::Path { n })
            .collect(),
        Kind::D => range(&p.n, "n", "d")?
            .into_iter()
            .map(|n| FamilySpec::DFamily { n })
            .collect(),
        Kind::H => {
            let bs = range(&p.b, "b", "h")?;
            let ds = range(&p.d_b, "dB", "h")?;
            bs.iter()
                .flat_map(|&b| ds.iter().map(move |&d_b| FamilySpec::HFamily { b, d_b }))
                .collect()
        }
        Kind::Random => {
            let seed = require(seed, "seed", "random")?;
            let ns = range(&p.n_interior, "n-interior", "random")?;
            let bs = range(&p.b, "b", "random")?;
            let mut specs = Vec::new();
            for &n_interior in &ns {
                for &b in &bs {
                    for _ in 0..p.count {
                        specs.push(FamilySpec::Random {
                            n_interior,
                            b,
                            p: p.p,
                            seed: seed.wrapping_add(specs.len() as u64),
                            weighted: p.weighted,
                        });
                    }
                }
            }
            specs
        }
    })
}

fn sweep_row(spec: &FamilySpec, norm: Normalization) -> Result<(SweepRow, Vec<String>), Error> {
    let g = spec.build()?;
    let r = check_bounds(&g, norm)?;
    let row = SweepRow {
        family: spec.name(),
        b: r.b,
        d_b: r.d_b,
        n: g.n(),
        sigma1: r.sigma1,
        thm1: r.thm1,
        thm2: r.thm2,
        weighted: r.weighted,
        closed_form: spec.closed_form_sigma1(),
        slack: r.slack,
    };
    Ok((row, r.violations))
}

fn sweep(
    kind: Kind,
    p: &SweepParams,
    seed: Option<u64>,
    norm: Normalization,
    format: Format,
) -> Result<Outcome, Failure> {
    let specs = sweep_specs(kind, p, seed)?;
    for spec in &specs {
        spec.build().map_err(|e| Failure::params(e.to_string()))?;
    }
    let results: Vec<(SweepRow, Vec<String>)> = specs
        .par_iter()
        .map(|spec| sweep_row(spec, norm))
        .collect::<Result<_, _>>()?;
    let violations: Vec<String> = results
        .iter()
        .flat_map(|(_, v)| v.iter().cloned())
        .collect();
    let rows: Vec<SweepRow> = results.into_iter().map(|(row, _)| row).collect();

    let text = match format {
        Format::Json => json_text(&rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row)
                    .map_err(|e| Failure::new(EXIT_NUMERIC, e.to_string()))?;
            }
            if rows.is_empty() {
                let _ = w.write_record(SWEEP_HEADER);
            }
            csv_text(w)
        }
        Format::Text => {
            let mut table = vec![SWEEP_HEADER
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()];
            let opt = |x: Option<f64>| x.map(sig12).unwrap_or_else(|| "-".into());
            for r in &rows {
                table.push(vec![
                    r.family.to_string(),
                    r.b.to_string(),
                    r.d_b.to_string(),
                    r.n.to_string(),
                    sig12(r.sigma1),
                    sig12(r.thm1),
                    sig12(r.thm2),
                    opt(r.weighted),
                    opt(r.closed_form),
                    sig12(r.slack),
                ]);
            }
            align(&table)
        }
    };
    Ok(Outcome {
        text,
        failure: violation_failure(&violations),
    })
}

const SWEEP_HEADER: [&str; 10] = [
    "family",
    "b",
    "d_B",
    "n",
    "sigma1",
    "thm1",
    "thm2",
    "weighted",
    "closed_form",
    "slack",
];

fn align(table: &[Vec<String>]) -> String {
    let cols = table.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            table
                .iter()
                .map(|r| r[c].chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in table {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn verify(format: Format) -> Result<Outcome, Failure> {
    let tol = match std::env::var("STEKLOV_TOL") {
        Ok(v) => {
            let base: f64 = v
                .trim()
                .parse()
                .map_err(|_| Failure::params(format!("STEKLOV_TOL is not a number: {v:?}")))?;
            if !(base.is_finite() && base >= 0.0) {
                return Err(Failure::params(format!(
                    "STEKLOV_TOL must be finite and non-negative, got {v}"
                )));
            }
            Tolerances::new(base)
        }
        Err(_) => Tolerances::default(),
    };
    let checks = run_suite(&tol)?;
    let passed = checks.iter().filter(|c| c.passed).count();
    let text = match format {
        Format::Json => json_text(&json!({
            "passed": passed,
            "total": checks.len(),
            "checks": checks,
        })),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for c in &checks {
                w.serialize(c)
                    .map_err(|e| Failure::new(EXIT_NUMERIC, e.to_string()))?;
            }
            csv_text(w)
        }
        Format::Text => {
            let mut s: String = checks.iter().map(|c| format!("{c}\n")).collect();
            s.push_str(&format!("{passed}/{} checks passed\n", checks.len()));
            s
        }
    };
    let failure = (passed < checks.len()).then(|| {
        Failure::new(
            1,
            format!(
                "{} of {} checks failed",
                checks.len() - passed,
                checks.len()
            ),
        )
    });
    Ok(Outcome { text, failure })
}

fn search(b: usize, d_b: usize, max_vertices: usize, format: Format) -> Result<Outcome, Failure> {
    let report = exhaustive_minimizer_search(b, d_b, max_vertices)?;
    let graphs: Vec<String> = report
        .minimizers
        .iter()
        .map(|g| g.to_json_string())
        .collect();
    let text = match format {
        Format::Json | Format::Csv => {
            let mut v = serde_json::to_value(&report).expect("serializable report");
            let parsed: Vec<Value> = graphs
                .iter()
                .map(|s| serde_json::from_str(s).expect("graph JSON"))
                .collect();
            v["minimizer_count"] = json!(parsed.len());
            v["minimizers"] = Value::Array(parsed);
            json_text(&v)
        }
        Format::Text => {
            let mut s = format!(
                "b = {b}, d_B = {d_b}, at most {max_vertices} vertices\nevaluated: {}\n",
                report.evaluated
            );
            match report.min_sigma1 {
                Some(m) => s.push_str(&format!("min sigma1: {}\n", sig12(m))),
                None => {
                    s.push_str("min sigma1: none (no valid graph with this boundary diameter)\n")
                }
            }
            s.push_str(&format!("minimizers: {}\n", report.minimizers.len()));
            let reference = match report.reference_is_minimizer {
                Some(true) => "yes",
                Some(false) => "no",
                None => "not in range",
            };
            s.push_str(&format!("reference family among minimizers: {reference}\n"));
            for g in &graphs {
                s.push_str(&format!("  {g}\n"));
            }
            s
        }
    };
    Ok(text.into())
}
