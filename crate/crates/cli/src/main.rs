//! `scff`: generate communities, build and verify group-testing designs,
//! decode outcomes and run seeded scenario sweeps.
//!
//! Exit status is 0 on success (or when a verified property holds), 1 when a
//! verified property fails and 2 on bad usage or malformed input. Errors are
//! reported on stderr as `{"error": KIND, "message": TEXT}`.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use scff_core::cff::{best_cff, explicit_2cff_9_12, identity_cff, poly_cff_restricted_cols, sperner_cff, CffMatrix};
use scff_core::decode::{decode_edges, decode_vertices};
use scff_core::harness::{simulate, SimulationSummary};
use scff_core::hypergraph::{gen_disjoint, gen_grid, gen_school};
use scff_core::io::{self, DesignManifest};
use scff_core::scff::{design_for, DesignRequest};
use scff_core::verify::{check, AUTO_TRIALS};
use scff_core::{BinaryMatrix, CheckMode, DesignKind, Field, OutcomeVector, Property, Provenance};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] scff_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(scff_core::Error::Parse { .. } | scff_core::Error::Json(_)) => "parse",
            CliError::Core(scff_core::Error::Io(_)) | CliError::Io { .. } => "io",
            CliError::Core(_) => "input",
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "scff", version, about = "Structure-aware cover-free families for group testing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a community hypergraph as JSON.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
        /// Output file; stdout when absent.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Build a classical d-cover-free matrix.
    Cff(CffArgs),
    /// Build a structured design for a hypergraph.
    Design(DesignArgs),
    /// Check a cover-free property; exits 1 when it fails.
    Verify(VerifyArgs),
    /// Decode an outcome vector.
    Decode(DecodeArgs),
    /// Plant seeded defective sets and report how decoding fares.
    Simulate(SimulateArgs),
    /// Summarize a design and optionally a simulation as a table.
    Report(ReportArgs),
}

#[derive(Subcommand)]
enum GenFamily {
    /// `m` disjoint edges of `k` consecutive vertices.
    Disjoint {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
    /// Students in one course per period, shuffled per period.
    School {
        #[arg(long)]
        periods: usize,
        #[arg(long)]
        courses: usize,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Every contiguous square window of a square grid.
    Grid {
        #[arg(long)]
        side: usize,
        #[arg(long, default_value_t = 3)]
        square: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CffConstruction {
    Best,
    Sperner,
    Identity,
    Polynomial,
    Explicit,
}

#[derive(Args)]
struct CffArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "best")]
    construction: CffConstruction,
    /// Matrix file; the provenance goes next to it with a `.json` extension.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DesignArgs {
    #[arg(long)]
    hypergraph: PathBuf,
    #[arg(long)]
    r: usize,
    /// Largest pool size.
    #[arg(long)]
    lmax: Option<usize>,
    #[arg(long, value_enum, default_value = "scff")]
    kind: KindArg,
    /// Edge colouring JSON replacing the greedy one.
    #[arg(long)]
    colouring: Option<PathBuf>,
    /// Output prefix: writes PREFIX.txt, PREFIX.hypergraph.json and PREFIX.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Scff,
    Ecff,
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyArg {
    Dcff,
    Scff,
    Ecff,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    hypergraph: Option<PathBuf>,
    #[arg(long, value_enum)]
    property: PropertyArg,
    /// `d` for dcff, `r` otherwise.
    #[arg(long)]
    param: usize,
    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = AUTO_TRIALS)]
    trials: u64,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    outcomes: PathBuf,
    #[arg(long)]
    hypergraph: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Design manifest JSON.
    #[arg(long)]
    design: PathBuf,
    #[arg(long)]
    scenarios: u64,
    /// Largest number of edges holding the planted defectives.
    #[arg(long)]
    r: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    design: PathBuf,
    /// Output of `scff simulate`.
    #[arg(long)]
    summary: Option<PathBuf>,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source })
}

/// Writes to stdout; a reader that stops early is not an error.
fn emit(text: &str) -> Result<()> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(CliError::Io { path: "<stdout>".into(), source: e })
        }
        _ => Ok(()),
    }
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Smallest restricted polynomial family with at least `n` columns.
fn smallest_polynomial(d: usize, n: usize) -> Result<CffMatrix> {
    let mut best: Option<(usize, u32, usize)> = None;
    for q in 2..=scff_core::cff::REGISTRY_MAX_Q {
        if Field::new(q).is_err() {
            continue;
        }
        for k in 1..=scff_core::cff::REGISTRY_MAX_K {
            let blocks = d * k + 1;
            let cols = (q as u128).checked_pow(k as u32 + 1).unwrap_or(u128::MAX);
            if blocks > q as usize || cols < n as u128 {
                continue;
            }
            let rows = blocks * q as usize;
            if best.is_none_or(|(r, _, _)| rows < r) {
                best = Some((rows, q, k));
            }
        }
    }
    let (_, q, k) = best.ok_or_else(|| CliError::Usage(format!("no polynomial family for d = {d}, n = {n}")))?;
    Ok(poly_cff_restricted_cols(&Field::new(q)?, k, d, n)?)
}

fn build_cff(args: &CffArgs) -> Result<CffMatrix> {
    let (d, n) = (args.d, args.n);
    let c = match args.construction {
        CffConstruction::Best => best_cff(d, n)?,
        CffConstruction::Sperner if d == 1 => sperner_cff(n)?,
        CffConstruction::Sperner => return Err(CliError::Usage("the Sperner family is 1-cover-free only".into())),
        CffConstruction::Identity => {
            let mut c = identity_cff(n)?;
            c.d = d.min(c.d);
            c
        }
        CffConstruction::Polynomial => smallest_polynomial(d, n)?,
        CffConstruction::Explicit if d <= 2 && n <= 12 => {
            let mut c = explicit_2cff_9_12().truncate(n)?;
            c.d = d;
            c
        }
        CffConstruction::Explicit => {
            return Err(CliError::Usage("the explicit matrix is 2-cover-free on 12 items".into()))
        }
    };
    Ok(c)
}

#[derive(Serialize)]
struct CffSidecar<'a> {
    rows: usize,
    cols: usize,
    d: usize,
    provenance: &'a Provenance,
}

fn cmd_cff(args: CffArgs) -> Result<()> {
    let c = build_cff(&args)?;
    write_text(&args.out, &c.matrix.to_text())?;
    let sidecar = CffSidecar { rows: c.rows(), cols: c.cols(), d: c.d, provenance: &c.provenance };
    let text = json_line(&sidecar);
    write_text(&args.out.with_extension("json"), &text)?;
    emit(&text)?;
    Ok(())
}

fn cmd_gen(family: GenFamily, out: Option<PathBuf>) -> Result<()> {
    let h = match family {
        GenFamily::Disjoint { m, k } => gen_disjoint(m, k)?,
        GenFamily::School { periods, courses, size, seed } => gen_school(periods, courses, size, seed)?,
        GenFamily::Grid { side, square } => gen_grid(side, square)?,
    };
    let text = io::hypergraph_to_json(&h);
    match out {
        Some(path) => write_text(&path, &text),
        None => {
            emit(&text)?;
            Ok(())
        }
    }
}

fn cmd_design(args: DesignArgs) -> Result<()> {
    let h = io::read_hypergraph(&args.hypergraph)?;
    let colouring = match &args.colouring {
        Some(path) => Some(io::colouring_from_json(&read_text(path)?, h.m())?),
        None => None,
    };
    let kind = match args.kind {
        KindArg::Scff => DesignKind::Scff,
        KindArg::Ecff => DesignKind::Ecff,
    };
    let design = design_for(&h, DesignRequest { r: args.r, kind, l_max: args.lmax, colouring: colouring.as_ref() })?;
    let manifest = io::write_design(&design, &args.out)?;
    emit(&read_text(&manifest)?)?;
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<bool> {
    let m = io::read_matrix(&args.matrix)?;
    let h = args.hypergraph.as_deref().map(io::read_hypergraph).transpose()?;
    if let Some(h) = &h {
        if h.n() != m.cols() {
            return Err(CliError::Usage(format!("hypergraph has {} vertices, matrix {} columns", h.n(), m.cols())));
        }
    }
    let property = match args.property {
        PropertyArg::Dcff => Property::Dcff(args.param),
        PropertyArg::Scff => Property::Scff(args.param),
        PropertyArg::Ecff => Property::Ecff(args.param),
    };
    let mode = match args.mode {
        ModeArg::Auto => CheckMode::Auto,
        ModeArg::Exhaustive => CheckMode::Exhaustive,
        ModeArg::Sampled => CheckMode::Sampled { seed: args.seed, trials: args.trials },
    };
    let report = check(&m, h.as_ref(), property, mode)?;
    emit(&json_line(&report))?;
    Ok(report.holds)
}

#[derive(Serialize)]
struct Decoded {
    x: scff_core::StatusVector,
    #[serde(skip_serializing_if = "Option::is_none")]
    z: Option<scff_core::StatusVector>,
}

fn cmd_decode(args: DecodeArgs) -> Result<()> {
    let m: BinaryMatrix = io::read_matrix(&args.matrix)?;
    let y = OutcomeVector::parse(&read_text(&args.outcomes)?)?;
    let x = decode_vertices(&m, &y)?;
    let z = match &args.hypergraph {
        Some(path) => Some(decode_edges(&io::read_hypergraph(path)?, &m, &y, &x)?),
        None => None,
    };
    emit(&json_line(&Decoded { x, z }))?;
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let design = io::read_design(&args.design)?;
    let summary = simulate(&design, args.scenarios, args.r, args.seed)?;
    emit(&json_line(&summary))?;
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<()> {
    let manifest: DesignManifest = serde_json::from_str(&read_text(&args.design)?).map_err(scff_core::Error::from)?;
    io::read_design(&args.design)?;
    let summary: Option<SimulationSummary> = match &args.summary {
        Some(path) => Some(serde_json::from_str(&read_text(path)?).map_err(scff_core::Error::from)?),
        None => None,
    };
    emit(&report::render(&manifest, summary.as_ref()))?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen { family, out } => cmd_gen(family, out)?,
        Command::Cff(args) => cmd_cff(args)?,
        Command::Design(args) => cmd_design(args)?,
        Command::Verify(args) => return Ok(if cmd_verify(args)? { ExitCode::SUCCESS } else { ExitCode::from(1) }),
        Command::Decode(args) => cmd_decode(args)?,
        Command::Simulate(args) => cmd_simulate(args)?,
        Command::Report(args) => cmd_report(args)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn fail(err: &CliError) -> ExitCode {
    eprint!("{}", json_line(&serde_json::json!({ "error": err.kind(), "message": err.to_string() })));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::Usage(e.render().to_string().trim().to_string())),
    };
    run(cli).unwrap_or_else(|e| fail(&e))
}
