use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use opineq::campaign::{run_campaign, CampaignConfig, ParamGrid, DEFAULT_VECTORS};
use opineq::demo::worked_examples;
use opineq::inequalities::{refinement_constants, Operand};
use opineq::report::{
    emit_report, format_g17, to_json, Meta, ReportDocument, ReportFormat, SearchDocument,
};
use opineq::search::{
    maximize_ratio, BoundKind, ParamBox, SearchConfig, DEFAULT_BUDGET, DEFAULT_RESTARTS,
};
use opineq::{BoundParams, Error, TheoremId};

const EXIT_VIOLATION: u8 = 1;
const EXIT_SEARCH_EXCEEDED: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_INFEASIBLE: u8 = 65;
const EXIT_SOFTWARE: u8 = 70;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(
    name = "opineq",
    version,
    about = "Verify refined operator inequalities numerically"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded verification campaigns; exit 1 on any violation.
    Verify(VerifyArgs),
    /// Maximize lhs/rhs of one inequality; exit 2 if it exceeds 1 + tol.
    Search(SearchArgs),
    /// Print classical and refined constants for (m, m', M', M).
    Constants(ConstantsArgs),
    /// Evaluate the hand-checkable example instances.
    Demo(DemoArgs),
}

#[derive(Args)]
struct Common {
    /// Master seed.
    #[arg(long, env = "OPINEQ_SEED", default_value_t = 42)]
    seed: u64,
    /// Relative tolerance of every comparison.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated theorem ids, or `all`.
    #[arg(long, default_value = "all")]
    theorems: String,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Random unit vectors per instance for the vector inequalities.
    #[arg(long, default_value_t = DEFAULT_VECTORS)]
    vectors: usize,
    /// Grid values of m (replaces the per-regime default grids).
    #[arg(long = "m", value_delimiter = ',')]
    m: Vec<f64>,
    /// Grid values of m' (defaults to the m values).
    #[arg(long = "mp", value_delimiter = ',')]
    mp: Vec<f64>,
    /// Grid values of M' (defaults to the M values).
    #[arg(long = "Mp", value_delimiter = ',')]
    big_mp: Vec<f64>,
    /// Grid values of M.
    #[arg(long = "M", value_delimiter = ',')]
    big_m: Vec<f64>,
    /// Report file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    theorem: TheoremId,
    /// Measure against the refined constant or the classical one.
    #[arg(long, value_enum, default_value = "refined")]
    bound: BoundArg,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Total ratio evaluations.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    /// m as a value or a range `lo:hi`.
    #[arg(long = "m")]
    m: String,
    /// m' as a value or range (defaults to m).
    #[arg(long = "mp")]
    mp: Option<String>,
    /// M' as a value or range (defaults to M).
    #[arg(long = "Mp")]
    big_mp: Option<String>,
    /// M as a value or a range `lo:hi`.
    #[arg(long = "M")]
    big_m: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundArg {
    Refined,
    Classical,
}

#[derive(Args)]
struct ConstantsArgs {
    #[arg(long = "m")]
    m: f64,
    /// Defaults to m.
    #[arg(long = "mp")]
    mp: Option<f64>,
    /// Defaults to M.
    #[arg(long = "Mp")]
    big_mp: Option<f64>,
    #[arg(long = "M")]
    big_m: f64,
    /// Print JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

/// An error together with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            e if e.is_infeasible() => EXIT_INFEASIBLE,
            Error::InvalidArgument(_) | Error::InvalidInterval { .. } => EXIT_USAGE,
            Error::Io(_) | Error::Csv(_) => EXIT_IO,
            _ => EXIT_SOFTWARE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn parse_theorems(list: &str) -> Result<Vec<TheoremId>, Failure> {
    if list.trim() == "all" {
        return Ok(TheoremId::ALL.to_vec());
    }
    list.split(',')
        .map(|s| {
            s.trim()
                .parse::<TheoremId>()
                .map_err(|e| usage(e.to_string()))
        })
        .collect()
}

fn parse_range(text: &str) -> Result<(f64, f64), Failure> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| usage(format!("invalid number `{s}`")))
    };
    match text.split_once(':') {
        Some((lo, hi)) => Ok((num(lo)?, num(hi)?)),
        None => {
            let v = num(text)?;
            Ok((v, v))
        }
    }
}

fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn meta(seed: u64, tol: f64) -> Meta {
    Meta::new(env!("CARGO_PKG_VERSION"), seed, tol, &timestamp())
}

fn report_format(path: &Path, explicit: Option<FormatArg>) -> ReportFormat {
    match explicit {
        Some(FormatArg::Json) => ReportFormat::Json,
        Some(FormatArg::Csv) => ReportFormat::Csv,
        None if path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("csv")) =>
        {
            ReportFormat::Csv
        }
        None => ReportFormat::Json,
    }
}

fn verify(args: VerifyArgs) -> Result<u8, Failure> {
    let theorems = parse_theorems(&args.theorems)?;
    let grid = if args.m.is_empty()
        && args.mp.is_empty()
        && args.big_mp.is_empty()
        && args.big_m.is_empty()
    {
        None
    } else {
        if args.m.is_empty() || args.big_m.is_empty() {
            return Err(usage("a custom grid needs both --m and --M"));
        }
        let or = |v: &Vec<f64>, d: &Vec<f64>| if v.is_empty() { d.clone() } else { v.clone() };
        Some(ParamGrid {
            m_prime: or(&args.mp, &args.m),
            big_m_prime: or(&args.big_mp, &args.big_m),
            m: args.m,
            big_m: args.big_m,
        })
    };
    let cfg = CampaignConfig {
        theorems,
        dims: args.dims,
        samples: args.samples as usize,
        seed: args.common.seed,
        tol: args.common.tol,
        grid,
        vectors: args.vectors,
    };
    let report = run_campaign(&cfg)?;
    for s in &report.skipped {
        eprintln!("skipped {}: {}", s.theorem, s.reason);
    }
    let doc = ReportDocument::new(meta(cfg.seed, cfg.tol), report);

    println!(
        "{:<22} {:>5} {:>8} {:>10} {:>22} {:>22}",
        "theorem", "cells", "samples", "violations", "max_ratio", "min_slack"
    );
    for &theorem in &cfg.theorems {
        let cells: Vec<_> = doc
            .results
            .iter()
            .filter(|c| c.theorem == theorem)
            .collect();
        let samples: usize = cells.iter().map(|c| c.samples).sum();
        let violations: usize = cells.iter().map(|c| c.violations).sum();
        let max_ratio = cells
            .iter()
            .map(|c| c.max_ratio)
            .fold(f64::NEG_INFINITY, f64::max);
        let min_slack = cells
            .iter()
            .map(|c| c.min_slack)
            .fold(f64::INFINITY, f64::min);
        println!(
            "{:<22} {:>5} {:>8} {:>10} {:>22} {:>22}",
            theorem.to_string(),
            cells.len(),
            samples,
            violations,
            format_g17(max_ratio),
            format_g17(min_slack)
        );
    }
    let violations = doc.violations();
    println!("total violations: {violations}");

    if let Some(path) = &args.out {
        emit_report(&doc, report_format(path, args.format), path)?;
    }
    Ok(if violations == 0 { 0 } else { EXIT_VIOLATION })
}

fn search(args: SearchArgs) -> Result<u8, Failure> {
    let m = parse_range(&args.m)?;
    let big_m = parse_range(&args.big_m)?;
    let mp = args
        .mp
        .as_deref()
        .map(parse_range)
        .transpose()?
        .unwrap_or(m);
    let big_mp = args
        .big_mp
        .as_deref()
        .map(parse_range)
        .transpose()?
        .unwrap_or(big_m);
    let lo = BoundParams::new(m.0, mp.0, big_mp.0, big_m.0)?;
    let hi = BoundParams::new(m.1, mp.1, big_mp.1, big_m.1)?;
    let cfg = SearchConfig {
        theorem: args.theorem,
        bound: match args.bound {
            BoundArg::Refined => BoundKind::Refined,
            BoundArg::Classical => BoundKind::Classical,
        },
        dim: args.dim,
        param_box: ParamBox::new(lo, hi)?,
        budget: args.budget,
        restarts: args.restarts,
        seed: args.common.seed,
        tol: args.common.tol,
    };
    let result = maximize_ratio(&cfg)?;
    println!("theorem:      {}", result.theorem);
    println!("dim:          {}", result.dim);
    println!("evaluations:  {}", result.evaluations);
    println!("best ratio:   {}", format_g17(result.best_ratio));
    println!("best restart: {}", result.best_restart);
    println!("params:       {}", result.params);
    println!("bound:        {}", result.label);
    if let Some(map) = &result.map {
        println!("map:          {map}");
    }
    let exceeded = result.best_ratio > 1.0 + cfg.tol;
    if let Some(path) = &args.out {
        let doc = SearchDocument {
            meta: meta(cfg.seed, cfg.tol),
            search: result,
        };
        std::fs::write(path, to_json(&doc)?).map_err(Error::from)?;
    }
    Ok(if exceeded { EXIT_SEARCH_EXCEEDED } else { 0 })
}

fn constants(args: ConstantsArgs) -> Result<u8, Failure> {
    let p = BoundParams::new(
        args.m,
        args.mp.unwrap_or(args.m),
        args.big_mp.unwrap_or(args.big_m),
        args.big_m,
    )?;
    let table = refinement_constants(&p)?;
    if args.json {
        print!("{}", to_json(&table)?);
        return Ok(0);
    }
    println!("params: {}", table.params);
    println!("h = M/m = {}", format_g17(table.h));
    println!("K(h) = {}", format_g17(table.k_h));
    println!("log base: {}", table.log_base);
    println!(
        "{:<20} {:<18} {:>8} {:>22} {:>22} {:>10} {:>5} {:>14}",
        "constant", "regime", "feasible", "classical", "refined", "c", "power", "improvement_%"
    );
    for r in &table.rows {
        println!(
            "{:<20} {:<18} {:>8} {:>22} {:>22} {:>10} {:>5} {:>14.6}",
            r.name,
            r.regime.name(),
            r.feasible,
            format_g17(r.classical),
            format_g17(r.refined),
            format!("{:.6}", r.refinement_argument),
            r.power,
            100.0 * (1.0 - r.improvement_ratio)
        );
    }
    Ok(0)
}

fn demo(args: DemoArgs) -> Result<u8, Failure> {
    let mut all_hold = true;
    for case in worked_examples(args.tol)? {
        println!("{}", case.name);
        for r in &case.records {
            let shown = |o: &Operand| match o {
                Operand::Scalar(x) => format_g17(*x),
                Operand::Matrix(m) => format!("{}x{} matrix", m.nrows(), m.ncols()),
            };
            all_hold &= r.holds();
            println!(
                "  {:<16} lhs {:<24} rhs {:<24} ratio {:<22} slack {:<24} {}",
                r.label,
                shown(&r.lhs),
                shown(&r.rhs),
                format_g17(r.ratio),
                format_g17(r.verdict.rel_slack),
                if r.holds() { "holds" } else { "FAILS" }
            );
        }
    }
    Ok(if all_hold { 0 } else { EXIT_VIOLATION })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Search(a) => search(a),
        Command::Constants(a) => constants(a),
        Command::Demo(a) => demo(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
