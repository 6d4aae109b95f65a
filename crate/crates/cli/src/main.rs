//! Batch driver for the verification suites.
//!
//! Exit codes: 0 all suites pass, 1 suite failure, 2 usage or config
//! error, 3 I/O error.

mod bundle;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bracketlab::heisenberg::{build_anharmonic, transition_table, AnharmonicKind, AnharmonicSpec};
use bracketlab::reps::truncated_ladder;
use bracketlab::suites::{run_suite, SuiteParams};
use bracketlab::ResidualReport;

use bundle::ReportBundle;
use config::SuiteConfig;

#[derive(Parser)]
#[command(name = "bracketlab", version, about = "operator-bracket verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
    Markdown,
}

#[derive(Args, Clone, Debug)]
struct CommonOpts {
    /// flat key-value config file, applied before the flags
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// dimension range for randomized suites, e.g. 2..16
    #[arg(long)]
    dims: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    /// output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// zero the volatile fields (timestamps, runtimes) in the output
    #[arg(long)]
    canon: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites (all by default)
    Verify {
        #[command(flatten)]
        common: CommonOpts,
        /// suite name or identity id; repeatable
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// tolerance override for the selected identity (or all reports)
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Spectrum, transition table, sum rules of the 1925 reconstruction
    Reconstruct1925 {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value_t = 64)]
        dim: usize,
        /// anharmonic coupling strength
        #[arg(long, default_value_t = 0.0)]
        g: f64,
        #[arg(long, default_value = "quartic")]
        kind: String,
        /// levels kept in the transition table
        #[arg(long, default_value_t = 10)]
        levels: usize,
        /// write the transition table as CSV to this path
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Trace certificate, rule-mixing bound, exact quantization defects
    Obstruction {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Constrained dynamics suites
    Constraints {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Lattice field suites
    Fields {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Re-emit an existing JSON report in another format
    Report {
        /// JSON report produced by a previous run
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        canon: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Io(String),
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Internal(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config: {m}"),
            CliError::Io(m) => write!(f, "io: {m}"),
            CliError::Internal(m) => write!(f, "{m}"),
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Verify { common, suites, tol } => {
            let mut cfg = build_config(&common)?;
            for s in &suites {
                cfg.select(s).map_err(|e| CliError::Config(e.0))?;
            }
            if suites.len() > 1 {
                // several explicit suites: run them all, no filter
                cfg.suites = Vec::new();
                for s in &suites {
                    let mut probe = SuiteConfig::default();
                    probe.select(s).map_err(|e| CliError::Config(e.0))?;
                    cfg.suites.extend(probe.suites);
                }
                cfg.identity_filter = None;
            }
            if let Some(t) = tol {
                match &cfg.identity_filter {
                    Some(id) => {
                        cfg.tolerances.insert(id.clone(), t);
                    }
                    None => {
                        if !(t > 0.0) {
                            return Err(CliError::Config("tolerance must be positive".into()));
                        }
                        cfg.tolerances.insert("*".into(), t);
                    }
                }
            }
            run_and_emit(cfg, &common)
        }
        Command::Reconstruct1925 { common, dim, g, kind, levels, csv } => {
            let kind = match kind.as_str() {
                "cubic" => AnharmonicKind::Cubic,
                "quartic" => AnharmonicKind::Quartic,
                other => return Err(CliError::Config(format!("unknown kind '{other}'"))),
            };
            if let Some(path) = &csv {
                let base = truncated_ladder(dim, 1.0, 1.0, 1.0)
                    .map_err(|e| CliError::Config(e.to_string()))?;
                let spec = AnharmonicSpec { base, g, kind };
                let h = build_anharmonic(&spec).map_err(|e| CliError::Config(e.to_string()))?;
                let table = transition_table(&h, spec.base.q(), levels, 1.0)
                    .map_err(|e| CliError::Internal(e.to_string()))?;
                std::fs::write(path, table.to_csv())
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            }
            let mut cfg = build_config(&common)?;
            cfg.suites = vec!["heisenberg1925".into()];
            run_and_emit(cfg, &common)
        }
        Command::Obstruction { common } => {
            let mut cfg = build_config(&common)?;
            cfg.suites = vec!["obstruction".into()];
            run_and_emit(cfg, &common)
        }
        Command::Constraints { common } => {
            let mut cfg = build_config(&common)?;
            cfg.suites = vec!["constraints".into()];
            run_and_emit(cfg, &common)
        }
        Command::Fields { common } => {
            let mut cfg = build_config(&common)?;
            cfg.suites = vec!["fields".into()];
            run_and_emit(cfg, &common)
        }
        Command::Report { input, format, out, canon } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
            let mut bundle: ReportBundle = serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", input.display())))?;
            if canon {
                bundle.canonicalize();
            }
            emit(&bundle, format, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn build_config(common: &CommonOpts) -> Result<SuiteConfig, CliError> {
    let mut cfg = SuiteConfig::default();
    if let Some(path) = &common.config {
        cfg.apply_file(path).map_err(|e| CliError::Config(e.0))?;
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(dims) = &common.dims {
        let (lo, hi) = config::parse_dims(dims).map_err(|e| CliError::Config(e.0))?;
        cfg.dim_lo = lo;
        cfg.dim_hi = hi;
    }
    if let Some(trials) = common.trials {
        cfg.trials = trials;
    }
    cfg.validate().map_err(|e| CliError::Config(e.0))?;
    Ok(cfg)
}

fn run_and_emit(cfg: SuiteConfig, common: &CommonOpts) -> Result<ExitCode, CliError> {
    cfg.validate().map_err(|e| CliError::Config(e.0))?;
    let started = Instant::now();
    let params = SuiteParams {
        seed: cfg.seed,
        dim_lo: cfg.dim_lo,
        dim_hi: cfg.dim_hi,
        trials: cfg.trials,
    };
    let mut reports: Vec<ResidualReport> = Vec::new();
    for suite in &cfg.suites {
        let suite_start = Instant::now();
        let mut batch =
            run_suite(suite, &params).map_err(|e| CliError::Internal(e.to_string()))?;
        let ms = suite_start.elapsed().as_secs_f64() * 1e3;
        let per_report = ms / batch.len().max(1) as f64;
        for r in &mut batch {
            r.runtime_ms = per_report;
        }
        reports.append(&mut batch);
    }
    if let Some(filter) = &cfg.identity_filter {
        reports.retain(|r| &r.identity_id == filter);
    }
    // tolerance overrides: exact identity match, or the wildcard "*"
    let wildcard = cfg.tolerances.get("*").copied();
    reports = reports
        .into_iter()
        .map(|r| {
            let tol = cfg.tolerances.get(&r.identity_id).copied().or(wildcard);
            match tol {
                Some(t) => r.with_tolerance(t),
                None => r,
            }
        })
        .collect();
    let runtime_ms = started.elapsed().as_secs_f64() * 1e3;
    let mut bundle = ReportBundle::new(cfg, reports, runtime_ms);
    if common.canon {
        bundle.canonicalize();
    }
    emit(&bundle, common.format, common.out.as_deref())?;
    if bundle.all_pass() {
        Ok(ExitCode::SUCCESS)
    } else {
        for r in bundle.reports.iter().filter(|r| !r.pass) {
            eprintln!(
                "FAIL {}/{} residual {:.3e} tolerance {:.3e}",
                r.suite, r.identity_id, r.residual, r.tolerance
            );
        }
        Ok(ExitCode::from(1))
    }
}

fn emit(bundle: &ReportBundle, format: Format, out: Option<&std::path::Path>) -> Result<(), CliError> {
    let text = match format {
        Format::Json => bundle.to_json(),
        Format::Csv => bundle.to_csv(),
        Format::Markdown => bundle.to_markdown(),
    };
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
