use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use modbound::report::{Case, VerificationReport};
use modbound::suites::{self, Format, RunConfig, SwapTarget};
use modbound::Error;

#[derive(Parser, Debug)]
#[command(name = "modbound", version, about = "Relative entropy bound verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Hilbert space factor dimensions, comma separated
    #[arg(long, global = true, value_delimiter = ',', default_values_t = [2usize, 3])]
    dims: Vec<usize>,

    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,

    /// α grid (Rényi orders for verify-findim, test function decay otherwise)
    #[arg(long = "alpha", global = true, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Option<Vec<f64>>,

    /// Smearing parameters n
    #[arg(long = "n", global = true, value_delimiter = ',', allow_hyphen_values = true)]
    n: Option<Vec<f64>>,

    /// Momentum grid for swap-check
    #[arg(long = "p", global = true, value_delimiter = ',', allow_hyphen_values = true)]
    p: Option<Vec<f64>>,

    /// Tolerance override, e.g. --tol chain=1e-9 (repeatable)
    #[arg(long = "tol", global = true, value_name = "KEY=VAL")]
    tol: Vec<String>,

    /// Report destination; stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Finite-dimensional ensembles (bound chain, divergences, swapping partners)
    VerifyFindim,
    /// Two-qubit unitary swapping partner example
    QubitDemo,
    /// Chiral current bound table and its 2 ln 3 limit
    ChiralBound,
    /// Swapping-partner Fourier identities
    SwapCheck {
        #[arg(value_enum)]
        target: TargetArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TargetArg {
    Ray,
    Wedge,
}

fn parse_tolerances(items: &[String]) -> Result<BTreeMap<String, f64>, Error> {
    let mut out = BTreeMap::new();
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::ConfigError(format!("--tol expects KEY=VAL, got {item:?}")))?;
        let v: f64 = v.trim().parse().map_err(|_| Error::ConfigError(format!("bad tolerance value {v:?}")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn config(cli: &Cli) -> Result<RunConfig, Error> {
    let cfg = RunConfig {
        seed: cli.seed,
        dims: cli.dims.clone(),
        trials: cli.trials,
        alpha_grid: cli.alpha.clone(),
        n_grid: cli.n.clone(),
        p_grid: cli.p.clone(),
        tolerances: parse_tolerances(&cli.tol)?,
        out: cli.out.clone(),
        format: match cli.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        },
    };
    cfg.validate()?;
    Ok(cfg)
}

fn suite_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::VerifyFindim => "verify-findim",
        Command::QubitDemo => "qubit-demo",
        Command::ChiralBound => "chiral-bound",
        Command::SwapCheck { target: TargetArg::Ray } => "swap-check-ray",
        Command::SwapCheck { target: TargetArg::Wedge } => "swap-check-wedge",
    }
}

fn run(cmd: &Command, cfg: &RunConfig) -> modbound::Result<VerificationReport> {
    match cmd {
        Command::VerifyFindim => suites::verify_findim(cfg),
        Command::QubitDemo => suites::qubit_demo_suite(cfg),
        Command::ChiralBound => suites::chiral_bound(cfg),
        Command::SwapCheck { target } => suites::swap_check(
            cfg,
            match target {
                TargetArg::Ray => SwapTarget::Ray,
                TargetArg::Wedge => SwapTarget::Wedge,
            },
        ),
    }
}

fn summarize(rep: &VerificationReport) {
    let failed = rep.failures().count();
    if rep.cases.len() <= 40 {
        for c in &rep.cases {
            let flag = if c.pass { "ok  " } else { "FAIL" };
            let note = c.note.as_deref().map(|n| format!("  ({n})")).unwrap_or_default();
            eprintln!("{flag} {:<36} lhs={:<24e} rhs={:<24e}{note}", c.name, c.lhs, c.rhs);
        }
    } else {
        for c in rep.failures().take(20) {
            eprintln!("FAIL {} lhs={:e} rhs={:e} params={}", c.name, c.lhs, c.rhs, serde_json::json!(c.params));
        }
    }
    eprintln!("{}: {} cases, {} failed", rep.suite, rep.cases.len(), failed);
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let rep = match run(&cli.command, &cfg) {
        Ok(r) => r,
        Err(e @ Error::ConfigError(_)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            let mut r = VerificationReport::new(suite_name(&cli.command), cfg.seed);
            r.push(Case::error("suite", e.to_string()));
            r
        }
    };
    summarize(&rep);
    let text = suites::render(&rep, cfg.format);
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if rep.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
