//! Command-line interface: argument types, dispatch, and exit-code mapping.
//!
//! Exit codes: 0 success, 1 domain or configuration error, 2 I/O error,
//! 3 verification-suite failure.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use fae_core::{
    choose_ell, competitor_bound, fae_query_bound, run_fae, worst_case_count, EstimatorConfig,
    ProblemSpec, StreamRng,
};

use crate::bench::{run_bench, BenchConfig};
use crate::export::{bench_json, stats_to_csv};
use crate::svg::render_svg;
use crate::verify::{run_suite, Suite};

#[derive(Debug)]
pub enum CliError {
    Domain(String),
    Io(String),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(msg) | CliError::Io(msg) | CliError::Verification(msg) => {
                f.write_str(msg)
            }
        }
    }
}

impl std::error::Error for CliError {}

fn domain(err: impl fmt::Display) -> CliError {
    CliError::Domain(err.to_string())
}

fn io_error(path: &Path, err: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {err}", path.display()))
}

#[derive(Parser, Debug)]
#[command(
    name = "fae",
    version,
    about = "Two-stage iterative amplitude estimation: single runs, benchmark \
             sweeps, verification suites, and query-count bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a single estimate against the sampling oracle
    Estimate(EstimateArgs),
    /// Sweep amplitudes and iteration counts; export per-cell statistics
    Bench(BenchArgs),
    /// Run one verification suite and report pass/fail per check
    Verify(VerifyArgs),
    /// Evaluate the closed-form query-count bounds for a target error
    Bounds(BoundsArgs),
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    /// Amplitude to estimate, in [0, 1]
    #[arg(long)]
    pub amplitude: f64,
    /// Per-measurement confidence parameter, in (0, 1)
    #[arg(long, default_value_t = 0.01)]
    pub delta_c: f64,
    /// Iteration count; the final error stays below pi / (3 * 2^(ell-1))
    #[arg(long)]
    pub ell: u32,
    /// Master seed for the measurement randomness
    #[arg(long)]
    pub seed: u64,
    /// Print the full run as JSON, including the per-iteration trace
    #[arg(long)]
    pub trace: bool,
    /// Use the tighter nominal initial angle bound 0.252 instead of the
    /// inclusive 0.2527 (gives up amplitudes within 2e-5 of 1)
    #[arg(long)]
    pub paper_initial_bound: bool,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Comma-separated amplitudes
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4")]
    pub amplitudes: Vec<f64>,
    #[arg(long, default_value_t = 3)]
    pub ell_min: u32,
    #[arg(long, default_value_t = 14)]
    pub ell_max: u32,
    /// Trials per (amplitude, ell) cell
    #[arg(long, default_value_t = 1000)]
    pub trials: u32,
    #[arg(long, default_value_t = 0.01)]
    pub delta_c: f64,
    #[arg(long)]
    pub seed: u64,
    /// Error quantile reported per cell
    #[arg(long, default_value_t = 0.95)]
    pub percentile: f64,
    /// CSV output path
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the full JSON document here
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Also render the log-log scaling figure here
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Include per-trial records in the JSON document
    #[arg(long)]
    pub trace: bool,
    #[arg(long)]
    pub paper_initial_bound: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Simulator,
    Atan,
    Chernoff,
    Diagnostics,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Simulator => Suite::Simulator,
            SuiteArg::Atan => Suite::Atan,
            SuiteArg::Chernoff => Suite::Chernoff,
            SuiteArg::Diagnostics => Suite::Diagnostics,
        }
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: SuiteArg,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Target amplitude error, in (0, 2 pi / 3]
    #[arg(long)]
    pub epsilon: f64,
    /// Overall failure probability, in (0, 1)
    #[arg(long)]
    pub delta: f64,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Estimate(args) => run_estimate(&args),
        Command::Bench(args) => run_bench_cmd(&args),
        Command::Verify(args) => run_verify(&args),
        Command::Bounds(args) => run_bounds(&args),
    }
}

fn run_estimate(args: &EstimateArgs) -> Result<(), CliError> {
    let spec = ProblemSpec::new(args.amplitude, args.seed).map_err(domain)?;
    let mut config = EstimatorConfig::new(args.delta_c, args.ell).map_err(domain)?;
    if args.paper_initial_bound {
        config = config.with_paper_initial_bound();
    }
    let mut stream = StreamRng::new(args.seed, 0);
    let result = run_fae(&config, &spec, &mut stream).map_err(domain)?;

    if args.trace {
        let doc = json!({
            "input": {
                "amplitude": args.amplitude,
                "delta_c": args.delta_c,
                "ell": args.ell,
                "seed": args.seed,
                "initial_theta_max": config.initial_theta_max,
            },
            "result": result,
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("run serializes"));
        return Ok(());
    }

    let last = result.trace.last().expect("ell >= 1 guarantees an iteration");
    let amp = |theta: f64| (4.0 * theta.sin()).clamp(0.0, 1.0);
    println!("amplitude_hat      = {:.12}", result.amplitude_hat);
    println!("theta_hat          = {:.12}", result.theta_hat);
    println!(
        "theta interval     = [{:.12}, {:.12}]  (width {:.3e})",
        last.theta_min,
        last.theta_max,
        last.theta_max - last.theta_min
    );
    println!(
        "amplitude interval = [{:.12}, {:.12}]",
        amp(last.theta_min),
        amp(last.theta_max)
    );
    match result.nu {
        Some(nu) => println!("transition         = j0 {}  (nu = {:.12})", result.j0, nu),
        None => println!("transition         = none (first stage only, j0 = {})", result.j0),
    }
    println!("success bound      >= {:.4}", result.success_prob_bound);
    let (exact, paper, preps) = result.ledger.snapshot();
    println!("oracle calls       = {exact}  (idealised accounting {paper})");
    println!("state preparations = {preps}");
    Ok(())
}

fn run_bench_cmd(args: &BenchArgs) -> Result<(), CliError> {
    let config = BenchConfig {
        amplitudes: args.amplitudes.clone(),
        ell_min: args.ell_min,
        ell_max: args.ell_max,
        trials: args.trials,
        delta_c: args.delta_c,
        seed: args.seed,
        percentile: args.percentile,
        paper_initial_bound: args.paper_initial_bound,
    };
    let set = run_bench(&config).map_err(domain)?;
    let stats = set.stats().map_err(domain)?;
    let fits = set.fits().map_err(domain)?;

    fs::write(&args.out, stats_to_csv(&stats)).map_err(|e| io_error(&args.out, e))?;
    if let Some(path) = &args.json {
        let doc = bench_json(&set, &stats, &fits, args.trace);
        let text = serde_json::to_string_pretty(&doc).expect("document serializes");
        fs::write(path, text).map_err(|e| io_error(path, e))?;
    }
    if let Some(path) = &args.svg {
        fs::write(path, render_svg(&stats, &fits)).map_err(|e| io_error(path, e))?;
    }

    println!("wrote {} cells to {}", stats.len(), args.out.display());
    for f in &fits {
        println!(
            "amplitude {}: b = {:.4}, free slope = {:.4}, residual rms = {:.4}",
            f.amplitude, f.fit.intercept_b, f.fit.free_slope, f.fit.residual_rms
        );
    }
    let failures: usize = set.cells.iter().map(|c| c.failures.len()).sum();
    if failures > 0 {
        eprintln!("warning: {failures} trial(s) aborted and were excluded from aggregates");
    }
    Ok(())
}

fn run_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let report = run_suite(args.suite.into());
    report.print();
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Verification(format!("suite {} failed", report.suite)))
    }
}

fn run_bounds(args: &BoundsArgs) -> Result<(), CliError> {
    let ell = choose_ell(args.epsilon).map_err(domain)?;
    let delta_c = args.delta / (2.0 * ell as f64);
    let fae = fae_query_bound(args.epsilon, args.delta).map_err(domain)?;
    let worst = worst_case_count(ell, delta_c).map_err(domain)?;

    println!("epsilon            = {:e}", args.epsilon);
    println!("delta              = {:e}", args.delta);
    println!("ell                = {ell}");
    println!("delta_c            = {delta_c:.6e}");
    println!("closed-form bound  = {fae:.6e} oracle calls");
    println!("worst-case run     = {worst:.6e} oracle calls");
    match competitor_bound(args.epsilon, args.delta) {
        Ok(competitor) => {
            println!("competitor bound   = {competitor:.6e} oracle calls");
            println!("bound ratio        = {:.6}", fae / competitor);
        }
        Err(_) => println!("competitor bound   = n/a (defined for epsilon < 3 pi / 20)"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::error::ErrorKind;

    fn parse(argv: &[&str]) -> Result<Cli, clap::Error> {
        Cli::try_parse_from(argv)
    }

    #[test]
    fn estimate_arguments_parse() {
        let cli = parse(&[
            "fae", "estimate", "--amplitude", "0.3", "--ell", "8", "--seed", "42", "--trace",
        ])
        .unwrap();
        match cli.command {
            Command::Estimate(a) => {
                assert_eq!(a.amplitude, 0.3);
                assert_eq!(a.ell, 8);
                assert_eq!(a.seed, 42);
                assert_eq!(a.delta_c, 0.01);
                assert!(a.trace);
                assert!(!a.paper_initial_bound);
            }
            other => panic!("parsed {other:?}"),
        }
    }

    #[test]
    fn bench_amplitude_list_splits_on_commas() {
        let cli = parse(&[
            "fae", "bench", "--amplitudes", "0.1,0.25,0.4", "--seed", "7", "--out", "x.csv",
        ])
        .unwrap();
        match cli.command {
            Command::Bench(a) => {
                assert_eq!(a.amplitudes, vec![0.1, 0.25, 0.4]);
                assert_eq!((a.ell_min, a.ell_max, a.trials), (3, 14, 1000));
                assert_eq!(a.out, PathBuf::from("x.csv"));
                assert!(a.json.is_none());
            }
            other => panic!("parsed {other:?}"),
        }
    }

    #[test]
    fn missing_required_arguments_are_parse_errors() {
        let err = parse(&["fae", "estimate", "--amplitude", "0.3"]).unwrap_err();
        assert_eq!(err.kind(), ErrorKind::MissingRequiredArgument);
        let err = parse(&["fae", "bench", "--seed", "1"]).unwrap_err();
        assert_eq!(err.kind(), ErrorKind::MissingRequiredArgument);
        let err = parse(&["fae", "verify", "--suite", "nonsense"]).unwrap_err();
        assert_eq!(err.kind(), ErrorKind::InvalidValue);
    }

    #[test]
    fn domain_errors_carry_exit_code_one() {
        let cli = parse(&[
            "fae", "estimate", "--amplitude", "1.5", "--ell", "4", "--seed", "1",
        ])
        .unwrap();
        let err = run(cli).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(matches!(err, CliError::Domain(_)));
    }

    #[test]
    fn unwritable_output_is_an_io_error() {
        let cli = parse(&[
            "fae",
            "bench",
            "--amplitudes",
            "0.3",
            "--ell-min",
            "3",
            "--ell-max",
            "3",
            "--trials",
            "2",
            "--seed",
            "5",
            "--out",
            "/nonexistent-dir/x.csv",
        ])
        .unwrap();
        let err = run(cli).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(matches!(err, CliError::Io(_)));
    }

    #[test]
    fn bounds_reports_all_numbers() {
        let cli = parse(&["fae", "bounds", "--epsilon", "1e-3", "--delta", "0.05"]).unwrap();
        run(cli).unwrap();
        // Outside the competitor's domain the command still succeeds.
        let cli = parse(&["fae", "bounds", "--epsilon", "0.5", "--delta", "0.05"]).unwrap();
        run(cli).unwrap();
    }
}
