//! Benchmark sweep: amplitude x iteration-count cells, many trials each,
//! aggregated into per-cell statistics and per-amplitude scaling fits.
//!
//! Every trial is keyed by (master seed, amplitude bits, ell, trial index),
//! so results are independent of execution order, thread count, and the
//! order amplitudes appear in the configuration.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use fae_core::{
    derive_key, run_fae, trace_diagnostics, EstimatorConfig, ProblemSpec, StreamRng,
};

#[derive(Debug)]
pub enum BenchError {
    InvalidConfig(String),
    EmptyCell { amplitude: f64, ell: u32 },
    EmptyInput(&'static str),
}

impl fmt::Display for BenchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchError::InvalidConfig(msg) => write!(f, "invalid benchmark config: {msg}"),
            BenchError::EmptyCell { amplitude, ell } => {
                write!(f, "cell (amplitude {amplitude}, ell {ell}) has no successful trials")
            }
            BenchError::EmptyInput(what) => write!(f, "{what} must not be empty"),
        }
    }
}

impl std::error::Error for BenchError {}

/// Sweep definition.
#[derive(Debug, Clone, Serialize)]
pub struct BenchConfig {
    pub amplitudes: Vec<f64>,
    pub ell_min: u32,
    pub ell_max: u32,
    pub trials: u32,
    pub delta_c: f64,
    pub seed: u64,
    /// Quantile reported as the cell error (0.95 for the standard sweep).
    pub percentile: f64,
    pub paper_initial_bound: bool,
}

impl BenchConfig {
    /// The standard scaling sweep: four amplitudes, ell from 3 to 14, a
    /// thousand trials per cell.
    pub fn standard(seed: u64) -> Self {
        BenchConfig {
            amplitudes: vec![0.1, 0.2, 0.3, 0.4],
            ell_min: 3,
            ell_max: 14,
            trials: 1000,
            delta_c: 0.01,
            seed,
            percentile: 0.95,
            paper_initial_bound: false,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |msg: String| Err(BenchError::InvalidConfig(msg));
        if self.amplitudes.is_empty() {
            return bad("amplitude list is empty".into());
        }
        for &a in &self.amplitudes {
            if !(0.0..=1.0).contains(&a) {
                return bad(format!("amplitude {a} is outside [0, 1]"));
            }
        }
        if self.ell_min < 1 || self.ell_min > self.ell_max || self.ell_max > 48 {
            return bad(format!(
                "ell range {}..={} must satisfy 1 <= ell_min <= ell_max <= 48",
                self.ell_min, self.ell_max
            ));
        }
        if self.trials == 0 {
            return bad("trials must be positive".into());
        }
        if !(self.delta_c > 0.0 && self.delta_c < 1.0) {
            return bad(format!("delta_c {} is outside (0, 1)", self.delta_c));
        }
        if !(self.percentile > 0.0 && self.percentile < 1.0) {
            return bad(format!("percentile {} is outside (0, 1)", self.percentile));
        }
        Ok(())
    }
}

/// One successful trial.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TrialOutcome {
    pub trial: u32,
    pub amplitude_hat: f64,
    pub amp_error: f64,
    pub n_exact: u64,
    pub n_paper: u64,
    pub j0: u32,
    /// Final interval contained theta.
    pub covered_final: bool,
    /// Every iteration's interval contained theta.
    pub covered_all: bool,
    /// Full ground-truth diagnostics passed.
    pub diag_pass: bool,
}

/// A trial whose estimator run aborted; kept for the record, excluded from
/// aggregates.
#[derive(Debug, Clone, Serialize)]
pub struct TrialFailure {
    pub trial: u32,
    pub message: String,
}

/// All trials of one (amplitude, ell) cell.
#[derive(Debug, Clone, Serialize)]
pub struct CellResult {
    pub amplitude: f64,
    pub ell: u32,
    pub outcomes: Vec<TrialOutcome>,
    pub failures: Vec<TrialFailure>,
}

/// Aggregated view of one cell; mirrors one CSV row (serialized field names
/// match the CSV columns).
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct CellStats {
    pub amplitude: f64,
    pub ell: u32,
    pub j0_mode: u32,
    pub trials: u32,
    pub delta_c: f64,
    #[serde(rename = "err_q95")]
    pub err_q: f64,
    #[serde(rename = "n_orac_exact_median")]
    pub n_exact_median: u64,
    #[serde(rename = "n_orac_exact_min")]
    pub n_exact_min: u64,
    #[serde(rename = "n_orac_exact_max")]
    pub n_exact_max: u64,
    #[serde(rename = "n_orac_paper_median")]
    pub n_paper_median: u64,
    pub coverage_rate: f64,
    pub seed: u64,
}

/// Least-squares summary of log10(queries) against log10(error).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScalingFit {
    /// Intercept of the slope-constrained model log10 N = -log10 err + b.
    pub intercept_b: f64,
    /// RMS residual of the constrained model.
    pub residual_rms: f64,
    /// Slope of log10 N in log10 err when it is left free.
    pub free_slope: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct AmplitudeFit {
    pub amplitude: f64,
    pub fit: ScalingFit,
}

/// Complete sweep output.
#[derive(Debug, Clone, Serialize)]
pub struct TrialSet {
    pub config: BenchConfig,
    pub cells: Vec<CellResult>,
}

/// Lower empirical quantile: the smallest sample value that at least a
/// fraction q of the sample does not exceed. No interpolation.
pub fn quantile_error(errors: &[f64], q: f64) -> Result<f64, BenchError> {
    if errors.is_empty() {
        return Err(BenchError::EmptyInput("error sample"));
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(BenchError::InvalidConfig(format!("quantile {q} is outside (0, 1]")));
    }
    let mut sorted = errors.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("errors must not contain NaN"));
    // The 1e-9 slack keeps q*n from tipping over the next integer when the
    // product rounds up (0.95 * 1000 lands at 950.0000000000001).
    let rank = ((q * sorted.len() as f64) - 1e-9).ceil().max(1.0) as usize;
    Ok(sorted[rank.min(sorted.len()) - 1])
}

fn quantile_u64(values: &[u64], q: f64) -> u64 {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let rank = ((q * sorted.len() as f64) - 1e-9).ceil().max(1.0) as usize;
    sorted[rank.min(sorted.len()) - 1]
}

/// Fits log10 n against log10 err over (err, n) points, both with the slope
/// pinned at -1 and with it left free. Needs at least two distinct errors.
pub fn fit_scaling(points: &[(f64, f64)]) -> Result<ScalingFit, BenchError> {
    if points.len() < 2 {
        return Err(BenchError::EmptyInput("scaling fit needs at least two points"));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(BenchError::InvalidConfig("scaling fit needs positive coordinates".into()));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.log10(), y.log10())).collect();
    let n = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let var_x = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum::<f64>();
    if var_x == 0.0 {
        return Err(BenchError::InvalidConfig("scaling fit needs distinct x values".into()));
    }
    let cov = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum::<f64>();

    let intercept_b = mean_y + mean_x;
    let residual_rms = (logs
        .iter()
        .map(|p| (p.1 - (intercept_b - p.0)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(ScalingFit { intercept_b, residual_rms, free_slope: cov / var_x })
}

impl CellResult {
    pub fn stats(&self, config: &BenchConfig) -> Result<CellStats, BenchError> {
        if self.outcomes.is_empty() {
            return Err(BenchError::EmptyCell { amplitude: self.amplitude, ell: self.ell });
        }
        // Mode of j0; ties break toward the smaller value for determinism.
        let mut counts = std::collections::BTreeMap::new();
        for o in &self.outcomes {
            *counts.entry(o.j0).or_insert(0u32) += 1;
        }
        let j0_mode = *counts.iter().max_by_key(|(j0, c)| (**c, std::cmp::Reverse(**j0))).unwrap().0;

        let errors: Vec<f64> = self.outcomes.iter().map(|o| o.amp_error).collect();
        let n_exact: Vec<u64> = self.outcomes.iter().map(|o| o.n_exact).collect();
        let n_paper: Vec<u64> = self.outcomes.iter().map(|o| o.n_paper).collect();
        let covered = self.outcomes.iter().filter(|o| o.covered_all).count();

        Ok(CellStats {
            amplitude: self.amplitude,
            ell: self.ell,
            j0_mode,
            trials: config.trials,
            delta_c: config.delta_c,
            err_q: quantile_error(&errors, config.percentile)?,
            n_exact_median: quantile_u64(&n_exact, 0.5),
            n_exact_min: *n_exact.iter().min().unwrap(),
            n_exact_max: *n_exact.iter().max().unwrap(),
            n_paper_median: quantile_u64(&n_paper, 0.5),
            coverage_rate: covered as f64 / self.outcomes.len() as f64,
            seed: config.seed,
        })
    }
}

impl TrialSet {
    pub fn stats(&self) -> Result<Vec<CellStats>, BenchError> {
        self.cells.iter().map(|c| c.stats(&self.config)).collect()
    }

    /// One scaling fit per amplitude: median exact query count against the
    /// error quantile, across the ell range. Amplitudes with a single cell
    /// have nothing to fit and are skipped.
    pub fn fits(&self) -> Result<Vec<AmplitudeFit>, BenchError> {
        let stats = self.stats()?;
        let mut fits = Vec::new();
        for &a in &self.config.amplitudes {
            let points: Vec<(f64, f64)> = stats
                .iter()
                .filter(|s| s.amplitude == a)
                .map(|s| (s.err_q, s.n_exact_median as f64))
                .collect();
            if points.len() < 2 {
                continue;
            }
            fits.push(AmplitudeFit { amplitude: a, fit: fit_scaling(&points)? });
        }
        Ok(fits)
    }
}

fn run_trial(
    config: &BenchConfig,
    cfg: &EstimatorConfig,
    spec: &ProblemSpec,
    ell: u32,
    trial: u32,
) -> Result<TrialOutcome, TrialFailure> {
    let key = derive_key(&[spec.amplitude().to_bits(), ell as u64, trial as u64]);
    let mut stream = StreamRng::new(config.seed, key);
    let res = run_fae(cfg, spec, &mut stream)
        .map_err(|e| TrialFailure { trial, message: e.to_string() })?;
    let report = trace_diagnostics(spec, &res);
    let last = res.trace.last().expect("ell >= 1 guarantees a trace");
    let theta = spec.theta();
    Ok(TrialOutcome {
        trial,
        amplitude_hat: res.amplitude_hat,
        amp_error: (res.amplitude_hat - spec.amplitude()).abs(),
        n_exact: res.ledger.exact_q_calls(),
        n_paper: res.ledger.paper_q_calls(),
        j0: res.j0,
        covered_final: last.theta_min <= theta && theta <= last.theta_max,
        covered_all: report.all_covered,
        diag_pass: report.all_pass,
    })
}

/// Runs the whole sweep, trials in parallel.
pub fn run_bench(config: &BenchConfig) -> Result<TrialSet, BenchError> {
    config.validate()?;
    let mut cells = Vec::new();
    for &amplitude in &config.amplitudes {
        let spec = ProblemSpec::new(amplitude, config.seed)
            .map_err(|e| BenchError::InvalidConfig(e.to_string()))?;
        for ell in config.ell_min..=config.ell_max {
            let mut cfg = EstimatorConfig::new(config.delta_c, ell)
                .map_err(|e| BenchError::InvalidConfig(e.to_string()))?;
            if config.paper_initial_bound {
                cfg = cfg.with_paper_initial_bound();
            }
            let results: Vec<Result<TrialOutcome, TrialFailure>> = (0..config.trials)
                .into_par_iter()
                .map(|trial| run_trial(config, &cfg, &spec, ell, trial))
                .collect();
            let mut outcomes = Vec::with_capacity(results.len());
            let mut failures = Vec::new();
            for r in results {
                match r {
                    Ok(o) => outcomes.push(o),
                    Err(f) => failures.push(f),
                }
            }
            cells.push(CellResult { amplitude, ell, outcomes, failures });
        }
    }
    Ok(TrialSet { config: config.clone(), cells })
}
