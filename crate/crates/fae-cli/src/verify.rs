//! Self-contained verification suites, each checking one analytical claim
//! against brute force: the simulator's rotation identity, the extended
//! arctangent perturbation bound, Chernoff interval coverage, and the
//! conditional error guarantee of diagnostics-clean estimator runs.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution};

use fae_core::{
    atan_error_bound, atan_ext, build_chi, build_grover, chernoff, crosses_discontinuity,
    derive_key, p11_sweep, run_fae, trace_diagnostics, EstimatorConfig, ProblemSpec, StreamRng,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Simulator,
    Atan,
    Chernoff,
    Diagnostics,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Suite::Simulator => "simulator",
            Suite::Atan => "atan",
            Suite::Chernoff => "chernoff",
            Suite::Diagnostics => "diagnostics",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone)]
pub struct CheckLine {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckLine>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn print(&self) {
        println!("suite {}", self.suite);
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            println!("  [{tag}] {}: {}", c.label, c.detail);
        }
        println!("suite {}: {}", self.suite, if self.passed() { "PASS" } else { "FAIL" });
    }
}

fn check(label: &str, passed: bool, detail: String) -> CheckLine {
    CheckLine { label: label.into(), passed, detail }
}

pub fn run_suite(suite: Suite) -> SuiteReport {
    let checks = match suite {
        Suite::Simulator => simulator_suite(),
        Suite::Atan => atan_suite(),
        Suite::Chernoff => chernoff_suite(),
        Suite::Diagnostics => diagnostics_suite(),
    };
    SuiteReport { suite, checks }
}

/// Rotation identity p11(m) = sin^2((2m+1) theta) on a dense grid, plus
/// unitarity of the operators that generate it.
fn simulator_suite() -> Vec<CheckLine> {
    const TOL: f64 = 1e-10;
    const M_MAX: u64 = 1000;
    let grid: Vec<f64> = (1..=50).map(|k| k as f64 / 50.0 * (PI / 2.0)).collect();

    let mut max_dev: f64 = 0.0;
    let mut max_defect: f64 = 0.0;
    for &theta_a in &grid {
        let chi = build_chi(1, theta_a);
        let grover = build_grover(&chi);
        max_defect = max_defect.max(chi.unitarity_defect()).max(grover.unitarity_defect());
        let theta = ((theta_a).sin() / 4.0).asin();
        for (m, p11) in p11_sweep(&chi, &grover, M_MAX).iter().enumerate() {
            let want = ((2 * m as u64 + 1) as f64 * theta).sin().powi(2);
            max_dev = max_dev.max((p11 - want).abs());
        }
    }

    // The identity is register-size independent: spot check two qubits.
    let mut max_dev_n2: f64 = 0.0;
    for &theta_a in &[0.2, 0.9, 1.4] {
        let chi = build_chi(2, theta_a);
        let grover = build_grover(&chi);
        let theta = ((theta_a).sin() / 4.0).asin();
        for (m, p11) in p11_sweep(&chi, &grover, 100).iter().enumerate() {
            let want = ((2 * m as u64 + 1) as f64 * theta).sin().powi(2);
            max_dev_n2 = max_dev_n2.max((p11 - want).abs());
        }
    }

    vec![
        check(
            "rotation identity, 50 angles x m in 0..=1000",
            max_dev < TOL,
            format!("max |p11 - sin^2((2m+1)theta)| = {max_dev:.3e} (tol {TOL:.0e})"),
        ),
        check(
            "amplification operators unitary",
            max_defect < TOL,
            format!("max unitarity defect = {max_defect:.3e} (tol {TOL:.0e})"),
        ),
        check(
            "identity unchanged with a two-qubit register",
            max_dev_n2 < TOL,
            format!("max deviation = {max_dev_n2:.3e} (tol {TOL:.0e})"),
        ),
    ]
}

/// One million random admissible perturbations of the extended arctangent;
/// the analytical bound max(2 dc + 2 ds, 3 dc) must never be violated.
fn atan_suite() -> Vec<CheckLine> {
    const SAMPLES: u64 = 1_000_000;
    let mut rng = ChaCha12Rng::seed_from_u64(0xA7A2);
    let mut accepted = 0u64;
    let mut violations = 0u64;
    let mut max_ratio: f64 = 0.0;
    while accepted < SAMPLES {
        let phi: f64 = rng.random_range(-PI..PI);
        let (s_true, c_true) = (phi.sin(), phi.cos());
        let dc_cap: f64 = rng.random_range(0.0..0.25);
        let ds_cap: f64 = rng.random_range(0.0..0.5);
        // The bound only speaks about perturbation boxes that stay clear of
        // the arctangent's branch cut; discard the rest.
        if crosses_discontinuity(s_true, c_true, ds_cap, dc_cap) {
            continue;
        }
        accepted += 1;
        let s = (s_true + rng.random_range(-ds_cap..=ds_cap)).clamp(-1.0, 1.0);
        let c = (c_true + rng.random_range(-dc_cap..=dc_cap)).clamp(-1.0, 1.0);
        let diff = (atan_ext(s, c).expect("clamped into domain")
            - atan_ext(s_true, c_true).expect("unit circle point"))
        .abs();
        let bound = atan_error_bound(dc_cap, ds_cap).expect("caps drawn inside domain");
        if diff >= bound {
            violations += 1;
        } else if bound > 0.0 {
            max_ratio = max_ratio.max(diff / bound);
        }
    }

    // Degenerate zero perturbation: difference and bound both collapse to 0.
    let zero_ok = [(0.3, 0.8), (1.0, 0.0), (-0.2, 0.5)].iter().all(|&(s, c)| {
        let diff = (atan_ext(s, c).unwrap() - atan_ext(s, c).unwrap()).abs();
        diff <= atan_error_bound(0.0, 0.0).unwrap()
    });

    vec![
        check(
            "perturbation bound over 1e6 admissible samples",
            violations == 0,
            format!("{violations} violations, max diff/bound = {max_ratio:.4}"),
        ),
        check("zero perturbation edge case", zero_ok, "diff 0 <= bound 0".into()),
    ]
}

/// Empirical coverage of the Chernoff interval across success probabilities,
/// shot counts, and confidence levels.
fn chernoff_suite() -> Vec<CheckLine> {
    const RESAMPLES: u64 = 2000;
    let p_grid: Vec<f64> =
        std::iter::once(0.01).chain((1..=9).map(|k| k as f64 / 10.0)).chain([0.99]).collect();
    let mut rng = ChaCha12Rng::seed_from_u64(0xC4E2);
    let mut checks = Vec::new();
    for &delta_c in &[0.1, 0.01] {
        let target = 1.0 - delta_c - 3.0 * (delta_c * (1.0 - delta_c) / RESAMPLES as f64).sqrt();
        let mut worst = f64::INFINITY;
        let mut worst_at = (0.0, 0u64);
        for &p in &p_grid {
            for &n_shot in &[100u64, 1000, 10000] {
                let c_true = 1.0 - 2.0 * p;
                let binom = Binomial::new(n_shot, p).expect("p in (0,1)");
                let mut hits = 0u64;
                for _ in 0..RESAMPLES {
                    let n_11 = binom.sample(&mut rng);
                    let c_hat = 1.0 - 2.0 * (n_11 as f64 / n_shot as f64);
                    if chernoff(c_hat, n_shot, delta_c).expect("valid delta_c").contains(c_true) {
                        hits += 1;
                    }
                }
                let coverage = hits as f64 / RESAMPLES as f64;
                if coverage < worst {
                    worst = coverage;
                    worst_at = (p, n_shot);
                }
            }
        }
        checks.push(check(
            &format!("coverage at delta_c = {delta_c}"),
            worst >= target,
            format!(
                "worst {worst:.4} at p = {}, n = {} (floor {target:.4})",
                worst_at.0, worst_at.1
            ),
        ));
    }
    checks
}

/// Estimator runs whose per-iteration diagnostics all pass must meet the
/// final error bound pi / (3 * 2^(ell-1)); no exceptions.
fn diagnostics_suite() -> Vec<CheckLine> {
    const TRIALS: u32 = 50;
    let mut clean = 0u64;
    let mut total = 0u64;
    let mut violations = 0u64;
    let mut worst_margin: f64 = 0.0;
    for &amplitude in &[0.1, 0.25, 0.4] {
        let spec = ProblemSpec::new(amplitude, 505).expect("amplitude in range");
        for ell in [4u32, 6, 8] {
            let config = EstimatorConfig::new(0.01, ell).expect("valid config");
            let error_cap = PI / (3.0 * (ell as f64 - 1.0).exp2());
            for trial in 0..TRIALS {
                total += 1;
                let key = derive_key(&[amplitude.to_bits(), ell as u64, trial as u64]);
                let mut stream = StreamRng::new(505, key);
                let result = run_fae(&config, &spec, &mut stream).expect("run completes");
                if trace_diagnostics(&spec, &result).all_pass {
                    clean += 1;
                    let err = (result.amplitude_hat - amplitude).abs();
                    if err >= error_cap {
                        violations += 1;
                    }
                    worst_margin = worst_margin.max(err / error_cap);
                }
            }
        }
    }
    vec![
        check(
            "diagnostics-clean runs meet the error bound",
            violations == 0,
            format!(
                "{clean}/{total} runs clean, {violations} violations, \
                 worst error/bound = {worst_margin:.4}"
            ),
        ),
        check(
            "diagnostics pass on a healthy majority of runs",
            clean * 2 > total,
            format!("{clean}/{total} clean"),
        ),
    ]
}
