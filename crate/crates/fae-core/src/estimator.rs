//! Two-stage iterative estimator for the attenuated rotation angle.
//!
//! Iteration j works at Grover power m = 2^(j-1), so one batch estimates
//! cos((2^(j+1) + 2) theta). While the accumulated angle is small the cosine
//! alone pins theta down (first stage): invert the Chernoff interval through
//! arccos. Once 2^(j+1) theta_max crosses 3pi/8 the estimator memorises the
//! transition iteration j0 and the phase offset nu = 2^j0 (theta_max +
//! theta_min), and from then on (second stage) pairs each batch with a second
//! one shifted by 2^(j0-1) Grover applications. The pair recovers the sine
//! through the angle-addition formula, the extended arctangent turns
//! (sin, cos) into a phase rho_j, and an explicitly resolved winding count
//! n_j lifts rho_j back to the full angle with a fixed pi/3 margin:
//!
//!   theta in [2 pi n_j + rho_j - pi/3, 2 pi n_j + rho_j + pi/3] / (2^(j+1)+2)
//!
//! Doubling the power per iteration halves the interval per oracle call,
//! which is what produces the near-linear error/query trade-off.

use alloc::vec::Vec;

use crate::confidence::{atan_ext, ConfidenceInterval};
use crate::error::{Error, Result};
use crate::oracle::{CosOracle, ProblemSpec, QueryLedger, SamplingOracle, StreamRng};
use core::f64::consts::PI;

/// Half-width of the final phase margin used by the second stage.
pub const RHO_MARGIN: f64 = PI / 3.0;

/// Transition threshold for 2^(j+1) theta_max.
pub const TRANSITION_THRESHOLD: f64 = 3.0 * PI / 8.0;

/// Below this |sin(nu)| the sine recovery divides by noise; the run aborts
/// with [`Error::DegenerateNu`] instead of returning garbage.
pub const SIN_NU_GUARD: f64 = 0.1;

/// Which half of the algorithm produced an iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Stage {
    First,
    Second,
}

/// Fixed parameters of one estimation run.
///
/// Shot counts are the ceilings of 1944 ln(2/delta_c) (first stage) and
/// 972 ln(2/delta_c) (second stage), which hold the Chernoff half-widths at
/// 1/(9 sqrt 2) and 1/9.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EstimatorConfig {
    pub delta_c: f64,
    pub ell: u32,
    pub n_shot_first: u64,
    pub n_shot_second: u64,
    pub initial_theta_max: f64,
}

impl EstimatorConfig {
    /// Initial theta_max that covers every valid amplitude: the next
    /// 4-decimal value above asin(1/4) = 0.252680...
    pub const SAFE_INITIAL_THETA_MAX: f64 = 0.2527;

    /// Initial bound the on-paper worst-case accounting is quoted against;
    /// excludes amplitudes above 4 sin(0.252) = 0.99729.
    pub const PAPER_INITIAL_THETA_MAX: f64 = 0.252;

    pub fn new(delta_c: f64, ell: u32) -> Result<Self> {
        if !(delta_c > 0.0 && delta_c < 1.0) {
            return Err(Error::DeltaCOutOfRange(delta_c));
        }
        // 48 keeps every ledger total clear of u64 overflow; the interval
        // width at ell = 48 is already below f64 resolution of theta anyway.
        if !(1..=48).contains(&ell) {
            return Err(Error::EllOutOfRange(ell));
        }
        let ln = libm::log(2.0 / delta_c);
        Ok(EstimatorConfig {
            delta_c,
            ell,
            n_shot_first: libm::ceil(1944.0 * ln) as u64,
            n_shot_second: libm::ceil(972.0 * ln) as u64,
            initial_theta_max: Self::SAFE_INITIAL_THETA_MAX,
        })
    }

    /// Switches to the tighter nominal initial bound 0.252.
    pub fn with_paper_initial_bound(mut self) -> Self {
        self.initial_theta_max = Self::PAPER_INITIAL_THETA_MAX;
        self
    }
}

/// Everything one iteration produced. Second-stage-only fields are `None`
/// during the first stage and vice versa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub j: u32,
    pub stage: Stage,
    pub theta_min: f64,
    pub theta_max: f64,
    pub c_hat: f64,
    pub c_interval: Option<ConfidenceInterval>,
    pub c_hat_shifted: Option<f64>,
    pub s_hat: Option<f64>,
    pub rho: Option<f64>,
    pub n_winding: Option<i64>,
}

#[cfg(feature = "serde")]
impl serde::Serialize for IterationRecord {
    /// Flat export shape: the confidence interval becomes c_lo / c_hi.
    fn serialize<S: serde::Serializer>(&self, ser: S) -> core::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("IterationRecord", 11)?;
        st.serialize_field("j", &self.j)?;
        st.serialize_field("stage", &self.stage)?;
        st.serialize_field("theta_min", &self.theta_min)?;
        st.serialize_field("theta_max", &self.theta_max)?;
        st.serialize_field("c_hat", &self.c_hat)?;
        st.serialize_field("c_lo", &self.c_interval.map(|iv| iv.lo))?;
        st.serialize_field("c_hi", &self.c_interval.map(|iv| iv.hi))?;
        st.serialize_field("c_hat_shifted", &self.c_hat_shifted)?;
        st.serialize_field("s_hat", &self.s_hat)?;
        st.serialize_field("rho", &self.rho)?;
        st.serialize_field("n_winding", &self.n_winding)?;
        st.end()
    }
}

/// Output of a completed run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EstimationResult {
    pub theta_hat: f64,
    pub amplitude_hat: f64,
    /// Transition iteration; equals ell when the run never left the first
    /// stage.
    pub j0: u32,
    /// Phase offset memorised at the transition; `None` without one.
    pub nu: Option<f64>,
    /// Lower bound 1 - (2 ell - j0) delta_c on the probability that every
    /// interval in the run contained theta. May be vacuous (<= 0) for large
    /// ell * delta_c.
    pub success_prob_bound: f64,
    pub trace: Vec<IterationRecord>,
    pub ledger: QueryLedger,
}

/// First-stage interval update: pulls the cosine interval back through
/// arccos and divides by the accumulated angle multiplier 2^(j+1) + 2.
pub fn first_stage_update(interval: &ConfidenceInterval, j: u32) -> (f64, f64) {
    let denom = ((1u64 << (j + 1)) + 2) as f64;
    (libm::acos(interval.hi) / denom, libm::acos(interval.lo) / denom)
}

/// Sine recovery at the stage transition:
/// (c_hat cos(nu) - c_hat_shifted) / sin(nu), clamped to [-1, 1].
pub fn estimate_sin(c_hat: f64, c_hat_shifted: f64, nu: f64) -> Result<f64> {
    let sin_nu = libm::sin(nu);
    if libm::fabs(sin_nu) < SIN_NU_GUARD {
        return Err(Error::DegenerateNu { sin_nu });
    }
    let raw = (c_hat * libm::cos(nu) - c_hat_shifted) / sin_nu;
    Ok(raw.clamp(-1.0, 1.0))
}

/// Winding count that places 2 pi n + rho_j closest to the accumulated angle
/// predicted by the previous interval:
/// floor(((2^(j+1) + 2) theta_max_prev - rho_j + pi/3) / (2 pi)).
pub fn resolve_winding(theta_max_prev: f64, rho_j: f64, j: u32) -> i64 {
    let denom = ((1u64 << (j + 1)) + 2) as f64;
    libm::floor((denom * theta_max_prev - rho_j + RHO_MARGIN) / (2.0 * PI)) as i64
}

/// Second-stage interval update: the pi/3 phase margin around 2 pi n_j +
/// rho_j, divided back by 2^(j+1) + 2 and clamped to [0, theta_cap].
pub fn second_stage_update(rho_j: f64, n_j: i64, j: u32, theta_cap: f64) -> (f64, f64) {
    let denom = ((1u64 << (j + 1)) + 2) as f64;
    let center = 2.0 * PI * n_j as f64 + rho_j;
    let lo = ((center - RHO_MARGIN) / denom).clamp(0.0, theta_cap);
    let hi = ((center + RHO_MARGIN) / denom).clamp(0.0, theta_cap);
    (lo, hi)
}

/// Runs the estimator against the binomial sampling oracle.
pub fn run_fae(
    config: &EstimatorConfig,
    spec: &ProblemSpec,
    stream: &mut StreamRng,
) -> Result<EstimationResult> {
    run_fae_with_oracle(config, spec, &SamplingOracle, stream)
}

/// Runs the estimator against any cosine oracle.
pub fn run_fae_with_oracle<O: CosOracle>(
    config: &EstimatorConfig,
    spec: &ProblemSpec,
    oracle: &O,
    stream: &mut StreamRng,
) -> Result<EstimationResult> {
    let mut ledger = QueryLedger::new();
    let mut trace = Vec::with_capacity(config.ell as usize);
    let mut theta_min = 0.0f64;
    let mut theta_max = config.initial_theta_max;
    let mut j0 = config.ell;
    let mut nu = None;
    let mut first_stage = true;

    for j in 1..=config.ell {
        let m = 1u64 << (j - 1);
        if first_stage {
            let est = oracle
                .measure(spec, m, m, config.n_shot_first, stream, &mut ledger)
                .with_chernoff(config.delta_c)?;
            let interval = est.interval.expect("with_chernoff attached it");
            let (lo, hi) = first_stage_update(&interval, j);
            theta_min = lo;
            theta_max = hi;
            trace.push(IterationRecord {
                j,
                stage: Stage::First,
                theta_min,
                theta_max,
                c_hat: est.c_hat,
                c_interval: Some(interval),
                c_hat_shifted: None,
                s_hat: None,
                rho: None,
                n_winding: None,
            });
            // Transition only helps if second-stage iterations remain.
            if j < config.ell && ((1u64 << (j + 1)) as f64) * theta_max >= TRANSITION_THRESHOLD {
                j0 = j;
                nu = Some((1u64 << j) as f64 * (theta_max + theta_min));
                first_stage = false;
            }
        } else {
            let j0_shift = 1u64 << (j0 - 1);
            // Both batches are priced at 2^(j-1) in the idealised ledger
            // column; the shift overhead shows up only in exact_q_calls.
            let est = oracle.measure(spec, m, m, config.n_shot_second, stream, &mut ledger);
            let est_shifted =
                oracle.measure(spec, m + j0_shift, m, config.n_shot_second, stream, &mut ledger);
            let nu_val = nu.expect("second stage implies a transition happened");
            let s_hat = estimate_sin(est.c_hat, est_shifted.c_hat, nu_val)?;
            let rho = atan_ext(s_hat, est.c_hat)?;
            let n_j = resolve_winding(theta_max, rho, j);
            let (lo, hi) = second_stage_update(rho, n_j, j, config.initial_theta_max);
            theta_min = lo;
            theta_max = hi;
            trace.push(IterationRecord {
                j,
                stage: Stage::Second,
                theta_min,
                theta_max,
                c_hat: est.c_hat,
                c_interval: None,
                c_hat_shifted: Some(est_shifted.c_hat),
                s_hat: Some(s_hat),
                rho: Some(rho),
                n_winding: Some(n_j),
            });
        }
    }

    let theta_hat = 0.5 * (theta_min + theta_max);
    // 4 sin(theta_hat) can overshoot 1.0 by ~2e-5 when theta_hat hugs the
    // safe initial bound; the estimate is still an amplitude.
    let amplitude_hat = (4.0 * libm::sin(theta_hat)).clamp(0.0, 1.0);
    Ok(EstimationResult {
        theta_hat,
        amplitude_hat,
        j0,
        nu,
        success_prob_bound: 1.0 - (2 * config.ell - j0) as f64 * config.delta_c,
        trace,
        ledger,
    })
}

/// Wraps an accumulated angle into (-pi, pi].
fn wrap_angle(phi: f64) -> f64 {
    let mut r = libm::fmod(phi, 2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    } else if r <= -PI {
        r += 2.0 * PI;
    }
    r
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = libm::fabs(a - b);
    d.min(2.0 * PI - d)
}

/// Ground-truth checks for one iteration; `None` fields do not apply to the
/// iteration's stage.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct IterationDiagnostics {
    pub j: u32,
    pub stage: Stage,
    /// theta_min <= theta <= theta_max after the update.
    pub theta_covered: bool,
    /// Every cosine estimate of the iteration within 1/9 of its true value.
    pub cos_error_ok: bool,
    /// First stage only: the accumulated angle stayed below pi, so arccos
    /// inversion was sound.
    pub first_stage_sound: Option<bool>,
    /// Second stage only: circular distance from rho_j to the true phase.
    pub rho_distance: Option<f64>,
    /// Second stage only: rho_distance <= pi/3.
    pub rho_within_margin: Option<bool>,
    /// Second stage only: the candidate angle range was narrow enough for a
    /// unique winding count.
    pub uniqueness_ok: Option<bool>,
    /// Second stage only: the lifted angle 2 pi n_j + rho_j lands within
    /// pi/3 of the true accumulated angle.
    pub winding_ok: Option<bool>,
}

/// Run-level ground-truth report; only meaningful where the true amplitude
/// is known.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DiagnosticsReport {
    pub iterations: Vec<IterationDiagnostics>,
    /// |nu - 2^(j0+1) theta|; `None` without a transition.
    pub nu_error: Option<f64>,
    /// nu_error < pi/60, vacuously true without a transition.
    pub nu_ok: bool,
    pub all_covered: bool,
    /// First iteration whose interval missed theta, if any.
    pub first_failing_j: Option<u32>,
    pub all_pass: bool,
}

/// Checks every iteration of a finished run against the true angle.
pub fn trace_diagnostics(spec: &ProblemSpec, result: &EstimationResult) -> DiagnosticsReport {
    let theta = spec.theta();
    let cos_tol = 1.0 / 9.0;
    let mut iterations = Vec::with_capacity(result.trace.len());
    let mut prev: Option<&IterationRecord> = None;
    let mut all_pass = true;
    let mut all_covered = true;
    let mut first_failing_j = None;

    for rec in &result.trace {
        let m = 1u64 << (rec.j - 1);
        let theta_covered = rec.theta_min <= theta && theta <= rec.theta_max;
        let mut diag = IterationDiagnostics {
            j: rec.j,
            stage: rec.stage,
            theta_covered,
            cos_error_ok: libm::fabs(rec.c_hat - spec.cos_true(m)) <= cos_tol,
            first_stage_sound: None,
            rho_distance: None,
            rho_within_margin: None,
            uniqueness_ok: None,
            winding_ok: None,
        };
        let denom = ((1u64 << (rec.j + 1)) + 2) as f64;
        match rec.stage {
            Stage::First => {
                // The arccos pullback is sound when the angle the oracle can
                // have accumulated, bounded by the previous theta_max, stays
                // on the principal branch. At j = 1 that bound is the initial
                // one, at most 0.2527 under either configuration.
                let prev_max = prev
                    .map(|p| p.theta_max)
                    .unwrap_or(EstimatorConfig::SAFE_INITIAL_THETA_MAX);
                diag.first_stage_sound = Some(denom * prev_max < PI);
            }
            Stage::Second => {
                let j0_shift = 1u64 << (result.j0 - 1);
                let shifted_ok = libm::fabs(
                    rec.c_hat_shifted.expect("second stage records the shifted batch")
                        - spec.cos_true(m + j0_shift),
                ) <= cos_tol;
                diag.cos_error_ok = diag.cos_error_ok && shifted_ok;

                let phi = denom * theta;
                let rho = rec.rho.expect("second stage records rho");
                let dist = circular_distance(rho, wrap_angle(phi));
                diag.rho_distance = Some(dist);
                diag.rho_within_margin = Some(dist <= RHO_MARGIN);

                // A unique winding needs the prior angle range plus the
                // 2 pi/3 phase window to fit inside one turn.
                let (prev_min, prev_max) = prev
                    .map(|p| (p.theta_min, p.theta_max))
                    .expect("second stage always has a predecessor");
                diag.uniqueness_ok =
                    Some(denom * (prev_max - prev_min) + 2.0 * RHO_MARGIN <= 2.0 * PI);

                let lifted = 2.0 * PI * rec.n_winding.expect("second stage records n_j") as f64
                    + rho;
                diag.winding_ok = Some(libm::fabs(lifted - phi) <= RHO_MARGIN);
            }
        }

        if !theta_covered {
            all_covered = false;
            if first_failing_j.is_none() {
                first_failing_j = Some(rec.j);
            }
        }
        let pass = theta_covered
            && diag.cos_error_ok
            && diag.first_stage_sound.unwrap_or(true)
            && diag.rho_within_margin.unwrap_or(true)
            && diag.uniqueness_ok.unwrap_or(true)
            && diag.winding_ok.unwrap_or(true);
        all_pass = all_pass && pass;
        iterations.push(diag);
        prev = Some(rec);
    }

    let nu_error = result.nu.map(|nu| {
        let true_nu = (1u64 << (result.j0 + 1)) as f64 * theta;
        libm::fabs(nu - true_nu)
    });
    let nu_ok = nu_error.is_none_or(|e| e < PI / 60.0);
    all_pass = all_pass && nu_ok;

    DiagnosticsReport { iterations, nu_error, nu_ok, all_covered, first_failing_j, all_pass }
}

#[cfg(test)]
mod tests {
    extern crate std;

    use super::*;
    use crate::oracle::ExactOracle;

    #[test]
    fn config_shot_counts_match_frozen_ceilings() {
        let cfg = EstimatorConfig::new(0.01, 8).unwrap();
        assert_eq!(cfg.n_shot_first, 10_300);
        assert_eq!(cfg.n_shot_second, 5_150);
        assert_eq!(cfg.initial_theta_max, 0.2527);
        let cfg = EstimatorConfig::new(0.05, 8).unwrap();
        assert_eq!(cfg.n_shot_first, 7_172);
        assert_eq!(cfg.n_shot_second, 3_586);
        let cfg = EstimatorConfig::new(0.01, 8).unwrap().with_paper_initial_bound();
        assert_eq!(cfg.initial_theta_max, 0.252);
    }

    #[test]
    fn config_rejects_bad_inputs() {
        assert!(EstimatorConfig::new(0.0, 8).is_err());
        assert!(EstimatorConfig::new(1.0, 8).is_err());
        assert!(EstimatorConfig::new(0.01, 0).is_err());
        assert!(EstimatorConfig::new(0.01, 49).is_err());
    }

    #[test]
    fn safe_initial_bound_covers_every_amplitude() {
        const { assert!(EstimatorConfig::SAFE_INITIAL_THETA_MAX > crate::oracle::THETA_LIMIT) };
        // The nominal value does not: it caps amplitudes at 4 sin(0.252).
        const { assert!(EstimatorConfig::PAPER_INITIAL_THETA_MAX < crate::oracle::THETA_LIMIT) };
    }

    #[test]
    fn first_stage_update_degenerate_intervals() {
        let iv = |lo, hi| ConfidenceInterval { lo, hi, delta_c: 0.01 };
        let (lo, hi) = first_stage_update(&iv(1.0, 1.0), 1);
        assert_eq!((lo, hi), (0.0, 0.0));
        let (lo, hi) = first_stage_update(&iv(-1.0, -1.0), 1);
        assert!((lo - PI / 6.0).abs() < 1e-15);
        assert!((hi - PI / 6.0).abs() < 1e-15);
        // arccos is antitone, so order always survives the pullback.
        let (lo, hi) = first_stage_update(&iv(-0.3, 0.8), 4);
        assert!(lo < hi);
    }

    #[test]
    fn transition_phase_spread_gives_the_known_nu_slack() {
        // Worst-case half spread of the pulled-back phase at the transition,
        // with the cosine interval parked at the steep end of arccos:
        // 0.5 * (acos(cos(3pi/4)) - acos(cos(3pi/4) + 1/(9 sqrt 2))).
        // Frozen value 0.052862..., about 1% above pi/60; the pi/60 figure
        // quoted for this configuration elsewhere is slightly optimistic,
        // and the downstream sine-error budget absorbs the difference
        // (0.3205 < 1/3).
        let c_lo = libm::cos(3.0 * PI / 4.0);
        let c_hi = c_lo + 1.0 / (9.0 * libm::sqrt(2.0));
        let half_spread = 0.5 * (libm::acos(c_lo) - libm::acos(c_hi));
        assert!((half_spread - 0.0528621722446021).abs() < 1e-15);
        assert!(half_spread > PI / 60.0);
        assert!(half_spread < 1.01046 * PI / 60.0);
    }

    #[test]
    fn estimate_sin_inverts_the_addition_formula() {
        for k in 0..40 {
            let phi = -3.0 + 6.0 * (k as f64) / 39.0;
            for nu in [0.2, 1.0, PI / 2.0, 2.5] {
                let s = estimate_sin(libm::cos(phi), libm::cos(phi + nu), nu).unwrap();
                assert!((s - libm::sin(phi)).abs() < 1e-12, "phi {phi} nu {nu}");
            }
        }
    }

    #[test]
    fn estimate_sin_clamps_and_guards() {
        // Raw value 1.2 clamps to 1.
        let shifted = 0.6 * libm::cos(PI / 3.0) - 1.2 * libm::sin(PI / 3.0);
        assert_eq!(estimate_sin(0.6, shifted, PI / 3.0).unwrap(), 1.0);
        assert_eq!(estimate_sin(0.0, -1.0, PI / 2.0).unwrap(), 1.0);
        assert!(matches!(estimate_sin(0.5, 0.5, PI), Err(Error::DegenerateNu { .. })));
        assert!(matches!(estimate_sin(0.5, 0.5, 0.05), Err(Error::DegenerateNu { .. })));
    }

    #[test]
    fn resolve_winding_examples() {
        // Accumulated angle still inside the first turn.
        assert_eq!(resolve_winding(0.05, 0.5, 3), 0);
        // Two full turns: denom = 10 at j = 2, theta_max_prev = 4pi/10.
        assert_eq!(resolve_winding(4.0 * PI / 10.0, RHO_MARGIN, 2), 2);
    }

    #[test]
    fn second_stage_update_matches_direct_evaluation() {
        let (lo, hi) = second_stage_update(RHO_MARGIN, 0, 1, f64::MAX);
        assert_eq!(lo, 0.0);
        assert!((hi - 2.0 * PI / 18.0).abs() < 1e-15);
        // Same inputs under the production cap.
        let (lo, hi) = second_stage_update(RHO_MARGIN, 0, 1, 0.2527);
        assert_eq!((lo, hi), (0.0, 0.2527));
    }

    #[test]
    fn second_stage_widths_shrink_geometrically() {
        let mut prev = f64::MAX;
        for j in 2..=20 {
            let (lo, hi) = second_stage_update(0.1, 1, j, f64::MAX);
            let width = hi - lo;
            let denom = ((1u64 << (j + 1)) + 2) as f64;
            assert!((width - 2.0 * RHO_MARGIN / denom).abs() < 1e-15);
            assert!(width < prev);
            prev = width;
        }
    }

    #[test]
    fn exact_run_converges_with_full_diagnostics() {
        let cfg = EstimatorConfig::new(0.01, 8).unwrap();
        let spec = ProblemSpec::new(0.3, 7).unwrap();
        let mut stream = StreamRng::new(7, 0);
        let res = run_fae_with_oracle(&cfg, &spec, &ExactOracle, &mut stream).unwrap();
        assert_eq!(res.j0, 3);
        assert!(res.nu.is_some());
        assert!((res.amplitude_hat - 0.3).abs() < PI / (3.0 * 128.0));
        assert!((res.success_prob_bound - 0.87).abs() < 1e-12);
        assert_eq!(res.trace.len(), 8);

        let report = trace_diagnostics(&spec, &res);
        assert!(report.all_pass, "{report:?}");
        assert!(report.all_covered);
        assert_eq!(report.first_failing_j, None);
        assert!(report.nu_error.unwrap() < PI / 60.0);

        // Ledger arithmetic, written out: first stage pays 10300 shots at
        // powers 1, 2, 4; each second-stage iteration pays 5150 shots at
        // 2^(j-1) and another 5150 at 2^(j-1) + 4.
        let exact: u64 = 10_300 * 7 + 5_150 * ((16 + 32 + 64 + 128 + 256) + 4 * 5);
        let paper: u64 = 10_300 * 7 + 2 * 5_150 * (256 - 8);
        assert_eq!(res.ledger.exact_q_calls(), exact);
        assert_eq!(res.ledger.paper_q_calls(), paper);
        assert_eq!(
            res.ledger.state_preparations(),
            10_300 * 3 + 2 * 5_150 * 5
        );
    }

    #[test]
    fn zero_amplitude_stays_in_the_first_stage() {
        let cfg = EstimatorConfig::new(0.01, 8).unwrap();
        let spec = ProblemSpec::new(0.0, 3).unwrap();
        let mut stream = StreamRng::new(3, 0);
        let res = run_fae(&cfg, &spec, &mut stream).unwrap();
        assert_eq!(res.j0, 8);
        assert_eq!(res.nu, None);
        assert!(res.trace.iter().all(|r| r.stage == Stage::First));
        assert!(res.theta_hat < 0.25 / 514.0); // half of acos(1 - w) / denom
        assert!((res.success_prob_bound - 0.92).abs() < 1e-12);
        let report = trace_diagnostics(&spec, &res);
        assert!(report.all_pass);
    }

    #[test]
    fn sampled_runs_are_deterministic_in_the_seed() {
        let cfg = EstimatorConfig::new(0.01, 10).unwrap();
        let spec = ProblemSpec::new(0.25, 99).unwrap();
        let a = run_fae(&cfg, &spec, &mut StreamRng::new(99, 4)).unwrap();
        let b = run_fae(&cfg, &spec, &mut StreamRng::new(99, 4)).unwrap();
        assert_eq!(a, b);
        let c = run_fae(&cfg, &spec, &mut StreamRng::new(99, 5)).unwrap();
        assert_ne!(a.theta_hat, c.theta_hat);
    }

    #[test]
    fn wrap_angle_is_the_canonical_representative() {
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(-3.0 * PI) - PI).abs() < 1e-12);
        assert_eq!(wrap_angle(0.25), 0.25);
        assert!((wrap_angle(7.0) - (7.0 - 2.0 * PI)).abs() < 1e-15);
        for k in -8..=8 {
            let phi = 0.4 + 2.0 * PI * k as f64;
            assert!((wrap_angle(phi) - 0.4).abs() < 1e-9);
        }
    }
}
