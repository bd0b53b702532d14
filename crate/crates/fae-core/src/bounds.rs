//! Closed-form query-count bounds and the iteration-count selector.
//!
//! All counts are oracle calls (Grover applications) under the idealised
//! accounting, not state preparations.

use crate::error::{Error, Result};
use core::f64::consts::PI;

/// Largest target error the interval machinery can express: 2 pi / 3, the
/// full width of the final phase window.
pub const EPSILON_LIMIT: f64 = 2.0 * PI / 3.0;

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    Ok(())
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon <= EPSILON_LIMIT) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    Ok(())
}

/// Smallest iteration count whose final interval guarantees amplitude error
/// below epsilon: max(1, ceil(log2(2 pi / (3 epsilon)))).
pub fn choose_ell(epsilon: f64) -> Result<u32> {
    check_epsilon(epsilon)?;
    let raw = libm::log2(2.0 * PI / (3.0 * epsilon));
    // Guard the exact powers of two: epsilon = pi/(3 2^(l-1)) must give l,
    // not l + 1, when the quotient rounds a hair above an integer.
    let nearest = libm::round(raw);
    let ell = if libm::fabs(raw - nearest) < 1e-9 { nearest } else { libm::ceil(raw) };
    Ok((ell as i64).max(1) as u32)
}

/// Worst-case total oracle calls of the two-stage estimator for target error
/// epsilon and overall failure probability delta:
/// (4.1e3 / epsilon) ln(4 log2(2 pi / (3 epsilon)) / delta).
pub fn fae_query_bound(epsilon: f64, delta: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    check_delta(delta)?;
    Ok(4.1e3 / epsilon * libm::log(4.0 * libm::log2(2.0 * PI / (3.0 * epsilon)) / delta))
}

/// Worst-case oracle calls for a run of ell iterations at confidence
/// delta_c, assuming the earliest possible transition:
/// 1944 ln(2/delta_c) (2^ell - 1).
pub fn worst_case_count(ell: u32, delta_c: f64) -> Result<f64> {
    assert!(ell >= 1, "iteration count must be at least 1");
    check_delta_c(delta_c)?;
    Ok(1944.0 * libm::log(2.0 / delta_c) * (libm::exp2(ell as f64) - 1.0))
}

fn check_delta_c(delta_c: f64) -> Result<()> {
    if !(delta_c > 0.0 && delta_c < 1.0) {
        return Err(Error::DeltaCOutOfRange(delta_c));
    }
    Ok(())
}

/// Idealised oracle calls of a completed run with integer shot counts,
/// evaluated at the transition iteration it actually used:
/// n_first (2^j0 - 1) + 2 n_second (2^ell - 2^j0).
///
/// This is the exact discrete counterpart of [`worst_case_count`]; the
/// ledger of a finished run matches it to the call.
pub fn worst_case_count_at(ell: u32, j0: u32, n_shot_first: u64, n_shot_second: u64) -> u64 {
    assert!(j0 >= 1 && j0 <= ell, "transition iteration must lie in 1..=ell");
    n_shot_first * ((1u64 << j0) - 1) + 2 * n_shot_second * ((1u64 << ell) - (1u64 << j0))
}

/// Oracle-call bound of the reference maximum-likelihood schedule:
/// (1.15e6 / epsilon) ln((2 / delta) log3(3 pi / (20 epsilon))).
///
/// Meaningful for epsilon < 3 pi / 20, where the inner logarithm is
/// positive; larger targets are rejected.
pub fn competitor_bound(epsilon: f64, delta: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 3.0 * PI / 20.0) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    check_delta(delta)?;
    let log3 = libm::log(3.0 * PI / (20.0 * epsilon)) / libm::log(3.0);
    Ok(1.15e6 / epsilon * libm::log(2.0 / delta * log3))
}

/// Side-by-side bounds for one (epsilon, delta) target.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoundReport {
    pub epsilon: f64,
    pub delta: f64,
    /// Iteration count [`choose_ell`] picks for epsilon.
    pub ell: u32,
    /// Per-iteration confidence delta / (2 ell) that spreads delta over the
    /// run.
    pub delta_c: f64,
    pub fae_bound: f64,
    pub worst_case: f64,
    pub competitor: f64,
}

/// Evaluates every bound at one target, splitting delta evenly over the
/// 2 ell measurements of the chosen run length.
pub fn bound_report(epsilon: f64, delta: f64) -> Result<BoundReport> {
    check_delta(delta)?;
    let ell = choose_ell(epsilon)?;
    let delta_c = delta / (2.0 * ell as f64);
    Ok(BoundReport {
        epsilon,
        delta,
        ell,
        delta_c,
        fae_bound: fae_query_bound(epsilon, delta)?,
        worst_case: worst_case_count(ell, delta_c)?,
        competitor: competitor_bound(epsilon, delta)?,
    })
}
