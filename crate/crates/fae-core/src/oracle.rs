//! Sampling oracle for the attenuated amplitude.
//!
//! The target amplitude a is encoded as a rotation angle theta = asin(a/4);
//! the factor 4 keeps theta inside [0, asin(1/4)] so that every Grover angle
//! the estimator ever queries stays strictly below pi. One oracle batch at
//! Grover power m draws n_11 ~ Binomial(n_shot, sin^2((2m+1) theta)) and
//! returns c_hat = 1 - 2 n_11 / n_shot, an unbiased estimate of
//! cos(2(2m+1) theta).
//!
//! Randomness is organised as named substreams of a single master seed, so a
//! run is a pure function of (seed, trial, invocation order) and trials can be
//! executed in any order or in parallel without changing results.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution};

use crate::confidence::ConfidenceInterval;
use crate::error::{Error, Result};

/// Largest rotation angle a valid amplitude can produce: asin(1/4).
pub const THETA_LIMIT: f64 = 0.25268025514207865;

/// Maps an amplitude in [0, 1] to its attenuated rotation angle asin(a/4).
pub fn attenuate(amplitude: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&amplitude) {
        return Err(Error::AmplitudeOutOfRange(amplitude));
    }
    Ok(libm::asin(amplitude / 4.0))
}

/// Immutable description of one estimation problem.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ProblemSpec {
    amplitude: f64,
    theta: f64,
    seed: u64,
}

impl ProblemSpec {
    /// Validates the amplitude and fixes the master seed for this problem.
    pub fn new(amplitude: f64, seed: u64) -> Result<Self> {
        let theta = attenuate(amplitude)?;
        Ok(ProblemSpec { amplitude, theta, seed })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Attenuated rotation angle asin(amplitude / 4).
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Probability of the measured register reading 11 after m Grover
    /// applications: sin^2((2m+1) theta).
    pub fn p11(&self, m: u64) -> f64 {
        let s = libm::sin((2 * m + 1) as f64 * self.theta);
        s * s
    }

    /// True value of the cosine the oracle estimates at Grover power m.
    pub fn cos_true(&self, m: u64) -> f64 {
        libm::cos(2.0 * (2 * m + 1) as f64 * self.theta)
    }
}

/// 64-bit finalizer mix; full avalanche, bijective.
fn mix64(mut z: u64) -> u64 {
    z ^= z >> 33;
    z = z.wrapping_mul(0xff51_afd7_ed55_8ccd);
    z ^= z >> 33;
    z = z.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    z ^= z >> 33;
    z
}

/// Folds a list of words into one well-mixed trial key. Callers that key
/// their streams by content (amplitude bits, iteration count, trial number)
/// rather than by loop position get results that survive reordering.
pub fn derive_key(words: &[u64]) -> u64 {
    let mut h = 0x517c_c1b7_2722_0a95u64;
    for &w in words {
        h = mix64(h ^ w);
    }
    h
}

/// Deterministic source of independent RNG substreams.
///
/// Substream k of trial t under master seed s is a ChaCha12 generator keyed
/// by a mix of (s, t, k). Identical coordinates always yield identical
/// streams, which is what makes whole benchmark runs replayable.
#[derive(Debug, Clone)]
pub struct StreamRng {
    master_seed: u64,
    trial_key: u64,
    invocation: u64,
}

impl StreamRng {
    pub fn new(master_seed: u64, trial_key: u64) -> Self {
        StreamRng { master_seed, trial_key, invocation: 0 }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn trial_key(&self) -> u64 {
        self.trial_key
    }

    /// Number of substreams handed out so far.
    pub fn invocations(&self) -> u64 {
        self.invocation
    }

    /// Returns the next substream and advances the invocation counter.
    pub fn next_substream(&mut self) -> ChaCha12Rng {
        let a = mix64(self.master_seed ^ 0x9e37_79b9_7f4a_7c15);
        let b = mix64(a ^ self.trial_key);
        let c = mix64(b ^ self.invocation);
        let d = mix64(c ^ 0x2545_f491_4f6c_dd1d);
        self.invocation += 1;
        let mut key = [0u8; 32];
        key[0..8].copy_from_slice(&a.to_le_bytes());
        key[8..16].copy_from_slice(&b.to_le_bytes());
        key[16..24].copy_from_slice(&c.to_le_bytes());
        key[24..32].copy_from_slice(&d.to_le_bytes());
        ChaCha12Rng::from_seed(key)
    }
}

/// Running totals of oracle work, updated on every batch.
///
/// `exact_q_calls` counts Grover applications as performed (n_shot * m per
/// batch). `paper_q_calls` counts them under the idealised schedule that
/// prices both second-stage batches of iteration j at 2^(j-1), which is the
/// convention the worst-case formula uses. State preparations are tracked
/// separately and never folded into either total.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct QueryLedger {
    exact_q_calls: u64,
    paper_q_calls: u64,
    state_preparations: u64,
}

impl QueryLedger {
    pub fn new() -> Self {
        QueryLedger::default()
    }

    /// Records one batch: m actual Grover applications per shot, priced as
    /// paper_m in the idealised schedule.
    pub fn record(&mut self, m: u64, paper_m: u64, n_shot: u64) {
        self.exact_q_calls += n_shot * m;
        self.paper_q_calls += n_shot * paper_m;
        self.state_preparations += n_shot;
    }

    pub fn exact_q_calls(&self) -> u64 {
        self.exact_q_calls
    }

    pub fn paper_q_calls(&self) -> u64 {
        self.paper_q_calls
    }

    pub fn state_preparations(&self) -> u64 {
        self.state_preparations
    }

    /// (exact_q_calls, paper_q_calls, state_preparations) at this instant.
    pub fn snapshot(&self) -> (u64, u64, u64) {
        (self.exact_q_calls, self.paper_q_calls, self.state_preparations)
    }
}

/// One batch measurement result.
///
/// `interval` stays `None` until a confidence interval is attached; the
/// shifted second-stage measurement never gets one.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CosEstimate {
    pub m: u64,
    pub n_shot: u64,
    pub n_11: u64,
    pub c_hat: f64,
    pub interval: Option<ConfidenceInterval>,
}

impl CosEstimate {
    /// Attaches the Chernoff interval for confidence level delta_c.
    pub fn with_chernoff(mut self, delta_c: f64) -> Result<Self> {
        let iv = crate::confidence::chernoff(self.c_hat, self.n_shot, delta_c)?;
        self.interval = Some(iv);
        Ok(self)
    }
}

/// Draws one batch at Grover power m and updates the ledger.
///
/// Panics if m or n_shot is zero; both are fixed by the estimator schedule
/// and a zero is always a caller bug.
pub fn measure_cos(
    spec: &ProblemSpec,
    m: u64,
    n_shot: u64,
    stream: &mut StreamRng,
    ledger: &mut QueryLedger,
) -> CosEstimate {
    measure_cos_weighted(spec, m, m, n_shot, stream, ledger)
}

/// Like [`measure_cos`] but prices the batch as `paper_m` Grover calls in the
/// idealised ledger column while performing `m` of them.
pub fn measure_cos_weighted(
    spec: &ProblemSpec,
    m: u64,
    paper_m: u64,
    n_shot: u64,
    stream: &mut StreamRng,
    ledger: &mut QueryLedger,
) -> CosEstimate {
    assert!(m >= 1, "Grover power must be at least 1");
    assert!(n_shot >= 1, "shot count must be at least 1");
    let p = spec.p11(m);
    let mut rng = stream.next_substream();
    let n_11 = Binomial::new(n_shot, p)
        .expect("p11 is a probability by construction")
        .sample(&mut rng);
    ledger.record(m, paper_m, n_shot);
    CosEstimate {
        m,
        n_shot,
        n_11,
        c_hat: 1.0 - 2.0 * (n_11 as f64) / (n_shot as f64),
        interval: None,
    }
}

/// Source of cosine estimates the estimator runs against.
///
/// The sampling implementation is the real oracle; the exact one replaces
/// every draw with its mean and exists for zero-noise diagnostics.
pub trait CosOracle {
    fn measure(
        &self,
        spec: &ProblemSpec,
        m: u64,
        paper_m: u64,
        n_shot: u64,
        stream: &mut StreamRng,
        ledger: &mut QueryLedger,
    ) -> CosEstimate;
}

/// Binomial sampling oracle; the production path.
#[derive(Debug, Clone, Copy, Default)]
pub struct SamplingOracle;

impl CosOracle for SamplingOracle {
    fn measure(
        &self,
        spec: &ProblemSpec,
        m: u64,
        paper_m: u64,
        n_shot: u64,
        stream: &mut StreamRng,
        ledger: &mut QueryLedger,
    ) -> CosEstimate {
        measure_cos_weighted(spec, m, paper_m, n_shot, stream, ledger)
    }
}

/// Zero-noise oracle: returns the exact cosine, n_11 rounded to its mean.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactOracle;

impl CosOracle for ExactOracle {
    fn measure(
        &self,
        spec: &ProblemSpec,
        m: u64,
        paper_m: u64,
        n_shot: u64,
        stream: &mut StreamRng,
        ledger: &mut QueryLedger,
    ) -> CosEstimate {
        assert!(m >= 1, "Grover power must be at least 1");
        assert!(n_shot >= 1, "shot count must be at least 1");
        let _ = stream.next_substream(); // keep substream numbering aligned
        ledger.record(m, paper_m, n_shot);
        let n_11 = libm::round(spec.p11(m) * n_shot as f64) as u64;
        CosEstimate { m, n_shot, n_11, c_hat: spec.cos_true(m), interval: None }
    }
}

/// Convenience for tests and diagnostics: draws `resamples` independent
/// batches and returns their c_hat values.
pub fn resample_cos(
    spec: &ProblemSpec,
    m: u64,
    n_shot: u64,
    resamples: u64,
    stream: &mut StreamRng,
) -> Vec<f64> {
    let mut ledger = QueryLedger::new();
    (0..resamples)
        .map(|_| measure_cos(spec, m, n_shot, stream, &mut ledger).c_hat)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn attenuate_matches_frozen_values() {
        // asin(1/4) and asin(1/10), computed independently.
        assert_eq!(attenuate(1.0).unwrap(), 0.25268025514207865);
        assert_eq!(attenuate(0.4).unwrap(), 0.1001674211615598);
        assert_eq!(attenuate(0.0).unwrap(), 0.0);
        assert_eq!(attenuate(1.0).unwrap(), THETA_LIMIT);
    }

    #[test]
    fn attenuate_rejects_out_of_range() {
        assert!(matches!(attenuate(-0.1), Err(Error::AmplitudeOutOfRange(_))));
        assert!(matches!(attenuate(1.5), Err(Error::AmplitudeOutOfRange(_))));
        assert!(matches!(attenuate(f64::NAN), Err(Error::AmplitudeOutOfRange(_))));
    }

    #[test]
    fn p11_at_unit_amplitude_is_exact_rational() {
        // sin(3 asin(1/4)) = 3/4 - 4/64 = 11/16, so p11(1) = 121/256.
        let spec = ProblemSpec::new(1.0, 0).unwrap();
        assert!((spec.p11(1) - 0.47265625).abs() < 1e-15);
        assert!((spec.p11(0) - 0.0625).abs() < 1e-16);
    }

    #[test]
    fn measure_cos_is_deterministic_at_p_one() {
        // theta = pi/14 makes (2*3+1) theta = pi/2, so every shot lands in 11.
        let amplitude = 4.0 * libm::sin(PI / 14.0);
        assert!((amplitude - 0.8900837358252576).abs() < 1e-15);
        let spec = ProblemSpec::new(amplitude, 9).unwrap();
        let mut stream = StreamRng::new(9, 0);
        let mut ledger = QueryLedger::new();
        let est = measure_cos(&spec, 3, 500, &mut stream, &mut ledger);
        assert_eq!(est.n_11, 500);
        assert_eq!(est.c_hat, -1.0);
        assert_eq!(est.interval, None);
    }

    #[test]
    fn measure_cos_is_deterministic_at_p_zero() {
        let spec = ProblemSpec::new(0.0, 9).unwrap();
        let mut stream = StreamRng::new(9, 0);
        let mut ledger = QueryLedger::new();
        let est = measure_cos(&spec, 1, 100, &mut stream, &mut ledger);
        assert_eq!(est.n_11, 0);
        assert_eq!(est.c_hat, 1.0);
    }

    #[test]
    fn c_hat_support_is_discrete() {
        let spec = ProblemSpec::new(0.7, 3).unwrap();
        let mut stream = StreamRng::new(3, 11);
        let mut ledger = QueryLedger::new();
        for n_shot in [1u64, 7, 64] {
            for _ in 0..50 {
                let est = measure_cos(&spec, 2, n_shot, &mut stream, &mut ledger);
                assert!(est.n_11 <= n_shot);
                let rebuilt = 1.0 - 2.0 * (est.n_11 as f64) / (n_shot as f64);
                assert_eq!(est.c_hat, rebuilt);
                assert!(est.c_hat >= -1.0 && est.c_hat <= 1.0);
            }
        }
    }

    #[test]
    fn empirical_mean_matches_p11() {
        // 100 resamples of 10^4 shots: SE of mean c_hat is
        // 2 sqrt(p(1-p)/1e6) <= 1e-3; require 5 SE.
        let spec = ProblemSpec::new(1.0, 21).unwrap();
        let mut stream = StreamRng::new(21, 0);
        let vals = resample_cos(&spec, 1, 10_000, 100, &mut stream);
        let mean: f64 = vals.iter().sum::<f64>() / vals.len() as f64;
        let expect = 1.0 - 2.0 * 0.47265625;
        assert!((mean - expect).abs() < 5e-3, "mean {mean} vs {expect}");
    }

    #[test]
    fn identical_coordinates_reproduce_identical_draws() {
        let spec = ProblemSpec::new(0.3, 1234).unwrap();
        let run = |trial: u64| {
            let mut stream = StreamRng::new(1234, trial);
            let mut ledger = QueryLedger::new();
            (0..5)
                .map(|_| measure_cos(&spec, 4, 999, &mut stream, &mut ledger).n_11)
                .collect::<Vec<_>>()
        };
        assert_eq!(run(0), run(0));
        assert_ne!(run(0), run(1));
    }

    #[test]
    fn substreams_differ_across_invocations() {
        let mut stream = StreamRng::new(5, 5);
        use rand::RngCore;
        let a = stream.next_substream().next_u64();
        let b = stream.next_substream().next_u64();
        assert_ne!(a, b);
        assert_eq!(stream.invocations(), 2);
    }

    #[test]
    fn ledger_accumulates_batches() {
        let mut ledger = QueryLedger::new();
        assert_eq!(ledger.snapshot(), (0, 0, 0));
        ledger.record(4, 4, 10);
        assert_eq!(ledger.snapshot(), (40, 40, 10));
        ledger.record(1, 1, 10_300);
        assert_eq!(ledger.snapshot(), (10_340, 10_340, 10_310));
        ledger.record(5, 4, 100);
        assert_eq!(ledger.snapshot(), (10_840, 10_740, 10_410));
    }

    #[test]
    fn exact_oracle_returns_true_cosine() {
        let spec = ProblemSpec::new(0.3, 0).unwrap();
        let mut stream = StreamRng::new(0, 0);
        let mut ledger = QueryLedger::new();
        let est = ExactOracle.measure(&spec, 2, 2, 100, &mut stream, &mut ledger);
        assert_eq!(est.c_hat, spec.cos_true(2));
        assert_eq!(ledger.snapshot(), (200, 200, 100));
    }
}
