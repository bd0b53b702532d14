//! Amplitude estimation with near-optimal query scaling.
//!
//! Given sampling access to a process that succeeds with probability a^2,
//! the estimator recovers a to additive error epsilon using on the order of
//! (1/epsilon) log(log(1/epsilon)/delta) process invocations, against the
//! 1/epsilon^2 cost of naive sampling. It does so without any phase
//! estimation circuitry: each iteration amplifies the state 2^(j-1) times,
//! measures, and tightens a confidence interval for the underlying rotation
//! angle.
//!
//! The crate is no_std (alloc only). Everything random flows through
//! explicitly keyed substreams, so any run is reproducible from its seed.
//!
//! - [`oracle`]: binomial sampling model of the amplified measurement.
//! - [`simulator`]: dense statevector reference of the same circuit.
//! - [`confidence`]: Chernoff intervals and the extended arctangent.
//! - [`estimator`]: the two-stage interval-refinement algorithm.
//! - [`bounds`]: closed-form query-count bounds for planning and comparison.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod confidence;
pub mod error;
pub mod estimator;
pub mod oracle;
pub mod simulator;

pub use bounds::{
    bound_report, choose_ell, competitor_bound, fae_query_bound, worst_case_count,
    worst_case_count_at, BoundReport,
};
pub use confidence::{
    atan_error_bound, atan_ext, chernoff, crosses_discontinuity, shots_for_half_width,
    AngleEstimate, AngleInterval, ConfidenceInterval,
};
pub use error::{Error, Result};
pub use estimator::{
    estimate_sin, first_stage_update, resolve_winding, run_fae, run_fae_with_oracle,
    second_stage_update, trace_diagnostics, DiagnosticsReport, EstimationResult, EstimatorConfig,
    IterationDiagnostics, IterationRecord, Stage,
};
pub use oracle::{
    attenuate, derive_key, measure_cos, measure_cos_weighted, CosEstimate, CosOracle,
    ExactOracle, ProblemSpec, QueryLedger, SamplingOracle, StreamRng,
};
pub use simulator::{build_chi, build_grover, p11_after, p11_sweep, StateVector, UnitaryOp};
