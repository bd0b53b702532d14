//! Error type shared across the estimation pipeline.
//!
//! Domain violations (out-of-range inputs, degenerate geometry) are reported
//! through [`Error`]; plain programmer errors such as a zero shot count panic
//! at the call site instead.

use core::fmt;

/// Everything that can go wrong while configuring or running an estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// Target amplitude outside [0, 1].
    AmplitudeOutOfRange(f64),
    /// Confidence parameter outside the open interval (0, 1).
    DeltaCOutOfRange(f64),
    /// Iteration count outside the supported range 1..=48.
    EllOutOfRange(u32),
    /// Extended arctangent input outside [-1, 1].
    AtanDomain { s: f64, c: f64 },
    /// Perturbation bound preconditions violated (needs dc < 1/4, ds < 1/2,
    /// both nonnegative).
    AtanBoundDomain { dc: f64, ds: f64 },
    /// |sin(nu)| fell below the guard threshold; the sine recovery at the
    /// stage transition would be numerically meaningless.
    DegenerateNu { sin_nu: f64 },
    /// Target error outside the valid range for the query bounds.
    EpsilonOutOfRange(f64),
    /// Failure probability outside the open interval (0, 1).
    DeltaOutOfRange(f64),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::AmplitudeOutOfRange(a) => {
                write!(f, "amplitude {a} is outside [0, 1]")
            }
            Error::DeltaCOutOfRange(d) => {
                write!(f, "confidence level delta_c {d} is outside (0, 1)")
            }
            Error::EllOutOfRange(ell) => {
                write!(f, "iteration count ell {ell} is outside 1..=48")
            }
            Error::AtanDomain { s, c } => {
                write!(f, "atan inputs (s = {s}, c = {c}) are outside [-1, 1]")
            }
            Error::AtanBoundDomain { dc, ds } => {
                write!(
                    f,
                    "perturbation bound needs 0 <= dc < 1/4 and 0 <= ds < 1/2, got dc = {dc}, ds = {ds}"
                )
            }
            Error::DegenerateNu { sin_nu } => {
                write!(f, "sin(nu) = {sin_nu} is too small to recover the sine estimate")
            }
            Error::EpsilonOutOfRange(e) => {
                write!(f, "target error {e} is outside the supported range")
            }
            Error::DeltaOutOfRange(d) => {
                write!(f, "failure probability {d} is outside (0, 1)")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
