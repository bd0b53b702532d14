//! Confidence machinery: Chernoff intervals for bounded means, an extended
//! arctangent with an explicit discontinuity set, its perturbation bound, and
//! circular angle intervals.
//!
//! An average of n_shot values in [-1, 1] deviates from its mean by more than
//! sqrt(ln(2/delta_c) * 12 / n_shot) with probability below delta_c. That
//! half-width is deliberately loose (a factor sqrt(6) over Hoeffding); it is
//! the constant the query-count guarantees are written against, so it is used
//! verbatim.

use crate::error::{Error, Result};
use core::f64::consts::{FRAC_PI_2, PI};

/// Two-sided confidence interval for a cosine estimate, clamped to [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConfidenceInterval {
    pub lo: f64,
    pub hi: f64,
    /// Confidence level the width was computed for.
    pub delta_c: f64,
}

impl ConfidenceInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Chernoff interval c_hat +- sqrt(ln(2/delta_c) * 12 / n_shot).
///
/// Panics if n_shot is zero; rejects delta_c outside (0, 1).
pub fn chernoff(c_hat: f64, n_shot: u64, delta_c: f64) -> Result<ConfidenceInterval> {
    assert!(n_shot >= 1, "shot count must be at least 1");
    if !(delta_c > 0.0 && delta_c < 1.0) {
        return Err(Error::DeltaCOutOfRange(delta_c));
    }
    let half_width = libm::sqrt(libm::log(2.0 / delta_c) * 12.0 / n_shot as f64);
    Ok(ConfidenceInterval {
        lo: (c_hat - half_width).max(-1.0),
        hi: (c_hat + half_width).min(1.0),
        delta_c,
    })
}

/// Shot count that brings the Chernoff half-width down to `half_width`:
/// ceil(ln(2/delta_c) * 12 / half_width^2).
pub fn shots_for_half_width(half_width: f64, delta_c: f64) -> Result<u64> {
    if !(delta_c > 0.0 && delta_c < 1.0) {
        return Err(Error::DeltaCOutOfRange(delta_c));
    }
    assert!(half_width > 0.0, "half-width must be positive");
    Ok(libm::ceil(libm::log(2.0 / delta_c) * 12.0 / (half_width * half_width)) as u64)
}

/// Arctangent extended to the full circle, picking the branch that makes
/// rho = atan_ext(sin rho, cos rho) for every rho in (-pi, pi].
///
/// The cases are spelled out rather than delegated to atan2 so the
/// discontinuity set {s = 0, c <= 0} is exactly the documented one, with no
/// dependence on the sign of a floating-point zero.
pub fn atan_ext(s: f64, c: f64) -> Result<f64> {
    if !((-1.0..=1.0).contains(&s) && (-1.0..=1.0).contains(&c)) {
        return Err(Error::AtanDomain { s, c });
    }
    Ok(if c > 0.0 {
        libm::atan(s / c)
    } else if c == 0.0 {
        if s > 0.0 {
            FRAC_PI_2
        } else if s == 0.0 {
            0.0
        } else {
            -FRAC_PI_2
        }
    } else if s >= 0.0 {
        PI + libm::atan(s / c)
    } else {
        -PI + libm::atan(s / c)
    })
}

/// True if the axis-aligned rectangle (c +- dc) x (s +- ds) touches the
/// discontinuity set of [`atan_ext`], the ray {s = 0, c <= 0}.
pub fn crosses_discontinuity(s: f64, c: f64, ds: f64, dc: f64) -> bool {
    s - ds <= 0.0 && s + ds >= 0.0 && c - dc <= 0.0
}

/// Worst-case change of [`atan_ext`] under perturbations |dc| and |ds| of its
/// inputs: max(2 dc + 2 ds, 3 dc), valid for dc < 1/4, ds < 1/2 when the
/// perturbation rectangle avoids the discontinuity set.
pub fn atan_error_bound(dc: f64, ds: f64) -> Result<f64> {
    if !((0.0..0.25).contains(&dc) && (0.0..0.5).contains(&ds)) {
        return Err(Error::AtanBoundDomain { dc, ds });
    }
    Ok((2.0 * dc + 2.0 * ds).max(3.0 * dc))
}

/// Angle interval on the circle, represented in (-pi, pi].
///
/// A margin pushed across +-pi splits into two arcs; `Wrapped` stores them as
/// [-pi, below] and [above, pi].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum AngleInterval {
    Connected { lo: f64, hi: f64 },
    Wrapped { below: f64, above: f64 },
}

/// An angle with its containing interval; diagnostics-only.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AngleEstimate {
    pub value: f64,
    pub interval: AngleInterval,
}

impl AngleEstimate {
    /// Builds value +- margin on the circle. Requires value in [-pi, pi] and
    /// margin in (0, pi).
    pub fn with_margin(value: f64, margin: f64) -> Self {
        assert!((-PI..=PI).contains(&value), "angle must lie in [-pi, pi]");
        assert!(margin > 0.0 && margin < PI, "margin must lie in (0, pi)");
        let lo = value - margin;
        let hi = value + margin;
        let interval = if lo < -PI {
            AngleInterval::Wrapped { below: hi, above: lo + 2.0 * PI }
        } else if hi > PI {
            AngleInterval::Wrapped { below: hi - 2.0 * PI, above: lo }
        } else {
            AngleInterval::Connected { lo, hi }
        };
        AngleEstimate { value, interval }
    }

    /// True if `angle` (in [-pi, pi]) lies inside the interval.
    pub fn contains(&self, angle: f64) -> bool {
        match self.interval {
            AngleInterval::Connected { lo, hi } => lo <= angle && angle <= hi,
            AngleInterval::Wrapped { below, above } => angle <= below || angle >= above,
        }
    }

    /// Worst-case circular distance from `value` to an interval endpoint.
    ///
    /// For a connected arc [a, b] containing rho this is
    /// max(rho - a, b - rho); for a wrapped pair the distance to the far
    /// endpoint goes the long way around through +-pi.
    pub fn delta_rho(&self) -> f64 {
        let rho = self.value;
        match self.interval {
            AngleInterval::Connected { lo, hi } => (rho - lo).max(hi - rho),
            AngleInterval::Wrapped { below, above } => {
                if rho <= below {
                    (2.0 * PI + rho - above).max(below - rho)
                } else {
                    (rho - above).max(2.0 * PI + below - rho)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_4;

    #[test]
    fn chernoff_matches_frozen_half_widths() {
        // sqrt(ln(200) * 12 / n), computed independently.
        let iv = chernoff(0.0, 10_302, 0.01).unwrap();
        assert!((iv.hi - 0.07855952242247637).abs() < 1e-15);
        assert_eq!(iv.lo, -iv.hi);
        let iv = chernoff(0.0, 5_151, 0.01).unwrap();
        assert!((iv.hi - 0.11109994206341935).abs() < 1e-15);
    }

    #[test]
    fn chernoff_clamps_to_unit_range() {
        let iv = chernoff(1.0, 10, 0.01).unwrap();
        assert_eq!(iv.hi, 1.0);
        assert_eq!(iv.lo, -1.0); // half-width 2.52 swallows the whole range
        let iv = chernoff(0.9, 10_302, 0.01).unwrap();
        assert!((iv.hi - (0.9 + 0.07855952242247637)).abs() < 1e-15);
        assert!(iv.lo > 0.8);
    }

    #[test]
    fn chernoff_width_shrinks_with_shots_and_grows_with_confidence() {
        let w = |n, d| chernoff(0.0, n, d).unwrap().width();
        assert!(w(100, 0.01) > w(1_000, 0.01));
        assert!(w(1_000, 0.001) > w(1_000, 0.01));
    }

    #[test]
    fn chernoff_rejects_bad_delta() {
        assert!(matches!(chernoff(0.0, 10, 0.0), Err(Error::DeltaCOutOfRange(_))));
        assert!(matches!(chernoff(0.0, 10, 1.0), Err(Error::DeltaCOutOfRange(_))));
    }

    #[test]
    fn shot_formula_reproduces_stage_budgets() {
        // 1944 ln(2/dc) and 972 ln(2/dc) arise from half-widths 1/(9 sqrt 2)
        // and 1/9: 12 * 162 = 1944, 12 * 81 = 972.
        assert_eq!(shots_for_half_width(1.0 / (9.0 * libm::sqrt(2.0)), 0.01).unwrap(), 10_300);
        assert_eq!(shots_for_half_width(1.0 / 9.0, 0.01).unwrap(), 5_150);
    }

    #[test]
    fn atan_ext_covers_all_branches() {
        assert_eq!(atan_ext(1.0, 0.0).unwrap(), FRAC_PI_2);
        assert_eq!(atan_ext(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(atan_ext(-1.0, 0.0).unwrap(), -FRAC_PI_2);
        assert!((atan_ext(-0.5, -0.5).unwrap() + 3.0 * FRAC_PI_4).abs() < 1e-15);
        assert!((atan_ext(0.5, -0.5).unwrap() - 3.0 * FRAC_PI_4).abs() < 1e-15);
        assert!((atan_ext(0.5, 0.5).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert_eq!(atan_ext(0.0, -1.0).unwrap(), PI);
        assert_eq!(atan_ext(0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn atan_ext_rejects_out_of_range() {
        assert!(atan_ext(1.1, 0.0).is_err());
        assert!(atan_ext(0.0, -1.2).is_err());
        assert!(atan_ext(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn atan_ext_inverts_angles_on_the_circle() {
        for k in 0..=4000 {
            let rho = -PI + 2.0 * PI * (k as f64) / 4000.0;
            if rho <= -PI {
                continue; // -pi maps to +pi, the branch cut
            }
            let got = atan_ext(libm::sin(rho), libm::cos(rho)).unwrap();
            assert!((got - rho).abs() < 1e-12, "rho {rho} -> {got}");
        }
    }

    #[test]
    fn atan_error_bound_examples() {
        assert_eq!(atan_error_bound(0.0, 0.0).unwrap(), 0.0);
        let b = atan_error_bound(1.0 / 9.0, 1.0 / 3.0).unwrap();
        assert!((b - 8.0 / 9.0).abs() < 1e-15); // 2/9 + 2/3 dominates 3/9
        let b = atan_error_bound(0.2, 0.01).unwrap(); // 3 dc dominates
        assert!((b - 0.6).abs() < 1e-15);
        assert!(atan_error_bound(0.25, 0.0).is_err());
        assert!(atan_error_bound(0.0, 0.5).is_err());
        assert!(atan_error_bound(-0.1, 0.0).is_err());
    }

    #[test]
    fn discontinuity_test_matches_geometry() {
        assert!(crosses_discontinuity(0.0, -0.5, 0.0, 0.0));
        assert!(crosses_discontinuity(0.1, -0.5, 0.2, 0.0));
        assert!(!crosses_discontinuity(0.1, -0.5, 0.05, 0.0));
        assert!(!crosses_discontinuity(0.0, 0.5, 0.4, 0.4));
        assert!(crosses_discontinuity(0.0, 0.5, 0.4, 0.5));
    }

    #[test]
    fn angle_margin_round_trips() {
        for &(value, margin) in
            &[(0.0, 0.5), (3.0, 0.5), (-3.0, 0.5), (PI, 0.1), (-PI, 0.1), (1.0, 3.0)]
        {
            let est = AngleEstimate::with_margin(value, margin);
            assert!((est.delta_rho() - margin).abs() < 1e-12);
            assert!(est.contains(value));
        }
    }

    #[test]
    fn wrapped_interval_membership() {
        // 3.0 +- 0.5 wraps: arcs [-pi, 3.5 - 2pi] and [2.5, pi].
        let est = AngleEstimate::with_margin(3.0, 0.5);
        assert!(matches!(est.interval, AngleInterval::Wrapped { .. }));
        assert!(est.contains(3.1));
        assert!(est.contains(-3.1));
        assert!(!est.contains(0.0));
        assert!(!est.contains(2.4));
    }

    #[test]
    fn delta_rho_hand_examples() {
        // Connected [-pi/3, pi/4] around 0: worst endpoint is -pi/3.
        let est = AngleEstimate {
            value: 0.0,
            interval: AngleInterval::Connected { lo: -PI / 3.0, hi: FRAC_PI_4 },
        };
        assert!((est.delta_rho() - PI / 3.0).abs() < 1e-15);
        // Wrapped arcs [-pi, -2pi/3] and [3pi/4, pi] around -5pi/6: reaching
        // 3pi/4 through -pi costs pi/6 + pi/4 = 5pi/12.
        let est = AngleEstimate {
            value: -5.0 * PI / 6.0,
            interval: AngleInterval::Wrapped { below: -2.0 * PI / 3.0, above: 3.0 * PI / 4.0 },
        };
        assert!((est.delta_rho() - 5.0 * PI / 12.0).abs() < 1e-15);
    }
}
