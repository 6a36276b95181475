//! Closed-form scalar bounds on `[m, M]` shared by the mean and entropy
//! certificates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interval `[lower, upper]` with `0 <= lower <= upper < ∞`.
///
/// Every formula here except [`power_gap_bound`] with `alpha >= 1` needs a
/// strictly positive lower endpoint and checks for it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Endpoints {
    lower: f64,
    upper: f64,
}

impl Endpoints {
    /// Strictly positive endpoints, `0 < lower <= upper`.
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower > 0.0) {
            return Err(Error::InvalidEndpoints(format!(
                "lower endpoint {lower} must be positive"
            )));
        }
        Self::nonnegative(lower, upper)
    }

    /// Endpoints allowing `lower = 0`.
    pub fn nonnegative(lower: f64, upper: f64) -> Result<Self> {
        if !(lower >= 0.0 && upper.is_finite()) {
            return Err(Error::InvalidEndpoints(format!(
                "endpoints [{lower}, {upper}] must be finite and nonnegative"
            )));
        }
        if lower > upper {
            return Err(Error::InvalidEndpoints(format!(
                "lower endpoint {lower} exceeds upper endpoint {upper}"
            )));
        }
        Ok(Self { lower, upper })
    }

    /// Smallest and largest of `values`.
    pub fn spanning(values: &[f64]) -> Result<Self> {
        let lower = values.iter().copied().fold(f64::INFINITY, f64::min);
        let upper = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::nonnegative(lower, upper)
    }

    /// `[1/upper, 1/lower]`.
    pub fn reciprocal(&self) -> Result<Self> {
        self.require_positive()?;
        Self::new(1.0 / self.upper, 1.0 / self.lower)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    fn require_positive(&self) -> Result<()> {
        if self.lower > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidEndpoints(
                "this bound needs a strictly positive lower endpoint".into(),
            ))
        }
    }
}

/// `(M - m)² / (4 m M)`.
pub fn relative_spread_bound(e: &Endpoints) -> Result<f64> {
    e.require_positive()?;
    let spread = e.upper - e.lower;
    Ok(spread * spread / (4.0 * e.lower * e.upper))
}

/// Logarithmic mean `(b - a) / (ln b - ln a)`, equal to `a` when `a = b`.
pub fn logarithmic_mean(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidEndpoints(format!(
            "logarithmic mean needs positive finite arguments, got ({a}, {b})"
        )));
    }
    if a == b {
        return Ok(a);
    }
    let (a, b) = (a.min(b), a.max(b));
    // L = sqrt(ab) * sinh(s) / s with s = ln(b/a) / 2, which stays accurate
    // when a and b are close.
    let s = 0.5 * (b / a).ln();
    let sinhc = if s.abs() < 1e-4 {
        1.0 + s * s / 6.0
    } else {
        s.sinh() / s
    };
    Ok((a * b).sqrt() * sinhc)
}

/// `(¼ (M - m)(ln M - ln m), ¼ (M - m)² / sqrt(mM))`. The first component
/// never exceeds the second because the geometric mean is at most the
/// logarithmic mean.
pub fn log_spread_bounds(e: &Endpoints) -> Result<(f64, f64)> {
    e.require_positive()?;
    let spread = e.upper - e.lower;
    let log_form = 0.25 * spread * (e.upper / e.lower).ln();
    let root_form = 0.25 * spread * spread / (e.lower * e.upper).sqrt();
    Ok((log_form, root_form))
}

/// `(α/4)(M - m)|M^(α-1) - m^(α-1)|`, the scalar converse bound for `x^α`
/// (`α >= 1`) and `-x^α` (`0 < α < 1`).
pub fn power_gap_bound(alpha: f64, e: &Endpoints) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter {
            function: "power_gap_bound".into(),
            name: "alpha".into(),
            reason: format!("{alpha} must be a positive finite number"),
        });
    }
    if alpha < 1.0 {
        e.require_positive()?;
    }
    let exponent = alpha - 1.0;
    let derivative_spread = (e.upper.powf(exponent) - e.lower.powf(exponent)).abs();
    Ok(alpha / 4.0 * (e.upper - e.lower) * derivative_spread)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ep(m: f64, big_m: f64) -> Endpoints {
        Endpoints::new(m, big_m).unwrap()
    }

    #[test]
    fn endpoint_validation() {
        assert!(Endpoints::new(0.0, 1.0).is_err());
        assert!(Endpoints::new(-1.0, 1.0).is_err());
        assert!(Endpoints::new(2.0, 1.0).is_err());
        assert!(Endpoints::new(1.0, f64::INFINITY).is_err());
        assert!(Endpoints::nonnegative(0.0, 1.0).is_ok());
        assert!(Endpoints::nonnegative(f64::NAN, 1.0).is_err());
        let r = ep(0.2, 0.5).reciprocal().unwrap();
        assert_eq!((r.lower(), r.upper()), (2.0, 5.0));
    }

    #[test]
    fn relative_spread_examples() {
        assert_abs_diff_eq!(
            relative_spread_bound(&ep(1.0, 2.0)).unwrap(),
            0.125,
            epsilon = 1e-16
        );
        assert_eq!(relative_spread_bound(&ep(3.0, 3.0)).unwrap(), 0.0);
        // 0.09 / 0.4
        assert_abs_diff_eq!(
            relative_spread_bound(&ep(0.2, 0.5)).unwrap(),
            0.225,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            relative_spread_bound(&ep(2.0, 5.0)).unwrap(),
            0.225,
            epsilon = 1e-15
        );
        let zero = Endpoints::nonnegative(0.0, 1.0).unwrap();
        assert!(relative_spread_bound(&zero).is_err());
    }

    #[test]
    fn logarithmic_mean_examples() {
        assert_eq!(logarithmic_mean(3.0, 3.0).unwrap(), 3.0);
        assert_abs_diff_eq!(
            logarithmic_mean(1.0, std::f64::consts::E).unwrap(),
            std::f64::consts::E - 1.0,
            epsilon = 1e-15
        );
        let l = logarithmic_mean(1.0, 4.0).unwrap();
        assert_abs_diff_eq!(l, 2.164_042_561_333_445, epsilon = 1e-14);
        assert!((2.0..=2.5).contains(&l));
        assert_eq!(logarithmic_mean(4.0, 1.0).unwrap(), l);
        assert!(logarithmic_mean(0.0, 1.0).is_err());
        assert!(logarithmic_mean(1.0, -2.0).is_err());
    }

    #[test]
    fn logarithmic_mean_near_diagonal() {
        let a = 1.7;
        let b = a * (1.0 + 1e-9);
        let l = logarithmic_mean(a, b).unwrap();
        assert!((a * b).sqrt() <= l && l <= 0.5 * (a + b));
        assert_abs_diff_eq!(l, 0.5 * (a + b), epsilon = 1e-15);
    }

    #[test]
    fn log_spread_examples() {
        assert_eq!(log_spread_bounds(&ep(2.0, 2.0)).unwrap(), (0.0, 0.0));
        let (a, b) = log_spread_bounds(&ep(0.2, 0.5)).unwrap();
        assert_abs_diff_eq!(a, 0.068_721_804_890_561_63, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 0.071_151_247_353_788_53, epsilon = 1e-15);
        let (a, b) = log_spread_bounds(&ep(1.0, 4.0)).unwrap();
        assert_abs_diff_eq!(a, 1.039_720_770_839_918, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 1.125, epsilon = 1e-15);
    }

    #[test]
    fn power_gap_examples() {
        let unit = Endpoints::nonnegative(0.0, 1.0).unwrap();
        assert_abs_diff_eq!(power_gap_bound(2.0, &unit).unwrap(), 0.5, epsilon = 1e-16);
        assert_eq!(power_gap_bound(1.0, &ep(0.3, 7.0)).unwrap(), 0.0);
        assert_eq!(power_gap_bound(1.0, &unit).unwrap(), 0.0);
        assert_abs_diff_eq!(
            power_gap_bound(0.5, &ep(0.2, 0.5)).unwrap(),
            0.030_819_540_567_251_05,
            epsilon = 1e-15
        );
        assert!(power_gap_bound(0.5, &unit).is_err());
        assert!(power_gap_bound(0.0, &ep(1.0, 2.0)).is_err());
    }
}
