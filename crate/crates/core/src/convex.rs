//! Registry of differentiable convex functions.
//!
//! The registry is closed: every function is one of the variants of
//! [`ConvexFunction`], each with an analytic value and gradient rule and a
//! per-coordinate domain. Functions serialize as
//! `{ "name": string, "params": { string: number } }`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default finite-difference step, scaled per coordinate by `max(1, |x_j|)`.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// One coordinate's admissible interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub lower_closed: bool,
    pub upper: f64,
    pub upper_closed: bool,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lower: f64::NEG_INFINITY,
        lower_closed: false,
        upper: f64::INFINITY,
        upper_closed: false,
    };
    pub const POSITIVE: Interval = Interval {
        lower: 0.0,
        lower_closed: false,
        upper: f64::INFINITY,
        upper_closed: false,
    };
    pub const NONNEGATIVE: Interval = Interval {
        lower: 0.0,
        lower_closed: true,
        upper: f64::INFINITY,
        upper_closed: false,
    };

    pub fn contains(&self, x: f64) -> bool {
        if !x.is_finite() {
            return false;
        }
        let above = if self.lower_closed {
            x >= self.lower
        } else {
            x > self.lower
        };
        let below = if self.upper_closed {
            x <= self.upper
        } else {
            x < self.upper
        };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lower_closed { '[' } else { '(' };
        let close = if self.upper_closed { ']' } else { ')' };
        write!(f, "{open}{}, {}{close}", self.lower, self.upper)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    /// Defined on the real line only (dimension 1).
    Scalar,
    /// Defined in any dimension `d >= 1`.
    Multivariate,
}

/// Serialized form of a registry entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl FunctionSpec {
    pub fn named(name: &str) -> Self {
        Self {
            name: name.to_string(),
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionSpec", into = "FunctionSpec")]
pub enum ConvexFunction {
    /// `-ln x` on `x > 0`.
    NegLog,
    /// `x ln x` on `x > 0`.
    XLogX,
    /// `x^p` on `x >= 0`, `p >= 1`.
    PowerP { p: f64 },
    /// `-x^alpha` on `x >= 0`, `0 < alpha < 1`.
    NegPowerAlpha { alpha: f64 },
    /// `x^alpha` on `x >= 0`, `alpha > 1`.
    PowerAlpha { alpha: f64 },
    /// `||x||^2` on R^d.
    SquaredNorm,
    /// `ln sum_j exp(x_j)` on R^d.
    LogSumExp,
}

pub const REGISTRY_NAMES: [&str; 7] = [
    "neg_log",
    "x_log_x",
    "power_p",
    "neg_power_alpha",
    "power_alpha",
    "squared_norm",
    "log_sum_exp",
];

impl ConvexFunction {
    pub fn power_p(p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(param_error("power_p", "p", "must be a finite number >= 1"));
        }
        Ok(Self::PowerP { p })
    }

    pub fn neg_power_alpha(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(param_error(
                "neg_power_alpha",
                "alpha",
                "must lie in (0, 1)",
            ));
        }
        Ok(Self::NegPowerAlpha { alpha })
    }

    pub fn power_alpha(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 1.0) {
            return Err(param_error(
                "power_alpha",
                "alpha",
                "must be a finite number > 1",
            ));
        }
        Ok(Self::PowerAlpha { alpha })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::NegLog => "neg_log",
            Self::XLogX => "x_log_x",
            Self::PowerP { .. } => "power_p",
            Self::NegPowerAlpha { .. } => "neg_power_alpha",
            Self::PowerAlpha { .. } => "power_alpha",
            Self::SquaredNorm => "squared_norm",
            Self::LogSumExp => "log_sum_exp",
        }
    }

    pub fn arity(&self) -> Arity {
        match self {
            Self::SquaredNorm | Self::LogSumExp => Arity::Multivariate,
            _ => Arity::Scalar,
        }
    }

    /// Per-coordinate domain on which the value formula is finite.
    pub fn domain(&self) -> Interval {
        match self {
            Self::NegLog | Self::XLogX => Interval::POSITIVE,
            Self::PowerP { .. } | Self::NegPowerAlpha { .. } | Self::PowerAlpha { .. } => {
                Interval::NONNEGATIVE
            }
            Self::SquaredNorm | Self::LogSumExp => Interval::REAL_LINE,
        }
    }

    /// Per-coordinate set on which the gradient formula is finite. Differs
    /// from [`domain`](Self::domain) only for `neg_power_alpha`, whose
    /// derivative diverges at 0.
    pub fn gradient_domain(&self) -> Interval {
        match self {
            Self::NegPowerAlpha { .. } => Interval::POSITIVE,
            _ => self.domain(),
        }
    }

    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        self.check_in(x, self.domain())
    }

    fn check_in(&self, x: &[f64], interval: Interval) -> Result<()> {
        self.check_dimension(x.len())?;
        for (j, &xj) in x.iter().enumerate() {
            if !interval.contains(xj) {
                return Err(Error::Domain {
                    function: self.name().to_string(),
                    coordinate: j,
                    value: xj,
                    domain: interval.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn check_dimension(&self, d: usize) -> Result<()> {
        if d == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
                context: "points need at least one coordinate",
            });
        }
        if self.arity() == Arity::Scalar && d != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: d,
                context: "scalar registry function",
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        Ok(self.value_unchecked(x))
    }

    fn value_unchecked(&self, x: &[f64]) -> f64 {
        match *self {
            Self::NegLog => -x[0].ln(),
            Self::XLogX => x[0] * x[0].ln(),
            Self::PowerP { p } => x[0].powf(p),
            Self::NegPowerAlpha { alpha } => -x[0].powf(alpha),
            Self::PowerAlpha { alpha } => x[0].powf(alpha),
            Self::SquaredNorm => x.iter().map(|v| v * v).sum(),
            Self::LogSumExp => {
                let shift = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                shift + x.iter().map(|v| (v - shift).exp()).sum::<f64>().ln()
            }
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_in(x, self.gradient_domain())?;
        Ok(match *self {
            Self::NegLog => vec![-1.0 / x[0]],
            Self::XLogX => vec![x[0].ln() + 1.0],
            Self::PowerP { p } => vec![p * x[0].powf(p - 1.0)],
            Self::NegPowerAlpha { alpha } => vec![-alpha * x[0].powf(alpha - 1.0)],
            Self::PowerAlpha { alpha } => vec![alpha * x[0].powf(alpha - 1.0)],
            Self::SquaredNorm => x.iter().map(|v| 2.0 * v).collect(),
            Self::LogSumExp => {
                let shift = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let e: Vec<f64> = x.iter().map(|v| (v - shift).exp()).collect();
                let total: f64 = e.iter().sum();
                e.into_iter().map(|v| v / total).collect()
            }
        })
    }

    /// Central differences with step `h * max(1, |x_j|)` in coordinate `j`.
    pub fn numeric_gradient(&self, x: &[f64], h: f64) -> Result<Vec<f64>> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidParameter {
                function: self.name().to_string(),
                name: "h".to_string(),
                reason: "finite-difference step must be positive".to_string(),
            });
        }
        self.check_point(x)?;
        let mut probe = x.to_vec();
        let mut grad = Vec::with_capacity(x.len());
        for j in 0..x.len() {
            let step = h * 1f64.max(x[j].abs());
            probe[j] = x[j] + step;
            let forward = self.evaluate(&probe)?;
            probe[j] = x[j] - step;
            let backward = self.evaluate(&probe)?;
            probe[j] = x[j];
            // the realized step, not the nominal one
            let span = (x[j] + step) - (x[j] - step);
            grad.push((forward - backward) / span);
        }
        Ok(grad)
    }

    pub fn gradient_check(&self, x: &[f64], h: f64, tol: f64) -> Result<GradientCheckReport> {
        let numeric = self.numeric_gradient(x, h)?;
        let analytic = self.gradient(x)?;
        let abs_deviation: Vec<f64> = analytic
            .iter()
            .zip(&numeric)
            .map(|(a, n)| (a - n).abs())
            .collect();
        let rel_deviation: Vec<f64> = analytic
            .iter()
            .zip(&numeric)
            .zip(&abs_deviation)
            .map(|((a, n), d)| d / 1f64.max(a.abs()).max(n.abs()))
            .collect();
        let max_deviation = rel_deviation.iter().copied().fold(0.0, f64::max);
        Ok(GradientCheckReport {
            function: self.name(),
            analytic,
            numeric,
            abs_deviation,
            rel_deviation,
            max_deviation,
            tol,
            passed: max_deviation <= tol,
        })
    }
}

/// Analytic vs central-difference comparison. Relative deviations use the
/// scale `max(1, |analytic|, |numeric|)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradientCheckReport {
    pub function: &'static str,
    pub analytic: Vec<f64>,
    pub numeric: Vec<f64>,
    pub abs_deviation: Vec<f64>,
    pub rel_deviation: Vec<f64>,
    pub max_deviation: f64,
    pub tol: f64,
    pub passed: bool,
}

fn param_error(function: &str, name: &str, reason: &str) -> Error {
    Error::InvalidParameter {
        function: function.to_string(),
        name: name.to_string(),
        reason: reason.to_string(),
    }
}

impl TryFrom<FunctionSpec> for ConvexFunction {
    type Error = Error;

    fn try_from(spec: FunctionSpec) -> Result<Self> {
        let name = spec.name.as_str();
        let expected: &[&str] = match name {
            "power_p" => &["p"],
            "neg_power_alpha" | "power_alpha" => &["alpha"],
            n if REGISTRY_NAMES.contains(&n) => &[],
            _ => return Err(Error::UnknownFunction(spec.name)),
        };
        if let Some(extra) = spec.params.keys().find(|k| !expected.contains(&k.as_str())) {
            return Err(param_error(name, extra, "unexpected parameter"));
        }
        let get = |key: &str| {
            spec.params
                .get(key)
                .copied()
                .ok_or_else(|| param_error(name, key, "missing"))
        };
        match name {
            "neg_log" => Ok(Self::NegLog),
            "x_log_x" => Ok(Self::XLogX),
            "power_p" => Self::power_p(get("p")?),
            "neg_power_alpha" => Self::neg_power_alpha(get("alpha")?),
            "power_alpha" => Self::power_alpha(get("alpha")?),
            "squared_norm" => Ok(Self::SquaredNorm),
            "log_sum_exp" => Ok(Self::LogSumExp),
            _ => unreachable!(),
        }
    }
}

impl From<ConvexFunction> for FunctionSpec {
    fn from(f: ConvexFunction) -> Self {
        let spec = FunctionSpec::named(f.name());
        match f {
            ConvexFunction::PowerP { p } => spec.with_param("p", p),
            ConvexFunction::NegPowerAlpha { alpha } | ConvexFunction::PowerAlpha { alpha } => {
                spec.with_param("alpha", alpha)
            }
            _ => spec,
        }
    }
}

impl fmt::Display for ConvexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::PowerP { p } => write!(f, "power_p(p={p})"),
            Self::NegPowerAlpha { alpha } => write!(f, "neg_power_alpha(alpha={alpha})"),
            Self::PowerAlpha { alpha } => write!(f, "power_alpha(alpha={alpha})"),
            other => f.write_str(other.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn evaluate_examples() {
        assert_eq!(ConvexFunction::NegLog.evaluate(&[1.0]).unwrap(), 0.0);
        assert_eq!(
            ConvexFunction::SquaredNorm.evaluate(&[1.0, 2.0]).unwrap(),
            5.0
        );
        // 2 ln 2 at 30 digits
        assert_abs_diff_eq!(
            ConvexFunction::XLogX.evaluate(&[2.0]).unwrap(),
            1.386_294_361_119_890_6,
            epsilon = 1e-15
        );
    }

    #[test]
    fn evaluate_rejects_domain_violation() {
        let err = ConvexFunction::NegLog.evaluate(&[0.0]).unwrap_err();
        assert!(matches!(err, Error::Domain { coordinate: 0, .. }));
        let err = ConvexFunction::XLogX.evaluate(&[-1.0]).unwrap_err();
        assert!(matches!(err, Error::Domain { .. }));
        // scalar functions are one-dimensional
        assert!(matches!(
            ConvexFunction::NegLog.evaluate(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(ConvexFunction::LogSumExp
            .evaluate(&[1.0, f64::NAN])
            .is_err());
    }

    #[test]
    fn gradient_examples() {
        assert_eq!(
            ConvexFunction::SquaredNorm.gradient(&[1.0, 2.0]).unwrap(),
            vec![2.0, 4.0]
        );
        assert_eq!(ConvexFunction::NegLog.gradient(&[2.0]).unwrap(), vec![-0.5]);
        let cube = ConvexFunction::power_p(3.0).unwrap();
        assert_abs_diff_eq!(cube.gradient(&[2.0]).unwrap()[0], 12.0, epsilon = 1e-12);
        // independent central difference with step 1e-6
        let h = 1e-6;
        let fd = ((2.0f64 + h).powi(3) - (2.0f64 - h).powi(3)) / (2.0 * h);
        assert_abs_diff_eq!(cube.gradient(&[2.0]).unwrap()[0], fd, epsilon = 1e-6);
    }

    #[test]
    fn gradient_boundary_rules() {
        // finite derivative at 0 for x^p, p >= 1
        let sq = ConvexFunction::power_p(2.0).unwrap();
        assert_eq!(sq.gradient(&[0.0]).unwrap(), vec![0.0]);
        let half = ConvexFunction::neg_power_alpha(0.5).unwrap();
        assert_eq!(half.evaluate(&[0.0]).unwrap(), 0.0);
        assert!(matches!(half.gradient(&[0.0]), Err(Error::Domain { .. })));
        assert!(ConvexFunction::NegLog.gradient(&[0.0]).is_err());
    }

    #[test]
    fn softmax_gradient_sums_to_one() {
        let g = ConvexFunction::LogSumExp
            .gradient(&[1.0, -2.0, 0.5])
            .unwrap();
        assert_abs_diff_eq!(g.iter().sum::<f64>(), 1.0, epsilon = 1e-15);
        let v = ConvexFunction::LogSumExp.evaluate(&[700.0, 700.0]).unwrap();
        assert_abs_diff_eq!(v, 700.0 + 2f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn numeric_gradient_examples() {
        let g = ConvexFunction::SquaredNorm
            .numeric_gradient(&[1.0, 2.0], 1e-5)
            .unwrap();
        assert_abs_diff_eq!(g[0], 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(g[1], 4.0, epsilon = 1e-9);
        let g = ConvexFunction::NegLog
            .numeric_gradient(&[2.0], 1e-5)
            .unwrap();
        assert_abs_diff_eq!(g[0], -0.5, epsilon = 1e-8);
        let g = ConvexFunction::XLogX
            .numeric_gradient(&[1.0], 1e-5)
            .unwrap();
        assert_abs_diff_eq!(g[0], 1.0, epsilon = 1e-8);
    }

    #[test]
    fn numeric_gradient_rejects_bad_step_and_probes() {
        assert!(ConvexFunction::NegLog
            .numeric_gradient(&[1.0], 0.0)
            .is_err());
        assert!(ConvexFunction::NegLog
            .numeric_gradient(&[1.0], -1e-5)
            .is_err());
        assert!(matches!(
            ConvexFunction::NegLog.numeric_gradient(&[1e-8], 1e-5),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn gradient_check_examples() {
        let r = ConvexFunction::SquaredNorm
            .gradient_check(&[1.0, 2.0], 1e-5, 1e-6)
            .unwrap();
        assert!(r.passed);
        assert_eq!(r.abs_deviation.len(), 2);

        let f = ConvexFunction::neg_power_alpha(0.5).unwrap();
        let r = f.gradient_check(&[4.0], 1e-6, 1e-6).unwrap();
        assert!(r.passed);
        assert_abs_diff_eq!(r.analytic[0], -0.25, epsilon = 1e-15);

        assert!(matches!(
            ConvexFunction::NegLog.gradient_check(&[1e-8], 1e-5, 1e-6),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn gradient_check_flags_a_wrong_tolerance() {
        let r = ConvexFunction::XLogX
            .gradient_check(&[3.0], 1e-1, 1e-12)
            .unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn function_spec_round_trip_and_validation() {
        let f: ConvexFunction =
            serde_json::from_str(r#"{"name":"power_p","params":{"p":3}}"#).unwrap();
        assert_eq!(f, ConvexFunction::PowerP { p: 3.0 });
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"name":"power_p","params":{"p":3.0}}"#);
        let f: ConvexFunction = serde_json::from_str(r#"{"name":"neg_log"}"#).unwrap();
        assert_eq!(f, ConvexFunction::NegLog);

        let bad = |s: &str| serde_json::from_str::<ConvexFunction>(s).is_err();
        assert!(bad(r#"{"name":"cosh"}"#));
        assert!(bad(r#"{"name":"power_p","params":{"p":0.5}}"#));
        assert!(bad(r#"{"name":"power_p","params":{}}"#));
        assert!(bad(r#"{"name":"neg_power_alpha","params":{"alpha":1.5}}"#));
        assert!(bad(r#"{"name":"power_alpha","params":{"alpha":1.0}}"#));
        assert!(bad(r#"{"name":"neg_log","params":{"p":2}}"#));
    }

    #[test]
    fn interval_membership() {
        assert!(Interval::NONNEGATIVE.contains(0.0));
        assert!(!Interval::POSITIVE.contains(0.0));
        assert!(!Interval::REAL_LINE.contains(f64::INFINITY));
        assert_eq!(Interval::POSITIVE.to_string(), "(0, inf)");
    }
}
