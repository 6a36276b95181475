//! Weighted arithmetic, geometric and harmonic means with their converse
//! certificates.
//!
//! Products are taken in log space: with `n = 50` values up to `1e3` the
//! naive product of powers overflows.

use serde::{Deserialize, Serialize};

use crate::certificate::Certificate;
use crate::closed_bounds::{self, Endpoints};
use crate::error::{Error, Result};
use crate::numeric::{self, Tolerance};

const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Values with a strictly positive probability vector of weights.
///
/// Values are strictly positive unless built with
/// [`allowing_zeros`](Self::allowing_zeros), which only the power-mean
/// certificate accepts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPositiveSample")]
pub struct PositiveSample {
    values: Vec<f64>,
    weights: Vec<f64>,
}

#[derive(Deserialize)]
struct RawPositiveSample {
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl TryFrom<RawPositiveSample> for PositiveSample {
    type Error = Error;
    fn try_from(raw: RawPositiveSample) -> Result<Self> {
        Self::new(raw.values, raw.weights)
    }
}

impl PositiveSample {
    pub fn new(values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let s = Self::allowing_zeros(values, weights)?;
        s.require_positive()?;
        Ok(s)
    }

    pub fn allowing_zeros(values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSample(
                "at least one value is required".into(),
            ));
        }
        if values.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: values.len(),
                found: weights.len(),
                context: "one weight per value",
            });
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidSample(format!(
                "values[{i}] = {} must be finite and nonnegative",
                values[i]
            )));
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidWeights(format!(
                "weights[{i}] = {} must be positive",
                weights[i]
            )));
        }
        let total = numeric::sum(weights.iter().copied());
        if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(Self { values, weights })
    }

    pub fn uniform(values: Vec<f64>) -> Result<Self> {
        let n = values.len() as f64;
        let weights = vec![1.0 / n; values.len()];
        Self::new(values, weights)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `[min value, max value]`.
    pub fn endpoints(&self) -> Endpoints {
        Endpoints::spanning(&self.values).expect("validated values")
    }

    fn require_positive(&self) -> Result<()> {
        match self.values.iter().position(|v| *v <= 0.0) {
            Some(i) => Err(Error::InvalidSample(format!(
                "values[{i}] = {} must be strictly positive",
                self.values[i]
            ))),
            None => Ok(()),
        }
    }

    fn require_within(&self, e: &Endpoints) -> Result<()> {
        match self.values.iter().position(|v| !e.contains(*v)) {
            Some(i) => Err(Error::InvalidEndpoints(format!(
                "values[{i}] = {} lies outside [{}, {}]",
                self.values[i],
                e.lower(),
                e.upper()
            ))),
            None => Ok(()),
        }
    }

    fn weighted_sum(&self, term: impl Fn(f64) -> f64) -> f64 {
        let total = numeric::sum(self.weights.iter().copied());
        numeric::sum(
            self.values
                .iter()
                .zip(&self.weights)
                .map(|(&x, &w)| w / total * term(x)),
        )
    }

    fn reciprocal(&self) -> Result<Self> {
        Self::new(
            self.values.iter().map(|v| 1.0 / v).collect(),
            self.weights.clone(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedMeans {
    pub arithmetic: f64,
    pub geometric: f64,
    pub harmonic: f64,
}

pub fn weighted_means(s: &PositiveSample) -> Result<WeightedMeans> {
    s.require_positive()?;
    Ok(WeightedMeans {
        arithmetic: s.weighted_sum(|x| x),
        geometric: s.weighted_sum(f64::ln).exp(),
        harmonic: 1.0 / s.weighted_sum(|x| 1.0 / x),
    })
}

/// `1 <= A/G <= exp((M - m)² / (4mM))` over the sample's own range.
pub fn ag_certificate(s: &PositiveSample, tol: Tolerance) -> Result<Certificate> {
    ag_certificate_within(s, &s.endpoints(), tol)
}

/// As [`ag_certificate`] with caller-supplied endpoints, which must contain
/// every value.
pub fn ag_certificate_within(
    s: &PositiveSample,
    e: &Endpoints,
    tol: Tolerance,
) -> Result<Certificate> {
    s.require_within(e)?;
    s.require_positive()?;
    let log_ratio = s.weighted_sum(|x| x).ln() - s.weighted_sum(f64::ln);
    let log_bound = closed_bounds::relative_spread_bound(e)?;
    Ok(
        Certificate::ratio("arithmetic_geometric", log_ratio, log_bound)
            .with_endpoints(*e)
            .judged(tol),
    )
}

/// `1 <= G/H <= exp((M - m)² / (4mM))`, obtained as the arithmetic-geometric
/// certificate of the reciprocal values.
pub fn gh_certificate(s: &PositiveSample, tol: Tolerance) -> Result<Certificate> {
    gh_certificate_within(s, &s.endpoints(), tol)
}

pub fn gh_certificate_within(
    s: &PositiveSample,
    e: &Endpoints,
    tol: Tolerance,
) -> Result<Certificate> {
    s.require_within(e)?;
    s.require_positive()?;
    let mut c = ag_certificate_within(&s.reciprocal()?, &e.reciprocal()?, tol)?;
    c.name = "geometric_harmonic".into();
    c.endpoints = Some(*e);
    Ok(c)
}

/// `0 <= Σ w x^p - (Σ w x)^p <= (p/4)(M - m)(M^(p-1) - m^(p-1))` for `p >= 1`.
/// Zero values are admitted here.
pub fn power_mean_certificate(s: &PositiveSample, p: f64, tol: Tolerance) -> Result<Certificate> {
    power_mean_certificate_within(s, p, &s.endpoints(), tol)
}

pub fn power_mean_certificate_within(
    s: &PositiveSample,
    p: f64,
    e: &Endpoints,
    tol: Tolerance,
) -> Result<Certificate> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidParameter {
            function: "power_mean_certificate".into(),
            name: "p".into(),
            reason: format!("{p} must be a finite number >= 1"),
        });
    }
    s.require_within(e)?;
    // Σ w x^p - A^p = A^p Σ w (t^p - 1 - p(t - 1)) with t = x/A; every
    // summand lies on or above the tangent at t = 1.
    let a = s.weighted_sum(|x| x);
    let lhs = if a > 0.0 {
        a.powf(p)
            * s.weighted_sum(|x| {
                let t = x / a;
                (p * t.ln()).exp_m1() - p * (t - 1.0)
            })
    } else {
        0.0
    };
    let bound = closed_bounds::power_gap_bound(p, e)?;
    Ok(Certificate::new("power_mean", lhs, 0.0, Some(bound))
        .with_endpoints(*e)
        .judged(tol))
}

/// `1 <= Π x^(w x) / A^A <= (M/m)^((M - m)/4)`, evaluated in log space.
pub fn self_power_certificate(s: &PositiveSample, tol: Tolerance) -> Result<Certificate> {
    self_power_certificate_within(s, &s.endpoints(), tol)
}

pub fn self_power_certificate_within(
    s: &PositiveSample,
    e: &Endpoints,
    tol: Tolerance,
) -> Result<Certificate> {
    s.require_positive()?;
    s.require_within(e)?;
    let a = s.weighted_sum(|x| x);
    // Σ w x ln x - A ln A = A Σ w (t ln t - t + 1) with t = x/A; the
    // summands are nonnegative, so nothing cancels.
    let log_ratio = a * s.weighted_sum(|x| {
        let t = x / a;
        t * t.ln() - (t - 1.0)
    });
    let (log_bound, _) = closed_bounds::log_spread_bounds(e)?;
    Ok(Certificate::ratio("self_power", log_ratio, log_bound)
        .with_endpoints(*e)
        .judged(tol))
}

/// Means plus all four certificates for one sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeansReport {
    pub means: WeightedMeans,
    pub certificates: Vec<Certificate>,
    pub valid: bool,
}

pub fn means_report(s: &PositiveSample, power: f64, tol: Tolerance) -> Result<MeansReport> {
    let means = weighted_means(s)?;
    let certificates = vec![
        ag_certificate(s, tol)?,
        gh_certificate(s, tol)?,
        power_mean_certificate(s, power, tol)?,
        self_power_certificate(s, tol)?,
    ];
    let valid = certificates.iter().all(|c| c.valid);
    Ok(MeansReport {
        means,
        certificates,
        valid,
    })
}
