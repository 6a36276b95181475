use serde::{Deserialize, Serialize};

use crate::closed_bounds::Endpoints;
use crate::numeric::Tolerance;

/// A computed `(lhs, bound)` pair realizing one inequality on concrete data.
///
/// `valid` holds when `lower_anchor <= lhs <= bound`, and when present
/// `lhs <= tight_bound` and `bound <= looser_bound`, all within tolerance.
/// One-sided certificates carry no `bound`.
///
/// Ratio certificates also carry `ln lhs` and `ln bound`. The ratios may
/// overflow to infinity for widely spread data, so these are judged in log
/// space against anchor 0 instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub lhs: f64,
    pub lower_anchor: f64,
    pub bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub looser_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tight_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoints: Option<Endpoints>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_lhs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_bound: Option<f64>,
    pub valid: bool,
}

impl Certificate {
    pub(crate) fn new(name: &str, lhs: f64, lower_anchor: f64, bound: Option<f64>) -> Self {
        Self {
            name: name.to_string(),
            lhs,
            lower_anchor,
            bound,
            looser_bound: None,
            tight_bound: None,
            endpoints: None,
            relation: None,
            log_lhs: None,
            log_bound: None,
            valid: false,
        }
    }

    pub(crate) fn with_endpoints(mut self, e: Endpoints) -> Self {
        self.endpoints = Some(e);
        self
    }

    pub(crate) fn with_looser_bound(mut self, b: f64) -> Self {
        self.looser_bound = Some(b);
        self
    }

    pub(crate) fn with_tight_bound(mut self, b: f64) -> Self {
        self.tight_bound = Some(b);
        self
    }

    pub(crate) fn with_relation(mut self, r: impl Into<String>) -> Self {
        self.relation = Some(r.into());
        self
    }

    /// Ratio certificate `1 <= exp(log_lhs) <= exp(log_bound)`.
    pub(crate) fn ratio(name: &str, log_lhs: f64, log_bound: f64) -> Self {
        let mut c = Self::new(name, log_lhs.exp(), 1.0, Some(log_bound.exp()));
        c.log_lhs = Some(log_lhs);
        c.log_bound = Some(log_bound);
        c
    }

    pub(crate) fn judged(mut self, tol: Tolerance) -> Self {
        self.valid = self.check(tol);
        self
    }

    /// Re-evaluates validity under `tol`.
    pub fn check(&self, tol: Tolerance) -> bool {
        if let (Some(lhs), Some(bound)) = (self.log_lhs, self.log_bound) {
            return lhs.is_finite() && bound.is_finite() && tol.ge(lhs, 0.0) && tol.le(lhs, bound);
        }
        let finite = self.lhs.is_finite() && self.bound.is_none_or(f64::is_finite);
        let anchored = tol.ge(self.lhs, self.lower_anchor);
        let bounded = self.bound.is_none_or(|b| tol.le(self.lhs, b));
        let tight = self.tight_bound.is_none_or(|t| tol.le(self.lhs, t));
        let ordered = match (self.bound, self.looser_bound) {
            (Some(b), Some(l)) => tol.le(b, l),
            _ => true,
        };
        finite && anchored && bounded && tight && ordered
    }
}
