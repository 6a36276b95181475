//! Summation, vector helpers and the tolerance policy shared by every check.

use serde::{Deserialize, Serialize};

/// Above this many terms, sums switch to Neumaier compensated summation.
pub const COMPENSATION_THRESHOLD: usize = 1000;

/// Comparison tolerance: a violation `v` is accepted when
/// `v <= rel * max(1, |lhs|, |rhs|) + abs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-9,
            abs: 1e-12,
        }
    }
}

impl Tolerance {
    pub const fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs }
    }

    pub fn allowance(&self, lhs: f64, rhs: f64) -> f64 {
        self.rel * 1f64.max(lhs.abs()).max(rhs.abs()) + self.abs
    }

    /// `lhs <= rhs` up to the allowance.
    pub fn le(&self, lhs: f64, rhs: f64) -> bool {
        lhs - rhs <= self.allowance(lhs, rhs)
    }

    pub fn ge(&self, lhs: f64, rhs: f64) -> bool {
        self.le(rhs, lhs)
    }

    pub fn eq(&self, lhs: f64, rhs: f64) -> bool {
        (lhs - rhs).abs() <= self.allowance(lhs, rhs)
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    correction: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.correction += (self.sum - t) + value;
        } else {
            self.correction += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.correction
    }
}

/// Sums in index order; compensated once the term count exceeds
/// [`COMPENSATION_THRESHOLD`].
pub fn sum<I>(terms: I) -> f64
where
    I: IntoIterator<Item = f64>,
    I::IntoIter: ExactSizeIterator,
{
    let iter = terms.into_iter();
    if iter.len() > COMPENSATION_THRESHOLD {
        let mut acc = CompensatedSum::default();
        iter.for_each(|t| acc.add(t));
        acc.total()
    } else {
        iter.fold(0.0, |acc, t| acc + t)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Relative slack `(upper - lower) / max(1, |lower|, |upper|)`.
pub fn relative_slack(lower: f64, upper: f64) -> f64 {
    (upper - lower) / 1f64.max(lower.abs()).max(upper.abs())
}
