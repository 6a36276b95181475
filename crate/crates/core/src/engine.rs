//! Jensen gap and its hierarchy of converse bounds.
//!
//! For a convex `f`, points `x_i` and weights `p_i` with total `P > 0`, the
//! chain computed here is
//!
//! ```text
//! gap = (1/P) Σ p_i f(x_i) - f(x̄)
//!     <= dg  = (1/P) Σ p_i <x_i, ∇f(x_i)> - <x̄, ḡ>
//!     <= cbs = sqrt(Var x) * sqrt(Var ∇f)
//!     <= box = ¼ ||φ - ψ|| ||M - m||
//! ```
//!
//! where `ψ <= x_i <= φ` and `m <= ∇f(x_i) <= M` coordinatewise. The middle
//! terms are evaluated in centered form, which is algebraically identical to
//! the raw-moment expressions above and does not cancel catastrophically.
//! [`pairwise_coupling`] is the independent double-sum route to `dg`.

use serde::{Deserialize, Serialize};

use crate::convex::ConvexFunction;
use crate::error::{Error, Result};
use crate::numeric::{self, Tolerance};

/// `k >= 1` points of common dimension `d >= 1` with nonnegative weights of
/// positive total.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSample")]
pub struct WeightedSample {
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

#[derive(Deserialize)]
struct RawSample {
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl TryFrom<RawSample> for WeightedSample {
    type Error = Error;
    fn try_from(raw: RawSample) -> Result<Self> {
        Self::new(raw.points, raw.weights)
    }
}

impl WeightedSample {
    pub fn new(points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidSample(
                "at least one point is required".into(),
            ));
        }
        if points.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                found: weights.len(),
                context: "one weight per point",
            });
        }
        let d = points[0].len();
        if d == 0 {
            return Err(Error::InvalidSample(
                "points need at least one coordinate".into(),
            ));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: p.len(),
                    context: "all points share one dimension",
                });
            }
            if let Some(j) = p.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidSample(format!(
                    "points[{i}][{j}] is not finite"
                )));
            }
        }
        validate_weights(&weights)?;
        Ok(Self { points, weights })
    }

    /// Scalar sample: one coordinate per point.
    pub fn scalar(values: &[f64], weights: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| vec![v]).collect(), weights.to_vec())
    }

    pub fn uniform(points: Vec<Vec<f64>>) -> Result<Self> {
        let k = points.len();
        Self::new(points, vec![1.0; k])
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn total(&self) -> f64 {
        numeric::sum(self.weights.iter().copied())
    }

    /// Weights divided by their total.
    pub fn normalized_weights(&self) -> Vec<f64> {
        let total = self.total();
        self.weights.iter().map(|w| w / total).collect()
    }

    pub fn mean_point(&self) -> Vec<f64> {
        weighted_mean(&self.points, &self.normalized_weights())
    }

    /// Same points, every weight multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(
            self.points.clone(),
            self.weights.iter().map(|w| w * c).collect(),
        )
    }
}

pub(crate) fn validate_weights(weights: &[f64]) -> Result<()> {
    if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::InvalidWeights(format!(
            "weights[{i}] = {} must be finite and nonnegative",
            weights[i]
        )));
    }
    if !(numeric::sum(weights.iter().copied()) > 0.0) {
        return Err(Error::InvalidWeights(
            "total weight must be positive".into(),
        ));
    }
    Ok(())
}

/// Coordinatewise lower/upper vectors. Used both for the box containing the
/// points (ψ, φ) and for the gradient bounds (m, M).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBounds")]
pub struct CoordinateBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

pub type BoxBounds = CoordinateBounds;
pub type GradientBounds = CoordinateBounds;

#[derive(Deserialize)]
struct RawBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl TryFrom<RawBounds> for CoordinateBounds {
    type Error = Error;
    fn try_from(raw: RawBounds) -> Result<Self> {
        Self::new(raw.lower, raw.upper)
    }
}

impl CoordinateBounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
                context: "lower and upper bounds",
            });
        }
        if lower.is_empty() {
            return Err(Error::InvalidBounds(
                "bounds need at least one coordinate".into(),
            ));
        }
        for (j, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::InvalidBounds(format!(
                    "coordinate {j} is not finite"
                )));
            }
            if lo > hi {
                return Err(Error::InvalidBounds(format!(
                    "coordinate {j}: lower {lo} exceeds upper {hi}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn scalar(lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower], vec![upper])
    }

    /// Tightest bounds containing every vector.
    pub fn enclosing(vectors: &[Vec<f64>]) -> Result<Self> {
        let first = vectors
            .first()
            .ok_or_else(|| Error::InvalidBounds("no vectors to enclose".into()))?;
        let mut lower = first.clone();
        let mut upper = first.clone();
        for v in &vectors[1..] {
            for j in 0..lower.len() {
                lower[j] = lower[j].min(v[j]);
                upper[j] = upper[j].max(v[j]);
            }
        }
        Self::new(lower, upper)
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// Euclidean length of `upper - lower`.
    pub fn diameter(&self) -> f64 {
        numeric::norm(&numeric::sub(&self.upper, &self.lower))
    }

    pub fn contains(&self, v: &[f64]) -> bool {
        v.len() == self.dim()
            && v.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    /// `<upper - v, v - lower>`, nonnegative whenever `v` lies inside.
    pub fn inner_margin(&self, v: &[f64]) -> f64 {
        self.upper
            .iter()
            .zip(&self.lower)
            .zip(v)
            .map(|((hi, lo), x)| (hi - x) * (x - lo))
            .sum()
    }
}

/// Weighted mean anchored at the first vector, `v_0 + Σ w_i (v_i - v_0)`,
/// so identical vectors average to themselves exactly.
fn weighted_mean(vectors: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    let anchor = &vectors[0];
    (0..anchor.len())
        .map(|j| {
            anchor[j] + numeric::sum(vectors.iter().zip(w).map(|(v, wi)| wi * (v[j] - anchor[j])))
        })
        .collect()
}

fn check_family(vectors: &[Vec<f64>], weights: &[f64]) -> Result<usize> {
    if vectors.is_empty() {
        return Err(Error::InvalidSample("empty sequence".into()));
    }
    if vectors.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: vectors.len(),
            found: weights.len(),
            context: "one weight per vector",
        });
    }
    let d = vectors[0].len();
    if let Some(v) = vectors.iter().find(|v| v.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: v.len(),
            context: "all vectors share one dimension",
        });
    }
    validate_weights(weights)?;
    Ok(d)
}

fn normalize(weights: &[f64]) -> Vec<f64> {
    let total = numeric::sum(weights.iter().copied());
    weights.iter().map(|w| w / total).collect()
}

/// `Σ w_i <u_i - ū, v_i - v̄>` with normalized weights.
fn centered_covariance(u: &[Vec<f64>], v: &[Vec<f64>], w: &[f64]) -> f64 {
    let u_bar = weighted_mean(u, w);
    let v_bar = weighted_mean(v, w);
    numeric::sum(u.iter().zip(v).zip(w).map(|((ui, vi), wi)| {
        let c: f64 = ui
            .iter()
            .zip(&u_bar)
            .zip(vi.iter().zip(&v_bar))
            .map(|((a, ab), (b, bb))| (a - ab) * (b - bb))
            .sum();
        wi * c
    }))
}

/// `(1/(2P²)) Σ_{i,j} w_i w_j <u_i - u_j, v_i - v_j>`, evaluated literally
/// as a double sum over `i < j`.
pub fn pairwise_coupling(u: &[Vec<f64>], v: &[Vec<f64>], w: &[f64]) -> Result<f64> {
    let d = check_family(u, w)?;
    let dv = check_family(v, w)?;
    if d != dv {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: dv,
            context: "paired sequences",
        });
    }
    let w = normalize(w);
    let k = u.len();
    let total = numeric::sum((0..k).map(|i| {
        let inner = numeric::sum((i + 1..k).map(|j| {
            let c: f64 = (0..d)
                .map(|c| (u[i][c] - u[j][c]) * (v[i][c] - v[j][c]))
                .sum();
            w[j] * c
        }));
        w[i] * inner
    }));
    Ok(total)
}

/// `(1/P) Σ w_i ||v_i||² - ||v̄||²`, computed in centered form.
pub fn weighted_variance(vs: &[Vec<f64>], w: &[f64]) -> Result<f64> {
    check_family(vs, w)?;
    Ok(centered_covariance(vs, vs, &normalize(w)))
}

fn gradients(f: &ConvexFunction, s: &WeightedSample) -> Result<Vec<Vec<f64>>> {
    s.points().iter().map(|x| f.gradient(x)).collect()
}

/// `Δ(f, x, p)`: weighted mean of `f` minus `f` at the weighted mean.
pub fn jensen_gap(f: &ConvexFunction, s: &WeightedSample) -> Result<f64> {
    let w = s.normalized_weights();
    let values = s
        .points()
        .iter()
        .map(|x| f.evaluate(x))
        .collect::<Result<Vec<_>>>()?;
    let at_mean = f.evaluate(&weighted_mean(s.points(), &w))?;
    Ok(numeric::sum(
        values.iter().zip(&w).map(|(v, wi)| wi * (v - at_mean)),
    ))
}

pub fn dragomir_goh_bound(f: &ConvexFunction, s: &WeightedSample) -> Result<f64> {
    let g = gradients(f, s)?;
    Ok(centered_covariance(s.points(), &g, &s.normalized_weights()))
}

pub fn cbs_bound(f: &ConvexFunction, s: &WeightedSample) -> Result<f64> {
    let g = gradients(f, s)?;
    let w = s.normalized_weights();
    Ok(cbs_from(s.points(), &g, &w))
}

fn cbs_from(points: &[Vec<f64>], grads: &[Vec<f64>], w: &[f64]) -> f64 {
    let vx = centered_covariance(points, points, w).max(0.0);
    let vg = centered_covariance(grads, grads, w).max(0.0);
    vx.sqrt() * vg.sqrt()
}

/// `¼ ||φ - ψ||²`, the largest weighted variance a sample inside the box
/// can have.
pub fn box_variance_bound(b: &BoxBounds) -> f64 {
    let d = b.diameter();
    0.25 * d * d
}

/// `¼ ||φ - ψ|| ||M - m||`.
pub fn converse_bound(b: &BoxBounds, g: &GradientBounds) -> Result<f64> {
    if b.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            found: g.dim(),
            context: "box and gradient bounds",
        });
    }
    Ok(0.25 * b.diameter() * g.diameter())
}

/// `¼ (M - m)(f'(M) - f'(m))` for scalar `f` and sample values in `[m, M]`.
pub fn scalar_converse_bound(f: &ConvexFunction, lower: f64, upper: f64) -> Result<f64> {
    f.check_dimension(1)?;
    if !(lower <= upper) {
        return Err(Error::InvalidEndpoints(format!(
            "lower endpoint {lower} exceeds upper endpoint {upper}"
        )));
    }
    let d_lo = f.gradient(&[lower])?[0];
    let d_hi = f.gradient(&[upper])?[0];
    Ok(0.25 * (upper - lower) * (d_hi - d_lo))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionMode {
    /// Every point in the box and every gradient within its bounds.
    Strict,
    /// Only the weighted sums of the inner margins are nonnegative.
    Generalized,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionVerdict {
    pub mode: ConditionMode,
    pub points_in_box: bool,
    pub gradients_in_bounds: bool,
    /// `(1/P) Σ p_i <φ - x_i, x_i - ψ>`.
    pub box_margin: f64,
    /// `(1/P) Σ p_i <M - ∇f(x_i), ∇f(x_i) - m>`.
    pub gradient_margin: f64,
    pub strict: bool,
    pub generalized: bool,
    /// Outcome for the requested mode.
    pub holds: bool,
}

pub fn check_conditions(
    s: &WeightedSample,
    f: &ConvexFunction,
    b: &BoxBounds,
    g: &GradientBounds,
    mode: ConditionMode,
    tol: Tolerance,
) -> Result<ConditionVerdict> {
    for (bounds, context) in [(b, "box bounds"), (g, "gradient bounds")] {
        if bounds.dim() != s.dim() {
            return Err(Error::DimensionMismatch {
                expected: s.dim(),
                found: bounds.dim(),
                context,
            });
        }
    }
    let grads = gradients(f, s)?;
    Ok(conditions_from(s, &grads, b, g, mode, tol))
}

fn conditions_from(
    s: &WeightedSample,
    grads: &[Vec<f64>],
    b: &BoxBounds,
    g: &GradientBounds,
    mode: ConditionMode,
    tol: Tolerance,
) -> ConditionVerdict {
    let w = s.normalized_weights();
    let points_in_box = s.points().iter().all(|x| b.contains(x));
    let gradients_in_bounds = grads.iter().all(|v| g.contains(v));
    let box_margin = numeric::sum(
        s.points()
            .iter()
            .zip(&w)
            .map(|(x, wi)| wi * b.inner_margin(x)),
    );
    let gradient_margin = numeric::sum(grads.iter().zip(&w).map(|(v, wi)| wi * g.inner_margin(v)));
    let strict = points_in_box && gradients_in_bounds;
    let generalized = tol.ge(box_margin, 0.0) && tol.ge(gradient_margin, 0.0);
    let holds = match mode {
        ConditionMode::Strict => strict,
        ConditionMode::Generalized => generalized,
    };
    ConditionVerdict {
        mode,
        points_in_box,
        gradients_in_bounds,
        box_margin,
        gradient_margin,
        strict,
        generalized,
        holds,
    }
}

/// Flat report of the bound hierarchy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundChainReport {
    pub gap: f64,
    pub dg_bound: f64,
    pub cbs_bound: f64,
    pub box_bound: f64,
    pub slack_gap_dg: f64,
    pub slack_dg_cbs: f64,
    pub slack_cbs_box: f64,
    /// Whether the box and gradient bounds satisfy the strict containment
    /// conditions.
    pub strict_conditions: bool,
    pub generalized_conditions: bool,
    /// `0 <= gap <= dg <= cbs <= box` within tolerance.
    pub valid: bool,
}

impl BoundChainReport {
    pub fn stages(&self) -> [(&'static str, f64, f64); 4] {
        [
            ("gap_nonnegative", 0.0, self.gap),
            ("gap_le_dg", self.gap, self.dg_bound),
            ("dg_le_cbs", self.dg_bound, self.cbs_bound),
            ("cbs_le_box", self.cbs_bound, self.box_bound),
        ]
    }
}

/// Computes every stage of the chain. Omitted bounds are replaced by the
/// tightest ones enclosing the points and their gradients.
pub fn bound_chain(
    f: &ConvexFunction,
    s: &WeightedSample,
    b: Option<&BoxBounds>,
    g: Option<&GradientBounds>,
    tol: Tolerance,
) -> Result<BoundChainReport> {
    let grads = gradients(f, s)?;
    let w = s.normalized_weights();
    let derived_box;
    let b = match b {
        Some(b) => b,
        None => {
            derived_box = CoordinateBounds::enclosing(s.points())?;
            &derived_box
        }
    };
    let derived_grad;
    let g = match g {
        Some(g) => g,
        None => {
            derived_grad = CoordinateBounds::enclosing(&grads)?;
            &derived_grad
        }
    };
    for (bounds, context) in [(b, "box bounds"), (g, "gradient bounds")] {
        if bounds.dim() != s.dim() {
            return Err(Error::DimensionMismatch {
                expected: s.dim(),
                found: bounds.dim(),
                context,
            });
        }
    }

    let gap = jensen_gap(f, s)?;
    let dg_bound = centered_covariance(s.points(), &grads, &w);
    let cbs_bound = cbs_from(s.points(), &grads, &w);
    let box_bound = converse_bound(b, g)?;
    let conditions = conditions_from(s, &grads, b, g, ConditionMode::Generalized, tol);

    let mut report = BoundChainReport {
        gap,
        dg_bound,
        cbs_bound,
        box_bound,
        slack_gap_dg: dg_bound - gap,
        slack_dg_cbs: cbs_bound - dg_bound,
        slack_cbs_box: box_bound - cbs_bound,
        strict_conditions: conditions.strict,
        generalized_conditions: conditions.generalized,
        valid: false,
    };
    report.valid = report.stages().iter().all(|&(_, lo, hi)| tol.le(lo, hi));
    Ok(report)
}
