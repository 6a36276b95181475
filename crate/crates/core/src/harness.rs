//! Seeded random verification of every bound, identity and certificate.
//!
//! Randomness is counter-based: instance `i` of kind `k` draws from a ChaCha
//! stream keyed by `(seed, i, k)`, so an instance never depends on which
//! other instances ran or in what order. Trials run in parallel and merge
//! into a report that is identical for identical configurations.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_bounds;
use crate::convex::{Arity, ConvexFunction, FunctionSpec, DEFAULT_FD_STEP, REGISTRY_NAMES};
use crate::engine::{self, CoordinateBounds, WeightedSample};
use crate::error::{Error, Result};
use crate::info::{self, DiscreteDistribution, RenyiOrder};
use crate::means::{self, PositiveSample};
use crate::numeric::{relative_slack, Tolerance};

/// Smallest probability produced by the distribution sampler before
/// renormalization.
pub const PROBABILITY_FLOOR: f64 = 1e-6;

/// Tolerances for each family of checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyTolerances {
    /// Inequalities: chain stages, certificates.
    pub inequality: Tolerance,
    /// Algebraic identities computed along two routes.
    pub identity: Tolerance,
    /// Outputs that must not move under weight scaling or permutation.
    pub invariance: Tolerance,
    /// Maximum relative deviation between analytic and numeric gradients.
    pub gradient: f64,
    /// Maximum `|H_(1±δ) - H|` for `δ = 1e-4`.
    pub order_continuity: f64,
}

impl Default for VerifyTolerances {
    fn default() -> Self {
        Self {
            inequality: Tolerance::new(1e-9, 1e-12),
            identity: Tolerance::new(1e-10, 1e-12),
            invariance: Tolerance::new(1e-12, 0.0),
            gradient: 1e-6,
            order_continuity: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Instances per check; chain and gradient checks run this many per
    /// registry function.
    pub trials: usize,
    pub max_dim: usize,
    pub min_points: usize,
    pub max_points: usize,
    /// Registry names to exercise.
    pub functions: Vec<String>,
    /// Per-function coordinate sampling interval overriding the defaults.
    pub value_boxes: BTreeMap<String, [f64; 2]>,
    pub max_outcomes: usize,
    pub max_values: usize,
    pub tolerances: VerifyTolerances,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            trials: 1000,
            max_dim: 5,
            min_points: 2,
            max_points: 20,
            functions: REGISTRY_NAMES.iter().map(|s| s.to_string()).collect(),
            value_boxes: BTreeMap::new(),
            max_outcomes: 100,
            max_values: 50,
            tolerances: VerifyTolerances::default(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.max_dim == 0 {
            return Err(Error::Config("max_dim must be at least 1".into()));
        }
        if self.min_points == 0 || self.min_points > self.max_points {
            return Err(Error::Config(format!(
                "point range [{}, {}] is empty",
                self.min_points, self.max_points
            )));
        }
        if self.max_outcomes < 2 || self.max_values == 0 {
            return Err(Error::Config(
                "max_outcomes must be >= 2 and max_values >= 1".into(),
            ));
        }
        if self.functions.is_empty() {
            return Err(Error::Config("function set is empty".into()));
        }
        for name in &self.functions {
            if !REGISTRY_NAMES.contains(&name.as_str()) {
                return Err(Error::UnknownFunction(name.clone()));
            }
            let [lo, hi] = self.value_box(name);
            // any parameter of the family; the gradient domain is per family
            let domain = family_representative(name).gradient_domain();
            if !(lo <= hi && domain.contains(lo) && domain.contains(hi)) {
                return Err(Error::Config(format!(
                    "value box [{lo}, {hi}] for {name} must lie inside {domain}"
                )));
            }
        }
        for name in self.value_boxes.keys() {
            if !REGISTRY_NAMES.contains(&name.as_str()) {
                return Err(Error::UnknownFunction(name.clone()));
            }
        }
        Ok(())
    }

    pub fn value_box(&self, name: &str) -> [f64; 2] {
        if let Some(b) = self.value_boxes.get(name) {
            return *b;
        }
        match name {
            "squared_norm" => [-10.0, 10.0],
            "log_sum_exp" => [-5.0, 5.0],
            _ => [0.1, 10.0],
        }
    }
}

fn family_representative(name: &str) -> ConvexFunction {
    match name {
        "neg_log" => ConvexFunction::NegLog,
        "x_log_x" => ConvexFunction::XLogX,
        "power_p" => ConvexFunction::PowerP { p: 2.0 },
        "neg_power_alpha" => ConvexFunction::NegPowerAlpha { alpha: 0.5 },
        "power_alpha" => ConvexFunction::PowerAlpha { alpha: 2.0 },
        "squared_norm" => ConvexFunction::SquaredNorm,
        _ => ConvexFunction::LogSumExp,
    }
}

#[derive(Debug, Clone, Copy)]
enum Stream {
    Chain = 0,
    Gradient = 1,
    Distribution = 2,
    Means = 3,
    LogMean = 4,
}

fn rng_for(seed: u64, index: usize, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((index as u64) << 3) | stream as u64);
    rng
}

/// A self-contained test case; failure records embed one for replay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    Chain {
        function: ConvexFunction,
        sample: WeightedSample,
    },
    Gradient {
        function: ConvexFunction,
        point: Vec<f64>,
    },
    Distribution {
        distribution: DiscreteDistribution,
        alpha: RenyiOrder,
    },
    Means {
        sample: PositiveSample,
        exponent: f64,
    },
    LogMean {
        a: f64,
        b: f64,
    },
}

fn sample_function(name: &str, rng: &mut ChaCha8Rng) -> Result<ConvexFunction> {
    let spec = FunctionSpec::named(name);
    let spec = match name {
        "power_p" => {
            let p = if rng.random_bool(0.1) {
                1.0
            } else {
                rng.random_range(1.0..=4.0)
            };
            spec.with_param("p", p)
        }
        "neg_power_alpha" => spec.with_param("alpha", rng.random_range(0.05..=0.95)),
        "power_alpha" => spec.with_param("alpha", rng.random_range(1.05..=4.0)),
        _ => spec,
    };
    ConvexFunction::try_from(spec)
}

fn sample_weights(k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut w: Vec<f64> = (0..k)
        .map(|_| {
            if rng.random_bool(0.1) {
                0.0
            } else {
                1.0 - rng.random::<f64>()
            }
        })
        .collect();
    if w.iter().all(|&x| x == 0.0) {
        w[0] = 1.0;
    }
    // unnormalized totals spanning six orders of magnitude
    let scale = 10f64.powf(rng.random_range(-3.0..=3.0));
    w.iter_mut().for_each(|x| *x *= scale);
    w
}

/// Chain instance `index`: the function is `functions[index % |functions|]`,
/// so `trials * |functions|` indices give every function `trials` instances.
pub fn generate_instance(c: &SuiteConfig, index: usize) -> Result<Instance> {
    if c.functions.is_empty() {
        return Err(Error::Config("function set is empty".into()));
    }
    let name = &c.functions[index % c.functions.len()];
    let mut rng = rng_for(c.seed, index, Stream::Chain);
    let function = sample_function(name, &mut rng)?;
    let d = match function.arity() {
        Arity::Scalar => 1,
        Arity::Multivariate => rng.random_range(1..=c.max_dim),
    };
    let k = rng.random_range(c.min_points..=c.max_points);
    let [lo, hi] = c.value_box(name);
    let draw =
        |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..d).map(|_| rng.random_range(lo..=hi)).collect() };
    let points: Vec<Vec<f64>> = if rng.random_bool(0.05) {
        vec![draw(&mut rng); k]
    } else {
        (0..k).map(|_| draw(&mut rng)).collect()
    };
    let weights = sample_weights(k, &mut rng);
    Ok(Instance::Chain {
        function,
        sample: WeightedSample::new(points, weights)?,
    })
}

/// Gradient-check instance for `functions[index % |functions|]`.
pub fn generate_gradient_instance(c: &SuiteConfig, index: usize) -> Result<Instance> {
    if c.functions.is_empty() {
        return Err(Error::Config("function set is empty".into()));
    }
    let name = &c.functions[index % c.functions.len()];
    let mut rng = rng_for(c.seed, index, Stream::Gradient);
    let function = sample_function(name, &mut rng)?;
    let d = match function.arity() {
        Arity::Scalar => 1,
        Arity::Multivariate => rng.random_range(1..=c.max_dim),
    };
    let [lo, hi] = c.value_box(name);
    let point = (0..d).map(|_| rng.random_range(lo..=hi)).collect();
    Ok(Instance::Gradient { function, point })
}

/// Flat Dirichlet draw, floored at [`PROBABILITY_FLOOR`] and renormalized.
/// One in ten draws is exactly uniform.
pub fn generate_distribution(c: &SuiteConfig, index: usize) -> Result<Instance> {
    let mut rng = rng_for(c.seed, index, Stream::Distribution);
    let n = rng.random_range(2..=c.max_outcomes);
    let probs = if rng.random_bool(0.1) {
        vec![1.0 / n as f64; n]
    } else {
        let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let total: f64 = raw.iter().sum();
        let floored: Vec<f64> = raw
            .iter()
            .map(|x| (x / total).max(PROBABILITY_FLOOR))
            .collect();
        let total: f64 = floored.iter().sum();
        floored.iter().map(|x| x / total).collect()
    };
    let alpha = if rng.random_bool(0.5) {
        rng.random_range(0.05..=0.95)
    } else {
        rng.random_range(1.05..=5.0)
    };
    Ok(Instance::Distribution {
        distribution: DiscreteDistribution::new(probs)?,
        alpha: RenyiOrder::new(alpha)?,
    })
}

/// Values log-uniform in `[1e-3, 1e3]` with flat Dirichlet weights.
pub fn generate_means_instance(c: &SuiteConfig, index: usize) -> Result<Instance> {
    let mut rng = rng_for(c.seed, index, Stream::Means);
    let n = rng.random_range(1..=c.max_values);
    let values: Vec<f64> = if rng.random_bool(0.1) {
        vec![10f64.powf(rng.random_range(-3.0..=3.0)); n]
    } else {
        (0..n)
            .map(|_| 10f64.powf(rng.random_range(-3.0..=3.0)))
            .collect()
    };
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.iter().map(|x| x / total).collect();
    let exponent = rng.random_range(1.0..=4.0);
    Ok(Instance::Means {
        sample: PositiveSample::new(values, weights)?,
        exponent,
    })
}

pub fn generate_log_mean_instance(c: &SuiteConfig, index: usize) -> Instance {
    let mut rng = rng_for(c.seed, index, Stream::LogMean);
    let a = 10f64.powf(rng.random_range(-6.0..=6.0));
    let b = match rng.random_range(0..4) {
        0 => a,
        1 => a * (1.0 + rng.random_range(-1e-6..=1e-6)),
        _ => 10f64.powf(rng.random_range(-6.0..=6.0)),
    };
    Instance::LogMean { a, b }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `lhs <= rhs`.
    AtMost,
    /// `lhs == rhs`.
    Equal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub kind: CheckKind,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs` for inequalities, `-|lhs - rhs|` for identities.
    pub slack: f64,
    pub relative_slack: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn at_most(name: impl Into<String>, lhs: f64, rhs: f64, tol: Tolerance) -> Self {
        Self {
            name: name.into(),
            kind: CheckKind::AtMost,
            lhs,
            rhs,
            slack: rhs - lhs,
            relative_slack: relative_slack(lhs, rhs),
            passed: tol.le(lhs, rhs),
        }
    }

    fn equal(name: impl Into<String>, lhs: f64, rhs: f64, tol: Tolerance) -> Self {
        let gap = (lhs - rhs).abs();
        Self {
            name: name.into(),
            kind: CheckKind::Equal,
            lhs,
            rhs,
            slack: -gap,
            relative_slack: -gap / 1f64.max(lhs.abs()).max(rhs.abs()),
            // overflowed bounds compare equal as infinities
            passed: lhs == rhs || tol.eq(lhs, rhs),
        }
    }

    fn holds(name: impl Into<String>, ok: bool) -> Self {
        let flag = if ok { 1.0 } else { 0.0 };
        Self {
            name: name.into(),
            kind: CheckKind::Equal,
            lhs: flag,
            rhs: 1.0,
            slack: flag - 1.0,
            relative_slack: flag - 1.0,
            passed: ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
}

impl Verdict {
    fn from_checks(checks: Vec<CheckOutcome>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Self { checks, passed }
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn push_invariance(
    checks: &mut Vec<CheckOutcome>,
    prefix: &str,
    base: &[(&str, f64)],
    other: &[(&str, f64)],
    tol: Tolerance,
) {
    for ((name, a), (_, b)) in base.iter().zip(other) {
        checks.push(CheckOutcome::equal(format!("{prefix}.{name}"), *a, *b, tol));
    }
}

fn chain_values(r: &engine::BoundChainReport) -> [(&'static str, f64); 4] {
    [
        ("gap", r.gap),
        ("dg_bound", r.dg_bound),
        ("cbs_bound", r.cbs_bound),
        ("box_bound", r.box_bound),
    ]
}

/// Checks the bound chain, the pairwise identities, the variance bound and
/// the containment conditions on one sample, plus invariance of every chain
/// value under weight scaling and reversal of the sample order.
pub fn verify_instance(
    f: &ConvexFunction,
    s: &WeightedSample,
    tol: &VerifyTolerances,
) -> Result<Verdict> {
    let chain = engine::bound_chain(f, s, None, None, tol.inequality)?;
    let mut checks: Vec<CheckOutcome> = chain
        .stages()
        .iter()
        .map(|&(name, lo, hi)| CheckOutcome::at_most(name, lo, hi, tol.inequality))
        .collect();

    let grads: Vec<Vec<f64>> = s
        .points()
        .iter()
        .map(|x| f.gradient(x))
        .collect::<Result<_>>()?;
    let coupling = engine::pairwise_coupling(s.points(), &grads, s.weights())?;
    checks.push(CheckOutcome::equal(
        "dg_equals_pairwise",
        chain.dg_bound,
        coupling,
        tol.identity,
    ));
    let variance = engine::weighted_variance(s.points(), s.weights())?;
    let pairwise_variance = engine::pairwise_coupling(s.points(), s.points(), s.weights())?;
    checks.push(CheckOutcome::equal(
        "variance_equals_pairwise",
        variance,
        pairwise_variance,
        tol.identity,
    ));
    let point_box = CoordinateBounds::enclosing(s.points())?;
    let grad_box = CoordinateBounds::enclosing(&grads)?;
    checks.push(CheckOutcome::at_most(
        "variance_le_box",
        variance,
        engine::box_variance_bound(&point_box),
        tol.inequality,
    ));
    checks.push(CheckOutcome::at_most(
        "gradient_variance_le_box",
        engine::weighted_variance(&grads, s.weights())?,
        engine::box_variance_bound(&grad_box),
        tol.inequality,
    ));
    let cond = engine::check_conditions(
        s,
        f,
        &point_box,
        &grad_box,
        engine::ConditionMode::Strict,
        tol.inequality,
    )?;
    checks.push(CheckOutcome::holds("strict_conditions", cond.strict));
    checks.push(CheckOutcome::holds(
        "strict_implies_generalized",
        !cond.strict || cond.generalized,
    ));

    checks.push(midpoint_convexity(f, s.points(), tol.inequality)?);

    let base = chain_values(&chain);
    let scaled = engine::bound_chain(f, &s.scaled(3.7)?, None, None, tol.inequality)?;
    push_invariance(
        &mut checks,
        "weight_scale",
        &base,
        &chain_values(&scaled),
        tol.invariance,
    );
    let reversed = WeightedSample::new(
        s.points().iter().rev().cloned().collect(),
        s.weights().iter().rev().copied().collect(),
    )?;
    let permuted = engine::bound_chain(f, &reversed, None, None, tol.inequality)?;
    push_invariance(
        &mut checks,
        "permutation",
        &base,
        &chain_values(&permuted),
        tol.invariance,
    );

    Ok(Verdict::from_checks(checks))
}

/// `f((x+y)/2) <= (f(x) + f(y))/2` over consecutive point pairs; reports the
/// pair with the smallest relative slack.
fn midpoint_convexity(
    f: &ConvexFunction,
    points: &[Vec<f64>],
    tol: Tolerance,
) -> Result<CheckOutcome> {
    let mut worst: Option<CheckOutcome> = None;
    for pair in points.windows(2) {
        let mid: Vec<f64> = pair[0]
            .iter()
            .zip(&pair[1])
            .map(|(a, b)| 0.5 * (a + b))
            .collect();
        let chord = 0.5 * (f.evaluate(&pair[0])? + f.evaluate(&pair[1])?);
        let c = CheckOutcome::at_most("midpoint_convexity", f.evaluate(&mid)?, chord, tol);
        if worst
            .as_ref()
            .is_none_or(|w| c.relative_slack < w.relative_slack)
        {
            worst = Some(c);
        }
    }
    Ok(worst.unwrap_or_else(|| CheckOutcome::at_most("midpoint_convexity", 0.0, 0.0, tol)))
}

fn verify_gradient(f: &ConvexFunction, x: &[f64], tol: &VerifyTolerances) -> Result<Verdict> {
    let r = f.gradient_check(x, DEFAULT_FD_STEP, tol.gradient)?;
    Ok(Verdict::from_checks(vec![CheckOutcome::at_most(
        "gradient_matches_central_difference",
        r.max_deviation,
        tol.gradient,
        Tolerance::new(0.0, 0.0),
    )]))
}

fn certificate_checks(cert: &crate::Certificate, tol: Tolerance) -> Vec<CheckOutcome> {
    if let (Some(lhs), Some(bound)) = (cert.log_lhs, cert.log_bound) {
        return vec![
            CheckOutcome::at_most(format!("{}.lower", cert.name), 0.0, lhs, tol),
            CheckOutcome::at_most(format!("{}.upper", cert.name), lhs, bound, tol),
        ];
    }
    let mut out = vec![CheckOutcome::at_most(
        format!("{}.lower", cert.name),
        cert.lower_anchor,
        cert.lhs,
        tol,
    )];
    if let Some(b) = cert.bound {
        out.push(CheckOutcome::at_most(
            format!("{}.upper", cert.name),
            cert.lhs,
            b,
            tol,
        ));
    }
    if let Some(t) = cert.tight_bound {
        out.push(CheckOutcome::at_most(
            format!("{}.tight", cert.name),
            cert.lhs,
            t,
            tol,
        ));
    }
    if let (Some(b), Some(l)) = (cert.bound, cert.looser_bound) {
        out.push(CheckOutcome::at_most(
            format!("{}.looser", cert.name),
            b,
            l,
            tol,
        ));
    }
    out
}

fn cert_values(certs: &[crate::Certificate]) -> Vec<(String, f64)> {
    certs
        .iter()
        .flat_map(|c| {
            [
                Some((format!("{}.lhs", c.name), c.lhs)),
                c.bound.map(|b| (format!("{}.bound", c.name), b)),
                c.looser_bound
                    .map(|b| (format!("{}.looser_bound", c.name), b)),
                c.tight_bound
                    .map(|b| (format!("{}.tight_bound", c.name), b)),
                c.log_lhs.map(|b| (format!("{}.log_lhs", c.name), b)),
                c.log_bound.map(|b| (format!("{}.log_bound", c.name), b)),
            ]
        })
        .flatten()
        .collect()
}

fn push_named_invariance(
    checks: &mut Vec<CheckOutcome>,
    prefix: &str,
    base: &[(String, f64)],
    other: &[(String, f64)],
    tol: Tolerance,
) {
    for ((name, a), (_, b)) in base.iter().zip(other) {
        checks.push(CheckOutcome::equal(format!("{prefix}.{name}"), *a, *b, tol));
    }
}

fn distribution_certificates(
    d: &DiscreteDistribution,
    o: RenyiOrder,
    tol: Tolerance,
) -> Result<Vec<crate::Certificate>> {
    Ok(vec![
        info::entropy_pairwise_certificate(d, tol),
        info::entropy_spread_certificate(d, tol)?,
        info::entropy_log_spread_certificate(d, tol)?,
        info::renyi_order_gap(d, o, tol),
        info::renyi_spread_certificate(d, o, tol)?,
        info::renyi_geometric_certificate(d, o, tol)?,
        info::renyi_power_sum_certificate(d, o, tol)?,
        info::energy_certificate(d, o, tol)?,
    ])
}

fn verify_distribution(
    d: &DiscreteDistribution,
    o: RenyiOrder,
    tol: &VerifyTolerances,
) -> Result<Verdict> {
    let h = info::shannon_entropy(d);
    let ln_n = (d.len() as f64).ln();
    let mut checks = vec![
        CheckOutcome::at_most("entropy_nonnegative", 0.0, h, tol.inequality),
        CheckOutcome::at_most("entropy_le_ln_n", h, ln_n, tol.inequality),
    ];
    let certs = distribution_certificates(d, o, tol.inequality)?;
    for c in &certs {
        checks.extend(certificate_checks(c, tol.inequality));
    }
    let energy = info::informational_energy(d);
    let h2 = info::renyi_entropy(d, RenyiOrder::new(2.0)?);
    checks.push(CheckOutcome::equal(
        "energy_equals_exp_neg_renyi2",
        energy,
        (-h2).exp(),
        tol.invariance,
    ));
    for (label, alpha) in [("below", 1.0 - 1e-4), ("above", 1.0 + 1e-4)] {
        let near = info::renyi_entropy(d, RenyiOrder::new(alpha)?);
        checks.push(CheckOutcome::at_most(
            format!("order_continuity_{label}"),
            (near - h).abs(),
            tol.order_continuity,
            Tolerance::new(0.0, 0.0),
        ));
    }
    let reversed = DiscreteDistribution::new(d.probs().iter().rev().copied().collect())?;
    let mut base = cert_values(&certs);
    base.push(("shannon_entropy".into(), h));
    base.push(("renyi_entropy".into(), info::renyi_entropy(d, o)));
    base.push(("informational_energy".into(), energy));
    let mut other = cert_values(&distribution_certificates(&reversed, o, tol.inequality)?);
    other.push(("shannon_entropy".into(), info::shannon_entropy(&reversed)));
    other.push(("renyi_entropy".into(), info::renyi_entropy(&reversed, o)));
    other.push((
        "informational_energy".into(),
        info::informational_energy(&reversed),
    ));
    push_named_invariance(&mut checks, "permutation", &base, &other, tol.invariance);
    Ok(Verdict::from_checks(checks))
}

fn means_certificates(
    s: &PositiveSample,
    exponent: f64,
    tol: Tolerance,
) -> Result<Vec<crate::Certificate>> {
    Ok(vec![
        means::ag_certificate(s, tol)?,
        means::gh_certificate(s, tol)?,
        means::power_mean_certificate(s, exponent, tol)?,
        means::self_power_certificate(s, tol)?,
    ])
}

fn verify_means(s: &PositiveSample, exponent: f64, tol: &VerifyTolerances) -> Result<Verdict> {
    let m = means::weighted_means(s)?;
    let mut checks = vec![
        CheckOutcome::at_most(
            "geometric_le_arithmetic",
            m.geometric,
            m.arithmetic,
            tol.inequality,
        ),
        CheckOutcome::at_most(
            "harmonic_le_geometric",
            m.harmonic,
            m.geometric,
            tol.inequality,
        ),
    ];
    let certs = means_certificates(s, exponent, tol.inequality)?;
    for c in &certs {
        checks.extend(certificate_checks(c, tol.inequality));
    }
    let as_sample = WeightedSample::scalar(s.values(), s.weights())?;
    let gap = engine::jensen_gap(&ConvexFunction::NegLog, &as_sample)?;
    checks.push(CheckOutcome::equal(
        "log_ag_equals_neg_log_gap",
        certs[0].log_lhs.unwrap_or(f64::NAN),
        gap,
        tol.invariance,
    ));
    let reversed = PositiveSample::new(
        s.values().iter().rev().copied().collect(),
        s.weights().iter().rev().copied().collect(),
    )?;
    let base = cert_values(&certs);
    let other = cert_values(&means_certificates(&reversed, exponent, tol.inequality)?);
    push_named_invariance(&mut checks, "permutation", &base, &other, tol.invariance);
    Ok(Verdict::from_checks(checks))
}

fn verify_log_mean(a: f64, b: f64, tol: &VerifyTolerances) -> Result<Verdict> {
    let l = closed_bounds::logarithmic_mean(a, b)?;
    let g = (a * b).sqrt();
    let arith = 0.5 * (a + b);
    let checks = vec![
        CheckOutcome::at_most("geometric_le_logarithmic", g, l, tol.invariance),
        CheckOutcome::at_most("logarithmic_le_arithmetic", l, arith, tol.invariance),
        CheckOutcome::equal(
            "diagonal_exact",
            closed_bounds::logarithmic_mean(a, a)?,
            a,
            Tolerance::new(0.0, 0.0),
        ),
    ];
    Ok(Verdict::from_checks(checks))
}

/// Runs every check applicable to `instance`. Errors mean the instance
/// itself is invalid, not that a check failed.
pub fn verify(instance: &Instance, tol: &VerifyTolerances) -> Result<Verdict> {
    match instance {
        Instance::Chain { function, sample } => verify_instance(function, sample, tol),
        Instance::Gradient { function, point } => verify_gradient(function, point, tol),
        Instance::Distribution {
            distribution,
            alpha,
        } => verify_distribution(distribution, *alpha, tol),
        Instance::Means { sample, exponent } => verify_means(sample, *exponent, tol),
        Instance::LogMean { a, b } => verify_log_mean(*a, *b, tol),
    }
}

/// A failed check with everything needed to re-run it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    /// Group the instance belongs to, e.g. `chain/neg_log`.
    pub group: String,
    /// Failed check name, or `instance_invalid`.
    pub check: String,
    pub index: usize,
    pub instance: Instance,
    pub tolerances: VerifyTolerances,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckCounts {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    /// Per `group` (e.g. `chain/neg_log`, `distribution`), instances whose
    /// checks all passed vs. instances with at least one failure.
    pub groups: BTreeMap<String, CheckCounts>,
    /// Per `group/check`, pass/fail counts; each sums to the group's
    /// instance count.
    pub checks: BTreeMap<String, CheckCounts>,
    /// Smallest relative slack observed per chain stage.
    pub worst_relative_slack: BTreeMap<String, f64>,
    pub invalid_instances: usize,
    pub failures: Vec<FailureRecord>,
}

impl SuiteReport {
    pub fn failure_count(&self) -> usize {
        self.failures.len()
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Default)]
struct Partial {
    groups: BTreeMap<String, CheckCounts>,
    checks: BTreeMap<String, CheckCounts>,
    worst: BTreeMap<String, f64>,
    invalid: usize,
    failures: Vec<FailureRecord>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        for (k, v) in other.groups {
            let e = self.groups.entry(k).or_default();
            e.passed += v.passed;
            e.failed += v.failed;
        }
        for (k, v) in other.checks {
            let e = self.checks.entry(k).or_default();
            e.passed += v.passed;
            e.failed += v.failed;
        }
        for (k, v) in other.worst {
            self.worst
                .entry(k)
                .and_modify(|w| *w = w.min(v))
                .or_insert(v);
        }
        self.invalid += other.invalid;
        self.failures.extend(other.failures);
        self
    }

    fn record(
        &mut self,
        group: String,
        index: usize,
        instance: Result<Instance>,
        tol: &VerifyTolerances,
    ) {
        let instance = match instance {
            Ok(i) => i,
            Err(e) => {
                // generator bug: nothing to replay
                self.invalid += 1;
                self.groups.entry(group.clone()).or_default().failed += 1;
                self.failures.push(FailureRecord {
                    group,
                    check: "instance_invalid".into(),
                    index,
                    instance: Instance::LogMean {
                        a: f64::NAN,
                        b: f64::NAN,
                    },
                    tolerances: *tol,
                    detail: e.to_string(),
                });
                return;
            }
        };
        let verdict = match verify(&instance, tol) {
            Ok(v) => v,
            Err(e) => {
                self.invalid += 1;
                self.groups.entry(group.clone()).or_default().failed += 1;
                self.failures.push(FailureRecord {
                    group,
                    check: "instance_invalid".into(),
                    index,
                    instance,
                    tolerances: *tol,
                    detail: e.to_string(),
                });
                return;
            }
        };
        let entry = self.groups.entry(group.clone()).or_default();
        if verdict.passed {
            entry.passed += 1;
        } else {
            entry.failed += 1;
        }
        for c in &verdict.checks {
            let counts = self
                .checks
                .entry(format!("{group}/{}", c.name))
                .or_default();
            if c.passed {
                counts.passed += 1;
            } else {
                counts.failed += 1;
                self.failures.push(FailureRecord {
                    group: group.clone(),
                    check: c.name.clone(),
                    index,
                    instance: instance.clone(),
                    tolerances: *tol,
                    detail: format!("lhs {:e} vs rhs {:e} (slack {:e})", c.lhs, c.rhs, c.slack),
                });
            }
            if matches!(instance, Instance::Chain { .. })
                && matches!(
                    c.name.as_str(),
                    "gap_nonnegative" | "gap_le_dg" | "dg_le_cbs" | "cbs_le_box"
                )
            {
                self.worst
                    .entry(c.name.clone())
                    .and_modify(|w| *w = w.min(c.relative_slack))
                    .or_insert(c.relative_slack);
            }
        }
    }
}

/// Runs `trials` chain and gradient instances per function plus `trials`
/// distribution, means and logarithmic-mean instances.
pub fn run_suite(c: &SuiteConfig) -> Result<SuiteReport> {
    c.validate()?;
    let nf = c.functions.len();
    let tol = &c.tolerances;
    let chain_jobs = c.trials * nf;
    let total_jobs = 2 * chain_jobs + 3 * c.trials;

    let merged = (0..total_jobs)
        .into_par_iter()
        .fold(Partial::default, |mut acc, job| {
            if job < chain_jobs {
                let group = format!("chain/{}", c.functions[job % nf]);
                acc.record(group, job, generate_instance(c, job), tol);
            } else if job < 2 * chain_jobs {
                let index = job - chain_jobs;
                let group = format!("gradient/{}", c.functions[index % nf]);
                acc.record(group, index, generate_gradient_instance(c, index), tol);
            } else {
                let rest = job - 2 * chain_jobs;
                let index = rest % c.trials;
                match rest / c.trials {
                    0 => acc.record(
                        "distribution".into(),
                        index,
                        generate_distribution(c, index),
                        tol,
                    ),
                    1 => acc.record(
                        "means".into(),
                        index,
                        generate_means_instance(c, index),
                        tol,
                    ),
                    _ => acc.record(
                        "log_mean".into(),
                        index,
                        Ok(generate_log_mean_instance(c, index)),
                        tol,
                    ),
                }
            }
            acc
        })
        .reduce(Partial::default, Partial::merge);

    let mut failures = merged.failures;
    failures.sort_by(|a, b| {
        (a.group.as_str(), a.index, a.check.as_str()).cmp(&(
            b.group.as_str(),
            b.index,
            b.check.as_str(),
        ))
    });
    Ok(SuiteReport {
        config: c.clone(),
        groups: merged.groups,
        checks: merged.checks,
        worst_relative_slack: merged.worst,
        invalid_instances: merged.invalid,
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplayOutcome {
    pub group: String,
    pub check: String,
    /// The recorded check fails again.
    pub reproduced: bool,
    pub verdict: Option<Verdict>,
    pub error: Option<String>,
}

/// Re-verifies the instance embedded in a failure record under the
/// record's tolerances.
pub fn replay(record: &FailureRecord) -> ReplayOutcome {
    match verify(&record.instance, &record.tolerances) {
        Ok(verdict) => {
            let reproduced = verdict.check(&record.check).is_some_and(|c| !c.passed);
            ReplayOutcome {
                group: record.group.clone(),
                check: record.check.clone(),
                reproduced,
                verdict: Some(verdict),
                error: None,
            }
        }
        Err(e) => ReplayOutcome {
            group: record.group.clone(),
            check: record.check.clone(),
            reproduced: record.check == "instance_invalid",
            verdict: None,
            error: Some(e.to_string()),
        },
    }
}
