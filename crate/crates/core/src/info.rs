//! Shannon and Rényi entropies, informational energy, and the converse
//! certificates relating them to `ln n` and to each other.
//!
//! Logarithms are natural throughout.

use serde::{Deserialize, Serialize};

use crate::certificate::Certificate;
use crate::closed_bounds::{self, Endpoints};
use crate::error::{Error, Result};
use crate::numeric::{self, Tolerance};

const SUM_TOLERANCE: f64 = 1e-9;

/// Strictly positive probabilities summing to one within `1e-9`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionInput")]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
}

/// Accepted serialized forms: `{ "probs": [...] }` or `{ "counts": [...] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DistributionInput {
    Probs { probs: Vec<f64> },
    Counts { counts: Vec<u64> },
}

impl DistributionInput {
    /// Builds the distribution, optionally dropping zero entries first (which
    /// changes `n`).
    pub fn into_distribution(self, strip_zeros: bool) -> Result<DiscreteDistribution> {
        match self {
            Self::Probs { probs } if strip_zeros => DiscreteDistribution::stripping_zeros(probs),
            Self::Probs { probs } => DiscreteDistribution::new(probs),
            Self::Counts { counts } => DiscreteDistribution::from_counts(&counts, strip_zeros),
        }
    }
}

impl TryFrom<DistributionInput> for DiscreteDistribution {
    type Error = Error;
    fn try_from(input: DistributionInput) -> Result<Self> {
        input.into_distribution(false)
    }
}

impl DiscreteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        if let Some(i) = probs.iter().position(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(Error::InvalidDistribution(format!(
                "probs[{i}] = {} must be strictly positive (zero entries can be stripped explicitly)",
                probs[i]
            )));
        }
        let total = numeric::sum(probs.iter().copied());
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n])
    }

    /// Normalizes nonnegative counts. Zero counts are rejected unless
    /// `strip_zeros` is set.
    pub fn from_counts(counts: &[u64], strip_zeros: bool) -> Result<Self> {
        let kept: Vec<u64> = if strip_zeros {
            counts.iter().copied().filter(|&c| c > 0).collect()
        } else {
            counts.to_vec()
        };
        if let Some(i) = kept.iter().position(|&c| c == 0) {
            return Err(Error::InvalidDistribution(format!(
                "counts[{i}] is zero (pass --strip-zeros to drop it)"
            )));
        }
        let total: f64 = kept.iter().map(|&c| c as f64).sum();
        if total == 0.0 {
            return Err(Error::InvalidDistribution("no positive counts".into()));
        }
        Self::new(kept.iter().map(|&c| c as f64 / total).collect())
    }

    /// Drops zero entries and renormalizes.
    pub fn stripping_zeros(probs: Vec<f64>) -> Result<Self> {
        if let Some(i) = probs.iter().position(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidDistribution(format!(
                "probs[{i}] = {} must be nonnegative",
                probs[i]
            )));
        }
        let kept: Vec<f64> = probs.into_iter().filter(|&p| p > 0.0).collect();
        let total = numeric::sum(kept.iter().copied());
        Self::new(kept.iter().map(|p| p / total).collect())
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn min_prob(&self) -> f64 {
        self.probs.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_prob(&self) -> f64 {
        self.probs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `[min p_i, max p_i]`.
    pub fn endpoints(&self) -> Endpoints {
        Endpoints::new(self.min_prob(), self.max_prob()).expect("validated probabilities")
    }

    fn power_sum(&self, exponent: f64) -> f64 {
        numeric::sum(self.probs.iter().map(|p| p.powf(exponent)))
    }

    /// `(1/n) Σ (n p)^α - 1`, written as `(1/n) Σ (t^α - 1 - α(t - 1))` with
    /// `t = n p` plus `α (Σ p - 1)`. The summands share the sign of `α - 1`.
    fn power_mean_excess(&self, alpha: f64) -> f64 {
        let n = self.len() as f64;
        let curvature = numeric::sum(self.probs.iter().map(|p| {
            let t = n * p;
            (alpha * t.ln()).exp_m1() - alpha * (t - 1.0)
        })) / n;
        curvature + alpha * (numeric::sum(self.probs.iter().copied()) - 1.0)
    }

    fn require_two_outcomes(&self) -> Result<()> {
        if self.len() < 2 {
            return Err(Error::InvalidDistribution(
                "certificate needs at least two outcomes".into(),
            ));
        }
        Ok(())
    }
}

/// Rényi order `α ∈ (0, 1) ∪ (1, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct RenyiOrder(f64);

impl RenyiOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) || alpha == 1.0 {
            return Err(Error::InvalidOrder(alpha));
        }
        Ok(Self(alpha))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn below_one(self) -> bool {
        self.0 < 1.0
    }
}

impl TryFrom<f64> for RenyiOrder {
    type Error = Error;
    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<RenyiOrder> for f64 {
    fn from(o: RenyiOrder) -> f64 {
        o.0
    }
}

/// `H(X) = -Σ p ln p`.
pub fn shannon_entropy(d: &DiscreteDistribution) -> f64 {
    -numeric::sum(d.probs.iter().map(|p| p * p.ln()))
}

/// `H_α(X) = ln(Σ p^α) / (1 - α)`.
pub fn renyi_entropy(d: &DiscreteDistribution, o: RenyiOrder) -> f64 {
    d.power_sum(o.0).ln() / (1.0 - o.0)
}

/// `E(X) = Σ p²`.
pub fn informational_energy(d: &DiscreteDistribution) -> f64 {
    d.power_sum(2.0)
}

/// `0 <= ln n - H <= Σ_{i<j} (p_i - p_j)²`.
pub fn entropy_pairwise_certificate(d: &DiscreteDistribution, tol: Tolerance) -> Certificate {
    let p = &d.probs;
    let bound = numeric::sum(
        (0..p.len()).map(|i| numeric::sum(p[i + 1..].iter().map(|q| (p[i] - q) * (p[i] - q)))),
    );
    Certificate::new("entropy_pairwise", entropy_deficit(d), 0.0, Some(bound)).judged(tol)
}

fn entropy_deficit(d: &DiscreteDistribution) -> f64 {
    (d.len() as f64).ln() - shannon_entropy(d)
}

/// `0 <= ln n - H <= (P - p)² / (4pP)`, obtained from the log-map bound on
/// the reciprocals `1/p_i ∈ [1/P, 1/p]`.
pub fn entropy_spread_certificate(d: &DiscreteDistribution, tol: Tolerance) -> Result<Certificate> {
    d.require_two_outcomes()?;
    let e = d.endpoints().reciprocal()?;
    let bound = closed_bounds::relative_spread_bound(&e)?;
    Ok(Certificate::new(
        "entropy_reciprocal_spread",
        entropy_deficit(d),
        0.0,
        Some(bound),
    )
    .with_endpoints(e)
    .judged(tol))
}

/// `0 <= ln n - H <= (n/4)(P - p) ln(P/p) <= (n/4)(P - p)² / sqrt(pP)`.
pub fn entropy_log_spread_certificate(
    d: &DiscreteDistribution,
    tol: Tolerance,
) -> Result<Certificate> {
    d.require_two_outcomes()?;
    let e = d.endpoints();
    let (log_form, root_form) = closed_bounds::log_spread_bounds(&e)?;
    let n = d.len() as f64;
    Ok(Certificate::new(
        "entropy_log_spread",
        entropy_deficit(d),
        0.0,
        Some(n * log_form),
    )
    .with_looser_bound(n * root_form)
    .with_endpoints(e)
    .judged(tol))
}

/// `(1 - α)(H_α - H) >= 0`, so `H_α <= H` below order one and `H_α >= H`
/// above it. One-sided: no upper bound.
pub fn renyi_order_gap(d: &DiscreteDistribution, o: RenyiOrder, tol: Tolerance) -> Certificate {
    let relation = if o.below_one() {
        "renyi_entropy <= shannon_entropy"
    } else {
        "renyi_entropy >= shannon_entropy"
    };
    Certificate::new("renyi_order_gap", order_gap(d, o), 0.0, None)
        .with_relation(relation)
        .judged(tol)
}

fn order_gap(d: &DiscreteDistribution, o: RenyiOrder) -> f64 {
    (1.0 - o.0) * (renyi_entropy(d, o) - shannon_entropy(d))
}

/// `(1 - α)(H_α - H) <= (M - m)² / (4mM)` over the endpoints
/// `{p^(α-1), P^(α-1)}` taken in increasing order.
pub fn renyi_spread_certificate(
    d: &DiscreteDistribution,
    o: RenyiOrder,
    tol: Tolerance,
) -> Result<Certificate> {
    d.require_two_outcomes()?;
    let exponent = o.0 - 1.0;
    let a = d.min_prob().powf(exponent);
    let b = d.max_prob().powf(exponent);
    let e = Endpoints::new(a.min(b), a.max(b))?;
    let bound = closed_bounds::relative_spread_bound(&e)?;
    Ok(
        Certificate::new("renyi_spread", order_gap(d, o), 0.0, Some(bound))
            .with_endpoints(e)
            .judged(tol),
    )
}

/// `0 <= (1 - α)H_α - ln n - α ln G(p) <= (n/4)(P^α - p^α)² / (p^α P^α)`
/// where `G(p)` is the unweighted geometric mean of the probabilities.
///
/// `tight_bound` carries the same expression with factor `1/4` instead of
/// `n/4`; it is what the underlying log-map bound on `ξ_i = n p_i^α` yields.
pub fn renyi_geometric_certificate(
    d: &DiscreteDistribution,
    o: RenyiOrder,
    tol: Tolerance,
) -> Result<Certificate> {
    d.require_two_outcomes()?;
    let alpha = o.0;
    let n = d.len() as f64;
    let ln_geometric = numeric::sum(d.probs.iter().map(|p| p.ln())) / n;
    let lhs = d.power_sum(alpha).ln() - n.ln() - alpha * ln_geometric;
    let e = Endpoints::new(d.min_prob().powf(alpha), d.max_prob().powf(alpha))?;
    let spread = e.upper() - e.lower();
    let core = spread * spread / (e.lower() * e.upper());
    Ok(
        Certificate::new("renyi_geometric", lhs, 0.0, Some(n / 4.0 * core))
            .with_tight_bound(core / 4.0)
            .with_endpoints(e)
            .judged(tol),
    )
}

/// `|n^(1-α) - Σ p^α| <= (α/4) n (P - p)|P^(α-1) - p^(α-1)|`, with the left
/// side oriented so it is nonnegative in both regimes.
pub fn renyi_power_sum_certificate(
    d: &DiscreteDistribution,
    o: RenyiOrder,
    tol: Tolerance,
) -> Result<Certificate> {
    d.require_two_outcomes()?;
    let alpha = o.0;
    let n = d.len() as f64;
    // Σ p^α - n^(1-α) = n^(1-α) (mean((np)^α) - 1), with the excess summed
    // from one-signed terms.
    let excess = n.powf(1.0 - alpha) * d.power_mean_excess(alpha);
    let (lhs, relation) = if o.below_one() {
        (-excess, "n^(1-alpha) >= exp((1-alpha) renyi_entropy)")
    } else {
        (excess, "exp((1-alpha) renyi_entropy) >= n^(1-alpha)")
    };
    let e = d.endpoints();
    let bound = n * closed_bounds::power_gap_bound(alpha, &e)?;
    Ok(Certificate::new("renyi_power_sum", lhs, 0.0, Some(bound))
        .with_endpoints(e)
        .with_relation(relation)
        .judged(tol))
}

/// `|E^α - Σ p^(α+1)| <= (α/4)(P - p)|P^(α-1) - p^(α-1)|`, with
/// `Σ p^(α+1) = exp(-α H_(α+1))`. Order `α + 1` is used in both regimes.
pub fn energy_certificate(
    d: &DiscreteDistribution,
    o: RenyiOrder,
    tol: Tolerance,
) -> Result<Certificate> {
    d.require_two_outcomes()?;
    let alpha = o.0;
    let energy_power = informational_energy(d).powf(alpha);
    let shifted = d.power_sum(alpha + 1.0);
    let (lhs, relation) = if o.below_one() {
        (
            energy_power - shifted,
            "E^alpha >= exp(-alpha renyi_entropy(alpha+1))",
        )
    } else {
        (
            shifted - energy_power,
            "exp(-alpha renyi_entropy(alpha+1)) >= E^alpha",
        )
    };
    let e = d.endpoints();
    let bound = closed_bounds::power_gap_bound(alpha, &e)?;
    Ok(
        Certificate::new("energy_renyi_shifted_order", lhs, 0.0, Some(bound))
            .with_endpoints(e)
            .with_relation(relation)
            .judged(tol),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub n: usize,
    pub shannon_entropy: f64,
    pub max_entropy: f64,
    pub certificates: Vec<Certificate>,
    pub valid: bool,
}

/// Shannon entropy with its three converse certificates. Single-outcome
/// distributions only get the pairwise one.
pub fn entropy_report(d: &DiscreteDistribution, tol: Tolerance) -> Result<EntropyReport> {
    let mut certificates = vec![entropy_pairwise_certificate(d, tol)];
    if d.len() >= 2 {
        certificates.push(entropy_spread_certificate(d, tol)?);
        certificates.push(entropy_log_spread_certificate(d, tol)?);
    }
    let valid = certificates.iter().all(|c| c.valid);
    Ok(EntropyReport {
        n: d.len(),
        shannon_entropy: shannon_entropy(d),
        max_entropy: (d.len() as f64).ln(),
        certificates,
        valid,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RenyiReport {
    pub n: usize,
    pub alpha: f64,
    pub renyi_entropy: f64,
    pub shannon_entropy: f64,
    pub informational_energy: f64,
    pub certificates: Vec<Certificate>,
    pub valid: bool,
}

pub fn renyi_report(
    d: &DiscreteDistribution,
    o: RenyiOrder,
    tol: Tolerance,
) -> Result<RenyiReport> {
    let mut certificates = vec![renyi_order_gap(d, o, tol)];
    if d.len() >= 2 {
        certificates.push(renyi_spread_certificate(d, o, tol)?);
        certificates.push(renyi_geometric_certificate(d, o, tol)?);
        certificates.push(renyi_power_sum_certificate(d, o, tol)?);
        certificates.push(energy_certificate(d, o, tol)?);
    }
    let valid = certificates.iter().all(|c| c.valid);
    Ok(RenyiReport {
        n: d.len(),
        alpha: o.0,
        renyi_entropy: renyi_entropy(d, o),
        shannon_entropy: shannon_entropy(d),
        informational_energy: informational_energy(d),
        certificates,
        valid,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub n: usize,
    pub informational_energy: f64,
    pub renyi_entropy_order_2: f64,
    /// `|E - exp(-H_2)|`.
    pub identity_residual: f64,
    pub valid: bool,
}

pub fn energy_report(d: &DiscreteDistribution, tol: Tolerance) -> EnergyReport {
    let energy = informational_energy(d);
    let h2 = renyi_entropy(d, RenyiOrder(2.0));
    let n = d.len() as f64;
    let valid = tol.eq(energy, (-h2).exp()) && tol.ge(energy, 1.0 / n) && tol.le(energy, 1.0);
    EnergyReport {
        n: d.len(),
        informational_energy: energy,
        renyi_entropy_order_2: h2,
        identity_residual: (energy - (-h2).exp()).abs(),
        valid,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const TOL: Tolerance = Tolerance::new(1e-9, 1e-12);

    fn d(p: &[f64]) -> DiscreteDistribution {
        DiscreteDistribution::new(p.to_vec()).unwrap()
    }

    fn skewed() -> DiscreteDistribution {
        d(&[0.2, 0.3, 0.5])
    }

    fn order(a: f64) -> RenyiOrder {
        RenyiOrder::new(a).unwrap()
    }

    #[test]
    fn distribution_validation() {
        assert!(DiscreteDistribution::new(vec![]).is_err());
        assert!(DiscreteDistribution::new(vec![0.5, 0.5, 0.0]).is_err());
        assert!(DiscreteDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(DiscreteDistribution::new(vec![1.0]).is_ok());
        let s = DiscreteDistribution::stripping_zeros(vec![0.5, 0.0, 0.5]).unwrap();
        assert_eq!(s.len(), 2);
        assert!(DiscreteDistribution::from_counts(&[2, 0, 2], false).is_err());
        let c = DiscreteDistribution::from_counts(&[2, 0, 6], true).unwrap();
        assert_eq!(c.probs(), &[0.25, 0.75]);
        assert!(DiscreteDistribution::from_counts(&[0, 0], true).is_err());

        let parsed: DiscreteDistribution = serde_json::from_str(r#"{"counts":[1,1,2]}"#).unwrap();
        assert_eq!(parsed.probs(), &[0.25, 0.25, 0.5]);
        let parsed: DiscreteDistribution = serde_json::from_str(r#"{"probs":[0.4,0.6]}"#).unwrap();
        assert_eq!(parsed.len(), 2);
        assert!(
            serde_json::from_str::<DiscreteDistribution>(r#"{"probs":[0.4,0.0,0.6]}"#).is_err()
        );
    }

    #[test]
    fn order_validation() {
        assert!(RenyiOrder::new(1.0).is_err());
        assert!(RenyiOrder::new(0.0).is_err());
        assert!(RenyiOrder::new(-2.0).is_err());
        assert!(RenyiOrder::new(f64::INFINITY).is_err());
        assert!(RenyiOrder::new(0.999).is_ok());
    }

    #[test]
    fn shannon_examples() {
        let u = DiscreteDistribution::uniform(3).unwrap();
        assert_abs_diff_eq!(shannon_entropy(&u), 3f64.ln(), epsilon = 1e-15);
        assert_eq!(shannon_entropy(&d(&[1.0])), 0.0);
        assert_abs_diff_eq!(
            shannon_entropy(&skewed()),
            1.029_653_014_064_573_5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn pairwise_certificate_examples() {
        let u = DiscreteDistribution::uniform(4).unwrap();
        let c = entropy_pairwise_certificate(&u, TOL);
        assert_abs_diff_eq!(c.lhs, 0.0, epsilon = 1e-15);
        assert_eq!(c.bound, Some(0.0));
        assert!(c.valid);

        let c = entropy_pairwise_certificate(&skewed(), TOL);
        assert_abs_diff_eq!(c.lhs, 0.068_959_274_603_536_16, epsilon = 1e-15);
        assert_abs_diff_eq!(c.bound.unwrap(), 0.14, epsilon = 1e-15);
        assert!(c.valid);

        let c = entropy_pairwise_certificate(&d(&[0.5, 0.5]), TOL);
        assert_eq!((c.lhs, c.bound), (0.0, Some(0.0)));
    }

    #[test]
    fn spread_certificate_examples() {
        let c = entropy_spread_certificate(&skewed(), TOL).unwrap();
        assert_abs_diff_eq!(c.lhs, 0.068_959_274_603_536_16, epsilon = 1e-15);
        assert_abs_diff_eq!(c.bound.unwrap(), 0.225, epsilon = 1e-15);
        assert!(c.valid);

        let c =
            entropy_spread_certificate(&DiscreteDistribution::uniform(5).unwrap(), TOL).unwrap();
        assert_abs_diff_eq!(c.lhs, 0.0, epsilon = 1e-15);
        assert_eq!(c.bound, Some(0.0));

        let c = entropy_spread_certificate(&d(&[0.1, 0.9]), TOL).unwrap();
        assert_abs_diff_eq!(c.lhs, 0.368_064_207_168_497_07, epsilon = 1e-15);
        assert_abs_diff_eq!(c.bound.unwrap(), 1.777_777_777_777_777_8, epsilon = 1e-14);
        assert!(c.valid);

        assert!(entropy_spread_certificate(&d(&[1.0]), TOL).is_err());
    }

    #[test]
    fn log_spread_certificate_examples() {
        let c = entropy_log_spread_certificate(&skewed(), TOL).unwrap();
        assert_abs_diff_eq!(c.bound.unwrap(), 0.206_165_414_671_684_9, epsilon = 1e-15);
        assert_abs_diff_eq!(
            c.looser_bound.unwrap(),
            0.213_453_742_061_365_6,
            epsilon = 1e-15
        );
        assert!(c.valid);

        let c = entropy_log_spread_certificate(&DiscreteDistribution::uniform(2).unwrap(), TOL)
            .unwrap();
        assert_eq!((c.bound, c.looser_bound), (Some(0.0), Some(0.0)));
        assert!(c.valid);

        let c = entropy_log_spread_certificate(&d(&[0.4, 0.6]), TOL).unwrap();
        assert_abs_diff_eq!(c.lhs, 0.020_135_513_550_688_873, epsilon = 1e-15);
        assert_abs_diff_eq!(c.bound.unwrap(), 0.040_546_510_810_816_44, epsilon = 1e-15);
        assert_abs_diff_eq!(
            c.looser_bound.unwrap(),
            0.040_824_829_046_386_3,
            epsilon = 1e-15
        );
        assert!(c.valid);
    }

    #[test]
    fn renyi_examples() {
        assert_abs_diff_eq!(
            renyi_entropy(&d(&[0.5, 0.5]), order(2.0)),
            2f64.ln(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            renyi_entropy(&skewed(), order(2.0)),
            0.967_584_026_261_705_6,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            renyi_entropy(&skewed(), order(0.5)),
            1.063_658_511_125_111_6,
            epsilon = 1e-14
        );
    }

    #[test]
    fn order_gap_examples() {
        let u = DiscreteDistribution::uniform(6).unwrap();
        for a in [0.3, 2.5] {
            let c = renyi_order_gap(&u, order(a), TOL);
            assert_abs_diff_eq!(c.lhs, 0.0, epsilon = 1e-14);
            assert!(c.valid && c.bound.is_none());
        }
        let c = renyi_order_gap(&skewed(), order(2.0), TOL);
        assert_abs_diff_eq!(c.lhs, 0.062_068_987_802_867_93, epsilon = 1e-15);
        assert_eq!(
            c.relation.as_deref(),
            Some("renyi_entropy >= shannon_entropy")
        );
        let c = renyi_order_gap(&skewed(), order(0.5), TOL);
        assert_abs_diff_eq!(c.lhs, 0.017_002_748_530_269_03, epsilon = 1e-14);
        assert_eq!(
            c.relation.as_deref(),
            Some("renyi_entropy <= shannon_entropy")
        );
    }

    #[test]
    fn renyi_spread_examples() {
        let c = renyi_spread_certificate(&skewed(), order(2.0), TOL).unwrap();
        assert_abs_diff_eq!(c.bound.unwrap(), 0.225, epsilon = 1e-15);
        assert!(c.valid);
        let c =
            renyi_spread_certificate(&DiscreteDistribution::uniform(3).unwrap(), order(0.7), TOL)
                .unwrap();
        assert_abs_diff_eq!(c.lhs, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.bound.unwrap(), 0.0, epsilon = 1e-15);
        let c = renyi_spread_certificate(&skewed(), order(0.5), TOL).unwrap();
        assert_abs_diff_eq!(c.lhs, 0.017_002_748_530_269_03, epsilon = 1e-14);
        assert_abs_diff_eq!(c.bound.unwrap(), 0.053_398_590_529_466_38, epsilon = 1e-15);
        assert!(c.valid);
    }

    #[test]
    fn renyi_geometric_examples() {
        let c = renyi_geometric_certificate(
            &DiscreteDistribution::uniform(4).unwrap(),
            order(1.7),
            TOL,
        )
        .unwrap();
        assert_abs_diff_eq!(c.lhs, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.bound.unwrap(), 0.0, epsilon = 1e-15);

        let c = renyi_geometric_certificate(&skewed(), order(2.0), TOL).unwrap();
        assert_abs_diff_eq!(c.lhs, 0.271_508_949_950_172_5, epsilon = 1e-14);
        assert_abs_diff_eq!(c.bound.unwrap(), 3.3075, epsilon = 1e-13);
        assert_abs_diff_eq!(c.tight_bound.unwrap(), 1.1025, epsilon = 1e-13);
        assert!(c.valid);

        let c = renyi_geometric_certificate(&d(&[0.4, 0.6]), order(2.0), TOL).unwrap();
        assert_abs_diff_eq!(c.lhs, 0.080_042_707_673_536_43, epsilon = 1e-14);
        assert_abs_diff_eq!(c.bound.unwrap(), 0.347_222_222_222_222_2, epsilon = 1e-14);
        assert!(c.valid);
    }

    #[test]
    fn power_sum_examples() {
        let c = renyi_power_sum_certificate(&skewed(), order(0.5), TOL).unwrap();
        assert_abs_diff_eq!(c.lhs, 0.030_007_873_377_205_716, epsilon = 1e-15);
        assert_abs_diff_eq!(c.bound.unwrap(), 0.092_458_621_701_753_15, epsilon = 1e-15);
        assert!(c.valid);

        let c = renyi_power_sum_certificate(
            &DiscreteDistribution::uniform(3).unwrap(),
            order(3.0),
            TOL,
        )
        .unwrap();
        assert_abs_diff_eq!(c.lhs, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.bound.unwrap(), 0.0, epsilon = 1e-15);

        let c = renyi_power_sum_certificate(&skewed(), order(2.0), TOL).unwrap();
        assert_abs_diff_eq!(c.lhs, 0.046_666_666_666_666_67, epsilon = 1e-15);
        assert_abs_diff_eq!(c.bound.unwrap(), 0.135, epsilon = 1e-15);
        assert!(c.valid);
    }

    #[test]
    fn energy_examples() {
        assert_abs_diff_eq!(
            informational_energy(&DiscreteDistribution::uniform(4).unwrap()),
            0.25,
            epsilon = 1e-16
        );
        assert_abs_diff_eq!(informational_energy(&skewed()), 0.38, epsilon = 1e-16);
        assert_eq!(informational_energy(&d(&[1.0])), 1.0);

        let c = energy_certificate(&skewed(), order(0.5), TOL).unwrap();
        assert_abs_diff_eq!(c.lhs, 0.009_128_523_352_082_461, epsilon = 1e-15);
        assert_abs_diff_eq!(c.bound.unwrap(), 0.030_819_540_567_251_05, epsilon = 1e-15);
        assert!(c.valid);

        let c = energy_certificate(&DiscreteDistribution::uniform(5).unwrap(), order(0.5), TOL)
            .unwrap();
        assert_abs_diff_eq!(c.lhs, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.bound.unwrap(), 0.0, epsilon = 1e-15);

        let c = energy_certificate(&skewed(), order(2.0), TOL).unwrap();
        assert_abs_diff_eq!(c.lhs, 0.0156, epsilon = 1e-15);
        assert_abs_diff_eq!(c.bound.unwrap(), 0.045, epsilon = 1e-15);
        assert!(c.valid);

        let r = energy_report(&skewed(), TOL);
        assert!(r.valid && r.identity_residual < 1e-15);
    }

    #[test]
    fn reports_collect_all_certificates() {
        let r = entropy_report(&skewed(), TOL).unwrap();
        assert_eq!(r.certificates.len(), 3);
        assert!(r.valid);
        let r = entropy_report(&d(&[1.0]), TOL).unwrap();
        assert_eq!(r.certificates.len(), 1);
        let r = renyi_report(&skewed(), order(0.5), TOL).unwrap();
        assert_eq!(r.certificates.len(), 5);
        assert!(r.valid);
    }
}
