//! Naive reference formulas and constants evaluated at 30 significant digits
//! with mpmath.

/// neg_log on x = (1, 2, 4), p = (0.2, 0.3, 0.5).
pub const FIXTURE_POINTS: [f64; 3] = [1.0, 2.0, 4.0];
pub const FIXTURE_WEIGHTS: [f64; 3] = [0.2, 0.3, 0.5];
pub const FIXTURE_GAP: f64 = 0.128_528_082_453_229_337_68;
pub const FIXTURE_DG: f64 = 0.33;
pub const FIXTURE_CBS: f64 = 0.354_647_712_526_106_673_04;
pub const FIXTURE_BOX: f64 = 0.5625;

/// Distribution (0.2, 0.3, 0.5).
pub const DIST: [f64; 3] = [0.2, 0.3, 0.5];
pub const DIST_ENTROPY: f64 = 1.029_653_014_064_573_527_4;
pub const DIST_DEFICIT: f64 = 0.068_959_274_603_536_163_98;
pub const DIST_PAIRWISE_BOUND: f64 = 0.14;
pub const DIST_SPREAD_BOUND: f64 = 0.225;
pub const DIST_LOG_SPREAD: (f64, f64) =
    (0.206_165_414_671_684_889_67, 0.213_453_742_061_365_604_91);
pub const DIST_RENYI_2: f64 = 0.967_584_026_261_705_598_61;
pub const DIST_ORDER_GAP_2: f64 = 0.062_068_987_802_867_928_806;
pub const DIST_POWER_SUM_HALF: (f64, f64) =
    (0.030_007_873_377_205_716_388, 0.092_458_621_701_753_147_856);
pub const DIST_ENERGY_HALF: (f64, f64) = (
    0.009_128_523_352_082_460_931_1,
    0.030_819_540_567_251_049_285,
);
pub const DIST_GEOMETRIC_HALF: f64 = 0.017_643_283_114_443_049_336;

#[derive(Debug, Clone, Copy)]
pub enum Family {
    NegLog,
    XLogX,
    Power(f64),
    NegPower(f64),
    SquaredNorm,
    LogSumExp,
}

impl Family {
    pub fn from_json(v: &serde_json::Value) -> Family {
        let param = |k: &str| v["params"][k].as_f64().unwrap();
        match v["name"].as_str().unwrap() {
            "neg_log" => Family::NegLog,
            "x_log_x" => Family::XLogX,
            "power_p" => Family::Power(param("p")),
            "power_alpha" => Family::Power(param("alpha")),
            "neg_power_alpha" => Family::NegPower(param("alpha")),
            "squared_norm" => Family::SquaredNorm,
            "log_sum_exp" => Family::LogSumExp,
            other => panic!("unknown family {other}"),
        }
    }

    pub fn value(self, x: &[f64]) -> f64 {
        match self {
            Family::NegLog => -x[0].ln(),
            Family::XLogX => x[0] * x[0].ln(),
            Family::Power(p) => x[0].powf(p),
            Family::NegPower(a) => -x[0].powf(a),
            Family::SquaredNorm => x.iter().map(|v| v * v).sum(),
            Family::LogSumExp => x.iter().map(|v| v.exp()).sum::<f64>().ln(),
        }
    }

    pub fn gradient(self, x: &[f64]) -> Vec<f64> {
        match self {
            Family::NegLog => vec![-1.0 / x[0]],
            Family::XLogX => vec![1.0 + x[0].ln()],
            Family::Power(p) => vec![p * x[0].powf(p - 1.0)],
            Family::NegPower(a) => vec![-a * x[0].powf(a - 1.0)],
            Family::SquaredNorm => x.iter().map(|v| 2.0 * v).collect(),
            Family::LogSumExp => {
                let z: f64 = x.iter().map(|v| v.exp()).sum();
                x.iter().map(|v| v.exp() / z).collect()
            }
        }
    }

    /// Central difference with a fixed absolute step.
    pub fn central_difference(self, x: &[f64], h: f64) -> Vec<f64> {
        (0..x.len())
            .map(|j| {
                let mut up = x.to_vec();
                let mut down = x.to_vec();
                up[j] += h;
                down[j] -= h;
                (self.value(&up) - self.value(&down)) / (2.0 * h)
            })
            .collect()
    }
}

fn normalized(w: &[f64]) -> Vec<f64> {
    let total: f64 = w.iter().sum();
    w.iter().map(|v| v / total).collect()
}

fn mean(vs: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    (0..vs[0].len())
        .map(|j| vs.iter().zip(w).map(|(v, wi)| wi * v[j]).sum())
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Chain values from raw moments, plus a magnitude estimate for each for
/// scaling comparisons: `(values, magnitudes)`.
pub fn chain(f: Family, points: &[Vec<f64>], weights: &[f64]) -> ([f64; 4], [f64; 4]) {
    let w = normalized(weights);
    let grads: Vec<Vec<f64>> = points.iter().map(|x| f.gradient(x)).collect();
    let xbar = mean(points, &w);
    let gbar = mean(&grads, &w);
    let values: Vec<f64> = points.iter().map(|x| f.value(x)).collect();
    let mean_value: f64 = values.iter().zip(&w).map(|(v, wi)| v * wi).sum();
    let gap = mean_value - f.value(&xbar);
    let cross: f64 = points
        .iter()
        .zip(&grads)
        .zip(&w)
        .map(|((x, g), wi)| wi * dot(x, g))
        .sum();
    let dg = cross - dot(&xbar, &gbar);
    let second = |vs: &[Vec<f64>], m: &[f64]| {
        let raw: f64 = vs.iter().zip(&w).map(|(v, wi)| wi * dot(v, v)).sum();
        (raw, raw - dot(m, m))
    };
    let (x2, var_x) = second(points, &xbar);
    let (g2, var_g) = second(&grads, &gbar);
    let cbs = var_x.max(0.0).sqrt() * var_g.max(0.0).sqrt();
    let width = |vs: &[Vec<f64>]| -> f64 {
        (0..vs[0].len())
            .map(|j| {
                let lo = vs.iter().map(|v| v[j]).fold(f64::INFINITY, f64::min);
                let hi = vs.iter().map(|v| v[j]).fold(f64::NEG_INFINITY, f64::max);
                (hi - lo) * (hi - lo)
            })
            .sum::<f64>()
            .sqrt()
    };
    let bx = 0.25 * width(points) * width(&grads);
    let abs_mean: f64 = values.iter().zip(&w).map(|(v, wi)| v.abs() * wi).sum();
    let abs_cross: f64 = points
        .iter()
        .zip(&grads)
        .zip(&w)
        .map(|((x, g), wi)| wi * dot(x, g).abs())
        .sum();
    (
        [gap, dg, cbs, bx],
        [abs_mean, abs_cross, (x2 * g2).sqrt(), bx],
    )
}

/// Literal double sum `Σ_{i<j} w_i w_j <u_i - u_j, v_i - v_j>`.
pub fn pairwise(u: &[Vec<f64>], v: &[Vec<f64>], weights: &[f64]) -> f64 {
    let w = normalized(weights);
    let mut total = 0.0;
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            let du: Vec<f64> = u[i].iter().zip(&u[j]).map(|(a, b)| a - b).collect();
            let dv: Vec<f64> = v[i].iter().zip(&v[j]).map(|(a, b)| a - b).collect();
            total += w[i] * w[j] * dot(&du, &dv);
        }
    }
    total
}

pub fn shannon(p: &[f64]) -> f64 {
    -p.iter().map(|q| q * q.ln()).sum::<f64>()
}

pub fn renyi(p: &[f64], alpha: f64) -> f64 {
    p.iter().map(|q| q.powf(alpha)).sum::<f64>().ln() / (1.0 - alpha)
}
