//! One-sample Kolmogorov–Smirnov test against a continuous CDF.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub n: usize,
    pub p_value: f64,
}

impl KsResult {
    pub fn passes(&self, level: f64) -> bool {
        self.p_value > level
    }
}

/// `D_n = sup |F_n(x) - F(x)|`.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// Survival function of the Kolmogorov distribution, `P(K > t)`.
pub fn kolmogorov_survival(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if t < 1.18 {
        // small-t form converges fast where the alternating series does not
        let y = (-std::f64::consts::PI.powi(2) / (8.0 * t * t)).exp();
        let s = (2.0 * std::f64::consts::PI).sqrt() / t * (y + y.powi(9) + y.powi(25) + y.powi(49));
        return (1.0 - s).clamp(0.0, 1.0);
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = (-2.0 * k * k * t * t).exp();
        sum += if k as u64 % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// KS test with the Stephens finite-sample correction
/// `t = (√n + 0.12 + 0.11/√n) D`.
pub fn ks_test<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> KsResult {
    let statistic = ks_statistic(sample, cdf);
    let n = sample.len();
    let rt = (n as f64).sqrt();
    let p_value = if n == 0 {
        1.0
    } else {
        kolmogorov_survival((rt + 0.12 + 0.11 / rt) * statistic)
    };
    KsResult {
        statistic,
        n,
        p_value,
    }
}
