//! Univariate exponentiated modified Weibull extension (EMWE) distribution.
//!
//! With base function `G(x) = 1 - exp(-λα(exp((x/α)^β) - 1))` the EMWE law is
//! `F(x) = G(x)^γ` on `[0, ∞)`. Everything here is evaluated through
//! `ln G(x)` so that large exponents and tiny probabilities stay representable.

use std::f64::consts::LN_2;

use rand::distributions::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Error, Result};

/// Largest inner exponent `(x/α)^β` that is exponentiated. Beyond it the CDF
/// is reported as exactly 1 and the density as exactly 0.
pub const INNER_EXPONENT_LIMIT: f64 = 700.0;

/// The `(α, β, λ)` part of the parameter vector, shared by every EMWE
/// variable of a bivariate model and held fixed during likelihood fitting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ShapeRepr", into = "ShapeRepr")]
pub struct FixedShape {
    alpha: f64,
    beta: f64,
    lambda: f64,
}

#[derive(Serialize, Deserialize)]
struct ShapeRepr {
    alpha: f64,
    beta: f64,
    lambda: f64,
}

impl TryFrom<ShapeRepr> for FixedShape {
    type Error = Error;

    fn try_from(r: ShapeRepr) -> Result<Self> {
        FixedShape::new(r.alpha, r.beta, r.lambda)
    }
}

impl From<FixedShape> for ShapeRepr {
    fn from(s: FixedShape) -> Self {
        ShapeRepr {
            alpha: s.alpha,
            beta: s.beta,
            lambda: s.lambda,
        }
    }
}

impl FixedShape {
    pub fn new(alpha: f64, beta: f64, lambda: f64) -> Result<Self> {
        Ok(Self {
            alpha: require_positive("alpha", alpha)?,
            beta: require_positive("beta", beta)?,
            lambda: require_positive("lambda", lambda)?,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    fn inner_exponent(&self, x: f64) -> f64 {
        (x / self.alpha).powf(self.beta)
    }

    /// `λα(exp((x/α)^β) - 1)`, the cumulative hazard of the base law.
    fn cumulative_hazard(&self, t: f64) -> f64 {
        self.lambda * self.alpha * t.exp_m1()
    }

    /// `ln G(x)` for `x >= 0`; `-∞` at the origin and `0` past the clamp.
    pub fn log_base_cdf(&self, x: f64) -> f64 {
        let t = self.inner_exponent(x);
        if t > INNER_EXPONENT_LIMIT {
            return 0.0;
        }
        ln_one_minus_exp_neg(self.cumulative_hazard(t))
    }

    /// Log-density of the γ = 1 member at `x > 0`:
    /// `ln(λβ) + (x/α)^β + (β-1) ln(x/α) - λα(exp((x/α)^β) - 1)`.
    ///
    /// These are exactly the γ-free terms of each coordinate's contribution
    /// to a BEMWE log-likelihood.
    pub fn log_base_density(&self, x: f64) -> f64 {
        let t = self.inner_exponent(x);
        if t > INNER_EXPONENT_LIMIT {
            return f64::NEG_INFINITY;
        }
        (self.lambda * self.beta).ln() + t + (self.beta - 1.0) * (x / self.alpha).ln()
            - self.cumulative_hazard(t)
    }

    /// Inverse of [`log_base_cdf`](Self::log_base_cdf): the `x` with
    /// `ln G(x) = log_g`, for `log_g < 0`.
    pub fn x_from_log_base_cdf(&self, log_g: f64) -> f64 {
        // w = -ln(1 - G), the cumulative hazard at the answer
        let w = if log_g < -LN_2 {
            -(-log_g.exp()).ln_1p()
        } else {
            -(-log_g.exp_m1()).ln()
        };
        let t = (w / (self.lambda * self.alpha)).ln_1p();
        self.alpha * t.powf(1.0 / self.beta)
    }
}

/// `ln(1 - exp(-u))` for `u >= 0`, accurate at both ends.
fn ln_one_minus_exp_neg(u: f64) -> f64 {
    if u > LN_2 {
        (-(-u).exp()).ln_1p()
    } else {
        (-(-u).exp_m1()).ln()
    }
}

/// Parameters `(γ, α, β, λ)` of one EMWE distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmweParams {
    gamma: f64,
    shape: FixedShape,
}

impl EmweParams {
    pub fn new(gamma: f64, alpha: f64, beta: f64, lambda: f64) -> Result<Self> {
        Self::with_shape(gamma, FixedShape::new(alpha, beta, lambda)?)
    }

    pub fn with_shape(gamma: f64, shape: FixedShape) -> Result<Self> {
        Ok(Self {
            gamma: require_positive("gamma", gamma)?,
            shape,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn shape(&self) -> FixedShape {
        self.shape
    }

    pub fn alpha(&self) -> f64 {
        self.shape.alpha
    }

    pub fn beta(&self) -> f64 {
        self.shape.beta
    }

    pub fn lambda(&self) -> f64 {
        self.shape.lambda
    }

    /// `ln F(x)`.
    pub fn log_cdf(&self, x: f64) -> Result<f64> {
        require_non_negative("x", x)?;
        Ok(self.gamma * self.shape.log_base_cdf(x))
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(self.log_cdf(x)?.exp())
    }

    pub fn survival(&self, x: f64) -> Result<f64> {
        Ok(-self.log_cdf(x)?.exp_m1())
    }

    /// Log-density. At `x = 0` the density is its right limit, which behaves
    /// like `x^(βγ-1)`: zero when `βγ > 1`, the constant `γβλ(λα)^(γ-1)` when
    /// `βγ = 1`, and divergent (a domain error) when `βγ < 1`.
    pub fn log_pdf(&self, x: f64) -> Result<f64> {
        require_non_negative("x", x)?;
        if x == 0.0 {
            return self.log_pdf_at_origin();
        }
        let log_g = self.shape.log_base_cdf(x);
        let tail = if self.gamma == 1.0 {
            0.0
        } else {
            (self.gamma - 1.0) * log_g
        };
        Ok(self.gamma.ln() + self.shape.log_base_density(x) + tail)
    }

    fn log_pdf_at_origin(&self) -> Result<f64> {
        let kappa = self.gamma * self.shape.beta;
        if kappa > 1.0 {
            Ok(f64::NEG_INFINITY)
        } else if kappa == 1.0 {
            let s = &self.shape;
            Ok((self.gamma * s.beta * s.lambda).ln()
                + (self.gamma - 1.0) * (s.lambda * s.alpha).ln())
        } else {
            Err(Error::domain(format!(
                "density diverges at x = 0 (beta * gamma = {kappa} < 1)"
            )))
        }
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        Ok(self.log_pdf(x)?.exp())
    }

    /// `pdf / survival` for `x > 0`.
    pub fn hazard(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x <= 0.0 {
            return Err(Error::domain(format!("hazard needs x > 0, got {x}")));
        }
        let survival = self.survival(x)?;
        if survival <= 0.0 {
            return Err(Error::Overflow(format!(
                "survival underflows to 0 at x = {x}; hazard is not representable"
            )));
        }
        Ok((self.log_pdf(x)? - survival.ln()).exp())
    }

    /// Closed-form inverse CDF: `α [ln(1 - ln(1 - u^(1/γ))/(λα))]^(1/β)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::domain(format!("quantile needs 0 < u < 1, got {u}")));
        }
        Ok(self.shape.x_from_log_base_cdf(u.ln() / self.gamma))
    }

    /// The `x` whose survival probability is `s`, for `0 < s < 1`.
    ///
    /// Unlike `quantile(1 - s)` this keeps full relative precision for tiny `s`.
    pub fn upper_quantile(&self, s: f64) -> Result<f64> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::domain(format!(
                "upper quantile needs 0 < s < 1, got {s}"
            )));
        }
        Ok(self.shape.x_from_log_base_cdf((-s).ln_1p() / self.gamma))
    }

    /// One inverse-transform draw.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        self.shape.x_from_log_base_cdf(u.ln() / self.gamma)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_graded, QuadOptions};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(g: f64, a: f64, b: f64, l: f64) -> EmweParams {
        EmweParams::new(g, a, b, l).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(EmweParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(EmweParams::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(EmweParams::new(1.0, 1.0, f64::NAN, 1.0).is_err());
        assert!(EmweParams::new(1.0, 1.0, 1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn cdf_at_zero_and_far_tail() {
        let d = p(2.5, 0.3, 0.7, 1.2);
        assert_eq!(d.cdf(0.0).unwrap(), 0.0);
        assert_eq!(d.survival(0.0).unwrap(), 1.0);
        let unit = p(1.0, 1.0, 1.0, 1.0);
        assert_eq!(unit.cdf(50.0).unwrap(), 1.0);
        assert_eq!(unit.cdf(1e6).unwrap(), 1.0);
        assert!(d.cdf(-1.0).is_err());
        assert!(d.cdf(f64::NAN).is_err());
    }

    #[test]
    fn cdf_matches_high_precision_value() {
        // 50-digit evaluation of [1 - exp(-λα(e^{(x/α)^β} - 1))]^γ
        let d = p(1.0, 0.1, 0.3, 0.05);
        let expected = 0.004_300_451_904_288_426_6;
        let got = d.cdf(0.0205).unwrap();
        assert!((got - expected).abs() <= 1e-15 * expected, "{got}");
    }

    #[test]
    fn gamma_one_is_modified_weibull_extension() {
        let d = p(1.0, 0.8, 1.7, 0.4);
        for &x in &[0.01f64, 0.3, 1.0, 2.2] {
            let mwe = 1.0 - (-0.4 * 0.8 * ((x / 0.8).powf(1.7).exp() - 1.0)).exp();
            assert!((d.cdf(x).unwrap() - mwe).abs() < 1e-15);
        }
    }

    #[test]
    fn pdf_limit_at_origin() {
        assert_eq!(p(1.0, 1.0, 1.0, 1.0).pdf(0.0).unwrap(), 1.0);
        assert_eq!(p(1.0, 1.0, 2.0, 1.0).pdf(0.0).unwrap(), 0.0);
        // βγ = 1 with γ != 1: γβλ(λα)^(γ-1)
        let d = p(2.0, 3.0, 0.5, 0.7);
        let expected = 2.0 * 0.5 * 0.7 * (0.7_f64 * 3.0);
        assert!((d.pdf(0.0).unwrap() - expected).abs() < 1e-12);
        assert!(matches!(
            p(1.0, 1.0, 0.5, 1.0).pdf(0.0),
            Err(Error::Domain(_))
        ));
        assert!(p(1.0, 1.0, 1.0, 1.0).pdf(-0.1).is_err());
    }

    #[test]
    fn pdf_is_derivative_of_cdf() {
        let sets = [
            p(2.0, 1.0, 2.0, 0.5),
            p(0.7, 0.1, 0.3, 0.05),
            p(3.5, 2.0, 0.8, 1.3),
        ];
        for d in sets {
            for &q in &[0.1, 0.3, 0.5, 0.7, 0.9] {
                let x = d.quantile(q).unwrap();
                let h = 1e-6 * x.max(1.0);
                let fd = (d.cdf(x + h).unwrap() - d.cdf(x - h).unwrap()) / (2.0 * h);
                let pdf = d.pdf(x).unwrap();
                assert!((fd - pdf).abs() <= 1e-6 * pdf.max(1.0), "{d:?} x={x}");
            }
        }
    }

    #[test]
    fn pdf_integrates_to_one() {
        let d = p(2.0, 1.0, 2.0, 0.5);
        let hi = d.upper_quantile(1e-16).unwrap();
        let est =
            integrate_graded(|x| d.pdf(x).unwrap(), 1e-300, hi, &QuadOptions::default()).unwrap();
        assert!((est.value - 1.0).abs() < 1e-8, "{}", est.value);
    }

    #[test]
    fn quantile_round_trip() {
        let d = p(2.0, 1.0, 2.0, 0.5);
        // high-precision F(1) for these parameters
        let u = 0.332_322_536_656_400_3;
        assert!((d.quantile(u).unwrap() - 1.0).abs() < 1e-8);
        assert!((d.quantile(d.cdf(1.0).unwrap()).unwrap() - 1.0).abs() < 1e-12);
        assert!(d.quantile(1e-300).unwrap() < 1e-10);
        assert!(d.quantile(1.0 - 1e-16).unwrap() > d.quantile(0.999).unwrap());
        assert!(d.quantile(0.0).is_err());
        assert!(d.quantile(1.0).is_err());
    }

    #[test]
    fn upper_quantile_resolves_tiny_tails() {
        let d = p(0.6, 0.5, 1.4, 0.9);
        for &s in &[1e-3, 1e-9, 1e-14, 1e-30] {
            let x = d.upper_quantile(s).unwrap();
            let back = d.survival(x).unwrap();
            assert!((back - s).abs() <= 1e-9 * s, "s={s} back={back}");
        }
    }

    #[test]
    fn hazard_of_unit_parameters() {
        // γ = α = β = λ = 1: F = 1 - exp(-(e^x - 1)), so h(x) = e^x
        let d = p(1.0, 1.0, 1.0, 1.0);
        for &x in &[0.1, 0.5, 1.0, 2.0, 3.0] {
            let h = d.hazard(x).unwrap();
            assert!((h - f64::exp(x)).abs() < 1e-12 * h, "x={x}");
        }
        assert!(d.hazard(0.0).is_err());
        assert!(matches!(d.hazard(10.0), Err(Error::Overflow(_))));
    }

    #[test]
    fn survival_complements_cdf() {
        let d = p(1.7, 0.4, 1.1, 0.8);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x = rng.gen_range(0.0..3.0);
            let s = d.survival(x).unwrap() + d.cdf(x).unwrap();
            assert!((s - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn clamps_huge_inner_exponent() {
        let d = p(1.0, 1.0, 3.0, 1e-300);
        assert_eq!(d.cdf(10.0).unwrap(), 1.0);
        assert_eq!(d.pdf(10.0).unwrap(), 0.0);
    }

    #[test]
    fn sampler_is_deterministic_and_empty_for_zero() {
        let d = p(1.0, 1.0, 1.0, 1.0);
        let mut a = ChaCha8Rng::seed_from_u64(11);
        let mut b = ChaCha8Rng::seed_from_u64(11);
        assert!(d.sample(&mut a, 0).is_empty());
        assert_eq!(d.sample(&mut a, 50), d.sample(&mut b, 50));
    }

    #[test]
    fn sampler_passes_ks() {
        let d = p(1.0, 1.0, 1.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let xs = d.sample(&mut rng, 10_000);
        let ks = crate::gof::ks_test(&xs, |x| d.cdf(x).unwrap());
        assert!(ks.p_value > 0.01, "{ks:?}");
    }

    fn params() -> impl Strategy<Value = EmweParams> {
        (0.05f64..8.0, 0.05f64..5.0, 0.2f64..4.0, 0.01f64..5.0)
            .prop_map(|(g, a, b, l)| EmweParams::new(g, a, b, l).unwrap())
    }

    proptest! {
        #[test]
        fn cdf_is_monotone(d in params(), a in 0.0f64..10.0, w in 0.0f64..10.0) {
            let b = a + w;
            prop_assert!(d.cdf(a).unwrap() <= d.cdf(b).unwrap());
            let f = d.cdf(b).unwrap();
            prop_assert!((0.0..=1.0).contains(&f));
        }

        #[test]
        fn pdf_is_non_negative(d in params(), x in 1e-6f64..20.0) {
            let f = d.pdf(x).unwrap();
            prop_assert!(f >= 0.0 && !f.is_nan());
        }

        #[test]
        fn quantile_inverts_cdf(d in params(), e in -13.8f64..13.8) {
            // logistic map gives u spread over (1e-6, 1 - 1e-6)
            let u = 1.0 / (1.0 + (-e).exp());
            let x = d.quantile(u).unwrap();
            let back = d.cdf(x).unwrap();
            prop_assert!((back - u).abs() <= 1e-10 * u, "u={} back={}", u, back);
        }
    }
}
