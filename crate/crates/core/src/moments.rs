//! Raw moments of the BEMWE marginals.
//!
//! `E[X_i^r] = ∫₀^∞ x^r f(x; γ_i + γ₃) dx` is evaluated by adaptive
//! quadrature. The upper limit is the point where the marginal survival drops
//! below [`TAIL_SURVIVAL`]; past it the integrand decays double-exponentially.
//! The range is integrated in `ln x` so that the `x^(βγ-1)` behaviour at the
//! origin (unbounded when `βγ < 1`) is resolved by a geometric mesh.
//!
//! The term-by-term series for these moments is not used: interchanging the
//! sums produces integrals `∫ y^(r/β) e^y dy` over `(0, ∞)`, which diverge.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bemwe::{BemweParams, Component};
use crate::emwe::EmweParams;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_graded, QuadOptions};

pub const TAIL_SURVIVAL: f64 = 1e-14;

/// Lower cut-off of the graded mesh, relative to the upper limit. The
/// neglected piece is below `x^r F(x)` there, i.e. under `1e-40` relative for
/// `r >= 1`.
const LOWER_RATIO: f64 = 1e-40;

pub const DEFAULT_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentRequest {
    params: BemweParams,
    which: Component,
    order: u32,
    rel_tol: f64,
}

impl MomentRequest {
    pub fn new(params: BemweParams, which: Component, order: u32, rel_tol: f64) -> Result<Self> {
        if order < 1 {
            return Err(Error::domain("moment order must be >= 1"));
        }
        if !(rel_tol > 0.0 && rel_tol <= 1e-2) {
            return Err(Error::domain(format!(
                "rel_tol must lie in (0, 1e-2], got {rel_tol}"
            )));
        }
        Ok(Self {
            params,
            which,
            order,
            rel_tol,
        })
    }

    pub fn params(&self) -> BemweParams {
        self.params
    }

    pub fn which(&self) -> Component {
        self.which
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }
}

/// `E[X^r]` for a univariate EMWE variable.
pub fn emwe_moment(dist: &EmweParams, order: u32, rel_tol: f64) -> Result<f64> {
    let hi = dist.upper_quantile(TAIL_SURVIVAL)?;
    let r = order as i32;
    let opts = QuadOptions::default()
        .with_rel_tol(rel_tol)
        .with_abs_tol(0.0);
    let est = integrate_graded(
        |x| match dist.log_pdf(x) {
            Ok(lp) => (lp + r as f64 * x.ln()).exp(),
            Err(_) => f64::NAN,
        },
        hi * LOWER_RATIO,
        hi,
        &opts,
    )?;
    Ok(est.value)
}

/// Quadrature value of `E[X_i^r]`, delegating to the marginal EMWE law.
pub fn marginal_moment(req: &MomentRequest) -> Result<f64> {
    emwe_moment(&req.params.marginal(req.which), req.order, req.rel_tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

/// Sample mean and standard error of `X_i^r` over `n` draws of the shock model.
pub fn moment_mc_estimate<R: Rng + ?Sized>(
    req: &MomentRequest,
    rng: &mut R,
    n: usize,
) -> Result<McEstimate> {
    moment_mc_estimates(req.params, req.which, &[req.order], rng, n).map(|v| v[0])
}

/// Like [`moment_mc_estimate`] for several orders from one set of draws.
pub fn moment_mc_estimates<R: Rng + ?Sized>(
    params: BemweParams,
    which: Component,
    orders: &[u32],
    rng: &mut R,
    n: usize,
) -> Result<Vec<McEstimate>> {
    if n < 2 {
        return Err(Error::domain("Monte Carlo moments need n >= 2"));
    }
    let mut sums = vec![(0.0f64, 0.0f64); orders.len()];
    for _ in 0..n {
        let pair = params.draw(rng);
        let x = match which {
            Component::First => pair.x1(),
            Component::Second => pair.x2(),
        };
        for (acc, &r) in sums.iter_mut().zip(orders) {
            let v = x.powi(r as i32);
            acc.0 += v;
            acc.1 += v * v;
        }
    }
    let nf = n as f64;
    Ok(sums
        .into_iter()
        .map(|(s, s2)| {
            let mean = s / nf;
            let var = ((s2 - nf * mean * mean) / (nf - 1.0)).max(0.0);
            McEstimate {
                estimate: mean,
                std_error: (var / nf).sqrt(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn req(p: BemweParams, which: Component, r: u32) -> MomentRequest {
        MomentRequest::new(p, which, r, DEFAULT_REL_TOL).unwrap()
    }

    #[test]
    fn validates_request() {
        let p = BemweParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(MomentRequest::new(p, Component::First, 0, 1e-8).is_err());
        assert!(MomentRequest::new(p, Component::First, 1, 0.1).is_err());
        assert!(MomentRequest::new(p, Component::First, 1, 0.0).is_err());
    }

    #[test]
    fn exponential_special_case() {
        // γ = 1, β = 1, α → ∞ would be exponential; instead check a case with
        // a closed form: γ = 1, α = β = λ = 1 has S(x) = exp(1 - e^x), so
        // E[X] = ∫ exp(1 - e^x) dx = e·E₁(1).
        let e1_of_1 = 0.219_383_934_395_520_27;
        let d = EmweParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let m = emwe_moment(&d, 1, 1e-12).unwrap();
        let expected = std::f64::consts::E * e1_of_1;
        assert!((m - expected).abs() < 1e-11 * expected, "{m} {expected}");
    }

    #[test]
    fn second_moment_dominates_squared_first() {
        let p = BemweParams::new(0.4, 2.0, 0.3, 0.5, 0.6, 2.0).unwrap();
        let m1 = marginal_moment(&req(p, Component::First, 1)).unwrap();
        let m2 = marginal_moment(&req(p, Component::First, 2)).unwrap();
        assert!(m2 >= m1 * m1);
    }

    #[test]
    fn symmetric_gammas_give_equal_marginals() {
        let p = BemweParams::new(0.7, 0.7, 1.3, 0.8, 1.5, 0.9).unwrap();
        let a = marginal_moment(&req(p, Component::First, 2)).unwrap();
        let b = marginal_moment(&req(p, Component::Second, 2)).unwrap();
        assert!((a - b).abs() <= DEFAULT_REL_TOL * a);
    }

    #[test]
    fn singular_origin_is_handled() {
        // βγ = 0.05 makes the density blow up like x^-0.95 at 0
        let p = BemweParams::new(0.1, 0.1, 0.1, 0.1, 0.25, 0.05).unwrap();
        let m = marginal_moment(&req(p, Component::First, 1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mc = moment_mc_estimate(&req(p, Component::First, 1), &mut rng, 200_000).unwrap();
        assert!((m - mc.estimate).abs() < 4.0 * mc.std_error, "{m} {mc:?}");
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let p = BemweParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let r = req(p, Component::Second, 2);
        let a = moment_mc_estimate(&r, &mut ChaCha8Rng::seed_from_u64(1), 1000).unwrap();
        let b = moment_mc_estimate(&r, &mut ChaCha8Rng::seed_from_u64(1), 1000).unwrap();
        assert_eq!(a, b);
        assert!(moment_mc_estimate(&r, &mut ChaCha8Rng::seed_from_u64(1), 1).is_err());
    }
}
