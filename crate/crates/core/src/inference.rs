//! Maximum-likelihood estimation of `(γ₁, γ₂, γ₃)` with `(α, β, λ)` fixed.
//!
//! Once the sample is split into the regions `x₁ < x₂`, `x₂ < x₁` and
//! `x₁ = x₂`, the log-likelihood depends on the data only through the counts
//! `n₁, n₂, n₃`, five sums of `ln G` and one γ-free constant:
//!
//! ```text
//! L = n₁ ln(γ₂(γ₁+γ₃)) + n₂ ln(γ₁(γ₂+γ₃)) + n₃ ln γ₃ + K
//!   + (γ₁+γ₃-1) A₁ + (γ₂-1) A₂ + (γ₁-1) B₁ + (γ₂+γ₃-1) B₂ + (γ₁+γ₂+γ₃-1) C
//! ```
//!
//! so it is strictly concave in γ whenever each γ appears in a log term with
//! a positive count, and Newton's method with the exact Hessian is used.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::bemwe::{BivariatePair, Region};
use crate::emwe::FixedShape;
use crate::error::{require_non_negative, Error, Result};

pub type Matrix3 = [[f64; 3]; 3];

/// Sums of `ln G` over the regions: `A₁, A₂` over `x₁ < x₂` (first and second
/// coordinate), `B₁, B₂` over `x₂ < x₁`, and `C` over ties.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LogSums {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionPartition {
    idx1: Vec<usize>,
    idx2: Vec<usize>,
    idx3: Vec<usize>,
    sums: LogSums,
    constant: f64,
    shape: FixedShape,
}

impl RegionPartition {
    pub fn idx1(&self) -> &[usize] {
        &self.idx1
    }

    pub fn idx2(&self) -> &[usize] {
        &self.idx2
    }

    pub fn idx3(&self) -> &[usize] {
        &self.idx3
    }

    pub fn counts(&self) -> [usize; 3] {
        [self.idx1.len(), self.idx2.len(), self.idx3.len()]
    }

    pub fn n(&self) -> usize {
        self.idx1.len() + self.idx2.len() + self.idx3.len()
    }

    pub fn sums(&self) -> LogSums {
        self.sums
    }

    /// The γ-free part of the log-likelihood.
    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn shape(&self) -> FixedShape {
        self.shape
    }

    fn counts_f64(&self) -> [f64; 3] {
        let [a, b, c] = self.counts();
        [a as f64, b as f64, c as f64]
    }
}

/// Assigns every pair to a region and accumulates the sufficient statistics.
///
/// Ties are evaluated at `min(x₁, x₂)`, which is the common value when
/// `tie_tol` is zero.
pub fn partition_sample(
    pairs: &[BivariatePair],
    shape: FixedShape,
    tie_tol: f64,
) -> Result<RegionPartition> {
    require_non_negative("tie_tol", tie_tol)?;
    let mut part = RegionPartition {
        idx1: Vec::new(),
        idx2: Vec::new(),
        idx3: Vec::new(),
        sums: LogSums::default(),
        constant: 0.0,
        shape,
    };
    for (i, pair) in pairs.iter().enumerate() {
        let terms = |x: f64| -> Result<(f64, f64)> {
            let log_g = shape.log_base_cdf(x);
            let base = shape.log_base_density(x);
            if x > 0.0 && log_g.is_finite() && base.is_finite() {
                Ok((log_g, base))
            } else {
                Err(Error::Data {
                    row: i + 1,
                    message: format!(
                        "value {x} has ln G = {log_g} and log-density {base}; it cannot enter the likelihood"
                    ),
                })
            }
        };
        match pair.region(tie_tol) {
            Region::X1Less => {
                let (g1, k1) = terms(pair.x1())?;
                let (g2, k2) = terms(pair.x2())?;
                part.sums.a1 += g1;
                part.sums.a2 += g2;
                part.constant += k1 + k2;
                part.idx1.push(i);
            }
            Region::X2Less => {
                let (g1, k1) = terms(pair.x1())?;
                let (g2, k2) = terms(pair.x2())?;
                part.sums.b1 += g1;
                part.sums.b2 += g2;
                part.constant += k1 + k2;
                part.idx2.push(i);
            }
            Region::Diagonal => {
                let (g, k) = terms(pair.x1().min(pair.x2()))?;
                part.sums.c += g;
                part.constant += k;
                part.idx3.push(i);
            }
        }
    }
    Ok(part)
}

fn check_gammas(g: &[f64; 3]) -> Result<()> {
    if g.iter().all(|v| v.is_finite() && *v > 0.0) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "gammas must be finite and > 0, got {g:?}"
        )))
    }
}

/// Full log-likelihood, γ-free terms included.
pub fn log_likelihood(part: &RegionPartition, g: &[f64; 3]) -> Result<f64> {
    check_gammas(g)?;
    let [n1, n2, n3] = part.counts_f64();
    let [g1, g2, g3] = *g;
    let s = &part.sums;
    Ok(n1 * (g2 * (g1 + g3)).ln()
        + n2 * (g1 * (g2 + g3)).ln()
        + n3 * g3.ln()
        + part.constant
        + (g1 + g3 - 1.0) * s.a1
        + (g2 - 1.0) * s.a2
        + (g1 - 1.0) * s.b1
        + (g2 + g3 - 1.0) * s.b2
        + (g1 + g2 + g3 - 1.0) * s.c)
}

/// Gradient of [`log_likelihood`] with respect to `(γ₁, γ₂, γ₃)`.
pub fn score(part: &RegionPartition, g: &[f64; 3]) -> Result<[f64; 3]> {
    check_gammas(g)?;
    let [n1, n2, n3] = part.counts_f64();
    let [g1, g2, g3] = *g;
    let s = &part.sums;
    Ok([
        n1 / (g1 + g3) + n2 / g1 + s.a1 + s.b1 + s.c,
        n1 / g2 + n2 / (g2 + g3) + s.a2 + s.b2 + s.c,
        n1 / (g1 + g3) + n2 / (g2 + g3) + n3 / g3 + s.a1 + s.b2 + s.c,
    ])
}

/// Negative Hessian of [`log_likelihood`]. It depends on the data only
/// through the region counts.
pub fn observed_information(part: &RegionPartition, g: &[f64; 3]) -> Result<Matrix3> {
    check_gammas(g)?;
    let [n1, n2, n3] = part.counts_f64();
    let [g1, g2, g3] = *g;
    let a = n1 / (g1 + g3).powi(2);
    let b = n2 / (g2 + g3).powi(2);
    Ok([
        [a + n2 / (g1 * g1), 0.0, a],
        [0.0, n1 / (g2 * g2) + b, b],
        [a, b, a + b + n3 / (g3 * g3)],
    ])
}

/// Inverse of a 3×3 matrix by cofactors, `None` if (relatively) singular.
pub fn invert3(m: &Matrix3) -> Option<Matrix3> {
    let c =
        |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let cof = [
        [c(1, 2, 1, 2), -c(1, 2, 0, 2), c(1, 2, 0, 1)],
        [-c(0, 2, 1, 2), c(0, 2, 0, 2), -c(0, 2, 0, 1)],
        [c(0, 1, 1, 2), -c(0, 1, 0, 2), c(0, 1, 0, 1)],
    ];
    let det = m[0][0] * cof[0][0] + m[0][1] * cof[0][1] + m[0][2] * cof[0][2];
    let scale = m.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if !det.is_finite() || det.abs() <= 1e-14 * scale.powi(3) {
        return None;
    }
    let mut inv = [[0.0; 3]; 3];
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            // adjugate is the transposed cofactor matrix
            *v = cof[j][i] / det;
        }
    }
    Some(inv)
}

/// Upper `p`-quantile point of the standard normal, i.e. `Φ⁻¹(p)`.
pub fn standard_normal_quantile(p: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    Normal::new(0.0, 1.0).expect("unit normal").inverse_cdf(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub init: [f64; 3],
    pub tol: f64,
    pub max_iter: usize,
    /// Confidence level `1 - δ` of the Wald intervals.
    pub level: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            init: [1.0, 1.0, 1.0],
            tol: 1e-8,
            max_iter: 100,
            level: 0.95,
        }
    }
}

/// Estimates closer to zero than this, with the score still pointing toward
/// zero, are reported as boundary solutions.
pub const BOUNDARY_EPS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    /// `γ̂ - z·se` before truncation at zero.
    pub unclamped_lower: f64,
}

impl ConfidenceInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub estimates: [f64; 3],
    pub loglik: f64,
    pub covariance: Matrix3,
    pub conf_intervals: [ConfidenceInterval; 3],
    pub level: f64,
    pub z: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Index (0-based) of a γ that ran into the zero boundary.
    pub boundary_component: Option<usize>,
    pub score_norm: f64,
    pub fixed: FixedShape,
}

impl FitReport {
    pub fn std_errors(&self) -> [f64; 3] {
        [0, 1, 2].map(|i| self.covariance[i][i].max(0.0).sqrt())
    }
}

fn norm_inf(v: &[f64; 3]) -> f64 {
    v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// Newton iteration on the score with the analytic Hessian.
///
/// Steps that leave the positive orthant, or that lower the likelihood, are
/// halved. Iteration stops when `|score|_inf < tol`.
pub fn fit_mle(part: &RegionPartition, opts: &FitOptions) -> Result<FitReport> {
    if part.n() == 0 {
        return Err(Error::Domain("cannot fit an empty sample".into()));
    }
    if !(opts.level >= 0.0 && opts.level < 1.0) {
        return Err(Error::Domain(format!(
            "confidence level must lie in [0, 1), got {}",
            opts.level
        )));
    }
    check_gammas(&opts.init)?;
    let mut g = opts.init;
    let mut iterations = 0;
    loop {
        let s = score(part, &g)?;
        let s_norm = norm_inf(&s);
        if s_norm < opts.tol {
            return finish(part, g, iterations, true, None, s_norm, opts);
        }
        if let Some(k) = (0..3).find(|&k| g[k] < BOUNDARY_EPS && s[k] < 0.0) {
            return finish(part, g, iterations, false, Some(k), s_norm, opts);
        }
        if iterations >= opts.max_iter {
            return Err(Error::NonConvergence {
                iterations,
                score_norm: s_norm,
                iterate: g,
            });
        }
        let info = observed_information(part, &g)?;
        let inv = invert3(&info).ok_or_else(|| Error::Numeric {
            message: format!(
                "observed information is singular (counts {:?})",
                part.counts()
            ),
            iterate: g,
        })?;
        let step = [0, 1, 2].map(|i| (0..3).map(|j| inv[i][j] * s[j]).sum::<f64>());
        let current = log_likelihood(part, &g)?;
        let mut t = 1.0;
        let next = loop {
            let cand = [0, 1, 2].map(|i| g[i] + t * step[i]);
            let feasible = cand.iter().all(|v| *v > 0.0);
            if feasible {
                let ll = log_likelihood(part, &cand)?;
                if ll >= current - 1e-12 * current.abs().max(1.0) || t < 1e-12 {
                    break cand;
                }
            }
            t *= 0.5;
            if t < 1e-300 {
                return Err(Error::Numeric {
                    message: "step halving failed to find a feasible point".into(),
                    iterate: g,
                });
            }
        };
        g = next;
        iterations += 1;
    }
}

fn finish(
    part: &RegionPartition,
    g: [f64; 3],
    iterations: usize,
    converged: bool,
    boundary_component: Option<usize>,
    score_norm: f64,
    opts: &FitOptions,
) -> Result<FitReport> {
    let info = observed_information(part, &g)?;
    let covariance = invert3(&info).ok_or_else(|| Error::Numeric {
        message: "observed information is singular at the estimate".into(),
        iterate: g,
    })?;
    let delta = 1.0 - opts.level;
    let z = standard_normal_quantile(1.0 - delta / 2.0);
    let conf_intervals = [0, 1, 2].map(|i| {
        let half = z * covariance[i][i].max(0.0).sqrt();
        let unclamped_lower = g[i] - half;
        ConfidenceInterval {
            lower: unclamped_lower.max(0.0),
            upper: g[i] + half,
            unclamped_lower,
        }
    });
    Ok(FitReport {
        estimates: g,
        loglik: log_likelihood(part, &g)?,
        covariance,
        conf_intervals,
        level: opts.level,
        z,
        iterations,
        converged,
        boundary_component,
        score_norm,
        fixed: part.shape,
    })
}
