#![allow(dead_code)]

use bemwe_core::inference::{log_likelihood, partition_sample, RegionPartition};
use bemwe_core::quadrature::{integrate_graded, QuadOptions};
use bemwe_core::{BemweParams, BivariatePair, Component, EmweParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Marginal probability left out below the lower integration limit.
pub const LOWER_TAIL: f64 = 1e-13;

fn upper(d: &EmweParams) -> f64 {
    d.upper_quantile(1e-17).unwrap()
}

fn opts() -> QuadOptions {
    QuadOptions::default()
        .with_rel_tol(1e-11)
        .with_abs_tol(1e-16)
}

/// Probability of `{x₁ < x₂}`, `{x₂ < x₁}` and the diagonal, each obtained
/// by integrating the corresponding density piece.
pub struct MassSplit {
    pub below: f64,
    pub above: f64,
    pub diagonal: f64,
}

impl MassSplit {
    pub fn total(&self) -> f64 {
        self.below + self.above + self.diagonal
    }
}

pub fn mass_split(p: &BemweParams) -> MassSplit {
    let [g1, g2, _] = p.gammas();
    let m13 = p.emwe(p.gamma13());
    let m23 = p.emwe(p.gamma23());
    let u1 = p.emwe(g1);
    let u2 = p.emwe(g2);
    let hi = upper(&p.emwe(p.gamma_total()));
    // Mass with min(x1, x2) < floor is at most 2 * LOWER_TAIL. A fixed tiny
    // floor would overflow the product density when the shape is small.
    let floor = p
        .marginal(Component::First)
        .quantile(LOWER_TAIL)
        .unwrap()
        .min(p.marginal(Component::Second).quantile(LOWER_TAIL).unwrap());

    // x1 < x2: outer over x1, inner over x2 in (x1, ∞)
    let hi_u2 = upper(&u2);
    let below = integrate_graded(
        |x1| {
            if x1 >= hi_u2 {
                return 0.0;
            }
            integrate_graded(
                |x2| {
                    if x2 > x1 {
                        p.joint_pdf(x1, x2, 0.0).unwrap().value
                    } else {
                        0.0
                    }
                },
                x1,
                hi_u2,
                &opts(),
            )
            .unwrap()
            .value
        },
        floor,
        upper(&m13),
        &opts(),
    )
    .unwrap()
    .value;

    // x2 < x1: outer over x1, inner over x2 in (0, x1)
    let above = integrate_graded(
        |x1| {
            if x1 <= floor {
                return 0.0;
            }
            integrate_graded(
                |x2| {
                    if x2 < x1 {
                        p.joint_pdf(x1, x2, 0.0).unwrap().value
                    } else {
                        0.0
                    }
                },
                floor,
                x1,
                &opts(),
            )
            .unwrap()
            .value
        },
        floor,
        upper(&u1).max(upper(&m23)),
        &opts(),
    )
    .unwrap()
    .value;

    let diagonal = integrate_graded(
        |x| p.joint_pdf(x, x, 0.0).unwrap().value,
        floor,
        hi,
        &opts(),
    )
    .unwrap()
    .value;

    MassSplit {
        below,
        above,
        diagonal,
    }
}

/// Maximizes the log-likelihood over `[lo, hi]³` by successively refined
/// grids: 41 points per axis, then a window of ±2 cells around the best point,
/// until the cell width is at most `resolution`. Returns the maximizer and the
/// final cell width.
pub fn grid_search(part: &RegionPartition, lo: f64, hi: f64, resolution: f64) -> ([f64; 3], f64) {
    const POINTS: usize = 41;
    let mut bounds = [(lo, hi); 3];
    loop {
        let steps = bounds.map(|(a, b)| (b - a) / (POINTS - 1) as f64);
        let mut best = ([0.0; 3], f64::NEG_INFINITY);
        for i in 0..POINTS {
            for j in 0..POINTS {
                for k in 0..POINTS {
                    let g = [
                        bounds[0].0 + i as f64 * steps[0],
                        bounds[1].0 + j as f64 * steps[1],
                        bounds[2].0 + k as f64 * steps[2],
                    ];
                    let ll = log_likelihood(part, &g).unwrap();
                    if ll > best.1 {
                        best = (g, ll);
                    }
                }
            }
        }
        let width = steps.iter().cloned().fold(0.0, f64::max);
        if width <= resolution {
            return (best.0, width);
        }
        for d in 0..3 {
            bounds[d] = (
                (best.0[d] - 2.0 * steps[d]).max(lo),
                (best.0[d] + 2.0 * steps[d]).min(hi),
            );
        }
    }
}

pub fn synthetic_pairs(p: &BemweParams, n: usize, seed: u64) -> Vec<BivariatePair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    p.sample(&mut rng, n)
}

pub fn synthetic_partition(p: &BemweParams, n: usize, seed: u64) -> RegionPartition {
    partition_sample(&synthetic_pairs(p, n, seed), p.shape(), 0.0).unwrap()
}

/// `|a - b| <= tol * max(|b|, 1)`.
pub fn close_rel(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}
