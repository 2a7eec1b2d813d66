//! Fit reports: a key-value text document for people and a JSON sidecar that
//! keeps full precision.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::emwe::FixedShape;
use crate::error::{Error, Result};
use crate::inference::{fit_mle, partition_sample, FitOptions, FitReport};

pub const TOOL_VERSION: &str = concat!("bemwe ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub source: String,
    pub n: usize,
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub scale: f64,
    pub tie_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool_version: String,
    pub input: InputSummary,
    pub fixed: FixedShape,
    pub fit: FitReport,
    pub seed: Option<u64>,
}

/// Partitions `dataset` and fits `(γ₁, γ₂, γ₃)` with `fixed` held constant.
pub fn fit_dataset(
    dataset: &Dataset,
    fixed: FixedShape,
    tie_tol: f64,
    opts: &FitOptions,
) -> Result<ReportDocument> {
    if dataset.is_empty() {
        return Err(Error::input(&dataset.source, "dataset is empty"));
    }
    let part = partition_sample(&dataset.pairs, fixed, tie_tol)?;
    let fit = fit_mle(&part, opts)?;
    let [n1, n2, n3] = part.counts();
    Ok(ReportDocument {
        tool_version: TOOL_VERSION.to_string(),
        input: InputSummary {
            source: dataset.source.clone(),
            n: part.n(),
            n1,
            n2,
            n3,
            scale: dataset.scale,
            tie_tol,
        },
        fixed,
        fit,
        seed: None,
    })
}

/// Six significant digits, switching to exponent form for very large or
/// very small magnitudes.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.5e}").parse().expect("formatted float parses");
    let a = rounded.abs();
    if a == 0.0 || (1e-4..1e7).contains(&a) {
        rounded.to_string()
    } else {
        format!("{x:.5e}")
    }
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::input("report json", e.to_string()))
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let fit = &self.fit;
        let i = &self.input;
        let _ = writeln!(out, "# {}", self.tool_version);
        let _ = writeln!(out, "[input]");
        let _ = writeln!(out, "source = {}", i.source);
        let _ = writeln!(out, "n = {}", i.n);
        let _ = writeln!(out, "n1 = {}  # x1 < x2", i.n1);
        let _ = writeln!(out, "n2 = {}  # x2 < x1", i.n2);
        let _ = writeln!(out, "n3 = {}  # ties", i.n3);
        let _ = writeln!(out, "scale = {}", sig6(i.scale));
        let _ = writeln!(out, "tie_tol = {}", sig6(i.tie_tol));
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed = {seed}");
        }
        let _ = writeln!(out, "\n[fixed]");
        let _ = writeln!(out, "alpha = {}", sig6(self.fixed.alpha()));
        let _ = writeln!(out, "beta = {}", sig6(self.fixed.beta()));
        let _ = writeln!(out, "lambda = {}", sig6(self.fixed.lambda()));
        let _ = writeln!(out, "\n[estimates]");
        let se = fit.std_errors();
        for (k, (est, se)) in fit.estimates.iter().zip(se).enumerate() {
            let _ = writeln!(out, "gamma{} = {}  # se {}", k + 1, sig6(*est), sig6(se));
        }
        let _ = writeln!(out, "loglik = {}", sig6(fit.loglik));
        let _ = writeln!(out, "\n[covariance]");
        for (k, row) in fit.covariance.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|v| sig6(*v)).collect();
            let _ = writeln!(out, "row{} = {}", k + 1, cells.join(", "));
        }
        let _ = writeln!(out, "\n[confidence_intervals]");
        let _ = writeln!(out, "level = {}", sig6(fit.level));
        let _ = writeln!(out, "z = {}", sig6(fit.z));
        for (k, ci) in fit.conf_intervals.iter().enumerate() {
            let _ = write!(
                out,
                "gamma{} = ({}, {})",
                k + 1,
                sig6(ci.lower),
                sig6(ci.upper)
            );
            if ci.unclamped_lower < 0.0 {
                let _ = write!(out, "  # lower truncated from {}", sig6(ci.unclamped_lower));
            }
            out.push('\n');
        }
        let _ = writeln!(out, "\n[diagnostics]");
        let _ = writeln!(out, "converged = {}", fit.converged);
        let _ = writeln!(out, "iterations = {}", fit.iterations);
        let _ = writeln!(out, "score_norm = {}", sig6(fit.score_norm));
        if let Some(k) = fit.boundary_component {
            let _ = writeln!(out, "boundary = gamma{}", k + 1);
        }
        out
    }
}
