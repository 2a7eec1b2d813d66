//! Exponentiated modified Weibull extension (EMWE) lifetimes and their
//! Marshall–Olkin bivariate extension (BEMWE).
//!
//! - [`emwe`]: univariate CDF, density, quantile, hazard and sampler.
//! - [`bemwe`]: joint CDF, three-region joint density with a singular
//!   diagonal part, marginals, conditionals, survival, min/max laws and the
//!   shock-model sampler.
//! - [`moments`]: marginal moments by adaptive quadrature, with a Monte Carlo
//!   cross-check.
//! - [`inference`]: maximum likelihood for `(γ₁, γ₂, γ₃)` with `(α, β, λ)`
//!   fixed, observed information and Wald intervals.
//! - [`dataset`], [`report`]: ingestion and serialized fit reports.

pub mod bemwe;
pub mod dataset;
pub mod emwe;
pub mod error;
pub mod gof;
pub mod inference;
pub mod moments;
pub mod quadrature;
pub mod report;

pub use bemwe::{BemweParams, BivariatePair, Component, DensityKind, DensityValue, Region};
pub use dataset::Dataset;
pub use emwe::{EmweParams, FixedShape};
pub use error::{Error, Result};
pub use inference::{FitOptions, FitReport, RegionPartition};
pub use moments::MomentRequest;
pub use report::ReportDocument;
