//! Bivariate EMWE distribution built from three independent shock sources.
//!
//! With `U_k ~ EMWE(γ_k, α, β, λ)` independent, the pair is
//! `X₁ = max(U₁, U₃)`, `X₂ = max(U₂, U₃)`. The law has an absolutely
//! continuous part on each side of the diagonal and a singular part on
//! `{x₁ = x₂}` carrying mass `γ₃ / (γ₁ + γ₂ + γ₃)`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::emwe::{EmweParams, FixedShape};
use crate::error::{require_non_negative, require_positive, Error, Result};

/// Selects `X₁` or `X₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Component {
    First,
    Second,
}

impl Component {
    pub fn from_index(index: u32) -> Result<Self> {
        match index {
            1 => Ok(Component::First),
            2 => Ok(Component::Second),
            other => Err(Error::Usage(format!(
                "component must be 1 or 2, got {other}"
            ))),
        }
    }

    pub fn index(self) -> u32 {
        match self {
            Component::First => 1,
            Component::Second => 2,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Component::First => Component::Second,
            Component::Second => Component::First,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BemweParams {
    gamma1: f64,
    gamma2: f64,
    gamma3: f64,
    shape: FixedShape,
}

impl BemweParams {
    pub fn new(
        gamma1: f64,
        gamma2: f64,
        gamma3: f64,
        alpha: f64,
        beta: f64,
        lambda: f64,
    ) -> Result<Self> {
        Self::with_shape(
            [gamma1, gamma2, gamma3],
            FixedShape::new(alpha, beta, lambda)?,
        )
    }

    pub fn with_shape(gammas: [f64; 3], shape: FixedShape) -> Result<Self> {
        Ok(Self {
            gamma1: require_positive("gamma1", gammas[0])?,
            gamma2: require_positive("gamma2", gammas[1])?,
            gamma3: require_positive("gamma3", gammas[2])?,
            shape,
        })
    }

    pub fn gammas(&self) -> [f64; 3] {
        [self.gamma1, self.gamma2, self.gamma3]
    }

    pub fn shape(&self) -> FixedShape {
        self.shape
    }

    /// `γ₁ + γ₃`, the shape of the `X₁` marginal.
    pub fn gamma13(&self) -> f64 {
        self.gamma1 + self.gamma3
    }

    /// `γ₂ + γ₃`, the shape of the `X₂` marginal.
    pub fn gamma23(&self) -> f64 {
        self.gamma2 + self.gamma3
    }

    /// `γ₁ + γ₂ + γ₃`, the shape of `max(X₁, X₂)`.
    pub fn gamma_total(&self) -> f64 {
        self.gamma1 + self.gamma2 + self.gamma3
    }

    /// EMWE with the given shape exponent and this model's `(α, β, λ)`.
    pub fn emwe(&self, gamma: f64) -> EmweParams {
        EmweParams::with_shape(gamma, self.shape).expect("sums of positive gammas are positive")
    }

    pub fn marginal(&self, which: Component) -> EmweParams {
        match which {
            Component::First => self.emwe(self.gamma13()),
            Component::Second => self.emwe(self.gamma23()),
        }
    }

    /// Probability of a tie, `γ₃ / (γ₁ + γ₂ + γ₃)`.
    pub fn singular_mass(&self) -> f64 {
        self.gamma3 / self.gamma_total()
    }
}

/// One bivariate observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BivariatePair {
    x1: f64,
    x2: f64,
}

impl BivariatePair {
    pub fn new(x1: f64, x2: f64) -> Result<Self> {
        Ok(Self {
            x1: require_non_negative("x1", x1)?,
            x2: require_non_negative("x2", x2)?,
        })
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn x2(&self) -> f64 {
        self.x2
    }

    pub fn swapped(&self) -> Self {
        Self {
            x1: self.x2,
            x2: self.x1,
        }
    }

    pub fn region(&self, tie_tol: f64) -> Region {
        Region::classify(self.x1, self.x2, tie_tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    X1Less,
    X2Less,
    Diagonal,
}

impl Region {
    /// `X1Less` if `x1 < x2 - tie_tol`, `X2Less` if `x2 < x1 - tie_tol`,
    /// otherwise `Diagonal`.
    pub fn classify(x1: f64, x2: f64, tie_tol: f64) -> Region {
        if x1 < x2 - tie_tol {
            Region::X1Less
        } else if x2 < x1 - tie_tol {
            Region::X2Less
        } else {
            Region::Diagonal
        }
    }

    pub fn kind(self) -> DensityKind {
        match self {
            Region::Diagonal => DensityKind::Density1dSingular,
            _ => DensityKind::Density2d,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::X1Less => "x1_less",
            Region::X2Less => "x2_less",
            Region::Diagonal => "diagonal",
        })
    }
}

/// Reference measure of a density value: Lebesgue on the plane, or arc
/// length along the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    Density2d,
    Density1dSingular,
}

impl fmt::Display for DensityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DensityKind::Density2d => "density_2d",
            DensityKind::Density1dSingular => "density_1d_singular",
        })
    }
}

/// A density tagged with the region it was evaluated in. Diagonal values are
/// densities with respect to 1-D measure and must not be added to planar ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityValue {
    pub region: Region,
    pub value: f64,
}

impl DensityValue {
    pub fn kind(&self) -> DensityKind {
        self.region.kind()
    }
}

fn require_positive_point(x1: f64, x2: f64) -> Result<()> {
    if x1 > 0.0 && x2 > 0.0 && x1.is_finite() && x2.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "density needs finite x1, x2 > 0, got ({x1}, {x2})"
        )))
    }
}

impl BemweParams {
    /// `F(x₁, x₂) = F(x₁; γ₁) F(x₂; γ₂) F(min(x₁, x₂); γ₃)`.
    pub fn joint_cdf(&self, x1: f64, x2: f64) -> Result<f64> {
        require_non_negative("x1", x1)?;
        require_non_negative("x2", x2)?;
        let l1 = self.shape.log_base_cdf(x1);
        let l2 = self.shape.log_base_cdf(x2);
        // group the shared-shock factor with the smaller coordinate
        let log_f = match Region::classify(x1, x2, 0.0) {
            Region::X1Less => self.gamma13() * l1 + self.gamma2 * l2,
            Region::X2Less => self.gamma1 * l1 + self.gamma23() * l2,
            Region::Diagonal => self.gamma_total() * l1,
        };
        Ok(log_f.exp())
    }

    /// Log of the region-dispatched density at a point with positive coordinates.
    pub fn joint_log_pdf(&self, x1: f64, x2: f64, tie_tol: f64) -> Result<(Region, f64)> {
        require_positive_point(x1, x2)?;
        let region = Region::classify(x1, x2, tie_tol);
        let value = match region {
            Region::X1Less => {
                self.emwe(self.gamma2).log_pdf(x2)? + self.emwe(self.gamma13()).log_pdf(x1)?
            }
            Region::X2Less => {
                self.emwe(self.gamma1).log_pdf(x1)? + self.emwe(self.gamma23()).log_pdf(x2)?
            }
            Region::Diagonal => {
                let x = x1.min(x2);
                self.singular_mass().ln() + self.emwe(self.gamma_total()).log_pdf(x)?
            }
        };
        Ok((region, value))
    }

    /// Joint density. Off the diagonal (beyond `tie_tol`) it is
    /// `f(x₂; γ₂) f(x₁; γ₁+γ₃)` or `f(x₁; γ₁) f(x₂; γ₂+γ₃)`; on it, the
    /// singular density `γ₃/(γ₁+γ₂+γ₃) · f(x; γ₁+γ₂+γ₃)` at `x = min(x₁, x₂)`.
    pub fn joint_pdf(&self, x1: f64, x2: f64, tie_tol: f64) -> Result<DensityValue> {
        let (region, log_value) = self.joint_log_pdf(x1, x2, tie_tol)?;
        Ok(DensityValue {
            region,
            value: log_value.exp(),
        })
    }

    pub fn marginal_cdf(&self, which: Component, x: f64) -> Result<f64> {
        self.marginal(which).cdf(x)
    }

    pub fn marginal_pdf(&self, which: Component, x: f64) -> Result<f64> {
        self.marginal(which).pdf(x)
    }

    /// Density of `X_i` at `xi` given `X_j = xj`, as the joint density over
    /// the marginal density of `X_j`. In the diagonal region the value is the
    /// probability of the atom `X_i = xj`.
    pub fn conditional_pdf(
        &self,
        i: Component,
        xi: f64,
        xj: f64,
        tie_tol: f64,
    ) -> Result<DensityValue> {
        let (x1, x2) = match i {
            Component::First => (xi, xj),
            Component::Second => (xj, xi),
        };
        let joint = self.joint_pdf(x1, x2, tie_tol)?;
        let marginal = self.marginal_pdf(i.other(), xj)?;
        if !(marginal > 0.0 && marginal.is_finite()) {
            return Err(Error::Conditioning(format!(
                "marginal density of X{} at {xj} is {marginal}",
                i.other().index()
            )));
        }
        Ok(DensityValue {
            region: joint.region,
            value: joint.value / marginal,
        })
    }

    /// `P(X₁ > x₁, X₂ > x₂) = 1 - F₁(x₁) - F₂(x₂) + F(x₁, x₂)`.
    pub fn joint_survival(&self, x1: f64, x2: f64) -> Result<f64> {
        let f = self.joint_cdf(x1, x2)?;
        let f1 = self.marginal_cdf(Component::First, x1)?;
        let f2 = self.marginal_cdf(Component::Second, x2)?;
        Ok((1.0 - f1 - f2 + f).clamp(0.0, 1.0))
    }

    /// Bivariate failure rate `f(x₁, x₂) / S(x₁, x₂)`, with the diagonal
    /// density used for exact ties.
    pub fn bivariate_hazard(&self, x1: f64, x2: f64) -> Result<f64> {
        let density = self.joint_pdf(x1, x2, 0.0)?;
        let survival = self.joint_survival(x1, x2)?;
        if survival <= 0.0 {
            return Err(Error::Overflow(format!(
                "joint survival underflows to 0 at ({x1}, {x2})"
            )));
        }
        Ok(density.value / survival)
    }

    /// CDF of `max(X₁, X₂)`, an EMWE law with shape `γ₁ + γ₂ + γ₃`.
    pub fn max_cdf(&self, y: f64) -> Result<f64> {
        self.emwe(self.gamma_total()).cdf(y)
    }

    /// CDF of `min(X₁, X₂)`: `F₁(w) + F₂(w) - F(w, w)`.
    pub fn min_cdf(&self, w: f64) -> Result<f64> {
        Ok(
            self.marginal_cdf(Component::First, w)? + self.marginal_cdf(Component::Second, w)?
                - self.joint_cdf(w, w)?,
        )
    }

    /// One draw from the shock model.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> BivariatePair {
        let u1 = self.emwe(self.gamma1).draw(rng);
        let u2 = self.emwe(self.gamma2).draw(rng);
        let u3 = self.emwe(self.gamma3).draw(rng);
        BivariatePair {
            x1: u1.max(u3),
            x2: u2.max(u3),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<BivariatePair> {
        (0..n).map(|_| self.draw(rng)).collect()
    }

    /// Sum of region-dispatched log densities over a sample.
    pub fn log_likelihood(&self, pairs: &[BivariatePair], tie_tol: f64) -> Result<f64> {
        pairs.iter().try_fold(0.0, |acc, p| {
            Ok(acc + self.joint_log_pdf(p.x1, p.x2, tie_tol)?.1)
        })
    }
}
