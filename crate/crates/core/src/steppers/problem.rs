use serde::{Deserialize, Serialize};

use crate::coefficients::{CoefficientSet, ScalarField};
use crate::error::{FracError, Result};
use crate::spatial::Rect;

/// Which fractional evolution equation is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    /// `0 < α < 1`, one initial condition.
    Subdiffusion,
    /// `1 < α < 2`, initial value and velocity.
    Diffusionwave,
}

/// How the `𝒜(tψ)` term of the reduced diffusion-wave system is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PsiMode {
    /// [`PsiMode::Analytic`] when the problem carries `𝒜(tψ)`, otherwise [`PsiMode::Discrete`].
    #[default]
    Auto,
    /// Discrete operator applied to `t_{n-θ} ψ_h`.
    Discrete,
    /// Pointwise values of a user-supplied `𝒜(tψ)`.
    Analytic,
}

/// A linear time-fractional problem with homogeneous Dirichlet data.
///
/// Spatial functions (`phi`, `psi`) are [`ScalarField`]s whose time argument is ignored.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    pub alpha: f64,
    pub coeffs: CoefficientSet,
    pub domain: Rect,
    pub horizon: f64,
    pub source: ScalarField,
    pub phi: ScalarField,
    pub psi: Option<ScalarField>,
    /// `𝒜(tψ)` as a function of `(x, y, t)`, used with [`PsiMode::Analytic`].
    pub a_tpsi: Option<ScalarField>,
    pub exact: Option<ScalarField>,
    pub regularity: Option<Regularity>,
}

/// Temporal regularity exponents of the exact solution, used for expected orders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regularity {
    pub sigma1: Option<f64>,
    pub sigma2: Option<f64>,
    pub sigma3: Option<f64>,
}

impl Regularity {
    /// Exponent limiting the temporal order on a graded mesh.
    pub fn limiting(&self) -> Option<f64> {
        [self.sigma1, self.sigma2, self.sigma3].into_iter().flatten().reduce(f64::min)
    }

    /// `min{2, γσ}` over the recorded exponents.
    pub fn expected_temporal_order(&self, gamma: f64) -> Option<f64> {
        self.limiting().map(|s| (gamma * s).min(2.0))
    }
}

impl ProblemSpec {
    pub fn subdiffusion(alpha: f64, coeffs: CoefficientSet, source: ScalarField, phi: ScalarField) -> Result<Self> {
        let p = Self {
            kind: ProblemKind::Subdiffusion,
            alpha,
            coeffs,
            domain: Rect::UNIT,
            horizon: 1.0,
            source,
            phi,
            psi: None,
            a_tpsi: None,
            exact: None,
            regularity: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn diffusion_wave(
        alpha: f64,
        coeffs: CoefficientSet,
        source: ScalarField,
        phi: ScalarField,
        psi: ScalarField,
    ) -> Result<Self> {
        let p = Self {
            kind: ProblemKind::Diffusionwave,
            alpha,
            coeffs,
            domain: Rect::UNIT,
            horizon: 1.0,
            source,
            phi,
            psi: Some(psi),
            a_tpsi: None,
            exact: None,
            regularity: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_exact(mut self, exact: ScalarField) -> Self {
        self.exact = Some(exact);
        self
    }

    pub fn with_domain(mut self, domain: Rect, horizon: f64) -> Result<Self> {
        self.domain = domain;
        self.horizon = horizon;
        self.validate()?;
        Ok(self)
    }

    /// Order of the discrete Caputo operator: `α` or `α/2`.
    pub fn beta(&self) -> f64 {
        match self.kind {
            ProblemKind::Subdiffusion => self.alpha,
            ProblemKind::Diffusionwave => 0.5 * self.alpha,
        }
    }

    /// Offset parameter `θ = β/2` the time mesh must carry.
    pub fn theta(&self) -> f64 {
        0.5 * self.beta()
    }

    /// Resolve [`PsiMode::Auto`] against this problem.
    pub fn resolve_psi_mode(&self, mode: PsiMode) -> PsiMode {
        match mode {
            PsiMode::Auto if self.a_tpsi.is_some() => PsiMode::Analytic,
            PsiMode::Auto => PsiMode::Discrete,
            other => other,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            ProblemKind::Subdiffusion if !(self.alpha > 0.0 && self.alpha < 1.0) => {
                return Err(FracError::invalid(format!("sub-diffusion needs 0 < alpha < 1, got {}", self.alpha)));
            }
            ProblemKind::Diffusionwave if !(self.alpha > 1.0 && self.alpha < 2.0) => {
                return Err(FracError::invalid(format!("diffusion-wave needs 1 < alpha < 2, got {}", self.alpha)));
            }
            ProblemKind::Diffusionwave if self.psi.is_none() => {
                return Err(FracError::invalid("diffusion-wave problems need an initial velocity psi"));
            }
            _ => {}
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(FracError::invalid(format!("horizon must be positive, got {}", self.horizon)));
        }
        let r = &self.domain;
        if !(r.x_r > r.x_l && r.y_r > r.y_l) {
            return Err(FracError::invalid("empty spatial domain"));
        }
        Ok(())
    }
}
