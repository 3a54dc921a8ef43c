use std::f64::consts::PI;

use crate::coefficients::{CoefficientSet, Jet, ScalarField};
use crate::error::{FracError, Result};
use crate::special::gamma;
use crate::steppers::{ProblemSpec, Regularity};

/// `X(x, y) = sin(πx) sin(πy)` and the derivatives `𝒜` needs.
pub fn sine_mode_jet(x: f64, y: f64) -> Jet {
    let (sx, cx) = (PI * x).sin_cos();
    let (sy, cy) = (PI * y).sin_cos();
    let u = sx * sy;
    Jet {
        u,
        ux: PI * cx * sy,
        uy: PI * sx * cy,
        uxx: -PI * PI * u,
        uyy: -PI * PI * u,
    }
}

/// `1 + t + t^α`.
fn profile(alpha: f64, t: f64) -> f64 {
    1.0 + t + t.powf(alpha)
}

fn exact_field(alpha: f64) -> ScalarField {
    ScalarField::new(move |x, y, t| sine_mode_jet(x, y).u * profile(alpha, t))
}

/// Caputo derivative of order `α` of the manufactured solution `X (1 + t + t^α)`.
pub fn manufactured_caputo(alpha: f64, x: f64, y: f64, t: f64) -> f64 {
    let xv = sine_mode_jet(x, y).u;
    let g = gamma(alpha + 1.0);
    if alpha < 1.0 {
        xv * (g + t.powf(1.0 - alpha) / gamma(2.0 - alpha))
    } else {
        xv * g
    }
}

/// `𝒜u` for the manufactured solution at `(x, y, t)`.
pub fn manufactured_operator(coeffs: &CoefficientSet, alpha: f64, x: f64, y: f64, t: f64) -> f64 {
    coeffs.apply_operator(x, y, t, &sine_mode_jet(x, y)) * profile(alpha, t)
}

/// Sub-diffusion with `u = sin(πx) sin(πy)(1 + t + t^α)` and the time-space dependent coefficients.
pub fn manufactured_subdiffusion(alpha: f64) -> Result<ProblemSpec> {
    manufactured_subdiffusion_with(alpha, CoefficientSet::variable())
}

/// [`manufactured_subdiffusion`] with other coefficients; the source is rebuilt to match.
pub fn manufactured_subdiffusion_with(alpha: f64, coeffs: CoefficientSet) -> Result<ProblemSpec> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FracError::invalid(format!("sub-diffusion needs 0 < alpha < 1, got {alpha}")));
    }
    let c = coeffs.clone();
    let g1 = gamma(alpha + 1.0);
    let g2 = gamma(2.0 - alpha);
    let source = ScalarField::new(move |x, y, t| {
        let jet = sine_mode_jet(x, y);
        jet.u * (g1 + t.powf(1.0 - alpha) / g2) - c.apply_operator(x, y, t, &jet) * profile(alpha, t)
    });
    let phi = ScalarField::new(|x, y, _| sine_mode_jet(x, y).u);
    let mut p = ProblemSpec::subdiffusion(alpha, coeffs, source, phi)?.with_exact(exact_field(alpha));
    p.regularity = Some(Regularity {
        sigma1: Some(alpha),
        sigma2: None,
        sigma3: None,
    });
    Ok(p)
}

/// Diffusion-wave with `u = sin(πx) sin(πy)(1 + t + t^α)`, `φ = ψ = sin(πx) sin(πy)`.
pub fn manufactured_diffwave(alpha: f64) -> Result<ProblemSpec> {
    manufactured_diffwave_with(alpha, CoefficientSet::variable())
}

/// [`manufactured_diffwave`] with other coefficients; source and `𝒜(tψ)` are rebuilt to match.
pub fn manufactured_diffwave_with(alpha: f64, coeffs: CoefficientSet) -> Result<ProblemSpec> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(FracError::invalid(format!("diffusion-wave needs 1 < alpha < 2, got {alpha}")));
    }
    let c = coeffs.clone();
    let g1 = gamma(alpha + 1.0);
    let source = ScalarField::new(move |x, y, t| {
        let jet = sine_mode_jet(x, y);
        g1 * jet.u - c.apply_operator(x, y, t, &jet) * profile(alpha, t)
    });
    let mode = ScalarField::new(|x, y, _| sine_mode_jet(x, y).u);
    let c = coeffs.clone();
    let a_tpsi = ScalarField::new(move |x, y, t| t * c.apply_operator(x, y, t, &sine_mode_jet(x, y)));
    let mut p = ProblemSpec::diffusion_wave(alpha, coeffs, source, mode.clone(), mode)?.with_exact(exact_field(alpha));
    p.a_tpsi = Some(a_tpsi);
    p.regularity = Some(Regularity {
        sigma1: None,
        sigma2: Some(alpha),
        sigma3: Some(0.5 * alpha),
    });
    Ok(p)
}

/// `2/σ1` for sub-diffusion, `4/α` for diffusion-wave.
pub fn gamma_opt(problem: &ProblemSpec) -> Result<f64> {
    problem
        .regularity
        .and_then(|r| r.limiting())
        .map(|s| 2.0 / s)
        .ok_or_else(|| FracError::Config("the problem has no regularity metadata for gamma = opt".into()))
}
