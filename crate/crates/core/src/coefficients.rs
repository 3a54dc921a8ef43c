//! Variable coefficients of the elliptic operator
//! `𝒜u = a1 u_xx + a2 u_yy + b1 u_x + b2 u_y + b3 u` and the positive weight
//! fields `p = d e^{-C_p t}/(a1 a2)`, `p1 = p a1`, `p2 = p a2`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{FracError, Result};
use crate::spatial::Rect;

type FieldFn = dyn Fn(f64, f64, f64) -> f64 + Send + Sync;

/// A scalar function of `(x, y, t)`.
#[derive(Clone)]
pub struct ScalarField(Arc<FieldFn>);

impl ScalarField {
    pub fn new(f: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_, _, _| c)
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64, t: f64) -> f64 {
        (self.0)(x, y, t)
    }
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ScalarField(..)")
    }
}

#[derive(Debug, Clone, Copy)]
enum Axis {
    X,
    Y,
    T,
}

/// Fourth-order central difference.
fn fd4(f: &ScalarField, axis: Axis, x: f64, y: f64, t: f64, h: f64) -> f64 {
    let at = |s: f64| match axis {
        Axis::X => f.eval(x + s, y, t),
        Axis::Y => f.eval(x, y + s, t),
        Axis::T => f.eval(x, y, t + s),
    };
    (at(-2.0 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2.0 * h)) / (12.0 * h)
}

fn fd_field(f: &ScalarField, axis: Axis, h: f64) -> ScalarField {
    let f = f.clone();
    ScalarField::new(move |x, y, t| fd4(&f, axis, x, y, t, h))
}

/// Default step for the finite-difference fallback.
pub const FD_STEP: f64 = 1e-3;

/// Coefficients, optional analytic partials, and the choice of `d` and `C_p`.
#[derive(Debug, Clone)]
pub struct CoefficientSet {
    pub a1: ScalarField,
    pub a2: ScalarField,
    pub b1: ScalarField,
    pub b2: ScalarField,
    pub b3: ScalarField,
    pub dx_a2: Option<ScalarField>,
    pub dy_a1: Option<ScalarField>,
    pub dt_a1: Option<ScalarField>,
    pub dt_a2: Option<ScalarField>,
    /// `d(x, y)`; the time argument is ignored.
    pub d: ScalarField,
    pub dx_d: Option<ScalarField>,
    pub dy_d: Option<ScalarField>,
    pub c_p: f64,
    /// Allow fourth-order finite differences for missing partials.
    pub fd_fallback: bool,
    pub fd_step: f64,
}

impl CoefficientSet {
    /// Coefficients without analytic partials, `d = 1` and `C_p = 0`.
    pub fn new(a1: ScalarField, a2: ScalarField, b1: ScalarField, b2: ScalarField, b3: ScalarField) -> Self {
        Self {
            a1,
            a2,
            b1,
            b2,
            b3,
            dx_a2: None,
            dy_a1: None,
            dt_a1: None,
            dt_a2: None,
            d: ScalarField::constant(1.0),
            dx_d: Some(ScalarField::constant(0.0)),
            dy_d: Some(ScalarField::constant(0.0)),
            c_p: 0.0,
            fd_fallback: true,
            fd_step: FD_STEP,
        }
    }

    /// `a1 = a2 = 1`, no advection or reaction.
    pub fn identity() -> Self {
        let mut c = Self::new(
            ScalarField::constant(1.0),
            ScalarField::constant(1.0),
            ScalarField::constant(0.0),
            ScalarField::constant(0.0),
            ScalarField::constant(0.0),
        );
        let zero = ScalarField::constant(0.0);
        c.dx_a2 = Some(zero.clone());
        c.dy_a1 = Some(zero.clone());
        c.dt_a1 = Some(zero.clone());
        c.dt_a2 = Some(zero);
        c
    }

    /// Constant anisotropic diffusion with advection and reaction.
    pub fn constant() -> Self {
        let mut c = Self::new(
            ScalarField::constant(1.5),
            ScalarField::constant(0.5),
            ScalarField::constant(1.0),
            ScalarField::constant(-1.0),
            ScalarField::constant(-0.5),
        );
        let zero = ScalarField::constant(0.0);
        c.dx_a2 = Some(zero.clone());
        c.dy_a1 = Some(zero.clone());
        c.dt_a1 = Some(zero.clone());
        c.dt_a2 = Some(zero);
        c
    }

    /// Time-space dependent benchmark coefficients with
    /// `a1 = e^{x+y}(1+cos t)`, `a2 = e^{(x+y)t}(1+t^{3/2})`, `b1 = sin(xyt)`,
    /// `b2 = cos(xyt)`, `b3 = (x²+y²)t`, `d = e^{sin(x+y)}` and `C_p = 3`.
    pub fn variable() -> Self {
        let a2 = |x: f64, y: f64, t: f64| ((x + y) * t).exp() * (1.0 + t.powf(1.5));
        Self {
            a1: ScalarField::new(|x, y, t| (x + y).exp() * (1.0 + t.cos())),
            a2: ScalarField::new(a2),
            b1: ScalarField::new(|x, y, t| (x * y * t).sin()),
            b2: ScalarField::new(|x, y, t| (x * y * t).cos()),
            b3: ScalarField::new(|x, y, t| (x * x + y * y) * t),
            dx_a2: Some(ScalarField::new(move |x, y, t| t * a2(x, y, t))),
            dy_a1: Some(ScalarField::new(|x, y, t| (x + y).exp() * (1.0 + t.cos()))),
            dt_a1: Some(ScalarField::new(|x, y, t| -(x + y).exp() * t.sin())),
            dt_a2: Some(ScalarField::new(|x, y, t| {
                let e = ((x + y) * t).exp();
                (x + y) * e * (1.0 + t.powf(1.5)) + 1.5 * e * t.sqrt()
            })),
            d: ScalarField::new(|x, y, _| (x + y).sin().exp()),
            dx_d: Some(ScalarField::new(|x, y, _| (x + y).cos() * (x + y).sin().exp())),
            dy_d: Some(ScalarField::new(|x, y, _| (x + y).cos() * (x + y).sin().exp())),
            c_p: 3.0,
            fd_fallback: true,
            fd_step: FD_STEP,
        }
    }

    /// Named preset: `variable`, `constant` or `identity`.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "variable" => Ok(Self::variable()),
            "constant" => Ok(Self::constant()),
            "identity" => Ok(Self::identity()),
            other => Err(FracError::Config(format!("unknown coefficient preset `{other}`"))),
        }
    }

    pub fn preset_names() -> &'static [&'static str] {
        &["variable", "constant", "identity"]
    }

    pub fn with_cp(mut self, c_p: f64) -> Self {
        self.c_p = c_p;
        self
    }

    pub fn with_d(mut self, d: ScalarField, dx_d: Option<ScalarField>, dy_d: Option<ScalarField>) -> Self {
        self.d = d;
        self.dx_d = dx_d;
        self.dy_d = dy_d;
        self
    }

    fn partial(&self, given: &Option<ScalarField>, base: &ScalarField, axis: Axis, name: &'static str) -> Result<ScalarField> {
        match given {
            Some(f) => Ok(f.clone()),
            None if self.fd_fallback => Ok(fd_field(base, axis, self.fd_step)),
            None => Err(FracError::MissingPartial(name)),
        }
    }

    pub fn dt_a1_field(&self) -> Result<ScalarField> {
        self.partial(&self.dt_a1, &self.a1, Axis::T, "dt_a1")
    }

    pub fn dt_a2_field(&self) -> Result<ScalarField> {
        self.partial(&self.dt_a2, &self.a2, Axis::T, "dt_a2")
    }

    /// Applies `𝒜` to a function given through its value and derivatives at one point.
    pub fn apply_operator(&self, x: f64, y: f64, t: f64, jet: &Jet) -> f64 {
        self.a1.eval(x, y, t) * jet.uxx
            + self.a2.eval(x, y, t) * jet.uyy
            + self.b1.eval(x, y, t) * jet.ux
            + self.b2.eval(x, y, t) * jet.uy
            + self.b3.eval(x, y, t) * jet.u
    }
}

/// Value and the derivatives of a spatial function needed by `𝒜`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Jet {
    pub u: f64,
    pub ux: f64,
    pub uy: f64,
    pub uxx: f64,
    pub uyy: f64,
}

/// The weight fields derived from a [`CoefficientSet`].
#[derive(Debug, Clone)]
pub struct AuxFields {
    coeffs: CoefficientSet,
    dx_a2: ScalarField,
    dy_a1: ScalarField,
    dx_d: ScalarField,
    dy_d: ScalarField,
}

/// Derive `p, p1..p4` from the coefficients.
pub fn build_aux(coeffs: &CoefficientSet) -> Result<AuxFields> {
    Ok(AuxFields {
        dx_a2: coeffs.partial(&coeffs.dx_a2, &coeffs.a2, Axis::X, "dx_a2")?,
        dy_a1: coeffs.partial(&coeffs.dy_a1, &coeffs.a1, Axis::Y, "dy_a1")?,
        dx_d: coeffs.partial(&coeffs.dx_d, &coeffs.d, Axis::X, "dx_d")?,
        dy_d: coeffs.partial(&coeffs.dy_d, &coeffs.d, Axis::Y, "dy_d")?,
        coeffs: coeffs.clone(),
    })
}

impl AuxFields {
    pub fn coeffs(&self) -> &CoefficientSet {
        &self.coeffs
    }

    #[inline]
    fn decay(&self, x: f64, y: f64, t: f64) -> f64 {
        self.coeffs.d.eval(x, y, t) * (-self.coeffs.c_p * t).exp()
    }

    pub fn p(&self, x: f64, y: f64, t: f64) -> f64 {
        self.decay(x, y, t) / (self.coeffs.a1.eval(x, y, t) * self.coeffs.a2.eval(x, y, t))
    }

    pub fn p1(&self, x: f64, y: f64, t: f64) -> f64 {
        self.decay(x, y, t) / self.coeffs.a2.eval(x, y, t)
    }

    pub fn p2(&self, x: f64, y: f64, t: f64) -> f64 {
        self.decay(x, y, t) / self.coeffs.a1.eval(x, y, t)
    }

    /// `(p1)_x = e^{-C_p t}(d_x a2 - d (a2)_x)/a2²`.
    pub fn p1_x(&self, x: f64, y: f64, t: f64) -> f64 {
        let a2 = self.coeffs.a2.eval(x, y, t);
        let d = self.coeffs.d.eval(x, y, t);
        (-self.coeffs.c_p * t).exp() * (self.dx_d.eval(x, y, t) * a2 - d * self.dx_a2.eval(x, y, t)) / (a2 * a2)
    }

    /// `(p2)_y = e^{-C_p t}(d_y a1 - d (a1)_y)/a1²`.
    pub fn p2_y(&self, x: f64, y: f64, t: f64) -> f64 {
        let a1 = self.coeffs.a1.eval(x, y, t);
        let d = self.coeffs.d.eval(x, y, t);
        (-self.coeffs.c_p * t).exp() * (self.dy_d.eval(x, y, t) * a1 - d * self.dy_a1.eval(x, y, t)) / (a1 * a1)
    }

    /// `p3 = b1 - p^{-1}(p1)_x`.
    pub fn p3(&self, x: f64, y: f64, t: f64) -> f64 {
        self.coeffs.b1.eval(x, y, t) - self.p1_x(x, y, t) / self.p(x, y, t)
    }

    /// `p4 = b2 - p^{-1}(p2)_y`.
    pub fn p4(&self, x: f64, y: f64, t: f64) -> f64 {
        self.coeffs.b2.eval(x, y, t) - self.p2_y(x, y, t) / self.p(x, y, t)
    }

    pub fn b3(&self, x: f64, y: f64, t: f64) -> f64 {
        self.coeffs.b3.eval(x, y, t)
    }
}

fn lattice(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    let count = count.max(2);
    (0..count).map(move |i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
}

/// Sampled `sup |(a1)_t/a1| + |(a2)_t/a2|` over `domain × [0, T]` on a `density³` lattice.
pub fn estimate_cp(coeffs: &CoefficientSet, domain: &Rect, horizon: f64, density: usize) -> Result<f64> {
    let da1 = coeffs.dt_a1_field()?;
    let da2 = coeffs.dt_a2_field()?;
    let mut sup = 0.0f64;
    for t in lattice(0.0, horizon, density) {
        for y in lattice(domain.y_l, domain.y_r, density) {
            for x in lattice(domain.x_l, domain.x_r, density) {
                let v = (da1.eval(x, y, t) / coeffs.a1.eval(x, y, t)).abs()
                    + (da2.eval(x, y, t) / coeffs.a2.eval(x, y, t)).abs();
                sup = sup.max(v);
            }
        }
    }
    Ok(sup)
}

/// Outcome of one sampled assumption check.
#[derive(Debug, Clone, Serialize)]
pub struct AssumptionCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Value at the worst sample (minimum for positivity, maximum otherwise).
    pub worst_value: f64,
    pub worst_point: [f64; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct AssumptionReport {
    pub checks: Vec<AssumptionCheck>,
}

impl AssumptionReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&AssumptionCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Sampled checks of coefficient positivity, the `C_p` bound, boundedness of
/// `b1, b2, b3` and the time monotonicity of `p, p1, p2`.
///
/// The interior lattice excludes the boundary of the spatial domain; `tolerance`
/// is the relative slack applied to the `C_p` bound and the monotonicity test.
pub fn verify_assumptions(
    coeffs: &CoefficientSet,
    domain: &Rect,
    horizon: f64,
    density: usize,
    tolerance: f64,
) -> Result<AssumptionReport> {
    let aux = build_aux(coeffs)?;
    let da1 = coeffs.dt_a1_field()?;
    let da2 = coeffs.dt_a2_field()?;
    let density = density.max(3);
    let xs: Vec<f64> = (1..density).map(|i| domain.x_l + (domain.x_r - domain.x_l) * i as f64 / density as f64).collect();
    let ys: Vec<f64> = (1..density).map(|i| domain.y_l + (domain.y_r - domain.y_l) * i as f64 / density as f64).collect();
    let ts: Vec<f64> = lattice(0.0, horizon, density + 1).collect();

    struct Track {
        value: f64,
        point: [f64; 3],
        minimise: bool,
    }
    impl Track {
        fn new(minimise: bool) -> Self {
            Self {
                value: if minimise { f64::INFINITY } else { f64::NEG_INFINITY },
                point: [f64::NAN; 3],
                minimise,
            }
        }
        fn see(&mut self, v: f64, p: [f64; 3]) {
            let better = if self.minimise { v < self.value } else { v > self.value };
            if better || v.is_nan() {
                self.value = v;
                self.point = p;
            }
        }
    }

    let mut a1_pos = Track::new(true);
    let mut a2_pos = Track::new(true);
    let mut cp = Track::new(false);
    let mut b1 = Track::new(false);
    let mut b2 = Track::new(false);
    let mut b3 = Track::new(false);
    let mut mono = Track::new(false);
    for &x in &xs {
        for &y in &ys {
            let mut prev: Option<[f64; 3]> = None;
            for &t in &ts {
                let pt = [x, y, t];
                let a1 = coeffs.a1.eval(x, y, t);
                let a2 = coeffs.a2.eval(x, y, t);
                a1_pos.see(a1, pt);
                a2_pos.see(a2, pt);
                cp.see((da1.eval(x, y, t) / a1).abs() + (da2.eval(x, y, t) / a2).abs(), pt);
                b1.see(coeffs.b1.eval(x, y, t).abs(), pt);
                b2.see(coeffs.b2.eval(x, y, t).abs(), pt);
                b3.see(coeffs.b3.eval(x, y, t).abs(), pt);
                let cur = [aux.p(x, y, t), aux.p1(x, y, t), aux.p2(x, y, t)];
                if let Some(prev) = prev {
                    for i in 0..3 {
                        mono.see((cur[i] - prev[i]) / prev[i].abs().max(f64::MIN_POSITIVE), pt);
                    }
                }
                prev = Some(cur);
            }
        }
    }
    let finite = |t: &Track| t.value.is_finite();
    let checks = vec![
        AssumptionCheck {
            name: "a1_positive",
            passed: a1_pos.value > 0.0,
            worst_value: a1_pos.value,
            worst_point: a1_pos.point,
        },
        AssumptionCheck {
            name: "a2_positive",
            passed: a2_pos.value > 0.0,
            worst_value: a2_pos.value,
            worst_point: a2_pos.point,
        },
        AssumptionCheck {
            name: "cp_bound",
            passed: cp.value <= coeffs.c_p * (1.0 + tolerance),
            worst_value: cp.value,
            worst_point: cp.point,
        },
        AssumptionCheck {
            name: "b1_bounded",
            passed: finite(&b1),
            worst_value: b1.value,
            worst_point: b1.point,
        },
        AssumptionCheck {
            name: "b2_bounded",
            passed: finite(&b2),
            worst_value: b2.value,
            worst_point: b2.point,
        },
        AssumptionCheck {
            name: "b3_bounded",
            passed: finite(&b3),
            worst_value: b3.value,
            worst_point: b3.point,
        },
        AssumptionCheck {
            name: "weights_nonincreasing",
            passed: mono.value <= tolerance.max(1e-12),
            worst_value: mono.value,
            worst_point: mono.point,
        },
    ];
    Ok(AssumptionReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNIT: Rect = Rect {
        x_l: 0.0,
        x_r: 1.0,
        y_l: 0.0,
        y_r: 1.0,
    };

    #[test]
    fn identity_fields() {
        let aux = build_aux(&CoefficientSet::identity()).unwrap();
        for &(x, y, t) in &[(0.1, 0.2, 0.0), (0.7, 0.3, 0.9)] {
            assert_eq!(aux.p(x, y, t), 1.0);
            assert_eq!(aux.p1(x, y, t), 1.0);
            assert_eq!(aux.p2(x, y, t), 1.0);
            assert_eq!(aux.p3(x, y, t), 0.0);
            assert_eq!(aux.p4(x, y, t), 0.0);
        }
    }

    #[test]
    fn variable_p1_at_zero() {
        let aux = build_aux(&CoefficientSet::variable()).unwrap();
        for &(x, y) in &[(0.1, 0.2), (0.5, 0.5), (0.9, 0.33), (0.25, 0.75), (0.6, 0.05)] {
            let want = (x + y as f64).sin().exp();
            assert!((aux.p1(x, y, 0.0) - want).abs() < 1e-14 * want);
        }
    }

    #[test]
    fn variable_p3_p4_closed_forms() {
        let c = CoefficientSet::variable();
        let aux = build_aux(&c).unwrap();
        for &(x, y, t) in &[(0.1, 0.2, 0.3), (0.8, 0.6, 0.95), (0.4, 0.9, 0.01)] {
            let a1 = c.a1.eval(x, y, t);
            let a2 = c.a2.eval(x, y, t);
            let p3 = (x * y * t).sin() - a1 * ((x + y).cos() - t);
            let p4 = (x * y * t).cos() - a2 * ((x + y).cos() - 1.0);
            assert!((aux.p3(x, y, t) - p3).abs() < 1e-12 * (1.0 + p3.abs()));
            assert!((aux.p4(x, y, t) - p4).abs() < 1e-12 * (1.0 + p4.abs()));
        }
    }

    #[test]
    fn product_identities() {
        let c = CoefficientSet::variable();
        let aux = build_aux(&c).unwrap();
        for &(x, y, t) in &[(0.1, 0.2, 0.3), (0.8, 0.6, 0.95)] {
            let p = aux.p(x, y, t);
            assert!((p * c.a1.eval(x, y, t) - aux.p1(x, y, t)).abs() <= 4.0 * f64::EPSILON * aux.p1(x, y, t));
            assert!((p * c.a2.eval(x, y, t) - aux.p2(x, y, t)).abs() <= 4.0 * f64::EPSILON * aux.p2(x, y, t));
        }
    }

    #[test]
    fn missing_partial() {
        let mut c = CoefficientSet::new(
            ScalarField::constant(1.0),
            ScalarField::new(|x, _, _| 1.0 + x),
            ScalarField::constant(0.0),
            ScalarField::constant(0.0),
            ScalarField::constant(0.0),
        );
        c.fd_fallback = false;
        assert!(matches!(build_aux(&c), Err(FracError::MissingPartial("dx_a2"))));
        c.fd_fallback = true;
        let aux = build_aux(&c).unwrap();
        // p1 = 1/(1+x), (p1)_x = -1/(1+x)^2
        assert!((aux.p1_x(0.5, 0.5, 0.0) + 1.0 / 2.25).abs() < 1e-11);
    }

    #[test]
    fn cp_estimates() {
        assert_eq!(estimate_cp(&CoefficientSet::identity(), &UNIT, 1.0, 8).unwrap(), 0.0);
        let c = CoefficientSet::new(
            ScalarField::new(|_, _, t| t.exp()),
            ScalarField::constant(1.0),
            ScalarField::constant(0.0),
            ScalarField::constant(0.0),
            ScalarField::constant(0.0),
        );
        assert!((estimate_cp(&c, &UNIT, 1.0, 6).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn variable_cp_sup_is_at_corner() {
        // sup at x = y = 1, t = 1: tan(1/2) + 2 + 3/4
        let est = estimate_cp(&CoefficientSet::variable(), &UNIT, 1.0, 41).unwrap();
        let corner = 0.5f64.tan() + 2.75;
        assert!((est - corner).abs() < 1e-12, "{est} {corner}");
        assert!(est > 3.0);
    }

    #[test]
    fn variable_assumptions() {
        let c = CoefficientSet::variable();
        let rep = verify_assumptions(&c, &UNIT, 1.0, 24, 1e-9).unwrap();
        for name in ["a1_positive", "a2_positive", "b1_bounded", "b2_bounded", "b3_bounded", "weights_nonincreasing"] {
            assert!(rep.get(name).unwrap().passed, "{name}");
        }
        assert!(!rep.get("cp_bound").unwrap().passed);
        let inflated = 1.01 * estimate_cp(&c, &UNIT, 1.0, 41).unwrap();
        let rep = verify_assumptions(&c.with_cp(inflated), &UNIT, 1.0, 24, 1e-9).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
    }

    #[test]
    fn sign_change_detected() {
        let c = CoefficientSet::new(
            ScalarField::new(|x, _, _| x - 0.5),
            ScalarField::constant(1.0),
            ScalarField::constant(0.0),
            ScalarField::constant(0.0),
            ScalarField::constant(0.0),
        );
        let rep = verify_assumptions(&c, &UNIT, 1.0, 10, 1e-9).unwrap();
        assert!(!rep.get("a1_positive").unwrap().passed);
    }

    #[test]
    fn b3_bound() {
        let rep = verify_assumptions(&CoefficientSet::variable(), &UNIT, 1.0, 20, 1e-9).unwrap();
        assert!(rep.get("b3_bounded").unwrap().worst_value <= 2.0);
    }

    #[test]
    fn p3_fd_agrees_fourth_order() {
        let exact = build_aux(&CoefficientSet::variable()).unwrap();
        let err = |h: f64| {
            let mut c = CoefficientSet::variable();
            c.dx_a2 = None;
            c.dy_a1 = None;
            c.dx_d = None;
            c.dy_d = None;
            c.fd_step = h;
            let fd = build_aux(&c).unwrap();
            [(0.3, 0.4, 0.5), (0.7, 0.2, 0.9)]
                .iter()
                .map(|&(x, y, t)| (fd.p3(x, y, t) - exact.p3(x, y, t)).abs().max((fd.p4(x, y, t) - exact.p4(x, y, t)).abs()))
                .fold(0.0, f64::max)
        };
        let ratio = err(0.05) / err(0.025);
        assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio}");
    }
}
