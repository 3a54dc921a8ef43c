//! Reference computations for the fracstep test suites.
//!
//! Everything here is written from scratch against textbook formulas and
//! shares no code with the `fracstep` crate, so agreement between the two is
//! evidence rather than tautology.

use libm::tgamma;

// 15-point Kronrod nodes on [-1, 1] (non-negative half) with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod panel: (Kronrod estimate, |K15 - G7|).
fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Outcome of an adaptive quadrature.
#[derive(Debug, Clone, Copy)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

/// Adaptive Gauss-Kronrod on `[a, b]` with global bisection of the worst panel.
///
/// Stops when the summed error estimate drops below `max(abs_tol, rel_tol * |value|)`
/// or after `max_panels` panels.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_panels: usize) -> Quad {
    if a == b {
        return Quad { value: 0.0, error: 0.0, panels: 0 };
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut panels = vec![(a, b, v, e)];
    loop {
        let value: f64 = panels.iter().map(|p| p.2).sum();
        let error: f64 = panels.iter().map(|p| p.3).sum();
        if error <= abs_tol.max(rel_tol * value.abs()) || panels.len() >= max_panels {
            return Quad { value, error, panels: panels.len() };
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (pa, pb, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            return Quad { value, error, panels: panels.len() + 1 };
        }
        let (v1, e1) = gk15(&mut f, pa, mid);
        let (v2, e2) = gk15(&mut f, mid, pb);
        panels.push((pa, mid, v1, e1));
        panels.push((mid, pb, v2, e2));
    }
}

/// `∫_a^b (b - s)^{-β} g(s) ds` for smooth `g` and `0 <= β < 1`.
///
/// The substitution `w = (b - s)^{1-β}` removes the endpoint singularity.
pub fn integrate_right_singular(mut g: impl FnMut(f64) -> f64, a: f64, b: f64, beta: f64, rel_tol: f64) -> Quad {
    let q = 1.0 - beta;
    let top = (b - a).powf(q);
    let mut r = integrate(|w| g(b - w.powf(1.0 / q)), 0.0, top, 0.0, rel_tol, 4000);
    r.value /= q;
    r.error /= q;
    r
}

/// `∫_a^b (s - a)^{-β} g(s) ds` for smooth `g` and `0 <= β < 1`.
pub fn integrate_left_singular(mut g: impl FnMut(f64) -> f64, a: f64, b: f64, beta: f64, rel_tol: f64) -> Quad {
    let q = 1.0 - beta;
    let top = (b - a).powf(q);
    let mut r = integrate(|w| g(a + w.powf(1.0 / q)), 0.0, top, 0.0, rel_tol, 4000);
    r.value /= q;
    r.error /= q;
    r
}

/// A time mesh given by its nodes `0 = t_0 < ... < t_N` and the offset `θ`.
#[derive(Debug, Clone)]
pub struct PlainMesh {
    pub t: Vec<f64>,
    pub theta: f64,
}

impl PlainMesh {
    pub fn graded(n: usize, horizon: f64, gamma: f64, theta: f64) -> Self {
        let t = (0..=n).map(|k| horizon * (k as f64 / n as f64).powf(gamma)).collect();
        Self { t, theta }
    }

    pub fn tau(&self, k: usize) -> f64 {
        self.t[k] - self.t[k - 1]
    }

    /// `t_{n-θ} = t_n - θ τ_n`.
    pub fn offset(&self, n: usize) -> f64 {
        self.t[n] - self.theta * self.tau(n)
    }
}

/// `a^{(n)}_{n-k}` by quadrature of `τ_k^{-1} ∫ ω_{1-β}(t_{n-θ} - s) ds` over `[t_{k-1}, min(t_k, t_{n-θ})]`.
pub fn a_by_quadrature(mesh: &PlainMesh, beta: f64, n: usize, k: usize) -> f64 {
    let c = mesh.offset(n);
    let lo = mesh.t[k - 1];
    let hi = mesh.t[k].min(c);
    let integral = if k == n {
        integrate_right_singular(|_| 1.0, lo, hi, beta, 1e-15).value
    } else {
        integrate(|s| (c - s).powf(-beta), lo, hi, 0.0, 1e-15, 4000).value
    };
    integral / (mesh.tau(k) * tgamma(1.0 - beta))
}

/// `b^{(n)}_{n-k}` by quadrature of `2/(τ_k(τ_k+τ_{k+1})) ∫ ω_{1-β}(t_{n-θ} - s)(s - t_{k-1/2}) ds`.
///
/// The integrand is folded about the panel midpoint so the odd part, which is
/// all that survives, is integrated directly.
pub fn b_by_quadrature(mesh: &PlainMesh, beta: f64, n: usize, k: usize) -> f64 {
    let c = mesh.offset(n);
    let tau = mesh.tau(k);
    let mid = 0.5 * (mesh.t[k - 1] + mesh.t[k]);
    let r = c - mid;
    let h = 0.5 * tau;
    // ∫_{-h}^{h} x (r - x)^{-β} dx = ∫_0^h x [(r - x)^{-β} - (r + x)^{-β}] dx
    let folded = |x: f64| {
        let lo = (r - x).powf(-beta);
        let ratio_ln = (-2.0 * x / (r + x)).ln_1p();
        x * lo * -(beta * ratio_ln).exp_m1()
    };
    let integral = integrate(folded, 0.0, h, 0.0, 1e-15, 4000).value;
    2.0 / (tau * (tau + mesh.tau(k + 1))) * integral / tgamma(1.0 - beta)
}

/// Caputo derivative of order `α` of `t^p` at `t > 0` by the power rule.
///
/// Polynomial terms of degree below `ceil(α)` are annihilated.
pub fn caputo_power(alpha: f64, p: f64, t: f64) -> f64 {
    let m = alpha.ceil();
    if p == p.floor() && p < m {
        return 0.0;
    }
    tgamma(p + 1.0) / tgamma(p + 1.0 - alpha) * t.powf(p - alpha)
}

/// Caputo derivative of order `α ∈ (0, 1)` computed by quadrature of
/// `Γ(1-α)^{-1} ∫_0^t (t - s)^{-α} g'(s) ds`, with `g'` written as a sum of
/// `c s^q` terms so the left endpoint can be treated as singular.
pub fn caputo_quadrature(alpha: f64, derivative_terms: &[(f64, f64)], t: f64) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0);
    let mid = 0.5 * t;
    let mut total = 0.0;
    for &(c, q) in derivative_terms {
        // Left half: weak singularity from s^q when q < 0; right half: from (t - s)^{-α}.
        let left = if q < 0.0 {
            integrate_left_singular(|s| (t - s).powf(-alpha), 0.0, mid, -q, 1e-14).value
        } else {
            integrate(|s| s.powf(q) * (t - s).powf(-alpha), 0.0, mid, 0.0, 1e-14, 4000).value
        };
        let right = integrate_right_singular(|s| s.powf(q), mid, t, alpha, 1e-14).value;
        total += c * (left + right);
    }
    total / tgamma(1.0 - alpha)
}

/// Dense LU with partial pivoting; returns `None` for a numerically singular matrix.
pub fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut x = b.to_vec();
    let scale = m.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() <= 1e-14 * scale {
            return None;
        }
        m.swap(col, piv);
        x.swap(col, piv);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f != 0.0 {
                for c in col..n {
                    m[r][c] -= f * m[col][c];
                }
                x[r] -= f * x[col];
            }
        }
    }
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (x[r] - s) / m[r][r];
    }
    Some(x)
}

/// Relative difference `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_integral() {
        let q = integrate(f64::exp, 0.0, 1.0, 0.0, 1e-15, 100);
        assert!((q.value - (1f64.exp() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn singular_endpoint() {
        // ∫_0^1 (1-s)^{-1/2} ds = 2
        let q = integrate_right_singular(|_| 1.0, 0.0, 1.0, 0.5, 1e-15);
        assert!((q.value - 2.0).abs() < 1e-14);
        // ∫_0^1 s^{-0.3} s ds = 1/1.7
        let q = integrate_left_singular(|s| s, 0.0, 1.0, 0.3, 1e-15);
        assert!((q.value - 1.0 / 1.7).abs() < 1e-14);
    }

    #[test]
    fn caputo_routes_agree() {
        // g(t) = t + t^α, g' = 1 + α t^{α-1}
        for &alpha in &[0.3, 0.5, 0.9] {
            let t = 0.7;
            let by_rule = caputo_power(alpha, 1.0, t) + caputo_power(alpha, alpha, t);
            let by_quad = caputo_quadrature(alpha, &[(1.0, 0.0), (alpha, alpha - 1.0)], t);
            assert!(rel_diff(by_rule, by_quad) < 1e-11, "{alpha}: {by_rule} {by_quad}");
        }
    }

    #[test]
    fn caputo_kills_low_polynomials() {
        assert_eq!(caputo_power(1.5, 1.0, 0.3), 0.0);
        assert_eq!(caputo_power(0.5, 0.0, 0.3), 0.0);
        assert!((caputo_power(1.5, 1.5, 0.3) - tgamma(2.5)).abs() < 1e-14);
    }

    #[test]
    fn dense_lu() {
        let a = vec![vec![0.0, 2.0, 1.0], vec![1.0, 1.0, 0.0], vec![3.0, 0.0, 1.0]];
        let x = dense_solve(&a, &[3.0, 2.0, 4.0]).unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-14);
        }
        assert!(dense_solve(&[vec![1.0, 2.0], vec![2.0, 4.0]], &[1.0, 1.0]).is_none());
    }

    #[test]
    fn uniform_mesh_a_coefficient() {
        // Uniform mesh, k = n: τ^{-1}(1-θ)^{1-β}τ^{1-β}/Γ(2-β)
        let beta = 0.4;
        let m = PlainMesh::graded(10, 1.0, 1.0, beta / 2.0);
        let tau: f64 = 0.1;
        let want = (1.0 - beta / 2.0f64).powf(1.0 - beta) * tau.powf(-beta) / tgamma(2.0 - beta);
        assert!(rel_diff(a_by_quadrature(&m, beta, 5, 5), want) < 1e-13);
    }
}
