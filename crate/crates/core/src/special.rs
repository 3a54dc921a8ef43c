//! Gamma function and Gauss quadrature rules.

use nalgebra::{DMatrix, SymmetricEigen};

/// Euler's Gamma function.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// A quadrature rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss-Jacobi rule with `q` nodes for the weight `(1-x)^a (1+x)^b` on `[-1, 1]`,
/// computed with the Golub-Welsch algorithm.
pub fn gauss_jacobi(q: usize, a: f64, b: f64) -> GaussRule {
    assert!(q >= 1, "a Gauss rule needs at least one node");
    assert!(a > -1.0 && b > -1.0, "Jacobi parameters must exceed -1");
    let ab = a + b;
    let mut jac = DMatrix::<f64>::zeros(q, q);
    for n in 0..q {
        let nf = n as f64;
        let diag = if n == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * nf + ab) * (2.0 * nf + ab + 2.0))
        };
        jac[(n, n)] = diag;
        if n + 1 < q {
            let k = nf + 1.0;
            let s = 2.0 * k + ab;
            let beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
            let off = beta.sqrt();
            jac[(n, n + 1)] = off;
            jac[(n + 1, n)] = off;
        }
    }
    let mu0 = 2f64.powf(ab + 1.0) * gamma(a + 1.0) * gamma(b + 1.0) / gamma(ab + 2.0);
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..q)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|l, r| l.0.total_cmp(&r.0));
    GaussRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Gauss-Legendre rule with `q` nodes on `[-1, 1]`.
pub fn gauss_legendre(q: usize) -> GaussRule {
    gauss_jacobi(q, 0.0, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let r = gauss_legendre(5);
        for deg in 0..10 {
            let got: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(deg)).sum();
            let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "deg {deg}: {got} vs {want}");
        }
    }

    #[test]
    fn jacobi_moments() {
        // ∫_{-1}^{1} (1+x)^{b} x^0 dx = 2^{b+1}/(b+1)
        let b = -0.3;
        let r = gauss_jacobi(8, 0.0, b);
        let m0: f64 = r.weights.iter().sum();
        assert!((m0 - 2f64.powf(b + 1.0) / (b + 1.0)).abs() < 1e-13);
        // ∫ (1+x)^b (1+x) dx = 2^{b+2}/(b+2)
        let m1: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * (1.0 + x)).sum();
        assert!((m1 - 2f64.powf(b + 2.0) / (b + 2.0)).abs() < 1e-13);
    }

    #[test]
    fn gamma_values() {
        assert!((gamma(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-14);
        assert!((gamma(5.0) - 24.0).abs() < 1e-12);
    }
}
