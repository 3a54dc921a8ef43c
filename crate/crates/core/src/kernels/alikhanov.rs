use crate::error::{FracError, Result};
use crate::special::gamma;
use crate::timegrid::TimeMesh;

/// Constant in the kernel lower bound.
pub const PI_A: f64 = 11.0 / 4.0;

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(FracError::invalid(format!("beta must lie in (0,1), got {beta}")));
    }
    Ok(())
}

fn check_theta(mesh: &TimeMesh, beta: f64) -> Result<()> {
    if (mesh.theta() - 0.5 * beta).abs() > 1e-14 {
        return Err(FracError::Precondition(format!(
            "mesh theta {} differs from beta/2 = {}",
            mesh.theta(),
            0.5 * beta
        )));
    }
    Ok(())
}

/// `r0^{1-β} - r1^{1-β}` for `r0 = r1 + len`, without cancellation when `len << r1`.
fn pow_diff(r1: f64, len: f64, one_minus_beta: f64) -> f64 {
    if r1 <= 0.0 {
        return len.powf(one_minus_beta);
    }
    r1.powf(one_minus_beta) * (one_minus_beta * (len / r1).ln_1p()).exp_m1()
}

/// `∫_{rm-half}^{rm+half} u^{-β} (rm - u) du`.
///
/// Takes the half-width directly: recovering it from the endpoints loses digits when it is tiny.
fn centred_moment(rm: f64, half: f64, beta: f64) -> f64 {
    let (r1, r0) = (rm - half, rm + half);
    let delta = half / rm;
    if delta <= 0.5 {
        // (1+x)^{-β} = Σ C(-β, j) x^j; odd j survive the symmetric integral of -x^{j+1}.
        let mut binom = 1.0;
        let mut dpow = delta * delta;
        let mut sum = 0.0;
        for j in 1..200usize {
            binom *= (-beta - (j as f64 - 1.0)) / j as f64;
            dpow *= delta;
            if j % 2 == 1 {
                let term = binom * 2.0 * dpow / (j as f64 + 2.0);
                sum += term;
                if term.abs() <= 1e-18 * sum.abs() {
                    break;
                }
            }
        }
        -rm.powf(2.0 - beta) * sum
    } else {
        let omb = 1.0 - beta;
        let tmb = 2.0 - beta;
        let r1p = if r1 > 0.0 { r1.powf(omb) } else { 0.0 };
        let r1q = if r1 > 0.0 { r1.powf(tmb) } else { 0.0 };
        rm * (r0.powf(omb) - r1p) / omb - (r0.powf(tmb) - r1q) / tmb
    }
}

/// `a^{(n)}_{n-k} = τ_k^{-1} ∫_{t_{k-1}}^{min(t_k, t_{n-θ})} ω_{1-β}(t_{n-θ} - s) ds` for `1 <= k <= n`.
pub fn a_coeff(mesh: &TimeMesh, beta: f64, n: usize, k: usize) -> f64 {
    debug_assert!(1 <= k && k <= n && n <= mesh.len());
    let c = mesh.t_offset(n);
    let tau = mesh.tau(k);
    let omb = 1.0 - beta;
    let diff = if k == n {
        (c - mesh.t(n - 1)).powf(omb)
    } else {
        let r1 = c - mesh.t(k);
        pow_diff(r1, tau, omb)
    };
    diff / (tau * gamma(2.0 - beta))
}

/// `b^{(n)}_{n-k} = 2/(τ_k(τ_k+τ_{k+1})) ∫_{t_{k-1}}^{t_k} ω_{1-β}(t_{n-θ} - s)(s - t_{k-1/2}) ds` for `1 <= k <= n-1`.
pub fn b_coeff(mesh: &TimeMesh, beta: f64, n: usize, k: usize) -> f64 {
    debug_assert!(1 <= k && k < n && n <= mesh.len());
    let c = mesh.t_offset(n);
    let tau = mesh.tau(k);
    let rm = c - 0.5 * (mesh.t(k - 1) + mesh.t(k));
    let moment = centred_moment(rm, 0.5 * tau, beta);
    2.0 / (tau * (tau + mesh.tau(k + 1))) * moment / gamma(1.0 - beta)
}

/// Alikhanov coefficients `A^{(n)}_{n-k}` for one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelRow {
    pub n: usize,
    pub beta: f64,
    /// `coeffs[k-1] = A^{(n)}_{n-k}` for `k = 1..=n`.
    pub coeffs: Vec<f64>,
}

impl KernelRow {
    /// `A^{(n)}_j` for `j = 0..n`.
    #[inline]
    pub fn lag(&self, j: usize) -> f64 {
        self.coeffs[self.n - 1 - j]
    }

    /// Coefficient multiplying `∇g^k`.
    #[inline]
    pub fn on_interval(&self, k: usize) -> f64 {
        self.coeffs[k - 1]
    }

    pub fn all_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c > 0.0)
    }

    /// Positivity and `A_0 >= A_1 >= ... >= A_{n-1}`.
    pub fn check_a1(&self) -> bool {
        self.all_positive() && self.coeffs.windows(2).all(|w| w[0] <= w[1])
    }

    /// Compare every entry with `π_A^{-1} τ_k^{-1} ∫_{t_{k-1}}^{t_k} ω_{1-β}(t_n - s) ds`.
    pub fn check_a2(&self, mesh: &TimeMesh) -> A2Check {
        let omb = 1.0 - self.beta;
        let g = gamma(2.0 - self.beta);
        let tn = mesh.t(self.n);
        let mut worst = f64::INFINITY;
        let mut worst_k = 1;
        for k in 1..=self.n {
            let tau = mesh.tau(k);
            let avg = pow_diff(tn - mesh.t(k), tau, omb) / (tau * g);
            let ratio = self.on_interval(k) * PI_A / avg;
            if ratio < worst {
                worst = ratio;
                worst_k = k;
            }
        }
        A2Check {
            min_ratio: worst,
            worst_k,
        }
    }
}

/// Smallest value of `π_A A^{(n)}_{n-k}` divided by the exact interval average.
#[derive(Debug, Clone, Copy)]
pub struct A2Check {
    pub min_ratio: f64,
    pub worst_k: usize,
}

impl A2Check {
    pub fn holds(&self) -> bool {
        self.min_ratio >= 1.0
    }
}

/// Alikhanov coefficients at level `n`.
pub fn alikhanov_row(mesh: &TimeMesh, beta: f64, n: usize) -> Result<KernelRow> {
    check_beta(beta)?;
    check_theta(mesh, beta)?;
    if n == 0 || n > mesh.len() {
        return Err(FracError::invalid(format!("step index {n} outside 1..={}", mesh.len())));
    }
    Ok(row_unchecked(mesh, beta, n))
}

fn row_unchecked(mesh: &TimeMesh, beta: f64, n: usize) -> KernelRow {
    let mut coeffs = Vec::with_capacity(n);
    if n == 1 {
        coeffs.push(a_coeff(mesh, beta, 1, 1));
    } else {
        let b: Vec<f64> = (1..n).map(|k| b_coeff(mesh, beta, n, k)).collect();
        for k in 1..=n {
            let mut v = a_coeff(mesh, beta, n, k);
            if k >= 2 {
                v += mesh.rho(k - 1) * b[k - 2];
            }
            if k < n {
                v -= b[k - 1];
            }
            coeffs.push(v);
        }
    }
    KernelRow { n, beta, coeffs }
}

/// All kernel rows `1..=N` for one mesh.
#[derive(Debug, Clone)]
pub struct KernelTable {
    pub beta: f64,
    rows: Vec<KernelRow>,
}

impl KernelTable {
    pub fn build(mesh: &TimeMesh, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        check_theta(mesh, beta)?;
        let rows = (1..=mesh.len()).map(|n| row_unchecked(mesh, beta, n)).collect();
        Ok(Self { beta, rows })
    }

    /// Row `n`, 1-based.
    pub fn row(&self, n: usize) -> &KernelRow {
        &self.rows[n - 1]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[KernelRow] {
        &self.rows
    }
}

/// `Σ_{k=1}^{n} A^{(n)}_{n-k} (g^k - g^{k-1})`.
pub fn discrete_caputo(row: &KernelRow, history: &[f64]) -> Result<f64> {
    if history.len() != row.n + 1 {
        return Err(FracError::LengthMismatch {
            expected: row.n + 1,
            got: history.len(),
        });
    }
    Ok(history
        .windows(2)
        .zip(&row.coeffs)
        .map(|(w, a)| a * (w[1] - w[0]))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(n: usize, beta: f64) -> TimeMesh {
        TimeMesh::graded(n, n as f64, 1.0, beta / 2.0).unwrap()
    }

    #[test]
    fn first_row_uniform() {
        let m = uniform(4, 0.5);
        let r = alikhanov_row(&m, 0.5, 1).unwrap();
        let want = 0.75f64.sqrt() / gamma(1.5);
        assert!((r.coeffs[0] - want).abs() < 1e-15);
        assert!((r.coeffs[0] - 0.977_205).abs() < 1e-6);
    }

    #[test]
    fn row_five_monotone() {
        for &beta in &[0.1, 0.5, 0.9] {
            let m = TimeMesh::graded(9, 1.0, 2.5, beta / 2.0).unwrap();
            assert!(alikhanov_row(&m, beta, 5).unwrap().check_a1());
        }
    }

    #[test]
    fn a2_on_graded() {
        let m = TimeMesh::graded(8, 1.0, 3.0, 0.35).unwrap();
        let r = alikhanov_row(&m, 0.7, 8).unwrap();
        assert!(r.check_a2(&m).holds());
    }

    #[test]
    fn theta_mismatch_rejected() {
        let m = TimeMesh::graded(4, 1.0, 1.0, 0.3).unwrap();
        assert!(matches!(alikhanov_row(&m, 0.5, 1), Err(FracError::Precondition(_))));
        assert!(alikhanov_row(&uniform(4, 0.5), 0.5, 5).is_err());
    }

    #[test]
    fn series_matches_closed_form_near_switch() {
        for &beta in &[0.05, 0.5, 0.95] {
            let (r1, r0): (f64, f64) = (1.0, 1.0 + 2.0 / 3.0);
            let rm = 0.5 * (r0 + r1);
            let omb = 1.0 - beta;
            let tmb = 2.0 - beta;
            let closed = rm * (r0.powf(omb) - r1.powf(omb)) / omb - (r0.powf(tmb) - r1.powf(tmb)) / tmb;
            let series = centred_moment(rm, 0.5 * (r0 - r1), beta);
            assert!((closed - series).abs() < 1e-12 * closed.abs(), "{closed} {series}");
        }
    }

    #[test]
    fn caputo_basics() {
        let m = uniform(6, 0.4);
        let r = alikhanov_row(&m, 0.4, 6).unwrap();
        assert_eq!(discrete_caputo(&r, &[2.5; 7]).unwrap(), 0.0);
        let r1 = alikhanov_row(&m, 0.4, 1).unwrap();
        assert_eq!(discrete_caputo(&r1, &[0.0, 1.0]).unwrap(), r1.coeffs[0]);
        assert!(matches!(discrete_caputo(&r, &[0.0; 3]), Err(FracError::LengthMismatch { .. })));
    }

    #[test]
    fn caputo_of_linear_function() {
        // Quadratic interpolation is exact for g(t) = t except on the last interval,
        // which is linear; the formula reproduces D^β t = t^{1-β}/Γ(2-β) exactly.
        let beta = 0.5;
        let m = TimeMesh::graded(20, 1.0, 1.0, beta / 2.0).unwrap();
        for n in [1, 5, 20] {
            let r = alikhanov_row(&m, beta, n).unwrap();
            let g: Vec<f64> = (0..=n).map(|k| m.t(k)).collect();
            let got = discrete_caputo(&r, &g).unwrap();
            let want = m.t_offset(n).powf(1.0 - beta) / gamma(2.0 - beta);
            assert!((got - want).abs() < 1e-12, "n={n}: {got} {want}");
        }
    }
}
