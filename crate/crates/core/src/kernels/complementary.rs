use super::alikhanov::{KernelTable, PI_A};
use crate::error::{FracError, Result};
use crate::special::gamma;
use crate::timegrid::TimeMesh;

/// Complementary kernels `P^{(n)}_{n-j}`, defined by
/// `Σ_{j=k}^{n} P^{(n)}_{n-j} A^{(j)}_{j-k} = 1` for `1 <= k <= n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplementaryRow {
    pub n: usize,
    /// `coeffs[j-1] = P^{(n)}_{n-j}` for `j = 1..=n`.
    pub coeffs: Vec<f64>,
}

/// Diagnostics for one complementary row.
#[derive(Debug, Clone, Copy)]
pub struct ComplementaryCheck {
    /// Largest `|Σ_j P A - 1|`.
    pub identity_residual: f64,
    /// Smallest entry; must be non-negative.
    pub min_entry: f64,
    /// Largest `P^{(n)}_{n-j} / (π_A Γ(2-β) τ_j^β)`; must not exceed 1.
    pub max_bound_ratio: f64,
    /// `Σ_j P^{(n)}_{n-j} ω_{1-β}(t_j)`; must not exceed `π_A`.
    pub omega_sum: f64,
}

impl ComplementaryCheck {
    pub fn holds(&self, identity_tol: f64) -> bool {
        self.identity_residual <= identity_tol
            && self.min_entry >= 0.0
            && self.max_bound_ratio <= 1.0
            && self.omega_sum <= PI_A
    }
}

/// Complementary row `n` from kernel rows `1..=n`.
pub fn complementary_row(table: &KernelTable, n: usize) -> Result<ComplementaryRow> {
    if n == 0 || n > table.len() {
        return Err(FracError::invalid(format!("step index {n} outside 1..={}", table.len())));
    }
    let mut p = vec![0.0; n];
    for k in (1..=n).rev() {
        let mut acc = 0.0;
        for j in (k + 1)..=n {
            acc += p[j - 1] * table.row(j).lag(j - k);
        }
        p[k - 1] = (1.0 - acc) / table.row(k).lag(0);
    }
    Ok(ComplementaryRow { n, coeffs: p })
}

/// Complementary rows for every level of the table.
pub fn complementary_rows(table: &KernelTable) -> Vec<ComplementaryRow> {
    (1..=table.len())
        .map(|n| complementary_row(table, n).expect("index in range"))
        .collect()
}

impl ComplementaryRow {
    pub fn check(&self, table: &KernelTable, mesh: &TimeMesh) -> ComplementaryCheck {
        let beta = table.beta;
        let n = self.n;
        let mut identity_residual = 0.0f64;
        for k in 1..=n {
            let s: f64 = (k..=n).map(|j| self.coeffs[j - 1] * table.row(j).lag(j - k)).sum();
            identity_residual = identity_residual.max((s - 1.0).abs());
        }
        let g2 = gamma(2.0 - beta);
        let g1 = gamma(1.0 - beta);
        let mut max_bound_ratio = 0.0f64;
        let mut omega_sum = 0.0;
        for j in 1..=n {
            let p = self.coeffs[j - 1];
            max_bound_ratio = max_bound_ratio.max(p / (PI_A * g2 * mesh.tau(j).powf(beta)));
            omega_sum += p * mesh.t(j).powf(-beta) / g1;
        }
        ComplementaryCheck {
            identity_residual,
            min_entry: self.coeffs.iter().copied().fold(f64::INFINITY, f64::min),
            max_bound_ratio,
            omega_sum,
        }
    }
}
