//! Nonuniform time partitions `0 = t_0 < t_1 < ... < t_N = T`.

use serde::Serialize;

use crate::error::{FracError, Result};

/// Largest step-size ratio `τ_k/τ_{k+1}` under which the kernel properties are guaranteed.
pub const RATIO_BOUND: f64 = 7.0 / 4.0;

/// A time mesh together with the offset parameter θ.
///
/// Indexing follows the usual convention: `t(k)` for `k = 0..=N`, `tau(k)` for
/// `k = 1..=N`, `rho(k)` for `k = 1..N` and `t_offset(n)` for `n = 1..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeMesh {
    nodes: Vec<f64>,
    steps: Vec<f64>,
    ratios: Vec<f64>,
    offset_nodes: Vec<f64>,
    theta: f64,
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(FracError::invalid(format!("theta must lie in (0,1), got {theta}")));
    }
    Ok(())
}

impl TimeMesh {
    /// Graded mesh `t_k = T (k/N)^γ`.
    pub fn graded(n: usize, horizon: f64, gamma: f64, theta: f64) -> Result<Self> {
        if n == 0 {
            return Err(FracError::invalid("N must be at least 1"));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(FracError::invalid(format!("T must be positive, got {horizon}")));
        }
        if !(gamma >= 1.0 && gamma.is_finite()) {
            return Err(FracError::invalid(format!("gamma must be >= 1, got {gamma}")));
        }
        check_theta(theta)?;
        let nf = n as f64;
        let mut nodes = Vec::with_capacity(n + 1);
        nodes.push(0.0);
        for k in 1..n {
            nodes.push(horizon * (gamma * (k as f64 / nf).ln()).exp());
        }
        nodes.push(horizon);
        Self::from_valid_nodes(nodes, theta)
    }

    /// Mesh from user-supplied nodes.
    pub fn custom(nodes: &[f64], theta: f64) -> Result<Self> {
        check_theta(theta)?;
        if nodes.len() < 2 {
            return Err(FracError::invalid("a mesh needs at least two nodes"));
        }
        if nodes[0] != 0.0 {
            return Err(FracError::invalid(format!("first node must be 0, got {}", nodes[0])));
        }
        for k in 1..nodes.len() {
            if !(nodes[k] - nodes[k - 1] > 0.0) {
                return Err(FracError::NonMonotoneNodes { index: k });
            }
        }
        Self::from_valid_nodes(nodes.to_vec(), theta)
    }

    fn from_valid_nodes(nodes: Vec<f64>, theta: f64) -> Result<Self> {
        let steps: Vec<f64> = nodes.windows(2).map(|w| w[1] - w[0]).collect();
        if let Some(k) = steps.iter().position(|&s| !(s > 0.0)) {
            return Err(FracError::NonMonotoneNodes { index: k + 1 });
        }
        let ratios = steps.windows(2).map(|w| w[0] / w[1]).collect();
        let offset_nodes = nodes
            .windows(2)
            .map(|w| (1.0 - theta) * w[1] + theta * w[0])
            .collect();
        Ok(Self {
            nodes,
            steps,
            ratios,
            offset_nodes,
            theta,
        })
    }

    /// Same nodes with a different offset parameter.
    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        Self::from_valid_nodes(self.nodes.clone(), theta)
    }

    /// Number of steps N.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// τ_1..τ_N.
    pub fn steps(&self) -> &[f64] {
        &self.steps
    }

    /// ρ_1..ρ_{N-1}.
    pub fn ratios(&self) -> &[f64] {
        &self.ratios
    }

    /// t_{1-θ}..t_{N-θ}.
    pub fn offset_nodes(&self) -> &[f64] {
        &self.offset_nodes
    }

    #[inline]
    pub fn t(&self, k: usize) -> f64 {
        self.nodes[k]
    }

    #[inline]
    pub fn tau(&self, k: usize) -> f64 {
        self.steps[k - 1]
    }

    #[inline]
    pub fn rho(&self, k: usize) -> f64 {
        self.ratios[k - 1]
    }

    #[inline]
    pub fn t_offset(&self, n: usize) -> f64 {
        self.offset_nodes[n - 1]
    }

    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(0.0, f64::max)
    }

    /// Whether `max ρ_k <= 7/4`.
    pub fn ratio_bound_ok(&self) -> bool {
        self.max_ratio() <= RATIO_BOUND
    }

    pub fn max_step(&self) -> f64 {
        self.steps.iter().copied().fold(0.0, f64::max)
    }
}

/// Minimal constants for the three mesh conditions
///
/// 1. `τ_k <= C τ min{1, t_k^{1-1/γ}}` with `τ = max_k τ_k`,
/// 2. `t_k <= C t_{k-1}` for `k >= 2`,
/// 3. `τ_k/t_k <= C τ_{k-1}/t_{k-1}` for `k >= 2`.
#[derive(Debug, Clone, Serialize)]
pub struct MAReport {
    pub gamma: f64,
    /// Smallest constant satisfying all three conditions, never below 1.
    pub c_gamma_estimate: f64,
    pub per_condition: [f64; 3],
    pub ceiling: f64,
    pub satisfied: [bool; 3],
}

impl MAReport {
    pub fn all_satisfied(&self) -> bool {
        self.satisfied.iter().all(|&s| s)
    }
}

/// Evaluate the mesh assumption on `mesh` and compare against `ceiling`.
pub fn validate_ma(mesh: &TimeMesh, gamma: f64, ceiling: f64) -> MAReport {
    let tau_max = mesh.max_step();
    let expo = 1.0 - 1.0 / gamma;
    let mut c = [0.0f64; 3];
    for k in 1..=mesh.len() {
        let tk = mesh.t(k);
        let bound = tau_max * 1f64.min(tk.powf(expo));
        c[0] = c[0].max(mesh.tau(k) / bound);
        if k >= 2 {
            c[1] = c[1].max(tk / mesh.t(k - 1));
            let cur = mesh.tau(k) / tk;
            let prev = mesh.tau(k - 1) / mesh.t(k - 1);
            c[2] = c[2].max(cur / prev);
        }
    }
    let est = c.iter().copied().fold(1.0, f64::max);
    MAReport {
        gamma,
        c_gamma_estimate: est,
        per_condition: c,
        ceiling,
        satisfied: [c[0] <= ceiling, c[1] <= ceiling, c[2] <= ceiling],
    }
}
