use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::alikhanov::{a_coeff, KernelTable};
use super::soe::SoeApprox;
use crate::error::{FracError, Result};
use crate::special::gamma;
use crate::timegrid::TimeMesh;

/// How the convolution history of the discrete Caputo operator is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum KernelMode {
    #[default]
    Direct,
    Soe,
}

impl std::str::FromStr for KernelMode {
    type Err = FracError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "direct" => Ok(KernelMode::Direct),
            "soe" => Ok(KernelMode::Soe),
            other => Err(FracError::Config(format!("unknown kernel mode `{other}`"))),
        }
    }
}

/// Splits `(𝒟_τ^β g)^{n-θ} = lead_n (g^n - g^{n-1}) + H_n` for vector sequences,
/// where `H_n` only depends on `g^0..g^{n-1}`.
pub trait CaputoHistory {
    /// Coefficient of `g^n - g^{n-1}` at level `n`.
    fn leading(&self, n: usize) -> f64;
    /// Writes `H_n` into `out`. Requires levels `1..n` to have been pushed.
    fn history(&self, n: usize, out: &mut [f64]);
    /// Record `g^n - g^{n-1}` after level `n` is known.
    fn push(&mut self, diff: &[f64]);
    /// Number of pushed levels.
    fn levels(&self) -> usize;
}

/// Full-history evaluation with the exact coefficients.
#[derive(Debug, Clone)]
pub struct DirectHistory {
    table: Arc<KernelTable>,
    diffs: Vec<Vec<f64>>,
}

impl DirectHistory {
    pub fn new(table: Arc<KernelTable>) -> Self {
        Self { table, diffs: Vec::new() }
    }
}

impl CaputoHistory for DirectHistory {
    fn leading(&self, n: usize) -> f64 {
        self.table.row(n).lag(0)
    }

    fn history(&self, n: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        let row = self.table.row(n);
        for k in 1..n {
            let a = row.on_interval(k);
            for (o, d) in out.iter_mut().zip(&self.diffs[k - 1]) {
                *o += a * d;
            }
        }
    }

    fn push(&mut self, diff: &[f64]) {
        self.diffs.push(diff.to_vec());
    }

    fn levels(&self) -> usize {
        self.diffs.len()
    }
}

/// `(1/τ)∫_0^τ e^{-σu} du` as a function of `λ = στ`.
fn phi1(lambda: f64) -> f64 {
    if lambda < 1e-300 {
        1.0
    } else {
        -(-lambda).exp_m1() / lambda
    }
}

/// `τ^{-2}∫_0^τ e^{-σu}(τ/2 - u) du` as a function of `λ = στ`.
fn phi_centred(lambda: f64) -> f64 {
    if lambda < 1.0 {
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..40usize {
            term *= -lambda / k as f64;
            let kf = k as f64;
            let c = -term * kf / (2.0 * (kf + 1.0) * (kf + 2.0));
            sum += c;
            if c.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        let e = (-lambda).exp();
        -(-lambda).exp_m1() / (2.0 * lambda) - (1.0 - e * (1.0 + lambda)) / (lambda * lambda)
    }
}

/// Per-interval coefficients for one exponential: `(c1 - c2, c2)` on interval `k`.
fn interval_coeffs(mesh: &TimeMesh, s: f64, k: usize) -> (f64, f64) {
    let tau = mesh.tau(k);
    let lam = s * tau;
    let c1 = phi1(lam);
    let c2 = 2.0 * tau / (tau + mesh.tau(k + 1)) * phi_centred(lam);
    (c1 - c2, c2)
}

/// History evaluation through per-exponential accumulators.
///
/// The kernel is replaced by its SOE approximation on all intervals except the
/// current one, so storage is `O(terms · m)` instead of `O(N · m)`.
#[derive(Debug, Clone)]
pub struct SoeHistory {
    mesh: Arc<TimeMesh>,
    soe: Arc<SoeApprox>,
    beta: f64,
    inv_gamma: f64,
    acc: Vec<Vec<f64>>,
    last: Vec<f64>,
    levels: usize,
}

impl SoeHistory {
    pub fn new(mesh: Arc<TimeMesh>, soe: Arc<SoeApprox>, dim: usize) -> Result<Self> {
        let beta = soe.beta;
        let need = soe_delta_t(&mesh);
        if soe.delta_t > need * (1.0 + 1e-12) || soe.horizon < mesh.horizon() * (1.0 - 1e-12) {
            return Err(FracError::Precondition(format!(
                "SOE valid on [{:e}, {}] but the mesh needs [{need:e}, {}]",
                soe.delta_t,
                soe.horizon,
                mesh.horizon()
            )));
        }
        Ok(Self {
            acc: vec![vec![0.0; dim]; soe.len()],
            last: vec![0.0; dim],
            inv_gamma: 1.0 / gamma(1.0 - beta),
            mesh,
            soe,
            beta,
            levels: 0,
        })
    }

    /// Weight of accumulator `i` when evaluated at `t_{n-θ}`.
    fn eval_weight(&self, i: usize, n: usize) -> f64 {
        let lag = self.mesh.t_offset(n) - self.mesh.t(n - 1);
        self.soe.weights[i] * (-self.soe.nodes[i] * lag).exp() * self.inv_gamma
    }
}

/// Smallest kernel argument the fast path evaluates: `min(τ_1, (1-θ) min_{n>=2} τ_n)`.
pub fn soe_delta_t(mesh: &TimeMesh) -> f64 {
    let theta = mesh.theta();
    mesh.steps()
        .iter()
        .skip(1)
        .map(|&t| (1.0 - theta) * t)
        .fold(mesh.tau(1), f64::min)
}

impl CaputoHistory for SoeHistory {
    fn leading(&self, n: usize) -> f64 {
        let local = a_coeff(&self.mesh, self.beta, n, n);
        if n == 1 {
            return local;
        }
        let rho = self.mesh.rho(n - 1);
        let kappa: f64 = (0..self.soe.len())
            .map(|i| self.eval_weight(i, n) * interval_coeffs(&self.mesh, self.soe.nodes[i], n - 1).1 * rho)
            .sum();
        local + kappa
    }

    fn history(&self, n: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        if n == 1 {
            return;
        }
        let tau_prev = self.mesh.tau(n - 1);
        for (i, acc) in self.acc.iter().enumerate() {
            let s = self.soe.nodes[i];
            let w = self.eval_weight(i, n);
            let decay = (-s * tau_prev).exp();
            let (c_last, _) = interval_coeffs(&self.mesh, s, n - 1);
            for ((o, u), d) in out.iter_mut().zip(acc).zip(&self.last) {
                *o += w * (decay * u + c_last * d);
            }
        }
    }

    fn push(&mut self, diff: &[f64]) {
        let n = self.levels + 1;
        if n >= 2 {
            let tau_prev = self.mesh.tau(n - 1);
            let rho = self.mesh.rho(n - 1);
            for (i, acc) in self.acc.iter_mut().enumerate() {
                let s = self.soe.nodes[i];
                let decay = (-s * tau_prev).exp();
                let (c_last, c2) = interval_coeffs(&self.mesh, s, n - 1);
                let c_new = c2 * rho;
                for ((u, d_old), d_new) in acc.iter_mut().zip(&self.last).zip(diff) {
                    *u = decay * *u + c_last * d_old + c_new * d_new;
                }
            }
        }
        self.last.copy_from_slice(diff);
        self.levels = n;
    }

    fn levels(&self) -> usize {
        self.levels
    }
}

/// Scalar state for [`fast_caputo_step`].
#[derive(Debug, Clone)]
pub struct SoeScalarState {
    inner: SoeHistory,
    prev: f64,
}

impl SoeScalarState {
    pub fn new(mesh: Arc<TimeMesh>, soe: Arc<SoeApprox>, g0: f64) -> Result<Self> {
        Ok(Self {
            inner: SoeHistory::new(mesh, soe, 1)?,
            prev: g0,
        })
    }

    pub fn levels(&self) -> usize {
        self.inner.levels()
    }
}

/// Advance the scalar fast evaluation by one level with the new value `g^n`
/// and return `(𝒟_τ^β g)^{n-θ}`.
pub fn fast_caputo_step(state: &mut SoeScalarState, g_new: f64) -> f64 {
    let n = state.inner.levels() + 1;
    let mut h = [0.0];
    state.inner.history(n, &mut h);
    let diff = g_new - state.prev;
    let value = state.inner.leading(n) * diff + h[0];
    state.inner.push(&[diff]);
    state.prev = g_new;
    value
}
