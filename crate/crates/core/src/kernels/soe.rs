use crate::error::{FracError, Result};
use crate::special::{gamma, gauss_jacobi, gauss_legendre, GaussRule};

/// Sum-of-exponentials approximation `t^{-β} ≈ Σ_i w_i e^{-s_i t}` on `[Δt, T]`.
#[derive(Debug, Clone)]
pub struct SoeApprox {
    pub beta: f64,
    pub epsilon: f64,
    pub delta_t: f64,
    pub horizon: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Largest relative error seen during validation.
    pub max_rel_error: f64,
}

/// Tuning knobs for [`soe_build_with`].
#[derive(Debug, Clone, Copy)]
pub struct SoeOptions {
    pub max_terms: usize,
    pub max_nodes_per_interval: usize,
    pub validation_samples: usize,
}

impl Default for SoeOptions {
    fn default() -> Self {
        Self {
            max_terms: 4000,
            max_nodes_per_interval: 128,
            validation_samples: 4000,
        }
    }
}

impl SoeApprox {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(s, w)| w * (-s * t).exp())
            .sum()
    }

    /// Largest relative error over `samples` log-spaced points of `[Δt, T]`.
    pub fn max_sampled_error(&self, samples: usize) -> f64 {
        log_samples(self.delta_t, self.horizon, samples)
            .into_iter()
            .map(|t| {
                let exact = t.powf(-self.beta);
                (self.eval(t) - exact).abs() / exact
            })
            .fold(0.0, f64::max)
    }
}

fn log_samples(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let count = count.max(2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            if i == 0 {
                lo
            } else if i + 1 == count {
                hi
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

/// Smallest `S` with `(Δt S)^{β-1} e^{-Δt S} <= 0.1 ε Γ(β)`, which bounds the neglected tail.
pub fn soe_cutoff_for(beta: f64, epsilon: f64, delta_t: f64) -> f64 {
    let target = 0.1 * epsilon * gamma(beta);
    let mut x = 1.0f64;
    while x.powf(beta - 1.0) * (-x).exp() > target {
        x *= 1.05;
    }
    x / delta_t
}

/// Unnormalised contributions on one interval: nodes `s` and weights of `s^{β-1} ds`.
fn map_interval(rule: &GaussRule, lo: f64, hi: f64, beta: f64, jacobi: bool) -> (Vec<f64>, Vec<f64>) {
    let half = 0.5 * (hi - lo);
    let mut s = Vec::with_capacity(rule.nodes.len());
    let mut w = Vec::with_capacity(rule.nodes.len());
    for (x, nu) in rule.nodes.iter().zip(&rule.weights) {
        let node = lo + half * (1.0 + x);
        s.push(node);
        if jacobi {
            w.push(half.powf(beta) * nu);
        } else {
            w.push(half * nu * node.powf(beta - 1.0));
        }
    }
    (s, w)
}

fn interval_value(s: &[f64], w: &[f64], t: f64) -> f64 {
    s.iter().zip(w).map(|(s, w)| w * (-s * t).exp()).sum()
}

fn adapt_interval(
    lo: f64,
    hi: f64,
    beta: f64,
    jacobi: bool,
    samples: &[f64],
    tol: f64,
    max_q: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let rule = |q: usize| {
        if jacobi {
            gauss_jacobi(q, 0.0, beta - 1.0)
        } else {
            gauss_legendre(q)
        }
    };
    let mut q = 2;
    let mut cur = map_interval(&rule(q), lo, hi, beta, jacobi);
    while q + 2 <= max_q {
        let next = map_interval(&rule(q + 2), lo, hi, beta, jacobi);
        let ok = samples.iter().all(|&t| {
            let scale = gamma(beta) * t.powf(-beta);
            (interval_value(&cur.0, &cur.1, t) - interval_value(&next.0, &next.1, t)).abs() <= tol * scale
        });
        if ok {
            return Ok(next);
        }
        q += 2;
        cur = next;
    }
    Err(FracError::ConvergenceFailure(format!(
        "quadrature on [{lo:e}, {hi:e}] did not settle within {max_q} nodes"
    )))
}

/// Build an SOE approximation with default options.
pub fn soe_build(beta: f64, epsilon: f64, delta_t: f64, horizon: f64) -> Result<SoeApprox> {
    soe_build_with(beta, epsilon, delta_t, horizon, SoeOptions::default())
}

/// Build an SOE approximation from the integral
/// `t^{-β} = Γ(β)^{-1} ∫_0^∞ s^{β-1} e^{-ts} ds`, discretised by Gauss-Jacobi on
/// `[0, 1/T]` and Gauss-Legendre on dyadic intervals up to a cut-off.
pub fn soe_build_with(beta: f64, epsilon: f64, delta_t: f64, horizon: f64, opts: SoeOptions) -> Result<SoeApprox> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(FracError::invalid(format!("beta must lie in (0,1), got {beta}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(FracError::invalid(format!("epsilon must lie in (0,1), got {epsilon}")));
    }
    if !(delta_t > 0.0 && delta_t < horizon && horizon.is_finite()) {
        return Err(FracError::Precondition(format!(
            "need 0 < delta_t < T, got delta_t={delta_t}, T={horizon}"
        )));
    }
    let cutoff = soe_cutoff_for(beta, epsilon, delta_t);
    let s0 = 1.0 / horizon;
    let n_dyadic = ((cutoff / s0).log2().ceil().max(0.0)) as usize;
    let per_interval = (1e-3 * epsilon / (n_dyadic as f64 + 1.0).sqrt()).max(16.0 * f64::EPSILON);
    let samples = log_samples(delta_t, horizon, 48);

    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let (s, w) = adapt_interval(0.0, s0, beta, true, &samples, per_interval, opts.max_nodes_per_interval)?;
    nodes.extend(s);
    weights.extend(w);
    let mut lo = s0;
    for _ in 0..n_dyadic {
        let hi = 2.0 * lo;
        let (s, w) = adapt_interval(lo, hi, beta, false, &samples, per_interval, opts.max_nodes_per_interval)?;
        nodes.extend(s);
        weights.extend(w);
        lo = hi;
    }
    let g = gamma(beta);
    for w in &mut weights {
        *w /= g;
    }

    // Drop terms whose worst-case relative contribution is negligible.
    let mut impact: Vec<(f64, usize)> = nodes
        .iter()
        .zip(&weights)
        .enumerate()
        .map(|(i, (s, w))| {
            let t = (beta / s).clamp(delta_t, horizon);
            (w * (-s * t).exp() * t.powf(beta), i)
        })
        .collect();
    impact.sort_by(|a, b| a.0.total_cmp(&b.0));
    let budget = 0.1 * epsilon;
    let mut spent = 0.0;
    let mut keep = vec![true; nodes.len()];
    for (v, i) in impact {
        if spent + v > budget {
            break;
        }
        spent += v;
        keep[i] = false;
    }
    let (nodes, weights): (Vec<f64>, Vec<f64>) = nodes
        .into_iter()
        .zip(weights)
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .unzip();

    if nodes.len() > opts.max_terms {
        return Err(FracError::ConvergenceFailure(format!(
            "{} terms exceed the limit of {}",
            nodes.len(),
            opts.max_terms
        )));
    }
    let mut soe = SoeApprox {
        beta,
        epsilon,
        delta_t,
        horizon,
        nodes,
        weights,
        max_rel_error: 0.0,
    };
    soe.max_rel_error = soe.max_sampled_error(opts.validation_samples);
    if soe.max_rel_error > epsilon {
        return Err(FracError::ConvergenceFailure(format!(
            "sampled relative error {:e} exceeds {epsilon:e} with {} terms",
            soe.max_rel_error,
            soe.len()
        )));
    }
    Ok(soe)
}
