use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coefficients::{estimate_cp, verify_assumptions, CoefficientSet};
use crate::error::Result;
use crate::kernels::{check_quadratic_form_inequality, complementary_rows, soe_build, KernelTable};
use crate::spatial::Rect;
use crate::timegrid::{TimeMesh, RATIO_BOUND};

/// Outcome of one property suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub violations: usize,
    /// Suite-specific worst margin; see the suite documentation.
    pub worst: f64,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Sizes of the randomised suites.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    pub kernel_meshes: usize,
    pub inequality_trials: usize,
    pub complementary_n: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 20240917,
            kernel_meshes: 1000,
            inequality_trials: 10_000,
            complementary_n: 64,
        }
    }
}

impl VerifyOptions {
    /// Reduced sample counts for smoke runs.
    pub fn quick() -> Self {
        Self {
            kernel_meshes: 50,
            inequality_trials: 500,
            ..Self::default()
        }
    }
}

/// `β = 0.05, 0.10, ..., 0.95`.
pub fn beta_grid() -> Vec<f64> {
    (1..=19).map(|i| i as f64 * 0.05).collect()
}

/// Random mesh on `[0, 1]` whose step ratios `τ_k/τ_{k+1}` never exceed 7/4.
///
/// Consecutive steps change by a log-uniform factor in `[4/7, 4]`; about one
/// step in eight sits exactly on the ratio bound.
pub fn random_admissible_mesh(rng: &mut impl Rng, n: usize, theta: f64) -> Result<TimeMesh> {
    let mut steps = Vec::with_capacity(n);
    let mut tau = 1.0f64;
    for k in 0..n {
        if k > 0 {
            let f = if rng.random_bool(0.125) {
                1.0 / RATIO_BOUND
            } else {
                let lo = (1.0 / RATIO_BOUND).ln();
                (lo + (4f64.ln() - lo) * rng.random::<f64>()).exp()
            };
            tau *= f;
        }
        steps.push(tau);
    }
    let total: f64 = steps.iter().sum();
    let mut nodes = Vec::with_capacity(n + 1);
    let mut t = 0.0;
    nodes.push(0.0);
    for s in &steps {
        t += s / total;
        nodes.push(t);
    }
    nodes[n] = 1.0;
    TimeMesh::custom(&nodes, theta)
}

/// A1 (positive, monotone) and A2 (lower bound with `π_A = 11/4`) on random
/// admissible meshes for every `β` on the 0.05 grid. `worst` is the smallest
/// A2 ratio seen; it must stay at or above 1.
pub fn verify_kernel_properties(meshes: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let betas = beta_grid();
    let mut checks = 0;
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    let mut notes = Vec::new();
    for trial in 0..meshes {
        let n = rng.random_range(2..=32);
        let base = random_admissible_mesh(&mut rng, n, 0.25)?;
        if base.max_ratio() > RATIO_BOUND * (1.0 + 1e-12) {
            violations += 1;
            notes.push(format!("mesh {trial} breaks the ratio bound"));
            continue;
        }
        for &beta in &betas {
            let mesh = base.with_theta(0.5 * beta)?;
            let table = KernelTable::build(&mesh, beta)?;
            for row in table.rows() {
                checks += 1;
                let a2 = row.check_a2(&mesh);
                worst = worst.min(a2.min_ratio);
                if !row.check_a1() || !a2.holds() {
                    violations += 1;
                    if notes.len() < 10 {
                        notes.push(format!("mesh {trial}, beta {beta}, n {}: A2 ratio {}", row.n, a2.min_ratio));
                    }
                }
            }
        }
    }
    Ok(SuiteReport {
        name: "kernels",
        checks,
        violations,
        worst,
        notes,
    })
}

/// Monte-Carlo check of the weighted quadratic-form inequality with random
/// non-increasing diagonal weights. `worst` is the smallest `lhs - rhs`
/// relative to the rounding allowance.
pub fn verify_inequality(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    let mut notes = Vec::new();
    for trial in 0..trials {
        let n = rng.random_range(1..=12);
        let dim = rng.random_range(1..=6);
        let beta = rng.random_range(0.02..0.98);
        let mesh = random_admissible_mesh(&mut rng, n, 0.5 * beta)?;
        let table = KernelTable::build(&mesh, beta)?;
        let mut q = vec![(0..dim).map(|_| rng.random_range(0.1..3.0)).collect::<Vec<f64>>()];
        for _ in 0..n {
            let prev = q.last().expect("seeded");
            let next = prev
                .iter()
                .map(|&v| if rng.random_bool(0.3) { v } else { v * rng.random_range(0.2..1.0) })
                .collect();
            q.push(next);
        }
        let z: Vec<Vec<f64>> = (0..=n)
            .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let out = check_quadratic_form_inequality(&mesh, table.row(n), &q, &z)?;
        let margin = (out.lhs - out.rhs) / out.tolerance.max(f64::MIN_POSITIVE);
        worst = worst.min(margin);
        if !out.holds {
            violations += 1;
            if notes.len() < 10 {
                notes.push(format!("trial {trial}: lhs {} < rhs {}", out.lhs, out.rhs));
            }
        }
    }
    Ok(SuiteReport {
        name: "inequality",
        checks: trials,
        violations,
        worst,
        notes,
    })
}

/// Identity and bounds of the complementary kernels on graded meshes with
/// `γ ∈ {1, 2, 4}`. `worst` is the largest identity residual.
pub fn verify_complementary(n: usize) -> Result<SuiteReport> {
    let mut checks = 0;
    let mut violations = 0;
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for &gamma in &[1.0, 2.0, 4.0] {
        for beta in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let mesh = TimeMesh::graded(n, 1.0, gamma, 0.5 * beta)?;
            let table = KernelTable::build(&mesh, beta)?;
            for row in complementary_rows(&table) {
                checks += 1;
                let c = row.check(&table, &mesh);
                worst = worst.max(c.identity_residual);
                if !c.holds(1e-12) {
                    violations += 1;
                    if notes.len() < 10 {
                        notes.push(format!("gamma {gamma}, beta {beta}, n {}: {c:?}", row.n));
                    }
                }
            }
        }
    }
    Ok(SuiteReport {
        name: "complementary",
        checks,
        violations,
        worst,
        notes,
    })
}

/// Sampled assumptions on the benchmark coefficients. The monotonicity of the
/// weights is checked with the sampled `C_p` inflated by 1%; a configured
/// `C_p` below the sampled value is reported as a note. `worst` is the sampled `C_p`.
pub fn verify_coefficients(density: usize) -> Result<SuiteReport> {
    let base = CoefficientSet::variable();
    let sampled = estimate_cp(&base, &Rect::UNIT, 1.0, density)?;
    let mut notes = Vec::new();
    if sampled > base.c_p {
        notes.push(format!(
            "configured C_p = {} is below the sampled sup {sampled:.4}; checking with {:.4}",
            base.c_p,
            1.01 * sampled
        ));
    }
    let coeffs = base.with_cp(1.01 * sampled);
    let report = verify_assumptions(&coeffs, &Rect::UNIT, 1.0, density, 1e-9)?;
    let mut violations = 0;
    for c in &report.checks {
        if !c.passed {
            violations += 1;
            notes.push(format!("{} failed: worst {} at {:?}", c.name, c.worst_value, c.worst_point));
        }
    }
    Ok(SuiteReport {
        name: "coefficients",
        checks: report.checks.len(),
        violations,
        worst: sampled,
        notes,
    })
}

/// SOE accuracy at `ε = 1e-12` with `Δt = τ_1` of graded meshes. `worst` is the
/// largest sampled relative error.
pub fn verify_soe(samples: usize) -> Result<SuiteReport> {
    let mut checks = 0;
    let mut violations = 0;
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for &beta in &[0.25, 0.35, 0.5, 0.75, 0.95] {
        for &(n, gamma) in &[(32usize, 4.0), (500, 1.0)] {
            let mesh = TimeMesh::graded(n, 1.0, gamma, 0.5 * beta)?;
            let soe = soe_build(beta, 1e-12, mesh.tau(1), 1.0)?;
            let err = soe.max_sampled_error(samples);
            checks += 1;
            worst = worst.max(err);
            if err > 1e-12 {
                violations += 1;
                notes.push(format!("beta {beta}, N {n}: error {err:e}"));
            }
        }
    }
    Ok(SuiteReport {
        name: "soe",
        checks,
        violations,
        worst,
        notes,
    })
}

/// Run every suite.
pub fn verify_all(opts: &VerifyOptions) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        verify_kernel_properties(opts.kernel_meshes, opts.seed)?,
        verify_inequality(opts.inequality_trials, opts.seed.wrapping_add(1))?,
        verify_complementary(opts.complementary_n)?,
        verify_coefficients(24)?,
        verify_soe(20_000)?,
    ])
}
