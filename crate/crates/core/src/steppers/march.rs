use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::problem::{ProblemKind, ProblemSpec, PsiMode};
use super::solution::{SolutionHistory, Storage};
use crate::coefficients::build_aux;
use crate::error::{FracError, Result};
use crate::kernels::{soe_build, soe_delta_t, CaputoHistory, DirectHistory, KernelMode, KernelTable, SoeHistory};
use crate::spatial::{assemble_operators, Grid2D, LinearSolver, OperatorSet, SolveStats, SolverOptions};
use crate::timegrid::TimeMesh;

/// Everything about a solve that is not part of the problem itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StepperOptions {
    pub solver: SolverOptions,
    pub kernel: KernelMode,
    /// Relative accuracy of the SOE kernel in [`KernelMode::Soe`].
    pub soe_epsilon: f64,
    pub psi_mode: PsiMode,
    pub storage: Storage,
}

impl Default for StepperOptions {
    fn default() -> Self {
        Self {
            solver: SolverOptions::default(),
            kernel: KernelMode::Direct,
            soe_epsilon: 1e-12,
            psi_mode: PsiMode::Auto,
            storage: Storage::Full,
        }
    }
}

/// A freshly computed level passed to observers.
#[derive(Debug, Clone, Copy)]
pub struct StepView<'a> {
    pub n: usize,
    pub t: f64,
    pub u: &'a [f64],
    pub v: Option<&'a [f64]>,
}

fn check_setup(problem: &ProblemSpec, mesh: &TimeMesh, grid: &Grid2D) -> Result<()> {
    problem.validate()?;
    if (mesh.theta() - problem.theta()).abs() > 1e-14 {
        return Err(FracError::Precondition(format!(
            "mesh theta {} but the problem needs beta/2 = {}",
            mesh.theta(),
            problem.theta()
        )));
    }
    if (mesh.horizon() - problem.horizon).abs() > 1e-12 * problem.horizon {
        return Err(FracError::Precondition(format!(
            "mesh ends at {} but the problem horizon is {}",
            mesh.horizon(),
            problem.horizon
        )));
    }
    if grid.rect != problem.domain {
        return Err(FracError::Precondition("grid and problem domains differ".into()));
    }
    Ok(())
}

/// One convolution history per sequence, all sharing the same kernel data.
fn histories(problem: &ProblemSpec, mesh: &Arc<TimeMesh>, dim: usize, count: usize, opts: &StepperOptions) -> Result<Vec<Box<dyn CaputoHistory>>> {
    let beta = problem.beta();
    match opts.kernel {
        KernelMode::Direct => {
            let table = Arc::new(KernelTable::build(mesh, beta)?);
            Ok((0..count)
                .map(|_| Box::new(DirectHistory::new(table.clone())) as Box<dyn CaputoHistory>)
                .collect())
        }
        KernelMode::Soe => {
            let soe = Arc::new(soe_build(beta, opts.soe_epsilon, soe_delta_t(mesh), mesh.horizon())?);
            (0..count)
                .map(|_| Ok(Box::new(SoeHistory::new(mesh.clone(), soe.clone(), dim)?) as Box<dyn CaputoHistory>))
                .collect()
        }
    }
}

fn sample_at(grid: &Grid2D, f: &crate::coefficients::ScalarField, t: f64) -> Vec<f64> {
    grid.sample(|x, y| f.eval(x, y, t))
}

fn note(stats: &mut super::solution::RunStats, st: &SolveStats) {
    stats.direct = st.direct;
    stats.solver_iterations += st.iterations;
    stats.max_rel_residual = stats.max_rel_residual.max(st.rel_residual);
}

/// Operators at `t_{n-θ}`, reusing the pattern of the previous level.
fn operators_at(prev: Option<OperatorSet>, grid: &Grid2D, aux: &crate::coefficients::AuxFields, t: f64) -> Result<OperatorSet> {
    match prev {
        Some(ops) => ops.reassemble(aux, t),
        None => assemble_operators(grid, aux, t),
    }
}

/// March the sub-diffusion scheme over `mesh`.
pub fn subdiffusion_solve(problem: &ProblemSpec, mesh: &TimeMesh, grid: &Grid2D, opts: &StepperOptions) -> Result<SolutionHistory> {
    subdiffusion_observed(problem, mesh, grid, opts, &mut |_| Ok(()))
}

/// [`subdiffusion_solve`] with a callback after every level, including level 0.
pub fn subdiffusion_observed(
    problem: &ProblemSpec,
    mesh: &TimeMesh,
    grid: &Grid2D,
    opts: &StepperOptions,
    observer: &mut dyn FnMut(&StepView) -> Result<()>,
) -> Result<SolutionHistory> {
    if problem.kind != ProblemKind::Subdiffusion {
        return Err(FracError::invalid("expected a sub-diffusion problem"));
    }
    check_setup(problem, mesh, grid)?;
    let clock = Instant::now();
    let mesh = Arc::new(mesh.clone());
    let m = grid.len();
    let theta = mesh.theta();
    let aux = build_aux(&problem.coeffs)?;
    let mut hist = histories(problem, &mesh, m, 1, opts)?.pop().expect("one history");
    let mut solver = LinearSolver::new(opts.solver);
    let mut out = SolutionHistory::new(problem.kind, mesh.clone(), *grid, None, opts.psi_mode);

    let mut u_prev = sample_at(grid, &problem.phi, 0.0);
    observer(&StepView { n: 0, t: 0.0, u: &u_prev, v: None })?;
    out.record(u_prev.clone(), None, opts.storage);

    let mut ops = None;
    let mut h = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for n in 1..=mesh.len() {
        let t = mesh.t_offset(n);
        let cur = operators_at(ops.take(), grid, &aux, t)?;
        let lead = hist.leading(n);
        hist.history(n, &mut h);
        let mu = cur.apply(&u_prev)?;
        let f = sample_at(grid, &problem.source, t);
        for i in 0..m {
            rhs[i] = lead * u_prev[i] - h[i] + theta * mu[i] + f[i];
        }
        let k = cur.shifted_system(lead, 1.0 - theta);
        let (u, st) = solver.solve_with_guess(&k, &rhs, Some(&u_prev)).map_err(|e| e.at_step(n))?;
        note(&mut out.stats, &st);
        let diff: Vec<f64> = u.iter().zip(&u_prev).map(|(a, b)| a - b).collect();
        hist.push(&diff);
        observer(&StepView { n, t: mesh.t(n), u: &u, v: None })?;
        out.record(u.clone(), None, opts.storage);
        u_prev = u;
        ops = Some(cur);
    }
    out.stats.steps = mesh.len();
    out.stats.seconds = clock.elapsed().as_secs_f64();
    Ok(out)
}

/// `Ψ^{n-θ}` for the reduced diffusion-wave system.
pub(crate) fn psi_term(problem: &ProblemSpec, ops: &OperatorSet, psi_h: &[f64], t: f64, mode: PsiMode) -> Result<Vec<f64>> {
    match problem.resolve_psi_mode(mode) {
        PsiMode::Auto | PsiMode::Discrete => Ok(ops.apply(psi_h)?.into_iter().map(|v| t * v).collect()),
        PsiMode::Analytic => {
            let f = problem
                .a_tpsi
                .as_ref()
                .ok_or_else(|| FracError::Config("analytic psi mode needs an A(t psi) field".into()))?;
            Ok(sample_at(&ops.grid, f, t))
        }
    }
}

/// March the reduced diffusion-wave scheme, eliminating `v^n` so each level needs one solve.
pub fn diffwave_solve(problem: &ProblemSpec, mesh: &TimeMesh, grid: &Grid2D, opts: &StepperOptions) -> Result<SolutionHistory> {
    diffwave_observed(problem, mesh, grid, opts, &mut |_| Ok(()))
}

/// [`diffwave_solve`] with a callback after every level, including level 0.
pub fn diffwave_observed(
    problem: &ProblemSpec,
    mesh: &TimeMesh,
    grid: &Grid2D,
    opts: &StepperOptions,
    observer: &mut dyn FnMut(&StepView) -> Result<()>,
) -> Result<SolutionHistory> {
    if problem.kind != ProblemKind::Diffusionwave {
        return Err(FracError::invalid("expected a diffusion-wave problem"));
    }
    check_setup(problem, mesh, grid)?;
    let clock = Instant::now();
    let mesh = Arc::new(mesh.clone());
    let m = grid.len();
    let theta = mesh.theta();
    let omt = 1.0 - theta;
    let aux = build_aux(&problem.coeffs)?;
    let mut hs = histories(problem, &mesh, m, 2, opts)?;
    let mut hv = hs.pop().expect("two histories");
    let mut hu = hs.pop().expect("two histories");
    let mut solver = LinearSolver::new(opts.solver);
    let psi_h = sample_at(grid, problem.psi.as_ref().expect("validated"), 0.0);
    let psi_mode = problem.resolve_psi_mode(opts.psi_mode);
    let mut out = SolutionHistory::new(problem.kind, mesh.clone(), *grid, Some(psi_h.clone()), psi_mode);

    let mut ut_prev = sample_at(grid, &problem.phi, 0.0);
    let mut v_prev = vec![0.0; m];
    observer(&StepView {
        n: 0,
        t: 0.0,
        u: &ut_prev,
        v: Some(&v_prev),
    })?;
    out.record(ut_prev.clone(), Some(v_prev.clone()), opts.storage);

    let mut ops = None;
    let mut h_u = vec![0.0; m];
    let mut h_v = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for n in 1..=mesh.len() {
        let t = mesh.t_offset(n);
        let cur = operators_at(ops.take(), grid, &aux, t)?;
        let lead = hu.leading(n);
        hu.history(n, &mut h_u);
        hv.history(n, &mut h_v);
        let mu = cur.apply(&ut_prev)?;
        let f = sample_at(grid, &problem.source, t);
        let big_psi = psi_term(problem, &cur, &psi_h, t, psi_mode)?;
        let d = lead * lead / omt;
        for i in 0..m {
            rhs[i] = d * ut_prev[i] - lead * h_u[i] / omt + lead * v_prev[i] / omt - h_v[i] + theta * mu[i] + f[i] + big_psi[i];
        }
        let k = cur.shifted_system(d, omt);
        let (ut, st) = solver.solve_with_guess(&k, &rhs, Some(&ut_prev)).map_err(|e| e.at_step(n))?;
        note(&mut out.stats, &st);
        let du: Vec<f64> = ut.iter().zip(&ut_prev).map(|(a, b)| a - b).collect();
        let v: Vec<f64> = (0..m).map(|i| (lead * du[i] + h_u[i] - theta * v_prev[i]) / omt).collect();
        let dv: Vec<f64> = v.iter().zip(&v_prev).map(|(a, b)| a - b).collect();
        hu.push(&du);
        hv.push(&dv);
        let tn = mesh.t(n);
        let u: Vec<f64> = ut.iter().zip(&psi_h).map(|(a, p)| a + tn * p).collect();
        observer(&StepView {
            n,
            t: tn,
            u: &u,
            v: Some(&v),
        })?;
        out.record(u, Some(v.clone()), opts.storage);
        ut_prev = ut;
        v_prev = v;
        ops = Some(cur);
    }
    out.stats.steps = mesh.len();
    out.stats.seconds = clock.elapsed().as_secs_f64();
    Ok(out)
}

/// Dispatch on the problem kind.
pub fn solve(problem: &ProblemSpec, mesh: &TimeMesh, grid: &Grid2D, opts: &StepperOptions) -> Result<SolutionHistory> {
    solve_observed(problem, mesh, grid, opts, &mut |_| Ok(()))
}

pub fn solve_observed(
    problem: &ProblemSpec,
    mesh: &TimeMesh,
    grid: &Grid2D,
    opts: &StepperOptions,
    observer: &mut dyn FnMut(&StepView) -> Result<()>,
) -> Result<SolutionHistory> {
    match problem.kind {
        ProblemKind::Subdiffusion => subdiffusion_observed(problem, mesh, grid, opts, observer),
        ProblemKind::Diffusionwave => diffwave_observed(problem, mesh, grid, opts, observer),
    }
}
