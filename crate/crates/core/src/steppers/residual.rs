use serde::Serialize;

use super::march::psi_term;
use super::problem::{ProblemKind, ProblemSpec};
use super::solution::SolutionHistory;
use crate::coefficients::build_aux;
use crate::error::{FracError, Result};
use crate::kernels::{alikhanov_row, KernelRow};
use crate::spatial::assemble_operators;

/// Residuals of the scheme equations at one level, in the max norm.
///
/// `relative` divides by the largest max-norm among the terms of each equation.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct StepResidual {
    pub n: usize,
    pub scheme_abs: f64,
    pub scheme_rel: f64,
    /// Second equation `v^{n-θ} = (𝒟ũ)^{n-θ}` of the diffusion-wave system.
    pub aux_abs: Option<f64>,
    pub aux_rel: Option<f64>,
}

impl StepResidual {
    pub fn max_rel(&self) -> f64 {
        self.scheme_rel.max(self.aux_rel.unwrap_or(0.0))
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn caputo(row: &KernelRow, level: impl Fn(usize) -> Vec<f64>, m: usize) -> Vec<f64> {
    let mut out = vec![0.0; m];
    let mut prev = level(0);
    for k in 1..=row.n {
        let cur = level(k);
        let a = row.on_interval(k);
        for i in 0..m {
            out[i] += a * (cur[i] - prev[i]);
        }
        prev = cur;
    }
    out
}

/// `(a - b - c - ...)` and its scale.
fn combine(terms: &[&[f64]]) -> (f64, f64) {
    let m = terms[0].len();
    let mut r = terms[0].to_vec();
    for t in &terms[1..] {
        for i in 0..m {
            r[i] -= t[i];
        }
    }
    let scale = terms.iter().map(|t| max_abs(t)).fold(0.0, f64::max);
    let abs = max_abs(&r);
    (abs, if scale > 0.0 { abs / scale } else { abs })
}

/// Re-evaluate the scheme at level `n` from stored levels, using exact kernel coefficients.
pub fn step_residual_check(history: &SolutionHistory, problem: &ProblemSpec, n: usize) -> Result<StepResidual> {
    if n == 0 {
        return Ok(StepResidual {
            n,
            aux_abs: (problem.kind == ProblemKind::Diffusionwave).then_some(0.0),
            aux_rel: (problem.kind == ProblemKind::Diffusionwave).then_some(0.0),
            ..Default::default()
        });
    }
    if history.first_level != 0 || history.last_level() < n {
        return Err(FracError::Precondition(format!("levels 0..={n} must be stored")));
    }
    let mesh = &history.mesh;
    let grid = &history.grid;
    let m = grid.len();
    let theta = mesh.theta();
    let row = alikhanov_row(mesh, problem.beta(), n)?;
    let aux = build_aux(&problem.coeffs)?;
    let t = mesh.t_offset(n);
    let ops = assemble_operators(grid, &aux, t)?;
    let f = grid.sample(|x, y| problem.source.eval(x, y, t));
    let blend = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(p, q)| (1.0 - theta) * p + theta * q).collect() };

    match problem.kind {
        ProblemKind::Subdiffusion => {
            let d = caputo(&row, |k| history.u(k).expect("stored").to_vec(), m);
            let mu = ops.apply(&blend(history.u(n).expect("stored"), history.u(n - 1).expect("stored")))?;
            let (abs, rel) = combine(&[&d, &mu, &f]);
            Ok(StepResidual {
                n,
                scheme_abs: abs,
                scheme_rel: rel,
                aux_abs: None,
                aux_rel: None,
            })
        }
        ProblemKind::Diffusionwave => {
            let ut = |k: usize| history.u_tilde(k).expect("stored");
            let v = |k: usize| history.v(k).expect("stored").to_vec();
            let dv = caputo(&row, v, m);
            let mu = ops.apply(&blend(&ut(n), &ut(n - 1)))?;
            let psi = psi_term(problem, &ops, history.psi.as_deref().expect("diffusion-wave history"), t, history.psi_mode)?;
            let (abs1, rel1) = combine(&[&dv, &mu, &f, &psi]);
            let du = caputo(&row, ut, m);
            let vb = blend(&v(n), &v(n - 1));
            let (abs2, rel2) = combine(&[&vb, &du]);
            Ok(StepResidual {
                n,
                scheme_abs: abs1,
                scheme_rel: rel1,
                aux_abs: Some(abs2),
                aux_rel: Some(rel2),
            })
        }
    }
}
