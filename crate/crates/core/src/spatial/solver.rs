use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::{Lu, SymbolicLu};
use faer::sparse::{SparseColMatRef, SymbolicSparseColMatRef};
use faer::Mat;
use serde::{Deserialize, Serialize};

use super::sparse::CsrMatrix;
use crate::error::{FracError, Result};

/// Linear solver selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SolverMode {
    /// Direct below `direct_threshold` unknowns, iterative above.
    #[default]
    Auto,
    Direct,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub mode: SolverMode,
    pub rel_tol: f64,
    pub max_iter: usize,
    pub direct_threshold: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            mode: SolverMode::Auto,
            rel_tol: 1e-12,
            max_iter: 20_000,
            direct_threshold: 250_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct SolveStats {
    pub direct: bool,
    pub iterations: usize,
    /// `‖b - Ax‖₂ / ‖b‖₂`.
    pub rel_residual: f64,
}

/// Reusable solver; the symbolic factorisation is kept while the pattern is unchanged.
#[derive(Debug, Default)]
pub struct LinearSolver {
    pub opts: SolverOptions,
    symbolic: Option<(Vec<usize>, Vec<usize>, SymbolicLu<usize>)>,
    pub total_iterations: usize,
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn residual(a: &CsrMatrix, x: &[f64], b: &[f64]) -> Vec<f64> {
    let ax = a.matvec(x).expect("dimensions checked");
    b.iter().zip(&ax).map(|(b, ax)| b - ax).collect()
}

fn breakdown(reason: impl Into<String>, iterations: usize, residual: f64) -> FracError {
    FracError::SolverBreakdown {
        reason: reason.into(),
        iterations,
        residual,
        step: None,
    }
}

impl LinearSolver {
    pub fn new(opts: SolverOptions) -> Self {
        Self {
            opts,
            symbolic: None,
            total_iterations: 0,
        }
    }

    fn use_direct(&self, n: usize) -> bool {
        match self.opts.mode {
            SolverMode::Direct => true,
            SolverMode::Iterative => false,
            SolverMode::Auto => n <= self.opts.direct_threshold,
        }
    }

    pub fn solve(&mut self, a: &CsrMatrix, b: &[f64]) -> Result<(Vec<f64>, SolveStats)> {
        self.solve_with_guess(a, b, None)
    }

    /// Solve `a x = b`; `guess` seeds the iterative method.
    pub fn solve_with_guess(&mut self, a: &CsrMatrix, b: &[f64], guess: Option<&[f64]>) -> Result<(Vec<f64>, SolveStats)> {
        if a.nrows != a.ncols {
            return Err(FracError::invalid("matrix must be square"));
        }
        if b.len() != a.nrows {
            return Err(FracError::LengthMismatch {
                expected: a.nrows,
                got: b.len(),
            });
        }
        let bn = norm2(b);
        if bn == 0.0 {
            return Ok((vec![0.0; b.len()], SolveStats::default()));
        }
        if self.use_direct(a.nrows) {
            let x = self.direct(a, b)?;
            let r = residual(a, &x, b);
            let rinf = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let xinf = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let binf = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let backward = rinf / (a.norm_inf() * xinf + binf);
            let rel = norm2(&r) / bn;
            if !(backward <= 1e-10) || !x.iter().chain(&r).all(|v| v.is_finite()) {
                return Err(breakdown("direct factorisation is unstable or singular", 0, rel));
            }
            Ok((
                x,
                SolveStats {
                    direct: true,
                    iterations: 0,
                    rel_residual: rel,
                },
            ))
        } else {
            let (x, it, rel) = bicgstab_ilu0(a, b, guess, self.opts.rel_tol, self.opts.max_iter)?;
            self.total_iterations += it;
            Ok((
                x,
                SolveStats {
                    direct: false,
                    iterations: it,
                    rel_residual: rel,
                },
            ))
        }
    }

    fn direct(&mut self, a: &CsrMatrix, b: &[f64]) -> Result<Vec<f64>> {
        let n = a.nrows;
        // CSR arrays of A are the CSC arrays of A^T.
        let sym = SymbolicSparseColMatRef::new_checked(n, n, &a.row_ptr, None, &a.col_idx);
        let reuse = matches!(&self.symbolic, Some((rp, ci, _)) if *rp == a.row_ptr && *ci == a.col_idx);
        if !reuse {
            let s = SymbolicLu::try_new(sym).map_err(|e| breakdown(format!("symbolic factorisation failed: {e:?}"), 0, f64::NAN))?;
            self.symbolic = Some((a.row_ptr.clone(), a.col_idx.clone(), s));
        }
        let symbolic = self.symbolic.as_ref().expect("set above").2.clone();
        let mat = SparseColMatRef::new(sym, &a.values);
        let lu = Lu::try_new_with_symbolic(symbolic, mat).map_err(|e| breakdown(format!("numeric factorisation failed: {e:?}"), 0, f64::NAN))?;
        let mut rhs = Mat::<f64>::from_fn(n, 1, |i, _| b[i]);
        lu.solve_transpose_in_place(rhs.as_mut());
        Ok((0..n).map(|i| rhs[(i, 0)]).collect())
    }
}

/// One-shot solve.
pub fn solve_sparse(a: &CsrMatrix, b: &[f64], opts: SolverOptions) -> Result<Vec<f64>> {
    LinearSolver::new(opts).solve(a, b).map(|(x, _)| x)
}

/// Incomplete LU with the sparsity pattern of `a`.
struct Ilu0 {
    lu: Vec<f64>,
    diag: Vec<usize>,
}

impl Ilu0 {
    fn new(a: &CsrMatrix) -> Result<Self> {
        let n = a.nrows;
        let (rp, ci) = (&a.row_ptr, &a.col_idx);
        let mut diag = vec![usize::MAX; n];
        for r in 0..n {
            for k in rp[r]..rp[r + 1] {
                if ci[k] == r {
                    diag[r] = k;
                }
            }
            if diag[r] == usize::MAX {
                return Err(breakdown(format!("row {r} has no diagonal entry"), 0, f64::NAN));
            }
        }
        let mut lu = a.values.clone();
        for r in 0..n {
            for k in rp[r]..diag[r] {
                let c = ci[k];
                let piv = lu[diag[c]];
                if piv == 0.0 || !piv.is_finite() {
                    return Err(breakdown(format!("zero pivot in incomplete factorisation at row {c}"), 0, f64::NAN));
                }
                lu[k] /= piv;
                let f = lu[k];
                let mut p = k + 1;
                for q in diag[c] + 1..rp[c + 1] {
                    let cc = ci[q];
                    while p < rp[r + 1] && ci[p] < cc {
                        p += 1;
                    }
                    if p < rp[r + 1] && ci[p] == cc {
                        lu[p] -= f * lu[q];
                    }
                }
            }
            if lu[diag[r]] == 0.0 {
                return Err(breakdown(format!("zero pivot in incomplete factorisation at row {r}"), 0, f64::NAN));
            }
        }
        Ok(Self { lu, diag })
    }

    fn apply(&self, a: &CsrMatrix, x: &mut [f64]) {
        let (rp, ci) = (&a.row_ptr, &a.col_idx);
        let n = a.nrows;
        for r in 0..n {
            let mut s = x[r];
            for k in rp[r]..self.diag[r] {
                s -= self.lu[k] * x[ci[k]];
            }
            x[r] = s;
        }
        for r in (0..n).rev() {
            let mut s = x[r];
            for k in self.diag[r] + 1..rp[r + 1] {
                s -= self.lu[k] * x[ci[k]];
            }
            x[r] = s / self.lu[self.diag[r]];
        }
    }
}

/// Right-preconditioned BiCGSTAB with ILU(0).
fn bicgstab_ilu0(a: &CsrMatrix, b: &[f64], guess: Option<&[f64]>, tol: f64, max_iter: usize) -> Result<(Vec<f64>, usize, f64)> {
    let n = a.nrows;
    let m = Ilu0::new(a)?;
    let bn = norm2(b);
    let mut x = guess.map(|g| g.to_vec()).unwrap_or_else(|| vec![0.0; n]);
    let mut r = residual(a, &x, b);
    let mut rel = norm2(&r) / bn;
    if rel <= tol {
        return Ok((x, 0, rel));
    }
    let r_hat = r.clone();
    let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut t = vec![0.0; n];
    for it in 1..=max_iter {
        let rho_new = dot(&r_hat, &r);
        if rho_new == 0.0 || !rho_new.is_finite() {
            return Err(breakdown("BiCGSTAB breakdown (rho = 0)", it, rel));
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        y.copy_from_slice(&p);
        m.apply(a, &mut y);
        a.matvec_into(&y, &mut v)?;
        let rv = dot(&r_hat, &v);
        if rv == 0.0 {
            return Err(breakdown("BiCGSTAB breakdown (r̂·v = 0)", it, rel));
        }
        alpha = rho / rv;
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        if norm2(&s) / bn <= tol {
            for i in 0..n {
                x[i] += alpha * y[i];
            }
            let rel = norm2(&residual(a, &x, b)) / bn;
            return Ok((x, it, rel));
        }
        z.copy_from_slice(&s);
        m.apply(a, &mut z);
        a.matvec_into(&z, &mut t)?;
        let tt = dot(&t, &t);
        if tt == 0.0 {
            return Err(breakdown("BiCGSTAB breakdown (t = 0)", it, rel));
        }
        omega = dot(&t, &s) / tt;
        for i in 0..n {
            x[i] += alpha * y[i] + omega * z[i];
            r[i] = s[i] - omega * t[i];
        }
        rel = norm2(&r) / bn;
        if rel <= tol {
            let true_rel = norm2(&residual(a, &x, b)) / bn;
            if true_rel <= 10.0 * tol {
                return Ok((x, it, true_rel));
            }
            r = residual(a, &x, b);
            rel = true_rel;
        }
        if omega == 0.0 || !rel.is_finite() {
            return Err(breakdown("BiCGSTAB stagnated", it, rel));
        }
    }
    Err(breakdown("iteration limit reached", max_iter, rel))
}
