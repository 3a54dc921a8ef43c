use std::sync::Arc;

use super::grid::Grid2D;
use super::sparse::CsrMatrix;
use crate::coefficients::AuxFields;
use crate::error::{FracError, Result};

/// Positions of the five stencil slots inside each CSR row.
#[derive(Debug)]
struct Pattern {
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    /// `[south, west, centre, east, north]`, `usize::MAX` where absent.
    slots: Vec<[usize; 5]>,
}

const NONE: usize = usize::MAX;

fn five_point(grid: &Grid2D) -> Pattern {
    let nx = grid.mx - 1;
    let ny = grid.my - 1;
    let m = nx * ny;
    let mut row_ptr = Vec::with_capacity(m + 1);
    let mut col_idx = Vec::with_capacity(5 * m);
    let mut slots = Vec::with_capacity(m);
    row_ptr.push(0);
    for j in 1..=ny {
        for i in 1..=nx {
            let r = grid.idx(i, j);
            let mut s = [NONE; 5];
            if j > 1 {
                s[0] = col_idx.len();
                col_idx.push(r - nx);
            }
            if i > 1 {
                s[1] = col_idx.len();
                col_idx.push(r - 1);
            }
            s[2] = col_idx.len();
            col_idx.push(r);
            if i < nx {
                s[3] = col_idx.len();
                col_idx.push(r + 1);
            }
            if j < ny {
                s[4] = col_idx.len();
                col_idx.push(r + nx);
            }
            slots.push(s);
            row_ptr.push(col_idx.len());
        }
    }
    Pattern { row_ptr, col_idx, slots }
}

/// Assembled operators at one offset time.
///
/// `A` is the symmetric stiffness `(I⊗S_x)^T P1 (I⊗S_x) + (S_y⊗I)^T P2 (S_y⊗I)`,
/// `B` the central advection `P3 δ_x̂ + P4 δ_ŷ` and `C = diag(b3)`. The discrete
/// elliptic operator is `M = -P^{-1}A + B + C`. All sparse matrices share the
/// five-point pattern.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    pub grid: Grid2D,
    pub t_offset: f64,
    pub p_diag: Vec<f64>,
    /// `p1` at `(x_{i+1/2}, y_j)`, `i = 0..Mx-1`, x-fastest.
    pub p1_face: Vec<f64>,
    /// `p2` at `(x_i, y_{j+1/2})`, `j = 0..My-1`, x-fastest.
    pub p2_face: Vec<f64>,
    pub c_reac: Vec<f64>,
    pub a_stiff: CsrMatrix,
    pub b_adv: CsrMatrix,
    pub elliptic: CsrMatrix,
    pattern: Arc<Pattern>,
}

fn check_weight(field: &'static str, value: f64, x: f64, y: f64, t: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(FracError::NonPositiveWeight { field, value, x, y, t })
    }
}

/// Assemble `P, P1, P2, A, B, C` and `M` at time `t_offset`.
pub fn assemble_operators(grid: &Grid2D, aux: &AuxFields, t_offset: f64) -> Result<OperatorSet> {
    let pattern = Arc::new(five_point(grid));
    assemble_with_pattern(grid, aux, t_offset, pattern)
}

fn assemble_with_pattern(grid: &Grid2D, aux: &AuxFields, t: f64, pattern: Arc<Pattern>) -> Result<OperatorSet> {
    let (mx, my) = (grid.mx, grid.my);
    let nx = mx - 1;
    let m = grid.len();
    let (hx, hy) = (grid.hx, grid.hy);

    let mut p1_face = Vec::with_capacity(mx * (my - 1));
    for j in 1..my {
        let y = grid.y(j);
        for i in 0..mx {
            let x = grid.x(i) + 0.5 * hx;
            let v = aux.p1(x, y, t);
            check_weight("p1", v, x, y, t)?;
            p1_face.push(v);
        }
    }
    let mut p2_face = Vec::with_capacity(nx * my);
    for j in 0..my {
        let y = grid.y(j) + 0.5 * hy;
        for i in 1..mx {
            let x = grid.x(i);
            let v = aux.p2(x, y, t);
            check_weight("p2", v, x, y, t)?;
            p2_face.push(v);
        }
    }

    let nnz = pattern.col_idx.len();
    let mut a_vals = vec![0.0; nnz];
    let mut b_vals = vec![0.0; nnz];
    let mut m_vals = vec![0.0; nnz];
    let mut p_diag = Vec::with_capacity(m);
    let mut c_reac = Vec::with_capacity(m);
    let (ihx2, ihy2) = (1.0 / (hx * hx), 1.0 / (hy * hy));
    let (i2hx, i2hy) = (0.5 / hx, 0.5 / hy);
    for j in 1..my {
        let y = grid.y(j);
        for i in 1..mx {
            let x = grid.x(i);
            let r = grid.idx(i, j);
            let s = pattern.slots[r];
            let p = aux.p(x, y, t);
            check_weight("p", p, x, y, t)?;
            let p3 = aux.p3(x, y, t);
            let p4 = aux.p4(x, y, t);
            let b3 = aux.b3(x, y, t);
            p_diag.push(p);
            c_reac.push(b3);

            let west = p1_face[(j - 1) * mx + (i - 1)] * ihx2;
            let east = p1_face[(j - 1) * mx + i] * ihx2;
            let south = p2_face[(j - 1) * nx + (i - 1)] * ihy2;
            let north = p2_face[j * nx + (i - 1)] * ihy2;
            a_vals[s[2]] = west + east + south + north;
            let ip = 1.0 / p;
            m_vals[s[2]] = -ip * a_vals[s[2]] + b3;
            let neighbours = [(0, -south, -p4 * i2hy), (1, -west, -p3 * i2hx), (3, -east, p3 * i2hx), (4, -north, p4 * i2hy)];
            for (slot, a, b) in neighbours {
                if s[slot] != NONE {
                    a_vals[s[slot]] = a;
                    b_vals[s[slot]] = b;
                    m_vals[s[slot]] = -ip * a + b;
                }
            }
        }
    }
    let mk = |values: Vec<f64>| CsrMatrix {
        nrows: m,
        ncols: m,
        row_ptr: pattern.row_ptr.clone(),
        col_idx: pattern.col_idx.clone(),
        values,
    };
    Ok(OperatorSet {
        grid: *grid,
        t_offset: t,
        p_diag,
        p1_face,
        p2_face,
        c_reac,
        a_stiff: mk(a_vals),
        b_adv: mk(b_vals),
        elliptic: mk(m_vals),
        pattern,
    })
}

impl OperatorSet {
    /// Reassemble at a new time, reusing the sparsity pattern.
    pub fn reassemble(&self, aux: &AuxFields, t_offset: f64) -> Result<OperatorSet> {
        assemble_with_pattern(&self.grid, aux, t_offset, self.pattern.clone())
    }

    /// `M u = (-P^{-1}A + B + C) u`.
    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.elliptic.matvec(u)
    }

    /// `diag·I - w·M`.
    pub fn shifted_system(&self, diag: f64, w: f64) -> CsrMatrix {
        let mut k = self.elliptic.clone();
        for v in &mut k.values {
            *v *= -w;
        }
        for s in &self.pattern.slots {
            k.values[s[2]] += diag;
        }
        k
    }

    pub fn c_matrix(&self) -> CsrMatrix {
        CsrMatrix::diagonal(&self.c_reac)
    }

    /// The stiffness matrix rebuilt from its Kronecker factors.
    pub fn stiffness_factored(&self) -> CsrMatrix {
        let (sx, sy, _, _) = difference_matrices(&self.grid);
        let ix = CsrMatrix::identity(self.grid.mx - 1);
        let iy = CsrMatrix::identity(self.grid.my - 1);
        let dx = iy.kron(&sx);
        let dy = sy.kron(&ix);
        let ax = dx.transpose().matmul(&CsrMatrix::diagonal(&self.p1_face)).matmul(&dx);
        let ay = dy.transpose().matmul(&CsrMatrix::diagonal(&self.p2_face)).matmul(&dy);
        ax.add_scaled(1.0, &ay, 1.0)
    }
}

/// `(S_x, S_y, Ŝ_x, Ŝ_y)`: `S_x` is `Mx × (Mx-1)` with `-1` on the diagonal and
/// `1` below, scaled by `1/h_x`; `Ŝ_x` is `(Mx-1) × (Mx-1)` with `-1` on the
/// diagonal and `1` above, scaled by `1/(2h_x)`.
pub fn difference_matrices(grid: &Grid2D) -> (CsrMatrix, CsrMatrix, CsrMatrix, CsrMatrix) {
    let forward = |m: usize, h: f64| {
        let mut t = Vec::new();
        for c in 0..m - 1 {
            t.push((c, c, -1.0 / h));
            t.push((c + 1, c, 1.0 / h));
        }
        CsrMatrix::from_triplets(m, m - 1, &t)
    };
    let central = |m: usize, h: f64| {
        let mut t = Vec::new();
        for r in 0..m - 1 {
            t.push((r, r, -0.5 / h));
            if r + 1 < m - 1 {
                t.push((r, r + 1, 0.5 / h));
            }
        }
        CsrMatrix::from_triplets(m - 1, m - 1, &t)
    };
    (
        forward(grid.mx, grid.hx),
        forward(grid.my, grid.hy),
        central(grid.mx, grid.hx),
        central(grid.my, grid.hy),
    )
}

/// `(-P^{-1}A + B + C) u`.
pub fn apply_discrete_elliptic(ops: &OperatorSet, u: &[f64]) -> Result<Vec<f64>> {
    ops.apply(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{build_aux, CoefficientSet};

    #[test]
    fn single_node_stiffness() {
        let g = Grid2D::unit(2).unwrap();
        let aux = build_aux(&CoefficientSet::identity()).unwrap();
        let ops = assemble_operators(&g, &aux, 0.0).unwrap();
        assert_eq!(ops.a_stiff.to_dense(), vec![vec![16.0]]);
        assert_eq!(ops.b_adv.to_dense(), vec![vec![0.0]]);
    }

    #[test]
    fn factored_equals_stencil() {
        let g = Grid2D::new(7, 5, crate::spatial::Rect { x_l: 0.0, x_r: 1.5, y_l: -0.5, y_r: 1.0 }).unwrap();
        let aux = build_aux(&CoefficientSet::variable()).unwrap();
        let ops = assemble_operators(&g, &aux, 0.4).unwrap();
        let f = ops.stiffness_factored().to_dense();
        let s = ops.a_stiff.to_dense();
        let scale = ops.a_stiff.norm_inf();
        for (rf, rs) in f.iter().zip(&s) {
            for (a, b) in rf.iter().zip(rs) {
                assert!((a - b).abs() <= 1e-13 * scale);
            }
        }
    }

    #[test]
    fn advection_vanishes_without_drift() {
        let g = Grid2D::unit(6).unwrap();
        let c = CoefficientSet::identity();
        let ops = assemble_operators(&g, &build_aux(&c).unwrap(), 0.3).unwrap();
        assert!(ops.b_adv.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn reassemble_matches_fresh() {
        let g = Grid2D::unit(5).unwrap();
        let aux = build_aux(&CoefficientSet::variable()).unwrap();
        let a = assemble_operators(&g, &aux, 0.1).unwrap();
        let b = a.reassemble(&aux, 0.7).unwrap();
        let c = assemble_operators(&g, &aux, 0.7).unwrap();
        assert_eq!(b.elliptic, c.elliptic);
    }

    #[test]
    fn shifted_system_entries() {
        let g = Grid2D::unit(4).unwrap();
        let aux = build_aux(&CoefficientSet::variable()).unwrap();
        let ops = assemble_operators(&g, &aux, 0.5).unwrap();
        let k = ops.shifted_system(3.0, 0.5);
        for r in 0..g.len() {
            for c in 0..g.len() {
                let want = if r == c { 3.0 } else { 0.0 } - 0.5 * ops.elliptic.get(r, c);
                assert!((k.get(r, c) - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn nonpositive_weight_reported() {
        let mut c = CoefficientSet::identity();
        c.a1 = crate::coefficients::ScalarField::new(|x, _, _| x - 0.5);
        let aux = build_aux(&c).unwrap();
        assert!(matches!(
            assemble_operators(&Grid2D::unit(4).unwrap(), &aux, 0.0),
            Err(FracError::NonPositiveWeight { .. })
        ));
    }
}
