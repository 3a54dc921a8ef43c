use serde::{Deserialize, Serialize};

use super::grid::Grid2D;

/// Which discrete H¹ quantity to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum H1Kind {
    /// `sqrt(‖u‖² + ‖∇_h u‖²)`.
    Full,
    /// `‖∇_h u‖` only; the reference tables are reproduced with this one.
    #[default]
    Semi,
}

/// `h_x h_y Σ u v` over interior nodes.
pub fn inner(grid: &Grid2D, u: &[f64], v: &[f64]) -> f64 {
    grid.hx * grid.hy * u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>()
}

pub fn l2_norm(grid: &Grid2D, u: &[f64]) -> f64 {
    inner(grid, u, u).sqrt()
}

fn semi_sq(grid: &Grid2D, u: &[f64]) -> f64 {
    let (mx, my) = (grid.mx, grid.my);
    let at = |i: usize, j: usize| -> f64 {
        if i == 0 || j == 0 || i == mx || j == my {
            0.0
        } else {
            u[grid.idx(i, j)]
        }
    };
    let mut sx = 0.0;
    for j in 1..my {
        for i in 0..mx {
            let d = at(i + 1, j) - at(i, j);
            sx += d * d;
        }
    }
    let mut sy = 0.0;
    for j in 0..my {
        for i in 1..mx {
            let d = at(i, j + 1) - at(i, j);
            sy += d * d;
        }
    }
    grid.hx * grid.hy * (sx / (grid.hx * grid.hx) + sy / (grid.hy * grid.hy))
}

/// `‖∇_h u‖ = sqrt(‖δ_x u‖² + ‖δ_y u‖²)` including the boundary-adjacent faces.
pub fn h1_semi(grid: &Grid2D, u: &[f64]) -> f64 {
    semi_sq(grid, u).sqrt()
}

/// `sqrt(‖u‖² + ‖∇_h u‖²)`.
pub fn h1_norm(grid: &Grid2D, u: &[f64]) -> f64 {
    (inner(grid, u, u) + semi_sq(grid, u)).sqrt()
}

pub fn h1(grid: &Grid2D, u: &[f64], kind: H1Kind) -> f64 {
    match kind {
        H1Kind::Full => h1_norm(grid, u),
        H1Kind::Semi => h1_semi(grid, u),
    }
}
