//! Spatial grid, finite-difference operators, discrete norms and linear solvers.

mod grid;
mod norms;
mod operators;
mod solver;
mod sparse;

pub use grid::{Grid2D, Rect};
pub use norms::{h1, h1_norm, h1_semi, inner, l2_norm, H1Kind};
pub use operators::{assemble_operators, apply_discrete_elliptic, difference_matrices, OperatorSet};
pub use solver::{solve_sparse, LinearSolver, SolveStats, SolverMode, SolverOptions};
pub use sparse::CsrMatrix;
