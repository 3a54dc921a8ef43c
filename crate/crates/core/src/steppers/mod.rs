//! Time marching for the sub-diffusion and the order-reduced diffusion-wave schemes.

mod march;
mod problem;
mod residual;
mod solution;

pub use march::{
    diffwave_observed, diffwave_solve, solve, solve_observed, subdiffusion_observed, subdiffusion_solve, StepView, StepperOptions,
};
pub use problem::{ProblemKind, ProblemSpec, PsiMode, Regularity};
pub use residual::{step_residual_check, StepResidual};
pub use solution::{RunStats, Snapshot, SnapshotFormat, SolutionHistory, Storage};
