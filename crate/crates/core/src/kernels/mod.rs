//! Discrete Caputo kernels on nonuniform meshes.

mod alikhanov;
mod complementary;
mod history;
mod inequality;
mod soe;

pub use alikhanov::{a_coeff, alikhanov_row, b_coeff, discrete_caputo, A2Check, KernelRow, KernelTable, PI_A};
pub use complementary::{complementary_row, complementary_rows, ComplementaryCheck, ComplementaryRow};
pub use history::{fast_caputo_step, soe_delta_t, CaputoHistory, DirectHistory, KernelMode, SoeHistory, SoeScalarState};
pub use inequality::{check_quadratic_form_inequality, InequalityOutcome};
pub use soe::{soe_build, soe_build_with, soe_cutoff_for, SoeApprox, SoeOptions};

use crate::error::{FracError, Result};
use crate::special::gamma;

/// `ω_μ(t) = t^{μ-1}/Γ(μ)`.
pub fn omega_weight(mu: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(FracError::Domain(format!("omega weight needs t > 0, got {t}")));
    }
    if !(mu > 0.0) {
        return Err(FracError::Domain(format!("omega weight needs mu > 0, got {mu}")));
    }
    Ok(t.powf(mu - 1.0) / gamma(mu))
}
