use super::alikhanov::KernelRow;
use crate::error::{FracError, Result};
use crate::timegrid::TimeMesh;

/// Both sides of the weighted quadratic-form inequality at one level.
#[derive(Debug, Clone, Copy)]
pub struct InequalityOutcome {
    pub lhs: f64,
    pub rhs: f64,
    /// Rounding allowance used for the comparison.
    pub tolerance: f64,
    pub holds: bool,
}

fn quad(q: &[f64], z: &[f64]) -> f64 {
    q.iter().zip(z).map(|(q, z)| q * z * z).sum()
}

/// Checks `(z^{n-θ})^T Q^{(n)} (𝒟_τ^β z)^{n-θ} >= ½ Σ_k A^{(n)}_{n-k} ∇_τ[(z^k)^T Q^{(k)} z^k]`
/// for diagonal weights `Q^{(k)}` given as vectors.
///
/// Precondition violations (non-positive or increasing weights, step-ratio bound,
/// inconsistent lengths) are returned as errors; the inequality itself is reported
/// through [`InequalityOutcome::holds`].
pub fn check_quadratic_form_inequality(
    mesh: &TimeMesh,
    row: &KernelRow,
    q_seq: &[Vec<f64>],
    z_seq: &[Vec<f64>],
) -> Result<InequalityOutcome> {
    let n = row.n;
    if q_seq.len() != n + 1 {
        return Err(FracError::LengthMismatch { expected: n + 1, got: q_seq.len() });
    }
    if z_seq.len() != n + 1 {
        return Err(FracError::LengthMismatch { expected: n + 1, got: z_seq.len() });
    }
    let dim = z_seq[0].len();
    for v in q_seq.iter().chain(z_seq) {
        if v.len() != dim {
            return Err(FracError::LengthMismatch { expected: dim, got: v.len() });
        }
    }
    if q_seq.iter().flatten().any(|&q| !(q > 0.0)) {
        return Err(FracError::Precondition("weights must be positive".into()));
    }
    for k in 1..=n {
        if q_seq[k].iter().zip(&q_seq[k - 1]).any(|(a, b)| a > b) {
            return Err(FracError::Precondition(format!("weights increase between levels {} and {k}", k - 1)));
        }
    }
    if mesh.ratios().iter().take(n.saturating_sub(1)).any(|&r| r > crate::timegrid::RATIO_BOUND * (1.0 + 1e-12)) {
        return Err(FracError::Precondition("step-size ratio exceeds 7/4".into()));
    }
    let theta = mesh.theta();
    let qn = &q_seq[n];
    let mut dz = vec![0.0; dim];
    for k in 1..=n {
        let a = row.on_interval(k);
        for ((d, zk), zp) in dz.iter_mut().zip(&z_seq[k]).zip(&z_seq[k - 1]) {
            *d += a * (zk - zp);
        }
    }
    let lhs: f64 = (0..dim)
        .map(|i| ((1.0 - theta) * z_seq[n][i] + theta * z_seq[n - 1][i]) * qn[i] * dz[i])
        .sum();
    let energy: Vec<f64> = (0..=n).map(|k| quad(&q_seq[k], &z_seq[k])).collect();
    let mut rhs = 0.0;
    let mut scale = lhs.abs();
    for k in 1..=n {
        let a = row.on_interval(k);
        rhs += 0.5 * a * (energy[k] - energy[k - 1]);
        scale += a * (energy[k] + energy[k - 1]);
    }
    let tolerance = 1e-12 * scale;
    Ok(InequalityOutcome {
        lhs,
        rhs,
        tolerance,
        holds: lhs >= rhs - tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::alikhanov_row;

    #[test]
    fn zero_sequence() {
        let m = TimeMesh::graded(6, 1.0, 1.0, 0.3).unwrap();
        let row = alikhanov_row(&m, 0.6, 6).unwrap();
        let z = vec![vec![0.0; 3]; 7];
        let q = vec![vec![1.0; 3]; 7];
        let out = check_quadratic_form_inequality(&m, &row, &q, &z).unwrap();
        assert_eq!(out.lhs, 0.0);
        assert_eq!(out.rhs, 0.0);
        assert!(out.holds);
    }

    #[test]
    fn increasing_weights_rejected() {
        let m = TimeMesh::graded(2, 1.0, 1.0, 0.3).unwrap();
        let row = alikhanov_row(&m, 0.6, 2).unwrap();
        let z = vec![vec![1.0]; 3];
        let q = vec![vec![1.0], vec![2.0], vec![1.0]];
        assert!(matches!(
            check_quadratic_form_inequality(&m, &row, &q, &z),
            Err(FracError::Precondition(_))
        ));
    }
}
