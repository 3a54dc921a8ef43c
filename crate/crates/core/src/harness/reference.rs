use serde::Serialize;

use super::config::{ExperimentConfig, GammaSpec};
use super::table::{ErrorTable, StudyAxis};
use crate::error::{FracError, Result};
use crate::steppers::ProblemKind;

/// Temporal studies use this many spatial intervals by default.
pub const DESK_M: usize = 400;
/// Spatial resolution of the published temporal studies.
pub const FULL_M: usize = 1000;
/// Time steps of the published spatial studies.
pub const SPATIAL_N: usize = 500;

/// A published convergence table for the manufactured problems.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReferenceTable {
    pub id: u8,
    pub problem: ProblemKind,
    pub alpha: f64,
    pub axis: StudyAxis,
    /// Refinement levels: `N` for temporal tables, `M` for spatial ones.
    pub levels: [usize; 4],
    #[serde(skip)]
    pub gammas: [GammaSpec; 3],
    /// `e1[g][l]` for grading `g` and level `l`.
    pub e1: [[f64; 4]; 3],
    /// Published orders; the first level has none.
    pub orders: [[f64; 3]; 3],
    pub theoretical: [f64; 3],
}

const LEVELS: [usize; 4] = [4, 8, 16, 32];
const SUB_G: [GammaSpec; 3] = [GammaSpec::Value(1.0), GammaSpec::Opt, GammaSpec::OverAlpha(2.5)];
const DW_G: [GammaSpec; 3] = [GammaSpec::Value(1.0), GammaSpec::Opt, GammaSpec::OverAlpha(4.5)];

static TABLES: [ReferenceTable; 9] = [
    ReferenceTable {
        id: 1,
        problem: ProblemKind::Subdiffusion,
        alpha: 0.5,
        axis: StudyAxis::Time,
        levels: LEVELS,
        gammas: SUB_G,
        e1: [
            [1.6124e-01, 1.1090e-01, 7.5477e-02, 5.0612e-02],
            [4.4642e-02, 1.2036e-02, 3.1256e-03, 8.0038e-04],
            [6.4526e-02, 1.8154e-02, 4.7969e-03, 1.2989e-03],
        ],
        orders: [[0.54, 0.56, 0.58], [1.89, 1.95, 1.97], [1.83, 1.92, 1.88]],
        theoretical: [0.50, 2.00, 2.00],
    },
    ReferenceTable {
        id: 2,
        problem: ProblemKind::Subdiffusion,
        alpha: 0.7,
        axis: StudyAxis::Time,
        levels: LEVELS,
        gammas: SUB_G,
        e1: [
            [1.0592e-01, 6.1506e-02, 3.4534e-02, 1.8403e-02],
            [2.5978e-02, 6.5510e-03, 1.6656e-03, 4.2368e-04],
            [3.8595e-02, 1.0043e-02, 2.5747e-03, 6.5520e-04],
        ],
        orders: [[0.78, 0.83, 0.91], [1.99, 1.98, 1.98], [1.94, 1.96, 1.97]],
        theoretical: [0.70, 2.00, 2.00],
    },
    ReferenceTable {
        id: 3,
        problem: ProblemKind::Subdiffusion,
        alpha: 0.9,
        axis: StudyAxis::Time,
        levels: LEVELS,
        gammas: SUB_G,
        e1: [
            [3.4213e-02, 1.6299e-02, 7.0935e-03, 2.6405e-03],
            [8.0750e-03, 1.8998e-03, 4.7949e-04, 1.2448e-04],
            [1.2235e-02, 2.9302e-03, 7.4266e-04, 1.9062e-04],
        ],
        orders: [[1.07, 1.20, 1.43], [2.09, 1.99, 1.95], [2.06, 1.98, 1.96]],
        theoretical: [0.90, 2.00, 2.00],
    },
    ReferenceTable {
        id: 4,
        problem: ProblemKind::Subdiffusion,
        alpha: 0.7,
        axis: StudyAxis::Space,
        levels: LEVELS,
        gammas: SUB_G,
        e1: [
            [3.6943e-01, 9.1710e-02, 2.2891e-02, 5.7205e-03],
            [3.6942e-01, 9.1710e-02, 2.2891e-02, 5.7213e-03],
            [3.6931e-01, 9.1666e-02, 2.2864e-02, 5.6977e-03],
        ],
        orders: [[2.01, 2.00, 2.00], [2.01, 2.00, 2.00], [2.01, 2.00, 2.00]],
        theoretical: [2.00, 2.00, 2.00],
    },
    ReferenceTable {
        id: 5,
        problem: ProblemKind::Diffusionwave,
        alpha: 1.01,
        axis: StudyAxis::Time,
        levels: LEVELS,
        gammas: DW_G,
        e1: [
            [1.2885e-02, 1.1231e-02, 9.2424e-03, 6.9173e-03],
            [4.7702e-03, 1.5632e-03, 4.2372e-04, 1.0616e-04],
            [4.7959e-03, 1.4205e-03, 4.0423e-04, 1.0064e-04],
        ],
        orders: [[0.66, 0.28, 0.42], [1.85, 1.88, 2.00], [1.76, 1.81, 2.01]],
        theoretical: [0.505, 2.00, 2.00],
    },
    ReferenceTable {
        id: 6,
        problem: ProblemKind::Diffusionwave,
        alpha: 1.1,
        axis: StudyAxis::Time,
        levels: LEVELS,
        gammas: DW_G,
        e1: [
            [2.4901e-02, 1.5761e-02, 1.0245e-02, 6.3732e-03],
            [1.6750e-02, 4.6593e-03, 1.2195e-03, 3.0860e-04],
            [2.0056e-02, 5.7785e-03, 1.5306e-03, 3.9009e-04],
        ],
        orders: [[0.66, 0.62, 0.68], [1.85, 1.93, 1.98], [1.80, 1.92, 1.97]],
        theoretical: [0.55, 2.00, 2.00],
    },
    ReferenceTable {
        id: 7,
        problem: ProblemKind::Diffusionwave,
        alpha: 1.5,
        axis: StudyAxis::Time,
        levels: LEVELS,
        gammas: DW_G,
        e1: [
            [5.3444e-02, 1.7243e-02, 6.1521e-03, 2.3596e-03],
            [7.8413e-02, 2.0766e-02, 5.3057e-03, 1.3373e-03],
            [9.6727e-02, 2.5910e-02, 6.6772e-03, 1.6881e-03],
        ],
        orders: [[1.63, 1.49, 1.38], [1.92, 1.97, 1.99], [1.90, 1.96, 1.98]],
        theoretical: [0.75, 2.00, 2.00],
    },
    ReferenceTable {
        id: 8,
        problem: ProblemKind::Diffusionwave,
        alpha: 1.9,
        axis: StudyAxis::Time,
        levels: LEVELS,
        gammas: DW_G,
        e1: [
            [6.1480e-02, 1.6140e-02, 4.1813e-03, 1.1127e-03],
            [1.3149e-01, 3.0479e-02, 7.8883e-03, 2.0132e-03],
            [1.6643e-01, 3.8947e-02, 9.9179e-03, 2.5274e-03],
        ],
        orders: [[1.93, 1.95, 1.91], [2.11, 1.95, 1.97], [2.10, 1.97, 1.97]],
        theoretical: [0.95, 2.00, 2.00],
    },
    ReferenceTable {
        id: 9,
        problem: ProblemKind::Diffusionwave,
        alpha: 1.5,
        axis: StudyAxis::Space,
        levels: LEVELS,
        gammas: DW_G,
        e1: [
            [2.4719e-01, 6.1357e-02, 1.5313e-02, 3.8262e-03],
            [2.4718e-01, 6.1352e-02, 1.5309e-02, 3.8214e-03],
            [2.4718e-01, 6.1349e-02, 1.5306e-02, 3.8190e-03],
        ],
        orders: [[2.01, 2.00, 2.00], [2.01, 2.00, 2.00], [2.01, 2.00, 2.00]],
        theoretical: [2.00, 2.00, 2.00],
    },
];

/// All reference tables, numbered 1 to 9.
pub fn reference_tables() -> &'static [ReferenceTable] {
    &TABLES
}

pub fn reference_table(id: u8) -> Result<&'static ReferenceTable> {
    TABLES
        .iter()
        .find(|t| t.id == id)
        .ok_or_else(|| FracError::Config(format!("no reference table {id}; choose 1..=9")))
}

/// One published cell next to its recomputed value.
#[derive(Debug, Clone, Serialize)]
pub struct CellComparison {
    pub gamma_label: String,
    pub level: usize,
    pub published_e1: f64,
    pub measured_e1: Option<f64>,
    pub rel_diff: Option<f64>,
    pub published_order: Option<f64>,
    pub measured_order: Option<f64>,
}

impl ReferenceTable {
    /// Configuration regenerating this table; `m_temporal` replaces the spatial
    /// resolution of temporal tables.
    pub fn config(&self, m_temporal: usize) -> ExperimentConfig {
        let (n, m) = match self.axis {
            StudyAxis::Space => (vec![SPATIAL_N], self.levels.to_vec()),
            _ => (self.levels.to_vec(), vec![m_temporal]),
        };
        ExperimentConfig {
            problem: self.problem,
            alphas: vec![self.alpha],
            gammas: self.gammas.to_vec(),
            n,
            m,
            ..ExperimentConfig::default()
        }
    }

    /// Restrict the study to some gradings and levels.
    pub fn config_subset(&self, m_temporal: usize, gammas: &[usize], levels: &[usize]) -> ExperimentConfig {
        let mut c = self.config(m_temporal);
        c.gammas = gammas.iter().map(|&g| self.gammas[g]).collect();
        match self.axis {
            StudyAxis::Space => c.m = levels.to_vec(),
            _ => c.n = levels.to_vec(),
        }
        c
    }

    /// Compare every published cell present in `table`.
    pub fn compare(&self, table: &ErrorTable) -> Vec<CellComparison> {
        let mut out = Vec::new();
        for (g, spec) in self.gammas.iter().enumerate() {
            let label = spec.to_string();
            for (l, &level) in self.levels.iter().enumerate() {
                let (n, m) = match self.axis {
                    StudyAxis::Space => (None, level),
                    _ => (Some(level), 0),
                };
                let row = table.rows.iter().find(|r| {
                    (r.alpha - self.alpha).abs() < 1e-12
                        && r.gamma_label == label
                        && match n {
                            Some(n) => r.n == n,
                            None => r.m == m,
                        }
                });
                let Some(row) = row else { continue };
                let published = self.e1[g][l];
                out.push(CellComparison {
                    gamma_label: label.clone(),
                    level,
                    published_e1: published,
                    measured_e1: row.e1,
                    rel_diff: row.e1.map(|e| (e - published).abs() / published),
                    published_order: (l > 0).then(|| self.orders[g][l - 1]),
                    measured_order: row.order(),
                });
            }
        }
        out
    }
}
