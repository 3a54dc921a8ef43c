//! Manufactured problems, convergence studies, reference tables and property suites.

mod config;
mod manufactured;
mod reference;
mod study;
mod table;
mod verify;

pub use config::{ExperimentConfig, GammaSpec, OutputConfig, TableFormat};
pub use manufactured::{
    gamma_opt, manufactured_caputo, manufactured_diffwave, manufactured_diffwave_with, manufactured_operator,
    manufactured_subdiffusion, manufactured_subdiffusion_with, sine_mode_jet,
};
pub use reference::{reference_table, reference_tables, CellComparison, ReferenceTable, DESK_M, FULL_M, SPATIAL_N};
pub use study::{measure_run, run_convergence_study, run_convergence_study_with, RunMeasure};
pub use table::{
    convergence_order, emit_table, format_sci, layout_markdown, plot_data, write_table, ErrorRow, ErrorTable, StudyAxis, TableMeta,
};
pub use verify::{
    beta_grid, random_admissible_mesh, verify_all, verify_coefficients, verify_complementary, verify_inequality,
    verify_kernel_properties, verify_soe, SuiteReport, VerifyOptions,
};
