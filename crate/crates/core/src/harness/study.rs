use std::time::Instant;

use serde::Serialize;

use super::config::ExperimentConfig;
use super::table::{ErrorRow, ErrorTable, StudyAxis, TableMeta};
use crate::error::{FracError, Result};
use crate::spatial::{h1, Grid2D, H1Kind};
use crate::steppers::{solve_observed, ProblemSpec, RunStats, SolutionHistory, StepperOptions};
use crate::timegrid::TimeMesh;

/// Error of one solve against the exact solution.
#[derive(Debug, Clone, Serialize)]
pub struct RunMeasure {
    /// `max_{1<=n<=N} ‖U^n - u^n‖_{H¹}`.
    pub e1: f64,
    /// Level where the maximum is attained.
    pub worst_level: usize,
    pub stats: RunStats,
}

/// Solve and measure `E1` on the fly.
pub fn measure_run(
    problem: &ProblemSpec,
    mesh: &TimeMesh,
    grid: &Grid2D,
    opts: &StepperOptions,
    norm: H1Kind,
) -> Result<(RunMeasure, SolutionHistory)> {
    let exact = problem
        .exact
        .clone()
        .ok_or_else(|| FracError::Config("the problem has no exact solution".into()))?;
    let mut e1 = 0.0f64;
    let mut worst_level = 0;
    let mut err = vec![0.0; grid.len()];
    let hist = solve_observed(problem, mesh, grid, opts, &mut |step| {
        if step.n == 0 {
            return Ok(());
        }
        let mut k = 0;
        for j in 1..grid.my {
            let y = grid.y(j);
            for i in 1..grid.mx {
                err[k] = step.u[k] - exact.eval(grid.x(i), y, step.t);
                k += 1;
            }
        }
        let e = h1(grid, &err, norm);
        if !(e <= e1) {
            e1 = e;
            worst_level = step.n;
        }
        Ok(())
    })?;
    Ok((
        RunMeasure {
            e1,
            worst_level,
            stats: hist.stats,
        },
        hist,
    ))
}

fn sorted_unique<T: PartialOrd + Copy>(v: &[T]) -> Vec<T> {
    let mut out: Vec<T> = v.to_vec();
    out.sort_by(|a, b| a.partial_cmp(b).expect("comparable"));
    out.dedup_by(|a, b| a == b);
    out
}

/// Run every `(α, γ, N, M)` cell; failures are recorded per row.
pub fn run_convergence_study(config: &ExperimentConfig) -> Result<ErrorTable> {
    run_convergence_study_with(config, &mut |_| {})
}

/// [`run_convergence_study`] reporting each finished row.
pub fn run_convergence_study_with(config: &ExperimentConfig, on_row: &mut dyn FnMut(&ErrorRow)) -> Result<ErrorTable> {
    config.validate()?;
    let clock = Instant::now();
    let ns = sorted_unique(&config.n);
    let ms = sorted_unique(&config.m);
    let axis = match (ns.len() > 1, ms.len() > 1) {
        (true, false) => StudyAxis::Time,
        (false, true) => StudyAxis::Space,
        (true, true) => StudyAxis::Both,
        (false, false) => StudyAxis::Time,
    };
    let opts = config.stepper_options();
    let mut rows = Vec::new();
    for &alpha in &config.alphas {
        let problem = config.problem_for(alpha)?;
        for gspec in &config.gammas {
            let gamma = gspec.resolve(&problem)?;
            let expected = match axis {
                StudyAxis::Space => Some(2.0),
                _ => problem.regularity.and_then(|r| r.expected_temporal_order(gamma)),
            };
            for &m in &ms {
                for &n in &ns {
                    let started = Instant::now();
                    let outcome = TimeMesh::graded(n, problem.horizon, gamma, problem.theta())
                        .and_then(|mesh| Ok((mesh, Grid2D::new(m, m, problem.domain)?)))
                        .and_then(|(mesh, grid)| {
                            let (meas, hist) = measure_run(&problem, &mesh, &grid, &opts, config.norm)?;
                            if let Some(fmt) = config.output.snapshots {
                                std::fs::create_dir_all(&config.output.dir)?;
                                let ext = match fmt {
                                    crate::steppers::SnapshotFormat::Binary => "bin",
                                    crate::steppers::SnapshotFormat::Text => "txt",
                                };
                                let path = config.output.dir.join(format!(
                                    "{}_a{alpha}_g{gamma:.4}_N{n}_M{m}.{ext}",
                                    config.output.name
                                ));
                                hist.save_snapshot(hist.last_level(), path, fmt)?;
                            }
                            Ok(meas)
                        });
                    let seconds = started.elapsed().as_secs_f64();
                    let row = match outcome {
                        Ok(meas) => ErrorRow {
                            alpha,
                            gamma,
                            gamma_label: gspec.to_string(),
                            n,
                            m,
                            e1: Some(meas.e1),
                            order_tau: None,
                            order_h: None,
                            expected_order: expected,
                            seconds,
                            solver_iterations: meas.stats.solver_iterations,
                            error: None,
                        },
                        Err(e) => ErrorRow {
                            alpha,
                            gamma,
                            gamma_label: gspec.to_string(),
                            n,
                            m,
                            e1: None,
                            order_tau: None,
                            order_h: None,
                            expected_order: expected,
                            seconds,
                            solver_iterations: 0,
                            error: Some(e.to_string()),
                        },
                    };
                    on_row(&row);
                    rows.push(row);
                }
            }
        }
    }
    let mut table = ErrorTable {
        rows,
        meta: TableMeta {
            problem: config.problem,
            axis,
            kernel: config.kernel,
            solver_mode: config.solver.mode,
            solver_tolerance: config.solver.rel_tol,
            norm: config.norm,
            wall_seconds: clock.elapsed().as_secs_f64(),
        },
    };
    table.compute_orders();
    Ok(table)
}
