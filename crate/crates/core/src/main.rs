use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fracstep::harness::{
    emit_table, format_sci, layout_markdown, plot_data, reference_table, run_convergence_study_with, verify_all, ErrorRow, ErrorTable,
    ExperimentConfig, ReferenceTable, StudyAxis, TableFormat, VerifyOptions, DESK_M, FULL_M,
};
use fracstep::kernels::KernelMode;
use fracstep::FracError;

const EXIT_PROPERTY: u8 = 2;
const EXIT_SOLVER: u8 = 3;

#[derive(Parser)]
#[command(name = "fracstep", version, about = "Graded-mesh Alikhanov solvers for time-fractional equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a convergence study described by a JSON file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Regenerate one of the reference tables 1..=9.
    Reproduce {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=9))]
        table: u8,
        #[command(flatten)]
        common: Common,
    },
    /// Run the kernel, inequality, complementary, coefficient and SOE property suites.
    Verify {
        #[arg(long)]
        seed: Option<u64>,
        /// Smaller randomised suites.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Args)]
struct Common {
    /// Use M = 1000 for temporal studies instead of the desk-scale M = 400.
    #[arg(long)]
    full_scale: bool,
    #[arg(long)]
    kernel: Option<KernelMode>,
    /// Write only this table format.
    #[arg(long)]
    format: Option<TableFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(k) = self.kernel {
            cfg.kernel = k;
        }
        if let Some(f) = self.format {
            cfg.output.formats = vec![f];
        }
        if let Some(dir) = &self.out {
            cfg.output.dir = dir.clone();
        }
        if self.full_scale && cfg.m.len() == 1 && cfg.n.len() > 1 {
            cfg.m = vec![FULL_M];
        }
    }
}

fn log_row(r: &ErrorRow) {
    match (&r.e1, &r.error) {
        (Some(e), _) => eprintln!(
            "alpha={} gamma={:.4} N={} M={} E1={e:.4e} ({:.2} s, {} solver iterations)",
            r.alpha, r.gamma, r.n, r.m, r.seconds, r.solver_iterations
        ),
        (None, Some(err)) => eprintln!("alpha={} gamma={:.4} N={} M={} failed: {err}", r.alpha, r.gamma, r.n, r.m),
        _ => {}
    }
}

fn write_outputs(cfg: &ExperimentConfig, table: &ErrorTable) -> fracstep::Result<()> {
    let dir = &cfg.output.dir;
    std::fs::create_dir_all(dir)?;
    let stem = |ext: &str| dir.join(format!("{}.{ext}", cfg.output.name));
    for &f in &cfg.output.formats {
        let ext = match f {
            TableFormat::Csv => "csv",
            TableFormat::Markdown => "md",
        };
        std::fs::write(stem(ext), emit_table(table, f)?)?;
    }
    if cfg.output.plot_data {
        std::fs::write(stem("plot.dat"), plot_data(table)?)?;
    }
    eprintln!("wrote results to {}", display(dir));
    Ok(())
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

fn study(cfg: &ExperimentConfig) -> Result<ErrorTable, ExitCode> {
    let table = run_convergence_study_with(cfg, &mut log_row).map_err(fail)?;
    println!("{}", layout_markdown(&table).map_err(fail)?);
    write_outputs(cfg, &table).map_err(fail)?;
    Ok(table)
}

fn fail(e: FracError) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        FracError::SolverBreakdown { .. } | FracError::ConvergenceFailure(_) => ExitCode::from(EXIT_SOLVER),
        _ => ExitCode::FAILURE,
    }
}

fn solver_status(table: &ErrorTable) -> ExitCode {
    let failed = table.failures().count();
    if failed > 0 {
        eprintln!("{failed} run(s) failed");
        ExitCode::from(EXIT_SOLVER)
    } else {
        ExitCode::SUCCESS
    }
}

fn print_comparison(reference: &ReferenceTable, table: &ErrorTable) {
    println!("| grading | level | published E1 | measured E1 | rel. diff | published order | measured order |");
    println!("|---|---|---|---|---|---|---|");
    let opt = |v: Option<f64>, p: usize| v.map(|x| format!("{x:.p$}")).unwrap_or_else(|| "*".into());
    for c in reference.compare(table) {
        println!(
            "| {} | {} | {} | {} | {} | {} | {} |",
            c.gamma_label,
            c.level,
            format_sci(c.published_e1),
            c.measured_e1.map(format_sci).unwrap_or_else(|| "failed".into()),
            c.rel_diff.map(|d| format!("{:.2}%", 100.0 * d)).unwrap_or_default(),
            opt(c.published_order, 2),
            opt(c.measured_order, 2),
        );
    }
}

fn run() -> Result<ExitCode, ExitCode> {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
            let _ = e.print();
            return Err(code);
        }
    };
    match cli.command {
        Command::Run { config, common } => {
            let mut cfg = ExperimentConfig::load(&config).map_err(fail)?;
            common.apply(&mut cfg);
            cfg.validate().map_err(fail)?;
            let table = study(&cfg)?;
            Ok(solver_status(&table))
        }
        Command::Reproduce { table, common } => {
            let reference = reference_table(table).map_err(fail)?;
            let mut cfg = reference.config(DESK_M);
            cfg.output.name = format!("table{table}");
            common.apply(&mut cfg);
            if reference.axis != StudyAxis::Space && cfg.m[0] != FULL_M {
                eprintln!("temporal table at M = {} (published runs use M = {FULL_M}; pass --full-scale)", cfg.m[0]);
            }
            let result = study(&cfg)?;
            print_comparison(reference, &result);
            Ok(solver_status(&result))
        }
        Command::Verify { seed, quick } => {
            let mut opts = if quick { VerifyOptions::quick() } else { VerifyOptions::default() };
            if let Some(s) = seed {
                opts.seed = s;
            }
            let reports = verify_all(&opts).map_err(fail)?;
            let mut ok = true;
            for r in &reports {
                println!(
                    "{:<14} {}  checks={} violations={} worst={:.6e}",
                    r.name,
                    if r.passed() { "PASS" } else { "FAIL" },
                    r.checks,
                    r.violations,
                    r.worst
                );
                for n in &r.notes {
                    println!("    note: {n}");
                }
                ok &= r.passed();
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_PROPERTY) })
        }
    }
}

fn main() -> ExitCode {
    run().unwrap_or_else(|code| code)
}
