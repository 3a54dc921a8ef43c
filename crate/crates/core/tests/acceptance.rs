//! Acceptance criteria 1-10. Each test prints one `criterion N: PASS|FAIL|SKIP` line.
//!
//! The criteria are serialised through a lock so the reported runtimes are not
//! inflated by each other. Criterion 4 is opt-in through `FRACSTEP_FULL_SCALE=1`.

use std::io::Write;
use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::Instant;

use fracstep::coefficients::CoefficientSet;
use fracstep::harness::{
    format_sci, manufactured_diffwave, manufactured_subdiffusion, random_admissible_mesh, reference_table,
    run_convergence_study, verify_complementary, verify_inequality, verify_kernel_properties, CellComparison,
    ErrorTable, ReferenceTable, DESK_M, FULL_M,
};
use fracstep::kernels::{a_coeff, b_coeff, soe_build, soe_delta_t, KernelMode};
use fracstep::spatial::SolverMode;
use fracstep::timegrid::TimeMesh;
use fracstep_testkit::{a_by_quadrature, b_by_quadrature, caputo_power, caputo_quadrature, rel_diff, PlainMesh};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240917;

fn serial() -> MutexGuard<'static, ()> {
    static LOCK: Mutex<()> = Mutex::new(());
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

/// Written straight to the stderr handle so the line survives output capture.
fn report(id: u8, pass: bool, seconds: f64, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut e = std::io::stderr().lock();
    let _ = writeln!(e, "criterion {id}: {verdict} ({seconds:.1} s) {detail}");
}

fn note(line: &str) {
    let _ = writeln!(std::io::stderr().lock(), "    {line}");
}

fn run_reference(t: &ReferenceTable, kernel: KernelMode) -> ErrorTable {
    let mut cfg = t.config(DESK_M);
    cfg.kernel = kernel;
    run_convergence_study(&cfg).expect("study runs")
}

fn table4_direct() -> &'static ErrorTable {
    static T: OnceLock<ErrorTable> = OnceLock::new();
    T.get_or_init(|| run_reference(reference_table(4).unwrap(), KernelMode::Direct))
}

/// Every cell within `e_tol` relative and every order within `o_tol` of 2.
fn spatial_table_ok(cells: &[CellComparison], e_tol: f64, o_tol: f64) -> (bool, f64, f64) {
    let mut worst_e: f64 = 0.0;
    let mut worst_o: f64 = 0.0;
    let mut ok = cells.len() == 12;
    for c in cells {
        match c.rel_diff {
            Some(d) => worst_e = worst_e.max(d),
            None => ok = false,
        }
        if c.published_order.is_some() {
            match c.measured_order {
                Some(o) => worst_o = worst_o.max((o - 2.0).abs()),
                None => ok = false,
            }
        }
    }
    (ok && worst_e <= e_tol && worst_o <= o_tol, worst_e, worst_o)
}

fn spatial_criterion(id: u8, table: u8, budget: f64) {
    let _g = serial();
    let start = Instant::now();
    let t = reference_table(table).unwrap();
    let measured = if table == 4 { table4_direct().clone() } else { run_reference(t, KernelMode::Direct) };
    let secs = start.elapsed().as_secs_f64();
    let cells = t.compare(&measured);
    let (ok, worst_e, worst_o) = spatial_table_ok(&cells, 0.02, 0.05);
    let first = cells.iter().find(|c| c.gamma_label == "1" && c.level == 4);
    let pass = ok && secs < budget;
    report(
        id,
        pass,
        secs,
        &format!(
            "reference table {table}: E1(M=4, gamma=1) = {} (published {}), worst E1 deviation {:.2}%, worst |order - 2| {:.3}",
            first.and_then(|c| c.measured_e1).map(format_sci).unwrap_or_default(),
            first.map(|c| format_sci(c.published_e1)).unwrap_or_default(),
            100.0 * worst_e,
            worst_o
        ),
    );
    assert!(pass, "criterion {id} failed");
}

#[test]
fn criterion_01_spatial_subdiffusion() {
    spatial_criterion(1, 4, 120.0);
}

#[test]
fn criterion_02_spatial_diffusion_wave() {
    spatial_criterion(2, 9, 180.0);
}

#[test]
fn criterion_03_temporal_orders_desk_scale() {
    let _g = serial();
    let start = Instant::now();
    let mut pass = true;
    let mut failures = Vec::new();
    for id in [1u8, 2, 3, 5, 6, 7, 8] {
        let t = reference_table(id).unwrap();
        let cfg = t.config_subset(DESK_M, &[0, 1, 2], &[8, 16, 32]);
        let table = run_convergence_study(&cfg).expect("study runs");
        let cells = t.compare(&table);
        let mut line = format!("table {id}:");
        for c in cells.iter().filter(|c| c.level >= 16) {
            let (Some(published), Some(measured)) = (c.published_order, c.measured_order) else {
                pass = false;
                failures.push(format!("table {id} {} N={}: missing order", c.gamma_label, c.level));
                continue;
            };
            let tol = if c.gamma_label == "opt" {
                if c.level != 32 {
                    continue;
                }
                0.15
            } else if id == 1 && c.gamma_label == "2.5/alpha" && c.level == 32 {
                0.3
            } else {
                0.25
            };
            let ok = (measured - published).abs() <= tol;
            line.push_str(&format!(
                " [{} N={} {:.2} vs {:.2} +-{tol}{}]",
                c.gamma_label,
                c.level,
                measured,
                published,
                if ok { "" } else { " !" }
            ));
            if !ok {
                pass = false;
                failures.push(format!(
                    "table {id} {} N={}: order {measured:.2}, published {published:.2}",
                    c.gamma_label, c.level
                ));
            }
        }
        note(&line);
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 1200.0 {
        pass = false;
        failures.push(format!("runtime {secs:.0} s exceeds 20 minutes"));
    }
    let detail = if failures.is_empty() {
        format!("M={DESK_M}, all orders within tolerance")
    } else {
        format!("M={DESK_M}: {}", failures.join("; "))
    };
    report(3, pass, secs, &detail);
    assert!(pass, "criterion 3 failed: {detail}");
}

#[test]
fn criterion_04_full_scale_spot_check() {
    let _g = serial();
    if std::env::var_os("FRACSTEP_FULL_SCALE").is_none() {
        let _ = writeln!(
            std::io::stderr().lock(),
            "criterion 4: SKIP optional full-scale cell; set FRACSTEP_FULL_SCALE=1 to run it"
        );
        return;
    }
    let start = Instant::now();
    let t = reference_table(1).unwrap();
    let mut cfg = t.config_subset(FULL_M, &[1], &[8]);
    cfg.solver.mode = SolverMode::Iterative;
    let table = run_convergence_study(&cfg).expect("study runs");
    let secs = start.elapsed().as_secs_f64();
    let cell = &t.compare(&table)[0];
    let d = cell.rel_diff.unwrap_or(f64::INFINITY);
    let pass = d <= 0.02 && secs < 1800.0;
    report(
        4,
        pass,
        secs,
        &format!(
            "alpha=0.5 gamma=opt N=8 M={FULL_M} iterative: E1 = {} (published {}), deviation {:.2}%",
            cell.measured_e1.map(format_sci).unwrap_or_default(),
            format_sci(cell.published_e1),
            100.0 * d
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_05_kernel_properties() {
    let _g = serial();
    let start = Instant::now();
    let r = verify_kernel_properties(1000, SEED).unwrap();
    let pass = r.violations == 0 && r.checks > 0;
    report(
        5,
        pass,
        start.elapsed().as_secs_f64(),
        &format!("{} checks on 1000 random meshes, {} violations, smallest A2 ratio {:.3} (must be >= 1)", r.checks, r.violations, r.worst),
    );
    assert!(pass, "{:?}", r.notes);
}

#[test]
fn criterion_06_quadratic_form_inequality() {
    let _g = serial();
    let start = Instant::now();
    let r = verify_inequality(10_000, SEED).unwrap();
    let pass = r.violations == 0 && r.checks == 10_000;
    report(
        6,
        pass,
        start.elapsed().as_secs_f64(),
        &format!("{} random trials, {} violations", r.checks, r.violations),
    );
    assert!(pass, "{:?}", r.notes);
}

#[test]
fn criterion_07_complementary_kernels() {
    let _g = serial();
    let start = Instant::now();
    let r = verify_complementary(64).unwrap();
    let pass = r.violations == 0 && r.worst <= 1e-12;
    report(
        7,
        pass,
        start.elapsed().as_secs_f64(),
        &format!("{} rows up to n=64, gamma in {{1,2,4}}, worst identity residual {:.2e}", r.checks, r.worst),
    );
    assert!(pass, "{:?}", r.notes);
}

#[test]
fn criterion_08_soe_equivalence() {
    let _g = serial();
    let start = Instant::now();
    let t = reference_table(4).unwrap();
    let direct = table4_direct();
    let fast = run_reference(t, KernelMode::Soe);
    let mut worst: f64 = 0.0;
    let mut complete = direct.rows.len() == 12;
    for d in &direct.rows {
        let f = fast.rows.iter().find(|r| r.gamma_label == d.gamma_label && r.m == d.m && r.n == d.n);
        match (d.e1, f.and_then(|r| r.e1)) {
            (Some(a), Some(b)) => worst = worst.max((a - b).abs()),
            _ => complete = false,
        }
    }
    // The kernel approximation itself, for every mesh of the table.
    let mut soe_err: f64 = 0.0;
    let problem = manufactured_subdiffusion(t.alpha).unwrap();
    for g in &t.gammas {
        let gamma = g.resolve(&problem).unwrap();
        let mesh = TimeMesh::graded(500, 1.0, gamma, problem.theta()).unwrap();
        let soe = soe_build(problem.beta(), 1e-12, soe_delta_t(&mesh), 1.0).unwrap();
        assert!(soe.delta_t <= mesh.tau(1));
        soe_err = soe_err.max(soe.max_sampled_error(100_000));
    }
    let pass = complete && worst <= 1e-8 && soe_err <= 1e-12;
    report(
        8,
        pass,
        start.elapsed().as_secs_f64(),
        &format!("max |E1(soe) - E1(direct)| = {worst:.2e}, worst sampled kernel error {soe_err:.2e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_09_coefficients_against_quadrature() {
    let _g = serial();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    let mut where_worst = String::new();
    for trial in 0..1000 {
        let beta = rng.random_range(0.05..0.95);
        let mesh = if trial % 2 == 0 {
            let n = rng.random_range(2..64);
            random_admissible_mesh(&mut rng, n, beta / 2.0).unwrap()
        } else {
            TimeMesh::graded(rng.random_range(2..128), 1.0, rng.random_range(1.0..6.0), beta / 2.0).unwrap()
        };
        let plain = PlainMesh { t: mesh.nodes().to_vec(), theta: mesh.theta() };
        let n = rng.random_range(1..=mesh.len());
        let k = rng.random_range(1..=n);
        let da = rel_diff(a_coeff(&mesh, beta, n, k), a_by_quadrature(&plain, beta, n, k));
        if da > worst {
            worst = da;
            where_worst = format!("a, beta={beta:.3} n={n} k={k}");
        }
        if k < n {
            let db = rel_diff(b_coeff(&mesh, beta, n, k), b_by_quadrature(&plain, beta, n, k));
            if db > worst {
                worst = db;
                where_worst = format!("b, beta={beta:.3} n={n} k={k}");
            }
        }
    }
    let pass = worst <= 1e-11;
    report(
        9,
        pass,
        start.elapsed().as_secs_f64(),
        &format!("1000 random tuples, worst relative difference {worst:.2e} ({where_worst})"),
    );
    assert!(pass);
}

/// `𝒜u` for `u = sin(πx) sin(πy) g(t)` with the variable coefficients written out by hand.
fn operator_by_hand(x: f64, y: f64, t: f64, g: f64) -> f64 {
    use std::f64::consts::PI;
    let a1 = (x + y).exp() * (1.0 + t.cos());
    let a2 = ((x + y) * t).exp() * (1.0 + t.powf(1.5));
    let s = (PI * x).sin() * (PI * y).sin();
    let ux = PI * (PI * x).cos() * (PI * y).sin();
    let uy = PI * (PI * x).sin() * (PI * y).cos();
    g * (-(a1 + a2) * PI * PI * s + (x * y * t).sin() * ux + (x * y * t).cos() * uy + (x * x + y * y) * t * s)
}

#[test]
fn criterion_10_manufactured_identity() {
    use std::f64::consts::PI;
    let _g = serial();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    let mut routes: f64 = 0.0;
    let mut points = 0;
    let cases: Vec<(f64, bool)> = [0.5, 0.7, 0.9].iter().map(|&a| (a, false)).chain([1.01, 1.1, 1.5, 1.9].iter().map(|&a| (a, true))).collect();
    for (alpha, wave) in cases {
        let p = if wave { manufactured_diffwave(alpha) } else { manufactured_subdiffusion(alpha) }.unwrap();
        assert_eq!(p.coeffs.a1.eval(0.3, 0.4, 0.5), CoefficientSet::variable().a1.eval(0.3, 0.4, 0.5));
        for _ in 0..20 {
            let (x, y, t): (f64, f64, f64) = (rng.random(), rng.random(), rng.random_range(1e-3..1.0));
            let s = (PI * x).sin() * (PI * y).sin();
            let g = 1.0 + t + t.powf(alpha);
            let caputo = s * (caputo_power(alpha, 0.0, t) + caputo_power(alpha, 1.0, t) + caputo_power(alpha, alpha, t));
            if !wave {
                // Second route: quadrature of the Caputo integral with g' = 1 + α t^{α-1}.
                let q = s * caputo_quadrature(alpha, &[(1.0, 0.0), (alpha, alpha - 1.0)], t);
                routes = routes.max((q - caputo).abs() / (1.0 + caputo.abs()));
            }
            let rhs = operator_by_hand(x, y, t, g) + p.source.eval(x, y, t);
            worst = worst.max((caputo - rhs).abs() / (1.0 + caputo.abs()));
            points += 1;
        }
    }
    let pass = worst <= 1e-10 && routes <= 1e-10;
    report(
        10,
        pass,
        start.elapsed().as_secs_f64(),
        &format!("{points} points over 7 orders, worst identity residual {worst:.2e}, Caputo routes agree to {routes:.2e}"),
    );
    assert!(pass);
}
