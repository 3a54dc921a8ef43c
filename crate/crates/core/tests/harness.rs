use fracstep::harness::{
    emit_table, gamma_opt, layout_markdown, manufactured_diffwave, manufactured_subdiffusion, plot_data,
    reference_table, reference_tables, run_convergence_study, ErrorRow, ErrorTable, ExperimentConfig, GammaSpec,
    StudyAxis, TableFormat, TableMeta,
};
use fracstep::kernels::KernelMode;
use fracstep::spatial::{H1Kind, SolverMode};
use fracstep::steppers::ProblemKind;
use fracstep::FracError;

fn row(n: usize, e1: f64) -> ErrorRow {
    ErrorRow {
        alpha: 0.5,
        gamma: 4.0,
        gamma_label: "opt".into(),
        n,
        m: 400,
        e1: Some(e1),
        order_tau: None,
        order_h: None,
        expected_order: Some(2.0),
        seconds: 1.25,
        solver_iterations: 0,
        error: None,
    }
}

fn meta() -> TableMeta {
    TableMeta {
        problem: ProblemKind::Subdiffusion,
        axis: StudyAxis::Time,
        kernel: KernelMode::Direct,
        solver_mode: SolverMode::Auto,
        solver_tolerance: 1e-12,
        norm: H1Kind::Semi,
        wall_seconds: 0.0,
    }
}

#[test]
fn markdown_golden() {
    let mut t = ErrorTable { rows: vec![row(8, 1.2036e-2), row(16, 3.1256e-3)], meta: meta() };
    t.compute_orders();
    let md = emit_table(&t, TableFormat::Markdown).unwrap();
    let want = "\
| alpha | gamma | N | M | E1 | order | expected_order | seconds |
|---|---|---|---|---|---|---|---|
| 0.5 | 4.0000 | 8 | 400 | 1.2036e-02 | * | 2.00 | 1.250 |
| 0.5 | 4.0000 | 16 | 400 | 3.1256e-03 | 1.95 | 2.00 | 1.250 |
";
    assert_eq!(md, want);
    let csv = emit_table(&t, TableFormat::Csv).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "alpha,gamma,N,M,E1,order,expected_order,seconds");
    assert_eq!(csv.lines().nth(1).unwrap(), "0.5,4.0000,8,400,1.2036e-02,,2.00,1.250");
    let plot = plot_data(&t).unwrap();
    assert!(plot.starts_with("# alpha gamma N M E1 log2_N log2_M log2_E1\n"));
    assert_eq!(plot.lines().count(), 3);
    let wide = layout_markdown(&t).unwrap();
    assert!(wide.contains("| 16 | 3.1256e-03 | 1.95 |"), "{wide}");
}

#[test]
fn empty_tables_are_rejected() {
    let t = ErrorTable { rows: vec![], meta: meta() };
    assert!(matches!(emit_table(&t, TableFormat::Csv), Err(FracError::EmptyTable)));
    assert!(matches!(plot_data(&t), Err(FracError::EmptyTable)));
}

#[test]
fn optimal_grading() {
    assert!((gamma_opt(&manufactured_subdiffusion(0.5).unwrap()).unwrap() - 4.0).abs() < 1e-14);
    assert!((gamma_opt(&manufactured_diffwave(1.5).unwrap()).unwrap() - 4.0 / 1.5).abs() < 1e-14);
}

#[test]
fn config_parsing_and_validation() {
    let c = ExperimentConfig::from_json(r#"{"alphas": [0.7], "gammas": [1, "opt", "2.5/alpha"], "n": [500], "m": [4, 8]}"#)
        .unwrap();
    assert_eq!(c.gammas, vec![GammaSpec::Value(1.0), GammaSpec::Opt, GammaSpec::OverAlpha(2.5)]);
    assert_eq!(c.norm, H1Kind::Semi);
    let back = ExperimentConfig::from_json(&c.to_json().unwrap()).unwrap();
    assert_eq!(back, c);

    for bad in [
        r#"{"alphas": []}"#,
        r#"{"n": [0]}"#,
        r#"{"m": [1]}"#,
        r#"{"coefficients": "nope"}"#,
        r#"{"gammas": [0.5]}"#,
        r#"{"alphas": [1.5]}"#,
        r#"{"unknown_key": 1}"#,
        r#"{"problem": "diffusionwave", "alphas": [0.5]}"#,
    ] {
        assert!(ExperimentConfig::from_json(bad).is_err(), "{bad}");
    }
}

#[test]
fn reference_tables_are_complete() {
    assert_eq!(reference_tables().len(), 9);
    for id in 1..=9u8 {
        let t = reference_table(id).unwrap();
        let cfg = t.config(400);
        cfg.validate().unwrap();
    }
    assert!(reference_table(0).is_err());
    assert!(reference_table(10).is_err());
    let t4 = reference_table(4).unwrap().config(400);
    assert_eq!(t4.n, vec![500]);
    assert_eq!(t4.m, vec![4, 8, 16, 32]);
}

#[test]
fn small_study_end_to_end() {
    let cfg = ExperimentConfig::from_json(
        r#"{"alphas": [0.6], "gammas": ["opt", 1], "n": [4, 8], "m": [16], "output": {"dir": "unused"}}"#,
    )
    .unwrap();
    let table = run_convergence_study(&cfg).unwrap();
    assert_eq!(table.rows.len(), 4);
    assert_eq!(table.meta.axis, StudyAxis::Time);
    assert!(table.failures().next().is_none());
    let fine = table.find(0.6, "opt", 8, 16).unwrap();
    assert!(fine.order_tau.is_some());
    assert!(fine.e1.unwrap() < table.find(0.6, "opt", 4, 16).unwrap().e1.unwrap());
    let uniform = table.find(0.6, "1", 8, 16).unwrap();
    assert!(uniform.e1.unwrap() > fine.e1.unwrap());
}
