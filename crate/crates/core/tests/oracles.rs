use fracstep::coefficients::CoefficientSet;
use fracstep::harness::{manufactured_caputo, manufactured_diffwave, manufactured_subdiffusion, random_admissible_mesh};
use fracstep::kernels::{a_coeff, b_coeff, soe_build};
use fracstep::spatial::{assemble_operators, Grid2D, SolverMode, SolverOptions, solve_sparse};
use fracstep::coefficients::build_aux;
use fracstep::timegrid::TimeMesh;
use fracstep_testkit::{a_by_quadrature, b_by_quadrature, caputo_power, dense_solve, rel_diff, PlainMesh};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// 40-digit quadrature of the defining integrals, rounded to 20 significant digits.
const GOLD_N8_G2_B06_N5_A: [f64; 5] = [
    0.860_355_361_204_914_970_49,
    0.912_254_012_567_831_006_72,
    1.047_798_516_485_889_669,
    1.420_090_962_771_853_567_2,
    3.170_654_521_421_389_811_3,
];
const GOLD_N8_G2_B06_N5_B: [f64; 4] = [
    0.000_986_778_962_426_245_018_16,
    0.005_190_899_187_925_475_123_1,
    0.013_905_603_703_925_448_974,
    0.045_929_268_764_872_019_864,
];
const GOLD_N16_G4_B035_N16_A: [(usize, f64); 4] = [
    (1, 0.732_473_187_343_650_520_08),
    (8, 0.746_198_158_172_246_068_04),
    (15, 1.136_485_349_860_579_166_7),
    (16, 1.646_026_403_246_270_141_8),
];
const GOLD_N16_G4_B035_N16_B: [(usize, f64); 3] = [
    (1, 4.243_829_226_962_915_641_4e-8),
    (2, 1.910_050_975_390_731_861e-6),
    (15, 0.020_345_541_694_206_844_622),
];

#[test]
fn frozen_coefficients_quadratic_grading() {
    let beta = 0.6;
    let mesh = TimeMesh::graded(8, 1.0, 2.0, beta / 2.0).unwrap();
    for (k, want) in (1..=5).zip(GOLD_N8_G2_B06_N5_A) {
        let got = a_coeff(&mesh, beta, 5, k);
        assert!(rel_diff(got, want) < 1e-13, "a k={k}: {got} vs {want}");
    }
    for (k, want) in (1..=4).zip(GOLD_N8_G2_B06_N5_B) {
        let got = b_coeff(&mesh, beta, 5, k);
        assert!(rel_diff(got, want) < 1e-12, "b k={k}: {got} vs {want}");
    }
}

#[test]
fn frozen_coefficients_strong_grading() {
    let beta = 0.35;
    let mesh = TimeMesh::graded(16, 1.0, 4.0, beta / 2.0).unwrap();
    for (k, want) in GOLD_N16_G4_B035_N16_A {
        let got = a_coeff(&mesh, beta, 16, k);
        assert!(rel_diff(got, want) < 1e-13, "a k={k}: {got} vs {want}");
    }
    for (k, want) in GOLD_N16_G4_B035_N16_B {
        let got = b_coeff(&mesh, beta, 16, k);
        assert!(rel_diff(got, want) < 1e-12, "b k={k}: {got} vs {want}");
    }
}

#[test]
fn testkit_quadrature_matches_frozen_values() {
    let beta = 0.35;
    let m = PlainMesh::graded(16, 1.0, 4.0, beta / 2.0);
    for (k, want) in GOLD_N16_G4_B035_N16_A {
        assert!(rel_diff(a_by_quadrature(&m, beta, 16, k), want) < 1e-13);
    }
    for (k, want) in GOLD_N16_G4_B035_N16_B {
        assert!(rel_diff(b_by_quadrature(&m, beta, 16, k), want) < 1e-12);
    }
}

#[test]
fn coefficients_match_quadrature_on_random_meshes() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let beta = rng.random_range(0.05..0.95);
        let n_steps = rng.random_range(2..40);
        let mesh = random_admissible_mesh(&mut rng, n_steps, beta / 2.0).unwrap();
        let plain = PlainMesh { t: mesh.nodes().to_vec(), theta: mesh.theta() };
        let n = rng.random_range(2..=n_steps);
        let k = rng.random_range(1..=n);
        worst = worst.max(rel_diff(a_coeff(&mesh, beta, n, k), a_by_quadrature(&plain, beta, n, k)));
        if k < n {
            worst = worst.max(rel_diff(b_coeff(&mesh, beta, n, k), b_by_quadrature(&plain, beta, n, k)));
        }
    }
    assert!(worst < 1e-11, "worst relative difference {worst:e}");
}

#[test]
fn soe_tracks_the_kernel() {
    let beta = 0.5;
    let delta_t = 1e-4;
    let soe = soe_build(beta, 1e-12, delta_t, 1.0).unwrap();
    for i in 0..=200 {
        let t = delta_t * (1.0f64 / delta_t).powf(i as f64 / 200.0);
        let exact = t.powf(-beta);
        assert!(rel_diff(soe.eval(t), exact) <= 1e-12, "t={t}");
    }
}

/// `𝒜u` for `u = sin(πx) sin(πy) g(t)` with the variable coefficients written out by hand.
fn operator_by_hand(x: f64, y: f64, t: f64) -> f64 {
    use std::f64::consts::PI;
    let a1 = (x + y).exp() * (1.0 + t.cos());
    let a2 = ((x + y) * t).exp() * (1.0 + t.powf(1.5));
    let b1 = (x * y * t).sin();
    let b2 = (x * y * t).cos();
    let b3 = (x * x + y * y) * t;
    let s = (PI * x).sin() * (PI * y).sin();
    let ux = PI * (PI * x).cos() * (PI * y).sin();
    let uy = PI * (PI * x).sin() * (PI * y).cos();
    -(a1 + a2) * PI * PI * s + b1 * ux + b2 * uy + b3 * s
}

fn caputo_by_power_rule(alpha: f64, x: f64, y: f64, t: f64) -> f64 {
    use std::f64::consts::PI;
    let s = (PI * x).sin() * (PI * y).sin();
    s * (caputo_power(alpha, 0.0, t) + caputo_power(alpha, 1.0, t) + caputo_power(alpha, alpha, t))
}

#[test]
fn manufactured_caputo_matches_power_rule() {
    for &alpha in &[0.3, 0.5, 0.9, 1.01, 1.5, 1.9] {
        for &(x, y, t) in &[(0.2, 0.7, 0.05), (0.5, 0.5, 1.0), (0.9, 0.1, 0.4)] {
            let a = manufactured_caputo(alpha, x, y, t);
            let b = caputo_by_power_rule(alpha, x, y, t);
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "{alpha} {x} {y} {t}");
        }
    }
}

#[test]
fn manufactured_sources_balance() {
    let p = manufactured_subdiffusion(0.6).unwrap();
    let q = manufactured_diffwave(1.4).unwrap();
    for &(x, y, t) in &[(0.3, 0.6, 0.2), (0.75, 0.15, 0.9)] {
        for (prob, alpha) in [(&p, 0.6), (&q, 1.4)] {
            let profile = 1.0 + t + f64::powf(t, alpha);
            let lhs = caputo_by_power_rule(alpha, x, y, t);
            let rhs = operator_by_hand(x, y, t) * profile + prob.source.eval(x, y, t);
            assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()), "{alpha}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn sparse_solver_matches_dense_lu() {
    let grid = Grid2D::unit(7).unwrap();
    let aux = build_aux(&CoefficientSet::variable()).unwrap();
    let ops = assemble_operators(&grid, &aux, 0.37).unwrap();
    let a = ops.shifted_system(3.0, 0.8);
    let b: Vec<f64> = (0..grid.len()).map(|i| ((i * 7 + 3) % 11) as f64 - 5.0).collect();
    let want = dense_solve(&a.to_dense(), &b).unwrap();
    for mode in [SolverMode::Direct, SolverMode::Iterative] {
        let opts = SolverOptions { mode, ..SolverOptions::default() };
        let got = solve_sparse(&a, &b, opts).unwrap();
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-10 * (1.0 + w.abs()), "{mode:?}");
        }
    }
}
