use fracstep::harness::{format_sci, random_admissible_mesh, GammaSpec};
use fracstep::kernels::{
    alikhanov_row, check_quadratic_form_inequality, complementary_rows, discrete_caputo, soe_build, KernelTable,
};
use fracstep::spatial::{h1, h1_semi, l2_norm, CsrMatrix, Grid2D, H1Kind};
use fracstep::timegrid::TimeMesh;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gamma_fn(x: f64) -> f64 {
    libm::tgamma(x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graded_mesh_shape(n in 1usize..200, gamma in 1.0f64..6.0, horizon in 0.1f64..10.0, theta in 0.0f64..0.5) {
        let m = TimeMesh::graded(n, horizon, gamma, theta).unwrap();
        prop_assert_eq!(m.t(0), 0.0);
        prop_assert!((m.horizon() - horizon).abs() <= 1e-12 * horizon);
        prop_assert!(m.steps().iter().all(|&s| s > 0.0));
        let total: f64 = m.steps().iter().sum();
        prop_assert!((total - horizon).abs() <= 1e-12 * horizon);
        prop_assert!(m.ratios().iter().all(|&r| r <= 1.0 + 1e-12));
        for k in 1..=n {
            let o = m.t_offset(k);
            prop_assert!(o >= m.t(k - 1) && o <= m.t(k));
        }
    }

    #[test]
    fn kernel_rows_are_positive_monotone_and_bounded_below(seed in any::<u64>(), beta in 0.05f64..0.95, n in 2usize..24) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mesh = random_admissible_mesh(&mut rng, n, beta / 2.0).unwrap();
        for level in 1..=n {
            let row = alikhanov_row(&mesh, beta, level).unwrap();
            prop_assert!(row.all_positive());
            prop_assert!(row.check_a1());
            let a2 = row.check_a2(&mesh);
            prop_assert!(a2.holds(), "{:?}", a2);
        }
    }

    #[test]
    fn linear_functions_are_differentiated_exactly(beta in 0.05f64..0.95, n in 1usize..30, gamma in 1.0f64..4.0) {
        let mesh = TimeMesh::graded(n, 1.0, gamma, beta / 2.0).unwrap();
        let row = alikhanov_row(&mesh, beta, n).unwrap();
        let g: Vec<f64> = mesh.nodes().to_vec();
        let got = discrete_caputo(&row, &g).unwrap();
        let want = mesh.t_offset(n).powf(1.0 - beta) / gamma_fn(2.0 - beta);
        prop_assert!((got - want).abs() <= 1e-11 * want, "{} vs {}", got, want);
    }

    #[test]
    fn complementary_kernels_reproduce_identity(beta in 0.05f64..0.95, n in 2usize..40, gamma in 1.0f64..4.0) {
        let mesh = TimeMesh::graded(n, 1.0, gamma, beta / 2.0).unwrap();
        let table = KernelTable::build(&mesh, beta).unwrap();
        for row in complementary_rows(&table) {
            let c = row.check(&table, &mesh);
            prop_assert!(c.holds(1e-12), "{:?}", c);
        }
    }

    #[test]
    fn quadratic_form_inequality(seed in any::<u64>(), beta in 0.05f64..0.95, n in 1usize..10, dim in 1usize..5) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mesh = random_admissible_mesh(&mut rng, n, beta / 2.0).unwrap();
        let row = alikhanov_row(&mesh, beta, n).unwrap();
        let mut q = vec![(0..dim).map(|_| rng.random_range(0.5..2.0)).collect::<Vec<f64>>()];
        for k in 1..=n {
            let next = q[k - 1].iter().map(|&v| v * rng.random_range(0.7..=1.0)).collect();
            q.push(next);
        }
        let z: Vec<Vec<f64>> = (0..=n).map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let out = check_quadratic_form_inequality(&mesh, &row, &q, &z).unwrap();
        prop_assert!(out.holds, "{:?}", out);
    }

    #[test]
    fn csr_matvec_matches_dense(entries in proptest::collection::vec((0usize..6, 0usize..5, -3.0f64..3.0), 0..30),
                                x in proptest::collection::vec(-2.0f64..2.0, 5)) {
        let a = CsrMatrix::from_triplets(6, 5, &entries);
        let dense = a.to_dense();
        let y = a.matvec(&x).unwrap();
        for (r, row) in dense.iter().enumerate() {
            let want: f64 = row.iter().zip(&x).map(|(a, b)| a * b).sum();
            prop_assert!((y[r] - want).abs() <= 1e-12 * (1.0 + want.abs()));
        }
        prop_assert_eq!(a.transpose().transpose().to_dense(), dense);
    }

    #[test]
    fn norms_behave(m in 3usize..12, scale in -5.0f64..5.0, seed in any::<u64>()) {
        use rand::Rng;
        let grid = Grid2D::unit(m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u: Vec<f64> = (0..grid.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..grid.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let su: Vec<f64> = u.iter().map(|x| scale * x).collect();
        prop_assert!((l2_norm(&grid, &su) - scale.abs() * l2_norm(&grid, &u)).abs() <= 1e-12 * (1.0 + l2_norm(&grid, &su)));
        let w: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        prop_assert!(h1_semi(&grid, &w) <= h1_semi(&grid, &u) + h1_semi(&grid, &v) + 1e-12);
        let full = h1(&grid, &u, H1Kind::Full);
        let parts = (l2_norm(&grid, &u).powi(2) + h1_semi(&grid, &u).powi(2)).sqrt();
        prop_assert!((full - parts).abs() <= 1e-12 * full.max(1.0));
    }

    #[test]
    fn sci_format_roundtrips(v in 1e-300f64..1e300) {
        let s = format_sci(v);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - v).abs() <= 5e-5 * v);
        let exp = s.split_once('e').unwrap().1;
        prop_assert!(exp.len() >= 3 && (exp.starts_with('-') || exp.starts_with('+')));
    }

    #[test]
    fn gamma_spec_roundtrips(c in 1.0f64..10.0, kind in 0u8..3) {
        let g = match kind {
            0 => GammaSpec::Value(c),
            1 => GammaSpec::Opt,
            _ => GammaSpec::OverAlpha(c),
        };
        let parsed: GammaSpec = g.to_string().parse().unwrap();
        prop_assert_eq!(parsed, g);
        let json = serde_json::to_string(&g).unwrap();
        let back: GammaSpec = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn soe_meets_requested_accuracy(beta in 0.1f64..0.95, log_dt in -6.0f64..-2.0) {
        let dt = 10f64.powf(log_dt);
        let soe = soe_build(beta, 1e-12, dt, 1.0).unwrap();
        prop_assert!(soe.max_sampled_error(3000) <= 1e-12);
    }
}
