use fracmp::fracops::{gl_weights, quadratic_form_alpha, GridFunction, RealLineGrid};
use fracmp::functional::{energy, h_identity, LineFunctional, ProblemSpec};
use fracmp::runner::{tail_mass_ratio, RunConfig};
use fracmp::spaces::{draw_line_sample, SampleFamily};
use fracmp::Exec;
use proptest::prelude::*;

fn small_spec(alpha: f64, lambda: f64) -> ProblemSpec {
    ProblemSpec {
        alpha,
        lambda,
        grid: RealLineGrid::new(10.0, 512).unwrap(),
        ..ProblemSpec::default()
    }
}

fn sample(spec: &ProblemSpec, seed: u64, family: usize) -> GridFunction {
    draw_line_sample(seed, 0, SampleFamily::ALL[family], &spec.grid, spec.dim).render_line(&spec.grid, spec.dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quadratic_form_is_nonnegative_and_two_homogeneous(
        alpha in 0.55f64..0.95, seed in any::<u64>(), fam in 0usize..3, s in -4.0f64..4.0,
    ) {
        let spec = small_spec(alpha, 1.0);
        let u = sample(&spec, seed, fam);
        let q = quadratic_form_alpha(&u, alpha).unwrap();
        let qs = quadratic_form_alpha(&u.scaled(s), alpha).unwrap();
        prop_assert!(q >= 0.0);
        prop_assert!((qs - s * s * q).abs() <= 1e-11 * (1.0 + qs.abs()));
    }

    #[test]
    fn energy_splits_into_quadratic_and_potential(
        alpha in 0.55f64..0.95, lambda in 1.0f64..1e3, seed in any::<u64>(), fam in 0usize..3,
    ) {
        let spec = small_spec(alpha, lambda);
        let f = LineFunctional::new(&spec).unwrap();
        let u = sample(&spec, seed, fam);
        let e = energy(&u, &spec).unwrap();
        let split = 0.5 * f.x_norm_sq(&u).unwrap() - f.w_integral(&u);
        prop_assert!((e - split).abs() <= 1e-10 * (1.0 + e.abs()));
        let h = h_identity(&u, &spec).unwrap();
        prop_assert!(h.gap <= 1e-10 * (1.0 + h.lhs.abs()));
    }

    #[test]
    fn tail_mass_is_a_fraction(seed in any::<u64>(), fam in 0usize..3, varrho in 0.1f64..9.0) {
        let spec = small_spec(0.75, 1.0);
        let r = tail_mass_ratio(&sample(&spec, seed, fam), varrho).unwrap();
        prop_assert!((0.0..=1.0).contains(&r));
    }

    #[test]
    fn gl_weights_sum_to_truncated_binomial(alpha in 0.05f64..0.95, len in 2usize..400) {
        // Σ_{j<n} (-1)^j C(α,j) = (-1)^{n-1} C(α-1, n-1) > 0, decreasing to 0.
        let w = gl_weights(alpha, len);
        let s: f64 = w.iter().sum();
        prop_assert!(w[0] == 1.0 && w[1..].iter().all(|&x| x < 0.0));
        let mut tail = 1.0;
        for j in 1..len {
            tail *= (j as f64 - alpha) / j as f64;
        }
        prop_assert!((s - tail).abs() <= 1e-13);
    }

    #[test]
    fn exec_strategies_agree(xs in proptest::collection::vec(any::<i32>(), 0..300)) {
        let f = |x: &i32| (*x as i64) * 3 - 1;
        prop_assert_eq!(Exec::Sequential.map(&xs, f), Exec::Parallel.map(&xs, f));
    }

    #[test]
    fn config_round_trip_keeps_hash(seed in any::<u64>(), lambda in 1.0f64..1e4, points in 3usize..2000) {
        let mut cfg = RunConfig::default().with_seed(seed);
        cfg.problem.lambda = lambda;
        cfg.bvp.points = points;
        let back = RunConfig::from_toml_str(&cfg.to_toml_string().unwrap()).unwrap();
        prop_assert_eq!(cfg.hash().unwrap(), back.hash().unwrap());
        prop_assert_eq!(back, cfg);
    }
}
