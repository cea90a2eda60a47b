use fracmp::functional::{h_identity, ProblemSpec};
use fracmp::mpa::{construct_e, ctilde_bound, mpa_solve, MpaConfig};
use fracmp::Exec;

#[test]
fn default_problem_converges_below_ctilde() {
    let spec = ProblemSpec::default();
    let setup = construct_e(&spec, 0.2).unwrap();
    let ct = ctilde_bound(&setup, &spec).unwrap();
    let r = mpa_solve(&spec, &setup, &MpaConfig::default()).unwrap();
    assert!(r.converged);
    assert!(r.cerami_residual <= 1e-6);
    assert!(r.level > 0.0 && r.level <= ct);
    assert!(r.path.certified);
    let id = h_identity(&r.u, &spec).unwrap();
    assert!(id.gap <= 1e-6 * (1.0 + r.level));
}

#[test]
fn sequential_and_parallel_solves_are_identical() {
    let spec = ProblemSpec::default();
    let setup = construct_e(&spec, 0.2).unwrap();
    let run = |exec| {
        let cfg = MpaConfig {
            exec,
            ..MpaConfig::default()
        };
        mpa_solve(&spec, &setup, &cfg).unwrap()
    };
    assert_eq!(run(Exec::Sequential), run(Exec::Parallel));
}
