use std::f64::consts::PI;

use pulsedistill::protocol::{pair_rng, plan, run_ensemble, run_single_pair, sweep_theta, PairOptions};
use pulsedistill::{BandOutcome, SystemParams};

fn with_threads<T: Send>(n: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap().install(f)
}

#[test]
fn ensemble_independent_of_thread_count() {
    let p = SystemParams::default().with_theta(PI / 8.0);
    let t = plan(p.theta, p.g).unwrap().t_star;
    let opts = PairOptions::default();
    let one = with_threads(1, || run_ensemble(&p, t, 50_000, 42, &opts).unwrap());
    let four = with_threads(4, || run_ensemble(&p, t, 50_000, 42, &opts).unwrap());
    assert_eq!(one, four);

    let grid = [PI / 12.0, PI / 6.0, PI / 4.0];
    let a = with_threads(1, || sweep_theta(&grid, &p, 2000, 42, false).unwrap());
    let b = with_threads(3, || sweep_theta(&grid, &p, 2000, 42, false).unwrap());
    assert_eq!(a, b);
}

#[test]
fn ensemble_matches_pair_by_pair_runs() {
    let p = SystemParams::default();
    let t = plan(p.theta, p.g).unwrap().t_star;
    let opts = PairOptions::default();
    let n = 400;
    let stats = run_ensemble(&p, t, n, 9, &opts).unwrap();
    let mut successes = 0;
    for i in 0..n {
        let rec = run_single_pair(&p, t, &opts, &mut pair_rng(9, i)).unwrap();
        if rec.outcome == BandOutcome::Band0 {
            successes += 1;
            assert!((rec.post_concurrence - 1.0).abs() < 1e-9);
        } else {
            assert!(rec.post_concurrence < 1e-12);
        }
    }
    assert_eq!(stats.n_success, successes);
    assert_eq!(stats.n_maximal, successes);
}

#[test]
fn different_seeds_give_different_samples() {
    let p = SystemParams::default();
    let t = plan(p.theta, p.g).unwrap().t_star;
    let opts = PairOptions::default();
    let a = run_ensemble(&p, t, 10_000, 1, &opts).unwrap();
    let b = run_ensemble(&p, t, 10_000, 2, &opts).unwrap();
    assert_ne!(a.n_success, b.n_success);
    for s in [&a, &b] {
        assert!((s.c_bar - 0.5).abs() <= 4.0 * s.std_error);
    }
}
