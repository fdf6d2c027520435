mod common;

use common::*;
use genepy_core::analytics::spearman;
use genepy_core::complexity::{fitness_step, genepy_scores, run_fitness, SolverOptions};
use genepy_testkit::perturbed_uniform;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn rel_change(new: &[f64], old: &[f64]) -> f64 {
    let scale = old.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    max_abs_diff(new, old) / scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn converges_on_positive_panels(m in positive_panel(10, 8)) {
        let (s, trace) = run_fitness(&panel(&m), &opts()).unwrap();
        prop_assert!(trace.converged);
        prop_assert!(trace.steps <= 1000);
        prop_assert!(trace.final_residual <= 1e-10);
        prop_assert_eq!(trace.iterates.len(), trace.steps + 1);
        prop_assert!(s.entity_scores.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn converged_point_is_a_fixed_point(m in sparse_panel(10, 8)) {
        let p = panel(&m);
        let (s, trace) = run_fitness(&p, &opts()).unwrap();
        prop_assume!(trace.converged);
        let (d, c) = fitness_step(&p, &s.entity_scores, &s.category_scores).unwrap();
        prop_assert!(rel_change(&d, &s.entity_scores) <= 1e-10);
        prop_assert!(rel_change(&c, &s.category_scores) <= 1e-10);
    }

    #[test]
    fn residual_tail_never_increases(m in positive_panel(12, 8)) {
        let (_, trace) = run_fitness(&panel(&m), &opts()).unwrap();
        prop_assert!(trace.tail_is_monotone(), "{:?}", trace.residuals);
    }

    #[test]
    fn step_ignores_global_scale(m in positive_panel(6, 5), c in 1e-2f64..1e2) {
        let p = panel(&m);
        let d0 = vec![1.0; m.len()];
        let c0 = vec![1.0; m[0].len()];
        let (da, ca) = fitness_step(&p, &d0, &c0).unwrap();
        let (db, cb) = fitness_step(&p.scaled(c), &d0, &c0).unwrap();
        prop_assert!(max_abs_diff(&da, &db) < 1e-12);
        prop_assert!(max_abs_diff(&ca, &cb) < 1e-12);
    }

    #[test]
    fn iterates_keep_mean_one(m in positive_panel(8, 6)) {
        let (_, trace) = run_fitness(&panel(&m), &opts()).unwrap();
        for (d, c) in &trace.iterates {
            prop_assert!((d.iter().sum::<f64>() / d.len() as f64 - 1.0).abs() < 1e-12);
            prop_assert!((c.iter().sum::<f64>() / c.len() as f64 - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn near_uniform_panels_separate_the_two_methods() {
    // the iterative scores follow the row sums to first order, while the
    // spectral scores stay flat to second order in the perturbation
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..20 {
        let m = perturbed_uniform(&mut rng, 36, 15, 0.01);
        let p = panel(&m);
        let (it, trace) = run_fitness(&p, &opts()).unwrap();
        assert!(trace.converged);
        let ks: Vec<f64> = m.iter().map(|r| r.iter().sum()).collect();
        assert!(spearman(&it.entity_scores, &ks).unwrap() > 0.99);
        let sp = genepy_scores(&p).unwrap();
        assert!(sp.entity_scores.iter().all(|d| (d - 1.0).abs() < 1e-4));
    }
}
