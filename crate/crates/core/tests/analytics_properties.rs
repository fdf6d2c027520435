mod common;

use common::*;
use genepy_core::analytics::{
    goal_weights, rank_correlation, rank_entities, rank_evolution, spearman, tertile_groups,
    tertile_sizes, weighted_performance, GoalWeights, RankBasis,
};
use genepy_core::complexity::{adjusted_ubiquity, degree_index, genepy_scores};
use genepy_core::panel::{aggregate_indicators, validate_panel, IndicatorRecord, IndicatorTable};
use genepy_core::{EntityMap, ScorePanel};
use genepy_testkit::{average_ranks_desc, pearson, spearman_textbook};
use proptest::prelude::*;

fn distinct(max: usize) -> impl Strategy<Value = Vec<f64>> {
    (2..=max).prop_flat_map(|n| Just((0..n).map(|i| i as f64 * 1.25 - 3.0).collect::<Vec<_>>()).prop_shuffle())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn degree_and_mean_rank_alike_on_complete_panels(m in integer_panel(20, 10)) {
        let p = panel(&m);
        let d = degree_index(&p).unwrap();
        let a = rank_entities("t", p.entities(), &d.k_s, RankBasis::Degree).unwrap();
        let b = rank_entities("t", p.entities(), &d.composite_mean, RankBasis::CompositeMean).unwrap();
        let order = |t: &genepy_core::RankTable| t.entries.iter().map(|e| e.entity.clone()).collect::<Vec<_>>();
        prop_assert_eq!(order(&a), order(&b));
    }

    #[test]
    fn ranks_form_a_permutation(v in prop::collection::vec(-50.0f64..50.0, 1..40)) {
        let names = ids("e", v.len());
        let t = rank_entities("t", &names, &v, RankBasis::Complexity).unwrap();
        let mut r: Vec<usize> = t.entries.iter().map(|e| e.rank).collect();
        r.sort_unstable();
        prop_assert_eq!(r, (1..=v.len()).collect::<Vec<_>>());
        prop_assert_eq!(t.clone(), rank_entities("t", &names, &v, RankBasis::Complexity).unwrap());
        for w in t.entries.windows(2) {
            prop_assert!(w[0].score >= w[1].score);
        }
    }

    #[test]
    fn spearman_matches_textbook_without_ties(a in distinct(30)) {
        let n = a.len();
        let b: Vec<f64> = a.iter().enumerate().map(|(i, x)| x * ((i % 3) as f64 + 0.5) + (i as f64).sin()).collect();
        let rb = average_ranks_desc(&b);
        prop_assume!(rb.iter().all(|r| r.fract() == 0.0));
        let rho = spearman(&a, &b).unwrap();
        let want = spearman_textbook(&average_ranks_desc(&a), &rb);
        prop_assert!((rho - want).abs() < 1e-12, "n={n} rho={rho} textbook={want}");
    }

    #[test]
    fn spearman_matches_average_rank_oracle_with_ties(
        a in prop::collection::vec((0u8..5).prop_map(f64::from), 3..25),
        seed in prop::collection::vec((0u8..4).prop_map(f64::from), 25)
    ) {
        let b = &seed[..a.len()];
        let ra = average_ranks_desc(&a);
        let rb = average_ranks_desc(b);
        match spearman(&a, b) {
            Ok(rho) => prop_assert!((rho - pearson(&ra, &rb)).abs() < 1e-12),
            Err(_) => prop_assert!(ra.iter().all(|&r| r == ra[0]) || rb.iter().all(|&r| r == rb[0])),
        }
    }

    #[test]
    fn spearman_is_symmetric_and_antisymmetric(a in distinct(20), b in distinct(20)) {
        let n = a.len().min(b.len());
        let (a, b) = (&a[..n], &b[..n]);
        let neg: Vec<f64> = b.iter().map(|x| -x).collect();
        let ab = spearman(a, b).unwrap();
        prop_assert_eq!(ab, spearman(b, a).unwrap());
        prop_assert!((spearman(a, &neg).unwrap() + ab).abs() < 1e-12);
        prop_assert_eq!(spearman(a, a).unwrap(), 1.0);
    }

    #[test]
    fn tertiles_partition_the_roster(m in integer_panel(40, 5)) {
        prop_assume!(m.len() >= 3);
        let p = panel(&m);
        let d = degree_index(&p).unwrap();
        let t = rank_entities("t", p.entities(), &d.k_s, RankBasis::Degree).unwrap();
        let w = GoalWeights { year: "t".into(), categories: p.categories().to_vec(), weights: vec![1.0; p.n_categories()] };
        let g = tertile_groups(&t, &p, &w).unwrap();
        let sizes: Vec<usize> = g.groups.iter().map(Vec::len).collect();
        let want = tertile_sizes(m.len());
        prop_assert_eq!(sizes.as_slice(), want.as_slice());
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        let mut all: Vec<&String> = g.groups.iter().flatten().collect();
        all.sort();
        all.dedup();
        prop_assert_eq!(all.len(), m.len());
        // a better group never has a lower best-rank than a worse group
        for k in 1..3 {
            let worst_prev = g.groups[k - 1].iter().map(|e| t.rank_of(e).unwrap()).max().unwrap();
            let best_here = g.groups[k].iter().map(|e| t.rank_of(e).unwrap()).min().unwrap();
            prop_assert!(worst_prev < best_here);
        }
    }

    #[test]
    fn category_ordering_survives_rescaling_c(m in positive_panel(8, 6), c in 1e-3f64..1e3) {
        let p = panel(&m);
        let s = genepy_scores(&p).unwrap();
        let u = adjusted_ubiquity(&p, &degree_index(&p).unwrap()).unwrap();
        let w = goal_weights(&p, &s, &u).unwrap();
        let mut scaled = s.clone();
        scaled.category_scores.iter_mut().for_each(|x| *x *= c);
        let ws = goal_weights(&p, &scaled, &u).unwrap();
        // rounding may only reorder exact ties, which random data does not produce
        prop_assert_eq!(w.ranking(), ws.ranking());
        prop_assert!(w.weights.iter().all(|&x| x > 0.0 && x.is_finite()));
    }

    #[test]
    fn unit_weights_leave_present_cells_alone(m in sparse_panel(8, 6)) {
        let p = panel(&m);
        let w = GoalWeights { year: "t".into(), categories: p.categories().to_vec(), weights: vec![1.0; p.n_categories()] };
        prop_assert_eq!(weighted_performance(&p, &w).unwrap().values, p.cells());
    }

    #[test]
    fn indicator_order_does_not_matter(
        (recs, perm) in prop::collection::vec(0.0f64..=100.0, 4 * 3 * 3).prop_flat_map(|vals| {
            let n = vals.len();
            (Just(vals), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let mut records = Vec::new();
        for (k, v) in recs.iter().enumerate() {
            let (e, rest) = (k / 9, k % 9);
            records.push(IndicatorRecord {
                entity: format!("e{e}"),
                category: format!("g{}", rest / 3),
                indicator: format!("i{}", rest % 3),
                value: Some(*v),
            });
        }
        let a = aggregate_indicators(&IndicatorTable { year: "t".into(), records: records.clone() }).unwrap();
        let shuffled: Vec<IndicatorRecord> = perm.iter().map(|&i| records[i].clone()).collect();
        let b = aggregate_indicators(&IndicatorTable { year: "t".into(), records: shuffled }).unwrap();
        let sorted = |p: &ScorePanel| {
            let mut ei: Vec<usize> = (0..p.n_entities()).collect();
            ei.sort_by_key(|&i| p.entities()[i].clone());
            let mut ci: Vec<usize> = (0..p.n_categories()).collect();
            ci.sort_by_key(|&j| p.categories()[j].clone());
            p.reorder_entities(&ei).reorder_categories(&ci)
        };
        prop_assert_eq!(sorted(&a), sorted(&b));
    }

    #[test]
    fn validation_leaves_the_panel_untouched(m in sparse_panel(8, 6)) {
        let p = panel(&m);
        let before = p.clone();
        let _ = validate_panel(&p);
        prop_assert_eq!(p, before);
    }
}

#[test]
fn identical_years_correlate_perfectly() {
    let names = ids("e", 6);
    let v = [3.0, 1.0, 4.0, 1.5, 9.0, 2.6];
    let a = rank_entities("2019", &names, &v, RankBasis::Complexity).unwrap();
    let b = rank_entities("2020", &names, &v, RankBasis::Complexity).unwrap();
    assert_eq!(rank_correlation(&a, &b).unwrap(), 1.0);
    let s = rank_evolution(&[a, b], &[EntityMap::default()]).unwrap();
    assert!(s.trajectories.iter().all(|t| t.points.len() == 2));
}
