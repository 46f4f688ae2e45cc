//! The per-graph cut formula against exact max-flow, and structural
//! properties of capacity that hold for any correct implementation.
//!
//! The formula prices one particular cut of each graph, so it bounds that
//! graph's min-cut from above; the two meet at the minimizing pair.

use cdss::capacity::{capacity, horizontal_selection, min_cut_formula, vertical_ordering};
use cdss::flowgraph::{build_worst_case_graph, candidate_pairs, min_cut, DEFAULT_BUDGET};
use cdss::rational::{from_usize, int, ratio};
use cdss::verify::{random_resources, small_configs};
use cdss::{Rational, ResourceAllocation, SystemConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn formula_bounds_max_flow_and_meets_it_at_the_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for cfg in small_configs(7) {
        for _ in 0..2 {
            let (alpha, bi, bc) = random_resources(&mut rng, &cfg);
            let res = ResourceAllocation::new(&cfg, alpha, bi, bc).unwrap();
            let mut smallest = None::<Rational>;
            for (s, pi) in candidate_pairs(&cfg, DEFAULT_BUDGET).unwrap() {
                let graph = build_worst_case_graph(&cfg, &res, &s, &pi).unwrap();
                let cut = min_cut(&graph).unwrap();
                assert!(cut <= min_cut_formula(&cfg, &res, &s, &pi).unwrap(), "{cfg} {s} {pi}");
                smallest = Some(smallest.map_or(cut.clone(), |m| m.min(cut)));
            }
            let s_h = horizontal_selection(&cfg);
            let pi_v = vertical_ordering(&s_h);
            let at_best = min_cut(&build_worst_case_graph(&cfg, &res, &s_h, &pi_v).unwrap()).unwrap();
            assert_eq!(at_best, min_cut_formula(&cfg, &res, &s_h, &pi_v).unwrap(), "{cfg}");
            assert_eq!(Some(at_best), smallest, "{cfg}");
        }
    }
}

#[test]
fn formula_bounds_max_flow_at_n8() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for cfg in small_configs(8).into_iter().filter(|c| c.n() == 8) {
        let (alpha, bi, bc) = random_resources(&mut rng, &cfg);
        let res = ResourceAllocation::new(&cfg, alpha, bi, bc).unwrap();
        for (s, pi) in candidate_pairs(&cfg, DEFAULT_BUDGET).unwrap().into_iter().step_by(7) {
            let graph = build_worst_case_graph(&cfg, &res, &s, &pi).unwrap();
            assert!(min_cut(&graph).unwrap() <= min_cut_formula(&cfg, &res, &s, &pi).unwrap(), "{cfg} {s} {pi}");
        }
        let s_h = horizontal_selection(&cfg);
        let pi_v = vertical_ordering(&s_h);
        let graph = build_worst_case_graph(&cfg, &res, &s_h, &pi_v).unwrap();
        assert_eq!(min_cut(&graph).unwrap(), capacity(&cfg, &res).unwrap(), "{cfg}");
    }
}

fn config_strategy() -> impl Strategy<Value = SystemConfig> {
    (2usize..=12)
        .prop_flat_map(|n| {
            let divisors: Vec<usize> = (1..=n).filter(|l| n % l == 0).collect();
            (Just(n), 1..n, proptest::sample::select(divisors))
        })
        .prop_map(|(n, k, l)| SystemConfig::new(n, k, l).unwrap())
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (0i64..=40, 1i64..=6).prop_map(|(p, q)| ratio(p, q))
}

proptest! {
    #[test]
    fn capacity_never_exceeds_k_alpha(
        cfg in config_strategy(),
        a in small_rational(),
        bi in small_rational(),
        f in 0i64..=4,
    ) {
        let res = ResourceAllocation::new(&cfg, a.clone(), bi.clone(), &bi * ratio(f, 4)).unwrap();
        prop_assert!(capacity(&cfg, &res).unwrap() <= &a * from_usize(cfg.k()));
    }

    #[test]
    fn capacity_is_monotone_in_every_resource(
        cfg in config_strategy(),
        a in small_rational(),
        bi in small_rational(),
        f in 0i64..=4,
        bump in 1i64..=8,
    ) {
        let bc = &bi * ratio(f, 4);
        let base = capacity(&cfg, &ResourceAllocation::new(&cfg, a.clone(), bi.clone(), bc.clone()).unwrap()).unwrap();
        let step = ratio(bump, 4);
        let more_alpha = ResourceAllocation::new(&cfg, &a + &step, bi.clone(), bc.clone()).unwrap();
        prop_assert!(capacity(&cfg, &more_alpha).unwrap() >= base);
        let more_intra = ResourceAllocation::new(&cfg, a.clone(), &bi + &step, bc.clone()).unwrap();
        prop_assert!(capacity(&cfg, &more_intra).unwrap() >= base);
        let raised_cross = (&bc + &step).min(bi.clone());
        let more_cross = ResourceAllocation::new(&cfg, a.clone(), bi.clone(), raised_cross).unwrap();
        prop_assert!(capacity(&cfg, &more_cross).unwrap() >= base);
    }

    #[test]
    fn capacity_is_positively_homogeneous(
        cfg in config_strategy(),
        a in small_rational(),
        bi in small_rational(),
        f in 0i64..=4,
        t in 1i64..=5,
    ) {
        let bc = &bi * ratio(f, 4);
        let base = capacity(&cfg, &ResourceAllocation::new(&cfg, a.clone(), bi.clone(), bc.clone()).unwrap()).unwrap();
        let scaled = ResourceAllocation::new(&cfg, &a * int(t), &bi * int(t), &bc * int(t)).unwrap();
        prop_assert_eq!(capacity(&cfg, &scaled).unwrap(), base * int(t));
    }
}
