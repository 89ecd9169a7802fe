mod common;

use latcov::instances::generate::{random_metric, rng};
use latcov::instances::{random_instance, Bound, ElemSet, Metric, SetFunction, Valuation, ValuationSet};
use latcov::orienteering::{
    ceil_log2, solver_by_name, sop_budget_greedy, sop_exact, sop_recursive_greedy, SopQuery, SopResult,
};
use latcov::rational::int;
use latcov::{Error, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

fn well_formed(q: &SopQuery, res: &SopResult) -> bool {
    let mut seen = ElemSet::EMPTY;
    for &v in &res.path {
        if seen.contains(v) {
            return false;
        }
        seen.insert(v);
    }
    res.path.first() == Some(&q.root)
        && res.length == q.metric.path_length(&res.path)
        && res.value == q.valuation.value(seen)
}

/// A random metric with a residual valuation and a budget.
fn query_parts(seed: u64, n: usize) -> (Metric, ValuationSet, ElemSet, u64) {
    let mut r = rng(seed);
    let metric = random_metric(n, 9, &mut r).unwrap();
    let vs = latcov::instances::generate::random_groups(n, 1 + (seed % 3) as usize, &mut r);
    let base = ElemSet(r.random::<u64>() & ElemSet::full(n).0 & !1);
    let budget = r.random_range(0..=2 * metric.diameter());
    (metric, vs, base, budget)
}

#[test]
fn zero_budget_returns_the_root() {
    let metric = Metric::uniform(4, 0);
    let f = Valuation::coverage(&[vec![0], vec![1], vec![2], vec![3]]);
    let b = Bound { f: &f, n: 4 };
    let q = SopQuery {
        metric: &metric,
        root: 0,
        valuation: &b,
        budget: 0,
    };
    let res = sop_exact(&q).unwrap();
    assert_eq!(res.path, vec![0]);
    assert_eq!(res.value, f.value(ElemSet::singleton(0)));
}

#[test]
fn unbinding_budget_reaches_everything() {
    let metric = random_instance("random-metric", 6, 3).unwrap().metric.unwrap();
    let groups: Vec<Vec<usize>> = (0..6).map(|i| vec![i]).collect();
    let f = Valuation::coverage(&groups);
    let b = Bound { f: &f, n: 6 };
    let q = SopQuery {
        metric: &metric,
        root: 0,
        valuation: &b,
        budget: 6 * metric.diameter(),
    };
    assert_eq!(sop_exact(&q).unwrap().value, Rational::one());
}

#[test]
fn recursive_greedy_reaches_a_single_target() {
    let metric = random_instance("random-metric", 7, 5).unwrap().metric.unwrap();
    let target = 4;
    let f = Valuation::single_group(&[target], 1);
    let b = Bound { f: &f, n: 7 };
    let q = SopQuery {
        metric: &metric,
        root: 0,
        valuation: &b,
        budget: metric.d(0, target),
    };
    let res = sop_recursive_greedy(&q, None).unwrap();
    assert!(res.path.contains(&target));
    assert_eq!(res.value, Rational::one());
}

#[test]
fn budget_greedy_stays_home_when_nothing_is_affordable() {
    let dist = vec![vec![0, 5, 5], vec![5, 0, 5], vec![5, 5, 0]];
    let metric = Metric::new(dist, 0).unwrap();
    let f = Valuation::coverage(&[vec![1], vec![2]]);
    let b = Bound { f: &f, n: 3 };
    let q = SopQuery {
        metric: &metric,
        root: 0,
        valuation: &b,
        budget: 2,
    };
    assert_eq!(sop_budget_greedy(&q).unwrap().path, vec![0]);
}

#[test]
fn budget_greedy_on_unit_metric_takes_best_gains() {
    let metric = Metric::uniform(5, 0);
    let f = Valuation::coverage(&[vec![1], vec![2], vec![3], vec![4]]);
    let b = Bound { f: &f, n: 5 };
    let q = SopQuery {
        metric: &metric,
        root: 0,
        valuation: &b,
        budget: 1,
    };
    let res = sop_budget_greedy(&q).unwrap();
    assert_eq!(res.path.len(), 3);
    assert_eq!(res.length, 2);
    assert_eq!(res.value, latcov::rational::rat(1, 2));
}

#[test]
fn exact_solver_rejects_large_metrics() {
    let metric = Metric::uniform(10, 0);
    let f = Valuation::single_group(&[1], 1);
    let b = Bound { f: &f, n: 10 };
    let q = SopQuery {
        metric: &metric,
        root: 0,
        valuation: &b,
        budget: 1,
    };
    assert!(matches!(sop_exact(&q), Err(Error::Size { .. })));
}

#[test]
fn unknown_solver_name_is_rejected() {
    assert!(solver_by_name("ellipsoid").is_err());
    for name in ["exact", "rg", "greedy"] {
        assert_eq!(solver_by_name(name).unwrap().name(), name);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_matches_held_karp(seed in 0u64..10_000, n in 2usize..8) {
        let (metric, vs, base, budget) = query_parts(seed, n);
        let res = vs.residual(base);
        let q = SopQuery { metric: &metric, root: 0, valuation: &res, budget };
        let got = sop_exact(&q).unwrap();
        prop_assert!(well_formed(&q, &got));
        prop_assert!(got.length <= budget);
        prop_assert_eq!(got.value, common::sop_opt(&metric, &res, budget));
    }

    #[test]
    fn solvers_keep_their_contracts(seed in 0u64..10_000, n in 2usize..9) {
        let (metric, vs, base, budget) = query_parts(seed, n);
        let res = vs.residual(base);
        let q = SopQuery { metric: &metric, root: 0, valuation: &res, budget };
        let best = sop_exact(&q).unwrap().value;
        let rg = sop_recursive_greedy(&q, None).unwrap();
        prop_assert!(well_formed(&q, &rg));
        prop_assert!(rg.length <= budget);
        prop_assert!(rg.value * int(ceil_log2(n) as i128 + 1) >= best);
        let gr = sop_budget_greedy(&q).unwrap();
        prop_assert!(well_formed(&q, &gr));
        prop_assert!(gr.length <= 2 * budget);
        prop_assert!(gr.value * int(gr.guarantee.rho as i128) >= best || best.is_zero());
    }
}

#[test]
fn held_karp_oracle_agrees_on_a_hand_instance() {
    // path 0 - 1 - 2 with unit steps; only vertex 2 is valuable
    let dist = vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]];
    let metric = Metric::new(dist, 0).unwrap();
    let f = Valuation::single_group(&[2], 1);
    let b = Bound { f: &f, n: 3 };
    assert_eq!(common::sop_opt(&metric, &b, 1), Rational::zero());
    assert_eq!(common::sop_opt(&metric, &b, 2), Rational::one());
    let _: &dyn SetFunction = &b;
}
