//! Batteries of lemma checks over seeded random instances.

use clap::ValueEnum;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::instances::generate::{deterministic_elements, random_instance, rng};
use crate::instances::{ElemSet, ValuationSet};
use crate::lcst::{
    alg_lcst, brute_force_lcst, check_solution, krs_violation, plan_level, round_level, solve_lp_lcst, LpOptions,
    RoundingParams,
};
use crate::mlsc::{alg_mlsc, brute_force_latency, check_mlsc_recurrence, check_phase_bounds};
use crate::orienteering::{ceil_log2, sop_exact, sop_recursive_greedy, Exact, SopQuery};
use crate::par::{self, Exec};
use crate::rational::{self, int};
use crate::ranking::{alg_ag, brute_force_ranking, check_log_claim, check_recurrence};
use crate::stochastic::{
    alg_ag_sto, evaluate_policy, optimal_adaptive, sto_recurrence_rows, EvalMode, GreedyPolicy, StochasticInstance,
};

use super::commands::{half_completion_bound, integral_point_valid};
use super::record::{ResultRecord, STATUS_MARGIN, STATUS_OK, STATUS_VIOLATION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    /// Every battery below.
    Lemmas,
    RankingLemmas,
    MlscLemmas,
    LcstProbes,
    WssrLemmas,
}

struct Check {
    name: &'static str,
    ok: bool,
    /// Failed Monte-Carlo probes report `margin` instead of a violation.
    hard: bool,
    value: String,
}

impl Check {
    fn hard(name: &'static str, ok: bool, value: impl ToString) -> Self {
        Check {
            name,
            ok,
            hard: true,
            value: value.to_string(),
        }
    }

    fn probe(name: &'static str, ok: bool, value: impl ToString) -> Self {
        Check {
            name,
            ok,
            hard: false,
            value: value.to_string(),
        }
    }
}

fn ranking_checks(seed: u64) -> Result<Vec<Check>> {
    let n = 3 + (seed % 4) as usize;
    let vs = random_instance("explicit", n, seed)?.valuations.expect("ranking instances have valuations");
    let run = alg_ag(&vs);
    let opt = brute_force_ranking(&vs)?;
    let alpha = vs.alpha();
    let ratio_ok = int(run.ordering.objective as i128) <= alpha * int(56) * int(opt.objective as i128);
    let mut r = rng(seed ^ 0x5eed);
    let mut worst = rational::int(0);
    let mut claim_ok = true;
    for i in 0..vs.len() {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        let mut chain = vec![ElemSet::EMPTY];
        let mut s = ElemSet::EMPTY;
        for e in perm {
            s.insert(e);
            if r.random_bool(0.6) {
                chain.push(s);
            }
        }
        chain.push(ElemSet::full(n));
        let sum = check_log_claim(|x| vs.value(i, x), &chain)?;
        claim_ok &= sum <= alpha;
        worst = worst.max(sum);
    }
    Ok(vec![
        Check::hard("ranking-recurrence", check_recurrence(&run.ordering, &opt, &alpha), run.ordering.objective),
        Check::hard(
            "ranking-ratio",
            ratio_ok,
            run.ordering.objective as f64 / opt.objective.max(1) as f64,
        ),
        Check::hard("log-claim", claim_ok, rational::fmt(&worst)),
    ])
}

fn mlsc_checks(seed: u64) -> Result<Vec<Check>> {
    let kinds = ["uniform-metric", "euclidean-grid-metric", "random-metric"];
    let n = 3 + (seed % 3) as usize;
    let inst = random_instance(kinds[(seed % 3) as usize], n, seed)?;
    let metric = inst.metric.expect("metric instances have a metric");
    let vs = inst.valuations.expect("metric instances have valuations");
    let run = alg_mlsc(&metric, &vs, &Exact, 1, 1)?;
    let opt = brute_force_latency(&metric, &vs)?;
    let alpha = vs.alpha();
    let obj = run.tour.objective;
    let ratio_ok = int(obj as i128) <= alpha * int(56) * int(opt.objective as i128);
    let res = vs.residual(ElemSet::EMPTY);
    let budget = 1 + seed % metric.diameter().max(1);
    let q = SopQuery {
        metric: &metric,
        root: metric.root(),
        valuation: &res,
        budget,
    };
    let rg = sop_recursive_greedy(&q, None)?;
    let ex = sop_exact(&q)?;
    let rho = int(ceil_log2(metric.len()) as i128 + 1);
    let sop_ok = rg.length <= budget && rg.value * rho >= ex.value;
    Ok(vec![
        Check::hard("mlsc-recurrence", check_mlsc_recurrence(&run, &opt), obj),
        Check::hard("mlsc-phase-bounds", check_phase_bounds(&run), run.log.phases.len()),
        Check::hard("mlsc-ratio", ratio_ok, obj as f64 / opt.objective.max(1) as f64),
        Check::hard("sop-contract", sop_ok, rational::fmt(&rg.value)),
    ])
}

fn lcst_checks(seed: u64, exec: Exec) -> Result<Vec<Check>> {
    let n = 4 + (seed % 4) as usize;
    let tree = random_instance("random-tree", n, seed)?.grouped_tree()?;
    let opts = LpOptions {
        exec,
        ..Default::default()
    };
    let sol = solve_lp_lcst(&tree, &opts)?;
    let opt = brute_force_lcst(&tree)?;
    let lp_ok = check_solution(&tree, &sol, 1e-6).is_ok();
    let valid = integral_point_valid(&tree, &opt.walk, sol.levels());
    let bound_ok = sol.objective <= opt.objective as f64 + 1e-6;
    let half_ok = half_completion_bound(&sol, tree.groups().len()) <= opt.objective as f64 + 1e-6;
    let params = RoundingParams {
        exec,
        ..Default::default()
    };
    let mut krs_ok = true;
    let mut trials = 0usize;
    let mut hits = 0usize;
    for level in 0..sol.levels() {
        let plan = plan_level(&tree, &sol, level)?;
        krs_ok &= krs_violation(&tree, &plan.z, &plan.adjusted.residual, &plan.contracted) <= 1e-6;
        let due: Vec<usize> = (0..tree.groups().len())
            .filter(|&g| sol.half_level(g).is_some_and(|h| h <= level))
            .collect();
        if due.is_empty() {
            continue;
        }
        let samples = params.samples(&tree);
        let rounds = par::map_range(exec, 50, |s| round_level(&tree, &plan, samples, seed * 1000 + s as u64, &params));
        for round in &rounds {
            for &g in &due {
                trials += 1;
                hits += usize::from(round.accepted && round.covers[g]);
            }
        }
    }
    let freq = if trials == 0 { 1.0 } else { hits as f64 / trials as f64 };
    let run = alg_lcst(&tree, &sol, seed, &params)?;
    Ok(vec![
        Check::hard("lp-feasible", lp_ok, sol.objective),
        Check::hard("lp-validity", valid, opt.objective),
        Check::hard("lp-lower-bound", bound_ok && half_ok, sol.objective),
        Check::hard("krs-properties", krs_ok, sol.levels()),
        Check::probe("cover-probability", freq >= 0.7, freq),
        Check::probe("lcst-fallback", !run.fallback, run.tour.objective),
    ])
}

fn wssr_checks(seed: u64, exec: Exec) -> Result<Vec<Check>> {
    let n = 2 + (seed % 3) as usize;
    let inst = random_instance("random-stochastic", n, seed)?.stochastic_instance()?;
    let alpha = inst.valuations().alpha();
    let ev = evaluate_policy(&inst, &GreedyPolicy, EvalMode::Exact, exec)?;
    let opt = optimal_adaptive(&inst)?;
    let greedy = ev.exact.expect("exact mode");
    let ratio_ok = greedy <= alpha * int(56) * opt.cost && opt.cost <= greedy;
    let rows = sto_recurrence_rows(&inst, 2000, seed, 3.0, exec)?;
    let det_n = 2 + (seed % 5) as usize;
    let vs: ValuationSet = random_instance("random-groups", det_n, seed)?
        .valuations
        .expect("ranking instances have valuations");
    let det = StochasticInstance::new(deterministic_elements(det_n), vs.clone())?;
    let outcome: Vec<usize> = (0..det_n).collect();
    let same = alg_ag_sto(&det, &outcome).complete_order(det_n) == alg_ag(&vs).ordering.order;
    let ratio = if opt.cost.is_zero() {
        1.0
    } else {
        rational::to_f64(&(greedy / opt.cost))
    };
    Ok(vec![
        Check::hard("wssr-ratio", ratio_ok, ratio),
        Check::hard("wssr-degenerate", same, det_n),
        Check::probe("wssr-recurrence", rows.iter().all(|r| r.holds), rows.len()),
    ])
}

/// Runs a battery for seeds `base..base + seeds`: one record per check and
/// seed, then one summary record per check.
pub fn run_suite(name: SuiteName, base: u64, seeds: u64, exec: Exec) -> Result<Vec<ResultRecord>> {
    let batteries: &[SuiteName] = match name {
        SuiteName::Lemmas => &[
            SuiteName::RankingLemmas,
            SuiteName::MlscLemmas,
            SuiteName::LcstProbes,
            SuiteName::WssrLemmas,
        ],
        SuiteName::RankingLemmas => &[SuiteName::RankingLemmas],
        SuiteName::MlscLemmas => &[SuiteName::MlscLemmas],
        SuiteName::LcstProbes => &[SuiteName::LcstProbes],
        SuiteName::WssrLemmas => &[SuiteName::WssrLemmas],
    };
    let mut records = Vec::new();
    for &b in batteries {
        let per_seed = par::map_range(exec, seeds as usize, |i| {
            let seed = base + i as u64;
            let checks = match b {
                SuiteName::RankingLemmas => ranking_checks(seed),
                SuiteName::MlscLemmas => mlsc_checks(seed),
                SuiteName::LcstProbes => lcst_checks(seed, Exec::Sequential),
                _ => wssr_checks(seed, Exec::Sequential),
            };
            checks.map(|c| (seed, c))
        });
        let mut rows = Vec::new();
        for r in per_seed {
            let (seed, checks) = r?;
            for c in checks {
                rows.push((c.name, seed, c));
            }
        }
        rows.sort_by_key(|(name, seed, _)| (*name, *seed));
        let mut names: Vec<&'static str> = rows.iter().map(|(n, _, _)| *n).collect();
        names.dedup();
        for name in names {
            let mine: Vec<&Check> = rows.iter().filter(|(n, _, _)| *n == name).map(|(_, _, c)| c).collect();
            for (_, seed, c) in rows.iter().filter(|(n, _, _)| *n == name) {
                let status = match (c.ok, c.hard) {
                    (true, _) => STATUS_OK,
                    (false, true) => STATUS_VIOLATION,
                    (false, false) => STATUS_MARGIN,
                };
                let mut rec = ResultRecord::new("suite", name, *seed, &c.value);
                rec.status = status.to_string();
                records.push(rec);
            }
            let passed = mine.iter().filter(|c| c.ok).count();
            let failed_hard = mine.iter().any(|c| !c.ok && c.hard);
            let mut rec = ResultRecord::new("suite", format!("{name}:summary"), base, format!("{passed}/{}", mine.len()));
            rec.status = if failed_hard {
                STATUS_VIOLATION
            } else if passed < mine.len() {
                STATUS_MARGIN
            } else {
                STATUS_OK
            }
            .to_string();
            records.push(rec);
        }
    }
    Ok(records)
}
