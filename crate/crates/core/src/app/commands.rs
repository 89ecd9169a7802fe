//! One function per subcommand, each producing a [`ResultRecord`].

use serde_json::json;

use crate::error::{Error, Result};
use crate::instances::generate::{random_stochastic, rng};
use crate::instances::{ElemSet, Instance, Metric, Valuation, ValuationSet};
use crate::lcst::{
    alg_lcst, brute_force_lcst, check_solution, frt_embed, integral_point, separate_kc, solve_lp_lcst, stretch_warning,
    LcstRun, LpOptions, LpSolution, RoundingParams,
};
use crate::mlsc::{alg_mlsc, brute_force_latency, check_phase_bounds, mlsc_recurrence_rows};
use crate::orienteering::{sop_exact, solver_by_name, SopQuery};
use crate::par::Exec;
use crate::rational::{self, int, Rational};
use crate::ranking::{alg_ag, brute_force_ranking, recurrence_rows, uncovered_at, CheckpointRow};
use crate::stochastic::{
    decision_tree, evaluate_policy, optimal_adaptive, reduce_filter, reduce_sgmssc, reduce_ssc, sto_recurrence_rows,
    EvalMode, FilterObjective, GreedyPolicy, StochasticInstance,
};
use crate::instances::GroupedTree;

use super::record::{ratio, ResultRecord, STATUS_MARGIN, STATUS_VIOLATION};
use super::{CoverArgs, EvalArgs, FilterArgs, FilterMode, LcstArgs, MlscArgs, RankArgs, SopArgs};

fn rows_json(rows: &[CheckpointRow]) -> serde_json::Value {
    rows.iter()
        .map(|r| json!({"j": r.j, "time": r.time, "r": r.r, "r_opt": r.r_opt, "holds": r.holds}))
        .collect()
}

/// `R(checkpoint(mult, j))` for `j = 0, 1, ...` until nothing is left.
fn checkpoint_counts(cover_times: &[u64], mult: &Rational) -> Vec<String> {
    let mut out = Vec::new();
    for j in 0..63 {
        let r = uncovered_at(cover_times, rational::checkpoint(mult, j));
        out.push(r.to_string());
        if r == 0 {
            break;
        }
    }
    out
}

/// `alg <= bound * opt`, exactly.
fn within(alg: u64, opt: u64, bound: &Rational) -> bool {
    int(alg as i128) <= *bound * int(opt as i128)
}

pub fn rank(a: &RankArgs, seed: u64) -> Result<ResultRecord> {
    let inst = a.source.load()?;
    let vs = inst.require_valuations()?;
    let run = alg_ag(vs);
    let alpha = vs.alpha();
    let mult = alpha * int(8);
    let ord = &run.ordering;
    let mut rec = ResultRecord::new("rank", a.source.label(), seed, ord.objective);
    rec.checkpoints = checkpoint_counts(&ord.cover_times, &mult);
    let mut details = json!({
        "order": ord.order,
        "cover_times": ord.cover_times,
        "epsilon": rational::fmt(&vs.epsilon()),
        "alpha": rational::fmt(&alpha),
    });
    if a.oracle {
        let opt = brute_force_ranking(vs)?;
        let rows = recurrence_rows(&ord.cover_times, &opt.cover_times, &mult);
        let bound = alpha * int(56);
        let ok = rows.iter().all(|r| r.holds) && within(ord.objective, opt.objective, &bound);
        details["oracle_order"] = json!(opt.order);
        details["recurrence"] = rows_json(&rows);
        rec = rec
            .with_oracle(opt.objective, ratio(ord.objective as f64, opt.objective as f64))
            .fail_if(!ok, STATUS_VIOLATION);
    }
    rec.details = details;
    Ok(rec)
}

pub fn sop(a: &SopArgs, seed: u64) -> Result<ResultRecord> {
    let inst = a.source.load()?;
    let metric = inst.require_metric()?;
    let vs = inst.require_valuations()?;
    let res = vs.residual(ElemSet::EMPTY);
    let q = SopQuery {
        metric,
        root: metric.root(),
        valuation: &res,
        budget: a.budget.unwrap_or_else(|| metric.diameter()),
    };
    let solver = solver_by_name(&a.solver)?;
    let out = solver.solve(&q)?;
    let mut rec = ResultRecord::new("sop", a.source.label(), seed, rational::fmt(&out.value));
    let g = out.guarantee;
    let mut details = json!({
        "solver": solver.name(),
        "budget": q.budget,
        "path": out.path,
        "length": out.length,
        "rho": g.rho,
        "sigma": g.sigma,
    });
    let length_ok = out.length <= g.sigma * q.budget;
    rec = rec.fail_if(!length_ok, STATUS_VIOLATION);
    if a.oracle {
        let opt = sop_exact(&q)?;
        details["oracle_path"] = json!(opt.path);
        let r = ratio(rational::to_f64(&out.value), rational::to_f64(&opt.value));
        let ok = out.value * int(g.rho as i128) >= opt.value;
        rec = rec.with_oracle(rational::fmt(&opt.value), r).fail_if(!ok, STATUS_VIOLATION);
    }
    rec.details = details;
    Ok(rec)
}

pub fn mlsc(a: &MlscArgs, seed: u64) -> Result<ResultRecord> {
    let inst = a.source.load()?;
    let metric = inst.require_metric()?;
    let vs = inst.require_valuations()?;
    let solver = solver_by_name(&a.solver)?;
    let g = solver.guarantee(metric.len());
    let run = alg_mlsc(metric, vs, &*solver, g.rho, g.sigma)?;
    let mult = run.log.checkpoint_mult();
    let mut rec = ResultRecord::new("mlsc", a.source.label(), seed, run.tour.objective);
    rec.checkpoints = checkpoint_counts(&run.tour.cover_times, &mult);
    let phases_ok = check_phase_bounds(&run);
    let mut details = json!({
        "solver": solver.name(),
        "rho": g.rho,
        "sigma": g.sigma,
        "alpha": rational::fmt(&run.log.alpha),
        "per_phase": run.log.per_phase,
        "phases": run.log.phases.len(),
        "walk": run.tour.walk,
        "cover_times": run.tour.cover_times,
        "phase_bounds": phases_ok,
    });
    rec = rec.fail_if(!phases_ok, STATUS_VIOLATION);
    if a.oracle {
        let opt = brute_force_latency(metric, vs)?;
        let rows = mlsc_recurrence_rows(&run, &opt);
        let rs = int((g.rho * g.sigma) as i128) * run.log.alpha;
        let obj = run.tour.objective;
        details["oracle_walk"] = json!(opt.walk);
        details["recurrence"] = rows_json(&rows);
        rec = rec
            .with_oracle(opt.objective, ratio(obj as f64, opt.objective as f64))
            .fail_if(
                !rows.iter().all(|r| r.holds) || !within(obj, opt.objective, &(rs * int(104))),
                STATUS_VIOLATION,
            )
            .fail_if(!within(obj, opt.objective, &(rs * int(56))), STATUS_MARGIN);
    }
    rec.details = details;
    Ok(rec)
}

fn lp_json(sol: &LpSolution, tree: &GroupedTree) -> serde_json::Value {
    json!({
        "objective": sol.objective,
        "levels": sol.levels(),
        "exact": sol.exact,
        "rounds": sol.rounds,
        "cuts": sol.cuts,
        "pivots": sol.pivots,
        "half_levels": (0..tree.groups().len()).map(|g| sol.half_level(g)).collect::<Vec<_>>(),
        "y": sol.y,
    })
}

fn run_json(run: &LcstRun) -> serde_json::Value {
    json!({
        "fallback": run.fallback,
        "tree_objective": run.tour.objective,
        "tree_walk": run.tour.walk,
        "levels": run.levels.iter().map(|l| json!({
            "level": l.level,
            "contracted": l.contracted,
            "samples": l.samples,
            "weight": l.weight,
            "limit": l.limit,
            "accepted": l.accepted,
            "newly_covered": l.newly_covered,
        })).collect::<Vec<_>>(),
    })
}

/// `sum_g 2^{l(g)} / 8`, a lower bound on the optimum.
pub fn half_completion_bound(sol: &LpSolution, groups: usize) -> f64 {
    (0..groups)
        .map(|g| sol.half_level(g).map_or(0.0, |l| (1u64 << l) as f64))
        .sum::<f64>()
        / 8.0
}

/// Whether the 0/1 point of `walk` passes every separation call.
pub fn integral_point_valid(tree: &GroupedTree, walk: &[usize], levels: usize) -> bool {
    let (x, y) = integral_point(tree, walk, levels);
    let zero: Rational = int(0);
    (0..levels).all(|l| {
        let xs: Vec<Rational> = x[l].iter().map(|&v| int(v as i128)).collect();
        (0..tree.groups().len()).all(|g| separate_kc(tree, g, &xs, &int(y[l][g] as i128), &zero).violated.is_none())
    })
}

pub fn lcst(a: &LcstArgs, seed: u64, exec: Exec) -> Result<ResultRecord> {
    let inst = a.source.load()?;
    let opts = LpOptions {
        tol: a.tol,
        exec,
        ..Default::default()
    };
    let params = RoundingParams {
        repeat: a.repeat,
        weight: a.weight,
        exec,
    };
    let round_seed = a.round_seed.unwrap_or(seed);
    if inst.tree.is_some() {
        let tree = inst.grouped_tree()?;
        let sol = solve_lp_lcst(&tree, &opts)?;
        let lp_ok = check_solution(&tree, &sol, 1e-6).is_ok();
        let run = alg_lcst(&tree, &sol, round_seed, &params)?;
        let mut rec = ResultRecord::new("lcst", a.source.label(), seed, run.tour.objective);
        rec.checkpoints = run.levels.iter().map(|l| l.newly_covered.to_string()).collect();
        let mut details = json!({"lp": lp_json(&sol, &tree), "run": run_json(&run), "lp_feasible": lp_ok});
        rec = rec.fail_if(!lp_ok, STATUS_VIOLATION);
        if a.oracle {
            let opt = brute_force_lcst(&tree)?;
            let valid = integral_point_valid(&tree, &opt.walk, sol.levels());
            let bound = half_completion_bound(&sol, tree.groups().len());
            let ok = valid && sol.objective <= opt.objective as f64 + 1e-6 && bound <= opt.objective as f64 + 1e-6;
            details["oracle_walk"] = json!(opt.walk);
            details["half_completion_bound"] = json!(bound);
            rec = rec
                .with_oracle(opt.objective, ratio(run.tour.objective as f64, opt.objective as f64))
                .fail_if(!ok, STATUS_VIOLATION);
        }
        rec.details = details;
        return Ok(rec);
    }
    if a.no_embed {
        return Err(Error::invalid("--no-embed needs an instance with a TREE section"));
    }
    let metric = inst.require_metric()?;
    if inst.groups.is_empty() {
        return Err(Error::invalid("instance has no GROUPS section"));
    }
    let emb = frt_embed(metric, &inst.groups, a.embed_seed.unwrap_or(seed))?;
    let sol = solve_lp_lcst(&emb.tree, &opts)?;
    let lp_ok = check_solution(&emb.tree, &sol, 1e-6).is_ok();
    let run = alg_lcst(&emb.tree, &sol, round_seed, &params)?;
    let tour = emb.project(metric, &inst.groups, &run.tour);
    let mut rec = ResultRecord::new("lcst", a.source.label(), seed, tour.objective);
    rec.checkpoints = run.levels.iter().map(|l| l.newly_covered.to_string()).collect();
    let mut details = json!({
        "lp": lp_json(&sol, &emb.tree),
        "run": run_json(&run),
        "lp_feasible": lp_ok,
        "walk": tour.walk,
        "mean_stretch": emb.mean_stretch,
        "stretch_warning": emb.mean_stretch > stretch_warning(metric.len()),
    });
    rec = rec.fail_if(!lp_ok, STATUS_VIOLATION);
    if a.oracle {
        let vs = group_valuations(metric, &inst.groups)?;
        let opt = brute_force_latency(metric, &vs)?;
        details["oracle_walk"] = json!(opt.walk);
        rec = rec.with_oracle(opt.objective, ratio(tour.objective as f64, opt.objective as f64));
    }
    rec.details = details;
    Ok(rec)
}

/// One `min{|S ∩ g| / k, 1}` function per group.
pub fn group_valuations(metric: &Metric, groups: &[(Vec<usize>, usize)]) -> Result<ValuationSet> {
    let fs = groups.iter().map(|(m, k)| Valuation::single_group(m, *k)).collect();
    ValuationSet::new(metric.len(), fs)
}

pub fn stochastic(
    command: &str,
    label: &str,
    inst: &StochasticInstance,
    eval: &EvalArgs,
    seed: u64,
    exec: Exec,
) -> Result<ResultRecord> {
    let sample_seed = eval.sample_seed.unwrap_or(seed);
    let exact = decision_tree(inst, &GreedyPolicy).ok();
    let mode = if exact.is_some() {
        EvalMode::Exact
    } else {
        EvalMode::MonteCarlo {
            samples: eval.samples,
            seed: sample_seed,
        }
    };
    let ev = evaluate_policy(inst, &GreedyPolicy, mode, exec)?;
    let objective = ev.exact.as_ref().map_or_else(|| ev.expected.to_string(), rational::fmt);
    let alpha = inst.valuations().alpha();
    let mut rec = ResultRecord::new(command, label, seed, objective);
    let mut details = json!({
        "expected": ev.expected,
        "exact": ev.exact.is_some(),
        "std_error": ev.std_error,
        "samples": ev.samples,
        "per_function": ev.per_function,
        "uncovered_cost": ev.uncovered_cost,
        "epsilon": rational::fmt(&inst.valuations().epsilon()),
        "alpha": rational::fmt(&alpha),
        "policy_nodes": exact.as_ref().map(|t| t.size()),
    });
    if eval.oracle {
        let opt = optimal_adaptive(inst)?;
        let rows = sto_recurrence_rows(inst, eval.samples, sample_seed, 3.0, exec)?;
        rec.checkpoints = rows.iter().map(|r| r.mean_r.to_string()).collect();
        let greedy = ev.exact.expect("oracle-sized instances are evaluated exactly");
        let ok = greedy <= alpha * int(56) * opt.cost;
        details["recurrence"] = rows
            .iter()
            .map(|r| {
                json!({"j": r.j, "time": r.time, "mean_r": r.mean_r, "mean_diff": r.mean_diff,
                       "se_diff": r.se_diff, "r_opt": r.r_opt, "holds": r.holds})
            })
            .collect();
        rec = rec
            .with_oracle(
                rational::fmt(&opt.cost),
                ratio(rational::to_f64(&greedy), rational::to_f64(&opt.cost)),
            )
            .fail_if(!ok, STATUS_VIOLATION)
            .fail_if(!rows.iter().all(|r| r.holds), STATUS_MARGIN);
    }
    rec.details = details;
    Ok(rec)
}

fn cover_instance(command: &str, a: &CoverArgs, seed: u64) -> Result<(String, StochasticInstance)> {
    let (label, sets, elements) = match &a.instance {
        Some(p) => {
            let inst = Instance::parse(&std::fs::read_to_string(p)?)?;
            let els = inst
                .stochastic
                .clone()
                .ok_or_else(|| Error::invalid("instance has no STOCHASTIC section"))?;
            (p.display().to_string(), inst.groups.clone(), els)
        }
        None => {
            use rand::seq::SliceRandom;
            use rand::Rng;
            let mut r = rng(seed);
            let domain = 4;
            let (els, _) = random_stochastic(a.elements, domain, 3, &mut r);
            let m = r.random_range(1..=3);
            let sets = (0..m)
                .map(|_| {
                    let mut pts: Vec<usize> = (0..domain).collect();
                    pts.shuffle(&mut r);
                    pts.truncate(r.random_range(1..=domain));
                    pts.sort_unstable();
                    let k = r.random_range(1..=pts.len());
                    (pts, k)
                })
                .collect();
            (format!("random:elements={}:seed={seed}", a.elements), sets, els)
        }
    };
    let domain = sets
        .iter()
        .flat_map(|(s, _)| s.iter().copied())
        .chain(elements.iter().flat_map(|e| e.outcomes.iter().map(|(b, _)| *b)))
        .max()
        .map_or(1, |m| m + 1);
    let inst = match command {
        "ssc" => {
            let plain: Vec<Vec<usize>> = sets.into_iter().map(|(s, _)| s).collect();
            reduce_ssc(domain, &plain, elements)?
        }
        _ => reduce_sgmssc(domain, &sets, elements)?,
    };
    Ok((label, inst))
}

pub fn cover(command: &str, a: &CoverArgs, seed: u64, exec: Exec) -> Result<ResultRecord> {
    let (label, inst) = cover_instance(command, a, seed)?;
    stochastic(command, &label, &inst, &a.eval, seed, exec)
}

fn parse_list<T>(s: &str, what: &'static str, f: impl Fn(&str) -> Option<T>) -> Result<Vec<T>> {
    s.split(',')
        .map(|p| {
            f(p.trim()).ok_or_else(|| Error::Unknown {
                what,
                name: p.to_string(),
            })
        })
        .collect()
}

pub fn filters(a: &FilterArgs, seed: u64, exec: Exec) -> Result<ResultRecord> {
    let queries = a
        .queries
        .split(';')
        .map(|q| parse_list(q, "filter index", |p| p.parse().ok()))
        .collect::<Result<Vec<Vec<usize>>>>()?;
    let sel = parse_list(&a.selectivity, "selectivity", |p| rational::parse(p).ok())?;
    let costs = match &a.costs {
        Some(c) => parse_list(c, "cost", |p| p.parse().ok())?,
        None => vec![1; sel.len()],
    };
    let objective = match a.objective {
        FilterMode::MinCost => FilterObjective::MinCost,
        FilterMode::Latency => FilterObjective::Latency,
    };
    let inst = reduce_filter(&queries, &sel, &costs, objective)?;
    stochastic("filters", &a.queries, &inst, &a.eval, seed, exec)
}
