//! Acceptance checks. Each criterion prints one PASS or FAIL line with the
//! measured statistic; the process exits nonzero when any criterion fails.

mod common;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use latcov::instances::generate::{deterministic_elements, random_explicit, random_groups, random_metric, rng};
use latcov::instances::{random_instance, ElemSet, GroupedTree, Valuation, ValuationSet};
use latcov::lcst::{
    brute_force_lcst, integral_point, krs_round, min_cut_with_exceptions, plan_level, round_level, sample_rng,
    separate_kc, solve_lp_lcst, CutTree, LpOptions, RoundingParams,
};
use latcov::mlsc::{alg_mlsc, brute_force_latency, check_mlsc_recurrence};
use latcov::orienteering::{ceil_log2, sop_exact, sop_recursive_greedy, Exact, SopQuery};
use latcov::par::Exec;
use latcov::rational::{int, rat, to_f64};
use latcov::ranking::{alg_ag, brute_force_ranking, check_log_claim, check_recurrence};
use latcov::stochastic::{
    alg_ag_sto, evaluate_policy, optimal_adaptive, sto_recurrence_rows, EvalMode, GreedyPolicy, StochasticInstance,
};
use latcov::Rational;
use rand::seq::SliceRandom;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn tol() -> Rational {
    Rational::new(1, 1_000_000_000)
}

fn exact_lp() -> LpOptions {
    LpOptions {
        exact: Some(true),
        exec: Exec::Sequential,
        ..Default::default()
    }
}

fn ranking_ratio() -> Outcome {
    let mut worst = 0.0f64;
    let mut failures = 0;
    for seed in 0..300u64 {
        let kind = if seed % 2 == 0 { "explicit" } else { "random-groups" };
        let n = 1 + (seed % 7) as usize;
        let vs = random_instance(kind, n, seed).unwrap().valuations.unwrap();
        let alg = alg_ag(&vs).ordering.objective;
        let opt = brute_force_ranking(&vs).unwrap().objective;
        if int(alg as i128) > int(56) * vs.alpha() * int(opt as i128) {
            failures += 1;
        }
        if opt > 0 {
            worst = worst.max(alg as f64 / opt as f64);
        }
    }
    outcome(failures == 0, format!("300 instances, max ratio {worst:.4}, bound 56α, {failures} over"))
}

fn ranking_recurrence() -> Outcome {
    let mut failures = 0;
    for seed in 0..200u64 {
        let kind = if seed % 2 == 0 { "random-groups" } else { "explicit" };
        let n = 1 + (seed % 8) as usize;
        let vs = random_instance(kind, n, 1000 + seed).unwrap().valuations.unwrap();
        let opt = brute_force_ranking(&vs).unwrap();
        if !check_recurrence(&alg_ag(&vs).ordering, &opt, &vs.alpha()) {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("200 instances, {failures} failures"))
}

fn random_function<R: Rng>(kind: usize, n: usize, r: &mut R) -> Valuation {
    let group = |r: &mut R| {
        let mut g: Vec<usize> = (0..n).collect();
        g.shuffle(r);
        g.truncate(r.random_range(1..=n));
        g.sort_unstable();
        g
    };
    match kind {
        0 => {
            let groups: Vec<Vec<usize>> = (0..r.random_range(1..=3)).map(|_| group(r)).collect();
            Valuation::coverage(&groups)
        }
        1 => {
            let groups: Vec<Vec<usize>> = (0..r.random_range(1..=3)).map(|_| group(r)).collect();
            let reqs: Vec<usize> = groups.iter().map(|g| r.random_range(1..=g.len())).collect();
            Valuation::multi_coverage(&groups, &reqs)
        }
        2 => {
            let g = group(r);
            let k = r.random_range(1..=g.len());
            Valuation::single_group(&g, k)
        }
        _ => random_explicit(n, r),
    }
}

fn log_chains() -> Outcome {
    let names = ["coverage", "multi-coverage", "single-group", "explicit"];
    let mut failures = Vec::new();
    let mut tightest = 0.0f64;
    for (kind, name) in names.iter().enumerate() {
        let mut r = rng(3000 + kind as u64);
        let mut bad = 0;
        for _ in 0..500 {
            let n = r.random_range(1..=8usize);
            let vs = ValuationSet::new(n, vec![random_function(kind, n, &mut r)]).unwrap();
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut r);
            let mut chain = vec![ElemSet::EMPTY];
            let mut s = ElemSet::EMPTY;
            for (i, &e) in order.iter().enumerate() {
                s.insert(e);
                if r.random_bool(0.5) || i + 1 == n {
                    chain.push(s);
                }
            }
            let sum = check_log_claim(|x| vs.value(0, x), &chain).unwrap();
            let bound = vs.alpha();
            tightest = tightest.max(to_f64(&sum) / to_f64(&bound));
            if sum > bound {
                bad += 1;
            }
        }
        if bad > 0 {
            failures.push(format!("{name}: {bad}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "500 chains x 4 kinds, max sum / (1 + ln 1/δ) = {tightest:.4}, failures [{}]",
            failures.join(", ")
        ),
    )
}

fn sop_contract() -> Outcome {
    let mut failures = 0;
    let mut worst = f64::INFINITY;
    for seed in 0..300u64 {
        let mut r = rng(4000 + seed);
        let n = r.random_range(2..=9usize);
        let metric = random_metric(n, 9, &mut r).unwrap();
        let vs = random_groups(n, 1 + (seed % 3) as usize, &mut r);
        let base = ElemSet(r.random::<u64>() & ElemSet::full(n).0 & !1);
        let budget = r.random_range(0..=2 * metric.diameter());
        let res = vs.residual(base);
        let q = SopQuery {
            metric: &metric,
            root: 0,
            valuation: &res,
            budget,
        };
        let best = sop_exact(&q).unwrap().value;
        let rg = sop_recursive_greedy(&q, None).unwrap();
        let factor = int(ceil_log2(n) as i128 + 1);
        if rg.value * factor < best || rg.length > budget {
            failures += 1;
        }
        if best > Rational::from_integer(0) {
            worst = worst.min(to_f64(&(rg.value / best)));
        }
    }
    outcome(
        failures == 0,
        format!("300 queries, min rg / exact {worst:.4}, {failures} failures"),
    )
}

fn mlsc_ratio() -> Outcome {
    let kinds = ["uniform-metric", "euclidean-grid-metric", "random-metric"];
    let mut worst = 0.0f64;
    let (mut over, mut rec) = (0, 0);
    for seed in 0..150u64 {
        let n = 1 + (seed % 6) as usize;
        let inst = random_instance(kinds[(seed % 3) as usize], n, 5000 + seed).unwrap();
        let (metric, vs) = (inst.metric.unwrap(), inst.valuations.unwrap());
        let run = alg_mlsc(&metric, &vs, &Exact, 1, 1).unwrap();
        let opt = brute_force_latency(&metric, &vs).unwrap();
        if int(run.tour.objective as i128) > int(56) * vs.alpha() * int(opt.objective as i128) {
            over += 1;
        }
        if !check_mlsc_recurrence(&run, &opt) {
            rec += 1;
        }
        if opt.objective > 0 {
            worst = worst.max(run.tour.objective as f64 / opt.objective as f64);
        }
    }
    outcome(
        over == 0 && rec == 0,
        format!("150 instances, max ratio {worst:.4}, {over} over 56α, {rec} recurrence failures"),
    )
}

fn random_cut_tree(seed: u64, n: usize) -> CutTree<Rational> {
    let mut r = rng(seed);
    let mut children = vec![Vec::new(); n];
    for v in 1..n {
        children[r.random_range(0..v)].push(v);
    }
    let cost = (0..n)
        .map(|v| if v == 0 { int(0) } else { int(r.random_range(0..10)) })
        .collect();
    CutTree { root: 0, children, cost }
}

fn min_cut() -> Outcome {
    let mut failures = 0;
    let mut checks = 0;
    for seed in 0..500u64 {
        let t = random_cut_tree(6000 + seed, 2 + (seed % 10) as usize);
        for d in 0..=t.leaf_count() {
            checks += 1;
            let dp = min_cut_with_exceptions(&t, d).ok().map(|c| c.cost);
            if dp != common::min_cut_exhaustive(&t, d) {
                failures += 1;
            }
        }
    }
    outcome(failures == 0, format!("500 trees, {checks} demands, {failures} mismatches"))
}

fn kc_separation() -> Outcome {
    let mut failures = 0;
    let mut checks = 0;
    let mut violated = 0;
    for seed in 0..200u64 {
        let mut r = rng(7000 + seed);
        let n = r.random_range(2..=11usize);
        let t = GroupedTree::new(&common::random_raw_tree(n, r.random_range(1..=2), &mut r)).unwrap();
        let x = common::random_monotone_x(&t, 6, &mut r);
        let y = rat(r.random_range(0..=6), 6);
        for g in 0..t.groups().len() {
            checks += 1;
            let sep = separate_kc(&t, g, &x, &y, &tol());
            let brute = common::kc_min_slack(&t, g, &x, y);
            let flag = brute < -tol();
            violated += usize::from(flag);
            if sep.min_slack != brute || sep.violated.is_some() != flag {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0,
        format!("200 points, {checks} group checks ({violated} violated), {failures} disagreements"),
    )
}

fn tree_instance(seed: u64, n: usize) -> GroupedTree {
    random_instance("random-tree", n, seed).unwrap().grouped_tree().unwrap()
}

fn lp_bound() -> Outcome {
    let (mut sep_fail, mut bound_fail) = (0, 0);
    let mut worst = 0.0f64;
    for seed in 0..50u64 {
        let t = tree_instance(8000 + seed, 2 + (seed % 8) as usize);
        let sol = solve_lp_lcst(&t, &exact_lp()).unwrap();
        let opt = brute_force_lcst(&t).unwrap();
        if sol.objective > opt.objective as f64 + 1e-9 {
            bound_fail += 1;
        }
        if opt.objective > 0 {
            worst = worst.max(sol.objective / opt.objective as f64);
        }
        let mut r = rng(seed);
        let mut walks = vec![opt.walk];
        let leaves: Vec<usize> = t.groups().iter().flat_map(|g| g.leaves.clone()).collect();
        for _ in 0..4 {
            let mut order = leaves.clone();
            order.shuffle(&mut r);
            let mut w = vec![t.root()];
            w.extend(order);
            walks.push(w);
        }
        for w in &walks {
            let (xs, ys) = integral_point(&t, w, sol.levels());
            for l in 0..sol.levels() {
                let x: Vec<Rational> = xs[l].iter().map(|&a| int(a as i128)).collect();
                for g in 0..t.groups().len() {
                    let y = int(ys[l][g] as i128);
                    if separate_kc(&t, g, &x, &y, &tol()).violated.is_some() {
                        sep_fail += 1;
                    }
                }
            }
        }
    }
    outcome(
        sep_fail == 0 && bound_fail == 0,
        format!("50 trees, max LP / OPT {worst:.4}, {bound_fail} above OPT, {sep_fail} integral points cut off"),
    )
}

fn krs_marginals() -> Outcome {
    let samples = 100_000usize;
    let mut failures = Vec::new();
    let mut comparisons = 0;
    let mut worst = 0.0f64;
    for fixture in 0..20u64 {
        let t = tree_instance(9000 + fixture, 4 + (fixture % 8) as usize);
        let mut r = rng(9100 + fixture);
        let z: Vec<f64> = common::random_monotone_x(&t, 10, &mut r).iter().map(to_f64).collect();
        let draws = latcov::par::map_range(Exec::Parallel, samples, |i| {
            krs_round(&t, &z, &mut sample_rng(9200 + fixture, i as u64)).unwrap()
        });
        for e in t.edges() {
            let hits = draws.iter().filter(|d| d[e]).count();
            let freq = hits as f64 / samples as f64;
            let ze = z[e];
            comparisons += 1;
            let ok = if ze == 0.0 || ze == 1.0 {
                freq == ze
            } else {
                let se = (ze * (1.0 - ze) / samples as f64).sqrt();
                let dev = (freq - ze).abs() / se;
                worst = worst.max(dev);
                dev <= 3.0
            };
            if !ok {
                failures.push(format!("tree {fixture} edge {e}: {freq:.5} vs {ze}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "20 trees, {comparisons} edges, max deviation {worst:.2} SE, failures [{}]",
            failures.join("; ")
        ),
    )
}

fn cover_probability() -> Outcome {
    let params = RoundingParams::default();
    let seeds = 500u64;
    let mut worst = 1.0f64;
    let mut cases = 0;
    let mut failures = Vec::new();
    for tree_seed in 0..20u64 {
        let t = tree_instance(10_000 + tree_seed, 4 + (tree_seed % 7) as usize);
        let sol = solve_lp_lcst(&t, &exact_lp()).unwrap();
        let samples = params.samples(&t);
        for l in 0..sol.levels() {
            let plan = plan_level(&t, &sol, l).unwrap();
            let groups: Vec<usize> = (0..t.groups().len()).filter(|&g| sol.y[l][g] >= 0.5).collect();
            if groups.is_empty() {
                continue;
            }
            let mut hits = vec![0u64; t.groups().len()];
            for s in 0..seeds {
                let round = round_level(&t, &plan, samples, s, &params);
                for &g in &groups {
                    if round.covers[g] && round.accepted {
                        hits[g] += 1;
                    }
                }
            }
            for &g in &groups {
                cases += 1;
                let p = hits[g] as f64 / seeds as f64;
                worst = worst.min(p);
                if p < 0.70 {
                    failures.push(format!("tree {tree_seed} level {l} group {g}: {p:.3}"));
                }
            }
        }
    }
    outcome(
        failures.is_empty() && cases > 0,
        format!(
            "{cases} (tree, level, group) cases, min probability {worst:.3}, bound 0.70, failures [{}]",
            failures.join("; ")
        ),
    )
}

fn degenerate_wssr() -> Outcome {
    let mut failures = 0;
    for seed in 0..100u64 {
        let kind = if seed % 2 == 0 { "random-groups" } else { "explicit" };
        let n = 1 + (seed % 8) as usize;
        let vs = random_instance(kind, n, 11_000 + seed).unwrap().valuations.unwrap();
        let inst = StochasticInstance::new(deterministic_elements(n), vs.clone()).unwrap();
        let outcome: Vec<usize> = (0..n).collect();
        let run = alg_ag_sto(&inst, &outcome);
        let ag = alg_ag(&vs);
        if run.complete_order(n) != ag.ordering.order || run.cost != ag.ordering.objective {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("100 instances, {failures} orderings differ"))
}

fn wssr_ratio() -> Outcome {
    let mut worst = 0.0f64;
    let mut over = 0;
    for seed in 0..300u64 {
        let n = 1 + (seed % 4) as usize;
        let inst = random_instance("random-stochastic", n, 12_000 + seed)
            .unwrap()
            .stochastic_instance()
            .unwrap();
        let greedy = evaluate_policy(&inst, &GreedyPolicy, EvalMode::Exact, Exec::Sequential)
            .unwrap()
            .exact
            .unwrap();
        let opt = optimal_adaptive(&inst).unwrap().cost;
        if greedy > int(56) * inst.valuations().alpha() * opt {
            over += 1;
        }
        if opt > int(0) {
            worst = worst.max(to_f64(&(greedy / opt)));
        }
    }
    outcome(over == 0, format!("300 instances, max ratio {worst:.4}, {over} over 56α"))
}

fn stochastic_recurrence() -> Outcome {
    let mut failures = Vec::new();
    let mut rows = 0;
    for fixture in 0..20u64 {
        let n = 2 + (fixture % 3) as usize;
        let inst = random_instance("random-stochastic", n, 13_000 + fixture)
            .unwrap()
            .stochastic_instance()
            .unwrap();
        let table = sto_recurrence_rows(&inst, 10_000, fixture, 3.0, Exec::Parallel).unwrap();
        rows += table.len();
        for row in table.iter().filter(|r| !r.holds) {
            failures.push(format!("instance {fixture} j {}", row.j));
        }
    }
    outcome(
        failures.is_empty(),
        format!("20 instances, {rows} checkpoints, failures [{}]", failures.join(", ")),
    )
}

fn cli_runs() -> Vec<(&'static str, Vec<String>)> {
    let path = |name: &str| {
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("fixtures")
            .join(name)
            .to_string_lossy()
            .into_owned()
    };
    let (star, line) = (path("star.lcov"), path("metric.lcov"));
    let args = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    vec![
        ("gen", args(&["gen", "random-tree:n=8:seed=2"])),
        ("rank", args(&["rank", "--gen", "explicit:n=6:seed=1", "--oracle"])),
        ("sop", args(&["sop", "--gen", "random-metric:n=7:seed=3", "--oracle"])),
        ("mlsc", args(&["mlsc", "--gen", "euclidean-grid-metric:n=6:seed=4", "--oracle"])),
        ("lcst", args(&["lcst", "--instance", &star, "--oracle", "--seed", "7"])),
        ("lcst-metric", args(&["lcst", "--instance", &line, "--seed", "3"])),
        ("wssr", args(&["wssr", "--gen", "random-stochastic:n=6:seed=6", "--samples", "3000"])),
        ("ssc", args(&["ssc", "--oracle", "--seed", "8"])),
        (
            "filters",
            args(&["filters", "--queries", "0,1;1,2", "--selectivity", "1/2,1/3,2/3", "--oracle"]),
        ),
        ("sgmssc", args(&["sgmssc", "--oracle", "--seed", "9"])),
        ("suite", args(&["suite", "lemmas", "--seeds", "3"])),
    ]
}

fn run_cli(args: &[String], out: &Path, json: bool) -> Result<(Vec<u8>, Vec<Vec<u8>>), String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_latcov"));
    cmd.arg("--out").arg(out);
    if json {
        cmd.args(["--format", "json"]);
    }
    let res = cmd.args(args).output().map_err(|e| e.to_string())?;
    if !res.status.success() {
        return Err(String::from_utf8_lossy(&res.stderr).into_owned());
    }
    let mut files = Vec::new();
    for ext in ["", ".csv", ".json"] {
        let p = PathBuf::from(format!("{}{ext}", out.display()));
        if p.exists() {
            files.push(std::fs::read(&p).map_err(|e| e.to_string())?);
        }
    }
    Ok((res.stdout, files))
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("latcov-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut failures = Vec::new();
    let runs = cli_runs();
    for (name, args) in &runs {
        for json in [false, true] {
            let a = run_cli(args, &dir.join(format!("{name}-{json}-a")), json);
            let b = run_cli(args, &dir.join(format!("{name}-{json}-b")), json);
            match (a, b) {
                (Ok(a), Ok(b)) if a == b && !a.1.is_empty() => {}
                (Err(e), _) | (_, Err(e)) => failures.push(format!("{name}: {}", e.trim())),
                _ => failures.push(format!("{name}: output differs")),
            }
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    outcome(
        failures.is_empty(),
        format!("{} commands x 2 formats, failures [{}]", runs.len(), failures.join("; ")),
    )
}

fn main() {
    type Check = fn() -> Outcome;
    let criteria: [(&str, u64, Check); 14] = [
        ("ranking ratio", 120, ranking_ratio),
        ("ranking recurrence", 60, ranking_recurrence),
        ("log chains", 30, log_chains),
        ("orienteering contract", 180, sop_contract),
        ("latency cover ratio", 300, mlsc_ratio),
        ("min cut with exceptions", 30, min_cut),
        ("knapsack cover separation", 120, kc_separation),
        ("lp validity and bound", 300, lp_bound),
        ("krs marginals", 120, krs_marginals),
        ("cover probability", 300, cover_probability),
        ("degenerate stochastic ranking", 30, degenerate_wssr),
        ("stochastic ranking ratio", 300, wssr_ratio),
        ("stochastic recurrence", 300, stochastic_recurrence),
        ("cli determinism", 60, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = check();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*limit);
        let pass = res.pass && in_time;
        failed += usize::from(!pass);
        println!(
            "{} {:>2} {name}: {} [{:.1}s of {limit}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            res.detail,
            took.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
