//! Reference implementations used to check the library. None of them call
//! into the algorithms under test; they only read instance data.

#![allow(dead_code)]

use std::collections::VecDeque;

use latcov::instances::{ElemSet, GroupedTree, Metric, RawTree, SetFunction, ValuationSet};
use latcov::lcst::CutTree;
use latcov::stochastic::StochasticInstance;
use latcov::Rational;
use num_traits::{One, Zero};
use rand::Rng;

fn uncovered(vs: &ValuationSet, s: ElemSet) -> u64 {
    (0..vs.len()).filter(|&i| vs.value(i, s) < Rational::one()).count() as u64
}

/// Optimal total cover time of a ranking instance.
///
/// Uses `sum_i cov_i = sum_t |uncovered after t - 1 steps|`, which depends
/// only on the set scheduled so far, so a DP over subsets is exact.
pub fn ranking_opt(vs: &ValuationSet) -> u64 {
    let n = vs.domain();
    let size = 1usize << n;
    let mut best = vec![u64::MAX; size];
    best[0] = 0;
    for mask in 0..size {
        if best[mask] == u64::MAX {
            continue;
        }
        let open = uncovered(vs, ElemSet(mask as u64));
        for e in 0..n {
            if mask & (1 << e) == 0 {
                let next = mask | (1 << e);
                best[next] = best[next].min(best[mask] + open);
            }
        }
    }
    best[size - 1]
}

/// Optimal latency objective on a metric: Held-Karp over (visited, last),
/// charging each leg by the number of functions still open before it.
pub fn latency_opt(metric: &Metric, vs: &ValuationSet) -> u64 {
    let n = metric.len();
    let r = metric.root();
    let size = 1usize << n;
    let mut dp = vec![vec![u64::MAX; n]; size];
    dp[1 << r][r] = 0;
    let mut best = u64::MAX;
    for mask in 0..size {
        let open = uncovered(vs, ElemSet(mask as u64));
        for last in 0..n {
            let cur = dp[mask][last];
            if cur == u64::MAX {
                continue;
            }
            if open == 0 {
                best = best.min(cur);
                continue;
            }
            for next in 0..n {
                if mask & (1 << next) == 0 {
                    let m2 = mask | (1 << next);
                    let c = cur + metric.d(last, next) * open;
                    if c < dp[m2][next] {
                        dp[m2][next] = c;
                    }
                }
            }
        }
    }
    best
}

/// Best value of a rooted path of length at most `budget`: Held-Karp
/// shortest paths over (visited, last), then the best affordable set.
pub fn sop_opt(metric: &Metric, f: &dyn SetFunction, budget: u64) -> Rational {
    let n = metric.len();
    let r = metric.root();
    let size = 1usize << n;
    let mut dp = vec![vec![u64::MAX; n]; size];
    dp[1 << r][r] = 0;
    let mut best = f.value(ElemSet::singleton(r));
    for mask in 0..size {
        let shortest = dp[mask].iter().copied().min().unwrap_or(u64::MAX);
        if shortest <= budget {
            best = best.max(f.value(ElemSet(mask as u64)));
        }
        for last in 0..n {
            let cur = dp[mask][last];
            if cur == u64::MAX {
                continue;
            }
            for next in 0..n {
                if mask & (1 << next) == 0 {
                    let m2 = mask | (1 << next);
                    dp[m2][next] = dp[m2][next].min(cur + metric.d(last, next));
                }
            }
        }
    }
    best
}

/// Depth of every vertex by walking parent pointers.
fn depths(tree: &GroupedTree) -> Vec<u64> {
    (0..tree.len())
        .map(|v| {
            let mut d = 0;
            let mut u = v;
            while let Some(p) = tree.parent(u) {
                d += tree.weight(u);
                u = p;
            }
            d
        })
        .collect()
}

fn path_up(tree: &GroupedTree, v: usize) -> Vec<usize> {
    let mut out = vec![v];
    let mut u = v;
    while let Some(p) = tree.parent(u) {
        out.push(p);
        u = p;
    }
    out
}

/// Tree distance computed from the lowest common ancestor.
pub fn tree_distance(tree: &GroupedTree, u: usize, v: usize) -> u64 {
    let dep = depths(tree);
    let up = path_up(tree, u);
    let lca = path_up(tree, v).into_iter().find(|a| up.contains(a)).expect("same tree");
    dep[u] + dep[v] - 2 * dep[lca]
}

/// Optimal latency covering tour on a tree, by Held-Karp over group leaves.
pub fn lcst_opt(tree: &GroupedTree) -> u64 {
    let leaves: Vec<usize> = tree.groups().iter().flat_map(|g| g.leaves.iter().copied()).collect();
    let n = leaves.len();
    let size = 1usize << n;
    let open = |mask: usize| -> u64 {
        tree.groups()
            .iter()
            .filter(|g| {
                let got = g
                    .leaves
                    .iter()
                    .filter(|j| {
                        let i = leaves.iter().position(|l| l == *j).expect("group leaf");
                        mask & (1 << i) != 0
                    })
                    .count();
                got < g.requirement
            })
            .count() as u64
    };
    let dist: Vec<Vec<u64>> = leaves
        .iter()
        .map(|&a| leaves.iter().map(|&b| tree_distance(tree, a, b)).collect())
        .collect();
    let all_open = open(0);
    let mut dp = vec![vec![u64::MAX; n]; size];
    for (i, &leaf) in leaves.iter().enumerate() {
        dp[1 << i][i] = tree_distance(tree, tree.root(), leaf) * all_open;
    }
    let mut best = if all_open == 0 { 0 } else { u64::MAX };
    for mask in 1..size {
        let o = open(mask);
        for last in 0..n {
            let cur = dp[mask][last];
            if cur == u64::MAX {
                continue;
            }
            if o == 0 {
                best = best.min(cur);
                continue;
            }
            for next in 0..n {
                if mask & (1 << next) == 0 {
                    let m2 = mask | (1 << next);
                    dp[m2][next] = dp[m2][next].min(cur + dist[last][next] * o);
                }
            }
        }
    }
    best
}

fn cut_tree_edges(t: &CutTree<Rational>) -> Vec<usize> {
    let mut out = Vec::new();
    let mut stack = vec![t.root];
    while let Some(v) = stack.pop() {
        for &c in &t.children[v] {
            out.push(c);
            stack.push(c);
        }
    }
    out.sort_unstable();
    out
}

/// Leaves of a cut tree, each with the edges on its root path.
fn cut_tree_leaves(t: &CutTree<Rational>) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![(t.root, Vec::new())];
    while let Some((v, path)) = stack.pop() {
        if v != t.root && t.children[v].is_empty() {
            out.push(path);
            continue;
        }
        for &c in &t.children[v] {
            let mut p = path.clone();
            p.push(c);
            stack.push((c, p));
        }
    }
    out
}

/// Cheapest edge set separating at least `d` leaves from the root, by
/// enumerating every subset of edges.
pub fn min_cut_exhaustive(t: &CutTree<Rational>, d: usize) -> Option<Rational> {
    let edges = cut_tree_edges(t);
    let leaves = cut_tree_leaves(t);
    let mut best: Option<Rational> = None;
    for mask in 0u32..(1 << edges.len()) {
        let chosen = |v: usize| {
            let i = edges.iter().position(|&e| e == v).expect("edge of the tree");
            mask & (1 << i) != 0
        };
        let separated = leaves.iter().filter(|p| p.iter().any(|&e| chosen(e))).count();
        if separated < d {
            continue;
        }
        let cost: Rational = edges.iter().filter(|&&e| chosen(e)).map(|&e| t.cost[e]).sum();
        if best.is_none_or(|b| cost < b) {
            best = Some(cost);
        }
    }
    best
}

/// Smallest `lhs - rhs` over every knapsack-cover constraint of group `g`:
/// exception sets `A ⊆ g` with `|A| < k` and edge sets `B` cutting every
/// leaf of `g \ A` off the root, with
/// `lhs = (k - |A|) sum_{e in B, internal} x_e + sum_{j in B ∩ (g \ A)} x_j`
/// and `rhs = (k - |A|) y`.
pub fn kc_min_slack(tree: &GroupedTree, g: usize, x: &[Rational], y: Rational) -> Rational {
    let group = &tree.groups()[g];
    let k = group.requirement;
    let members = &group.leaves;
    let edges: Vec<usize> = (0..tree.len()).filter(|&v| tree.parent(v).is_some()).collect();
    assert!(edges.len() <= 16, "too many edges for exhaustive enumeration");
    let paths: Vec<Vec<usize>> = members
        .iter()
        .map(|&j| path_up(tree, j).into_iter().filter(|&v| tree.parent(v).is_some()).collect())
        .collect();
    let mut best: Option<Rational> = None;
    for amask in 0u32..(1 << members.len()) {
        let a = amask.count_ones() as usize;
        if a >= k {
            continue;
        }
        let coef = Rational::from_integer((k - a) as i128);
        for bmask in 0u32..(1 << edges.len()) {
            let in_b = |v: usize| {
                let i = edges.iter().position(|&e| e == v).expect("tree edge");
                bmask & (1 << i) != 0
            };
            let cuts_all = (0..members.len())
                .filter(|i| amask & (1 << i) == 0)
                .all(|i| paths[i].iter().any(|&e| in_b(e)));
            if !cuts_all {
                continue;
            }
            let mut lhs = Rational::zero();
            for &e in &edges {
                if !in_b(e) {
                    continue;
                }
                if tree.is_leaf(e) {
                    if let Some(i) = members.iter().position(|&j| j == e) {
                        if amask & (1 << i) == 0 {
                            lhs += x[e];
                        }
                    }
                } else {
                    lhs += coef * x[e];
                }
            }
            let slack = lhs - coef * y;
            if best.is_none_or(|b| slack < b) {
                best = Some(slack);
            }
        }
    }
    best.expect("A = ∅ with B = all edges is always a constraint")
}

/// Maximum flow by shortest augmenting paths on a dense capacity matrix.
pub fn max_flow(cap: &[Vec<f64>], s: usize, t: usize) -> f64 {
    let n = cap.len();
    let mut res: Vec<Vec<f64>> = cap.to_vec();
    let mut total = 0.0;
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for v in 0..n {
                if prev[v] == usize::MAX && res[u][v] > 1e-12 {
                    prev[v] = u;
                    q.push_back(v);
                }
            }
        }
        if prev[t] == usize::MAX {
            return total;
        }
        let mut push = f64::INFINITY;
        let mut v = t;
        while v != s {
            push = push.min(res[prev[v]][v]);
            v = prev[v];
        }
        let mut v = t;
        while v != s {
            let u = prev[v];
            res[u][v] -= push;
            res[v][u] += push;
            v = u;
        }
        total += push;
    }
}

/// Exact expected cost of the best adaptive policy, by expectimax over full
/// observation histories (no state merging).
pub fn stochastic_opt(inst: &StochasticInstance) -> Rational {
    fn go(inst: &StochasticInstance, scheduled: ElemSet, realized: ElemSet) -> Rational {
        let vs = inst.valuations();
        let open = (0..vs.len()).filter(|&i| !vs.is_covered(i, realized)).count();
        if open == 0 || scheduled.len() == inst.len() {
            return Rational::zero();
        }
        let mut best: Option<Rational> = None;
        for e in 0..inst.len() {
            if scheduled.contains(e) {
                continue;
            }
            let el = &inst.elements()[e];
            let mut v = Rational::from_integer((el.length as i128) * open as i128);
            for &(b, p) in &el.outcomes {
                v += p * go(inst, scheduled.with(e), realized.with(b));
            }
            if best.is_none_or(|x| v < x) {
                best = Some(v);
            }
        }
        best.expect("some element is unscheduled")
    }
    go(inst, ElemSet::EMPTY, ElemSet::EMPTY)
}

/// Every outcome vector of an instance with its probability.
pub fn all_outcomes(inst: &StochasticInstance) -> Vec<(Vec<usize>, Rational)> {
    let mut out = vec![(Vec::new(), Rational::one())];
    for el in inst.elements() {
        let mut next = Vec::new();
        for (vec, p) in &out {
            for &(b, q) in &el.outcomes {
                let mut v = vec.clone();
                v.push(b);
                next.push((v, *p * q));
            }
        }
        out = next;
    }
    out
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// A random tree on `n` vertices rooted at 0 with `groups` leaf groups.
pub fn random_raw_tree<R: Rng>(n: usize, groups: usize, r: &mut R) -> RawTree {
    let mut edges = Vec::new();
    let mut has_child = vec![false; n];
    for v in 1..n {
        let p = r.random_range(0..v);
        has_child[p] = true;
        edges.push((p, v, r.random_range(1..=6)));
    }
    let leaves: Vec<usize> = (1..n).filter(|&v| !has_child[v]).collect();
    let count = groups.clamp(1, leaves.len());
    let mut members = vec![Vec::new(); count];
    for (i, &v) in leaves.iter().enumerate() {
        let g = if i < count { i } else { r.random_range(0..count) };
        members[g].push(v);
    }
    let groups = members
        .into_iter()
        .map(|m| {
            let k = r.random_range(1..=m.len());
            (m, k)
        })
        .collect();
    RawTree {
        vertices: n,
        root: 0,
        edges,
        groups,
    }
}

/// Random edge fractions in steps of 1/`den` that never exceed the parent.
pub fn random_monotone_x<R: Rng>(tree: &GroupedTree, den: i128, r: &mut R) -> Vec<Rational> {
    let mut x = vec![Rational::zero(); tree.len()];
    for v in tree.preorder() {
        let Some(p) = tree.parent(v) else { continue };
        let cap = if tree.parent(p).is_some() { x[p] } else { Rational::one() };
        let steps = (cap * Rational::from_integer(den)).to_integer();
        x[v] = Rational::new(r.random_range(0..=steps), den);
    }
    x
}
