//! Submodular orienteering: find a path from the root of length at most `B`
//! maximizing a monotone submodular function of its vertex set.
//!
//! Solvers implement [`SopSolver`] and declare a bicriteria guarantee
//! `(rho, sigma)`: value at least `OPT / rho` with length at most `sigma * B`.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{check_cap, Error, Result};
use crate::instances::{ElemSet, Metric, SetFunction};
use crate::rational::Rational;

pub const EXACT_MAX: usize = 9;
pub const RECURSIVE_GREEDY_MAX: usize = 64;

pub struct SopQuery<'a> {
    pub metric: &'a Metric,
    pub root: usize,
    pub valuation: &'a dyn SetFunction,
    pub budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guarantee {
    pub rho: u64,
    pub sigma: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SopResult {
    /// Simple path starting at the root.
    pub path: Vec<usize>,
    pub length: u64,
    pub value: Rational,
    pub guarantee: Guarantee,
}

impl SopResult {
    fn build(q: &SopQuery, path: Vec<usize>, guarantee: Guarantee) -> Self {
        let length = q.metric.path_length(&path);
        let value = q.valuation.value(path.iter().copied().collect());
        SopResult {
            path,
            length,
            value,
            guarantee,
        }
    }
}

pub trait SopSolver: Sync {
    fn name(&self) -> &'static str;
    /// Declared guarantee on a metric with `n` points.
    fn guarantee(&self, n: usize) -> Guarantee;
    fn solve(&self, q: &SopQuery) -> Result<SopResult>;
}

pub fn solver_by_name(name: &str) -> Result<Box<dyn SopSolver>> {
    match name {
        "exact" => Ok(Box::new(Exact)),
        "rg" => Ok(Box::new(RecursiveGreedy::default())),
        "greedy" => Ok(Box::new(BudgetGreedy)),
        other => Err(Error::Unknown {
            what: "SOP solver",
            name: other.to_string(),
        }),
    }
}

fn check_query(q: &SopQuery) -> Result<()> {
    if q.root >= q.metric.len() {
        return Err(Error::invalid("query root outside the metric"));
    }
    if q.valuation.ground_size() > q.metric.len() {
        return Err(Error::invalid("valuation ground set larger than the metric"));
    }
    Ok(())
}

/// Exhaustive search over simple paths, `|V| <= 9`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Exact;

impl SopSolver for Exact {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn guarantee(&self, _n: usize) -> Guarantee {
        Guarantee { rho: 1, sigma: 1 }
    }

    fn solve(&self, q: &SopQuery) -> Result<SopResult> {
        sop_exact(q)
    }
}

pub fn sop_exact(q: &SopQuery) -> Result<SopResult> {
    check_query(q)?;
    check_cap("exact orienteering", q.metric.len(), EXACT_MAX)?;
    let mut best_path = vec![q.root];
    let mut best = q.valuation.value(ElemSet::singleton(q.root));
    let mut path = vec![q.root];
    exact_dfs(q, &mut path, ElemSet::singleton(q.root), 0, &mut best, &mut best_path);
    Ok(SopResult::build(q, best_path, Guarantee { rho: 1, sigma: 1 }))
}

fn exact_dfs(
    q: &SopQuery,
    path: &mut Vec<usize>,
    seen: ElemSet,
    len: u64,
    best: &mut Rational,
    best_path: &mut Vec<usize>,
) {
    let last = *path.last().unwrap();
    for v in 0..q.metric.len() {
        if seen.contains(v) {
            continue;
        }
        let next_len = len + q.metric.d(last, v);
        if next_len > q.budget {
            continue;
        }
        let next = seen.with(v);
        path.push(v);
        let val = q.valuation.value(next);
        if val > *best {
            *best = val;
            *best_path = path.clone();
        }
        exact_dfs(q, path, next, next_len, best, best_path);
        path.pop();
    }
}

/// Recursive greedy: guesses the path midpoint and a budget split, solving
/// the first half and then the second half against the first half's
/// vertices. Depth defaults to `ceil(log2 |V|)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct RecursiveGreedy {
    pub depth: Option<u32>,
}

pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

impl SopSolver for RecursiveGreedy {
    fn name(&self) -> &'static str {
        "rg"
    }

    fn guarantee(&self, n: usize) -> Guarantee {
        let depth = self.depth.unwrap_or_else(|| ceil_log2(n));
        Guarantee {
            rho: u64::from(depth) + 1,
            sigma: 1,
        }
    }

    fn solve(&self, q: &SopQuery) -> Result<SopResult> {
        sop_recursive_greedy(q, self.depth)
    }
}

pub fn sop_recursive_greedy(q: &SopQuery, depth: Option<u32>) -> Result<SopResult> {
    check_query(q)?;
    let n = q.metric.len();
    check_cap("recursive greedy orienteering", n, RECURSIVE_GREEDY_MAX)?;
    let depth = depth.unwrap_or_else(|| ceil_log2(n));
    let guarantee = Guarantee {
        rho: u64::from(depth) + 1,
        sigma: 1,
    };
    let mut rg = Rg {
        q,
        memo: HashMap::new(),
    };
    let start = ElemSet::singleton(q.root);
    let mut best_path = vec![q.root];
    let mut best = q.valuation.value(start);
    for t in 0..n {
        if t == q.root || q.metric.d(q.root, t) > q.budget || !rg.useful(ElemSet::EMPTY, t) {
            continue;
        }
        if let Some(p) = rg.solve(q.root, t, q.budget, ElemSet::EMPTY, depth) {
            let val = q.valuation.value(p.set);
            if val > best {
                best = val;
                best_path = p.walk;
            }
        }
    }
    Ok(SopResult::build(q, shortcut(&best_path), guarantee))
}

/// Drops repeated visits; by the triangle inequality this never lengthens
/// the walk.
fn shortcut(walk: &[usize]) -> Vec<usize> {
    let mut seen = ElemSet::EMPTY;
    let mut out = Vec::with_capacity(walk.len());
    for &v in walk {
        if !seen.contains(v) {
            seen.insert(v);
            out.push(v);
        }
    }
    out
}

#[derive(Clone)]
struct Walk {
    walk: Vec<usize>,
    set: ElemSet,
    len: u64,
}

type Key = (usize, usize, u64, u64, u32);

struct Rg<'a, 'b> {
    q: &'a SopQuery<'b>,
    memo: HashMap<Key, Option<Walk>>,
}

impl Rg<'_, '_> {
    /// Whether `v` has positive marginal value on top of `x`.
    fn useful(&self, x: ElemSet, v: usize) -> bool {
        let g = self.q.valuation;
        g.value(x.with(v)) > g.value(x)
    }

    fn solve(&mut self, s: usize, t: usize, b: u64, x: ElemSet, i: u32) -> Option<Walk> {
        let key = (s, t, b, x.0, i);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let out = self.compute(s, t, b, x, i);
        self.memo.insert(key, out.clone());
        out
    }

    fn compute(&mut self, s: usize, t: usize, b: u64, x: ElemSet, i: u32) -> Option<Walk> {
        let m = self.q.metric;
        if m.d(s, t) > b {
            return None;
        }
        let g = self.q.valuation;
        let direct = if s == t { vec![s] } else { vec![s, t] };
        let mut best = Walk {
            set: direct.iter().copied().collect(),
            len: m.d(s, t),
            walk: direct,
        };
        if i == 0 {
            return Some(best);
        }
        let mut best_val = g.value(x.union(best.set));
        for v in 0..m.len() {
            if v == s || v == t || x.contains(v) || m.d(s, v) + m.d(v, t) > b || !self.useful(x, v) {
                continue;
            }
            let mut last_first: Option<Vec<usize>> = None;
            for b1 in m.d(s, v)..=b - m.d(v, t) {
                let Some(p1) = self.solve(s, v, b1, x, i - 1) else {
                    continue;
                };
                if last_first.as_ref() == Some(&p1.walk) {
                    continue;
                }
                last_first = Some(p1.walk.clone());
                let x2 = x.union(p1.set);
                let Some(p2) = self.solve(v, t, b - p1.len, x2, i - 1) else {
                    continue;
                };
                let set = p1.set.union(p2.set);
                let val = g.value(x.union(set));
                if val > best_val {
                    best_val = val;
                    let mut walk = p1.walk;
                    walk.extend_from_slice(&p2.walk[1..]);
                    best = Walk {
                        walk,
                        set,
                        len: p1.len + p2.len,
                    };
                }
            }
        }
        Some(best)
    }
}

/// Appends the vertex with the best marginal gain per unit of added distance
/// while the path stays within `2B`. Declares `(|V|, 2)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct BudgetGreedy;

impl SopSolver for BudgetGreedy {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn guarantee(&self, n: usize) -> Guarantee {
        Guarantee {
            rho: n.max(1) as u64,
            sigma: 2,
        }
    }

    fn solve(&self, q: &SopQuery) -> Result<SopResult> {
        sop_budget_greedy(q)
    }
}

pub fn sop_budget_greedy(q: &SopQuery) -> Result<SopResult> {
    check_query(q)?;
    let m = q.metric;
    let limit = q.budget.saturating_mul(2);
    let mut path = vec![q.root];
    let mut set = ElemSet::singleton(q.root);
    let mut len = 0u64;
    let mut val = q.valuation.value(set);
    loop {
        let last = *path.last().unwrap();
        // (vertex, gain, added distance)
        let mut best: Option<(usize, Rational, u64)> = None;
        for v in 0..m.len() {
            let add = m.d(last, v);
            if set.contains(v) || len + add > limit {
                continue;
            }
            let gain = q.valuation.value(set.with(v)) - val;
            if gain <= Rational::zero() {
                continue;
            }
            let better = match &best {
                None => true,
                // gain / add > bg / badd, with zero distance ranked first
                Some((_, bg, badd)) => match (add, *badd) {
                    (0, 0) => gain > *bg,
                    (0, _) => true,
                    (_, 0) => false,
                    _ => gain * Rational::from(*badd as i128) > *bg * Rational::from(add as i128),
                },
            };
            if better {
                best = Some((v, gain, add));
            }
        }
        let Some((v, gain, add)) = best else { break };
        path.push(v);
        set.insert(v);
        len += add;
        val += gain;
    }
    Ok(SopResult::build(q, path, BudgetGreedy.guarantee(m.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{Bound, Valuation};
    use crate::rational::int;

    fn line(n: usize) -> Metric {
        let dist = (0..n)
            .map(|i| (0..n).map(|j| (i as i64 - j as i64).unsigned_abs()).collect())
            .collect();
        Metric::new(dist, 0).unwrap()
    }

    #[test]
    fn zero_budget_returns_root() {
        let m = line(4);
        let f = Valuation::coverage(&[vec![0], vec![1], vec![2], vec![3]]);
        let g = Bound { f: &f, n: 4 };
        let q = SopQuery {
            metric: &m,
            root: 0,
            valuation: &g,
            budget: 0,
        };
        let r = sop_exact(&q).unwrap();
        assert_eq!(r.path, vec![0]);
        assert_eq!(r.value, g.value(ElemSet::singleton(0)));
    }

    #[test]
    fn unbounded_budget_covers_everything() {
        let m = line(5);
        let f = Valuation::coverage(&[vec![0], vec![1], vec![2], vec![3], vec![4]]);
        let g = Bound { f: &f, n: 5 };
        let q = SopQuery {
            metric: &m,
            root: 0,
            valuation: &g,
            budget: 100,
        };
        assert_eq!(sop_exact(&q).unwrap().value, int(1));
        assert_eq!(sop_recursive_greedy(&q, None).unwrap().value, int(1));
    }

    #[test]
    fn recursive_greedy_reaches_single_target() {
        let m = line(6);
        let f = Valuation::single_group(&[4], 1);
        let g = Bound { f: &f, n: 6 };
        let q = SopQuery {
            metric: &m,
            root: 0,
            valuation: &g,
            budget: 4,
        };
        let r = sop_recursive_greedy(&q, None).unwrap();
        assert_eq!(r.value, int(1));
        assert!(r.length <= 4);
        assert_eq!(r.path[0], 0);
    }

    #[test]
    fn budget_greedy_stays_within_twice_budget() {
        let m = line(6);
        let f = Valuation::coverage(&[vec![3], vec![5]]);
        let g = Bound { f: &f, n: 6 };
        let q = SopQuery {
            metric: &m,
            root: 0,
            valuation: &g,
            budget: 1,
        };
        assert_eq!(sop_budget_greedy(&q).unwrap().path, vec![0]);
        let q = SopQuery { budget: 2, ..q };
        let r = sop_budget_greedy(&q).unwrap();
        assert_eq!(r.path, vec![0, 3]);
        assert!(r.length <= 4);
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
    }
}
