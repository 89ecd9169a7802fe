//! Adaptive residual greedy for submodular ranking, an exhaustive oracle,
//! and checks for the cover-time recurrence.

use num_traits::{One, Zero};

use crate::error::{check_cap, Error, Result};
use crate::instances::{ElemSet, ValuationSet};
use crate::rational::{self, int, Rational};

/// Default brute-force cap for [`brute_force_ranking`].
pub const BRUTE_FORCE_MAX: usize = 8;

/// A permutation of the ground set with the cover time of every function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ordering {
    pub order: Vec<usize>,
    /// Smallest prefix length covering each function; 0 if `f(∅) = 1`.
    pub cover_times: Vec<u64>,
    pub objective: u64,
}

impl Ordering {
    pub fn from_order(vs: &ValuationSet, order: Vec<usize>) -> Self {
        let cover_times = cover_times(vs, &order);
        let objective = cover_times.iter().sum();
        Ordering {
            order,
            cover_times,
            objective,
        }
    }

    /// `|R(t)|`: functions not covered before time `t`.
    pub fn uncovered_at(&self, t: u64) -> usize {
        uncovered_at(&self.cover_times, t)
    }
}

/// `#{i : cov_i >= t}`.
pub fn uncovered_at(cover_times: &[u64], t: u64) -> usize {
    cover_times.iter().filter(|&&c| c >= t).count()
}

/// Per-step record of a greedy run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankingTrace {
    /// `r_sizes[t] = |R(t)|` for `t = 0..=n+1`.
    pub r_sizes: Vec<usize>,
    /// Residual score of the element chosen at step `t + 1`.
    pub scores: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgRun {
    pub ordering: Ordering,
    pub trace: RankingTrace,
}

/// Cover times of all functions along `order`.
pub fn cover_times(vs: &ValuationSet, order: &[usize]) -> Vec<u64> {
    let mut times = vec![None; vs.len()];
    let mut s = ElemSet::EMPTY;
    for t in 0..=order.len() {
        if t > 0 {
            s.insert(order[t - 1]);
        }
        for (i, slot) in times.iter_mut().enumerate() {
            if slot.is_none() && vs.is_covered(i, s) {
                *slot = Some(t as u64);
            }
        }
    }
    times
        .into_iter()
        .map(|t| t.expect("f(V) = 1 covers every function"))
        .collect()
}

/// `f^S(e)`: normalized marginal gain of `e` summed over uncovered functions.
pub fn residual_score(vs: &ValuationSet, s: ElemSet, e: usize) -> Rational {
    vs.residual(s).gain(ElemSet::singleton(e))
}

/// Greedy by residual score; ties go to the smallest element index.
pub fn alg_ag(vs: &ValuationSet) -> AgRun {
    let n = vs.domain();
    let mut s = ElemSet::EMPTY;
    let mut order = Vec::with_capacity(n);
    let mut scores = Vec::with_capacity(n);
    for _ in 0..n {
        let res = vs.residual(s);
        let mut best: Option<(usize, Rational)> = None;
        for e in ElemSet::full(n).difference(s).iter() {
            let sc = res.gain(ElemSet::singleton(e));
            if best.as_ref().is_none_or(|(_, b)| sc > *b) {
                best = Some((e, sc));
            }
        }
        let (e, sc) = best.expect("an unscheduled element remains");
        s.insert(e);
        order.push(e);
        scores.push(sc);
    }
    let ordering = Ordering::from_order(vs, order);
    let r_sizes = (0..=n as u64 + 1).map(|t| ordering.uncovered_at(t)).collect();
    AgRun {
        ordering,
        trace: RankingTrace { r_sizes, scores },
    }
}

/// Exact minimizer of the total cover time over all orderings; among optimal
/// orderings the lexicographically smallest is returned.
pub fn brute_force_ranking(vs: &ValuationSet) -> Result<Ordering> {
    let n = vs.domain();
    check_cap("brute-force ranking", n, BRUTE_FORCE_MAX)?;
    let mut search = Search {
        vs,
        n,
        best: u64::MAX,
        best_order: Vec::new(),
        order: Vec::with_capacity(n),
    };
    let open: Vec<usize> = (0..vs.len()).filter(|&i| !vs.is_covered(i, ElemSet::EMPTY)).collect();
    search.dfs(ElemSet::EMPTY, &open, 0);
    Ok(Ordering::from_order(vs, search.best_order))
}

struct Search<'a> {
    vs: &'a ValuationSet,
    n: usize,
    best: u64,
    best_order: Vec<usize>,
    order: Vec<usize>,
}

impl Search<'_> {
    fn dfs(&mut self, s: ElemSet, open: &[usize], cost: u64) {
        let t = self.order.len() as u64;
        if open.is_empty() {
            if cost < self.best {
                self.best = cost;
                self.best_order = self.order.clone();
                self.best_order.extend(ElemSet::full(self.n).difference(s).iter());
            }
            return;
        }
        if cost + open.len() as u64 * (t + 1) >= self.best {
            return;
        }
        for e in ElemSet::full(self.n).difference(s).iter() {
            let next = s.with(e);
            let still: Vec<usize> = open.iter().copied().filter(|&i| !self.vs.is_covered(i, next)).collect();
            let add = (open.len() - still.len()) as u64 * (t + 1);
            self.order.push(e);
            self.dfs(next, &still, cost + add);
            self.order.pop();
        }
    }
}

/// `sum_k (f(S_k) - f(S_{k-1})) / (1 - f(S_{k-1}))` along a nested chain,
/// with `0/0 = 0`.
pub fn check_log_claim(f: impl Fn(ElemSet) -> Rational, chain: &[ElemSet]) -> Result<Rational> {
    let mut sum = Rational::zero();
    for k in 1..chain.len() {
        if !chain[k - 1].is_subset(chain[k]) {
            return Err(Error::NonNested(k));
        }
        let prev = f(chain[k - 1]);
        if prev < Rational::one() {
            sum += (f(chain[k]) - prev) / (Rational::one() - prev);
        }
    }
    Ok(sum)
}

/// One checkpoint of the recurrence `|R_j| <= |R_{j-1}|/4 + |R*_j|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckpointRow {
    pub j: u32,
    pub time: u64,
    pub r: usize,
    pub r_opt: usize,
    pub holds: bool,
}

/// Evaluates the recurrence with `R_j = R(ceil(mult * alpha * 2^j))`,
/// `R*_j = R*(2^j)` and `R_{-1} = ∅`, up to the first `j` where both sides
/// have emptied.
pub fn recurrence_rows(alg: &[u64], opt: &[u64], mult: &Rational) -> Vec<CheckpointRow> {
    let mut rows = Vec::new();
    let mut prev = 0usize;
    let horizon = alg.iter().chain(opt).copied().max().unwrap_or(0);
    for j in 0..63u32 {
        let time = rational::checkpoint(mult, j);
        let r = uncovered_at(alg, time);
        let r_opt = uncovered_at(opt, 1u64 << j);
        let holds = 4 * r <= prev + 4 * r_opt;
        rows.push(CheckpointRow {
            j,
            time,
            r,
            r_opt,
            holds,
        });
        prev = r;
        if r == 0 && (1u64 << j) > horizon {
            break;
        }
    }
    rows
}

/// Checks the recurrence for a greedy run against an optimal ordering with
/// checkpoint times `8 * alpha * 2^j`.
pub fn check_recurrence(trace: &Ordering, opt: &Ordering, alpha: &Rational) -> bool {
    check_recurrence_with(trace, opt, alpha, 8)
}

pub fn check_recurrence_with(trace: &Ordering, opt: &Ordering, alpha: &Rational, mult: i128) -> bool {
    recurrence_rows(&trace.cover_times, &opt.cover_times, &(int(mult) * alpha))
        .iter()
        .all(|row| row.holds)
}
