//! Stochastic set cover, shared filter evaluation and stochastic
//! generalized min-sum set cover as stochastic ranking instances.

use crate::error::{Error, Result};
use crate::instances::{TruncatedCoverage, TruncatedTerm, Valuation, ValuationSet};
use crate::rational::{int, rat, Rational};

use super::model::{StochElement, StochasticInstance};

/// One function `(1/|S|) sum_S min{1, |A ∩ S|}` over `domain` points.
pub fn reduce_ssc(domain: usize, sets: &[Vec<usize>], elements: Vec<StochElement>) -> Result<StochasticInstance> {
    if sets.is_empty() {
        return Err(Error::invalid("set cover needs at least one set"));
    }
    if let Some(i) = sets.iter().position(|s| s.is_empty()) {
        return Err(Error::invalid(format!("set {i} is empty")));
    }
    let vs = ValuationSet::with_epsilon(domain, vec![Valuation::coverage(sets)], rat(1, sets.len() as i128))?;
    StochasticInstance::new(elements, vs)
}

/// Domain point meaning filter `j` passed.
pub fn yes(j: usize) -> usize {
    2 * j
}

/// Domain point meaning filter `j` failed.
pub fn no(j: usize) -> usize {
    2 * j + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FilterObjective {
    /// One function for all queries: total cost to resolve every query.
    MinCost,
    /// One function per query: sum of query resolution times.
    Latency,
}

fn query_term(q: &[usize], weight: Rational) -> TruncatedTerm {
    let k = q.len() as i128;
    let mut elements: Vec<(usize, Rational)> = q.iter().map(|&j| (no(j), int(1))).collect();
    elements.extend(q.iter().map(|&j| (yes(j), rat(1, k))));
    TruncatedTerm::new(weight, elements)
}

/// Filters `j` pass with probability `selectivity[j]` and take `cost[j]`;
/// each query is the conjunction of its filters.
pub fn reduce_filter(
    queries: &[Vec<usize>],
    selectivity: &[Rational],
    cost: &[u64],
    objective: FilterObjective,
) -> Result<StochasticInstance> {
    let n = selectivity.len();
    if cost.len() != n {
        return Err(Error::invalid("selectivities and costs differ in length"));
    }
    if queries.is_empty() {
        return Err(Error::invalid("no queries"));
    }
    for (i, q) in queries.iter().enumerate() {
        if q.is_empty() || q.iter().any(|&j| j >= n) {
            return Err(Error::invalid(format!("query {i} is empty or names an unknown filter")));
        }
    }
    let elements = (0..n)
        .map(|j| StochElement::new(vec![(yes(j), selectivity[j]), (no(j), int(1) - selectivity[j])], cost[j]))
        .collect::<Result<Vec<_>>>()?;
    let widest = queries.iter().map(|q| q.len()).max().unwrap_or(1) as i128;
    let nq = queries.len() as i128;
    let (functions, eps) = match objective {
        FilterObjective::MinCost => {
            let terms = queries.iter().map(|q| query_term(q, rat(1, nq))).collect();
            (vec![Valuation::Truncated(TruncatedCoverage { terms })], rat(1, nq * widest))
        }
        FilterObjective::Latency => {
            let fs = queries
                .iter()
                .map(|q| {
                    Valuation::Truncated(TruncatedCoverage {
                        terms: vec![query_term(q, int(1))],
                    })
                })
                .collect();
            (fs, rat(1, widest))
        }
    };
    let vs = ValuationSet::with_epsilon(2 * n, functions, eps)?;
    StochasticInstance::new(elements, vs)
}

/// One function `min{1, |A ∩ S| / k(S)}` per set.
pub fn reduce_sgmssc(domain: usize, sets: &[(Vec<usize>, usize)], elements: Vec<StochElement>) -> Result<StochasticInstance> {
    if sets.is_empty() {
        return Err(Error::invalid("no sets"));
    }
    let mut kmax = 1;
    let mut functions = Vec::with_capacity(sets.len());
    for (i, (s, k)) in sets.iter().enumerate() {
        if *k == 0 || *k > s.len() {
            return Err(Error::invalid(format!("set {i} requirement {k} outside 1..={}", s.len())));
        }
        kmax = kmax.max(*k);
        functions.push(Valuation::single_group(s, *k));
    }
    let vs = ValuationSet::with_epsilon(domain, functions, rat(1, kmax as i128))?;
    StochasticInstance::new(elements, vs)
}
