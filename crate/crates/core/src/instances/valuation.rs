//! Monotone submodular valuation oracles.
//!
//! Every closed-form kind (coverage, multi-coverage, single group, the filter
//! valuations) is a weighted truncated coverage function
//!
//! ```text
//! f(S) = sum_t c_t * min{ 1, sum_{e in S} w_{t,e} }
//! ```
//!
//! Tabulated functions over at most 12 elements are [`ExplicitTable`]s.

use num_traits::{One, Zero};

use super::set::ElemSet;
use crate::error::{check_cap, Error, Result};
use crate::rational::{self, int, rat, Rational};

pub const EXPLICIT_MAX: usize = 12;

/// A set function on subsets of `0..ground_size()`.
pub trait SetFunction: Sync {
    fn ground_size(&self) -> usize;
    fn value(&self, s: ElemSet) -> Rational;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedTerm {
    pub weight: Rational,
    /// `(element, w)` pairs sorted by element.
    pub elements: Vec<(usize, Rational)>,
    mask: ElemSet,
    uniform: Option<Rational>,
}

impl TruncatedTerm {
    pub fn new(weight: Rational, mut elements: Vec<(usize, Rational)>) -> Self {
        elements.sort_by_key(|&(e, _)| e);
        elements.dedup_by_key(|p| p.0);
        let mask = elements.iter().map(|&(e, _)| e).collect();
        let uniform = match elements.first() {
            Some((_, w)) if elements.iter().all(|(_, v)| v == w) => Some(*w),
            _ => None,
        };
        TruncatedTerm {
            weight,
            elements,
            mask,
            uniform,
        }
    }

    fn value(&self, s: ElemSet) -> Rational {
        let hit = self.mask.intersection(s);
        if hit.is_empty() {
            return Rational::zero();
        }
        let sum = match self.uniform {
            Some(w) => w * int(hit.len() as i128),
            None => self
                .elements
                .iter()
                .filter(|(e, _)| hit.contains(*e))
                .map(|(_, w)| *w)
                .sum(),
        };
        self.weight * sum.min(Rational::one())
    }

    /// Smallest nonzero increase of this term.
    fn granularity(&self) -> Rational {
        let g = self
            .elements
            .iter()
            .fold(Rational::one(), |acc, (_, w)| rational::gcd(&acc, w));
        self.weight * g
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedCoverage {
    pub terms: Vec<TruncatedTerm>,
}

impl TruncatedCoverage {
    /// `(1/N) * sum_i min{|g_i ∩ S|, 1}`.
    pub fn coverage(groups: &[Vec<usize>]) -> Self {
        let reqs = vec![1; groups.len()];
        Self::multi_coverage(groups, &reqs)
    }

    /// `(1/N) * sum_i min{|g_i ∩ S| / k_i, 1}`.
    pub fn multi_coverage(groups: &[Vec<usize>], reqs: &[usize]) -> Self {
        let n = groups.len() as i128;
        let terms = groups
            .iter()
            .zip(reqs)
            .map(|(g, &k)| {
                TruncatedTerm::new(
                    rat(1, n),
                    g.iter().map(|&e| (e, rat(1, k as i128))).collect(),
                )
            })
            .collect();
        TruncatedCoverage { terms }
    }

    /// `min{|g ∩ S| / k, 1}`.
    pub fn single_group(group: &[usize], req: usize) -> Self {
        Self::multi_coverage(&[group.to_vec()], &[req])
    }

    pub fn value(&self, s: ElemSet) -> Rational {
        self.terms.iter().map(|t| t.value(s)).sum()
    }

    pub fn support(&self) -> ElemSet {
        self.terms
            .iter()
            .fold(ElemSet::EMPTY, |acc, t| acc.union(t.mask))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitTable {
    n: usize,
    values: Vec<Rational>,
}

impl ExplicitTable {
    /// `values[mask]` is the value of the subset encoded by `mask`.
    pub fn new(n: usize, values: Vec<Rational>) -> Result<Self> {
        check_cap("explicit valuation", n, EXPLICIT_MAX)?;
        if values.len() != 1usize << n {
            return Err(Error::invalid(format!(
                "explicit table over {n} elements needs {} values, got {}",
                1usize << n,
                values.len()
            )));
        }
        Ok(ExplicitTable { n, values })
    }

    /// Tabulates any set function over at most 12 elements.
    pub fn tabulate(f: &dyn SetFunction) -> Result<Self> {
        let n = f.ground_size();
        check_cap("explicit valuation", n, EXPLICIT_MAX)?;
        let values = ElemSet::full(n).subsets().map(|s| f.value(s)).collect();
        Self::new(n, values)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, s: ElemSet) -> Rational {
        self.values[(s.0 & ElemSet::full(self.n).0) as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Valuation {
    Truncated(TruncatedCoverage),
    Explicit(ExplicitTable),
}

impl Valuation {
    pub fn coverage(groups: &[Vec<usize>]) -> Self {
        Valuation::Truncated(TruncatedCoverage::coverage(groups))
    }

    pub fn multi_coverage(groups: &[Vec<usize>], reqs: &[usize]) -> Self {
        Valuation::Truncated(TruncatedCoverage::multi_coverage(groups, reqs))
    }

    pub fn single_group(group: &[usize], req: usize) -> Self {
        Valuation::Truncated(TruncatedCoverage::single_group(group, req))
    }

    pub fn value(&self, s: ElemSet) -> Rational {
        match self {
            Valuation::Truncated(t) => t.value(s),
            Valuation::Explicit(t) => t.value(s),
        }
    }

    /// Smallest nonzero marginal increase: closed form for truncated kinds,
    /// exhaustive for explicit tables. `None` when the function is constant.
    pub fn epsilon(&self) -> Option<Rational> {
        match self {
            Valuation::Truncated(t) => t
                .terms
                .iter()
                .filter(|term| !term.elements.is_empty() && !term.weight.is_zero())
                .map(|term| term.granularity())
                .min(),
            Valuation::Explicit(t) => exhaustive_epsilon(t),
        }
    }
}

fn exhaustive_epsilon(t: &ExplicitTable) -> Option<Rational> {
    let full = ElemSet::full(t.n);
    let mut best: Option<Rational> = None;
    for s in full.subsets() {
        let base = t.value(s);
        for e in full.difference(s).iter() {
            let gain = t.value(s.with(e)) - base;
            if gain > Rational::zero() && best.is_none_or(|b| gain < b) {
                best = Some(gain);
            }
        }
    }
    best
}

/// A valuation viewed over an explicit ground-set size.
pub struct Bound<'a> {
    pub f: &'a Valuation,
    pub n: usize,
}

impl SetFunction for Bound<'_> {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, s: ElemSet) -> Rational {
        self.f.value(s)
    }
}

/// Exhaustive monotonicity and submodularity check over `n <= 12` elements.
///
/// Uses the local form `f(S+a) + f(S+b) >= f(S+a+b) + f(S)`, which is
/// equivalent to the pairwise lattice inequality over all `A, B`.
pub fn check_submodular(f: &dyn SetFunction, n: usize) -> Result<bool> {
    check_cap("submodularity check", n, EXPLICIT_MAX)?;
    let full = ElemSet::full(n);
    let table: Vec<Rational> = full.subsets().map(|s| f.value(s)).collect();
    let v = |s: ElemSet| table[s.0 as usize];
    for s in full.subsets() {
        let fs = v(s);
        let rest = full.difference(s);
        for a in rest.iter() {
            let fa = v(s.with(a));
            if fa < fs {
                return Ok(false);
            }
            for b in rest.iter().filter(|&b| b > a) {
                if fa + v(s.with(b)) < v(s.with(a).with(b)) + fs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// A collection of valuations over a shared ground set, with its epsilon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationSet {
    domain: usize,
    functions: Vec<Valuation>,
    epsilon: Rational,
}

impl ValuationSet {
    /// Builds the set and computes epsilon from the functions.
    pub fn new(domain: usize, functions: Vec<Valuation>) -> Result<Self> {
        let eps = compute_epsilon_of(&functions);
        Self::with_epsilon(domain, functions, eps)
    }

    pub fn with_epsilon(domain: usize, functions: Vec<Valuation>, epsilon: Rational) -> Result<Self> {
        if domain > super::set::MAX_ELEMENTS {
            return Err(Error::invalid(format!("ground set of {domain} elements exceeds 64")));
        }
        if epsilon <= Rational::zero() || epsilon > Rational::one() {
            return Err(Error::invalid(format!("epsilon {} outside (0, 1]", rational::fmt(&epsilon))));
        }
        let full = ElemSet::full(domain);
        for (i, f) in functions.iter().enumerate() {
            if let Valuation::Explicit(t) = f {
                if t.len() != domain {
                    return Err(Error::invalid(format!(
                        "function {i} tabulated over {} elements, domain is {domain}",
                        t.len()
                    )));
                }
            }
            if let Valuation::Truncated(t) = f {
                if !t.support().is_subset(full) {
                    return Err(Error::invalid(format!("function {i} references elements outside the domain")));
                }
            }
            if f.value(full) != Rational::one() {
                return Err(Error::invalid(format!(
                    "function {i} has f(V) = {}, expected 1",
                    rational::fmt(&f.value(full))
                )));
            }
        }
        Ok(ValuationSet {
            domain,
            functions,
            epsilon,
        })
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn functions(&self) -> &[Valuation] {
        &self.functions
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn epsilon(&self) -> Rational {
        self.epsilon
    }

    /// `1 + ln(1/eps)`, rounded up at 1e-9.
    pub fn alpha(&self) -> Rational {
        rational::alpha(&self.epsilon)
    }

    pub fn value(&self, i: usize, s: ElemSet) -> Rational {
        self.functions[i].value(s)
    }

    pub fn is_covered(&self, i: usize, s: ElemSet) -> bool {
        self.value(i, s) == Rational::one()
    }

    pub fn all_covered(&self, s: ElemSet) -> bool {
        (0..self.len()).all(|i| self.is_covered(i, s))
    }

    pub fn uncovered(&self, s: ElemSet) -> usize {
        (0..self.len()).filter(|&i| !self.is_covered(i, s)).count()
    }

    /// Residual coverage `f^S` anchored at `base`.
    pub fn residual(&self, base: ElemSet) -> Residual<'_> {
        let open = self
            .functions
            .iter()
            .enumerate()
            .filter_map(|(i, f)| {
                let v = f.value(base);
                (v < Rational::one()).then(|| (i, v, Rational::one() - v))
            })
            .collect();
        Residual {
            vs: self,
            base,
            open,
        }
    }
}

/// Smallest nonzero marginal over all functions of the set.
pub fn compute_epsilon_of(functions: &[Valuation]) -> Rational {
    functions
        .iter()
        .filter_map(Valuation::epsilon)
        .min()
        .unwrap_or_else(Rational::one)
}

pub fn compute_epsilon(vs: &ValuationSet) -> Rational {
    compute_epsilon_of(vs.functions())
}

/// `f^S(T) = sum_{i: f_i(S) < 1} (f_i(S ∪ T) - f_i(S)) / (1 - f_i(S))`.
pub struct Residual<'a> {
    vs: &'a ValuationSet,
    base: ElemSet,
    open: Vec<(usize, Rational, Rational)>,
}

impl Residual<'_> {
    pub fn base(&self) -> ElemSet {
        self.base
    }

    /// Indices of functions not yet covered by the base set.
    pub fn open(&self) -> impl Iterator<Item = usize> + '_ {
        self.open.iter().map(|&(i, _, _)| i)
    }

    pub fn is_saturated(&self) -> bool {
        self.open.is_empty()
    }

    pub fn gain(&self, t: ElemSet) -> Rational {
        let s = self.base.union(t);
        if s == self.base {
            return Rational::zero();
        }
        self.open
            .iter()
            .map(|&(i, v, deficit)| (self.vs.value(i, s) - v) / deficit)
            .sum()
    }
}

impl SetFunction for Residual<'_> {
    fn ground_size(&self) -> usize {
        self.vs.domain()
    }

    fn value(&self, s: ElemSet) -> Rational {
        self.gain(s)
    }
}
