//! Optimal adaptive policies of small instances by backward induction.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::Result;
use crate::instances::ElemSet;
use crate::rational::{int, Rational};

use super::model::StochasticInstance;
use super::policy::{check_exact_caps, Policy};

/// Optimal choice per reachable state `(scheduled, realized)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalPolicy {
    choice: HashMap<(u64, u64), usize>,
    /// Minimum expected total cover time.
    pub cost: Rational,
}

impl OptimalPolicy {
    pub fn states(&self) -> usize {
        self.choice.len()
    }
}

impl Policy for OptimalPolicy {
    fn next(&self, _inst: &StochasticInstance, scheduled: ElemSet, realized: ElemSet) -> Option<usize> {
        self.choice.get(&(scheduled.0, realized.0)).copied()
    }
}

struct Induction<'a> {
    inst: &'a StochasticInstance,
    value: HashMap<(u64, u64), Rational>,
    choice: HashMap<(u64, u64), usize>,
}

impl Induction<'_> {
    /// Expected remaining cost, charging each step its length times the
    /// number of functions still uncovered when it starts.
    fn solve(&mut self, scheduled: ElemSet, realized: ElemSet) -> Rational {
        let open = self.inst.valuations().uncovered(realized);
        let n = self.inst.len();
        if open == 0 || scheduled.len() == n {
            return Rational::zero();
        }
        if let Some(v) = self.value.get(&(scheduled.0, realized.0)) {
            return *v;
        }
        let mut best: Option<(usize, Rational)> = None;
        for e in ElemSet::full(n).difference(scheduled).iter() {
            let mut s = scheduled;
            s.insert(e);
            let mut v = int(self.inst.length(e) as i128 * open as i128);
            for &(b, p) in &self.inst.elements()[e].outcomes {
                let mut r = realized;
                r.insert(b);
                v += p * self.solve(s, r);
            }
            if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
                best = Some((e, v));
            }
        }
        let (e, v) = best.expect("an element remains");
        self.value.insert((scheduled.0, realized.0), v);
        self.choice.insert((scheduled.0, realized.0), e);
        v
    }
}

/// Minimum expected total cover time over all adaptive policies, with the
/// smallest element index among optimal choices.
pub fn optimal_adaptive(inst: &StochasticInstance) -> Result<OptimalPolicy> {
    check_exact_caps(inst)?;
    let mut ind = Induction {
        inst,
        value: HashMap::new(),
        choice: HashMap::new(),
    };
    let cost = ind.solve(ElemSet::EMPTY, ElemSet::EMPTY);
    // functions covered by the empty set cost nothing, the step charges
    // count every other function until it is covered
    Ok(OptimalPolicy {
        choice: ind.choice,
        cost,
    })
}
