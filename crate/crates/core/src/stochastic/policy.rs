//! Adaptive policies, their runs on outcome vectors and their evaluation.

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{check_cap, Error, Result};
use crate::instances::ElemSet;
use crate::lcst::sample_rng;
use crate::par::{self, Exec};
use crate::rational::{self, int, Rational};

use super::model::StochasticInstance;

/// Element and support caps for exhaustive outcome enumeration.
pub const EXACT_ELEMENTS_MAX: usize = 4;
pub const EXACT_SUPPORT_MAX: usize = 3;

/// Chooses the next element from the scheduled elements and the realized
/// domain points. Only asked while some function is uncovered and some
/// element is unscheduled; `None` stops early.
pub trait Policy: Sync {
    fn next(&self, inst: &StochasticInstance, scheduled: ElemSet, realized: ElemSet) -> Option<usize>;
}

/// One execution of a policy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub schedule: Vec<usize>,
    /// Completion time of the element covering each function; the total
    /// length for functions never covered.
    pub cover_times: Vec<u64>,
    pub cost: u64,
}

impl Run {
    /// The schedule followed by the unscheduled elements in index order.
    pub fn complete_order(&self, n: usize) -> Vec<usize> {
        let mut order = self.schedule.clone();
        order.extend((0..n).filter(|e| !self.schedule.contains(e)));
        order
    }
}

struct Tracker {
    times: Vec<Option<u64>>,
}

impl Tracker {
    fn new(inst: &StochasticInstance) -> Self {
        let vs = inst.valuations();
        Tracker {
            times: (0..vs.len())
                .map(|i| vs.is_covered(i, ElemSet::EMPTY).then_some(0))
                .collect(),
        }
    }

    fn observe(&mut self, inst: &StochasticInstance, realized: ElemSet, t: u64) {
        for (i, slot) in self.times.iter_mut().enumerate() {
            if slot.is_none() && inst.valuations().is_covered(i, realized) {
                *slot = Some(t);
            }
        }
    }

    fn finish(self, inst: &StochasticInstance, schedule: Vec<usize>) -> Run {
        let total = inst.total_length();
        let cover_times: Vec<u64> = self.times.into_iter().map(|t| t.unwrap_or(total)).collect();
        Run {
            schedule,
            cost: cover_times.iter().sum(),
            cover_times,
        }
    }
}

/// Runs `policy` when element `j` realizes `outcome[j]`.
pub fn run_policy(inst: &StochasticInstance, policy: &dyn Policy, outcome: &[usize]) -> Run {
    let n = inst.len();
    let mut tracker = Tracker::new(inst);
    let mut scheduled = ElemSet::EMPTY;
    let mut realized = ElemSet::EMPTY;
    let mut schedule = Vec::new();
    let mut t = 0;
    while schedule.len() < n && inst.valuations().uncovered(realized) > 0 {
        let Some(e) = policy.next(inst, scheduled, realized) else {
            break;
        };
        scheduled.insert(e);
        realized.insert(outcome[e]);
        schedule.push(e);
        t += inst.length(e);
        tracker.observe(inst, realized, t);
    }
    tracker.finish(inst, schedule)
}

/// A run together with its probability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomePath {
    pub prob: Rational,
    pub run: Run,
}

pub(crate) fn check_exact_caps(inst: &StochasticInstance) -> Result<()> {
    check_cap("stochastic elements", inst.len(), EXACT_ELEMENTS_MAX)?;
    let support = inst.elements().iter().map(|e| e.support()).max().unwrap_or(0);
    check_cap("outcome support", support, EXACT_SUPPORT_MAX)
}

/// Every distinct execution of `policy` with its probability.
pub fn outcome_paths(inst: &StochasticInstance, policy: &dyn Policy) -> Result<Vec<OutcomePath>> {
    check_exact_caps(inst)?;
    let mut out = Vec::new();
    let state = PathState {
        scheduled: ElemSet::EMPTY,
        realized: ElemSet::EMPTY,
        t: 0,
        prob: Rational::one(),
        schedule: Vec::new(),
        times: Tracker::new(inst).times,
    };
    expand(inst, policy, state, &mut out);
    Ok(out)
}

#[derive(Clone)]
struct PathState {
    scheduled: ElemSet,
    realized: ElemSet,
    t: u64,
    prob: Rational,
    schedule: Vec<usize>,
    times: Vec<Option<u64>>,
}

fn expand(inst: &StochasticInstance, policy: &dyn Policy, st: PathState, out: &mut Vec<OutcomePath>) {
    let done = st.schedule.len() == inst.len() || inst.valuations().uncovered(st.realized) == 0;
    let next = if done {
        None
    } else {
        policy.next(inst, st.scheduled, st.realized)
    };
    let Some(e) = next else {
        let run = Tracker { times: st.times }.finish(inst, st.schedule);
        out.push(OutcomePath { prob: st.prob, run });
        return;
    };
    for &(b, p) in &inst.elements()[e].outcomes {
        let mut s = st.clone();
        s.scheduled.insert(e);
        s.realized.insert(b);
        s.schedule.push(e);
        s.t += inst.length(e);
        s.prob *= p;
        let mut tr = Tracker { times: s.times };
        tr.observe(inst, s.realized, s.t);
        s.times = tr.times;
        expand(inst, policy, s, out);
    }
}

/// A policy unfolded into a decision tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolicyNode {
    Stop,
    Schedule {
        element: usize,
        /// One child per outcome of `element`, keyed by domain point.
        branches: Vec<(usize, PolicyNode)>,
    },
}

impl PolicyNode {
    /// Number of `Schedule` nodes.
    pub fn size(&self) -> usize {
        match self {
            PolicyNode::Stop => 0,
            PolicyNode::Schedule { branches, .. } => 1 + branches.iter().map(|(_, c)| c.size()).sum::<usize>(),
        }
    }

    /// No element repeats on a root-to-leaf path and every node branches
    /// over the full support of its element.
    pub fn is_well_formed(&self, inst: &StochasticInstance) -> bool {
        fn walk(node: &PolicyNode, inst: &StochasticInstance, used: ElemSet) -> bool {
            match node {
                PolicyNode::Stop => true,
                PolicyNode::Schedule { element, branches } => {
                    let e = *element;
                    if e >= inst.len() || used.contains(e) {
                        return false;
                    }
                    let keys: Vec<usize> = branches.iter().map(|(b, _)| *b).collect();
                    let support: Vec<usize> = inst.elements()[e].outcomes.iter().map(|(b, _)| *b).collect();
                    let mut next = used;
                    next.insert(e);
                    keys == support && branches.iter().all(|(_, c)| walk(c, inst, next))
                }
            }
        }
        walk(self, inst, ElemSet::EMPTY)
    }
}

/// Unfolds `policy` into its decision tree.
pub fn decision_tree(inst: &StochasticInstance, policy: &dyn Policy) -> Result<PolicyNode> {
    check_exact_caps(inst)?;
    Ok(unfold(inst, policy, ElemSet::EMPTY, ElemSet::EMPTY, 0))
}

fn unfold(inst: &StochasticInstance, policy: &dyn Policy, scheduled: ElemSet, realized: ElemSet, depth: usize) -> PolicyNode {
    if depth == inst.len() || inst.valuations().uncovered(realized) == 0 {
        return PolicyNode::Stop;
    }
    match policy.next(inst, scheduled, realized) {
        None => PolicyNode::Stop,
        Some(e) => {
            let mut s = scheduled;
            s.insert(e);
            let branches = inst.elements()[e]
                .outcomes
                .iter()
                .map(|&(b, _)| {
                    let mut r = realized;
                    r.insert(b);
                    (b, unfold(inst, policy, s, r, depth + 1))
                })
                .collect();
            PolicyNode::Schedule { element: e, branches }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMode {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolicyEvaluation {
    /// Expected total cover time (sample mean in Monte-Carlo mode).
    pub expected: f64,
    /// The exact expectation, in exact mode.
    pub exact: Option<Rational>,
    pub std_error: f64,
    pub per_function: Vec<f64>,
    /// Cover time charged to a function that is never covered.
    pub uncovered_cost: u64,
    pub samples: usize,
}

/// Draws one outcome vector.
pub fn sample_outcome<R: Rng>(inst: &StochasticInstance, r: &mut R) -> Vec<usize> {
    inst.elements()
        .iter()
        .map(|el| {
            let u: f64 = r.random();
            let mut acc = 0.0;
            for &(b, p) in &el.outcomes {
                acc += rational::to_f64(&p);
                if u < acc {
                    return b;
                }
            }
            el.outcomes.last().expect("distributions are non-empty").0
        })
        .collect()
}

/// Outcome vector of sample `i` of a run seeded with `seed`.
pub fn outcome_for(inst: &StochasticInstance, seed: u64, i: usize) -> Vec<usize> {
    sample_outcome(inst, &mut sample_rng(seed, i as u64))
}

pub fn evaluate_policy(inst: &StochasticInstance, policy: &dyn Policy, mode: EvalMode, exec: Exec) -> Result<PolicyEvaluation> {
    let m = inst.valuations().len();
    match mode {
        EvalMode::Exact => {
            let paths = outcome_paths(inst, policy)?;
            let mut exact = Rational::zero();
            let mut per = vec![Rational::zero(); m];
            for p in &paths {
                exact += p.prob * int(p.run.cost as i128);
                for (acc, &t) in per.iter_mut().zip(&p.run.cover_times) {
                    *acc += p.prob * int(t as i128);
                }
            }
            Ok(PolicyEvaluation {
                expected: rational::to_f64(&exact),
                exact: Some(exact),
                std_error: 0.0,
                per_function: per.iter().map(rational::to_f64).collect(),
                uncovered_cost: inst.total_length(),
                samples: paths.len(),
            })
        }
        EvalMode::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::invalid("Monte-Carlo evaluation needs at least one sample"));
            }
            let runs = par::map_range(exec, samples, |i| run_policy(inst, policy, &outcome_for(inst, seed, i)));
            let costs: Vec<f64> = runs.iter().map(|r| r.cost as f64).collect();
            let (mean, se) = mean_and_se(&costs);
            let per_function = (0..m)
                .map(|i| runs.iter().map(|r| r.cover_times[i] as f64).sum::<f64>() / samples as f64)
                .collect();
            Ok(PolicyEvaluation {
                expected: mean,
                exact: None,
                std_error: se,
                per_function,
                uncovered_cost: inst.total_length(),
                samples,
            })
        }
    }
}

/// Sample mean and standard error of the mean.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
