//! Adaptive greedy for weighted stochastic submodular ranking.

use num_traits::Zero;

use crate::error::Result;
use crate::instances::ElemSet;
use crate::par::{self, Exec};
use crate::rational::{self, int, Rational};

use super::model::StochasticInstance;
use super::optimal::optimal_adaptive;
use super::policy::{mean_and_se, outcome_for, outcome_paths, run_policy, Policy, Run};

/// Expected residual gain of element `e` given the realized points, per
/// unit of length.
pub fn sto_residual_score(inst: &StochasticInstance, realized: ElemSet, e: usize) -> Rational {
    let res = inst.valuations().residual(realized);
    let el = &inst.elements()[e];
    let gain: Rational = el
        .outcomes
        .iter()
        .map(|&(b, p)| p * res.gain(ElemSet::singleton(b)))
        .sum();
    gain / int(el.length as i128)
}

/// Schedules the unscheduled element of largest score, smallest index on
/// ties.
#[derive(Clone, Copy, Debug, Default)]
pub struct GreedyPolicy;

impl Policy for GreedyPolicy {
    fn next(&self, inst: &StochasticInstance, scheduled: ElemSet, realized: ElemSet) -> Option<usize> {
        let mut best: Option<(usize, Rational)> = None;
        for e in ElemSet::full(inst.len()).difference(scheduled).iter() {
            let sc = sto_residual_score(inst, realized, e);
            if best.as_ref().is_none_or(|(_, b)| sc > *b) {
                best = Some((e, sc));
            }
        }
        best.map(|(e, _)| e)
    }
}

/// The greedy run when element `j` realizes `outcome[j]`.
pub fn alg_ag_sto(inst: &StochasticInstance, outcome: &[usize]) -> Run {
    run_policy(inst, &GreedyPolicy, outcome)
}

/// Expected number of functions uncovered at checkpoint `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct StoCheckpointRow {
    pub j: u32,
    /// Greedy checkpoint `ceil(8 alpha 2^j)`.
    pub time: u64,
    pub mean_r: f64,
    /// Mean and standard error of `|R_j| - |R_{j-1}| / 4`.
    pub mean_diff: f64,
    pub se_diff: f64,
    /// Exact `E|R*_j|` under the optimal policy.
    pub r_opt: f64,
    pub holds: bool,
}

/// Monte-Carlo check of `E|R_j| <= E|R_{j-1}| / 4 + E|R*_j|` with `R_j` the
/// greedy's functions uncovered before `ceil(8 alpha 2^j)` and `R*_j` the
/// optimal policy's uncovered before `2^j`. A row holds when the mean
/// difference is within `z` standard errors.
pub fn sto_recurrence_rows(inst: &StochasticInstance, samples: usize, seed: u64, z: f64, exec: Exec) -> Result<Vec<StoCheckpointRow>> {
    let opt = optimal_adaptive(inst)?;
    let opt_paths = outcome_paths(inst, &opt)?;
    let alpha = inst.valuations().alpha();
    let mult = alpha * int(8);
    let runs: Vec<Run> = par::map_range(exec, samples, |i| alg_ag_sto(inst, &outcome_for(inst, seed, i)));
    let horizon = inst.total_length();
    let uncovered = |times: &[u64], t: u64| times.iter().filter(|&&c| c >= t).count();
    let mut rows = Vec::new();
    let mut prev = vec![0usize; samples];
    for j in 0..63u32 {
        let time = rational::checkpoint(&mult, j);
        let now: Vec<usize> = runs.iter().map(|r| uncovered(&r.cover_times, time)).collect();
        let diffs: Vec<f64> = now.iter().zip(&prev).map(|(&a, &b)| a as f64 - b as f64 / 4.0).collect();
        let (mean_diff, se_diff) = mean_and_se(&diffs);
        let r_opt: Rational = opt_paths
            .iter()
            .map(|p| p.prob * int(uncovered(&p.run.cover_times, 1u64 << j) as i128))
            .fold(Rational::zero(), |a, b| a + b);
        let r_opt = rational::to_f64(&r_opt);
        let mean_r = now.iter().sum::<usize>() as f64 / samples as f64;
        rows.push(StoCheckpointRow {
            j,
            time,
            mean_r,
            mean_diff,
            se_diff,
            r_opt,
            holds: mean_diff <= r_opt + z * se_diff + 1e-12,
        });
        prev = now;
        if mean_r == 0.0 && time > horizon && (1u64 << j) > horizon {
            break;
        }
    }
    Ok(rows)
}
