//! Weighted stochastic submodular ranking: independent random elements with
//! lengths, scheduled adaptively.

pub mod greedy;
mod model;
pub mod optimal;
pub mod policy;
pub mod reductions;

pub use greedy::{alg_ag_sto, sto_recurrence_rows, sto_residual_score, GreedyPolicy, StoCheckpointRow};
pub use model::{StochElement, StochasticInstance};
pub use optimal::{optimal_adaptive, OptimalPolicy};
pub use policy::{
    decision_tree, evaluate_policy, mean_and_se, outcome_for, outcome_paths, run_policy, sample_outcome, EvalMode,
    OutcomePath, Policy, PolicyEvaluation, PolicyNode, Run,
};
pub use reductions::{no, reduce_filter, reduce_sgmssc, reduce_ssc, yes, FilterObjective};
