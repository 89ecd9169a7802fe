//! Latency covering Steiner tree: LP relaxation with knapsack-cover rows,
//! cut-based separation, randomized rounding and tree embeddings.

pub mod brute;
pub mod flow;
pub mod frt;
pub mod krs;
pub mod lp;
pub mod mincut;
pub mod rounding;
pub mod scalar;
pub mod separation;
pub mod simplex;

pub use brute::{brute_force_lcst, tree_path};
pub use flow::{contracted_edges, flow_adjust, krs_violation, FlowAdjusted};
pub use frt::{frt_embed, stretch_warning, EmbeddedTree, MetricTour};
pub use krs::{krs_round, sample_rng};
pub use lp::{check_solution, integral_point, level_count, lp_objective, solve_lp_lcst, LpOptions, LpSolution};
pub use mincut::{min_cut_with_exceptions, CutTree, MinCut};
pub use rounding::{alg_lcst, plan_level, round_level, LcstRun, LevelLog, LevelPlan, LevelRound, RoundingParams, TreeTour};
pub use scalar::Scalar;
pub use separation::{separate_kc, KcCut, KcSeparation};
