//! Level-by-level rounding of an LP solution into a latency tour.

use crate::error::Result;
use crate::instances::GroupedTree;
use crate::par::{self, Exec};

use super::flow::{contracted_edges, flow_adjust, FlowAdjusted};
use super::krs::{krs_round_unchecked, sample_rng};
use super::lp::LpSolution;

/// Tolerance for the coverage property of the flow step.
pub const FLOW_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoundingParams {
    /// Samples per level are `ceil(repeat * (3 + log2 g_max))`.
    pub repeat: f64,
    /// A level is kept when its tree weighs at most
    /// `weight * (3 + log2 g_max) * 2^l`.
    pub weight: f64,
    pub exec: Exec,
}

impl Default for RoundingParams {
    fn default() -> Self {
        RoundingParams {
            repeat: 6.0,
            weight: 192.0,
            exec: Exec::Parallel,
        }
    }
}

impl RoundingParams {
    fn log_term(tree: &GroupedTree) -> f64 {
        3.0 + (tree.g_max().max(1) as f64).log2()
    }

    pub fn samples(&self, tree: &GroupedTree) -> usize {
        (self.repeat * Self::log_term(tree)).ceil() as usize
    }

    pub fn weight_limit(&self, tree: &GroupedTree, level: usize) -> f64 {
        self.weight * Self::log_term(tree) * (1u64 << level) as f64
    }
}

/// Marginals for one level.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelPlan {
    pub level: usize,
    /// `Ē`, indexed by edge.
    pub contracted: Vec<bool>,
    pub adjusted: FlowAdjusted,
    /// `z = min(4 x̃, 1)` clamped to the parent edge; 1 on `Ē`.
    pub z: Vec<f64>,
}

pub fn plan_level(tree: &GroupedTree, sol: &LpSolution, level: usize) -> Result<LevelPlan> {
    let x = &sol.x[level];
    let contracted = contracted_edges(tree, x);
    let adjusted = flow_adjust(tree, x, &sol.y[level], &contracted, FLOW_TOL)?;
    let mut z = vec![0.0; tree.len()];
    for v in tree.preorder() {
        if v == tree.root() {
            continue;
        }
        z[v] = if contracted[v] {
            1.0
        } else {
            let own = (4.0 * adjusted.x[v]).clamp(0.0, 1.0);
            match tree.parent_edge(v) {
                Some(pe) => own.min(z[pe]),
                None => own,
            }
        };
    }
    Ok(LevelPlan {
        level,
        contracted,
        adjusted,
        z,
    })
}

/// Draws sample `i` of a level.
pub fn sample_tree(tree: &GroupedTree, plan: &LevelPlan, seed: u64, i: usize) -> Vec<bool> {
    let stream = ((plan.level as u64) << 32) | i as u64;
    krs_round_unchecked(tree, &plan.z, &mut sample_rng(seed, stream))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelRound {
    pub level: usize,
    /// Union of `Ē` and the samples, indexed by edge.
    pub selected: Vec<bool>,
    /// Total edge weight of `selected`.
    pub weight: u64,
    pub accepted: bool,
    /// Whether the union tree covers each group.
    pub covers: Vec<bool>,
}

/// Builds the tree of one level from `samples` KRS draws.
pub fn round_level(tree: &GroupedTree, plan: &LevelPlan, samples: usize, seed: u64, params: &RoundingParams) -> LevelRound {
    let draws = par::map_range(params.exec, samples, |i| sample_tree(tree, plan, seed, i));
    let mut selected = plan.contracted.clone();
    for d in &draws {
        for (s, &b) in selected.iter_mut().zip(d) {
            *s |= b;
        }
    }
    let weight = tree.edges().filter(|&e| selected[e]).map(|e| tree.weight(e)).sum();
    let covers = tree
        .groups()
        .iter()
        .map(|g| g.leaves.iter().filter(|&&j| selected[j]).count() >= g.requirement)
        .collect();
    LevelRound {
        level: plan.level,
        accepted: weight as f64 <= params.weight_limit(tree, plan.level),
        selected,
        weight,
        covers,
    }
}

/// A walk from the root over a tree with group cover times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeTour {
    pub walk: Vec<usize>,
    pub cover_times: Vec<u64>,
    pub objective: u64,
}

impl TreeTour {
    /// `None` when some group is never covered.
    pub fn from_walk(tree: &GroupedTree, walk: Vec<usize>) -> Option<Self> {
        let cover_times: Vec<u64> = tree.cover_times(&walk).into_iter().collect::<Option<_>>()?;
        let objective = cover_times.iter().sum();
        Some(TreeTour {
            walk,
            cover_times,
            objective,
        })
    }

    pub fn length(&self, tree: &GroupedTree) -> u64 {
        tree.walk_length(&self.walk)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelLog {
    pub level: usize,
    pub contracted: usize,
    pub samples: usize,
    pub weight: u64,
    pub limit: f64,
    pub accepted: bool,
    pub newly_covered: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LcstRun {
    pub tour: TreeTour,
    pub levels: Vec<LevelLog>,
    /// Whether a final full-tree tour was needed to cover every group.
    pub fallback: bool,
}

/// Rounds `sol` level by level, appending the Euler tour of each accepted
/// level tree, until every group is covered. Groups still uncovered after
/// the last level are covered by a tour of the whole tree.
pub fn alg_lcst(tree: &GroupedTree, sol: &LpSolution, seed: u64, params: &RoundingParams) -> Result<LcstRun> {
    let samples = params.samples(tree);
    let mut walk = vec![tree.root()];
    let mut covered = vec![false; tree.groups().len()];
    let mut levels = Vec::new();
    for level in 0..sol.levels() {
        if covered.iter().all(|&c| c) {
            break;
        }
        let plan = plan_level(tree, sol, level)?;
        let round = round_level(tree, &plan, samples, seed, params);
        let mut newly = 0;
        if round.accepted {
            walk.extend_from_slice(&tree.euler_tour(&round.selected)[1..]);
            for (c, &now) in covered.iter_mut().zip(&round.covers) {
                if now && !*c {
                    *c = true;
                    newly += 1;
                }
            }
        }
        levels.push(LevelLog {
            level,
            contracted: plan.contracted.iter().filter(|&&b| b).count(),
            samples,
            weight: round.weight,
            limit: params.weight_limit(tree, level),
            accepted: round.accepted,
            newly_covered: newly,
        });
    }
    let fallback = !covered.iter().all(|&c| c);
    if fallback {
        let all: Vec<bool> = (0..tree.len()).map(|v| v != tree.root()).collect();
        walk.extend_from_slice(&tree.euler_tour(&all)[1..]);
    }
    let tour = TreeTour::from_walk(tree, walk).expect("a full tour covers every group");
    Ok(LcstRun { tour, levels, fallback })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::RawTree;
    use crate::lcst::lp::{solve_lp_lcst, LpOptions};

    #[test]
    fn single_leaf_is_covered() {
        let t = GroupedTree::new(&RawTree {
            vertices: 3,
            root: 0,
            edges: vec![(0, 1, 2), (1, 2, 3)],
            groups: vec![(vec![2], 1)],
        })
        .unwrap();
        let sol = solve_lp_lcst(&t, &LpOptions::default()).unwrap();
        let run = alg_lcst(&t, &sol, 7, &RoundingParams::default()).unwrap();
        assert!(!run.fallback);
        assert_eq!(run.tour.cover_times.len(), 1);
        assert!(run.tour.objective >= 5);
        let params = RoundingParams::default();
        assert_eq!(params.samples(&t), 18);
    }
}
