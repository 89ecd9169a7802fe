//! Separation of the knapsack-cover constraints
//!
//! ```text
//! (k_g - |A|) sum_{j in B \ L} x_j + sum_{j in B ∩ L \ A} x_j >= (k_g - |A|) y_g
//! ```
//!
//! for `A ⊆ g` with `|A| < k_g` and `B` a cut separating the root from
//! `g \ A`. For each exception count `eta = |A|` the cheapest left-hand side
//! is a [`min_cut_with_exceptions`] query on the root paths to `g` with leaf
//! costs `x_j`, other costs `(k_g - eta) x_e`, and bound `|g| - eta`.

use crate::instances::GroupedTree;

use super::mincut::{min_cut_with_exceptions, CutTree};
use super::scalar::Scalar;

/// A knapsack-cover constraint identified by its group, exception count and
/// cut.
#[derive(Clone, Debug, PartialEq)]
pub struct KcCut<S> {
    pub group: usize,
    pub eta: usize,
    /// Cut edges (child vertices), sorted.
    pub cut: Vec<usize>,
    /// Left-hand side at the queried point.
    pub lhs: S,
    /// Right-hand side `(k_g - eta) y`.
    pub rhs: S,
}

impl<S: Scalar> KcCut<S> {
    pub fn slack(&self) -> S {
        self.lhs.sub(&self.rhs)
    }

    /// Coefficient of edge `e` on the left-hand side.
    pub fn coefficient(&self, tree: &GroupedTree, e: usize) -> i64 {
        if tree.is_leaf(e) {
            1
        } else {
            (tree.groups()[self.group].requirement - self.eta) as i64
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KcSeparation<S> {
    /// Smallest `lhs - rhs` over all constraints of the group.
    pub min_slack: S,
    /// The constraint attaining `min_slack`, when it is below `-tol`.
    pub violated: Option<KcCut<S>>,
}

/// Finds the most violated constraint of group `g` at point `(x, y)`.
/// `x` is indexed by edge (child vertex).
pub fn separate_kc<S: Scalar>(tree: &GroupedTree, g: usize, x: &[S], y: &S, tol: &S) -> KcSeparation<S> {
    let group = &tree.groups()[g];
    let k = group.requirement;
    let size = group.leaves.len();
    let mut best: Option<KcCut<S>> = None;
    for eta in 0..k {
        let factor = S::from_i64((k - eta) as i64);
        let ct = CutTree::restricted(tree, &group.leaves, |e, leaf| {
            if leaf {
                x[e].clone()
            } else {
                factor.mul(&x[e])
            }
        });
        let cut = min_cut_with_exceptions(&ct, size - eta).expect("bound never exceeds the group size");
        let cand = KcCut {
            group: g,
            eta,
            cut: cut.edges,
            lhs: cut.cost,
            rhs: factor.mul(y),
        };
        if best.as_ref().is_none_or(|b| cand.slack() < b.slack()) {
            best = Some(cand);
        }
    }
    let best = best.expect("requirement is at least one");
    let min_slack = best.slack();
    let violated = min_slack.add(tol).is_neg().then_some(best);
    KcSeparation { min_slack, violated }
}
