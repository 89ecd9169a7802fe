//! Exhaustive optimum of small tree instances.

use crate::error::{check_cap, Result};
use crate::instances::GroupedTree;

use super::rounding::TreeTour;

pub const BRUTE_FORCE_MAX: usize = 8;

/// Vertices of the tree path from `u` to `v`, both included.
pub fn tree_path(tree: &GroupedTree, u: usize, v: usize) -> Vec<usize> {
    let up = tree.ancestors(u);
    let down = tree.ancestors(v);
    let lca = *up.iter().find(|a| down.contains(a)).expect("vertices share the root");
    let mut path: Vec<usize> = up.iter().copied().take_while(|&a| a != lca).collect();
    path.push(lca);
    let tail: Vec<usize> = down.iter().copied().take_while(|&a| a != lca).collect();
    path.extend(tail.into_iter().rev());
    path
}

struct Search<'a> {
    tree: &'a GroupedTree,
    leaves: Vec<usize>,
    dist: Vec<Vec<u64>>,
    from_root: Vec<u64>,
    counts: Vec<usize>,
    open: usize,
    order: Vec<usize>,
    used: Vec<bool>,
    best: u64,
    best_order: Vec<usize>,
}

impl Search<'_> {
    fn dfs(&mut self, last: Option<usize>, t: u64, cost: u64) {
        if self.open == 0 {
            if cost < self.best {
                self.best = cost;
                self.best_order = self.order.clone();
            }
            return;
        }
        if cost + self.open as u64 * t >= self.best {
            return;
        }
        for i in 0..self.leaves.len() {
            if self.used[i] {
                continue;
            }
            let nt = t + last.map_or(self.from_root[i], |l| self.dist[l][i]);
            let g = self.tree.group_of(self.leaves[i]).expect("leaves belong to groups");
            self.counts[g] += 1;
            let done = self.counts[g] == self.tree.groups()[g].requirement;
            let add = if done {
                self.open -= 1;
                nt
            } else {
                0
            };
            self.used[i] = true;
            self.order.push(i);
            self.dfs(Some(i), nt, cost + add);
            self.order.pop();
            self.used[i] = false;
            if done {
                self.open += 1;
            }
            self.counts[g] -= 1;
        }
    }
}

/// Minimum total group cover time over all walks from the root, by search
/// over visiting orders of the leaves.
pub fn brute_force_lcst(tree: &GroupedTree) -> Result<TreeTour> {
    let leaves: Vec<usize> = tree.edges().filter(|&v| tree.is_leaf(v)).collect();
    check_cap("brute-force tree latency", leaves.len(), BRUTE_FORCE_MAX)?;
    let dist = leaves
        .iter()
        .map(|&a| leaves.iter().map(|&b| tree.distance(a, b)).collect())
        .collect();
    let from_root = leaves.iter().map(|&a| tree.distance(tree.root(), a)).collect();
    let mut s = Search {
        tree,
        leaves: leaves.clone(),
        dist,
        from_root,
        counts: vec![0; tree.groups().len()],
        open: tree.groups().len(),
        order: Vec::new(),
        used: vec![false; leaves.len()],
        best: u64::MAX,
        best_order: Vec::new(),
    };
    s.dfs(None, 0, 0);
    let mut walk = vec![tree.root()];
    for &i in &s.best_order {
        let from = *walk.last().unwrap();
        walk.extend_from_slice(&tree_path(tree, from, leaves[i])[1..]);
    }
    let tour = TreeTour::from_walk(tree, walk).expect("the order covers every group");
    debug_assert_eq!(tour.objective, s.best);
    Ok(tour)
}
