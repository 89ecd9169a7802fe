//! Minimum-cost edge cuts separating the root from a prescribed number of
//! leaves, by dynamic programming over a binarized tree.

use crate::error::{Error, Result};
use crate::instances::GroupedTree;

use super::scalar::Scalar;

/// A rooted tree with a cost on the edge into every non-root vertex.
/// Leaves are the non-root vertices without children.
#[derive(Clone, Debug)]
pub struct CutTree<S> {
    pub root: usize,
    pub children: Vec<Vec<usize>>,
    pub cost: Vec<S>,
}

impl<S: Scalar> CutTree<S> {
    /// The subtree of `tree` spanned by root paths to `keep_leaves`, with
    /// per-edge costs from `cost(edge, is_leaf)`.
    pub fn restricted(tree: &GroupedTree, keep_leaves: &[usize], cost: impl Fn(usize, bool) -> S) -> Self {
        let n = tree.len();
        let mut keep = vec![false; n];
        for &leaf in keep_leaves {
            for v in tree.ancestors(leaf) {
                if keep[v] {
                    break;
                }
                keep[v] = true;
            }
        }
        keep[tree.root()] = true;
        let children: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                if keep[v] {
                    tree.children(v).iter().copied().filter(|&c| keep[c]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        let cost = (0..n)
            .map(|v| {
                if v == tree.root() || !keep[v] {
                    S::zero()
                } else {
                    cost(v, children[v].is_empty())
                }
            })
            .collect();
        CutTree {
            root: tree.root(),
            children,
            cost,
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves_below(self.root)
    }

    fn leaves_below(&self, v: usize) -> usize {
        if v != self.root && self.children[v].is_empty() {
            return 1;
        }
        self.children[v].iter().map(|&c| self.leaves_below(c)).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinCut<S> {
    pub cost: S,
    /// Cut edges, named by their child vertex, sorted.
    pub edges: Vec<usize>,
    /// Number of leaves the cut separates from the root.
    pub separated: usize,
}

/// A node of the binarized tree: one edge, with infinite cost for the dummy
/// edges added during binarization.
struct Node<S> {
    edge: Option<usize>,
    cost: Option<S>,
    kids: Vec<usize>,
    leaves: usize,
    table: Vec<Option<S>>,
    choice: Vec<Choice>,
}

#[derive(Clone, Copy)]
enum Choice {
    Empty,
    Cut,
    Split(usize),
}

struct Dp<'a, S> {
    tree: &'a CutTree<S>,
    nodes: Vec<Node<S>>,
}

impl<S: Scalar> Dp<'_, S> {
    fn push(&mut self, edge: Option<usize>, cost: Option<S>, kids: Vec<usize>) -> usize {
        self.nodes.push(Node {
            edge,
            cost,
            kids,
            leaves: 0,
            table: Vec::new(),
            choice: Vec::new(),
        });
        self.nodes.len() - 1
    }

    /// Node for the edge into `v`.
    fn build_edge(&mut self, v: usize) -> usize {
        let kids = self.build_children(v);
        let cost = Some(self.tree.cost[v].clone());
        self.push(Some(v), cost, kids)
    }

    /// At most two nodes standing for the children of `v`; extra children go
    /// under dummy infinite-cost edges.
    fn build_children(&mut self, v: usize) -> Vec<usize> {
        let kids: Vec<usize> = self.tree.children[v].clone();
        self.build_list(&kids)
    }

    fn build_list(&mut self, kids: &[usize]) -> Vec<usize> {
        match kids.len() {
            0 => Vec::new(),
            1 => vec![self.build_edge(kids[0])],
            2 => vec![self.build_edge(kids[0]), self.build_edge(kids[1])],
            _ => {
                let first = self.build_edge(kids[0]);
                let rest = self.build_list(&kids[1..]);
                let dummy = self.push(None, None, rest);
                vec![first, dummy]
            }
        }
    }

    fn fill(&mut self, id: usize) {
        let kids = self.nodes[id].kids.clone();
        for &k in &kids {
            self.fill(k);
        }
        let is_leaf = kids.is_empty() && self.nodes[id].edge.is_some();
        if is_leaf {
            let node = &mut self.nodes[id];
            node.leaves = 1;
            node.table = vec![Some(S::zero()), node.cost.clone()];
            node.choice = vec![Choice::Empty, Choice::Cut];
            return;
        }
        let empty = (vec![Some(S::zero())], 0usize);
        let (t1, l1) = kids
            .first()
            .map(|&k| (self.nodes[k].table.clone(), self.nodes[k].leaves))
            .unwrap_or_else(|| empty.clone());
        let (t2, l2) = kids
            .get(1)
            .map(|&k| (self.nodes[k].table.clone(), self.nodes[k].leaves))
            .unwrap_or(empty);
        let total = l1 + l2;
        let mut table = vec![None; total + 1];
        let mut choice = vec![Choice::Empty; total + 1];
        table[0] = Some(S::zero());
        for k in 1..=total {
            let mut best: Option<(S, usize)> = None;
            for k1 in k.saturating_sub(l2)..=k.min(l1) {
                if let (Some(a), Some(b)) = (&t1[k1], &t2[k - k1]) {
                    let c = a.add(b);
                    if best.as_ref().is_none_or(|(bc, _)| c < *bc) {
                        best = Some((c, k1));
                    }
                }
            }
            if let Some((c, k1)) = best {
                table[k] = Some(c);
                choice[k] = Choice::Split(k1);
            }
            if k == total {
                if let Some(own) = &self.nodes[id].cost {
                    if table[k].as_ref().is_none_or(|c| own < c) {
                        table[k] = Some(own.clone());
                        choice[k] = Choice::Cut;
                    }
                }
            }
        }
        let node = &mut self.nodes[id];
        node.leaves = total;
        node.table = table;
        node.choice = choice;
    }

    fn witness(&self, id: usize, k: usize, out: &mut Vec<usize>) {
        let node = &self.nodes[id];
        match node.choice[k] {
            Choice::Empty => {}
            Choice::Cut => out.push(node.edge.expect("dummy edges are never cut")),
            Choice::Split(k1) => {
                if let Some(&a) = node.kids.first() {
                    self.witness(a, k1, out);
                }
                if let Some(&b) = node.kids.get(1) {
                    self.witness(b, k - k1, out);
                }
            }
        }
    }
}

/// Cheapest cut separating the root from at least `d` leaves.
///
/// `C[e, k]` is the cheapest cut of the subtree below edge `e` separating
/// exactly `k` of its leaves; the answer is `min_{k >= d} C[e_r, k]` where
/// `e_r` is an infinite-cost edge above the root.
pub fn min_cut_with_exceptions<S: Scalar>(tree: &CutTree<S>, d: usize) -> Result<MinCut<S>> {
    let mut dp = Dp {
        tree,
        nodes: Vec::new(),
    };
    let kids = dp.build_children(tree.root);
    let top = dp.push(None, None, kids);
    dp.fill(top);
    let leaves = dp.nodes[top].leaves;
    if d > leaves {
        return Err(Error::Infeasible(format!("cannot separate {d} of {leaves} leaves")));
    }
    let mut best: Option<(S, usize)> = None;
    for k in d..=leaves {
        if let Some(c) = &dp.nodes[top].table[k] {
            if best.as_ref().is_none_or(|(b, _)| c < b) {
                best = Some((c.clone(), k));
            }
        }
    }
    let (cost, k) = best.expect("cutting every leaf edge is always possible");
    let mut edges = Vec::new();
    dp.witness(top, k, &mut edges);
    edges.sort_unstable();
    Ok(MinCut {
        cost,
        edges,
        separated: k,
    })
}
