//! Flow-based preprocessing of a fractional level solution into marginals
//! with the KRS properties.

use crate::error::{Error, Result};
use crate::instances::GroupedTree;

/// Result of [`flow_adjust`] for one level.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowAdjusted {
    /// `x̃`, indexed by edge; 0 on the root and on contracted edges.
    pub x: Vec<f64>,
    /// Residual requirement `r_g` per group.
    pub residual: Vec<i64>,
    /// Flow value per group.
    pub flow: Vec<f64>,
}

/// Edges with `x̄ >= 1/4`, closed under taking parent edges.
pub fn contracted_edges(tree: &GroupedTree, x: &[f64]) -> Vec<bool> {
    let mut sel = vec![false; tree.len()];
    for v in tree.preorder() {
        if v == tree.root() {
            continue;
        }
        let parent_ok = tree.parent_edge(v).is_none_or(|pe| sel[pe]);
        sel[v] = parent_ok && x[v] >= 0.25;
    }
    sel
}

/// Computes `x̃` per group by a max flow from the root to the residual
/// leaves `R(g)` of the tree with `contracted` edges shrunk. Leaf edges have
/// capacity `x̄_f`, other edges `r_g x̄_e`, contracted edges are unbounded.
/// Leaf edges get their flow volume and other edges keep `x̄`.
///
/// Fails when a flow falls below `r_g y_g - tol`.
pub fn flow_adjust(tree: &GroupedTree, x: &[f64], y: &[f64], contracted: &[bool], tol: f64) -> Result<FlowAdjusted> {
    let mut out = vec![0.0; tree.len()];
    for e in tree.edges() {
        if !contracted[e] && !tree.is_leaf(e) {
            out[e] = x[e];
        }
    }
    let mut residual = Vec::with_capacity(tree.groups().len());
    let mut flows = Vec::with_capacity(tree.groups().len());
    let order = tree.preorder();
    for (g, group) in tree.groups().iter().enumerate() {
        let inside = group.leaves.iter().filter(|&&j| contracted[j]).count();
        let r = group.requirement as i64 - inside as i64;
        residual.push(r);
        if r <= 0 {
            flows.push(0.0);
            continue;
        }
        let rf = r as f64;
        let mut relevant = vec![false; tree.len()];
        for &j in &group.leaves {
            if !contracted[j] {
                for a in tree.ancestors(j) {
                    relevant[a] = true;
                }
            }
        }
        let cap = |v: usize| -> f64 {
            if contracted[v] {
                f64::INFINITY
            } else if tree.is_leaf(v) {
                x[v]
            } else {
                rf * x[v]
            }
        };
        // most flow that can enter the subtree of each vertex through its
        // parent edge
        let mut up = vec![0.0f64; tree.len()];
        for &v in order.iter().rev() {
            if !relevant[v] {
                continue;
            }
            let below: f64 = if tree.is_leaf(v) {
                f64::INFINITY
            } else {
                tree.children(v).iter().filter(|&&c| relevant[c]).map(|&c| up[c]).sum()
            };
            up[v] = if v == tree.root() { below } else { below.min(cap(v)) };
        }
        let total = up[tree.root()];
        let mut push = vec![0.0f64; tree.len()];
        push[tree.root()] = total;
        for &v in &order {
            if !relevant[v] || tree.is_leaf(v) {
                continue;
            }
            let mut left = push[v];
            for &c in tree.children(v) {
                if relevant[c] {
                    let amount = left.min(up[c]);
                    push[c] = amount;
                    left -= amount;
                }
            }
        }
        for &j in &group.leaves {
            if !contracted[j] {
                out[j] = push[j];
            }
        }
        if total < rf * y[g] - tol {
            return Err(Error::Invariant(format!(
                "flow {total} for group {g} is below r_g y_g = {}",
                rf * y[g]
            )));
        }
        flows.push(total);
    }
    Ok(FlowAdjusted {
        x: out,
        residual,
        flow: flows,
    })
}

/// Largest violation of `sum_{j in T(e) ∩ R(g)} z_j <= r_g z_e` over
/// uncontracted edges, and of parent monotonicity; 0 when both hold.
pub fn krs_violation(tree: &GroupedTree, z: &[f64], residual: &[i64], contracted: &[bool]) -> f64 {
    let mut worst = 0.0f64;
    for e in tree.edges() {
        if contracted[e] {
            continue;
        }
        if let Some(pe) = tree.parent_edge(e) {
            if !contracted[pe] {
                worst = worst.max(z[e] - z[pe]);
            }
        }
        let mut per_group = vec![0.0; tree.groups().len()];
        for j in tree.leaves_below(e) {
            if let Some(g) = tree.group_of(j) {
                if !contracted[j] {
                    per_group[g] += z[j];
                }
            }
        }
        for (g, s) in per_group.iter().enumerate() {
            if *s > 0.0 {
                worst = worst.max(s - residual[g] as f64 * z[e]);
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::RawTree;

    #[test]
    fn star_flow_is_unchanged() {
        let t = GroupedTree::new(&RawTree {
            vertices: 4,
            root: 0,
            edges: vec![(0, 1, 1), (0, 2, 1), (0, 3, 1)],
            groups: vec![(vec![1, 2, 3], 2)],
        })
        .unwrap();
        let x = vec![0.0, 1.0, 1.0, 0.0];
        let none = vec![false; 4];
        let adj = flow_adjust(&t, &x, &[1.0], &none, 1e-9).unwrap();
        assert_eq!(adj.x, x);
        assert_eq!(adj.residual, vec![2]);
    }

    #[test]
    fn bottleneck_limits_leaves() {
        // root - a - {b, c}, k = 1
        let t = GroupedTree::new(&RawTree {
            vertices: 4,
            root: 0,
            edges: vec![(0, 1, 1), (1, 2, 1), (1, 3, 1)],
            groups: vec![(vec![2, 3], 1)],
        })
        .unwrap();
        let x = vec![0.0, 0.2, 0.2, 0.2];
        let none = vec![false; 4];
        let adj = flow_adjust(&t, &x, &[0.2], &none, 1e-9).unwrap();
        assert!((adj.flow[0] - 0.2).abs() < 1e-12);
        assert!((adj.x[2] - 0.2).abs() < 1e-12);
        assert_eq!(adj.x[3], 0.0);
        assert!(krs_violation(&t, &adj.x, &adj.residual, &none) <= 1e-12);
    }

    #[test]
    fn contraction_is_parent_closed() {
        let t = GroupedTree::new(&RawTree {
            vertices: 3,
            root: 0,
            edges: vec![(0, 1, 1), (1, 2, 1)],
            groups: vec![(vec![2], 1)],
        })
        .unwrap();
        assert_eq!(contracted_edges(&t, &[0.0, 0.1, 0.9]), vec![false, false, false]);
        assert_eq!(contracted_edges(&t, &[0.0, 0.3, 0.3]), vec![false, true, true]);
    }
}
