//! Top-down dependent rounding of edge marginals on a tree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instances::GroupedTree;

/// Generator for sample `stream` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Checks `z_{pe(e)} >= z_e` and `0 <= z <= 1`.
pub fn check_marginals(tree: &GroupedTree, z: &[f64]) -> Result<()> {
    for e in tree.edges() {
        if !(0.0..=1.0).contains(&z[e]) {
            return Err(Error::invalid(format!("marginal of edge {e} is {}", z[e])));
        }
        if let Some(pe) = tree.parent_edge(e) {
            if z[e] > z[pe] + 1e-12 {
                return Err(Error::ParentMonotonicity(e));
            }
        }
    }
    Ok(())
}

/// Selects root edges with probability `z_e` and every other edge whose
/// parent edge was selected with probability `z_e / z_{pe(e)}`. The result,
/// indexed by edge, is connected to the root and contains each edge with
/// probability `z_e`.
pub fn krs_round<R: Rng>(tree: &GroupedTree, z: &[f64], rng: &mut R) -> Result<Vec<bool>> {
    check_marginals(tree, z)?;
    Ok(krs_round_unchecked(tree, z, rng))
}

pub(crate) fn krs_round_unchecked<R: Rng>(tree: &GroupedTree, z: &[f64], rng: &mut R) -> Vec<bool> {
    let mut sel = vec![false; tree.len()];
    for v in tree.preorder() {
        if v == tree.root() {
            continue;
        }
        let p = match tree.parent_edge(v) {
            None => z[v],
            Some(pe) if sel[pe] => {
                if z[pe] <= 0.0 {
                    0.0
                } else {
                    (z[v] / z[pe]).min(1.0)
                }
            }
            Some(_) => continue,
        };
        sel[v] = p >= 1.0 || (p > 0.0 && rng.random::<f64>() < p);
    }
    sel
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::RawTree;

    fn path() -> GroupedTree {
        GroupedTree::new(&RawTree {
            vertices: 3,
            root: 0,
            edges: vec![(0, 1, 1), (1, 2, 1)],
            groups: vec![(vec![2], 1)],
        })
        .unwrap()
    }

    #[test]
    fn extremes() {
        let t = path();
        let mut r = sample_rng(1, 0);
        assert_eq!(krs_round(&t, &[0.0, 1.0, 1.0], &mut r).unwrap(), vec![false, true, true]);
        assert_eq!(krs_round(&t, &[0.0, 0.0, 0.0], &mut r).unwrap(), vec![false; 3]);
    }

    #[test]
    fn rejects_non_monotone() {
        let t = path();
        let mut r = sample_rng(1, 0);
        assert!(matches!(krs_round(&t, &[0.0, 0.2, 0.5], &mut r), Err(Error::ParentMonotonicity(2))));
    }
}
