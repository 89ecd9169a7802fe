//! The latency covering LP over levels `l = 0..L`, solved by cutting planes:
//!
//! ```text
//! min  1/2 sum_l 2^l sum_g (1 - y^l_g)
//! s.t. x^l_e <= x^l_{pe(e)},  sum_e w_e x^l_e <= 2^l,  y^l_g <= y^{l+1}_g,
//!      knapsack-cover constraints for every (l, g),  0 <= x, y <= 1.
//! ```

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::instances::GroupedTree;
use crate::par::{self, Exec};

use super::scalar::Scalar;
use super::separation::{separate_kc, KcCut};
use super::simplex::Simplex;

/// Exact pivoting is used up to this many variables.
pub const EXACT_VARS_MAX: usize = 200;
pub const ROUND_CAP: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpOptions {
    /// Violation tolerance; defaults to 1e-9 in exact mode and 1e-7 otherwise.
    pub tol: Option<f64>,
    /// Force exact (`Some(true)`) or floating (`Some(false)`) arithmetic.
    pub exact: Option<bool>,
    pub max_rounds: usize,
    pub exec: Exec,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            tol: None,
            exact: None,
            max_rounds: ROUND_CAP,
            exec: Exec::Parallel,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    /// `x[l][e]`, indexed by edge (child vertex); the root entry is 0.
    pub x: Vec<Vec<f64>>,
    /// `y[l][g]`.
    pub y: Vec<Vec<f64>>,
    pub objective: f64,
    pub exact: bool,
    pub rounds: usize,
    pub cuts: usize,
    pub pivots: usize,
}

impl LpSolution {
    pub fn levels(&self) -> usize {
        self.x.len()
    }

    /// Smallest level with `y >= 1/2`.
    pub fn half_level(&self, g: usize) -> Option<usize> {
        (0..self.levels()).find(|&l| self.y[l][g] >= 0.5 - 1e-9)
    }
}

/// `ceil(log2(sum_e 2 w_e)) + 1`, and 1 for a weightless tree.
pub fn level_count(tree: &GroupedTree) -> usize {
    let total = 2 * tree.total_weight();
    if total <= 1 {
        return 1;
    }
    (u64::BITS - (total - 1).leading_zeros()) as usize + 1
}

/// `1/2 sum_l 2^l sum_g (1 - y^l_g)`.
pub fn lp_objective(y: &[Vec<f64>]) -> f64 {
    y.iter()
        .enumerate()
        .map(|(l, ys)| 0.5 * (1u64 << l) as f64 * ys.iter().map(|v| 1.0 - v).sum::<f64>())
        .sum()
}

/// The 0/1 point of a walk from the root: `x^l_e = 1` iff the walk reaches
/// the lower end of `e` within distance `2^l`, `y^l_g = 1` iff `g` is covered
/// within `2^l`.
pub fn integral_point(tree: &GroupedTree, walk: &[usize], levels: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut first = vec![None; tree.len()];
    let mut t = 0u64;
    for (i, &v) in walk.iter().enumerate() {
        if i > 0 {
            t += tree.distance(walk[i - 1], v);
        }
        if first[v].is_none() {
            first[v] = Some(t);
        }
    }
    // the walk moves along tree paths, so a vertex is reached no later than
    // any vertex below it
    for v in tree.preorder().into_iter().rev() {
        if let (Some(p), Some(tv)) = (tree.parent(v), first[v]) {
            first[p] = Some(first[p].map_or(tv, |tp: u64| tp.min(tv)));
        }
    }
    let covers = tree.cover_times(walk);
    let x = (0..levels)
        .map(|l| {
            (0..tree.len())
                .map(|v| i64::from(v != tree.root() && first[v].is_some_and(|t| t <= 1u64 << l)))
                .collect()
        })
        .collect();
    let y = (0..levels)
        .map(|l| covers.iter().map(|c| i64::from(c.is_some_and(|t| t <= 1u64 << l))).collect())
        .collect();
    (x, y)
}

struct Layout {
    edges: Vec<usize>,
    slot: Vec<usize>,
    groups: usize,
    levels: usize,
}

impl Layout {
    fn new(tree: &GroupedTree) -> Self {
        let edges: Vec<usize> = tree.edges().collect();
        let mut slot = vec![usize::MAX; tree.len()];
        for (i, &e) in edges.iter().enumerate() {
            slot[e] = i;
        }
        Layout {
            edges,
            slot,
            groups: tree.groups().len(),
            levels: level_count(tree),
        }
    }

    fn width(&self) -> usize {
        self.edges.len() + self.groups
    }

    fn vars(&self) -> usize {
        self.levels * self.width()
    }

    fn x(&self, l: usize, e: usize) -> usize {
        l * self.width() + self.slot[e]
    }

    fn y(&self, l: usize, g: usize) -> usize {
        l * self.width() + self.edges.len() + g
    }
}

pub fn solve_lp_lcst(tree: &GroupedTree, opts: &LpOptions) -> Result<LpSolution> {
    let layout = Layout::new(tree);
    let exact = opts.exact.unwrap_or(layout.vars() <= EXACT_VARS_MAX);
    if exact {
        solve_with::<BigRational>(tree, &layout, opts, opts.tol.unwrap_or(1e-9))
    } else {
        solve_with::<f64>(tree, &layout, opts, opts.tol.unwrap_or(1e-7))
    }
}

fn solve_with<S: Scalar>(tree: &GroupedTree, lay: &Layout, opts: &LpOptions, tol: f64) -> Result<LpSolution> {
    let one = S::from_i64(1);
    let mut c = vec![S::zero(); lay.vars()];
    for l in 0..lay.levels {
        for g in 0..lay.groups {
            c[lay.y(l, g)] = S::from_i64(1i64 << l);
        }
    }
    let mut lp = Simplex::new(c);
    for l in 0..lay.levels {
        let mut budget = Vec::new();
        for &e in &lay.edges {
            match tree.parent_edge(e) {
                Some(pe) => lp.add_row(&[(lay.x(l, e), one.clone()), (lay.x(l, pe), S::from_i64(-1))], S::zero()),
                None => lp.add_row(&[(lay.x(l, e), one.clone())], one.clone()),
            }
            if tree.weight(e) > 0 {
                budget.push((lay.x(l, e), S::from_i64(tree.weight(e) as i64)));
            }
        }
        if !budget.is_empty() {
            lp.add_row(&budget, S::from_i64(1i64 << l));
        }
        for g in 0..lay.groups {
            if l + 1 < lay.levels {
                lp.add_row(&[(lay.y(l, g), one.clone()), (lay.y(l + 1, g), S::from_i64(-1))], S::zero());
            } else {
                lp.add_row(&[(lay.y(l, g), one.clone())], one.clone());
            }
        }
    }
    let tol_s = S::from_f64(tol);
    let pairs: Vec<(usize, usize)> = (0..lay.levels)
        .flat_map(|l| (0..lay.groups).map(move |g| (l, g)))
        .collect();
    let mut rounds = 0;
    let mut cuts = 0;
    loop {
        lp.solve()?;
        let sol = lp.solution();
        let found: Vec<Option<(usize, KcCut<S>)>> = par::map(opts.exec, &pairs, |&(l, g)| {
            let mut x = vec![S::zero(); tree.len()];
            for &e in &lay.edges {
                x[e] = sol[lay.x(l, e)].clone();
            }
            separate_kc(tree, g, &x, &sol[lay.y(l, g)], &tol_s)
                .violated
                .map(|cut| (l, cut))
        });
        let violated: Vec<(usize, KcCut<S>)> = found.into_iter().flatten().collect();
        if violated.is_empty() {
            break;
        }
        rounds += 1;
        if rounds > opts.max_rounds {
            let worst = violated
                .iter()
                .map(|(_, c)| -c.slack().to_f64())
                .fold(0.0, f64::max);
            return Err(Error::IterationCap {
                cap: opts.max_rounds,
                last_violation: worst,
            });
        }
        for (l, cut) in violated {
            let k_eta = (tree.groups()[cut.group].requirement - cut.eta) as i64;
            let mut row: Vec<(usize, S)> = cut
                .cut
                .iter()
                .map(|&e| (lay.x(l, e), S::from_i64(-cut.coefficient(tree, e))))
                .collect();
            row.push((lay.y(l, cut.group), S::from_i64(k_eta)));
            lp.add_row(&row, S::zero());
            cuts += 1;
        }
    }
    let sol = lp.solution();
    let x = (0..lay.levels)
        .map(|l| {
            let mut xs = vec![0.0; tree.len()];
            for &e in &lay.edges {
                xs[e] = sol[lay.x(l, e)].to_f64();
            }
            xs
        })
        .collect();
    let y: Vec<Vec<f64>> = (0..lay.levels)
        .map(|l| (0..lay.groups).map(|g| sol[lay.y(l, g)].to_f64()).collect())
        .collect();
    let total: i64 = (0..lay.levels).map(|l| (1i64 << l) * lay.groups as i64).sum();
    let objective = S::from_i64(total).sub(&lp.objective()).to_f64() / 2.0;
    Ok(LpSolution {
        x,
        y,
        objective,
        exact: S::EXACT,
        rounds,
        cuts,
        pivots: lp.pivots,
    })
}

/// Checks the polynomial constraints and, by separation in floating point,
/// the knapsack-cover constraints of a solution.
pub fn check_solution(tree: &GroupedTree, sol: &LpSolution, tol: f64) -> Result<()> {
    let fail = |msg: String| Err(Error::Invariant(msg));
    for l in 0..sol.levels() {
        let x = &sol.x[l];
        let mut used = 0.0;
        for e in tree.edges() {
            if x[e] < -tol || x[e] > 1.0 + tol {
                return fail(format!("x[{l}][{e}] = {} outside [0, 1]", x[e]));
            }
            if let Some(pe) = tree.parent_edge(e) {
                if x[e] > x[pe] + tol {
                    return fail(format!("x[{l}][{e}] exceeds its parent edge"));
                }
            }
            used += tree.weight(e) as f64 * x[e];
        }
        if used > (1u64 << l) as f64 + tol {
            return fail(format!("level {l} uses weight {used} > 2^{l}"));
        }
        for g in 0..tree.groups().len() {
            let y = sol.y[l][g];
            if y < -tol || y > 1.0 + tol {
                return fail(format!("y[{l}][{g}] = {y} outside [0, 1]"));
            }
            if l + 1 < sol.levels() && y > sol.y[l + 1][g] + tol {
                return fail(format!("y[{l}][{g}] exceeds the next level"));
            }
            let sep = separate_kc(tree, g, x, &y, &tol);
            if sep.violated.is_some() {
                return fail(format!("knapsack-cover constraint of group {g} violated at level {l}"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::RawTree;

    fn path_to_leaf(d: u64) -> GroupedTree {
        GroupedTree::new(&RawTree {
            vertices: 3,
            root: 0,
            edges: vec![(0, 1, d - 1), (1, 2, 1)],
            groups: vec![(vec![2], 1)],
        })
        .unwrap()
    }

    #[test]
    fn level_counts() {
        assert_eq!(level_count(&path_to_leaf(1)), 2);
        assert_eq!(level_count(&path_to_leaf(4)), 4);
    }

    #[test]
    fn single_leaf_matches_closed_form() {
        for d in [1u64, 3, 4, 6] {
            let t = path_to_leaf(d);
            for exact in [true, false] {
                let opts = LpOptions {
                    exact: Some(exact),
                    ..Default::default()
                };
                let sol = solve_lp_lcst(&t, &opts).unwrap();
                check_solution(&t, &sol, 1e-6).unwrap();
                // the integral walk to the leaf is feasible, so the LP value is
                // at most the distance
                assert!(sol.objective <= d as f64 + 1e-9, "d = {d}: {}", sol.objective);
                // y^l = min(1, 2^l / d) is optimal for a single path
                for l in 0..sol.levels() {
                    let want = ((1u64 << l) as f64 / d as f64).min(1.0);
                    assert!((sol.y[l][0] - want).abs() < 1e-6, "d = {d}, l = {l}: {}", sol.y[l][0]);
                }
            }
        }
    }
}
