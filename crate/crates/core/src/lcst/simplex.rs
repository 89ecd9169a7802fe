//! Dense tableau simplex for `max c.x  s.t.  A x <= b, x >= 0` with `b >= 0`
//! at construction, plus row generation: rows added after a solve are
//! expressed in the current basis and repaired by dual simplex pivots.
//! Both phases use Bland's smallest-index rule.

use crate::error::{Error, Result};

use super::scalar::Scalar;

pub const PIVOT_CAP: usize = 200_000;

#[derive(Clone, Debug)]
pub struct Simplex<S> {
    nvars: usize,
    ncols: usize,
    rows: Vec<Vec<S>>,
    rhs: Vec<S>,
    basis: Vec<usize>,
    /// Reduced costs: `z = value + sum_j cost[j] x_j` over nonbasic `j`.
    cost: Vec<S>,
    value: S,
    pub pivots: usize,
}

impl<S: Scalar> Simplex<S> {
    pub fn new(objective: Vec<S>) -> Self {
        let nvars = objective.len();
        Simplex {
            nvars,
            ncols: nvars,
            rows: Vec::new(),
            rhs: Vec::new(),
            basis: Vec::new(),
            cost: objective,
            value: S::zero(),
            pivots: 0,
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_vars(&self) -> usize {
        self.nvars
    }

    /// Adds `sum coeffs <= b` with a fresh slack variable.
    pub fn add_row(&mut self, coeffs: &[(usize, S)], b: S) {
        let slack = self.ncols;
        self.ncols += 1;
        for row in &mut self.rows {
            row.push(S::zero());
        }
        self.cost.push(S::zero());
        let mut row = vec![S::zero(); self.ncols];
        for (j, a) in coeffs {
            assert!(*j < self.nvars, "row references column {j} beyond {}", self.nvars);
            row[*j] = row[*j].add(a);
        }
        row[slack] = S::from_i64(1);
        let mut b = b;
        for i in 0..self.rows.len() {
            let bi = self.basis[i];
            if row[bi].is_exact_zero() {
                continue;
            }
            let f = row[bi].clone();
            let src = &self.rows[i];
            for (dst, s) in row.iter_mut().zip(src) {
                if !s.is_exact_zero() {
                    dst.sub_mul(&f, s);
                }
            }
            b.sub_mul(&f, &self.rhs[i]);
            if !S::EXACT {
                row[bi] = S::zero();
            }
        }
        self.rows.push(row);
        self.rhs.push(b);
        self.basis.push(slack);
    }

    fn pivot(&mut self, r: usize, c: usize) {
        self.pivots += 1;
        let p = self.rows[r][c].clone();
        let nz: Vec<usize> = (0..self.ncols).filter(|&j| !self.rows[r][j].is_exact_zero()).collect();
        for &j in &nz {
            self.rows[r][j] = self.rows[r][j].div(&p);
        }
        self.rhs[r] = self.rhs[r].div(&p);
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_exact_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            let row = &mut self.rows[i];
            for &j in &nz {
                row[j].sub_mul(&f, &prow[j]);
            }
            if !S::EXACT {
                row[c] = S::zero();
            }
            self.rhs[i].sub_mul(&f, &prhs);
        }
        if !self.cost[c].is_exact_zero() {
            let f = self.cost[c].clone();
            for &j in &nz {
                self.cost[j].sub_mul(&f, &prow[j]);
            }
            if !S::EXACT {
                self.cost[c] = S::zero();
            }
            self.value = self.value.add(&f.mul(&prhs));
        }
        self.basis[r] = c;
    }

    /// Solves to optimality from the current basis.
    pub fn solve(&mut self) -> Result<()> {
        self.dual_phase()?;
        self.primal_phase()
    }

    fn check_cap(&self) -> Result<()> {
        if self.pivots > PIVOT_CAP {
            return Err(Error::Invariant(format!("simplex exceeded {PIVOT_CAP} pivots")));
        }
        Ok(())
    }

    fn primal_phase(&mut self) -> Result<()> {
        loop {
            self.check_cap()?;
            let Some(c) = (0..self.ncols).find(|&j| self.cost[j].is_pos()) else {
                return Ok(());
            };
            let mut best: Option<(usize, S)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_pos() {
                    continue;
                }
                let ratio = self.rhs[i].div(a);
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        let d = ratio.sub(br);
                        d.is_neg() || (d.near_zero() && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return Err(Error::Invariant("linear program is unbounded".into()));
            };
            self.pivot(r, c);
        }
    }

    fn dual_phase(&mut self) -> Result<()> {
        loop {
            self.check_cap()?;
            let leaving = (0..self.rows.len())
                .filter(|&i| self.rhs[i].is_neg())
                .min_by_key(|&i| self.basis[i]);
            let Some(r) = leaving else {
                return Ok(());
            };
            if (0..self.ncols).any(|j| self.cost[j].is_pos()) {
                return Err(Error::Invariant("dual simplex started from a dual-infeasible basis".into()));
            }
            let mut best: Option<(usize, S)> = None;
            for j in 0..self.ncols {
                let a = &self.rows[r][j];
                if !a.is_neg() {
                    continue;
                }
                let ratio = self.cost[j].div(a);
                let better = match &best {
                    None => true,
                    Some((_, br)) => ratio.sub(br).is_neg(),
                };
                if better {
                    best = Some((j, ratio));
                }
            }
            let Some((c, _)) = best else {
                return Err(Error::Infeasible("linear program has no feasible point".into()));
            };
            self.pivot(r, c);
        }
    }

    pub fn objective(&self) -> S {
        self.value.clone()
    }

    /// Values of the structural variables.
    pub fn solution(&self) -> Vec<S> {
        let mut x = vec![S::zero(); self.nvars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.nvars {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }
}
