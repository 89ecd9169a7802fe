use crate::error::{Error, Result};

/// Finite integer metric with a distinguished root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    dist: Vec<Vec<u64>>,
    root: usize,
}

impl Metric {
    pub fn new(dist: Vec<Vec<u64>>, root: usize) -> Result<Self> {
        let n = dist.len();
        if n == 0 {
            return Err(Error::invalid("empty metric"));
        }
        if root >= n {
            return Err(Error::invalid(format!("root {root} outside metric of size {n}")));
        }
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if row[i] != 0 {
                return Err(Error::invalid(format!("d({i},{i}) = {} != 0", row[i])));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if dist[i][j] != dist[j][i] {
                    return Err(Error::invalid(format!("asymmetric distance between {i} and {j}")));
                }
                for k in 0..n {
                    if dist[i][k] > dist[i][j] + dist[j][k] {
                        return Err(Error::invalid(format!("triangle inequality fails for ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(Metric { dist, root })
    }

    /// All off-diagonal distances equal to one.
    pub fn uniform(n: usize, root: usize) -> Self {
        let dist = (0..n)
            .map(|i| (0..n).map(|j| u64::from(i != j)).collect())
            .collect();
        Metric { dist, root }
    }

    /// Shortest-path closure of a symmetric non-negative weight matrix.
    pub fn closure(mut w: Vec<Vec<u64>>, root: usize) -> Result<Self> {
        let n = w.len();
        for i in 0..n {
            w[i][i] = 0;
            for j in 0..i {
                let m = w[i][j].min(w[j][i]);
                w[i][j] = m;
                w[j][i] = m;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = w[i][k].saturating_add(w[k][j]);
                    if via < w[i][j] {
                        w[i][j] = via;
                    }
                }
            }
        }
        Metric::new(w, root)
    }

    /// Scales a real-valued metric to integers with relative error at most 1e-6
    /// per entry before the shortest-path closure restores the triangle
    /// inequality.
    pub fn from_real(dist: &[Vec<f64>], root: usize) -> Result<Self> {
        let positive = dist
            .iter()
            .flatten()
            .copied()
            .filter(|d| *d > 0.0)
            .fold(f64::INFINITY, f64::min);
        if dist.iter().flatten().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::invalid("distances must be finite and non-negative"));
        }
        let scale = if positive.is_finite() { 5e5 / positive } else { 1.0 };
        let w = dist
            .iter()
            .map(|row| row.iter().map(|d| (d * scale).round() as u64).collect())
            .collect();
        Metric::closure(w, root)
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn d(&self, u: usize, v: usize) -> u64 {
        self.dist[u][v]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.dist
    }

    pub fn diameter(&self) -> u64 {
        self.dist.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn path_length(&self, path: &[usize]) -> u64 {
        path.windows(2).map(|w| self.d(w[0], w[1])).sum()
    }
}
