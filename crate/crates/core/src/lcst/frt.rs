//! Random hierarchical tree embeddings of finite metrics.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::instances::generate::rng;
use crate::instances::{GroupedTree, Metric, RawTree};

use super::rounding::TreeTour;

/// A grouped tree whose distances dominate a metric.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedTree {
    pub tree: GroupedTree,
    /// Metric point of each tree vertex, if any.
    pub points: Vec<Option<usize>>,
    /// Tree distance between every pair of metric points.
    pub distances: Vec<Vec<u64>>,
    /// Mean of `tree / metric` distance over pairs at positive distance.
    pub mean_stretch: f64,
}

/// Stretch above which an embedding is reported as poor.
pub fn stretch_warning(n: usize) -> f64 {
    8.0 * (n.max(2) as f64).ln()
}

struct Builder {
    edges: Vec<(usize, usize, u64)>,
    point: Vec<Option<usize>>,
}

impl Builder {
    fn vertex(&mut self, p: Option<usize>) -> usize {
        self.point.push(p);
        self.point.len() - 1
    }
}

/// Embeds `metric` into a random tree with the given metric-point groups.
///
/// Clusters at level `i` are balls of radius `beta 2^(i-1)` around centers
/// taken in random order, carved out of their level `i + 1` cluster; the
/// edge from a level `i + 1` cluster to a level `i` child weighs `2^(i+1)`.
/// The tree is rooted at the metric root and chains through cluster
/// vertices are compressed.
pub fn frt_embed(metric: &Metric, groups: &[(Vec<usize>, usize)], seed: u64) -> Result<EmbeddedTree> {
    let n = metric.len();
    let mut r = rng(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut r);
    let beta = 1.0 + r.random::<f64>();
    let diam = metric.diameter();
    let mut delta = 0u32;
    // at least one level, so that points at distance 1 are separated
    while (1u64 << delta) < diam.max(2) {
        delta += 1;
    }

    let mut b = Builder {
        edges: Vec::new(),
        point: Vec::new(),
    };
    let top = b.vertex(None);
    let mut frontier = vec![(top, (0..n).collect::<Vec<usize>>())];
    for level in (0..delta).rev() {
        let radius = beta * 2f64.powi(level as i32 - 1);
        let w = 1u64 << (level + 1);
        let mut next = Vec::new();
        for (parent, members) in frontier {
            let mut rest = members;
            for &c in &perm {
                if rest.is_empty() {
                    break;
                }
                let (ball, out): (Vec<usize>, Vec<usize>) =
                    rest.into_iter().partition(|&u| metric.d(c, u) as f64 <= radius);
                rest = out;
                if !ball.is_empty() {
                    let v = b.vertex(None);
                    b.edges.push((parent, v, w));
                    next.push((v, ball));
                }
            }
        }
        frontier = next;
    }
    // bottom clusters: a single point becomes the cluster vertex, several
    // points at distance zero hang below it
    for (v, members) in frontier {
        if let [p] = members[..] {
            b.point[v] = Some(p);
        } else {
            for p in members {
                let leaf = b.vertex(Some(p));
                b.edges.push((v, leaf, 0));
            }
        }
    }

    let (edges, point) = compress(&b);
    let vertex_of: Vec<usize> = {
        let mut m = vec![0; n];
        for (v, p) in point.iter().enumerate() {
            if let Some(p) = p {
                m[*p] = v;
            }
        }
        m
    };
    let distances = point_distances(point.len(), &edges, &vertex_of);
    let mut total = 0.0;
    let mut pairs = 0usize;
    for u in 0..n {
        for v in u + 1..n {
            let d = metric.d(u, v);
            if d > 0 {
                total += distances[u][v] as f64 / d as f64;
                pairs += 1;
            }
        }
    }
    let mean_stretch = if pairs == 0 { 1.0 } else { total / pairs as f64 };

    let raw = RawTree {
        vertices: point.len(),
        root: vertex_of[metric.root()],
        edges,
        groups: groups
            .iter()
            .map(|(m, k)| {
                m.iter()
                    .map(|&p| {
                        if p >= n {
                            Err(Error::invalid(format!("group member {p} outside metric of size {n}")))
                        } else {
                            Ok(vertex_of[p])
                        }
                    })
                    .collect::<Result<Vec<usize>>>()
                    .map(|m| (m, *k))
            })
            .collect::<Result<_>>()?,
    };
    let tree = GroupedTree::normalize(&raw)?;
    let points = (0..tree.len()).map(|v| point[tree.origin(v)]).collect();
    Ok(EmbeddedTree {
        tree,
        points,
        distances,
        mean_stretch,
    })
}

/// Splices out cluster vertices of degree two.
fn compress(b: &Builder) -> (Vec<(usize, usize, u64)>, Vec<Option<usize>>) {
    let nv = b.point.len();
    let mut adj: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); nv];
    for &(u, v, w) in &b.edges {
        adj[u].insert(v, w);
        adj[v].insert(u, w);
    }
    let mut alive = vec![true; nv];
    for v in 0..nv {
        if b.point[v].is_none() && adj[v].len() == 2 {
            let mut it = adj[v].iter();
            let (&a, &wa) = it.next().unwrap();
            let (&c, &wc) = it.next().unwrap();
            adj[a].remove(&v);
            adj[c].remove(&v);
            adj[a].insert(c, wa + wc);
            adj[c].insert(a, wa + wc);
            adj[v].clear();
            alive[v] = false;
        }
    }
    let label: Vec<Option<usize>> = {
        let mut next = 0;
        alive
            .iter()
            .map(|&a| {
                a.then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    };
    let mut edges = Vec::new();
    for u in 0..nv {
        for (&v, &w) in &adj[u] {
            if u < v {
                edges.push((label[u].unwrap(), label[v].unwrap(), w));
            }
        }
    }
    let point = (0..nv).filter(|&v| alive[v]).map(|v| b.point[v]).collect();
    (edges, point)
}

fn point_distances(nv: usize, edges: &[(usize, usize, u64)], vertex_of: &[usize]) -> Vec<Vec<u64>> {
    let mut adj = vec![Vec::new(); nv];
    for &(u, v, w) in edges {
        adj[u].push((v, w));
        adj[v].push((u, w));
    }
    vertex_of
        .iter()
        .map(|&s| {
            let mut dist = vec![u64::MAX; nv];
            dist[s] = 0;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &(v, w) in &adj[u] {
                    if dist[v] == u64::MAX {
                        dist[v] = dist[u] + w;
                        stack.push(v);
                    }
                }
            }
            vertex_of.iter().map(|&t| dist[t]).collect()
        })
        .collect()
}

/// A walk in the metric with the distance at which each group is covered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricTour {
    pub walk: Vec<usize>,
    pub cover_times: Vec<u64>,
    pub objective: u64,
}

impl EmbeddedTree {
    /// Projects a tree walk onto the metric points it passes through.
    pub fn project(&self, metric: &Metric, groups: &[(Vec<usize>, usize)], tour: &TreeTour) -> MetricTour {
        let mut walk: Vec<usize> = Vec::new();
        for &v in &tour.walk {
            if let Some(p) = self.points[v] {
                if walk.last() != Some(&p) {
                    walk.push(p);
                }
            }
        }
        let mut seen = vec![false; metric.len()];
        let mut counts = vec![0usize; groups.len()];
        let mut times = vec![None; groups.len()];
        let mut t = 0;
        for (i, &p) in walk.iter().enumerate() {
            if i > 0 {
                t += metric.d(walk[i - 1], p);
            }
            if seen[p] {
                continue;
            }
            seen[p] = true;
            for (g, (members, k)) in groups.iter().enumerate() {
                if members.contains(&p) {
                    counts[g] += 1;
                    if counts[g] == *k {
                        times[g] = Some(t);
                    }
                }
            }
        }
        let cover_times: Vec<u64> = times
            .into_iter()
            .map(|t| t.expect("the tree tour covers every group"))
            .collect();
        MetricTour {
            objective: cover_times.iter().sum(),
            walk,
            cover_times,
        }
    }
}
