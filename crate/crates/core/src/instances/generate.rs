//! Seeded instance generators.
//!
//! Every generator is a deterministic function of its arguments; randomness
//! comes from a ChaCha8 stream seeded with the caller's seed.

use std::str::FromStr;

use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::format::{Instance, InstanceKind};
use super::metric::Metric;
use super::tree::RawTree;
use super::valuation::{ExplicitTable, TruncatedCoverage, TruncatedTerm, Valuation, ValuationSet};
use crate::error::{check_cap, Error, Result};
use crate::rational::{rat, Rational};
use crate::stochastic::StochElement;

pub const KINDS: &[&str] = &[
    "uniform-metric",
    "euclidean-grid-metric",
    "random-metric",
    "random-tree",
    "random-groups",
    "random-stochastic",
    "explicit",
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A generator request written `kind:n=<n>:seed=<seed>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub kind: String,
    pub n: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn generate(&self) -> Result<Instance> {
        random_instance(&self.kind, self.n, self.seed)
    }
}

impl FromStr for GenSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let kind = parts.next().unwrap_or_default().to_string();
        let mut spec = GenSpec { kind, n: 6, seed: 0 };
        for p in parts {
            let bad = || Error::Unknown {
                what: "generator option",
                name: p.to_string(),
            };
            let (key, val) = p.split_once('=').ok_or_else(bad)?;
            match key {
                "n" => spec.n = val.parse().map_err(|_| bad())?,
                "seed" => spec.seed = val.parse().map_err(|_| bad())?,
                _ => return Err(bad()),
            }
        }
        if !KINDS.contains(&spec.kind.as_str()) {
            return Err(Error::Unknown {
                what: "generator kind",
                name: spec.kind,
            });
        }
        Ok(spec)
    }
}

/// Generates an instance of the named kind.
///
/// Metric kinds come with random single-group valuations over the vertices,
/// `random-tree` with leaf groups, `random-groups` and `explicit` are ranking
/// instances over `n` elements, and `random-stochastic` has `n` elements.
pub fn random_instance(kind: &str, n: usize, seed: u64) -> Result<Instance> {
    check_cap("generator size", n, 64)?;
    if n == 0 {
        return Err(Error::invalid("generator size must be positive"));
    }
    let mut r = rng(seed);
    let mut inst;
    match kind {
        "uniform-metric" | "euclidean-grid-metric" | "random-metric" => {
            inst = Instance::new(InstanceKind::Mlsc);
            let metric = match kind {
                "uniform-metric" => Metric::uniform(n, 0),
                "euclidean-grid-metric" => grid_metric(n, &mut r)?,
                _ => random_metric(n, 9, &mut r)?,
            };
            let m = r.random_range(1..=3);
            inst.valuations = Some(random_groups(n, m, &mut r));
            inst.metric = Some(metric);
        }
        "random-tree" => {
            inst = Instance::new(InstanceKind::Lcst);
            let raw = random_tree(n.max(2), 9, &mut r);
            inst.groups = raw.groups.clone();
            inst.tree = Some(RawTree { groups: Vec::new(), ..raw });
        }
        "random-groups" => {
            inst = Instance::new(InstanceKind::Ranking);
            let m = r.random_range(1..=4);
            inst.valuations = Some(random_groups(n, m, &mut r));
        }
        "explicit" => {
            check_cap("explicit generator size", n, super::valuation::EXPLICIT_MAX)?;
            inst = Instance::new(InstanceKind::Ranking);
            let m = r.random_range(1..=4);
            inst.valuations = Some(random_explicit_set(n, m, &mut r));
        }
        "random-stochastic" => {
            inst = Instance::new(InstanceKind::Stochastic);
            let (els, vs) = random_stochastic(n, (n + 1).min(64), 3, &mut r);
            inst.valuations = Some(vs);
            inst.stochastic = Some(els);
        }
        other => {
            return Err(Error::Unknown {
                what: "generator kind",
                name: other.to_string(),
            })
        }
    }
    Ok(inst)
}

/// Distinct points on a square grid; distances are Euclidean distances
/// rounded up, which keeps the triangle inequality.
pub fn grid_metric<R: Rng>(n: usize, r: &mut R) -> Result<Metric> {
    let side = ((n as f64).sqrt().ceil() as i64 + 1).max(2);
    let mut cells: Vec<(i64, i64)> = (0..side).flat_map(|x| (0..side).map(move |y| (x, y))).collect();
    cells.shuffle(r);
    cells.truncate(n);
    let dist = cells
        .iter()
        .map(|&(ax, ay)| {
            cells
                .iter()
                .map(|&(bx, by)| {
                    let sq = ((ax - bx).pow(2) + (ay - by).pow(2)) as u64;
                    ceil_sqrt(sq)
                })
                .collect()
        })
        .collect();
    Metric::new(dist, 0)
}

fn ceil_sqrt(v: u64) -> u64 {
    let mut s = (v as f64).sqrt() as u64;
    while s * s < v {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= v {
        s -= 1;
    }
    s
}

/// Shortest-path closure of random edge weights in `1..=max_w`.
pub fn random_metric<R: Rng>(n: usize, max_w: u64, r: &mut R) -> Result<Metric> {
    let mut w = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in 0..i {
            let x = r.random_range(1..=max_w);
            w[i][j] = x;
            w[j][i] = x;
        }
    }
    Metric::closure(w, 0)
}

/// `m` single-group functions `min{|g ∩ S| / k, 1}` over `n` elements.
pub fn random_groups<R: Rng>(n: usize, m: usize, r: &mut R) -> ValuationSet {
    let functions = (0..m)
        .map(|_| {
            let g = random_subset(n, r);
            let k = r.random_range(1..=g.len());
            Valuation::single_group(&g, k)
        })
        .collect();
    ValuationSet::new(n, functions).expect("generated valuations are valid")
}

fn random_subset<R: Rng>(n: usize, r: &mut R) -> Vec<usize> {
    let size = r.random_range(1..=n.min(4));
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(r);
    all.truncate(size);
    all.sort_unstable();
    all
}

/// A tabulated mixture of one to three truncated coverage terms.
pub fn random_explicit<R: Rng>(n: usize, r: &mut R) -> Valuation {
    let terms = r.random_range(1..=3usize);
    let raw: Vec<i128> = (0..terms).map(|_| r.random_range(1..=3)).collect();
    let total: i128 = raw.iter().sum();
    let terms = raw
        .iter()
        .map(|&c| {
            let elems = random_subset(n, r);
            let mut pairs: Vec<(usize, Rational)> = elems
                .iter()
                .map(|&e| (e, rat(1, r.random_range(1..=4))))
                .collect();
            let sum: Rational = pairs.iter().map(|(_, w)| *w).sum();
            if sum < Rational::one() {
                let last = pairs.len() - 1;
                pairs[last].1 += Rational::one() - sum;
            }
            TruncatedTerm::new(rat(c, total), pairs)
        })
        .collect();
    let f = TruncatedCoverage { terms };
    let values = super::set::ElemSet::full(n).subsets().map(|s| f.value(s)).collect();
    Valuation::Explicit(ExplicitTable::new(n, values).expect("n within explicit cap"))
}

pub fn random_explicit_set<R: Rng>(n: usize, m: usize, r: &mut R) -> ValuationSet {
    let functions = (0..m).map(|_| random_explicit(n, r)).collect();
    ValuationSet::new(n, functions).expect("generated valuations are valid")
}

/// Random rooted tree on `n` vertices with edge weights in `1..=max_w` and
/// its leaves split into one to three groups.
pub fn random_tree<R: Rng>(n: usize, max_w: u64, r: &mut R) -> RawTree {
    let mut edges = Vec::with_capacity(n - 1);
    let mut has_child = vec![false; n];
    for v in 1..n {
        let p = r.random_range(0..v);
        has_child[p] = true;
        edges.push((p, v, r.random_range(1..=max_w)));
    }
    let mut leaves: Vec<usize> = (1..n).filter(|&v| !has_child[v]).collect();
    leaves.shuffle(r);
    let count = r.random_range(1..=leaves.len().min(3));
    let mut groups: Vec<(Vec<usize>, usize)> = (0..count).map(|_| (Vec::new(), 0)).collect();
    for (i, &v) in leaves.iter().enumerate() {
        let g = if i < count { i } else { r.random_range(0..count) };
        groups[g].0.push(v);
    }
    for (members, k) in &mut groups {
        members.sort_unstable();
        *k = r.random_range(1..=members.len());
    }
    RawTree {
        vertices: n,
        root: 0,
        edges,
        groups,
    }
}

/// `n` stochastic elements over `domain` points with supports of at most
/// `max_support` outcomes, lengths in `1..=4`, and single-group valuations.
pub fn random_stochastic<R: Rng>(
    n: usize,
    domain: usize,
    max_support: usize,
    r: &mut R,
) -> (Vec<StochElement>, ValuationSet) {
    let elements = (0..n)
        .map(|_| {
            let size = r.random_range(1..=max_support.min(domain));
            let mut pts: Vec<usize> = (0..domain).collect();
            pts.shuffle(r);
            pts.truncate(size);
            let weights: Vec<i128> = (0..size).map(|_| r.random_range(1..=3)).collect();
            let total: i128 = weights.iter().sum();
            let outcomes = pts.into_iter().zip(weights).map(|(b, w)| (b, rat(w, total))).collect();
            StochElement::new(outcomes, r.random_range(1..=4)).expect("probabilities sum to one")
        })
        .collect();
    let m = r.random_range(1..=3);
    (elements, random_groups(domain, m, r))
}

/// Point masses on distinct domain points with unit lengths.
pub fn deterministic_elements(n: usize) -> Vec<StochElement> {
    (0..n).map(|e| StochElement::point(e, 1)).collect()
}
