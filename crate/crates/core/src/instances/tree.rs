//! Rooted weighted trees whose leaves are partitioned into demand groups.
//!
//! Edges are identified by their child vertex: edge `v` joins `parent(v)`
//! and `v`. Group members are leaves, so a group member names both a leaf
//! vertex and its leaf edge.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    /// Sorted leaf vertices.
    pub leaves: Vec<usize>,
    pub requirement: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupedTree {
    root: usize,
    parent: Vec<Option<usize>>,
    weight: Vec<u64>,
    children: Vec<Vec<usize>>,
    groups: Vec<Group>,
    group_of: Vec<Option<usize>>,
    /// Vertex of the input this vertex was derived from.
    origin: Vec<usize>,
}

/// Raw tree data before normalization: `(parent, child, weight)` edges in an
/// undirected sense, plus `(members, requirement)` groups.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawTree {
    pub vertices: usize,
    pub root: usize,
    pub edges: Vec<(usize, usize, u64)>,
    pub groups: Vec<(Vec<usize>, usize)>,
}

impl GroupedTree {
    /// Builds a tree that already satisfies the leaf-group assumptions.
    pub fn new(raw: &RawTree) -> Result<Self> {
        let (parent, weight, children) = orient(raw)?;
        let n = raw.vertices;
        let mut group_of = vec![None; n];
        let mut groups = Vec::with_capacity(raw.groups.len());
        for (gi, (members, k)) in raw.groups.iter().enumerate() {
            let mut leaves = members.clone();
            leaves.sort_unstable();
            leaves.dedup();
            if leaves.is_empty() {
                return Err(Error::invalid(format!("group {gi} is empty")));
            }
            if *k < 1 || *k > leaves.len() {
                return Err(Error::invalid(format!(
                    "group {gi} requirement {k} outside 1..={}",
                    leaves.len()
                )));
            }
            for &v in &leaves {
                if v >= n || v == raw.root || !children[v].is_empty() {
                    return Err(Error::invalid(format!("group {gi} member {v} is not a leaf")));
                }
                if group_of[v].replace(gi).is_some() {
                    return Err(Error::invalid(format!("vertex {v} lies in two groups")));
                }
            }
            groups.push(Group {
                leaves,
                requirement: *k,
            });
        }
        for v in 0..n {
            if v != raw.root && children[v].is_empty() && group_of[v].is_none() {
                return Err(Error::invalid(format!("leaf {v} belongs to no group")));
            }
        }
        Ok(GroupedTree {
            root: raw.root,
            parent,
            weight,
            children,
            groups,
            group_of,
            origin: (0..n).collect(),
        })
    }

    /// Normalizes arbitrary tree input: group members that are internal, the
    /// root, or shared between groups get a fresh zero-weight leaf per group;
    /// branches without group leaves are pruned; vertices are relabelled in
    /// depth-first order.
    pub fn normalize(raw: &RawTree) -> Result<Self> {
        let (parent, weight, children) = orient(raw)?;
        let n = raw.vertices;
        let mut membership = vec![0usize; n];
        for (gi, (members, _)) in raw.groups.iter().enumerate() {
            for &v in members {
                if v >= n {
                    return Err(Error::invalid(format!("group {gi} member {v} out of range")));
                }
                membership[v] += 1;
            }
        }

        // Working copy with room for dummy leaves.
        let mut parent = parent;
        let mut weight = weight;
        let mut children = children;
        let mut origin: Vec<usize> = (0..n).collect();
        let mut groups: Vec<(Vec<usize>, usize)> = Vec::with_capacity(raw.groups.len());
        for (members, k) in &raw.groups {
            let mut members = members.clone();
            members.sort_unstable();
            members.dedup();
            let mut leaves = Vec::with_capacity(members.len());
            for v in members {
                let is_leaf = v != raw.root && children[v].is_empty();
                if is_leaf && membership[v] == 1 {
                    leaves.push(v);
                } else {
                    let leaf = parent.len();
                    parent.push(Some(v));
                    weight.push(0);
                    children.push(Vec::new());
                    children[v].push(leaf);
                    origin.push(v);
                    leaves.push(leaf);
                }
            }
            groups.push((leaves, *k));
        }

        let total = parent.len();
        let mut in_group = vec![false; total];
        for (leaves, _) in &groups {
            for &v in leaves {
                in_group[v] = true;
            }
        }
        // Keep vertices on some root-to-group-leaf path.
        let mut keep = vec![false; total];
        keep[raw.root] = true;
        for v in 0..total {
            if in_group[v] {
                let mut u = Some(v);
                while let Some(x) = u {
                    if keep[x] && x != v {
                        break;
                    }
                    keep[x] = true;
                    u = parent[x];
                }
            }
        }

        // Relabel in preorder, visiting children by original index.
        let mut label = vec![usize::MAX; total];
        let mut order = Vec::new();
        let mut stack = vec![raw.root];
        while let Some(v) = stack.pop() {
            label[v] = order.len();
            order.push(v);
            let mut kids: Vec<usize> = children[v].iter().copied().filter(|&c| keep[c]).collect();
            kids.sort_unstable();
            stack.extend(kids.into_iter().rev());
        }

        let mut edges = Vec::with_capacity(order.len().saturating_sub(1));
        for &v in &order {
            if let Some(p) = parent[v] {
                edges.push((label[p], label[v], weight[v]));
            }
        }
        let raw_norm = RawTree {
            vertices: order.len(),
            root: 0,
            edges,
            groups: groups
                .iter()
                .map(|(leaves, k)| (leaves.iter().map(|&v| label[v]).collect(), *k))
                .collect(),
        };
        let mut tree = GroupedTree::new(&raw_norm)?;
        tree.origin = order.iter().map(|&v| origin[v]).collect();
        Ok(tree)
    }

    pub fn to_raw(&self) -> RawTree {
        RawTree {
            vertices: self.len(),
            root: self.root,
            edges: self
                .edges()
                .map(|v| (self.parent[v].unwrap(), v, self.weight[v]))
                .collect(),
            groups: self
                .groups
                .iter()
                .map(|g| (g.leaves.clone(), g.requirement))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Parent edge of edge `e`, if `e` is not incident to the root.
    pub fn parent_edge(&self, e: usize) -> Option<usize> {
        self.parent[e].filter(|&p| p != self.root)
    }

    pub fn weight(&self, e: usize) -> u64 {
        self.weight[e]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        v != self.root && self.children[v].is_empty()
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn group_of(&self, v: usize) -> Option<usize> {
        self.group_of[v]
    }

    pub fn origin(&self, v: usize) -> usize {
        self.origin[v]
    }

    /// Edge ids (child vertices) in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&v| v != self.root)
    }

    pub fn edge_count(&self) -> usize {
        self.len().saturating_sub(1)
    }

    pub fn g_max(&self) -> usize {
        self.groups.iter().map(|g| g.leaves.len()).max().unwrap_or(0)
    }

    pub fn total_weight(&self) -> u64 {
        self.edges().map(|e| self.weight[e]).sum()
    }

    /// Vertices in preorder (parents before children).
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children[v].iter().rev());
        }
        out
    }

    pub fn depth_weight(&self, v: usize) -> u64 {
        let mut d = 0;
        let mut u = v;
        while let Some(p) = self.parent[u] {
            d += self.weight[u];
            u = p;
        }
        d
    }

    /// Tree distance between two vertices.
    pub fn distance(&self, u: usize, v: usize) -> u64 {
        let path_u = self.ancestors(u);
        let path_v = self.ancestors(v);
        let lca = path_u
            .iter()
            .find(|a| path_v.contains(a))
            .copied()
            .unwrap_or(self.root);
        self.depth_weight(u) + self.depth_weight(v) - 2 * self.depth_weight(lca)
    }

    /// `v`, its parent, ..., the root.
    pub fn ancestors(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut u = v;
        while let Some(p) = self.parent[u] {
            out.push(p);
            u = p;
        }
        out
    }

    /// Leaves in the subtree below (and including) vertex `v`.
    pub fn leaves_below(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if self.is_leaf(u) {
                out.push(u);
            }
            stack.extend(self.children[u].iter().rev());
        }
        out
    }

    /// Closed walk from the root traversing every selected edge twice.
    ///
    /// `selected[e]` must be closed under taking parent edges.
    pub fn euler_tour(&self, selected: &[bool]) -> Vec<usize> {
        let mut walk = vec![self.root];
        self.euler_from(self.root, selected, &mut walk);
        walk
    }

    fn euler_from(&self, v: usize, selected: &[bool], walk: &mut Vec<usize>) {
        for &c in &self.children[v] {
            if selected[c] {
                walk.push(c);
                self.euler_from(c, selected, walk);
                walk.push(v);
            }
        }
    }

    pub fn walk_length(&self, walk: &[usize]) -> u64 {
        walk.windows(2).map(|w| self.distance(w[0], w[1])).sum()
    }

    /// Group cover times of a walk starting at the root: the walk distance at
    /// which the `k_g`-th leaf of each group is first reached. `None` for
    /// groups the walk never covers.
    pub fn cover_times(&self, walk: &[usize]) -> Vec<Option<u64>> {
        let mut seen = vec![false; self.len()];
        let mut count = vec![0usize; self.groups.len()];
        let mut times = vec![None; self.groups.len()];
        let mut t = 0u64;
        for (i, &v) in walk.iter().enumerate() {
            if i > 0 {
                t += self.distance(walk[i - 1], v);
            }
            if !seen[v] {
                seen[v] = true;
                if let Some(g) = self.group_of[v] {
                    count[g] += 1;
                    if count[g] == self.groups[g].requirement {
                        times[g] = Some(t);
                    }
                }
            }
        }
        times
    }
}

type Oriented = (Vec<Option<usize>>, Vec<u64>, Vec<Vec<usize>>);

fn orient(raw: &RawTree) -> Result<Oriented> {
    let n = raw.vertices;
    if n == 0 || raw.root >= n {
        return Err(Error::invalid("tree root outside vertex range"));
    }
    if raw.edges.len() + 1 != n {
        return Err(Error::invalid(format!(
            "a tree on {n} vertices needs {} edges, got {}",
            n - 1,
            raw.edges.len()
        )));
    }
    let mut adj: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); n];
    for &(a, b, w) in &raw.edges {
        if a >= n || b >= n || a == b {
            return Err(Error::invalid(format!("bad edge ({a}, {b})")));
        }
        if adj[a].insert(b, w).is_some() {
            return Err(Error::invalid(format!("duplicate edge ({a}, {b})")));
        }
        adj[b].insert(a, w);
    }
    let mut parent = vec![None; n];
    let mut weight = vec![0; n];
    let mut children = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    seen[raw.root] = true;
    let mut stack = vec![raw.root];
    while let Some(v) = stack.pop() {
        for (&u, &w) in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                parent[u] = Some(v);
                weight[u] = w;
                children[v].push(u);
                stack.push(u);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::invalid("tree is disconnected"));
    }
    Ok((parent, weight, children))
}
