//! Finite simple graphs and 2-graphs on dense vertex ids `0..n`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex count a [`Graph`] can hold (adjacency rows are `u64`).
pub const MAX_VERTICES: usize = 64;

/// A finite simple undirected graph with vertices `0..n`.
///
/// Adjacency is kept as one bit row per vertex; rows are symmetric and the
/// diagonal is always clear.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Graph {
    adj: Vec<u64>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        assert!(
            n <= MAX_VERTICES,
            "graphs are limited to {MAX_VERTICES} vertices"
        );
        Graph { adj: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.check(u)?;
            g.check(v)?;
            if u != v {
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.add_edge(n - 1, 0);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                size: self.n(),
            })
        }
    }

    /// Bit mask with one bit per vertex.
    #[inline]
    pub fn full_mask(&self) -> u64 {
        mask_of(self.n())
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "loops are not allowed");
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
    }

    /// Neighbourhood of `v` as a bit mask.
    #[inline]
    pub fn neighbours(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n() {
            for v in bits(self.adj[u] & !mask_of(u + 1)) {
                out.push((u, v));
            }
        }
        out
    }

    /// Induced subgraph on `vertices`, re-indexed densely in increasing order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph> {
        let xs = sorted_unique(vertices);
        for &v in &xs {
            self.check(v)?;
        }
        Ok(self.induced_sorted(&xs))
    }

    pub(crate) fn induced_sorted(&self, xs: &[usize]) -> Graph {
        let mut g = Graph::new(xs.len());
        for (i, &u) in xs.iter().enumerate() {
            for (j, &v) in xs.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Induced subgraph on the vertices of a bit mask.
    pub fn induced_mask(&self, mask: u64) -> Graph {
        let xs: Vec<usize> = bits(mask).collect();
        self.induced_sorted(&xs)
    }

    /// `G - v`.
    pub fn delete_vertex(&self, v: usize) -> Graph {
        self.induced_mask(self.full_mask() & !(1 << v))
    }

    pub fn complement(&self) -> Graph {
        let full = self.full_mask();
        Graph {
            adj: (0..self.n())
                .map(|v| !self.adj[v] & full & !(1 << v))
                .collect(),
        }
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let k = self.n();
        let mut adj = self.adj.clone();
        adj.extend(other.adj.iter().map(|r| r << k));
        assert!(adj.len() <= MAX_VERTICES);
        Graph { adj }
    }

    /// Simultaneous substitution of an edge `a1 - a2` for every `a` in
    /// `targets`.
    ///
    /// Vertex `a` keeps its id and plays the role of `a1`; the new copies
    /// `a2` are appended as `n, n+1, ...` in increasing order of `a`.
    pub fn substitute_k2(&self, targets: &[usize]) -> Result<Graph> {
        let ts = sorted_unique(targets);
        for &a in &ts {
            self.check(a)?;
        }
        let n = self.n();
        let mut twin_of = vec![None; n];
        for (i, &a) in ts.iter().enumerate() {
            twin_of[a] = Some(n + i);
        }
        let mut g = Graph::new(n + ts.len());
        for (u, v) in self.edges() {
            let us = std::iter::once(u).chain(twin_of[u]);
            for x in us {
                for y in std::iter::once(v).chain(twin_of[v]) {
                    g.add_edge(x, y);
                }
            }
        }
        for (i, &a) in ts.iter().enumerate() {
            g.add_edge(a, n + i);
        }
        Ok(g)
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n());
        let mut g = Graph::new(self.n());
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// Connected components as bit masks, ordered by least vertex.
    pub fn component_masks(&self) -> Vec<u64> {
        self.component_masks_within(self.full_mask())
    }

    /// Connected components of the subgraph induced by `within`.
    pub fn component_masks_within(&self, within: u64) -> Vec<u64> {
        let mut rest = within;
        let mut out = Vec::new();
        while rest != 0 {
            let start = rest.trailing_zeros() as usize;
            let comp = self.reach(start, within);
            out.push(comp);
            rest &= !comp;
        }
        out
    }

    /// Vertices reachable from `start` inside `within`.
    pub(crate) fn reach(&self, start: usize, within: u64) -> u64 {
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            next &= within & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.reach(0, self.full_mask()) == self.full_mask()
    }

    /// Maximum distance within a connected component, over all components.
    pub fn max_component_diameter(&self) -> usize {
        (0..self.n())
            .map(|v| self.eccentricity(v))
            .max()
            .unwrap_or(0)
    }

    /// Largest finite distance from `v`.
    pub fn eccentricity(&self, v: usize) -> usize {
        let mut seen = 1u64 << v;
        let mut frontier = seen;
        let mut d = 0;
        loop {
            let mut next = 0;
            for u in bits(frontier) {
                next |= self.adj[u];
            }
            next &= !seen;
            if next == 0 {
                return d;
            }
            seen |= next;
            frontier = next;
            d += 1;
        }
    }

    /// Whether the graph has an induced path on `k` vertices.
    pub fn has_induced_path(&self, k: usize) -> bool {
        self.find_induced_path(k).is_some()
    }

    /// Some induced path `x1 - ... - xk`, if one exists.
    pub fn find_induced_path(&self, k: usize) -> Option<Vec<usize>> {
        if k == 0 {
            return Some(Vec::new());
        }
        let mut path = Vec::with_capacity(k);
        for s in 0..self.n() {
            path.push(s);
            if self.extend_induced_path(&mut path, 1 << s, k) {
                return Some(path);
            }
            path.pop();
        }
        None
    }

    fn extend_induced_path(&self, path: &mut Vec<usize>, on_path: u64, k: usize) -> bool {
        if path.len() == k {
            return true;
        }
        let last = *path.last().unwrap();
        // Neighbours of everything but the last vertex are forbidden.
        let mut blocked = on_path;
        for &p in &path[..path.len() - 1] {
            blocked |= self.adj[p];
        }
        for v in bits(self.adj[last] & !blocked) {
            path.push(v);
            if self.extend_induced_path(path, on_path | 1 << v, k) {
                return true;
            }
            path.pop();
        }
        false
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}; {:?})", self.n(), self.edges())
    }
}

/// Vertex label of a 2-graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    One,
    Two,
}

impl Label {
    pub fn from_digit(d: u32) -> Result<Label> {
        match d {
            1 => Ok(Label::One),
            2 => Ok(Label::Two),
            other => Err(Error::InvalidLabel(other)),
        }
    }

    pub fn digit(self) -> u32 {
        match self {
            Label::One => 1,
            Label::Two => 2,
        }
    }
}

/// A graph with a bipartition of its vertices into 1-vertices and 2-vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwoGraph {
    pub graph: Graph,
    pub labels: Vec<Label>,
}

impl TwoGraph {
    pub fn new(graph: Graph, labels: Vec<Label>) -> Result<Self> {
        if graph.n() != labels.len() {
            return Err(Error::SizeMismatch(graph.n(), labels.len()));
        }
        Ok(TwoGraph { graph, labels })
    }

    /// Labels given by a digit string such as `"1212"`.
    pub fn with_type(graph: Graph, word: &str) -> Result<Self> {
        let t: PathType = word.parse()?;
        TwoGraph::new(graph, t.word)
    }

    /// The path `0 - 1 - ... - (k-1)` labelled by `word`.
    pub fn labelled_path(word: &str) -> Result<Self> {
        let t: PathType = word.parse()?;
        TwoGraph::new(Graph::path(t.word.len()), t.word)
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Bit mask of the 1-vertices.
    pub fn ones_mask(&self) -> u64 {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == Label::One)
            .fold(0, |m, (v, _)| m | 1 << v)
    }

    /// An edge between two 1-vertices, if any.
    pub fn one_one_edge(&self) -> Option<(usize, usize)> {
        let ones = self.ones_mask();
        bits(ones).find_map(|u| {
            bits(self.graph.neighbours(u) & ones)
                .next()
                .map(|v| (u.min(v), u.max(v)))
        })
    }

    /// Whether no edge joins two 1-vertices.
    pub fn is_good_shape(&self) -> bool {
        self.one_one_edge().is_none()
    }

    pub fn induced(&self, vertices: &[usize]) -> Result<TwoGraph> {
        let xs = sorted_unique(vertices);
        let graph = self.graph.induced(&xs)?;
        Ok(TwoGraph {
            graph,
            labels: xs.iter().map(|&v| self.labels[v]).collect(),
        })
    }

    pub fn induced_mask(&self, mask: u64) -> TwoGraph {
        let xs: Vec<usize> = bits(mask).collect();
        TwoGraph {
            graph: self.graph.induced_sorted(&xs),
            labels: xs.iter().map(|&v| self.labels[v]).collect(),
        }
    }

    pub fn delete_vertex(&self, v: usize) -> TwoGraph {
        self.induced_mask(self.graph.full_mask() & !(1 << v))
    }

    pub fn permute(&self, perm: &[usize]) -> TwoGraph {
        let mut labels = vec![Label::Two; self.n()];
        for (v, &p) in perm.iter().enumerate() {
            labels[p] = self.labels[v];
        }
        TwoGraph {
            graph: self.graph.permute(perm),
            labels,
        }
    }

    pub fn type_word(&self) -> String {
        self.labels
            .iter()
            .map(|l| char::from_digit(l.digit(), 10).unwrap())
            .collect()
    }
}

impl fmt::Debug for TwoGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TwoGraph({}; {:?}; {})",
            self.n(),
            self.graph.edges(),
            self.type_word()
        )
    }
}

/// The type of a path in a 2-graph: the word of labels read along it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathType {
    pub word: Vec<Label>,
}

impl PathType {
    pub fn reversed(&self) -> PathType {
        PathType {
            word: self.word.iter().rev().copied().collect(),
        }
    }

    /// Equality up to reading the path backwards.
    pub fn matches_undirected(&self, other: &PathType) -> bool {
        self == other || *self == other.reversed()
    }
}

impl std::str::FromStr for PathType {
    type Err = Error;

    fn from_str(s: &str) -> Result<PathType> {
        let word = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or(Error::InvalidLabel(u32::MAX))
                    .and_then(Label::from_digit)
            })
            .collect::<Result<Vec<_>>>()?;
        if word.is_empty() {
            return Err(Error::InvalidLabel(0));
        }
        Ok(PathType { word })
    }
}

impl fmt::Display for PathType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.word {
            write!(f, "{}", l.digit())?;
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn mask_of(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates over the set bits of a mask, lowest first.
pub fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

pub(crate) fn sorted_unique(xs: &[usize]) -> Vec<usize> {
    let mut v = xs.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}
