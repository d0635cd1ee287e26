//! Finite rooted forests ordered by the ancestor relation, marked join-trees
//! and the betweenness relations they generate.
//!
//! The order is `x <= y` iff `y` lies on the path from the root to `x`.
//! The degree of a node is its number of sons, which for finite forests
//! agrees with the order-theoretic notion (number of maximal elements of the
//! strict down-set's branches).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bits, Graph, MAX_VERTICES};
use crate::ternary::TernaryStructure;

/// A finite rooted forest on nodes `0..n`, stored as a parent map.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Option<usize>>", into = "Vec<Option<usize>>")]
pub struct RootedForest {
    parent: Vec<Option<usize>>,
    /// `up[x]`: mask of `x` and all its ancestors.
    up: Vec<u64>,
    depth: Vec<usize>,
}

impl TryFrom<Vec<Option<usize>>> for RootedForest {
    type Error = Error;

    fn try_from(parent: Vec<Option<usize>>) -> Result<Self> {
        RootedForest::new(parent)
    }
}

impl From<RootedForest> for Vec<Option<usize>> {
    fn from(f: RootedForest) -> Self {
        f.parent
    }
}

impl RootedForest {
    /// Checks that parents are in range and that the parent map is acyclic.
    pub fn new(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        if n > MAX_VERTICES {
            return Err(Error::CapExceeded {
                what: "rooted forest",
                size: n,
                cap: MAX_VERTICES,
            });
        }
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(Error::VertexOutOfRange { vertex: p, size: n });
                }
                if p == v {
                    return Err(Error::InvalidTree(format!("node {v} is its own parent")));
                }
            }
        }
        let mut up = vec![0u64; n];
        let mut depth = vec![0usize; n];
        for v in 0..n {
            let mut mask = 0u64;
            let mut cur = Some(v);
            let mut d = 0;
            while let Some(c) = cur {
                if mask >> c & 1 == 1 {
                    return Err(Error::InvalidTree(format!("cycle through node {c}")));
                }
                mask |= 1 << c;
                cur = parent[c];
                d += 1;
            }
            up[v] = mask;
            depth[v] = d - 1;
        }
        Ok(RootedForest { parent, up, depth })
    }

    /// A chain `0 > 1 > ... > n-1` with root 0.
    pub fn chain(n: usize) -> Self {
        RootedForest::new((0..n).map(|v| v.checked_sub(1)).collect()).unwrap()
    }

    /// Root 0 with sons `1..n`.
    pub fn star(n: usize) -> Self {
        RootedForest::new(
            (0..n)
                .map(|v| if v == 0 { None } else { Some(0) })
                .collect(),
        )
        .unwrap()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&v| self.parent[v].is_none())
            .collect()
    }

    /// Sons of `v` in increasing order.
    pub fn sons(&self, v: usize) -> Vec<usize> {
        (0..self.n())
            .filter(|&u| self.parent[u] == Some(v))
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.parent.iter().filter(|p| **p == Some(v)).count()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.degree(v) == 0
    }

    /// Mask of `v` and its ancestors: the set `L_>=(v)`.
    #[inline]
    pub fn up_mask(&self, v: usize) -> u64 {
        self.up[v]
    }

    /// `x <= y`: `y` is `x` or an ancestor of `x`.
    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x] >> y & 1 == 1
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// Least common upper bound, if `x` and `y` lie in the same tree.
    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        let common = self.up[x] & self.up[y];
        if common == 0 {
            return None;
        }
        bits(common).find(|&c| self.up[c] == common)
    }

    /// Strict descendants of `v` as a mask.
    pub fn below_mask(&self, v: usize) -> u64 {
        (0..self.n())
            .filter(|&u| u != v && self.leq(u, v))
            .fold(0, |m, u| m | 1 << u)
    }

    /// The betweenness relation of the forest over all its nodes.
    pub fn betweenness(&self) -> TernaryStructure {
        let all: Vec<usize> = (0..self.n()).collect();
        between_on(self, &all, |_| false)
    }

    /// Graph with an edge between every two incomparable nodes.
    pub fn cocomparability(&self) -> Graph {
        let n = self.n();
        let mut g = Graph::new(n);
        for x in 0..n {
            for y in x + 1..n {
                if !self.comparable(x, y) {
                    g.add_edge(x, y);
                }
            }
        }
        g
    }

    /// Restriction of the order to `nodes` (re-indexed in increasing order):
    /// the parent of a kept node is its nearest kept ancestor.
    pub fn restrict(&self, nodes: &[usize]) -> RootedForest {
        let keep = nodes.iter().fold(0u64, |m, &v| m | 1 << v);
        let kept: Vec<usize> = bits(keep).collect();
        let index = |v: usize| kept.binary_search(&v).unwrap();
        let parent = kept
            .iter()
            .map(|&v| {
                let mut cur = self.parent[v];
                while let Some(c) = cur {
                    if keep >> c & 1 == 1 {
                        return Some(index(c));
                    }
                    cur = self.parent[c];
                }
                None
            })
            .collect();
        RootedForest::new(parent).unwrap()
    }
}

impl fmt::Debug for RootedForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootedForest{:?}", self.parent)
    }
}

/// `B(x,y,z)` over the given nodes, with joins satisfying `suppressed`
/// contributing nothing.
fn between_on(
    f: &RootedForest,
    nodes: &[usize],
    suppressed: impl Fn(usize) -> bool,
) -> TernaryStructure {
    let m = nodes.len();
    let mut s = TernaryStructure::new(m);
    for (i, &x) in nodes.iter().enumerate() {
        for (k, &z) in nodes.iter().enumerate() {
            if i == k {
                continue;
            }
            let Some(j) = f.join(x, z) else { continue };
            if suppressed(j) {
                continue;
            }
            for (l, &y) in nodes.iter().enumerate() {
                if l == i || l == k || !f.leq(y, j) {
                    continue;
                }
                if f.lt(x, y) || f.lt(z, y) {
                    s.insert(i, l, k);
                }
            }
        }
    }
    s
}

/// Node kinds of a marked join-tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mark {
    Plain,
    /// `⊕`: joins at this node generate no triples.
    Oplus,
    /// `⊗`: an auxiliary join node that behaves like a plain one for
    /// betweenness but carries no element.
    Otimes,
}

impl Mark {
    /// Letter used by the text format: `V`, `P` (⊕) or `T` (⊗).
    pub fn letter(self) -> char {
        match self {
            Mark::Plain => 'V',
            Mark::Oplus => 'P',
            Mark::Otimes => 'T',
        }
    }

    pub fn from_letter(c: char) -> Option<Mark> {
        match c {
            'V' => Some(Mark::Plain),
            'P' => Some(Mark::Oplus),
            'T' => Some(Mark::Otimes),
            _ => None,
        }
    }
}

/// A finite rooted tree whose internal nodes may be marked `⊕` or `⊗`.
/// The plain nodes carry the betweenness structure.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarkedJoinTree {
    tree: RootedForest,
    marks: Vec<Mark>,
}

impl MarkedJoinTree {
    /// Requires a single root (unless empty) and no marked leaf.
    pub fn new(parent: Vec<Option<usize>>, marks: Vec<Mark>) -> Result<Self> {
        if parent.len() != marks.len() {
            return Err(Error::SizeMismatch(parent.len(), marks.len()));
        }
        let tree = RootedForest::new(parent)?;
        MarkedJoinTree::from_parts(tree, marks)
    }

    pub fn from_parts(tree: RootedForest, marks: Vec<Mark>) -> Result<Self> {
        if tree.n() != marks.len() {
            return Err(Error::SizeMismatch(tree.n(), marks.len()));
        }
        let roots = tree.roots();
        if tree.n() > 0 && roots.len() != 1 {
            return Err(Error::InvalidTree(format!(
                "expected one root, found {}",
                roots.len()
            )));
        }
        for (v, &mark) in marks.iter().enumerate() {
            if mark != Mark::Plain && tree.is_leaf(v) {
                return Err(Error::InvalidTree(format!("marked node {v} is a leaf")));
            }
        }
        Ok(MarkedJoinTree { tree, marks })
    }

    /// All nodes plain.
    pub fn unmarked(tree: RootedForest) -> Result<Self> {
        let marks = vec![Mark::Plain; tree.n()];
        MarkedJoinTree::from_parts(tree, marks)
    }

    pub fn empty() -> Self {
        MarkedJoinTree {
            tree: RootedForest::new(Vec::new()).unwrap(),
            marks: Vec::new(),
        }
    }

    pub fn tree(&self) -> &RootedForest {
        &self.tree
    }

    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    pub fn mark(&self, v: usize) -> Mark {
        self.marks[v]
    }

    /// Total number of nodes `|M|`.
    pub fn size(&self) -> usize {
        self.tree.n()
    }

    pub fn root(&self) -> Option<usize> {
        self.tree.roots().first().copied()
    }

    /// The plain nodes `V_T` in increasing order.
    pub fn plain_nodes(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&v| self.marks[v] == Mark::Plain)
            .collect()
    }

    /// No marked node has exactly one son.
    pub fn is_reduced(&self) -> bool {
        (0..self.size()).all(|v| self.marks[v] == Mark::Plain || self.tree.degree(v) != 1)
    }

    /// `B_T` over `V_T`. Domain element `i` is the plain node
    /// `plain_nodes()[i]`.
    pub fn betweenness(&self) -> TernaryStructure {
        between_on(&self.tree, &self.plain_nodes(), |j| {
            self.marks[j] == Mark::Oplus
        })
    }

    /// Splices out every marked node with exactly one son, so that its son
    /// takes its place. Returns the reduced tree and, for each new node, its
    /// old id (surviving nodes keep their relative order).
    pub fn reduce(&self) -> (MarkedJoinTree, Vec<usize>) {
        let n = self.size();
        let removed: Vec<bool> = (0..n)
            .map(|v| self.marks[v] != Mark::Plain && self.tree.degree(v) == 1)
            .collect();
        let kept: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
        let mut new_id = vec![usize::MAX; n];
        for (i, &v) in kept.iter().enumerate() {
            new_id[v] = i;
        }
        let parent = kept
            .iter()
            .map(|&v| {
                let mut cur = self.tree.parent(v);
                while let Some(c) = cur {
                    if !removed[c] {
                        return Some(new_id[c]);
                    }
                    cur = self.tree.parent(c);
                }
                None
            })
            .collect();
        let marks = kept.iter().map(|&v| self.marks[v]).collect();
        let t = MarkedJoinTree::new(parent, marks).expect("splicing keeps a valid marked tree");
        (t, kept)
    }

    /// A tree defining `B_T` restricted to the given plain nodes: keeps the
    /// nodes above some retained node, turns the other plain nodes into `⊗`
    /// nodes and reduces. Returns the tree and the new id of each retained
    /// node, in the order given.
    pub fn restrict(&self, retained: &[usize]) -> Result<(MarkedJoinTree, Vec<usize>)> {
        for &v in retained {
            if v >= self.size() {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    size: self.size(),
                });
            }
            if self.marks[v] != Mark::Plain {
                return Err(Error::InvalidTree(format!("node {v} is not plain")));
            }
        }
        let keep_set = retained.iter().fold(0u64, |m, &v| m | 1 << v);
        let above = retained.iter().fold(0u64, |m, &v| m | self.tree.up_mask(v));
        let nodes: Vec<usize> = bits(above).collect();
        let sub = self.tree.restrict(&nodes);
        let marks = nodes
            .iter()
            .map(|&v| match self.marks[v] {
                Mark::Plain if keep_set >> v & 1 == 0 => Mark::Otimes,
                m => m,
            })
            .collect();
        let t = MarkedJoinTree::from_parts(sub, marks)?;
        let (r, old) = t.reduce();
        let ids = retained
            .iter()
            .map(|v| {
                let i = nodes.binary_search(v).unwrap();
                old.iter().position(|&o| o == i).unwrap()
            })
            .collect();
        Ok((r, ids))
    }
}

impl fmt::Debug for MarkedJoinTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MarkedJoinTree{{")?;
        for v in 0..self.size() {
            if v > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}{}", self.marks[v].letter())?;
            if let Some(p) = self.tree.parent(v) {
                write!(f, "<{p}")?;
            }
        }
        write!(f, "}}")
    }
}

/// `B_T` for a marked join-tree, with the plain node of each domain element.
pub fn betweenness_marked(t: &MarkedJoinTree) -> (TernaryStructure, Vec<usize>) {
    (t.betweenness(), t.plain_nodes())
}

pub fn betweenness_forest(f: &RootedForest) -> TernaryStructure {
    f.betweenness()
}

pub fn join(f: &RootedForest, x: usize, y: usize) -> Option<usize> {
    f.join(x, y)
}

pub fn reduce(t: &MarkedJoinTree) -> (MarkedJoinTree, Vec<usize>) {
    t.reduce()
}

pub fn cocomparability(f: &RootedForest) -> Graph {
    f.cocomparability()
}

/// The join-completion of a forest: the sets `L_>=(x) ∩ L_>=(y)` ordered by
/// reverse inclusion, with `h(x) = L_>=(x)`.
#[derive(Clone, Debug)]
pub struct JoinCompletion {
    pub tree: RootedForest,
    /// The up-set of the original forest represented by each node; the
    /// artificial top, when present, is the empty set.
    pub sets: Vec<u64>,
    /// `h[x]`: the node representing `L_>=(x)`.
    pub h: Vec<usize>,
}

/// Join-completion of `f`. With `artificial_top`, a forest with several
/// trees gets the empty set as a common top, so the result is one tree.
pub fn join_completion(f: &RootedForest, artificial_top: bool) -> JoinCompletion {
    let n = f.n();
    let mut sets: Vec<u64> = Vec::new();
    for x in 0..n {
        for y in x..n {
            let s = f.up_mask(x) & f.up_mask(y);
            if s != 0 || (artificial_top && f.roots().len() > 1) {
                sets.push(s);
            }
        }
    }
    // Larger sets lie lower; sorting by decreasing size puts sons first.
    sets.sort_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b)));
    sets.dedup();
    let parent = sets
        .iter()
        .map(|&a| {
            sets.iter()
                .enumerate()
                .filter(|(_, &b)| b != a && b & a == b)
                .max_by_key(|(_, &b)| b.count_ones())
                .map(|(i, _)| i)
        })
        .collect();
    let tree = RootedForest::new(parent).expect("up-sets form a forest");
    let h = (0..n)
        .map(|x| sets.iter().position(|&s| s == f.up_mask(x)).unwrap())
        .collect();
    JoinCompletion { tree, sets, h }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plain_chain(n: usize) -> MarkedJoinTree {
        MarkedJoinTree::unmarked(RootedForest::chain(n)).unwrap()
    }

    #[test]
    fn join_examples() {
        let c = RootedForest::chain(3);
        assert_eq!(c.join(1, 2), Some(1));
        let s = RootedForest::star(3);
        assert_eq!(s.join(1, 2), Some(0));
        let f = RootedForest::new(vec![None, Some(0), None, Some(2)]).unwrap();
        assert_eq!(f.join(1, 3), None);
    }

    #[test]
    fn chain_betweenness() {
        // root 0 (r) > 1 (a) > 2 (b)
        let (b, map) = betweenness_marked(&plain_chain(3));
        assert_eq!(map, vec![0, 1, 2]);
        assert_eq!(b.triples(), vec![(0, 1, 2), (2, 1, 0)]);
        assert_eq!(betweenness_forest(&RootedForest::chain(3)), b);
    }

    #[test]
    fn oplus_star_is_empty() {
        let t = MarkedJoinTree::new(
            vec![None, Some(0), Some(0), Some(0)],
            vec![Mark::Oplus, Mark::Plain, Mark::Plain, Mark::Plain],
        )
        .unwrap();
        assert!(t.betweenness().is_empty());
        assert_eq!(t.betweenness().n(), 3);
    }

    #[test]
    fn two_chains_give_union() {
        let f = RootedForest::new(vec![None, Some(0), Some(1), None, Some(3), Some(4)]).unwrap();
        let b = f.betweenness();
        assert_eq!(
            b.triples(),
            vec![(0, 1, 2), (2, 1, 0), (3, 4, 5), (5, 4, 3)]
        );
    }

    #[test]
    fn reduce_examples() {
        // r > m(⊗) > a
        let t = MarkedJoinTree::new(
            vec![None, Some(0), Some(1)],
            vec![Mark::Plain, Mark::Otimes, Mark::Plain],
        )
        .unwrap();
        let (r, old) = t.reduce();
        assert_eq!(old, vec![0, 2]);
        assert_eq!(r, plain_chain(2));
        assert!(r.is_reduced());
        let (again, _) = r.reduce();
        assert_eq!(again, r);
    }

    #[test]
    fn invalid_trees_rejected() {
        assert!(RootedForest::new(vec![Some(1), Some(0)]).is_err());
        assert!(RootedForest::new(vec![Some(5)]).is_err());
        assert!(MarkedJoinTree::new(vec![None, Some(0)], vec![Mark::Plain, Mark::Oplus]).is_err());
        assert!(MarkedJoinTree::new(vec![None, None], vec![Mark::Plain, Mark::Plain]).is_err());
    }

    #[test]
    fn cocomparability_examples() {
        assert_eq!(RootedForest::chain(4).cocomparability().edge_count(), 0);
        let g = RootedForest::star(4).cocomparability();
        assert_eq!(g.degree(0), 0);
        assert_eq!(g.induced(&[1, 2, 3]).unwrap(), Graph::complete(3));
    }

    #[test]
    fn completion_of_tree_is_isomorphic() {
        let f = RootedForest::new(vec![None, Some(0), Some(0), Some(1), Some(1)]).unwrap();
        let c = join_completion(&f, true);
        assert_eq!(c.tree.n(), 5);
        let mut h = c.h.clone();
        h.sort();
        h.dedup();
        assert_eq!(h.len(), 5);
        for x in 0..5 {
            assert_eq!(c.tree.parent(c.h[x]), f.parent(x).map(|p| c.h[p]));
        }
    }

    #[test]
    fn completion_of_two_chains_gets_top() {
        let f = RootedForest::new(vec![None, Some(0), None, Some(2)]).unwrap();
        let c = join_completion(&f, true);
        assert_eq!(c.tree.n(), 5);
        assert_eq!(c.tree.roots().len(), 1);
        let top = c.tree.roots()[0];
        assert_eq!(c.sets[top], 0);
        assert_eq!(c.tree.join(c.h[1], c.h[3]), Some(top));
        let without = join_completion(&f, false);
        assert_eq!(without.tree.n(), 4);
        assert_eq!(without.tree.roots().len(), 2);
    }

    #[test]
    fn restrict_drops_plain_nodes() {
        // 0 > 1 > 2 > 3, keep 0 and 3: middle nodes become ⊗ and are reduced.
        let t = plain_chain(4);
        let (r, ids) = t.restrict(&[0, 3]).unwrap();
        assert_eq!(r.size(), 2);
        assert_eq!(ids, vec![0, 1]);
        let t = plain_chain(4);
        let (r, ids) = t.restrict(&[3, 1, 0]).unwrap();
        let (b, map) = betweenness_marked(&r);
        assert_eq!(map.len(), 3);
        let expected = t.betweenness().induced(&[0, 1, 3]).unwrap();
        assert_eq!(b, expected);
        assert_eq!(ids.len(), 3);
    }
}
