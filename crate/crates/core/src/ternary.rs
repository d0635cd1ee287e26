//! Ternary structures `(N, B)` with `N = 0..n`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{sorted_unique, Graph, MAX_VERTICES};

/// A finite domain `0..n` with an explicit set of ordered triples.
///
/// No closure is applied: symmetry (axiom A2) and the other axioms are
/// properties tested elsewhere, not invariants of the type.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TernaryStructure {
    n: usize,
    rel: Vec<bool>,
}

impl TernaryStructure {
    pub fn new(n: usize) -> Self {
        assert!(
            n <= MAX_VERTICES,
            "ternary structures are limited to {MAX_VERTICES} elements"
        );
        TernaryStructure {
            n,
            rel: vec![false; n * n * n],
        }
    }

    pub fn from_triples(n: usize, triples: &[(usize, usize, usize)]) -> Result<Self> {
        let mut s = TernaryStructure::new(n);
        for &(x, y, z) in triples {
            for v in [x, y, z] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, size: n });
                }
            }
            s.insert(x, y, z);
        }
        Ok(s)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, x: usize, y: usize, z: usize) -> usize {
        (x * self.n + y) * self.n + z
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize, z: usize) -> bool {
        self.rel[self.idx(x, y, z)]
    }

    pub fn insert(&mut self, x: usize, y: usize, z: usize) {
        let i = self.idx(x, y, z);
        self.rel[i] = true;
    }

    pub fn remove(&mut self, x: usize, y: usize, z: usize) {
        let i = self.idx(x, y, z);
        self.rel[i] = false;
    }

    pub fn len(&self) -> usize {
        self.rel.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.rel.iter().any(|b| *b)
    }

    /// All triples in lexicographic order.
    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.n;
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.contains(x, y, z) {
                        out.push((x, y, z));
                    }
                }
            }
        }
        out
    }

    /// Adds `(z, y, x)` for every `(x, y, z)`.
    pub fn symmetric_closure(&self) -> TernaryStructure {
        let mut s = self.clone();
        for (x, y, z) in self.triples() {
            s.insert(z, y, x);
        }
        s
    }

    /// `B(x1,x2,x3) ∧ B(x2,x3,x4) ∧ ...` along the given sequence.
    pub fn chain(&self, xs: &[usize]) -> bool {
        xs.windows(3).all(|w| self.contains(w[0], w[1], w[2]))
    }

    /// `B(x,y,z) ∨ B(y,x,z) ∨ B(x,z,y)`: one of the three is between the
    /// other two.
    pub fn aligned(&self, x: usize, y: usize, z: usize) -> bool {
        self.contains(x, y, z) || self.contains(y, x, z) || self.contains(x, z, y)
    }

    /// Induced substructure on `xs`, re-indexed in increasing order.
    pub fn induced(&self, xs: &[usize]) -> Result<TernaryStructure> {
        let xs = sorted_unique(xs);
        if let Some(&v) = xs.iter().find(|&&v| v >= self.n) {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                size: self.n,
            });
        }
        Ok(self.induced_sorted(&xs))
    }

    pub(crate) fn induced_sorted(&self, xs: &[usize]) -> TernaryStructure {
        let m = xs.len();
        let mut s = TernaryStructure::new(m);
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in xs.iter().enumerate() {
                for (k, &z) in xs.iter().enumerate() {
                    if self.contains(x, y, z) {
                        s.insert(i, j, k);
                    }
                }
            }
        }
        s
    }

    pub fn delete_vertex(&self, v: usize) -> TernaryStructure {
        let xs: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        self.induced_sorted(&xs)
    }

    /// Relabels element `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> TernaryStructure {
        let mut s = TernaryStructure::new(self.n);
        for (x, y, z) in self.triples() {
            s.insert(perm[x], perm[y], perm[z]);
        }
        s
    }

    /// The Gaifman graph: `u - v` iff `u != v` occur together in a triple.
    pub fn gaifman(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for (x, y, z) in self.triples() {
            for (u, v) in [(x, y), (y, z), (x, z)] {
                if u != v {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Connected components of the Gaifman graph, ordered by least element.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.gaifman()
            .component_masks()
            .into_iter()
            .map(|m| crate::graph::bits(m).collect())
            .collect()
    }
}

impl fmt::Debug for TernaryStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ternary({}; {:?})", self.n, self.triples())
    }
}
