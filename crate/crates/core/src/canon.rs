//! Canonical forms and enumeration up to isomorphism.
//!
//! The canonical form of a structure is the lexicographically least encoding
//! over all vertex orders that respect an isomorphism-invariant colouring
//! (iterated colour refinement). The search places vertices one at a time
//! and prunes:
//!
//! * prefixes whose partial encoding is already larger than the best one,
//! * vertices exchangeable with an already tried vertex by a transposition
//!   that is an automorphism.
//!
//! Caps: [`GRAPH_CAP`] vertices for graphs and 2-graphs, [`TERNARY_CAP`]
//! elements for ternary structures.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bits, Graph, Label, TwoGraph};
use crate::ternary::TernaryStructure;

pub const GRAPH_CAP: usize = 16;
pub const TERNARY_CAP: usize = 12;

/// Byte string that is equal for two structures iff they are isomorphic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm(pub Vec<u8>);

impl CanonicalForm {
    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    /// Short stable digest for summary tables (FNV-1a, 64 bits).
    pub fn digest(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for &b in &self.0 {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        h
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Structures with an isomorphism-invariant canonical encoding.
pub trait Canonize: Sized {
    /// Canonical vertex order: position `i` holds the original vertex.
    fn canonical_order(&self) -> Result<Vec<usize>>;

    fn canonical_form(&self) -> Result<CanonicalForm>;

    /// The isomorphic copy whose vertex `i` is `canonical_order()[i]`.
    fn canonical_copy(&self) -> Result<Self>;
}

impl Canonize for Graph {
    fn canonical_order(&self) -> Result<Vec<usize>> {
        Ok(graph_search(self, None)?.0)
    }

    fn canonical_form(&self) -> Result<CanonicalForm> {
        Ok(graph_search(self, None)?.1)
    }

    fn canonical_copy(&self) -> Result<Self> {
        let order = self.canonical_order()?;
        Ok(self.permute(&inverse(&order)))
    }
}

impl Canonize for TwoGraph {
    fn canonical_order(&self) -> Result<Vec<usize>> {
        Ok(graph_search(&self.graph, Some(&self.labels))?.0)
    }

    fn canonical_form(&self) -> Result<CanonicalForm> {
        Ok(graph_search(&self.graph, Some(&self.labels))?.1)
    }

    fn canonical_copy(&self) -> Result<Self> {
        let order = self.canonical_order()?;
        Ok(self.permute(&inverse(&order)))
    }
}

impl Canonize for TernaryStructure {
    fn canonical_order(&self) -> Result<Vec<usize>> {
        Ok(ternary_search(self)?.0)
    }

    fn canonical_form(&self) -> Result<CanonicalForm> {
        Ok(ternary_search(self)?.1)
    }

    fn canonical_copy(&self) -> Result<Self> {
        let order = self.canonical_order()?;
        Ok(self.permute(&inverse(&order)))
    }
}

fn inverse(order: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

/// Replaces each signature by its rank among the distinct signatures.
fn rank<T: Ord + Clone>(sigs: &[T]) -> Vec<u32> {
    let mut distinct: Vec<T> = sigs.to_vec();
    distinct.sort();
    distinct.dedup();
    sigs.iter()
        .map(|s| distinct.binary_search(s).unwrap() as u32)
        .collect()
}

fn class_count(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn graph_colors(g: &Graph, labels: Option<&[Label]>) -> Vec<u32> {
    let n = g.n();
    let mut colors: Vec<u32> = match labels {
        Some(ls) => ls.iter().map(|l| l.digit()).collect(),
        None => vec![0; n],
    };
    colors = rank(&colors);
    loop {
        let sigs: Vec<(u32, Vec<u32>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u32> = bits(g.neighbours(v)).map(|u| colors[u]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let next = rank(&sigs);
        if class_count(&next) == class_count(&colors) {
            return next;
        }
        colors = next;
    }
}

fn graph_search(g: &Graph, labels: Option<&[Label]>) -> Result<(Vec<usize>, CanonicalForm)> {
    let n = g.n();
    if n > GRAPH_CAP {
        return Err(Error::CapExceeded {
            what: "graph canonical form",
            size: n,
            cap: GRAPH_CAP,
        });
    }
    let colors = graph_colors(g, labels);
    let label_of = |v: usize| labels.map_or(0u8, |ls| ls[v].digit() as u8);
    // A transposition (u v) is an automorphism iff u, v carry the same label
    // and are true or false twins.
    let mut swappable = vec![0u64; n];
    for u in 0..n {
        for v in u + 1..n {
            if colors[u] != colors[v] || label_of(u) != label_of(v) {
                continue;
            }
            let nu = g.neighbours(u) & !(1 << v);
            let nv = g.neighbours(v) & !(1 << u);
            if nu == nv {
                swappable[u] |= 1 << v;
                swappable[v] |= 1 << u;
            }
        }
    }
    let chunk = |placed: &[usize]| -> Vec<u8> {
        let d = placed.len() - 1;
        let v = placed[d];
        let mut out = Vec::with_capacity(1 + d.div_ceil(8));
        out.push(label_of(v));
        let mut byte = 0u8;
        for (i, &u) in placed[..d].iter().enumerate() {
            byte = byte << 1 | g.has_edge(u, v) as u8;
            if i % 8 == 7 {
                out.push(byte);
                byte = 0;
            }
        }
        if !d.is_multiple_of(8) {
            out.push(byte << (8 - d % 8));
        }
        out
    };
    let tag = if labels.is_some() { b'L' } else { b'G' };
    Ok(search(n, tag, colors, swappable, chunk))
}

fn ternary_colors(s: &TernaryStructure) -> Vec<u32> {
    let n = s.n();
    let triples = s.triples();
    let mut colors = vec![0u32; n];
    loop {
        let mut sigs: Vec<(u32, Vec<(u8, u32, u32, u32)>)> =
            (0..n).map(|v| (colors[v], Vec::new())).collect();
        for &(x, y, z) in &triples {
            let key =
                |v: usize| (((x == v) as u8) << 2) | (((y == v) as u8) << 1) | ((z == v) as u8);
            let mut seen = 0u64;
            for v in [x, y, z] {
                if seen >> v & 1 == 0 {
                    seen |= 1 << v;
                    sigs[v].1.push((key(v), colors[x], colors[y], colors[z]));
                }
            }
        }
        for sig in &mut sigs {
            sig.1.sort_unstable();
        }
        let next = rank(&sigs);
        if class_count(&next) == class_count(&colors) {
            return next;
        }
        colors = next;
    }
}

fn ternary_search(s: &TernaryStructure) -> Result<(Vec<usize>, CanonicalForm)> {
    let n = s.n();
    if n > TERNARY_CAP {
        return Err(Error::CapExceeded {
            what: "ternary canonical form",
            size: n,
            cap: TERNARY_CAP,
        });
    }
    let colors = ternary_colors(s);
    let mut swappable = vec![0u64; n];
    for u in 0..n {
        for v in u + 1..n {
            if colors[u] != colors[v] {
                continue;
            }
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(u, v);
            if s.permute(&perm) == *s {
                swappable[u] |= 1 << v;
                swappable[v] |= 1 << u;
            }
        }
    }
    let chunk = |placed: &[usize]| -> Vec<u8> {
        let d = placed.len() - 1;
        let mut out = Vec::new();
        let mut byte = 0u8;
        let mut filled = 0;
        for i in 0..=d {
            for j in 0..=d {
                for k in 0..=d {
                    if i.max(j).max(k) != d {
                        continue;
                    }
                    byte = byte << 1 | s.contains(placed[i], placed[j], placed[k]) as u8;
                    filled += 1;
                    if filled == 8 {
                        out.push(byte);
                        byte = 0;
                        filled = 0;
                    }
                }
            }
        }
        if filled > 0 {
            out.push(byte << (8 - filled));
        }
        out
    };
    Ok(search(n, b'T', colors, swappable, chunk))
}

struct Search<F> {
    n: usize,
    colors: Vec<u32>,
    pos_color: Vec<u32>,
    swappable: Vec<u64>,
    chunk: F,
    placed: Vec<usize>,
    used: u64,
    best: Vec<Vec<u8>>,
    best_order: Vec<usize>,
}

impl<F: Fn(&[usize]) -> Vec<u8>> Search<F> {
    fn run(&mut self) {
        let d = self.placed.len();
        if d == self.n {
            return;
        }
        let want = self.pos_color[d];
        let mut tried = 0u64;
        for v in 0..self.n {
            if self.used >> v & 1 == 1 || self.colors[v] != want || self.swappable[v] & tried != 0 {
                continue;
            }
            tried |= 1 << v;
            self.placed.push(v);
            let c = (self.chunk)(&self.placed);
            let proceed = if self.best.len() > d {
                match c.cmp(&self.best[d]) {
                    std::cmp::Ordering::Greater => false,
                    std::cmp::Ordering::Equal => true,
                    std::cmp::Ordering::Less => {
                        self.best.truncate(d);
                        self.best.push(c);
                        self.best_order = self.placed.clone();
                        true
                    }
                }
            } else {
                // Extending the path that currently defines `best`.
                self.best.push(c);
                self.best_order = self.placed.clone();
                true
            };
            if proceed {
                self.used |= 1 << v;
                self.run();
                self.used &= !(1 << v);
            }
            self.placed.pop();
        }
    }
}

fn search<F: Fn(&[usize]) -> Vec<u8>>(
    n: usize,
    tag: u8,
    colors: Vec<u32>,
    swappable: Vec<u64>,
    chunk: F,
) -> (Vec<usize>, CanonicalForm) {
    let mut pos_color = colors.clone();
    pos_color.sort_unstable();
    let mut s = Search {
        n,
        colors,
        pos_color,
        swappable,
        chunk,
        placed: Vec::with_capacity(n),
        used: 0,
        best: Vec::with_capacity(n),
        best_order: Vec::new(),
    };
    s.run();
    let mut code = vec![tag, n as u8];
    for c in &s.best {
        code.extend_from_slice(c);
    }
    (s.best_order, CanonicalForm(code))
}

/// Candidate spaces for ternary enumeration.
///
/// Larger spaces are only tractable for tiny domains; each space has its own
/// size cap (see [`TernarySpace::cap`]).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TernarySpace {
    /// Every set of triples, repeated coordinates included.
    Raw,
    /// Triples of pairwise distinct elements (axiom A1).
    Irreflexive,
    /// Triples of distinct elements, closed under `(x,y,z) -> (z,y,x)`
    /// (axioms A1 and A2).
    Symmetric,
}

impl TernarySpace {
    pub fn cap(self) -> usize {
        match self {
            TernarySpace::Raw => 2,
            TernarySpace::Irreflexive => 3,
            TernarySpace::Symmetric => 4,
        }
    }

    /// Relation atoms involving the new element `v`, given elements `0..v`.
    /// Each atom is a set of triples added or omitted together.
    pub fn new_atoms(self, v: usize) -> Vec<Vec<(usize, usize, usize)>> {
        let mut out = Vec::new();
        let m = v + 1;
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    if x != v && y != v && z != v {
                        continue;
                    }
                    match self {
                        TernarySpace::Raw => out.push(vec![(x, y, z)]),
                        TernarySpace::Irreflexive => {
                            if x != y && y != z && x != z {
                                out.push(vec![(x, y, z)]);
                            }
                        }
                        TernarySpace::Symmetric => {
                            if x != y && y != z && x < z {
                                out.push(vec![(x, y, z), (z, y, x)]);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Structures that can be grown one vertex at a time.
pub trait Extend: Canonize + Clone {
    type Space: Copy + Send + Sync;

    fn empty() -> Self;

    fn size(&self) -> usize;

    /// Largest size supported by [`enumerate_up_to_iso`] in `space`.
    fn enumeration_cap(space: Self::Space) -> usize;

    /// Every structure on `size() + 1` vertices in `space` whose deletion
    /// of the last vertex gives back `self`.
    fn extensions(&self, space: Self::Space) -> Vec<Self>;

    fn delete(&self, v: usize) -> Self;
}

impl Extend for Graph {
    type Space = ();

    fn empty() -> Self {
        Graph::new(0)
    }

    fn size(&self) -> usize {
        self.n()
    }

    fn enumeration_cap(_: ()) -> usize {
        8
    }

    fn extensions(&self, _: ()) -> Vec<Self> {
        let n = self.n();
        (0..1u64 << n)
            .map(|nb| {
                let mut g = self.disjoint_union(&Graph::new(1));
                for u in bits(nb) {
                    g.add_edge(u, n);
                }
                g
            })
            .collect()
    }

    fn delete(&self, v: usize) -> Self {
        self.delete_vertex(v)
    }
}

impl Extend for TwoGraph {
    type Space = ();

    fn empty() -> Self {
        TwoGraph {
            graph: Graph::new(0),
            labels: Vec::new(),
        }
    }

    fn size(&self) -> usize {
        self.n()
    }

    fn enumeration_cap(_: ()) -> usize {
        6
    }

    fn extensions(&self, _: ()) -> Vec<Self> {
        let mut out = Vec::new();
        for g in self.graph.extensions(()) {
            for l in [Label::One, Label::Two] {
                let mut labels = self.labels.clone();
                labels.push(l);
                out.push(TwoGraph {
                    graph: g.clone(),
                    labels,
                });
            }
        }
        out
    }

    fn delete(&self, v: usize) -> Self {
        self.delete_vertex(v)
    }
}

impl Extend for TernaryStructure {
    type Space = TernarySpace;

    fn empty() -> Self {
        TernaryStructure::new(0)
    }

    fn size(&self) -> usize {
        self.n()
    }

    fn enumeration_cap(space: TernarySpace) -> usize {
        space.cap()
    }

    fn extensions(&self, space: TernarySpace) -> Vec<Self> {
        let n = self.n();
        let atoms = space.new_atoms(n);
        let base = {
            let mut s = TernaryStructure::new(n + 1);
            for (x, y, z) in self.triples() {
                s.insert(x, y, z);
            }
            s
        };
        let mut out = Vec::with_capacity(1 << atoms.len());
        for choice in 0..1u64 << atoms.len() {
            let mut s = base.clone();
            for i in bits(choice) {
                for &(x, y, z) in &atoms[i] {
                    s.insert(x, y, z);
                }
            }
            out.push(s);
        }
        out
    }

    fn delete(&self, v: usize) -> Self {
        self.delete_vertex(v)
    }
}

/// One representative per isomorphism class, keyed by canonical form.
pub fn dedupe<S: Canonize>(
    items: impl IntoIterator<Item = S>,
) -> Result<BTreeMap<CanonicalForm, S>> {
    let mut out = BTreeMap::new();
    for s in items {
        let form = s.canonical_form()?;
        out.entry(form).or_insert(s);
    }
    Ok(out)
}

/// All structures of size `n` in `space` passing `filter`, one per
/// isomorphism class, ordered by canonical form.
///
/// Structures are grown vertex by vertex from every class of the previous
/// size, so every class is reached.
pub fn enumerate_up_to_iso<S: Extend>(
    space: S::Space,
    n: usize,
    filter: impl Fn(&S) -> bool,
) -> Result<Vec<S>> {
    let cap = S::enumeration_cap(space);
    if n > cap {
        return Err(Error::CapExceeded {
            what: "enumeration",
            size: n,
            cap,
        });
    }
    let mut level: Vec<S> = vec![S::empty()];
    for _ in 0..n {
        let next = dedupe(level.iter().flat_map(|s| s.extensions(space)))?;
        level = next.into_values().collect();
    }
    Ok(level.into_iter().filter(|s| filter(s)).collect())
}

/// Like [`enumerate_up_to_iso`] for a filter closed under taking induced
/// substructures: only structures passing the filter are extended, which
/// keeps larger sizes tractable. Returns every level `0..=n`.
pub fn enumerate_hereditary<S: Extend + Sync + Send>(
    space: impl Fn(usize) -> S::Space,
    n: usize,
    filter: impl Fn(&S) -> bool + Sync,
) -> Result<Vec<Vec<S>>> {
    use rayon::prelude::*;
    let mut levels = vec![vec![S::empty()]
        .into_iter()
        .filter(|s| filter(s))
        .collect::<Vec<_>>()];
    for k in 1..=n {
        let sp = space(k);
        let prev = levels.last().unwrap();
        let candidates: Vec<S> = prev.iter().flat_map(|s| s.extensions(sp)).collect();
        let kept: Vec<(CanonicalForm, S)> = candidates
            .into_par_iter()
            .filter(|s| filter(s))
            .map(|s| s.canonical_form().map(|f| (f, s)))
            .collect::<Result<_>>()?;
        let mut map = BTreeMap::new();
        for (f, s) in kept {
            map.entry(f).or_insert(s);
        }
        levels.push(map.into_values().collect());
    }
    Ok(levels)
}
