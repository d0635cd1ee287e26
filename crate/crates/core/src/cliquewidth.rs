//! Clique-width terms and an exact search for terms of bounded width.
//!
//! The search builds, bottom-up, states `(W, π)`: a vertex set `W` and a
//! partition `π` of `W` into label classes, such that some term with at
//! most `k` labels evaluates to exactly `G[W]` with classes `π`. Adds are
//! applied as early as possible (after each union, every pair of classes
//! that is complete in `G` is joined), which loses nothing: a later add
//! between two classes joins supersets of the current classes. Two
//! vertices sharing a label are never separated again, so they must have
//! the same neighbours outside `W`.
//!
//! Labels are interchangeable, so states store the partition only; the
//! labels of a witness term are assigned top-down when the term is rebuilt.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bits, Graph};

/// A clique-width term. Labels are positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CwTerm {
    /// `a(x)`: the isolated vertex `x` with label `a`.
    Vertex {
        label: u32,
        vertex: usize,
    },
    Union(Box<CwTerm>, Box<CwTerm>),
    /// Joins every `a`-vertex to every `b`-vertex; `a != b`.
    Add(u32, u32, Box<CwTerm>),
    /// Relabels `a` to `b`.
    Relabel(u32, u32, Box<CwTerm>),
}

/// A graph with a label on each vertex, the value of a term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledGraph {
    pub graph: Graph,
    pub labels: Vec<u32>,
}

impl CwTerm {
    pub fn vertex(label: u32, vertex: usize) -> CwTerm {
        CwTerm::Vertex { label, vertex }
    }

    pub fn union(a: CwTerm, b: CwTerm) -> CwTerm {
        CwTerm::Union(Box::new(a), Box::new(b))
    }

    pub fn add(a: u32, b: u32, t: CwTerm) -> CwTerm {
        CwTerm::Add(a, b, Box::new(t))
    }

    pub fn relabel(a: u32, b: u32, t: CwTerm) -> CwTerm {
        CwTerm::Relabel(a, b, Box::new(t))
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if let CwTerm::Vertex { vertex, .. } = t {
                out.push(*vertex);
            }
        });
        out
    }

    /// Number of distinct labels occurring in the term.
    pub fn width(&self) -> usize {
        let mut labels = Vec::new();
        self.walk(&mut |t| match t {
            CwTerm::Vertex { label, .. } => labels.push(*label),
            CwTerm::Add(a, b, _) | CwTerm::Relabel(a, b, _) => labels.extend([*a, *b]),
            CwTerm::Union(..) => {}
        });
        labels.sort_unstable();
        labels.dedup();
        labels.len()
    }

    fn walk(&self, f: &mut dyn FnMut(&CwTerm)) {
        f(self);
        match self {
            CwTerm::Vertex { .. } => {}
            CwTerm::Union(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            CwTerm::Add(_, _, t) | CwTerm::Relabel(_, _, t) => t.walk(f),
        }
    }

    /// The labelled graph `val(t)`. Vertex names must be exactly `0..k`
    /// where `k` is the number of vertex constants.
    pub fn eval(&self) -> Result<LabelledGraph> {
        let vs = self.vertices();
        let n = vs.len();
        let mut seen = vec![false; n];
        for &v in &vs {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, size: n });
            }
            if seen[v] {
                return Err(Error::DuplicateVertex(v));
            }
            seen[v] = true;
        }
        let mut g = LabelledGraph {
            graph: Graph::new(n),
            labels: vec![0; n],
        };
        self.eval_into(&mut g)?;
        Ok(g)
    }

    fn eval_into(&self, g: &mut LabelledGraph) -> Result<u64> {
        match self {
            CwTerm::Vertex { label, vertex } => {
                if *label == 0 {
                    return Err(Error::InvalidLabel(0));
                }
                g.labels[*vertex] = *label;
                Ok(1 << vertex)
            }
            CwTerm::Union(a, b) => Ok(a.eval_into(g)? | b.eval_into(g)?),
            CwTerm::Add(a, b, t) => {
                if a == b {
                    return Err(Error::EqualAddLabels(*a));
                }
                if *a == 0 || *b == 0 {
                    return Err(Error::InvalidLabel(0));
                }
                let m = t.eval_into(g)?;
                let with = |l: u32| bits(m).filter(|&v| g.labels[v] == l).collect::<Vec<_>>();
                let (xs, ys) = (with(*a), with(*b));
                for &x in &xs {
                    for &y in &ys {
                        g.graph.add_edge(x, y);
                    }
                }
                Ok(m)
            }
            CwTerm::Relabel(a, b, t) => {
                if *a == 0 || *b == 0 {
                    return Err(Error::InvalidLabel(0));
                }
                let m = t.eval_into(g)?;
                for v in bits(m) {
                    if g.labels[v] == *a {
                        g.labels[v] = *b;
                    }
                }
                Ok(m)
            }
        }
    }
}

impl fmt::Display for CwTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CwTerm::Vertex { label, vertex } => write!(f, "{label}({vertex})"),
            CwTerm::Union(a, b) => write!(f, "({a} ⊕ {b})"),
            CwTerm::Add(a, b, t) => write!(f, "add_{a},{b}[{t}]"),
            CwTerm::Relabel(a, b, t) => write!(f, "relab_{a}→{b}[{t}]"),
        }
    }
}

pub fn eval_cw_term(t: &CwTerm) -> Result<LabelledGraph> {
    t.eval()
}

/// Largest graph accepted by [`cwd_at_most`].
pub const CWD_CAP: usize = 12;

#[derive(Clone, Debug)]
enum Back {
    Leaf(usize),
    /// Classes of the two sides and, for each class of the result, the
    /// class indices it takes from each side.
    Union {
        left: usize,
        right: usize,
        parts: Vec<(Option<usize>, Option<usize>)>,
    },
    /// `merge[i]`: the class of the result containing old class `i`.
    Coarsen {
        from: usize,
        merge: Vec<usize>,
    },
}

#[derive(Clone, Debug)]
struct State {
    w: u64,
    classes: Vec<u64>,
    back: Back,
}

struct Search<'a> {
    g: &'a Graph,
    k: usize,
    full: u64,
    states: Vec<State>,
    index: HashMap<(u64, Vec<u64>), usize>,
    by_set: HashMap<u64, Vec<usize>>,
}

/// Sorts classes by least vertex so each partition has one representation.
fn normalize(classes: &mut [u64]) {
    classes.sort_unstable_by_key(|c| c.trailing_zeros());
}

impl Search<'_> {
    /// Neighbours outside `w`, the part of a vertex's neighbourhood that
    /// later operations can still affect.
    fn outside(&self, v: usize, w: u64) -> u64 {
        self.g.neighbours(v) & self.full & !w
    }

    fn type_count(&self, w: u64) -> usize {
        let mut types: Vec<u64> = bits(w).map(|v| self.outside(v, w)).collect();
        types.sort_unstable();
        types.dedup();
        types.len()
    }

    fn insert(&mut self, w: u64, mut classes: Vec<u64>, back: Back) -> Option<usize> {
        normalize(&mut classes);
        let key = (w, classes.clone());
        if self.index.contains_key(&key) {
            return None;
        }
        let id = self.states.len();
        self.states.push(State { w, classes, back });
        self.index.insert(key, id);
        self.by_set.entry(w).or_default().push(id);
        Some(id)
    }

    /// All unions of a state on `w1` with a state on `w2`.
    fn unions(&mut self, w1: u64, w2: u64) {
        let w = w1 | w2;
        let left = self.by_set.get(&w1).cloned().unwrap_or_default();
        let right = self.by_set.get(&w2).cloned().unwrap_or_default();
        for &a in &left {
            for &b in &right {
                let ca = self.states[a].classes.clone();
                let cb = self.states[b].classes.clone();
                let mut used = vec![false; cb.len()];
                let mut pairing = vec![None; ca.len()];
                self.matchings(w, &ca, &cb, 0, &mut pairing, &mut used, a, b);
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn matchings(
        &mut self,
        w: u64,
        ca: &[u64],
        cb: &[u64],
        i: usize,
        pairing: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        a: usize,
        b: usize,
    ) {
        let matched = pairing.iter().filter(|p| p.is_some()).count();
        if ca.len() + cb.len() - matched - (ca.len() - i).min(cb.len() - matched) > self.k {
            return;
        }
        if i == ca.len() {
            self.try_union(w, ca, cb, pairing, a, b);
            return;
        }
        pairing[i] = None;
        self.matchings(w, ca, cb, i + 1, pairing, used, a, b);
        let ta = self.outside(ca[i].trailing_zeros() as usize, w);
        for j in 0..cb.len() {
            if used[j] {
                continue;
            }
            // One label for both: equal outside neighbourhoods, and no
            // edge between them since none can ever be added.
            let tb = self.outside(cb[j].trailing_zeros() as usize, w);
            if ta != tb || bits(ca[i]).any(|u| self.g.neighbours(u) & cb[j] != 0) {
                continue;
            }
            used[j] = true;
            pairing[i] = Some(j);
            self.matchings(w, ca, cb, i + 1, pairing, used, a, b);
            pairing[i] = None;
            used[j] = false;
        }
    }

    fn try_union(
        &mut self,
        w: u64,
        ca: &[u64],
        cb: &[u64],
        pairing: &[Option<usize>],
        a: usize,
        b: usize,
    ) {
        let mut parts: Vec<(Option<usize>, Option<usize>)> = Vec::new();
        for (i, p) in pairing.iter().enumerate() {
            parts.push((Some(i), *p));
        }
        for j in 0..cb.len() {
            if !pairing.contains(&Some(j)) {
                parts.push((None, Some(j)));
            }
        }
        if parts.len() > self.k {
            return;
        }
        let masks: Vec<u64> = parts
            .iter()
            .map(|&(i, j)| i.map_or(0, |i| ca[i]) | j.map_or(0, |j| cb[j]))
            .collect();
        let w1 = ca.iter().fold(0, |m, c| m | c);
        let w2 = cb.iter().fold(0, |m, c| m | c);
        // After saturation, class pair (x, y) is joined iff complete in G.
        let complete = |x: usize, y: usize| {
            bits(masks[x]).all(|u| self.g.neighbours(u) & masks[y] == masks[y])
        };
        let m = masks.len();
        let joined: Vec<u64> = (0..m)
            .map(|x| {
                (0..m)
                    .filter(|&y| x != y && complete(x, y))
                    .fold(0, |acc, y| acc | masks[y])
            })
            .collect();
        for (x, &mask) in masks.iter().enumerate() {
            for u in bits(mask) {
                let other = if w1 >> u & 1 == 1 { w2 } else { w1 };
                if self.g.neighbours(u) & other != joined[x] & other {
                    return;
                }
            }
        }
        self.insert(
            w,
            masks,
            Back::Union {
                left: a,
                right: b,
                parts,
            },
        );
    }

    /// Closes the states on `w` under merging two classes with the same
    /// outside neighbourhood.
    fn coarsen(&mut self, w: u64) {
        let mut queue = self.by_set.get(&w).cloned().unwrap_or_default();
        while let Some(id) = queue.pop() {
            let classes = self.states[id].classes.clone();
            for x in 0..classes.len() {
                for y in x + 1..classes.len() {
                    let tx = self.outside(classes[x].trailing_zeros() as usize, w);
                    let ty = self.outside(classes[y].trailing_zeros() as usize, w);
                    if tx != ty {
                        continue;
                    }
                    let mut merged: Vec<u64> = Vec::new();
                    let mut merge = vec![0; classes.len()];
                    for (i, &c) in classes.iter().enumerate() {
                        if i == y {
                            continue;
                        }
                        merge[i] = merged.len();
                        merged.push(if i == x { c | classes[y] } else { c });
                    }
                    merge[y] = merge[x];
                    // `insert` normalizes the class order; record where each
                    // old class went in the normalized order.
                    let mut sorted = merged.clone();
                    normalize(&mut sorted);
                    let merge: Vec<usize> = merge
                        .iter()
                        .map(|&c| sorted.iter().position(|&s| s == merged[c]).unwrap())
                        .collect();
                    if let Some(new) = self.insert(w, merged, Back::Coarsen { from: id, merge }) {
                        queue.push(new);
                    }
                }
            }
        }
    }

    /// A term for state `id` giving class `i` the label `labels[i]`.
    fn term(&self, id: usize, labels: &[u32]) -> CwTerm {
        let st = &self.states[id];
        match &st.back {
            Back::Leaf(v) => CwTerm::vertex(labels[0], *v),
            Back::Coarsen { from, merge } => {
                let old = &self.states[*from];
                let mut old_labels = vec![0u32; old.classes.len()];
                let mut taken = vec![false; st.classes.len()];
                for (i, &c) in merge.iter().enumerate() {
                    if !taken[c] {
                        taken[c] = true;
                        old_labels[i] = labels[c];
                    }
                }
                let mut spare = (1..=self.k as u32).filter(|l| !labels.contains(l));
                for l in old_labels.iter_mut() {
                    if *l == 0 {
                        *l = spare.next().expect("enough labels for the finer partition");
                    }
                }
                let mut t = self.term(*from, &old_labels);
                for (i, &c) in merge.iter().enumerate() {
                    if old_labels[i] != labels[c] {
                        t = CwTerm::relabel(old_labels[i], labels[c], t);
                    }
                }
                t
            }
            Back::Union { left, right, parts } => {
                let (l, r) = (&self.states[*left], &self.states[*right]);
                let mut ll = vec![0u32; l.classes.len()];
                let mut rl = vec![0u32; r.classes.len()];
                // `parts` is in pre-normalization order; find each part's
                // class in the stored order by its mask.
                for &(i, j) in parts {
                    let mask = i.map_or(0, |i| l.classes[i]) | j.map_or(0, |j| r.classes[j]);
                    let c = st.classes.iter().position(|&m| m == mask).unwrap();
                    if let Some(i) = i {
                        ll[i] = labels[c];
                    }
                    if let Some(j) = j {
                        rl[j] = labels[c];
                    }
                }
                let mut t = CwTerm::union(self.term(*left, &ll), self.term(*right, &rl));
                let m = st.classes.len();
                for x in 0..m {
                    for y in x + 1..m {
                        let (cx, cy) = (st.classes[x], st.classes[y]);
                        let complete = bits(cx).all(|u| self.g.neighbours(u) & cy == cy);
                        let crosses =
                            (cx & l.w != 0 && cy & r.w != 0) || (cx & r.w != 0 && cy & l.w != 0);
                        if complete && crosses {
                            t = CwTerm::add(labels[x], labels[y], t);
                        }
                    }
                }
                t
            }
        }
    }
}

/// A term of width at most `k` evaluating to `g`, or `None` if
/// `cwd(g) > k`. The empty graph has no term.
pub fn cwd_at_most(g: &Graph, k: usize) -> Result<Option<CwTerm>> {
    let n = g.n();
    if n > CWD_CAP {
        return Err(Error::CapExceeded {
            what: "clique-width search",
            size: n,
            cap: CWD_CAP,
        });
    }
    if n == 0 || k == 0 {
        return Ok(None);
    }
    let full = g.full_mask();
    let mut s = Search {
        g,
        k,
        full,
        states: Vec::new(),
        index: HashMap::new(),
        by_set: HashMap::new(),
    };
    let mut sets: Vec<u64> = (1..=full).filter(|&w| s.type_count(w) <= k).collect();
    sets.sort_by_key(|w| w.count_ones());
    for &w in &sets {
        if w.count_ones() == 1 {
            s.insert(w, vec![w], Back::Leaf(w.trailing_zeros() as usize));
            continue;
        }
        let low = w & w.wrapping_neg();
        let rest = w & !low;
        // Proper splits with the least vertex on the left.
        let mut sub = (rest - 1) & rest;
        loop {
            let w1 = low | sub;
            let w2 = w & !w1;
            if s.by_set.contains_key(&w1) && s.by_set.contains_key(&w2) {
                s.unions(w1, w2);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        s.coarsen(w);
    }
    let Some(ids) = s.by_set.get(&full) else {
        return Ok(None);
    };
    let id = ids[0];
    let labels: Vec<u32> = (1..=s.states[id].classes.len() as u32).collect();
    let t = s.term(id, &labels);
    debug_assert_eq!(t.eval().map(|v| v.graph), Ok(g.clone()));
    Ok(Some(t))
}

/// Least `k <= max_k` with a term of width `k`, with the term.
pub fn clique_width(g: &Graph, max_k: usize) -> Result<Option<(usize, CwTerm)>> {
    for k in 1..=max_k {
        if let Some(t) = cwd_at_most(g, k)? {
            return Ok(Some((k, t)));
        }
    }
    Ok(None)
}
