//! Cographs, partitioned probe cographs (pp-cographs) and probe cographs
//! (p-cographs).
//!
//! A 2-graph is a pp-cograph when adding some edges between 1-vertices
//! turns it into a cograph. Recognition here is by decomposition: a
//! disconnected 2-graph splits into its components; a connected one must
//! split by the modified join `⊗`, whose parts are unions of components of
//! the graph of "forbidden cross pairs" (non-edges not between two
//! 1-vertices). If that graph is connected, no split exists.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::canon::{CanonicalForm, Canonize};
use crate::error::{Error, Result};
use crate::graph::{bits, Graph, Label, TwoGraph};

/// A term over `⊕` (disjoint union) and `⊗` (complete join).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CographTerm {
    Leaf(usize),
    Oplus(Vec<CographTerm>),
    Otimes(Vec<CographTerm>),
}

/// A term over `⊕` and the modified join `⊗`, which omits edges between
/// two 1-vertices. Leaves carry their label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PPTerm {
    Leaf(usize, Label),
    Oplus(Vec<PPTerm>),
    Otimes(Vec<PPTerm>),
}

impl CographTerm {
    /// Vertices in left-to-right order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            CographTerm::Leaf(v) => out.push(*v),
            CographTerm::Oplus(ts) | CographTerm::Otimes(ts) => {
                ts.iter().for_each(|t| t.collect_leaves(out))
            }
        }
    }

    /// The graph defined by the term. Vertex names must be exactly
    /// `0..k` where `k` is the number of leaves.
    pub fn eval(&self) -> Result<Graph> {
        let n = check_names(&self.leaves())?;
        let mut g = Graph::new(n);
        self.eval_into(&mut g)?;
        Ok(g)
    }

    fn eval_into(&self, g: &mut Graph) -> Result<u64> {
        match self {
            CographTerm::Leaf(v) => Ok(1 << v),
            CographTerm::Oplus(ts) | CographTerm::Otimes(ts) => {
                if ts.len() < 2 {
                    return Err(Error::InvalidTree(
                        "operator with fewer than two arguments".into(),
                    ));
                }
                let parts = ts
                    .iter()
                    .map(|t| t.eval_into(g))
                    .collect::<Result<Vec<u64>>>()?;
                if matches!(self, CographTerm::Otimes(_)) {
                    join_parts(g, &parts, |_, _| true);
                }
                Ok(parts.iter().fold(0, |a, b| a | b))
            }
        }
    }
}

impl PPTerm {
    pub fn leaves(&self) -> Vec<(usize, Label)> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<(usize, Label)>) {
        match self {
            PPTerm::Leaf(v, l) => out.push((*v, *l)),
            PPTerm::Oplus(ts) | PPTerm::Otimes(ts) => ts.iter().for_each(|t| t.collect_leaves(out)),
        }
    }

    /// The 2-graph defined by the term; never has an edge between two
    /// 1-vertices.
    pub fn eval(&self) -> Result<TwoGraph> {
        let leaves = self.leaves();
        let names: Vec<usize> = leaves.iter().map(|l| l.0).collect();
        let n = check_names(&names)?;
        let mut labels = vec![Label::Two; n];
        for (v, l) in leaves {
            labels[v] = l;
        }
        let mut g = Graph::new(n);
        self.eval_into(&mut g, &labels)?;
        Ok(TwoGraph { graph: g, labels })
    }

    fn eval_into(&self, g: &mut Graph, labels: &[Label]) -> Result<u64> {
        match self {
            PPTerm::Leaf(v, _) => Ok(1 << v),
            PPTerm::Oplus(ts) | PPTerm::Otimes(ts) => {
                if ts.len() < 2 {
                    return Err(Error::InvalidTree(
                        "operator with fewer than two arguments".into(),
                    ));
                }
                let parts = ts
                    .iter()
                    .map(|t| t.eval_into(g, labels))
                    .collect::<Result<Vec<u64>>>()?;
                if matches!(self, PPTerm::Otimes(_)) {
                    join_parts(g, &parts, |u, v| {
                        labels[u] == Label::Two || labels[v] == Label::Two
                    });
                }
                Ok(parts.iter().fold(0, |a, b| a | b))
            }
        }
    }

    /// The same term with `⊗` read as the complete join.
    pub fn forget_labels(&self) -> CographTerm {
        match self {
            PPTerm::Leaf(v, _) => CographTerm::Leaf(*v),
            PPTerm::Oplus(ts) => CographTerm::Oplus(ts.iter().map(|t| t.forget_labels()).collect()),
            PPTerm::Otimes(ts) => {
                CographTerm::Otimes(ts.iter().map(|t| t.forget_labels()).collect())
            }
        }
    }
}

fn check_names(names: &[usize]) -> Result<usize> {
    let n = names.len();
    let mut seen = vec![false; n];
    for &v in names {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, size: n });
        }
        if seen[v] {
            return Err(Error::DuplicateVertex(v));
        }
        seen[v] = true;
    }
    Ok(n)
}

fn join_parts(g: &mut Graph, parts: &[u64], allow: impl Fn(usize, usize) -> bool) {
    for (i, &a) in parts.iter().enumerate() {
        for &b in &parts[i + 1..] {
            for u in bits(a) {
                for v in bits(b) {
                    if allow(u, v) {
                        g.add_edge(u, v);
                    }
                }
            }
        }
    }
}

pub fn eval_cograph_term(t: &CographTerm) -> Result<Graph> {
    t.eval()
}

pub fn eval_pp_term(t: &PPTerm) -> Result<TwoGraph> {
    t.eval()
}

/// Components of the complement of `g[within]`.
fn co_components(g: &Graph, within: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut left = within;
    while left != 0 {
        let start = left.trailing_zeros() as usize;
        let mut comp = 1u64 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = within & !g.neighbours(v) & !comp & !(1 << v);
            comp |= new;
            frontier |= new;
        }
        out.push(comp);
        left &= !comp;
    }
    out
}

/// A cotree of `g`, or `None` if `g` has an induced P4.
pub fn cotree(g: &Graph) -> Option<CographTerm> {
    if g.n() == 0 {
        return None;
    }
    cotree_within(g, g.full_mask())
}

fn cotree_within(g: &Graph, mask: u64) -> Option<CographTerm> {
    if mask.count_ones() == 1 {
        return Some(CographTerm::Leaf(mask.trailing_zeros() as usize));
    }
    let comps = g.component_masks_within(mask);
    if comps.len() > 1 {
        return comps
            .into_iter()
            .map(|c| cotree_within(g, c))
            .collect::<Option<_>>()
            .map(CographTerm::Oplus);
    }
    let co = co_components(g, mask);
    if co.len() > 1 {
        return co
            .into_iter()
            .map(|c| cotree_within(g, c))
            .collect::<Option<_>>()
            .map(CographTerm::Otimes);
    }
    None
}

/// P4-free. The empty graph counts as a cograph.
pub fn is_cograph(g: &Graph) -> bool {
    g.n() == 0 || cotree(g).is_some()
}

/// The six bounds of the pp-cographs: paths of types 11, 2222, 1222, 2122,
/// 21212 and the 2-graph Q (path a-b-c-d-e of type 12221 plus edge b-d).
pub fn pp_bounds() -> Vec<TwoGraph> {
    let mut out: Vec<TwoGraph> = ["11", "2222", "1222", "2122", "21212"]
        .iter()
        .map(|w| TwoGraph::labelled_path(w).unwrap())
        .collect();
    let q = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (1, 3)]).unwrap();
    out.push(TwoGraph::with_type(q, "12221").unwrap());
    out
}

fn pp_bound_forms() -> &'static [(usize, CanonicalForm)] {
    static FORMS: OnceLock<Vec<(usize, CanonicalForm)>> = OnceLock::new();
    FORMS.get_or_init(|| {
        pp_bounds()
            .iter()
            .map(|b| (b.n(), b.canonical_form().unwrap()))
            .collect()
    })
}

/// Subsets of `0..n` of size `k` as masks, in increasing order.
pub(crate) fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit: u128 = 1u128 << n;
    let mut cur = if k <= n { Some((1u128 << k) - 1) } else { None };
    std::iter::from_fn(move || {
        let c = cur?;
        cur = if c == 0 {
            None
        } else {
            // Gosper's hack.
            let u = c & c.wrapping_neg();
            let v = c + u;
            Some(v + (((v ^ c) / u) >> 2)).filter(|&x| x < limit)
        };
        Some(c as u64)
    })
}

/// Tests for an induced copy of one of the six bounds, matching labelled
/// subgraphs up to isomorphism (a path type and its reversal are the same
/// pattern).
pub fn is_pp_cograph(h: &TwoGraph) -> bool {
    find_pp_obstruction(h).is_none()
}

/// Vertices of an induced bound, if any.
pub fn find_pp_obstruction(h: &TwoGraph) -> Option<Vec<usize>> {
    if let Some((u, v)) = h.one_one_edge() {
        return Some(vec![u, v]);
    }
    let forms = pp_bound_forms();
    for k in [4, 5] {
        for mask in k_subsets(h.n(), k) {
            let sub = h.induced_mask(mask);
            let edges = sub.graph.edge_count();
            if edges < k - 1 || !sub.graph.is_connected() {
                continue;
            }
            let f = sub.canonical_form().unwrap();
            if forms.iter().any(|(n, bf)| *n == k && *bf == f) {
                return Some(bits(mask).collect());
            }
        }
    }
    None
}

/// A pp-term for `h`, or `None` if `h` is not a pp-cograph.
pub fn pp_term(h: &TwoGraph) -> Option<PPTerm> {
    if h.n() == 0 || h.one_one_edge().is_some() {
        return None;
    }
    // Pairs that must lie inside one part of a modified join.
    let n = h.n();
    let mut forced = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let both_one = h.labels[u] == Label::One && h.labels[v] == Label::One;
            if !h.graph.has_edge(u, v) && !both_one {
                forced.add_edge(u, v);
            }
        }
    }
    pp_within(h, &forced, h.graph.full_mask())
}

fn pp_within(h: &TwoGraph, forced: &Graph, mask: u64) -> Option<PPTerm> {
    if mask.count_ones() == 1 {
        let v = mask.trailing_zeros() as usize;
        return Some(PPTerm::Leaf(v, h.labels[v]));
    }
    let comps = h.graph.component_masks_within(mask);
    if comps.len() > 1 {
        return comps
            .into_iter()
            .map(|c| pp_within(h, forced, c))
            .collect::<Option<_>>()
            .map(PPTerm::Oplus);
    }
    let parts = forced.component_masks_within(mask);
    if parts.len() > 1 {
        return parts
            .into_iter()
            .map(|c| pp_within(h, forced, c))
            .collect::<Option<_>>()
            .map(PPTerm::Otimes);
    }
    None
}

/// A cotree of a cograph obtained from `h` by adding edges between
/// 1-vertices only, or `None` if there is none.
pub fn pp_completion(h: &TwoGraph) -> Result<Option<CographTerm>> {
    if let Some((u, v)) = h.one_one_edge() {
        return Err(Error::OneOneEdge(u, v));
    }
    if h.n() == 0 {
        return Ok(None);
    }
    Ok(pp_term(h).map(|t| t.forget_labels()))
}

/// Labellings that make `g` a pp-cograph, ordered by the mask of
/// 1-vertices (bit `v` set when `v` is labelled 1), increasing.
pub fn good_labellings(g: &Graph) -> Vec<Vec<Label>> {
    good_label_masks(g, usize::MAX)
        .into_iter()
        .map(|m| labels_of(g.n(), m))
        .collect()
}

fn labels_of(n: usize, ones: u64) -> Vec<Label> {
    (0..n)
        .map(|v| {
            if ones >> v & 1 == 1 {
                Label::One
            } else {
                Label::Two
            }
        })
        .collect()
}

fn good_label_masks(g: &Graph, limit: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let n = g.n();
    for ones in independent_sets(g) {
        if out.len() >= limit {
            break;
        }
        let h = TwoGraph {
            graph: g.clone(),
            labels: labels_of(n, ones),
        };
        if n == 0 || pp_term(&h).is_some() {
            out.push(ones);
        }
    }
    out.sort_unstable();
    out
}

/// All independent sets of `g` as masks.
fn independent_sets(g: &Graph) -> Vec<u64> {
    fn rec(g: &Graph, v: usize, cur: u64, out: &mut Vec<u64>) {
        if v == g.n() {
            out.push(cur);
            return;
        }
        rec(g, v + 1, cur, out);
        if g.neighbours(v) & cur == 0 {
            rec(g, v + 1, cur | 1 << v, out);
        }
    }
    let mut out = Vec::new();
    rec(g, 0, 0, &mut out);
    out
}

/// Some good labelling of `g`, if any.
pub fn find_good_labelling(g: &Graph) -> Option<Vec<Label>> {
    if quick_reject_p(g) {
        return None;
    }
    good_label_masks(g, 1).first().map(|&m| labels_of(g.n(), m))
}

/// Induced P6 or a component of diameter at least 5 rules out every
/// labelling.
fn quick_reject_p(g: &Graph) -> bool {
    g.max_component_diameter() >= 5 || g.has_induced_path(6)
}

/// `g` has a good labelling.
pub fn is_p_cograph(g: &Graph) -> bool {
    find_good_labelling(g).is_some()
}
