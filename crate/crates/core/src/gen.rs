//! Random structures for property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::Graph;
use crate::ternary::TernaryStructure;
use crate::trees::{Mark, MarkedJoinTree, RootedForest};

/// Parent vector of a random forest: nodes are attached in a random order,
/// each to an earlier node or, with probability `p_root`, as a new root.
/// The first node in the order is always a root.
fn random_parents<R: Rng + ?Sized>(rng: &mut R, n: usize, p_root: f64) -> Vec<Option<usize>> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut parent = vec![None; n];
    for i in 1..n {
        if !rng.gen_bool(p_root) {
            parent[order[i]] = Some(order[rng.gen_range(0..i)]);
        }
    }
    parent
}

/// A random rooted forest on `n` nodes.
pub fn random_forest<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RootedForest {
    RootedForest::new(random_parents(rng, n, 0.2)).expect("attachment order is acyclic")
}

/// A random rooted tree on `n >= 1` nodes.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RootedForest {
    RootedForest::new(random_parents(rng, n, 0.0)).expect("attachment order is acyclic")
}

/// A random marked join-tree on `m >= 1` nodes. Leaves are plain; each
/// internal node is marked with probability `p_marked`, by `⊕` or `⊗` with
/// equal odds when `allow_oplus`, else by `⊗`.
pub fn random_marked_tree<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    allow_oplus: bool,
    p_marked: f64,
) -> MarkedJoinTree {
    let tree = random_tree(rng, m);
    let marks = (0..m)
        .map(|v| {
            if tree.is_leaf(v) || !rng.gen_bool(p_marked) {
                Mark::Plain
            } else if allow_oplus && rng.gen_bool(0.5) {
                Mark::Oplus
            } else {
                Mark::Otimes
            }
        })
        .collect();
    MarkedJoinTree::from_parts(tree, marks).expect("leaves are plain")
}

/// A random structure satisfying A1-A3: each 3-set `{x, y, z}` gets at
/// most one middle element `m`, and then both `B(x,m,z)` and `B(z,m,x)`.
/// With probability `p_none` a 3-set gets no middle.
pub fn random_a1_a3<R: Rng + ?Sized>(rng: &mut R, n: usize, p_none: f64) -> TernaryStructure {
    let mut s = TernaryStructure::new(n);
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                if !rng.gen_bool(p_none) {
                    set_middle(&mut s, [x, y, z], Some(rng.gen_range(0..3)));
                }
            }
        }
    }
    s
}

fn set_middle(s: &mut TernaryStructure, t: [usize; 3], middle: Option<usize>) {
    for i in 0..3 {
        let (a, m, b) = (t[(i + 1) % 3], t[i], t[(i + 2) % 3]);
        if middle == Some(i) {
            s.insert(a, m, b);
            s.insert(b, m, a);
        } else {
            s.remove(a, m, b);
            s.remove(b, m, a);
        }
    }
}

/// Re-draws the middle of `flips` random 3-sets of an A1-A3 structure.
/// The result still satisfies A1-A3.
pub fn perturb<R: Rng + ?Sized>(
    rng: &mut R,
    s: &TernaryStructure,
    flips: usize,
) -> TernaryStructure {
    let n = s.n();
    let mut out = s.clone();
    if n < 3 {
        return out;
    }
    for _ in 0..flips {
        let mut t: Vec<usize> = rand::seq::index::sample(rng, n, 3).into_vec();
        t.sort_unstable();
        let middle = match rng.gen_range(0..4) {
            3 => None,
            i => Some(i),
        };
        set_middle(&mut out, [t[0], t[1], t[2]], middle);
    }
    out
}

/// The betweenness of a random marked tree restricted to `n` random plain
/// nodes. Retries until the tree has at least `n` plain nodes.
pub fn random_tree_structure<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_nodes: usize,
    allow_oplus: bool,
) -> TernaryStructure {
    loop {
        let m = rng.gen_range(n.max(1)..=max_nodes.max(n.max(1)));
        let t = random_marked_tree(rng, m, allow_oplus, 0.4);
        let b = t.betweenness();
        if b.n() >= n {
            let xs = random_subset_of_size(rng, b.n(), n);
            return b.induced(&xs).expect("indices in range");
        }
    }
}

/// Each of `0..n` with probability `p`, in increasing order.
pub fn random_subset<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

/// `k` distinct elements of `0..n` in increasing order.
pub fn random_subset_of_size<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut xs = rand::seq::index::sample(rng, n, k).into_vec();
    xs.sort_unstable();
    xs
}

/// An Erdős-Rényi graph `G(n, p)`.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// A random permutation of `0..n`.
pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betweenness::{satisfies, Axiom};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn a1_a3_generator_satisfies_a1_a3() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let s = random_a1_a3(&mut rng, 6, 0.3);
            assert!(satisfies(&s, &Axiom::A3.upto()));
            let p = perturb(&mut rng, &s, 3);
            assert!(satisfies(&p, &Axiom::A3.upto()));
        }
    }

    #[test]
    fn marked_trees_have_plain_leaves() {
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..100 {
            let t = random_marked_tree(&mut rng, 10, true, 0.7);
            for v in 0..t.size() {
                assert!(!t.tree().is_leaf(v) || t.mark(v) == Mark::Plain);
            }
        }
    }
}
