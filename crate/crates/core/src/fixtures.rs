//! Named structures used by tests, the acceptance suite and the CLI
//! examples.

use crate::cliquewidth::CwTerm;
use crate::cographs::PPTerm;
use crate::graph::{Graph, Label};
use crate::trees::{Mark, MarkedJoinTree};

/// Node names of [`example_marked_tree`]. The first eleven are plain.
pub const EXAMPLE_TREE_NAMES: [&str; 15] = [
    "0", "a", "a'", "b", "b'", "c", "c'", "d", "d'", "e", "e'", "1", "x", "y", "z",
];

/// A marked join-tree over `{0, a, a', ..., e, e'}` with `⊗` nodes `1, x, y`
/// and a `⊕` node `z`. Here `a, b` meet at `x`, `c, d` meet at `y`, and `x, y`
/// meet at `z` below `1`, so `a` and `c` have no plain join.
pub fn example_marked_tree() -> MarkedJoinTree {
    let parent = vec![
        None,
        Some(12),
        Some(1),
        Some(12),
        Some(3),
        Some(13),
        Some(5),
        Some(13),
        Some(7),
        Some(11),
        Some(9),
        Some(0),
        Some(14),
        Some(14),
        Some(11),
    ];
    let mut marks = vec![Mark::Plain; 15];
    marks[11] = Mark::Otimes;
    marks[12] = Mark::Otimes;
    marks[13] = Mark::Otimes;
    marks[14] = Mark::Oplus;
    MarkedJoinTree::new(parent, marks).expect("valid fixture")
}

/// Index of a plain node of [`example_marked_tree`] by name.
pub fn example_node(name: &str) -> usize {
    EXAMPLE_TREE_NAMES[..11]
        .iter()
        .position(|&n| n == name)
        .unwrap_or_else(|| panic!("no plain node {name}"))
}

/// Triples that `B_T` of [`example_marked_tree`] must contain, by name. The
/// 4-tuples are chains `B⁺`, expanded to every ordered triple.
pub fn example_required_triples() -> Vec<[&'static str; 3]> {
    let mut out: Vec<[&str; 3]> = ["a", "b", "c", "d", "e"]
        .iter()
        .zip(["a'", "b'", "c'", "d'", "e'"])
        .map(|(&x, xp)| [xp, x, "0"])
        .collect();
    let chains = [
        ["a'", "a", "b", "b'"],
        ["c'", "c", "d", "d'"],
        ["a'", "a", "e", "e'"],
        ["b'", "b", "e", "e'"],
        ["c'", "c", "e", "e'"],
        ["d'", "d", "e", "e'"],
    ];
    for c in chains {
        for i in 0..4 {
            for j in i + 1..4 {
                for k in j + 1..4 {
                    out.push([c[i], c[j], c[k]]);
                }
            }
        }
    }
    out
}

/// Node names of [`second_marked_tree`]; the first ten are plain.
pub const SECOND_TREE_NAMES: [&str; 13] = [
    "0", "1", "a", "a'", "b", "c", "c'", "d", "e", "e'", "x", "y", "z",
];

/// `0` above `1`, `1` above a `⊗` node `x` and `e`; `x` above `⊕` nodes `y`
/// (over `a, b`) and `z` (over `c, d`); `a', c', e'` below `a, c, e`.
pub fn second_marked_tree() -> MarkedJoinTree {
    let parent = vec![
        None,
        Some(0),
        Some(11),
        Some(2),
        Some(11),
        Some(12),
        Some(5),
        Some(12),
        Some(1),
        Some(8),
        Some(1),
        Some(10),
        Some(10),
    ];
    let mut marks = vec![Mark::Plain; 13];
    marks[10] = Mark::Otimes;
    marks[11] = Mark::Oplus;
    marks[12] = Mark::Oplus;
    MarkedJoinTree::new(parent, marks).expect("valid fixture")
}

pub fn second_node(name: &str) -> usize {
    SECOND_TREE_NAMES[..10]
        .iter()
        .position(|&n| n == name)
        .unwrap_or_else(|| panic!("no plain node {name}"))
}

/// The house on `a..e` = `0..4`: the complement of the path `a-b-c-d-e`.
/// Its top vertex is `c`.
pub fn house() -> Graph {
    Graph::path(5).complement()
}

/// The two good labellings of the house: `1` on `{c, d}` or on `{b, c}`.
pub fn house_good_labellings() -> Vec<Vec<Label>> {
    use Label::{One, Two};
    vec![vec![Two, One, One, Two, Two], vec![Two, Two, One, One, Two]]
}

/// `C6 = a-b-c-d-e-f-a` plus the chord `c-f`.
pub fn graph_d() -> Graph {
    let mut g = Graph::cycle(6);
    g.add_edge(2, 5);
    g
}

/// The named bounds of probe cographs, with their names.
pub fn p_cograph_bounds() -> Vec<(&'static str, Graph)> {
    let p4 = Graph::path(4);
    let p5 = Graph::path(5);
    let h = house();
    let sub = |g: &Graph, t: &[usize]| g.substitute_k2(t).expect("valid targets");
    vec![
        ("C5", Graph::cycle(5)),
        ("P6", Graph::path(6)),
        ("C6", Graph::cycle(6)),
        ("co-C6", Graph::cycle(6).complement()),
        ("D", graph_d()),
        ("co-D", graph_d().complement()),
        ("P5[a<-K2]", sub(&p5, &[0])),
        ("P5[c<-K2]", sub(&p5, &[2])),
        ("P4[a<-K2,b<-K2]", sub(&p4, &[0, 1])),
        ("P4[a<-K2,d<-K2]", sub(&p4, &[0, 3])),
        ("H[c<-K2]", sub(&h, &[2])),
        ("H[b<-K2,d<-K2]", sub(&h, &[1, 3])),
    ]
}

/// A probe cograph of clique-width 4: two copies of `1 ⊕ (1 ⊗ 2) ⊕ (1 ⊗ 2)`
/// joined by `⊗`. Vertices `0..6` are 1-vertices, `6..10` are 2-vertices.
pub fn cw4_pp_term() -> PPTerm {
    use PPTerm::{Leaf, Oplus, Otimes};
    let block = |a: usize, b: usize, c: usize, p: usize, q: usize| {
        Oplus(vec![
            Leaf(a, Label::One),
            Otimes(vec![Leaf(b, Label::One), Leaf(p, Label::Two)]),
            Otimes(vec![Leaf(c, Label::One), Leaf(q, Label::Two)]),
        ])
    };
    Otimes(vec![block(0, 1, 2, 6, 7), block(3, 4, 5, 8, 9)])
}

/// A width-4 term for the graph of [`cw4_pp_term`]: labels `1, 2` for the
/// 1- and 2-vertices of the left block, `3, 4` for the right block.
pub fn cw4_term() -> CwTerm {
    let pair = |one: u32, two: u32, u: usize, v: usize| {
        CwTerm::add(
            one,
            two,
            CwTerm::union(CwTerm::vertex(one, u), CwTerm::vertex(two, v)),
        )
    };
    let block = |one: u32, two: u32, a: usize, b: usize, c: usize, p: usize, q: usize| {
        CwTerm::union(
            CwTerm::vertex(one, a),
            CwTerm::union(pair(one, two, b, p), pair(one, two, c, q)),
        )
    };
    let both = CwTerm::union(block(1, 2, 0, 1, 2, 6, 7), block(3, 4, 3, 4, 5, 8, 9));
    CwTerm::add(2, 4, CwTerm::add(2, 3, CwTerm::add(1, 4, both)))
}
