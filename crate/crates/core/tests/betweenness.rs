use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use probetree::betweenness::{decide_ibqt_oracle, in_ibqt, phi_forest, satisfies_a1_a6};
use probetree::canon::{enumerate_up_to_iso, TernarySpace};
use probetree::fixtures::{
    example_marked_tree, example_node, example_required_triples, second_marked_tree, second_node,
};
use probetree::gen::{perturb, random_a1_a3, random_marked_tree, random_tree_structure};
use probetree::{decide_ibo, decide_ibo_oracle, TernaryStructure};

fn agree(s: &TernaryStructure) {
    let fast = decide_ibo(s);
    let slow = decide_ibo_oracle(s).unwrap();
    assert_eq!(fast.is_some(), slow.is_some(), "{s:?}");
    if let Some(w) = fast {
        assert!(w.verifies(s));
    }
    if let Some(w) = slow {
        assert!(w.verifies(s));
    }
}

#[test]
fn example_tree_is_connected_and_ibo() {
    let t = example_marked_tree();
    let b = t.betweenness();
    assert_eq!(b.n(), 11);
    assert!(b.gaifman().is_connected());
    for [x, y, z] in example_required_triples() {
        assert!(b.contains(example_node(x), example_node(y), example_node(z)));
    }
    assert!(!b.contains(example_node("a'"), example_node("a"), example_node("c")));
    let w = decide_ibo(&b).unwrap();
    assert!(w.verifies(&b));
    assert!(w.tree.size() <= 2 * 11 - 1);
}

#[test]
fn second_tree_order_from_the_root() {
    let b = second_marked_tree().betweenness();
    let f = phi_forest(&b, &[second_node("0")]).unwrap();
    let p = |x| f.parent(second_node(x));
    assert_eq!(p("0"), None);
    assert_eq!(p("1"), Some(second_node("0")));
    for x in ["a", "b", "c", "d", "e"] {
        assert_eq!(p(x), Some(second_node("1")), "{x}");
    }
    assert_eq!(p("a'"), Some(second_node("a")));
    assert_eq!(p("c'"), Some(second_node("c")));
    assert_eq!(p("e'"), Some(second_node("e")));
    assert!(decide_ibo(&b).unwrap().verifies(&b));
}

#[test]
fn decider_matches_oracle_up_to_four() {
    let spaces = [
        (0, TernarySpace::Raw),
        (1, TernarySpace::Raw),
        (2, TernarySpace::Raw),
        (3, TernarySpace::Irreflexive),
        (4, TernarySpace::Symmetric),
    ];
    for (n, space) in spaces {
        for s in enumerate_up_to_iso::<TernaryStructure>(space, n, |_| true).unwrap() {
            agree(&s);
            assert_eq!(
                in_ibqt(&s),
                decide_ibqt_oracle(&s).unwrap().is_some(),
                "{s:?}"
            );
        }
    }
}

#[test]
fn decider_matches_oracle_on_random_five() {
    let mut rng = StdRng::seed_from_u64(17);
    for i in 0..400 {
        let s = if i % 2 == 0 {
            random_a1_a3(&mut rng, 5, 0.4)
        } else {
            let t = random_tree_structure(&mut rng, 5, 12, true);
            let k = rng.gen_range(0..3);
            perturb(&mut rng, &t, k)
        };
        agree(&s);
    }
}

#[test]
fn witness_size_is_bounded() {
    let mut rng = StdRng::seed_from_u64(23);
    for _ in 0..300 {
        let m = rng.gen_range(1..=12);
        let t = random_marked_tree(&mut rng, m, true, 0.5);
        let b = t.betweenness();
        let w = decide_ibo(&b).unwrap();
        assert_eq!(w.pullback(), b);
        assert!(w.tree.size() <= 2 * b.n().max(1) - 1);
    }
}

#[test]
fn non_ibo_structures_fail_a1_a6_or_are_rejected_consistently() {
    let mut rng = StdRng::seed_from_u64(29);
    for _ in 0..300 {
        let s = random_a1_a3(&mut rng, 6, 0.3);
        if decide_ibo(&s).is_some() {
            assert!(satisfies_a1_a6(&s));
        }
    }
}
