use std::collections::BTreeSet;

use probetree::bounds::{
    alternate_decider, decider_for, find_bounds, is_bound, verify_report, AnyStructure, BoundClass,
    SearchOptions,
};
use probetree::cographs::{is_p_cograph, pp_bounds};
use probetree::fixtures::p_cograph_bounds;
use probetree::{CanonicalForm, Canonize, Graph, TwoGraph};

fn forms<S: Canonize>(xs: &[S]) -> BTreeSet<CanonicalForm> {
    xs.iter().map(|s| s.canonical_form().unwrap()).collect()
}

/// `small` is isomorphic to an induced substructure of `big`.
fn embeds(small: &AnyStructure, big: &AnyStructure) -> bool {
    let (k, n) = (small.size(), big.size());
    let target = small.canonical_form().unwrap();
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .any(|m| {
            let xs: Vec<usize> = (0..n).filter(|&v| m >> v & 1 == 1).collect();
            let sub = match big {
                AnyStructure::Graph(g) => AnyStructure::Graph(g.induced(&xs).unwrap()),
                AnyStructure::TwoGraph(h) => AnyStructure::TwoGraph(h.induced(&xs).unwrap()),
                AnyStructure::Ternary(s) => AnyStructure::Ternary(s.induced(&xs).unwrap()),
            };
            sub.canonical_form().unwrap() == target
        })
}

fn mutually_minimal(bounds: &[AnyStructure]) -> bool {
    bounds.iter().enumerate().all(|(i, a)| {
        bounds
            .iter()
            .enumerate()
            .all(|(j, b)| i == j || a.size() >= b.size() || !embeds(a, b))
    })
}

#[test]
fn pp_bounds_are_the_six() {
    let r = find_bounds(BoundClass::Pp, 5, &SearchOptions::default()).unwrap();
    let got: BTreeSet<_> = r.bounds.iter().map(|b| b.form.clone()).collect();
    assert_eq!(got, forms(&pp_bounds()));
    assert!(verify_report(&r, alternate_decider(BoundClass::Pp)).is_none());
    let words: BTreeSet<String> = ["11", "2222", "1222", "2122", "21212"]
        .iter()
        .map(|w| w.to_string())
        .collect();
    let paths: Vec<TwoGraph> = words
        .iter()
        .map(|w| TwoGraph::labelled_path(w).unwrap())
        .collect();
    assert!(forms(&paths).is_subset(&got));
}

#[test]
fn pp_bounds_up_to_six_vertices() {
    let r = find_bounds(BoundClass::Pp, 6, &SearchOptions::default()).unwrap();
    assert_eq!(r.bounds.len(), 6, "no pp bound has six vertices");
}

/// Probe cograph by definition: some independent set, with some edges
/// added inside it, leaves no induced P4.
fn brute_p_cograph(g: &Graph) -> bool {
    let n = g.n();
    (0u64..1 << n).any(|s| {
        let vs: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 1).collect();
        if vs.iter().any(|&u| vs.iter().any(|&v| g.has_edge(u, v))) {
            return false;
        }
        let pairs: Vec<(usize, usize)> = vs
            .iter()
            .flat_map(|&u| vs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect();
        (0u64..1 << pairs.len()).any(|m| {
            let mut h = g.clone();
            for (i, &(u, v)) in pairs.iter().enumerate() {
                if m >> i & 1 == 1 {
                    h.add_edge(u, v);
                }
            }
            !h.has_induced_path(4)
        })
    })
}

#[test]
fn p_cograph_decider_matches_definition() {
    for n in 0..=6 {
        for g in probetree::canon::enumerate_up_to_iso::<Graph>((), n, |_| true).unwrap() {
            assert_eq!(is_p_cograph(&g), brute_p_cograph(&g), "{g:?}");
        }
    }
}

#[test]
fn named_p_cograph_bounds() {
    for (name, g) in p_cograph_bounds() {
        assert_eq!(
            is_bound(&g, is_p_cograph),
            is_bound(&g, brute_p_cograph),
            "{name}"
        );
        if name != "H[b<-K2,d<-K2]" {
            assert!(is_bound(&g, is_p_cograph), "{name}");
        }
    }
}

/// Doubling both bottom vertices of the house is not minimal: deleting
/// either upper vertex `a` or `e` leaves a 6-vertex non-member, which is
/// itself a bound.
#[test]
fn house_with_doubled_bottom_is_not_minimal() {
    let g = probetree::fixtures::house().substitute_k2(&[1, 3]).unwrap();
    assert!(!brute_p_cograph(&g));
    for v in 0..g.n() {
        assert_eq!(
            brute_p_cograph(&g.delete_vertex(v)),
            v != 0 && v != 4,
            "{v}"
        );
    }
    let core = g.delete_vertex(0);
    assert!(is_bound(&core, brute_p_cograph));
    let r = find_bounds(BoundClass::P, 6, &SearchOptions::default()).unwrap();
    assert!(r.contains_form(&core.canonical_form().unwrap()));
}

#[test]
fn p_cograph_search_to_six() {
    let r = find_bounds(BoundClass::P, 6, &SearchOptions::default()).unwrap();
    let got: BTreeSet<_> = r.bounds.iter().map(|b| b.form.clone()).collect();
    let named: Vec<Graph> = p_cograph_bounds()
        .into_iter()
        .map(|(_, g)| g)
        .filter(|g| g.n() <= 6)
        .collect();
    assert!(forms(&named).is_subset(&got));
    assert!(verify_report(&r, decider_for(BoundClass::P)).is_none());
    let structures: Vec<AnyStructure> = r.bounds.iter().map(|b| b.structure.clone()).collect();
    assert!(mutually_minimal(&structures));
    for b in &r.bounds {
        let AnyStructure::Graph(g) = &b.structure else {
            panic!("graph expected")
        };
        assert!(g.is_connected());
        if b.form != Graph::path(6).canonical_form().unwrap() {
            assert!(g.max_component_diameter() <= 4);
        }
    }
}

#[test]
fn ibo_search_is_consistent() {
    let r = find_bounds(BoundClass::Ibo, 4, &SearchOptions::default()).unwrap();
    assert!(!r.bounds.is_empty());
    assert!(verify_report(&r, decider_for(BoundClass::Ibo)).is_none());
    assert!(verify_report(&r, alternate_decider(BoundClass::Ibo)).is_none());
    let structures: Vec<AnyStructure> = r.bounds.iter().map(|b| b.structure.clone()).collect();
    assert!(mutually_minimal(&structures));
}

#[test]
fn ibqt_search_is_consistent() {
    let r = find_bounds(BoundClass::Ibqt, 4, &SearchOptions::default()).unwrap();
    assert!(verify_report(&r, decider_for(BoundClass::Ibqt)).is_none());
    assert!(verify_report(&r, alternate_decider(BoundClass::Ibqt)).is_none());
}

#[test]
fn workers_and_resume_do_not_change_the_report() {
    let base = find_bounds(BoundClass::P, 6, &SearchOptions::default()).unwrap();
    let one = find_bounds(
        BoundClass::P,
        6,
        &SearchOptions {
            workers: Some(1),
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(base, one);
    let dir = tempfile::tempdir().unwrap();
    let opts = SearchOptions {
        checkpoint_dir: Some(dir.path().to_path_buf()),
        ..Default::default()
    };
    let part = find_bounds(BoundClass::P, 5, &opts).unwrap();
    assert_eq!(
        part.bounds.len(),
        base.bounds.iter().filter(|b| b.size <= 5).count()
    );
    let resumed = find_bounds(
        BoundClass::P,
        6,
        &SearchOptions {
            resume: true,
            ..opts
        },
    )
    .unwrap();
    assert_eq!(base, resumed);
}
