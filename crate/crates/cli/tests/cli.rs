use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use probetree::betweenness::ORACLE_CAP;
use probetree::gen::{random_graph, random_marked_tree, random_subset_of_size};
use probetree::{decide_ibo, decide_ibo_oracle, Graph, TernaryStructure};
use probetree_cli::format::{
    parse_between, parse_document, parse_mtree, print_between, print_mtree, Document,
};
use probetree_cli::terms::{parse_cw_term, parse_pp_term};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn probetree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_probetree"))
        .args(args)
        .env_remove("IBO_CACHE_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn structure_files() -> Vec<PathBuf> {
    let mut out = Vec::new();
    for dir in [fixture(""), fixture("p_bounds")] {
        for e in std::fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if matches!(
                p.extension().and_then(|x| x.to_str()),
                Some("graph" | "between" | "mtree")
            ) {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

#[test]
fn fixtures_round_trip() {
    let files = structure_files();
    assert!(files.len() >= 20);
    for p in files {
        let text = std::fs::read_to_string(&p).unwrap();
        let d = parse_document(&text, false).unwrap();
        let printed = d.print();
        assert_eq!(
            parse_document(&printed, false).unwrap(),
            d,
            "{}",
            p.display()
        );
        assert_eq!(parse_document(&printed, false).unwrap().print(), printed);
        if !text.contains('#') {
            assert_eq!(printed, text, "{} is not canonical", p.display());
        }
    }
}

#[test]
fn example_tree_fixture_matches_core() {
    let text = std::fs::read_to_string(fixture("example_tree.mtree")).unwrap();
    assert_eq!(
        parse_mtree(&text).unwrap(),
        probetree::fixtures::example_marked_tree()
    );
    let b = std::fs::read_to_string(fixture("example_tree.between")).unwrap();
    assert_eq!(
        parse_between(&b, false).unwrap(),
        probetree::fixtures::example_marked_tree().betweenness()
    );
}

#[test]
fn malformed_edge_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.graph");
    std::fs::write(&p, "graph 3\ne 1 2\ne 1\n").unwrap();
    let o = probetree(&["recognize", "cograph", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(probetree(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        probetree(&["decide", "qt", "/nonexistent/file"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn between_from_tree_matches_fixture() {
    let o = probetree(&[
        "between",
        "from-tree",
        fixture("example_tree.mtree").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let expected = std::fs::read_to_string(fixture("example_tree.between")).unwrap();
    assert_eq!(
        parse_between(&stdout(&o), false).unwrap(),
        parse_between(&expected, false).unwrap()
    );
}

#[test]
fn decide_ibo_on_example_tree_writes_small_witness() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.mtree");
    let input = fixture("example_tree.between");
    let o = probetree(&[
        "decide",
        "ibo",
        input.to_str().unwrap(),
        "--witness",
        w.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("yes"));
    let tree = parse_mtree(&std::fs::read_to_string(&w).unwrap()).unwrap();
    assert!(tree.size() <= 21);
    let s = parse_between(&std::fs::read_to_string(&input).unwrap(), false).unwrap();
    assert_eq!(tree.betweenness(), s);
    let o = probetree(&["between", "from-tree", w.to_str().unwrap()]);
    assert_eq!(parse_between(&stdout(&o), false).unwrap(), s);
}

#[test]
fn witness_files_reparse_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    for p in structure_files()
        .into_iter()
        .filter(|p| p.extension().unwrap() == "between")
    {
        let s = parse_between(&std::fs::read_to_string(&p).unwrap(), false).unwrap();
        let classes: &[&str] = if s.n() <= ORACLE_CAP {
            &["ibo", "ibo-oracle"]
        } else {
            &["ibo"]
        };
        for class in classes {
            let w = dir.path().join(format!("{class}.mtree"));
            let _ = std::fs::remove_file(&w);
            let o = probetree(&[
                "decide",
                class,
                p.to_str().unwrap(),
                "--witness",
                w.to_str().unwrap(),
            ]);
            match o.status.code() {
                Some(0) => assert_eq!(
                    parse_mtree(&std::fs::read_to_string(&w).unwrap())
                        .unwrap()
                        .betweenness(),
                    s
                ),
                Some(1) => assert!(!w.exists()),
                c => panic!("{} {class}: exit {c:?}", p.display()),
            }
        }
    }
}

/// Verdicts of `decide ibo` and `decide ibo-oracle` agree on every shipped
/// between file; files above the oracle's cap are compared on 60 random
/// induced substructures of the cap size.
#[test]
fn ibo_and_oracle_agree_on_fixtures() {
    let mut rng = StdRng::seed_from_u64(5);
    for p in structure_files()
        .into_iter()
        .filter(|p| p.extension().unwrap() == "between")
    {
        let s = parse_between(&std::fs::read_to_string(&p).unwrap(), false).unwrap();
        if s.n() <= ORACLE_CAP {
            let a = probetree(&["decide", "ibo", p.to_str().unwrap()])
                .status
                .code();
            let b = probetree(&["decide", "ibo-oracle", p.to_str().unwrap()])
                .status
                .code();
            assert_eq!(a, b, "{}", p.display());
            assert!(matches!(a, Some(0 | 1)));
        } else {
            for _ in 0..60 {
                let xs = random_subset_of_size(&mut rng, s.n(), ORACLE_CAP);
                let sub = s.induced(&xs).unwrap();
                assert_eq!(
                    decide_ibo(&sub).is_some(),
                    decide_ibo_oracle(&sub).unwrap().is_some(),
                    "{} {xs:?}",
                    p.display()
                );
            }
        }
    }
}

#[test]
fn symclose_changes_the_verdict() {
    let f = fixture("oneway.between");
    assert_eq!(
        probetree(&["decide", "ibo", f.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        probetree(&["decide", "ibo", "--symclose", f.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn axiom_report() {
    let o = probetree(&[
        "check",
        "axioms",
        fixture("reflexive.between").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("A1 fails at"));
    let o = probetree(&[
        "check",
        "axioms",
        "--upto",
        "A7",
        fixture("example_tree.between").to_str().unwrap(),
    ]);
    assert_eq!(stdout(&o).lines().count(), 7);
    let o = probetree(&["check", "axioms", fixture("star.between").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = probetree(&[
        "decide",
        "qt",
        fixture("two_middles.between").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn recognize_probe_cographs() {
    let o = probetree(&[
        "recognize",
        "p",
        fixture("p_bounds/p6.graph").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = probetree(&["recognize", "p", fixture("house.graph").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let Document::TwoGraph(h) =
        parse_document(&stdout(&o).replacen("yes\n", "", 1), false).unwrap()
    else {
        panic!("labelled graph expected")
    };
    assert!(probetree::cographs::is_pp_cograph(&h));
    assert_eq!(h.graph, probetree::fixtures::house());
    let o = probetree(&[
        "recognize",
        "cograph",
        fixture("p4.graph").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        probetree(&["recognize", "pp", fixture("p4.graph").to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    for i in 1..=6 {
        let o = probetree(&[
            "recognize",
            "pp",
            fixture(&format!("pp_bound_{i}.graph")).to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(1));
    }
}

#[test]
fn recognize_cograph_prints_a_cotree() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c4.graph");
    std::fs::write(
        &p,
        probetree_cli::format::print_graph(&Graph::cycle(4), None),
    )
    .unwrap();
    let o = probetree(&["recognize", "cograph", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let term = stdout(&o).lines().nth(1).unwrap().to_string();
    let t = probetree_cli::terms::parse_cograph_term(&term).unwrap();
    assert_eq!(t.eval().unwrap(), Graph::cycle(4));
}

#[test]
fn bounds_pp_gives_six() {
    let o = probetree(&["bounds", "pp", "--max-n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("# bound ").count(), 6);
    assert!(out.contains("# total 6"));
    let o = probetree(&["bounds", "pp", "--max-n", "5", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["bounds"].as_array().unwrap().len(), 6);
    assert_eq!(
        probetree(&["bounds", "pp", "--max-n", "9"]).status.code(),
        Some(2)
    );
    assert_eq!(
        probetree(&["bounds", "zz", "--max-n", "3"]).status.code(),
        Some(2)
    );
}

#[test]
fn bounds_output_is_independent_of_workers_and_resume() {
    let one = probetree(&["bounds", "p", "--max-n", "6", "--workers", "1"]);
    let four = probetree(&["bounds", "p", "--max-n", "6", "--workers", "4"]);
    assert_eq!(one.stdout, four.stdout);
    let dir = tempfile::tempdir().unwrap();
    let part = Command::new(env!("CARGO_BIN_EXE_probetree"))
        .args(["bounds", "p", "--max-n", "5"])
        .env("IBO_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(part.status.code(), Some(0));
    assert!(dir.path().join("p-level-5.json").exists());
    let resumed = probetree(&[
        "bounds",
        "p",
        "--max-n",
        "6",
        "--resume",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(resumed.stdout, one.stdout);
}

#[test]
fn clique_width_commands() {
    let o = probetree(&["cw", "eval", fixture("cw4.cw").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let Document::Graph(g) = parse_document(&stdout(&o), false).unwrap() else {
        panic!("graph expected")
    };
    let pp = parse_pp_term(&std::fs::read_to_string(fixture("cw4.pp")).unwrap()).unwrap();
    assert_eq!(pp.eval().unwrap().graph, g);
    assert!(stdout(&o).contains("# width 4"));
    let prism = fixture("p_bounds/co_c6.graph");
    assert_eq!(
        probetree(&["cw", "atmost", prism.to_str().unwrap(), "-k", "3"])
            .status
            .code(),
        Some(1)
    );
    let o = probetree(&["cw", "atmost", prism.to_str().unwrap(), "-k", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let t = parse_cw_term(stdout(&o).lines().nth(1).unwrap()).unwrap();
    assert!(t.width() <= 4);
    let Document::Graph(p) =
        parse_document(&std::fs::read_to_string(&prism).unwrap(), false).unwrap()
    else {
        panic!()
    };
    assert_eq!(t.eval().unwrap().graph, p);
}

#[test]
fn canon_is_invariant_under_renumbering() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = StdRng::seed_from_u64(9);
    let g = random_graph(&mut rng, 7, 0.5);
    let perm = probetree::gen::random_permutation(&mut rng, 7);
    let (a, b) = (dir.path().join("a.graph"), dir.path().join("b.graph"));
    std::fs::write(&a, probetree_cli::format::print_graph(&g, None)).unwrap();
    std::fs::write(
        &b,
        probetree_cli::format::print_graph(&g.permute(&perm), None),
    )
    .unwrap();
    let (oa, ob) = (
        probetree(&["canon", a.to_str().unwrap()]),
        probetree(&["canon", b.to_str().unwrap()]),
    );
    assert_eq!(oa.status.code(), Some(0));
    assert_eq!(oa.stdout, ob.stdout);
    assert_eq!(
        probetree(&["canon", fixture("example_tree.mtree").to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_files_round_trip(seed in any::<u64>(), n in 0usize..12) {
        let mut rng = StdRng::seed_from_u64(seed);
        let d = Document::Graph(random_graph(&mut rng, n, 0.4));
        let text = d.print();
        prop_assert_eq!(parse_document(&text, false).unwrap(), d);
    }

    #[test]
    fn tree_files_round_trip(seed in any::<u64>(), m in 1usize..14) {
        let mut rng = StdRng::seed_from_u64(seed);
        let t = random_marked_tree(&mut rng, m, true, 0.5);
        let text = print_mtree(&t);
        prop_assert_eq!(&parse_mtree(&text).unwrap(), &t);
        let b: TernaryStructure = t.betweenness();
        prop_assert_eq!(parse_between(&print_between(&b), false).unwrap(), b);
    }
}
