use std::collections::{HashMap, HashSet};

use rand::rngs::StdRng;
use rand::SeedableRng;

use probetree::canon::enumerate_up_to_iso;
use probetree::cliquewidth::{clique_width, cwd_at_most};
use probetree::cographs::cotree;
use probetree::fixtures::{cw4_pp_term, cw4_term, p_cograph_bounds};
use probetree::gen::random_graph;
use probetree::{CographTerm, CwTerm, Graph};

/// A width-2 term for a cograph: label 1 for everything built so far,
/// label 2 for the part being joined in.
fn compile_cotree(t: &CographTerm) -> CwTerm {
    match t {
        CographTerm::Leaf(v) => CwTerm::vertex(1, *v),
        CographTerm::Oplus(ts) => ts.iter().map(compile_cotree).reduce(CwTerm::union).unwrap(),
        CographTerm::Otimes(ts) => ts
            .iter()
            .map(compile_cotree)
            .reduce(|acc, t| {
                CwTerm::relabel(
                    2,
                    1,
                    CwTerm::add(1, 2, CwTerm::union(acc, CwTerm::relabel(1, 2, t))),
                )
            })
            .unwrap(),
    }
}

#[test]
fn cographs_have_width_two_terms() {
    for n in 1..=6 {
        for g in enumerate_up_to_iso::<Graph>((), n, |_| true).unwrap() {
            let Some(t) = cotree(&g) else { continue };
            let cw = compile_cotree(&t);
            assert!(cw.width() <= 2);
            assert_eq!(cw.eval().unwrap().graph, g);
            assert!(cwd_at_most(&g, 2).unwrap().is_some());
        }
    }
}

/// A reachable state of a term: vertex set, labels of its vertices in
/// increasing order (renamed by first occurrence) and edges so far.
type State = (u64, Vec<u8>, Vec<(usize, usize)>);

/// Width-`k` term search over every union, add and relabel, without any
/// normal form. States that can no longer reach `g` are dropped: a missing
/// edge inside one label, or a missing edge whose label pair also holds a
/// non-edge.
fn brute_cwd_at_most(g: &Graph, k: u8) -> bool {
    let n = g.n();
    let vs = |w: u64| (0..n).filter(move |&v| w >> v & 1 == 1);
    let normal = |w: u64, lab: Vec<u8>, mut es: Vec<(usize, usize)>| -> State {
        let mut m = HashMap::new();
        let lab = lab
            .into_iter()
            .map(|l| {
                let k = m.len() as u8;
                *m.entry(l).or_insert(k)
            })
            .collect();
        es.sort_unstable();
        es.dedup();
        (w, lab, es)
    };
    let dead = |(w, lab, es): &State| {
        let v: Vec<usize> = vs(*w).collect();
        let has = |a: usize, b: usize| es.binary_search(&(v[a].min(v[b]), v[a].max(v[b]))).is_ok();
        let pair = |a: usize, b: usize| (lab[a].min(lab[b]), lab[a].max(lab[b]));
        let bad: HashSet<(u8, u8)> = (0..v.len())
            .flat_map(|a| (a + 1..v.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| !g.has_edge(v[a], v[b]) && lab[a] != lab[b])
            .map(|(a, b)| pair(a, b))
            .collect();
        (0..v.len()).any(|a| {
            (a + 1..v.len()).any(|b| {
                g.has_edge(v[a], v[b])
                    && !has(a, b)
                    && (lab[a] == lab[b] || bad.contains(&pair(a, b)))
            })
        })
    };
    if n == 0 {
        return true;
    }
    let target: Vec<(usize, usize)> = g.edges();
    let full = (1u64 << n) - 1;
    let mut seen: HashSet<State> = HashSet::new();
    let mut by_set: HashMap<u64, Vec<State>> = HashMap::new();
    let mut frontier: Vec<State> = (0..n).map(|v| (1u64 << v, vec![0], Vec::new())).collect();
    for s in &frontier {
        seen.insert(s.clone());
        by_set.entry(s.0).or_default().push(s.clone());
    }
    if n == 1 {
        return true;
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (w, lab, es) in std::mem::take(&mut frontier) {
            let v: Vec<usize> = vs(w).collect();
            let labels: Vec<u8> = {
                let mut l = lab.clone();
                l.sort_unstable();
                l.dedup();
                l
            };
            let mut cands: Vec<State> = Vec::new();
            for &a in &labels {
                for &b in &labels {
                    if a == b {
                        continue;
                    }
                    cands.push((
                        w,
                        lab.iter().map(|&l| if l == a { b } else { l }).collect(),
                        es.clone(),
                    ));
                    if a < b {
                        let mut new = es.clone();
                        let mut ok = true;
                        for i in 0..v.len() {
                            for j in 0..v.len() {
                                if lab[i] == a && lab[j] == b {
                                    ok &= g.has_edge(v[i], v[j]);
                                    new.push((v[i].min(v[j]), v[i].max(v[j])));
                                }
                            }
                        }
                        if ok {
                            cands.push((w, lab.clone(), new));
                        }
                    }
                }
            }
            let others: Vec<State> = by_set
                .iter()
                .filter(|(&w2, _)| w2 & w == 0)
                .flat_map(|(_, ss)| ss.clone())
                .collect();
            for (w2, lab2, es2) in others {
                let k2 = *lab2.iter().max().unwrap() as u32 + 1;
                let v2: Vec<usize> = vs(w2).collect();
                for code in 0..(k as u32).pow(k2) {
                    let map: Vec<u8> = (0..k2)
                        .map(|i| (code / (k as u32).pow(i) % k as u32) as u8)
                        .collect();
                    let mut all: Vec<(usize, u8)> =
                        v.iter().copied().zip(lab.iter().copied()).collect();
                    all.extend(
                        v2.iter()
                            .copied()
                            .zip(lab2.iter().map(|&l| map[l as usize])),
                    );
                    all.sort_unstable();
                    let mut es3 = es.clone();
                    es3.extend(es2.iter().copied());
                    cands.push((w | w2, all.into_iter().map(|(_, l)| l).collect(), es3));
                }
            }
            for (w, lab, es) in cands {
                let s = normal(w, lab, es);
                if s.1.iter().any(|&l| l >= k) || seen.contains(&s) || dead(&s) {
                    continue;
                }
                if s.0 == full && s.2 == target {
                    return true;
                }
                seen.insert(s.clone());
                by_set.entry(s.0).or_default().push(s.clone());
                next.push(s);
            }
        }
        frontier = next;
    }
    false
}

#[test]
fn search_matches_brute_force_on_small_graphs() {
    for n in 1..=5 {
        for g in enumerate_up_to_iso::<Graph>((), n, |_| true).unwrap() {
            for k in 1..=3 {
                assert_eq!(
                    cwd_at_most(&g, k).unwrap().is_some(),
                    brute_cwd_at_most(&g, k as u8),
                    "{g:?} k={k}"
                );
            }
        }
    }
}

/// The complement of C6 (the triangular prism) needs four labels.
#[test]
fn prism_has_clique_width_four() {
    let prism = Graph::cycle(6).complement();
    assert!(!brute_cwd_at_most(&prism, 3));
    assert!(brute_cwd_at_most(&prism, 4));
    assert!(cwd_at_most(&prism, 3).unwrap().is_none());
    assert_eq!(
        cwd_at_most(&prism, 4)
            .unwrap()
            .unwrap()
            .eval()
            .unwrap()
            .graph,
        prism
    );
}

#[test]
fn found_terms_evaluate_to_the_graph() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..60 {
        let g = random_graph(&mut rng, 7, 0.45);
        let (k, t) = clique_width(&g, 7).unwrap().unwrap();
        assert!(t.width() <= k);
        assert_eq!(t.eval().unwrap().graph, g);
        if k > 1 {
            assert!(cwd_at_most(&g, k - 1).unwrap().is_none());
        }
        assert!(cwd_at_most(&g, k + 1).unwrap().is_some());
    }
}

#[test]
fn one_vertex_deletion_at_most_doubles() {
    let mut rng = StdRng::seed_from_u64(2);
    for _ in 0..40 {
        let g = random_graph(&mut rng, 7, 0.5);
        if cwd_at_most(&g.delete_vertex(6), 2).unwrap().is_some() {
            assert!(cwd_at_most(&g, 4).unwrap().is_some());
        }
    }
}

#[test]
fn named_bounds_clique_width() {
    for (name, g) in p_cograph_bounds() {
        let (k, t) = clique_width(&g, 4).unwrap().unwrap();
        assert_eq!(t.eval().unwrap().graph, g, "{name}");
        assert_eq!(k, if name == "co-C6" { 4 } else { 3 }, "{name}");
    }
}

#[test]
fn probe_cograph_of_width_four() {
    let g: Graph = cw4_pp_term().eval().unwrap().graph;
    assert_eq!(cw4_term().eval().unwrap().graph, g);
    let t = cwd_at_most(&g, 4).unwrap().unwrap();
    assert_eq!(t.eval().unwrap().graph, g);
    assert!(cwd_at_most(&g, 3).unwrap().is_none());
}
