//! Exhaustive search for the bounds of hereditary classes: the structures
//! outside the class whose one-point deletions all lie inside it.
//!
//! The search runs level by level. Every member and every bound of size `n`
//! is a one-vertex extension of a member of size `n - 1`, so the candidates
//! of level `n` are the extensions of the members of level `n - 1`, up to
//! isomorphism. A candidate with a deletion outside the class is neither a
//! member nor a bound; the others are decided once.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::betweenness::{
    decide_ibo, decide_ibo_oracle, decide_ibqt_oracle, in_ibqt, satisfies_a1_a6,
};
use crate::canon::{CanonicalForm, Canonize, Extend, TernarySpace};
use crate::cographs::{is_cograph, is_p_cograph, is_pp_cograph, pp_term};
use crate::error::{Error, Result};
use crate::graph::{Graph, TwoGraph};
use crate::ternary::TernaryStructure;

/// One structure of any of the searched kinds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "lowercase")]
pub enum AnyStructure {
    Graph(Graph),
    TwoGraph(TwoGraph),
    Ternary(TernaryStructure),
}

impl AnyStructure {
    pub fn size(&self) -> usize {
        match self {
            AnyStructure::Graph(g) => g.n(),
            AnyStructure::TwoGraph(h) => h.n(),
            AnyStructure::Ternary(s) => s.n(),
        }
    }

    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        match self {
            AnyStructure::Graph(g) => g.canonical_form(),
            AnyStructure::TwoGraph(h) => h.canonical_form(),
            AnyStructure::Ternary(s) => s.canonical_form(),
        }
    }
}

/// Structures the bound search can run over.
pub trait Searchable: Extend + Serialize + DeserializeOwned + Send + Sync + fmt::Debug {
    fn wrap(self) -> AnyStructure;

    /// Connected Gaifman graph (a single vertex counts as connected).
    fn is_connected(&self) -> bool;
}

impl Searchable for Graph {
    fn wrap(self) -> AnyStructure {
        AnyStructure::Graph(self)
    }

    fn is_connected(&self) -> bool {
        Graph::is_connected(self)
    }
}

impl Searchable for TwoGraph {
    fn wrap(self) -> AnyStructure {
        AnyStructure::TwoGraph(self)
    }

    fn is_connected(&self) -> bool {
        self.graph.is_connected()
    }
}

impl Searchable for TernaryStructure {
    fn wrap(self) -> AnyStructure {
        AnyStructure::Ternary(self)
    }

    fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// The classes with a built-in search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundClass {
    Cograph,
    /// Partitioned probe cographs (2-graphs).
    Pp,
    /// Probe cographs.
    P,
    Ibo,
    Ibqt,
}

impl BoundClass {
    pub const ALL: [BoundClass; 5] = [
        BoundClass::Cograph,
        BoundClass::Pp,
        BoundClass::P,
        BoundClass::Ibo,
        BoundClass::Ibqt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundClass::Cograph => "cograph",
            BoundClass::Pp => "pp",
            BoundClass::P => "p",
            BoundClass::Ibo => "ibo",
            BoundClass::Ibqt => "ibqt",
        }
    }

    /// Largest `max_n` accepted by [`find_bounds`].
    pub fn cap(self) -> usize {
        match self {
            BoundClass::Cograph | BoundClass::P => 8,
            BoundClass::Pp => 6,
            BoundClass::Ibo | BoundClass::Ibqt => 5,
        }
    }
}

impl fmt::Display for BoundClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        BoundClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown class {s:?} (expected cograph, pp, p, ibo or ibqt)"))
    }
}

/// Deleting `vertex` gives the structure with canonical form `form`, which
/// is in the class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub vertex: usize,
    pub form: CanonicalForm,
    pub member: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub size: usize,
    pub form: CanonicalForm,
    pub structure: AnyStructure,
    pub certificates: Vec<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub n: usize,
    /// Candidates after isomorphism reduction.
    pub candidates: usize,
    pub members: usize,
    pub bounds: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub class: String,
    pub max_n: usize,
    /// Sorted by size, then canonical form.
    pub bounds: Vec<BoundEntry>,
    pub levels: Vec<LevelSummary>,
}

impl BoundReport {
    pub fn bounds_of_size(&self, n: usize) -> impl Iterator<Item = &BoundEntry> {
        self.bounds.iter().filter(move |b| b.size == n)
    }

    pub fn contains_form(&self, f: &CanonicalForm) -> bool {
        self.bounds.iter().any(|b| b.form == *f)
    }
}

/// Whether `s` is outside the class while every one-point deletion is
/// inside (sufficient for minimality when the class is hereditary).
pub fn is_bound<S: Extend>(s: &S, decider: impl Fn(&S) -> bool) -> bool {
    !decider(s) && (0..s.size()).all(|x| decider(&s.delete(x)))
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Directory for per-level checkpoint files.
    pub checkpoint_dir: Option<PathBuf>,
    /// Continue from the last checkpointed level.
    pub resume: bool,
}

/// How one class is searched.
pub struct ClassSearch<'a, S: Extend> {
    pub name: &'a str,
    /// Candidate space used to grow level `n`.
    pub space: &'a (dyn Fn(usize) -> S::Space + Sync),
    pub decider: &'a (dyn Fn(&S) -> bool + Sync),
    /// Structures of size `n` failing this are neither members nor bounds.
    pub admissible: &'a (dyn Fn(&S, usize) -> bool + Sync),
    /// The class is closed under disjoint union, so its bounds are
    /// connected and disconnected candidates with members as deletions are
    /// members.
    pub union_closed: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "S: Serialize + DeserializeOwned")]
struct Checkpoint<S> {
    class: String,
    n: usize,
    members: Vec<S>,
    bounds: Vec<BoundEntry>,
    levels: Vec<LevelSummary>,
}

fn checkpoint_path(dir: &Path, class: &str, n: usize) -> PathBuf {
    dir.join(format!("{class}-level-{n}.json"))
}

fn io_error(path: &Path, e: impl fmt::Display) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

enum Verdict {
    Member,
    Bound(Vec<Certificate>),
    Neither,
}

/// Runs the level-by-level search up to `max_n`.
pub fn search_bounds<S: Searchable>(
    search: &ClassSearch<'_, S>,
    max_n: usize,
    opts: &SearchOptions,
) -> Result<BoundReport> {
    let run = || search_inner(search, max_n, opts);
    match opts.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::Io(e.to_string()))?;
            pool.install(run)
        }
        None => run(),
    }
}

fn search_inner<S: Searchable>(
    search: &ClassSearch<'_, S>,
    max_n: usize,
    opts: &SearchOptions,
) -> Result<BoundReport> {
    let mut start = 0;
    let mut members: Vec<S> = vec![S::empty()];
    let mut bounds: Vec<BoundEntry> = Vec::new();
    let mut levels: Vec<LevelSummary> = vec![LevelSummary {
        n: 0,
        candidates: 1,
        members: 1,
        bounds: 0,
    }];
    if let (true, Some(dir)) = (opts.resume, &opts.checkpoint_dir) {
        for n in (1..=max_n).rev() {
            let path = checkpoint_path(dir, search.name, n);
            if path.exists() {
                let text = fs::read_to_string(&path).map_err(|e| io_error(&path, e))?;
                let ck: Checkpoint<S> =
                    serde_json::from_str(&text).map_err(|e| io_error(&path, e))?;
                if ck.class != search.name || ck.n != n {
                    return Err(io_error(&path, "checkpoint belongs to another search"));
                }
                start = n;
                members = ck.members;
                bounds = ck.bounds;
                levels = ck.levels;
                break;
            }
        }
    }
    for n in start + 1..=max_n {
        let mut member_forms: HashSet<CanonicalForm> = HashSet::with_capacity(members.len());
        for m in &members {
            member_forms.insert(m.canonical_form()?);
        }
        let space = (search.space)(n);
        let keyed: Vec<(CanonicalForm, S)> = members
            .par_iter()
            .flat_map_iter(|m| {
                m.extensions(space)
                    .into_iter()
                    .filter(|s| (search.admissible)(s, n))
            })
            .map(|s| s.canonical_form().map(|f| (f, s)))
            .collect::<Result<_>>()?;
        let mut unique: BTreeMap<CanonicalForm, S> = BTreeMap::new();
        for (f, s) in keyed {
            unique.entry(f).or_insert(s);
        }
        let candidates = unique.len();
        let verdicts: Vec<(CanonicalForm, S, Verdict)> = unique
            .into_par_iter()
            .map(|(f, s)| {
                let mut certs = Vec::with_capacity(n);
                for x in 0..n {
                    let form = s.delete(x).canonical_form()?;
                    if !member_forms.contains(&form) {
                        return Ok((f, s, Verdict::Neither));
                    }
                    certs.push(Certificate {
                        vertex: x,
                        form,
                        member: true,
                    });
                }
                // A disjoint union of members is a member.
                let verdict = if (search.union_closed && !s.is_connected()) || (search.decider)(&s)
                {
                    Verdict::Member
                } else {
                    Verdict::Bound(certs)
                };
                Ok((f, s, verdict))
            })
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        let mut found = 0;
        for (form, s, v) in verdicts {
            match v {
                Verdict::Member => next.push(s),
                Verdict::Bound(certificates) => {
                    found += 1;
                    bounds.push(BoundEntry {
                        size: n,
                        form,
                        structure: s.wrap(),
                        certificates,
                    });
                }
                Verdict::Neither => {}
            }
        }
        levels.push(LevelSummary {
            n,
            candidates,
            members: next.len(),
            bounds: found,
        });
        members = next;
        if let Some(dir) = &opts.checkpoint_dir {
            fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
            let path = checkpoint_path(dir, search.name, n);
            let ck = Checkpoint {
                class: search.name.to_string(),
                n,
                members,
                bounds,
                levels,
            };
            let text = serde_json::to_string(&ck).map_err(|e| io_error(&path, e))?;
            let tmp = path.with_extension("json.tmp");
            fs::write(&tmp, text).map_err(|e| io_error(&tmp, e))?;
            fs::rename(&tmp, &path).map_err(|e| io_error(&path, e))?;
            members = ck.members;
            bounds = ck.bounds;
            levels = ck.levels;
        }
    }
    bounds.retain(|b| b.size <= max_n);
    bounds.sort_by(|a, b| (a.size, &a.form).cmp(&(b.size, &b.form)));
    levels.retain(|l| l.n <= max_n);
    Ok(BoundReport {
        class: search.name.to_string(),
        max_n,
        bounds,
        levels,
    })
}

/// Ternary candidate spaces: a bound of size `n` violates no axiom whose
/// violations need fewer than `n` elements, so level 3 needs only
/// irreflexive triples, level 4 symmetric ones, and levels from 5 on
/// structures satisfying A1-A6.
pub fn ternary_space(n: usize) -> TernarySpace {
    match n {
        0..=2 => TernarySpace::Raw,
        3 => TernarySpace::Irreflexive,
        _ => TernarySpace::Symmetric,
    }
}

fn ternary_admissible(s: &TernaryStructure, n: usize) -> bool {
    n < 5 || satisfies_a1_a6(s)
}

/// The decider a search uses for `class`, lifted to [`AnyStructure`].
pub fn decider_for(class: BoundClass) -> fn(&AnyStructure) -> bool {
    fn cograph(s: &AnyStructure) -> bool {
        matches!(s, AnyStructure::Graph(g) if is_cograph(g))
    }
    fn pp(s: &AnyStructure) -> bool {
        matches!(s, AnyStructure::TwoGraph(h) if h.n() == 0 || pp_term(h).is_some())
    }
    fn p(s: &AnyStructure) -> bool {
        matches!(s, AnyStructure::Graph(g) if g.n() == 0 || is_p_cograph(g))
    }
    fn ibo(s: &AnyStructure) -> bool {
        matches!(s, AnyStructure::Ternary(t) if decide_ibo(t).is_some())
    }
    fn ibqt(s: &AnyStructure) -> bool {
        matches!(s, AnyStructure::Ternary(t) if in_ibqt(t))
    }
    match class {
        BoundClass::Cograph => cograph,
        BoundClass::Pp => pp,
        BoundClass::P => p,
        BoundClass::Ibo => ibo,
        BoundClass::Ibqt => ibqt,
    }
}

/// A second decider for re-verifying reported bounds, implemented
/// independently of the search decider where one exists.
pub fn alternate_decider(class: BoundClass) -> fn(&AnyStructure) -> bool {
    fn pp(s: &AnyStructure) -> bool {
        matches!(s, AnyStructure::TwoGraph(h) if is_pp_cograph(h))
    }
    fn ibo(s: &AnyStructure) -> bool {
        matches!(s, AnyStructure::Ternary(t) if decide_ibo_oracle(t).expect("within oracle cap").is_some())
    }
    fn ibqt(s: &AnyStructure) -> bool {
        matches!(s, AnyStructure::Ternary(t) if decide_ibqt_oracle(t).expect("within oracle cap").is_some())
    }
    fn cograph(s: &AnyStructure) -> bool {
        matches!(s, AnyStructure::Graph(g) if !g.has_induced_path(4))
    }
    match class {
        BoundClass::Cograph => cograph,
        BoundClass::Pp => pp,
        BoundClass::P => decider_for(BoundClass::P),
        BoundClass::Ibo => ibo,
        BoundClass::Ibqt => ibqt,
    }
}

/// Bounds of `class` with at most `max_n` elements.
pub fn find_bounds(class: BoundClass, max_n: usize, opts: &SearchOptions) -> Result<BoundReport> {
    if max_n > class.cap() {
        return Err(Error::CapExceeded {
            what: "bound search",
            size: max_n,
            cap: class.cap(),
        });
    }
    let name = class.name();
    match class {
        BoundClass::Cograph => {
            let decider = |g: &Graph| is_cograph(g);
            let search = ClassSearch {
                name,
                space: &|_| (),
                decider: &decider,
                admissible: &|_, _| true,
                union_closed: true,
            };
            search_bounds(&search, max_n, opts)
        }
        BoundClass::P => {
            let decider = |g: &Graph| is_p_cograph(g);
            // Beyond six vertices a component of diameter 5 or more contains
            // an induced P6, so such graphs are neither members nor bounds.
            let admissible = |g: &Graph, n: usize| n <= 6 || g.max_component_diameter() < 5;
            let search = ClassSearch {
                name,
                space: &|_| (),
                decider: &decider,
                admissible: &admissible,
                union_closed: true,
            };
            search_bounds(&search, max_n, opts)
        }
        BoundClass::Pp => {
            let decider = |h: &TwoGraph| pp_term(h).is_some();
            let search = ClassSearch {
                name,
                space: &|_| (),
                decider: &decider,
                admissible: &|_, _| true,
                union_closed: true,
            };
            search_bounds(&search, max_n, opts)
        }
        BoundClass::Ibo => {
            let decider = |s: &TernaryStructure| decide_ibo(s).is_some();
            let search = ClassSearch {
                name,
                space: &ternary_space,
                decider: &decider,
                admissible: &ternary_admissible,
                union_closed: false,
            };
            search_bounds(&search, max_n, opts)
        }
        BoundClass::Ibqt => {
            let decider = |s: &TernaryStructure| in_ibqt(s);
            let search = ClassSearch {
                name,
                space: &ternary_space,
                decider: &decider,
                admissible: &ternary_admissible,
                union_closed: false,
            };
            search_bounds(&search, max_n, opts)
        }
    }
}

/// Checks a report against a decider: every bound fails it and every
/// one-point deletion passes. Returns the first offending entry.
pub fn verify_report(
    report: &BoundReport,
    decider: impl Fn(&AnyStructure) -> bool,
) -> Option<&BoundEntry> {
    report.bounds.iter().find(|b| {
        if decider(&b.structure) {
            return true;
        }
        let n = b.size;
        (0..n).any(|x| {
            let del = match &b.structure {
                AnyStructure::Graph(g) => AnyStructure::Graph(g.delete_vertex(x)),
                AnyStructure::TwoGraph(h) => AnyStructure::TwoGraph(h.delete_vertex(x)),
                AnyStructure::Ternary(s) => AnyStructure::Ternary(s.delete_vertex(x)),
            };
            !decider(&del)
        })
    })
}
