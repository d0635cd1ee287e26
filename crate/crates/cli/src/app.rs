//! Subcommands. Each returns a [`Verdict`] or an error; `main` maps them to
//! exit codes 0, 1 and 2.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use probetree::betweenness::{check_axioms, in_ibqt, in_qt, AxiomStatus};
use probetree::bounds::{find_bounds, AnyStructure, BoundClass, BoundReport, SearchOptions};
use probetree::cliquewidth::cwd_at_most;
use probetree::cographs::{cotree, find_good_labelling, find_pp_obstruction, pp_term};
use probetree::{
    decide_ibo, decide_ibo_oracle, Axiom, Canonize, Graph, IboWitness, MarkedJoinTree,
    TernaryStructure, TwoGraph,
};

use crate::format::{parse_document, print_between, print_graph, print_mtree, Document};
use crate::terms::{parse_cw_term, print_cograph_term, print_cw_term, print_pp_term};
use crate::{CliError, Verdict};

/// Environment variable naming the default checkpoint directory of `bounds`.
pub const CACHE_DIR_VAR: &str = "IBO_CACHE_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "probetree",
    version,
    about = "Betweenness structures of trees and probe cographs"
)]
pub struct Cli {
    /// Add (z,y,x) for every triple (x,y,z) read from a between file.
    #[arg(long, global = true)]
    pub symclose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Operations on marked trees.
    #[command(subcommand)]
    Between(BetweenCommand),
    #[command(subcommand)]
    Check(CheckCommand),
    /// Membership of a ternary structure in QT, IBQT or IBO.
    Decide {
        class: DecideClass,
        file: PathBuf,
        /// Write a defining marked tree here (ibo and ibo-oracle only).
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Cograph, pp-cograph or probe cograph recognition.
    Recognize {
        class: RecognizeClass,
        file: PathBuf,
    },
    /// Minimal non-members of a class up to `--max-n` elements.
    Bounds {
        class: BoundClass,
        #[arg(long)]
        max_n: usize,
        /// Resume from the checkpoints in this directory.
        #[arg(long, value_name = "DIR", conflicts_with = "checkpoint")]
        resume: Option<PathBuf>,
        /// Write per-level checkpoints here (default: $IBO_CACHE_DIR).
        #[arg(long, value_name = "DIR")]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Clique-width terms.
    #[command(subcommand)]
    Cw(CwCommand),
    /// Canonical form of a graph, 2-graph or between file.
    Canon { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum BetweenCommand {
    /// The betweenness relation of a marked tree, on its plain nodes in id order.
    FromTree { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum CheckCommand {
    /// Check the axioms A1 up to `--upto`.
    Axioms {
        file: PathBuf,
        #[arg(long, default_value = "A8")]
        upto: Axiom,
    },
}

#[derive(Debug, Subcommand)]
pub enum CwCommand {
    /// Evaluate a clique-width term.
    Eval { file: PathBuf },
    /// A term of width at most k, if there is one.
    Atmost {
        file: PathBuf,
        #[arg(short)]
        k: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DecideClass {
    Qt,
    Ibqt,
    Ibo,
    IboOracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RecognizeClass {
    Cograph,
    Pp,
    P,
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load(path: &Path, symclose: bool) -> Result<Document, CliError> {
    parse_document(&read_file(path)?, symclose).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn load_between(path: &Path, symclose: bool) -> Result<TernaryStructure, CliError> {
    match load(path, symclose)? {
        Document::Between(s) => Ok(s),
        d => Err(CliError::Usage(format!(
            "{}: expected a between file, found {}",
            path.display(),
            d.kind()
        ))),
    }
}

fn load_graph(path: &Path) -> Result<(Graph, Option<TwoGraph>), CliError> {
    match load(path, false)? {
        Document::Graph(g) => Ok((g, None)),
        Document::TwoGraph(h) => Ok((h.graph.clone(), Some(h))),
        d => Err(CliError::Usage(format!(
            "{}: expected a graph file, found {}",
            path.display(),
            d.kind()
        ))),
    }
}

fn ids(vs: &[usize]) -> String {
    vs.iter()
        .map(|v| (v + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Renumbers the witness tree so that domain element `i` is its `i`-th
/// plain node, the convention of `between from-tree`.
pub fn witness_tree(w: &IboWitness) -> Result<MarkedJoinTree, CliError> {
    let t = &w.tree;
    let m = t.size();
    let mut new_id = vec![usize::MAX; m];
    for (i, &v) in w.mapping.iter().enumerate() {
        new_id[v] = i;
    }
    let unmapped = new_id.iter_mut().filter(|id| **id == usize::MAX);
    for (next, id) in (w.mapping.len()..).zip(unmapped) {
        *id = next;
    }
    let mut parent = vec![None; m];
    let mut marks = vec![probetree::Mark::Plain; m];
    for v in 0..m {
        parent[new_id[v]] = t.tree().parent(v).map(|p| new_id[p]);
        marks[new_id[v]] = t.mark(v);
    }
    Ok(MarkedJoinTree::new(parent, marks)?)
}

pub fn render_report(r: &BoundReport) -> String {
    let mut out = format!("# bounds {} max-n {}\n", r.class, r.max_n);
    writeln!(out, "# size candidates members bounds").unwrap();
    for l in &r.levels {
        writeln!(out, "# {} {} {} {}", l.n, l.candidates, l.members, l.bounds).unwrap();
    }
    writeln!(out, "# total {}", r.bounds.len()).unwrap();
    for (i, b) in r.bounds.iter().enumerate() {
        writeln!(
            out,
            "\n# bound {} size {} hash {:016x}",
            i + 1,
            b.size,
            b.form.digest()
        )
        .unwrap();
        out.push_str(&match &b.structure {
            AnyStructure::Graph(g) => print_graph(g, None),
            AnyStructure::TwoGraph(h) => print_graph(&h.graph, Some(&h.labels)),
            AnyStructure::Ternary(s) => print_between(s),
        });
    }
    out
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Verdict, CliError> {
    let symclose = cli.symclose;
    match &cli.command {
        Command::Between(BetweenCommand::FromTree { file }) => {
            let t = match load(file, symclose)? {
                Document::MTree(t) => t,
                d => {
                    return Err(CliError::Usage(format!(
                        "{}: expected an mtree file, found {}",
                        file.display(),
                        d.kind()
                    )))
                }
            };
            for (i, v) in t.plain_nodes().into_iter().enumerate() {
                writeln!(out, "# element {} is node {}", i + 1, v + 1)?;
            }
            out.write_all(print_between(&t.betweenness()).as_bytes())?;
            Ok(Verdict::Yes)
        }
        Command::Check(CheckCommand::Axioms { file, upto }) => {
            let s = load_between(file, symclose)?;
            let report = check_axioms(&s, &upto.upto());
            for (a, status) in &report.results {
                match status {
                    AxiomStatus::Holds => writeln!(out, "{a} holds")?,
                    AxiomStatus::Fails(w) => writeln!(out, "{a} fails at {}", ids(w))?,
                }
            }
            Ok(Verdict::of(report.all_hold()))
        }
        Command::Decide {
            class,
            file,
            witness,
        } => {
            let s = load_between(file, symclose)?;
            let w = match class {
                DecideClass::Qt | DecideClass::Ibqt => {
                    if witness.is_some() {
                        return Err(CliError::Usage(
                            "--witness is supported for ibo and ibo-oracle".into(),
                        ));
                    }
                    let yes = if *class == DecideClass::Qt {
                        in_qt(&s)
                    } else {
                        in_ibqt(&s)
                    };
                    writeln!(out, "{}", if yes { "yes" } else { "no" })?;
                    return Ok(Verdict::of(yes));
                }
                DecideClass::Ibo => decide_ibo(&s),
                DecideClass::IboOracle => decide_ibo_oracle(&s)?,
            };
            match w {
                Some(w) => {
                    let t = witness_tree(&w)?;
                    writeln!(out, "yes")?;
                    writeln!(out, "# witness size {}", t.size())?;
                    if let Some(path) = witness {
                        std::fs::write(path, print_mtree(&t)).map_err(|source| CliError::Io {
                            path: path.clone(),
                            source,
                        })?;
                    }
                    Ok(Verdict::Yes)
                }
                None => {
                    writeln!(out, "no")?;
                    Ok(Verdict::No)
                }
            }
        }
        Command::Recognize { class, file } => {
            let (g, labelled) = load_graph(file)?;
            match class {
                RecognizeClass::Cograph => match cotree(&g) {
                    Some(t) => writeln!(out, "yes\n{}", print_cograph_term(&t))?,
                    None if g.n() == 0 => writeln!(out, "yes")?,
                    None => {
                        let p = g.find_induced_path(4).unwrap_or_default();
                        writeln!(out, "no\n# induced P4: {}", ids(&p))?;
                        return Ok(Verdict::No);
                    }
                },
                RecognizeClass::Pp => {
                    let h = labelled.ok_or_else(|| {
                        CliError::Usage(format!(
                            "{}: pp recognition needs a `labels` line",
                            file.display()
                        ))
                    })?;
                    match pp_term(&h) {
                        Some(t) => writeln!(out, "yes\n{}", print_pp_term(&t))?,
                        None if h.n() == 0 => writeln!(out, "yes")?,
                        None => {
                            let obs = find_pp_obstruction(&h).unwrap_or_default();
                            writeln!(out, "no\n# obstruction: {}", ids(&obs))?;
                            return Ok(Verdict::No);
                        }
                    }
                }
                RecognizeClass::P => match find_good_labelling(&g) {
                    Some(labels) => {
                        writeln!(out, "yes")?;
                        let h = TwoGraph::new(g.clone(), labels)?;
                        out.write_all(print_graph(&g, Some(&h.labels)).as_bytes())?;
                        if let Some(t) = pp_term(&h) {
                            writeln!(out, "# {}", print_pp_term(&t))?;
                        }
                    }
                    None => {
                        writeln!(out, "no")?;
                        return Ok(Verdict::No);
                    }
                },
            }
            Ok(Verdict::Yes)
        }
        Command::Bounds {
            class,
            max_n,
            resume,
            checkpoint,
            workers,
            json,
        } => {
            let env_dir = std::env::var_os(CACHE_DIR_VAR)
                .filter(|d| !d.is_empty())
                .map(PathBuf::from);
            let opts = SearchOptions {
                workers: *workers,
                checkpoint_dir: resume.clone().or_else(|| checkpoint.clone()).or(env_dir),
                resume: resume.is_some(),
            };
            if *workers == Some(0) {
                return Err(CliError::Usage("--workers must be positive".into()));
            }
            let report = find_bounds(*class, *max_n, &opts)?;
            if *json {
                serde_json::to_writer_pretty(&mut *out, &report).map_err(std::io::Error::from)?;
                writeln!(out)?;
            } else {
                out.write_all(render_report(&report).as_bytes())?;
            }
            Ok(Verdict::Yes)
        }
        Command::Cw(CwCommand::Eval { file }) => {
            let text = read_file(file)?;
            let t = parse_cw_term(&text).map_err(|source| CliError::Parse {
                path: file.clone(),
                source,
            })?;
            let g = t.eval()?;
            writeln!(out, "# width {}", t.width())?;
            writeln!(
                out,
                "# labels {}",
                g.labels
                    .iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            )?;
            out.write_all(print_graph(&g.graph, None).as_bytes())?;
            Ok(Verdict::Yes)
        }
        Command::Cw(CwCommand::Atmost { file, k }) => {
            let (g, _) = load_graph(file)?;
            match cwd_at_most(&g, *k)? {
                Some(t) => {
                    writeln!(out, "yes\n{}", print_cw_term(&t))?;
                    Ok(Verdict::Yes)
                }
                None => {
                    writeln!(out, "no")?;
                    Ok(Verdict::No)
                }
            }
        }
        Command::Canon { file } => {
            let (kind, form) = match load(file, symclose)? {
                Document::Graph(g) => ("graph", g.canonical_form()?),
                Document::TwoGraph(h) => ("2-graph", h.canonical_form()?),
                Document::Between(s) => ("between", s.canonical_form()?),
                Document::MTree(_) => {
                    return Err(CliError::Usage(
                        "canon takes a graph or between file".into(),
                    ))
                }
            };
            writeln!(out, "{kind} {}", form.to_hex())?;
            Ok(Verdict::Yes)
        }
    }
}
