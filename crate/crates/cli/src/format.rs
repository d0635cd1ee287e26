//! Line-oriented structure files with 1-based vertex ids.
//!
//! ```text
//! graph 4            between 3            mtree 3
//! labels 1 2 2 1     b 1 2 3              kind 1 V
//! e 1 2              b 3 2 1              kind 2 V
//! e 2 3                                   kind 3 T
//!                                         edge 1 3
//!                                         edge 2 3
//! ```
//!
//! Blank lines and `#` comments are ignored. The header comes first.

use std::fmt::Write as _;

use probetree::{Graph, Label, Mark, MarkedJoinTree, TernaryStructure, TwoGraph};

use crate::ParseError;

/// A parsed structure file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Graph(Graph),
    TwoGraph(TwoGraph),
    Between(TernaryStructure),
    MTree(MarkedJoinTree),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Graph(_) => "graph",
            Document::TwoGraph(_) => "2-graph",
            Document::Between(_) => "between",
            Document::MTree(_) => "mtree",
        }
    }

    pub fn print(&self) -> String {
        match self {
            Document::Graph(g) => print_graph(g, None),
            Document::TwoGraph(h) => print_graph(&h.graph, Some(&h.labels)),
            Document::Between(s) => print_between(s),
            Document::MTree(t) => print_mtree(t),
        }
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
        }
    }
}

impl<'a> Iterator for Lines<'a> {
    /// 1-based line number and the fields of a non-empty line.
    type Item = (usize, Vec<&'a str>);

    fn next(&mut self) -> Option<Self::Item> {
        for (i, line) in self.inner.by_ref() {
            let content = line.split('#').next().unwrap_or("");
            let fields: Vec<&str> = content.split_whitespace().collect();
            if !fields.is_empty() {
                return Some((i + 1, fields));
            }
        }
        None
    }
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        msg: msg.into(),
    }
}

fn arity(line: usize, fields: &[&str], n: usize) -> Result<(), ParseError> {
    if fields.len() != n + 1 {
        return Err(err(
            line,
            format!(
                "`{}` takes {n} argument(s), found {}",
                fields[0],
                fields.len() - 1
            ),
        ));
    }
    Ok(())
}

fn number(line: usize, s: &str) -> Result<usize, ParseError> {
    s.parse()
        .map_err(|_| err(line, format!("expected a number, found `{s}`")))
}

/// A 1-based vertex id in `1..=n`, returned 0-based.
fn vertex(line: usize, s: &str, n: usize) -> Result<usize, ParseError> {
    let v = number(line, s)?;
    if v == 0 || v > n {
        return Err(err(line, format!("vertex {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

fn header(lines: &mut Lines<'_>, keyword: &str) -> Result<(usize, usize), ParseError> {
    let (line, fields) = lines.next().ok_or_else(|| err(1, "empty file"))?;
    if fields[0] != keyword {
        return Err(err(
            line,
            format!("expected `{keyword} <n>` header, found `{}`", fields[0]),
        ));
    }
    arity(line, &fields, 1)?;
    let n = number(line, fields[1])?;
    if n > probetree::graph::MAX_VERTICES {
        return Err(err(
            line,
            format!(
                "at most {} vertices are supported",
                probetree::graph::MAX_VERTICES
            ),
        ));
    }
    Ok((line, n))
}

/// Parses any structure file, dispatching on its header. With `symclose`,
/// every `b x y z` also adds `(z, y, x)`.
pub fn parse_document(text: &str, symclose: bool) -> Result<Document, ParseError> {
    let first = Lines::new(text)
        .next()
        .ok_or_else(|| err(1, "empty file"))?;
    match first.1[0] {
        "graph" => parse_graph(text),
        "between" => parse_between(text, symclose).map(Document::Between),
        "mtree" => parse_mtree(text).map(Document::MTree),
        other => Err(err(first.0, format!("unknown header `{other}`"))),
    }
}

/// A graph file; with a `labels` line the result is a 2-graph.
pub fn parse_graph(text: &str) -> Result<Document, ParseError> {
    let mut lines = Lines::new(text);
    let (_, n) = header(&mut lines, "graph")?;
    let mut g = Graph::new(n);
    let mut labels: Option<Vec<Label>> = None;
    for (line, f) in lines {
        match f[0] {
            "e" => {
                arity(line, &f, 2)?;
                let (u, v) = (vertex(line, f[1], n)?, vertex(line, f[2], n)?);
                if u == v {
                    return Err(err(line, "loops are not allowed"));
                }
                g.add_edge(u, v);
            }
            "labels" => {
                if labels.is_some() {
                    return Err(err(line, "duplicate `labels` line"));
                }
                arity(line, &f, n)?;
                let ls = f[1..]
                    .iter()
                    .map(|s| match *s {
                        "1" => Ok(Label::One),
                        "2" => Ok(Label::Two),
                        _ => Err(err(line, format!("label must be 1 or 2, found `{s}`"))),
                    })
                    .collect::<Result<_, _>>()?;
                labels = Some(ls);
            }
            other => {
                return Err(err(
                    line,
                    format!("unknown directive `{other}` in graph file"),
                ))
            }
        }
    }
    Ok(match labels {
        Some(labels) => Document::TwoGraph(TwoGraph { graph: g, labels }),
        None => Document::Graph(g),
    })
}

pub fn parse_between(text: &str, symclose: bool) -> Result<TernaryStructure, ParseError> {
    let mut lines = Lines::new(text);
    let (_, n) = header(&mut lines, "between")?;
    let mut s = TernaryStructure::new(n);
    for (line, f) in lines {
        match f[0] {
            "b" => {
                arity(line, &f, 3)?;
                let (x, y, z) = (
                    vertex(line, f[1], n)?,
                    vertex(line, f[2], n)?,
                    vertex(line, f[3], n)?,
                );
                s.insert(x, y, z);
                if symclose {
                    s.insert(z, y, x);
                }
            }
            other => {
                return Err(err(
                    line,
                    format!("unknown directive `{other}` in between file"),
                ))
            }
        }
    }
    Ok(s)
}

pub fn parse_mtree(text: &str) -> Result<MarkedJoinTree, ParseError> {
    let mut lines = Lines::new(text);
    let (head, m) = header(&mut lines, "mtree")?;
    let mut marks: Vec<Option<Mark>> = vec![None; m];
    let mut parent: Vec<Option<usize>> = vec![None; m];
    let mut last = head;
    for (line, f) in lines {
        last = line;
        match f[0] {
            "kind" => {
                arity(line, &f, 2)?;
                let v = vertex(line, f[1], m)?;
                let mark = match f[2] {
                    "V" | "P" | "T" => Mark::from_letter(f[2].chars().next().unwrap()).unwrap(),
                    other => {
                        return Err(err(
                            line,
                            format!("kind must be V, P or T, found `{other}`"),
                        ))
                    }
                };
                if marks[v].replace(mark).is_some() {
                    return Err(err(line, format!("node {} has two kinds", v + 1)));
                }
            }
            "edge" => {
                arity(line, &f, 2)?;
                let (c, p) = (vertex(line, f[1], m)?, vertex(line, f[2], m)?);
                if parent[c].replace(p).is_some() {
                    return Err(err(line, format!("node {} has two parents", c + 1)));
                }
            }
            other => {
                return Err(err(
                    line,
                    format!("unknown directive `{other}` in mtree file"),
                ))
            }
        }
    }
    let roots = parent.iter().filter(|p| p.is_none()).count();
    if m > 0 && roots != 1 {
        return Err(err(
            last,
            format!("expected exactly one parentless node, found {roots}"),
        ));
    }
    let marks = marks
        .into_iter()
        .map(|k| k.unwrap_or(Mark::Plain))
        .collect();
    MarkedJoinTree::new(parent, marks).map_err(|e| err(last, e.to_string()))
}

pub fn print_graph(g: &Graph, labels: Option<&[Label]>) -> String {
    let mut out = format!("graph {}\n", g.n());
    if let Some(ls) = labels {
        out.push_str("labels");
        for l in ls {
            write!(out, " {}", l.digit()).unwrap();
        }
        out.push('\n');
    }
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

pub fn print_between(s: &TernaryStructure) -> String {
    let mut out = format!("between {}\n", s.n());
    for (x, y, z) in s.triples() {
        writeln!(out, "b {} {} {}", x + 1, y + 1, z + 1).unwrap();
    }
    out
}

pub fn print_mtree(t: &MarkedJoinTree) -> String {
    let mut out = format!("mtree {}\n", t.size());
    for v in 0..t.size() {
        writeln!(out, "kind {} {}", v + 1, t.mark(v).letter()).unwrap();
    }
    for v in 0..t.size() {
        if let Some(p) = t.tree().parent(v) {
            writeln!(out, "edge {} {}", v + 1, p + 1).unwrap();
        }
    }
    out
}
