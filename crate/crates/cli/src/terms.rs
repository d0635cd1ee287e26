//! Parenthesized prefix terms with 1-based vertex ids.
//!
//! * cograph: `(u t...)`, `(j t...)`, `(v <id>)`
//! * pp: as cograph, with leaves `(v1 <id>)` and `(v2 <id>)`
//! * clique-width: `(U t1 t2)`, `(add <a> <b> t)`, `(ren <a> <b> t)`, `(vtx <a> <id>)`

use std::fmt::Write as _;

use probetree::{CographTerm, CwTerm, Label, PPTerm};

use crate::ParseError;

#[derive(Debug)]
enum Sexp<'a> {
    Atom(usize, &'a str),
    List(usize, Vec<Sexp<'a>>),
}

impl Sexp<'_> {
    fn line(&self) -> usize {
        match self {
            Sexp::Atom(l, _) | Sexp::List(l, _) => *l,
        }
    }
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        msg: msg.into(),
    }
}

fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("");
        let mut start = None;
        for (j, c) in content.char_indices() {
            if c == '(' || c == ')' || c.is_whitespace() {
                if let Some(s) = start.take() {
                    out.push((i + 1, &content[s..j]));
                }
                if !c.is_whitespace() {
                    out.push((i + 1, &content[j..j + 1]));
                }
            } else if start.is_none() {
                start = Some(j);
            }
        }
        if let Some(s) = start {
            out.push((i + 1, &content[s..]));
        }
    }
    out
}

fn read(text: &str) -> Result<Sexp<'_>, ParseError> {
    let toks = tokens(text);
    let mut pos = 0;
    let e = read_at(&toks, &mut pos)?;
    if let Some((line, t)) = toks.get(pos) {
        return Err(err(*line, format!("unexpected `{t}` after the term")));
    }
    Ok(e)
}

fn read_at<'a>(toks: &[(usize, &'a str)], pos: &mut usize) -> Result<Sexp<'a>, ParseError> {
    let last = toks.last().map_or(1, |t| t.0);
    let &(line, t) = toks
        .get(*pos)
        .ok_or_else(|| err(last, "unexpected end of term"))?;
    *pos += 1;
    match t {
        ")" => Err(err(line, "unexpected `)`")),
        "(" => {
            let mut items = Vec::new();
            loop {
                match toks.get(*pos) {
                    None => return Err(err(last, "unclosed `(`")),
                    Some((_, ")")) => {
                        *pos += 1;
                        return Ok(Sexp::List(line, items));
                    }
                    Some(_) => items.push(read_at(toks, pos)?),
                }
            }
        }
        atom => Ok(Sexp::Atom(line, atom)),
    }
}

/// Splits `(head args...)`.
fn form<'s, 'a>(e: &'s Sexp<'a>) -> Result<(usize, &'a str, &'s [Sexp<'a>]), ParseError> {
    match e {
        Sexp::List(line, items) => match items.first() {
            Some(Sexp::Atom(_, head)) => Ok((*line, head, &items[1..])),
            _ => Err(err(*line, "expected an operator after `(`")),
        },
        Sexp::Atom(line, a) => Err(err(*line, format!("expected `(`, found `{a}`"))),
    }
}

fn int(e: &Sexp<'_>, what: &str) -> Result<u64, ParseError> {
    match e {
        Sexp::Atom(line, a) => match a.parse::<u64>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(err(
                *line,
                format!("{what} must be a positive integer, found `{a}`"),
            )),
        },
        Sexp::List(line, _) => Err(err(*line, format!("expected {what}, found a term"))),
    }
}

fn vertex_id(e: &Sexp<'_>) -> Result<usize, ParseError> {
    let v = int(e, "vertex id")?;
    if v > probetree::graph::MAX_VERTICES as u64 {
        return Err(err(
            e.line(),
            format!("vertex id {v} exceeds {}", probetree::graph::MAX_VERTICES),
        ));
    }
    Ok(v as usize - 1)
}

fn label(e: &Sexp<'_>) -> Result<u32, ParseError> {
    let a = int(e, "label")?;
    u32::try_from(a).map_err(|_| err(e.line(), format!("label {a} is too large")))
}

fn expect_args(line: usize, head: &str, args: &[Sexp<'_>], n: usize) -> Result<(), ParseError> {
    if args.len() != n {
        return Err(err(
            line,
            format!("`{head}` takes {n} argument(s), found {}", args.len()),
        ));
    }
    Ok(())
}

fn nonempty(line: usize, head: &str, args: &[Sexp<'_>]) -> Result<(), ParseError> {
    if args.is_empty() {
        return Err(err(line, format!("`{head}` needs at least one subterm")));
    }
    Ok(())
}

fn cograph_at(e: &Sexp<'_>) -> Result<CographTerm, ParseError> {
    let (line, head, args) = form(e)?;
    match head {
        "v" => {
            expect_args(line, head, args, 1)?;
            Ok(CographTerm::Leaf(vertex_id(&args[0])?))
        }
        "u" | "j" => {
            nonempty(line, head, args)?;
            let ts = args.iter().map(cograph_at).collect::<Result<_, _>>()?;
            Ok(if head == "u" {
                CographTerm::Oplus(ts)
            } else {
                CographTerm::Otimes(ts)
            })
        }
        other => Err(err(line, format!("unknown cograph operator `{other}`"))),
    }
}

fn pp_at(e: &Sexp<'_>) -> Result<PPTerm, ParseError> {
    let (line, head, args) = form(e)?;
    match head {
        "v1" | "v2" => {
            expect_args(line, head, args, 1)?;
            let l = if head == "v1" { Label::One } else { Label::Two };
            Ok(PPTerm::Leaf(vertex_id(&args[0])?, l))
        }
        "u" | "j" => {
            nonempty(line, head, args)?;
            let ts = args.iter().map(pp_at).collect::<Result<_, _>>()?;
            Ok(if head == "u" {
                PPTerm::Oplus(ts)
            } else {
                PPTerm::Otimes(ts)
            })
        }
        other => Err(err(line, format!("unknown pp-term operator `{other}`"))),
    }
}

fn cw_at(e: &Sexp<'_>) -> Result<CwTerm, ParseError> {
    let (line, head, args) = form(e)?;
    match head {
        "vtx" => {
            expect_args(line, head, args, 2)?;
            Ok(CwTerm::vertex(label(&args[0])?, vertex_id(&args[1])?))
        }
        "U" => {
            expect_args(line, head, args, 2)?;
            Ok(CwTerm::union(cw_at(&args[0])?, cw_at(&args[1])?))
        }
        "add" | "ren" => {
            expect_args(line, head, args, 3)?;
            let (a, b) = (label(&args[0])?, label(&args[1])?);
            if a == b {
                return Err(err(line, format!("`{head}` needs two different labels")));
            }
            let t = cw_at(&args[2])?;
            Ok(if head == "add" {
                CwTerm::add(a, b, t)
            } else {
                CwTerm::relabel(a, b, t)
            })
        }
        other => Err(err(
            line,
            format!("unknown clique-width operator `{other}`"),
        )),
    }
}

pub fn parse_cograph_term(text: &str) -> Result<CographTerm, ParseError> {
    cograph_at(&read(text)?)
}

pub fn parse_pp_term(text: &str) -> Result<PPTerm, ParseError> {
    pp_at(&read(text)?)
}

pub fn parse_cw_term(text: &str) -> Result<CwTerm, ParseError> {
    cw_at(&read(text)?)
}

fn list<T>(out: &mut String, head: &str, ts: &[T], f: fn(&mut String, &T)) {
    write!(out, "({head}").unwrap();
    for t in ts {
        out.push(' ');
        f(out, t);
    }
    out.push(')');
}

fn write_cograph(out: &mut String, t: &CographTerm) {
    match t {
        CographTerm::Leaf(v) => write!(out, "(v {})", v + 1).unwrap(),
        CographTerm::Oplus(ts) => list(out, "u", ts, write_cograph),
        CographTerm::Otimes(ts) => list(out, "j", ts, write_cograph),
    }
}

fn write_pp(out: &mut String, t: &PPTerm) {
    match t {
        PPTerm::Leaf(v, l) => write!(out, "(v{} {})", l.digit(), v + 1).unwrap(),
        PPTerm::Oplus(ts) => list(out, "u", ts, write_pp),
        PPTerm::Otimes(ts) => list(out, "j", ts, write_pp),
    }
}

fn write_cw(out: &mut String, t: &CwTerm) {
    match t {
        CwTerm::Vertex { label, vertex } => write!(out, "(vtx {label} {})", vertex + 1).unwrap(),
        CwTerm::Union(a, b) => {
            out.push_str("(U ");
            write_cw(out, a);
            out.push(' ');
            write_cw(out, b);
            out.push(')');
        }
        CwTerm::Add(a, b, s) | CwTerm::Relabel(a, b, s) => {
            let op = if matches!(t, CwTerm::Add(..)) {
                "add"
            } else {
                "ren"
            };
            write!(out, "({op} {a} {b} ").unwrap();
            write_cw(out, s);
            out.push(')');
        }
    }
}

pub fn print_cograph_term(t: &CographTerm) -> String {
    let mut out = String::new();
    write_cograph(&mut out, t);
    out
}

pub fn print_pp_term(t: &PPTerm) -> String {
    let mut out = String::new();
    write_pp(&mut out, t);
    out
}

pub fn print_cw_term(t: &CwTerm) -> String {
    let mut out = String::new();
    write_cw(&mut out, t);
    out
}
