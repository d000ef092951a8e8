//! Line-oriented text formats for presentations and flat families.
//!
//! Every format is one directive per line, `#` starts a comment, and blank
//! lines are ignored. Printing is canonical: parsing printed text and
//! printing again gives the same bytes.

use std::collections::HashSet;
use std::fmt::Write as _;

use strict_gammoid::lattice::{CyclicFlatFamily, FlatRecord};
use strict_gammoid::{DigraphRep, Element, ElementSet, SetSystem, MAX_GROUND};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// Non-blank lines with comments stripped, as `(line number, tokens)`.
fn directives(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn number(line: usize, token: &str, what: &str) -> Result<usize, ParseError> {
    token
        .parse()
        .or_else(|_| err(line, format!("expected {what}, found `{token}`")))
}

fn ground_size(line: usize, tokens: &[&str]) -> Result<usize, ParseError> {
    match tokens {
        [_, n] => {
            let n = number(line, n, "a size")?;
            if n > MAX_GROUND {
                return err(
                    line,
                    format!("size {n} is above the supported {MAX_GROUND}"),
                );
            }
            Ok(n)
        }
        _ => err(line, format!("`{}` takes exactly one size", tokens[0])),
    }
}

fn index(line: usize, token: &str, n: usize) -> Result<usize, ParseError> {
    let i = number(line, token, "an element index")?;
    if i >= n {
        return err(line, format!("index {i} is outside 0..{n}"));
    }
    Ok(i)
}

/// Distinct indices in `[0, n)`, as a set.
fn index_set(line: usize, tokens: &[&str], n: usize) -> Result<ElementSet, ParseError> {
    let mut set = ElementSet::empty(n);
    for t in tokens {
        let i = Element::new(index(line, t, n)?);
        if set.contains(i) {
            return err(line, format!("index {} is repeated", i.index()));
        }
        set.insert(i);
    }
    Ok(set)
}

/// Reads the header directive that must come first.
fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    keyword: &str,
) -> Result<usize, ParseError> {
    match lines.next() {
        Some((line, tokens)) if tokens[0] == keyword => ground_size(line, &tokens),
        Some((line, tokens)) => err(
            line,
            format!("expected `{keyword}` first, found `{}`", tokens[0]),
        ),
        None => err(1, format!("missing `{keyword}` line")),
    }
}

fn push_indices(out: &mut String, set: ElementSet) {
    for i in set.indices() {
        write!(out, " {i}").unwrap();
    }
}

/// ```text
/// vertices 4
/// sinks 2 3
/// arc 0 1
/// ```
pub fn parse_digraph(text: &str) -> Result<DigraphRep, ParseError> {
    let mut lines = directives(text);
    let n = header(&mut lines, "vertices")?;
    let mut sinks = None;
    let mut arcs = Vec::new();
    let mut seen = HashSet::new();
    let mut last_line = 1;
    for (line, tokens) in lines {
        last_line = line;
        match tokens[0] {
            "sinks" => {
                if sinks.is_some() {
                    return err(line, "second `sinks` line");
                }
                sinks = Some(index_set(line, &tokens[1..], n)?);
            }
            "arc" => {
                let [_, u, v] = tokens[..] else {
                    return err(line, "`arc` takes a tail and a head");
                };
                let (u, v) = (index(line, u, n)?, index(line, v, n)?);
                if u == v {
                    return err(line, format!("self-arc at {u}"));
                }
                if !seen.insert((u, v)) {
                    return err(line, format!("duplicate arc {u} {v}"));
                }
                arcs.push((u, v));
            }
            other => return err(line, format!("unknown directive `{other}`")),
        }
    }
    let Some(sinks) = sinks else {
        return err(last_line, "missing `sinks` line");
    };
    Ok(DigraphRep::from_arcs(n, arcs, sinks).expect("arcs were validated"))
}

pub fn print_digraph(d: &DigraphRep) -> String {
    let mut out = format!("vertices {}\nsinks", d.ground_size());
    push_indices(&mut out, d.sinks());
    out.push('\n');
    for (u, v) in d.arcs() {
        writeln!(out, "arc {} {}", u.index(), v.index()).unwrap();
    }
    out
}

/// A set system with a name on every set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedSystem {
    pub system: SetSystem,
    pub names: Vec<String>,
}

impl NamedSystem {
    /// Names the sets `prefix0`, `prefix1`, ...
    pub fn numbered(system: SetSystem, prefix: &str) -> Self {
        let names = (0..system.len()).map(|j| format!("{prefix}{j}")).collect();
        NamedSystem { system, names }
    }
}

/// ```text
/// elements 4
/// set a 0 1 2 3
/// set b 0 1 2 3
/// ```
pub fn parse_bipartite(text: &str) -> Result<NamedSystem, ParseError> {
    let mut lines = directives(text);
    let n = header(&mut lines, "elements")?;
    let mut sets = Vec::new();
    let mut names: Vec<String> = Vec::new();
    for (line, tokens) in lines {
        match tokens[0] {
            "set" => {
                let Some(name) = tokens.get(1) else {
                    return err(line, "`set` needs a name");
                };
                if name.parse::<usize>().is_ok() {
                    return err(line, format!("set name `{name}` must not be a number"));
                }
                if names.iter().any(|m| m == name) {
                    return err(line, format!("duplicate set name `{name}`"));
                }
                sets.push(index_set(line, &tokens[2..], n)?);
                names.push(name.to_string());
            }
            other => return err(line, format!("unknown directive `{other}`")),
        }
    }
    let system = SetSystem::new(n, sets).expect("sets were validated");
    Ok(NamedSystem { system, names })
}

pub fn print_bipartite(named: &NamedSystem) -> String {
    let mut out = format!("elements {}\n", named.system.ground_size());
    for (name, &set) in named.names.iter().zip(named.system.sets()) {
        write!(out, "set {name}").unwrap();
        push_indices(&mut out, set);
        out.push('\n');
    }
    out
}

/// ```text
/// ground 6
/// flat rank 0 elements
/// flat rank 2 gamma 1 elements 0 1 3
/// ```
///
/// `gamma` is optional per line; families read from a matroid carry it.
pub fn parse_flats(text: &str) -> Result<CyclicFlatFamily, ParseError> {
    let mut lines = directives(text);
    let n = header(&mut lines, "ground")?;
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (line, tokens) in lines {
        if tokens[0] != "flat" {
            return err(line, format!("unknown directive `{}`", tokens[0]));
        }
        let (rank, rest) = match &tokens[1..] {
            ["rank", r, rest @ ..] => (number(line, r, "a rank")?, rest),
            _ => return err(line, "expected `flat rank <r>`"),
        };
        let (gamma, rest) = match rest {
            ["gamma", g, rest @ ..] => {
                let g: i64 = g
                    .parse()
                    .or_else(|_| err(line, format!("expected a γ value, found `{g}`")))?;
                (Some(g), rest)
            }
            _ => (None, rest),
        };
        let elements = match rest {
            ["elements", elements @ ..] => elements,
            _ => return err(line, "expected `elements` after the rank"),
        };
        let set = index_set(line, elements, n)?;
        if rank > set.len() {
            return err(
                line,
                format!("rank {rank} exceeds the {} elements", set.len()),
            );
        }
        if !seen.insert(set) {
            return err(line, format!("duplicate flat {set}"));
        }
        records.push(FlatRecord { set, rank, gamma });
    }
    Ok(CyclicFlatFamily::new(n, records).expect("flats were validated"))
}

pub fn print_flats(family: &CyclicFlatFamily) -> String {
    let mut out = format!("ground {}\n", family.ground_size());
    for r in family {
        write!(out, "flat rank {}", r.rank).unwrap();
        if let Some(g) = r.gamma {
            write!(out, " gamma {g}").unwrap();
        }
        out.push_str(" elements");
        push_indices(&mut out, r.set);
        out.push('\n');
    }
    out
}

/// Any of the three formats, told apart by the first directive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Digraph(DigraphRep),
    Bipartite(NamedSystem),
    Flats(CyclicFlatFamily),
}

pub fn parse_any(text: &str) -> Result<Input, ParseError> {
    match directives(text).next() {
        Some((_, tokens)) if tokens[0] == "vertices" => parse_digraph(text).map(Input::Digraph),
        Some((_, tokens)) if tokens[0] == "elements" => parse_bipartite(text).map(Input::Bipartite),
        Some((_, tokens)) if tokens[0] == "ground" => parse_flats(text).map(Input::Flats),
        Some((line, tokens)) => err(
            line,
            format!(
                "expected `vertices`, `elements` or `ground`, found `{}`",
                tokens[0]
            ),
        ),
        None => err(1, "empty input"),
    }
}
