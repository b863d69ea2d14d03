//! The `.hg` text format and the tour/family certificate format.
//!
//! ```text
//! # two copies of a triple
//! hg 3 3 2
//! v a
//! v b
//! v c
//! e a b c
//! e a b c
//! ```
//!
//! The header gives the uniformity `k` (0 for mixed edge sizes), the vertex
//! count and the edge count. Everything after `#` on a line is ignored, as are
//! blank lines. Certificates name vertices by label and edges as `e1`, `e2`,
//! ... by position in the file: `a e1 b e2 a`.

use std::fmt;

use crate::error::{Error, Result};
use crate::hypergraph::{EulerFamily, EulerTour, Hypergraph, Walk};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    MalformedHeader,
    MissingHeader,
    /// A line that does not start with the expected keyword.
    UnexpectedLine {
        expected: &'static str,
    },
    DuplicateLabel(String),
    UnknownLabel(String),
    ArityMismatch {
        expected: usize,
        found: usize,
    },
    RepeatedVertex(String),
    CountMismatch {
        what: &'static str,
        declared: usize,
        found: usize,
    },
    BadEdgeToken(String),
    /// Certificate tokens must alternate vertex, edge, vertex, ...
    BadTrailShape,
}

/// A parse failure and the 1-based line it was detected on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: ", self.line)?;
        match &self.kind {
            ParseErrorKind::MalformedHeader => {
                write!(f, "malformed header, expected `hg <k> <n> <m>`")
            }
            ParseErrorKind::MissingHeader => write!(f, "missing `hg` header"),
            ParseErrorKind::UnexpectedLine { expected } => {
                write!(f, "expected a `{expected}` line")
            }
            ParseErrorKind::DuplicateLabel(l) => write!(f, "duplicate vertex label `{l}`"),
            ParseErrorKind::UnknownLabel(l) => write!(f, "unknown vertex label `{l}`"),
            ParseErrorKind::ArityMismatch { expected, found } => {
                write!(f, "edge has {found} vertices, header declares {expected}")
            }
            ParseErrorKind::RepeatedVertex(l) => write!(f, "vertex `{l}` repeated within an edge"),
            ParseErrorKind::CountMismatch {
                what,
                declared,
                found,
            } => {
                write!(f, "header declares {declared} {what}, found {found}")
            }
            ParseErrorKind::BadEdgeToken(t) => write!(f, "`{t}` is not an edge of the hypergraph"),
            ParseErrorKind::BadTrailShape => write!(f, "a trail alternates vertex and edge tokens"),
        }
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, kind: ParseErrorKind) -> Error {
    Error::Parse(ParseError { line, kind })
}

/// Non-empty lines with comments removed, paired with their line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

pub fn parse(text: &str) -> Result<Hypergraph> {
    let mut lines = content_lines(text);
    let Some((hline, header)) = lines.next() else {
        return Err(err(1, ParseErrorKind::MissingHeader));
    };
    let numbers: Vec<usize> = header[1..].iter().filter_map(|t| t.parse().ok()).collect();
    if header[0] != "hg" || header.len() != 4 || numbers.len() != 3 {
        return Err(err(hline, ParseErrorKind::MalformedHeader));
    }
    let (k, n, m) = (numbers[0], numbers[1], numbers[2]);

    let mut labels: Vec<String> = Vec::with_capacity(n);
    let mut index = std::collections::HashMap::new();
    let mut edges: Vec<Vec<usize>> = Vec::with_capacity(m);
    let mut last = hline;
    for (line, tokens) in lines {
        last = line;
        match tokens[0] {
            "v" if edges.is_empty() => {
                if tokens.len() != 2 {
                    return Err(err(
                        line,
                        ParseErrorKind::UnexpectedLine {
                            expected: "v <label>",
                        },
                    ));
                }
                if labels.len() == n {
                    return Err(err(
                        line,
                        ParseErrorKind::CountMismatch {
                            what: "vertices",
                            declared: n,
                            found: n + 1,
                        },
                    ));
                }
                let label = tokens[1].to_string();
                if index.insert(label.clone(), labels.len()).is_some() {
                    return Err(err(line, ParseErrorKind::DuplicateLabel(label)));
                }
                labels.push(label);
            }
            "e" => {
                if labels.len() != n {
                    return Err(err(
                        line,
                        ParseErrorKind::CountMismatch {
                            what: "vertices",
                            declared: n,
                            found: labels.len(),
                        },
                    ));
                }
                if edges.len() == m {
                    return Err(err(
                        line,
                        ParseErrorKind::CountMismatch {
                            what: "edges",
                            declared: m,
                            found: m + 1,
                        },
                    ));
                }
                let arity = tokens.len() - 1;
                if (k != 0 && arity != k) || arity == 0 {
                    return Err(err(
                        line,
                        ParseErrorKind::ArityMismatch {
                            expected: k,
                            found: arity,
                        },
                    ));
                }
                let mut edge = Vec::with_capacity(arity);
                for &t in &tokens[1..] {
                    let &v = index
                        .get(t)
                        .ok_or_else(|| err(line, ParseErrorKind::UnknownLabel(t.to_string())))?;
                    if edge.contains(&v) {
                        return Err(err(line, ParseErrorKind::RepeatedVertex(t.to_string())));
                    }
                    edge.push(v);
                }
                edges.push(edge);
            }
            _ => {
                let expected = if edges.is_empty() { "v" } else { "e" };
                return Err(err(line, ParseErrorKind::UnexpectedLine { expected }));
            }
        }
    }
    if labels.len() != n {
        return Err(err(
            last,
            ParseErrorKind::CountMismatch {
                what: "vertices",
                declared: n,
                found: labels.len(),
            },
        ));
    }
    if edges.len() != m {
        return Err(err(
            last,
            ParseErrorKind::CountMismatch {
                what: "edges",
                declared: m,
                found: edges.len(),
            },
        ));
    }
    Hypergraph::from_ids(labels, edges)
}

fn check_label(label: &str) -> Result<()> {
    if label.is_empty() || label.contains(char::is_whitespace) || label.contains('#') {
        return Err(Error::InvalidParameters(format!(
            "label `{label}` cannot be written to a file"
        )));
    }
    Ok(())
}

/// Writes `h` with vertices in id order and each edge's vertices ascending.
pub fn emit(h: &Hypergraph) -> Result<String> {
    let k = h.uniformity().unwrap_or(0);
    let mut out = format!("hg {k} {} {}\n", h.order(), h.size());
    for label in h.labels() {
        check_label(label)?;
        out.push_str("v ");
        out.push_str(label);
        out.push('\n');
    }
    for edge in h.edges() {
        out.push('e');
        for &v in edge {
            out.push(' ');
            out.push_str(h.label(v));
        }
        out.push('\n');
    }
    Ok(out)
}

fn emit_walk(h: &Hypergraph, w: &Walk, out: &mut String) {
    out.push_str(&w.display(h).to_string());
    out.push('\n');
}

pub fn emit_tour(h: &Hypergraph, t: &EulerTour) -> String {
    let mut out = String::new();
    emit_walk(h, t.walk(), &mut out);
    out
}

/// One closed trail per line.
pub fn emit_family(h: &Hypergraph, f: &EulerFamily) -> String {
    let mut out = String::new();
    for w in &f.components {
        emit_walk(h, w, &mut out);
    }
    out
}

fn parse_walk(h: &Hypergraph, line: usize, tokens: &[&str]) -> Result<Walk> {
    if tokens.len() % 2 == 0 {
        return Err(err(line, ParseErrorKind::BadTrailShape));
    }
    let mut anchors = Vec::with_capacity(tokens.len() / 2 + 1);
    let mut edges = Vec::with_capacity(tokens.len() / 2);
    for (i, &t) in tokens.iter().enumerate() {
        if i % 2 == 0 {
            let v = h
                .vertex(t)
                .ok_or_else(|| err(line, ParseErrorKind::UnknownLabel(t.to_string())))?;
            anchors.push(v);
        } else {
            let e = t
                .strip_prefix('e')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&e| e >= 1 && e <= h.size())
                .ok_or_else(|| err(line, ParseErrorKind::BadEdgeToken(t.to_string())))?;
            edges.push(e - 1);
        }
    }
    Ok(Walk::new(anchors, edges))
}

/// Reads a family certificate. The walks are not verified here.
pub fn parse_family(h: &Hypergraph, text: &str) -> Result<EulerFamily> {
    let walks = content_lines(text)
        .map(|(line, tokens)| parse_walk(h, line, &tokens))
        .collect::<Result<Vec<_>>>()?;
    Ok(EulerFamily::new(walks))
}

/// Reads a tour certificate: exactly one trail line.
pub fn parse_tour(h: &Hypergraph, text: &str) -> Result<Walk> {
    let mut lines = content_lines(text);
    let Some((line, tokens)) = lines.next() else {
        return Err(err(1, ParseErrorKind::BadTrailShape));
    };
    if let Some((extra, _)) = lines.next() {
        return Err(err(extra, ParseErrorKind::BadTrailShape));
    }
    parse_walk(h, line, &tokens)
}
