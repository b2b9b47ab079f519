//! Text and JSON input formats for sign matrices and graphs.
//!
//! * `signs-text`: first line `n`, then `n` rows of whitespace-separated
//!   entries from `1`, `+1`, `-1`.
//! * `signs-json`: `{"n": 4, "signs": [[1, 1, -1, 1], ...]}`.
//! * `graph-text`: first line `n`, then one edge `i j` per line.
//! * `graph-json`: `{"n": 4, "edges": [[1, 2], ...]}`.
//!
//! Blank lines are ignored in the text formats.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::skewgraph::{Graph, GraphError, SignError, SignMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InputFormat {
    SignsText,
    SignsJson,
    GraphText,
    GraphJson,
}

impl InputFormat {
    pub const ALL: [InputFormat; 4] = [
        InputFormat::SignsText,
        InputFormat::SignsJson,
        InputFormat::GraphText,
        InputFormat::GraphJson,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InputFormat::SignsText => "signs-text",
            InputFormat::SignsJson => "signs-json",
            InputFormat::GraphText => "graph-text",
            InputFormat::GraphJson => "graph-json",
        }
    }
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown format {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("declared n = {declared} but found {found} {what}")]
    CountMismatch {
        declared: usize,
        found: usize,
        what: &'static str,
    },
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Sign(#[from] SignError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignsJson {
    pub n: usize,
    pub signs: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_num<T: FromStr>(line: usize, token: &str) -> Result<T, InputError> {
    let token = token.strip_prefix('+').unwrap_or(token);
    token.parse().map_err(|_| InputError::Parse {
        line,
        message: format!("not a number: {token:?}"),
    })
}

/// Non-blank lines with their 1-based line numbers.
type Lines<'a> = Vec<(usize, &'a str)>;

/// Header `n` plus the remaining non-blank lines.
fn split_header(text: &str) -> Result<(usize, Lines<'_>), InputError> {
    let mut lines = content_lines(text);
    let (line, first) = lines.next().ok_or(InputError::Parse {
        line: 1,
        message: "missing header line with n".into(),
    })?;
    Ok((parse_num(line, first)?, lines.collect()))
}

fn parse_signs_text(text: &str) -> Result<SignMatrix, InputError> {
    let (n, lines) = split_header(text)?;
    let rows = lines
        .into_iter()
        .map(|(line, l)| l.split_whitespace().map(|t| parse_num(line, t)).collect())
        .collect::<Result<Vec<Vec<i64>>, _>>()?;
    if rows.len() != n {
        return Err(InputError::CountMismatch {
            declared: n,
            found: rows.len(),
            what: "rows",
        });
    }
    Ok(SignMatrix::validate(&rows)?)
}

fn parse_graph_text(text: &str) -> Result<Graph, InputError> {
    let (n, lines) = split_header(text)?;
    let mut edges = Vec::new();
    for (line, l) in lines {
        let tokens: Vec<&str> = l.split_whitespace().collect();
        let [a, b] = tokens.as_slice() else {
            return Err(InputError::Parse {
                line,
                message: format!("expected an edge \"i j\", got {l:?}"),
            });
        };
        edges.push((parse_num(line, a)?, parse_num(line, b)?));
    }
    Ok(Graph::from_edges(n, &edges)?)
}

/// Parses `text` in `format` into a sign matrix (graphs are converted with
/// `ε_ij = +1` exactly on edges).
pub fn parse_signs(text: &str, format: InputFormat) -> Result<SignMatrix, InputError> {
    match format {
        InputFormat::SignsText => parse_signs_text(text),
        InputFormat::SignsJson => {
            let doc: SignsJson =
                serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))?;
            if doc.signs.len() != doc.n {
                return Err(InputError::CountMismatch {
                    declared: doc.n,
                    found: doc.signs.len(),
                    what: "rows",
                });
            }
            Ok(SignMatrix::validate(&doc.signs)?)
        }
        InputFormat::GraphText => Ok(parse_graph_text(text)?.to_signs()),
        InputFormat::GraphJson => {
            let doc: GraphJson =
                serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))?;
            Ok(Graph::from_edges(doc.n, &doc.edges)?.to_signs())
        }
    }
}

pub fn write_signs_text(eps: &SignMatrix) -> String {
    let mut out = format!("{}\n", eps.n());
    for row in eps.to_rows() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}

pub fn write_graph_text(g: &Graph) -> String {
    let mut out = format!("{}\n", g.n());
    for (a, b) in g.edges() {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}

pub fn signs_json(eps: &SignMatrix) -> SignsJson {
    SignsJson {
        n: eps.n(),
        signs: eps.to_rows(),
    }
}

pub fn graph_json(g: &Graph) -> GraphJson {
    GraphJson {
        n: g.n(),
        edges: g.edges(),
    }
}

/// Parses `"3,1,2,4"` into a permutation of `1..=n`.
pub fn parse_permutation(text: &str, n: usize) -> Result<Vec<usize>, String> {
    let perm = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad permutation entry {t:?}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(format!(
            "permutation has {} entries, expected {n}",
            perm.len()
        ));
    }
    for &p in &perm {
        if p == 0 || p > n || std::mem::replace(&mut seen[p - 1], true) {
            return Err(format!("permutation is not a bijection on 1..={n}"));
        }
    }
    Ok(perm)
}
