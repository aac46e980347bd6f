//! Graph and measure files.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use stablereg::rational::{parse_ratio, to_ratio_string};
use stablereg::{BipartiteGraph, Measure, Side};

use crate::CliError;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    num_left: usize,
    num_right: usize,
    edges: Vec<[usize; 2]>,
}

/// Parses either the JSON graph format or the dense `0/1` text format.
pub fn parse_graph(text: &str) -> Result<BipartiteGraph, CliError> {
    if text.trim_start().starts_with('{') {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("graph JSON: {e}")))?;
        BipartiteGraph::from_edges(file.num_left, file.num_right, file.edges.into_iter().map(|[a, b]| (a, b)))
            .map_err(|e| CliError::Parse(format!("graph: {e}")))
    } else {
        parse_dense(text)
    }
}

fn parse_dense(text: &str) -> Result<BipartiteGraph, CliError> {
    let bad = |msg: String| CliError::Parse(format!("dense graph: {msg}"));
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| bad("empty input".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| bad(format!("bad header {header:?}"))))
        .collect::<Result<_, _>>()?;
    let [n, m] = dims[..] else {
        return Err(bad(format!("header must be \"n m\", got {header:?}")));
    };
    let mut edges = Vec::new();
    for a in 0..n {
        let row = lines.next().ok_or_else(|| bad(format!("expected {n} rows, got {a}")))?;
        if row.chars().count() != m {
            return Err(bad(format!("row {a} has {} columns, expected {m}", row.chars().count())));
        }
        for (b, c) in row.chars().enumerate() {
            match c {
                '1' => edges.push((a, b)),
                '0' => {}
                _ => return Err(bad(format!("row {a} contains {c:?}"))),
            }
        }
    }
    if lines.next().is_some() {
        return Err(bad(format!("more than {n} rows")));
    }
    BipartiteGraph::from_edges(n, m, edges).map_err(|e| bad(e.to_string()))
}

/// Canonical JSON form: compact, edges in lexicographic order, trailing newline.
pub fn graph_to_json(g: &BipartiteGraph) -> String {
    let file =
        GraphFile { num_left: g.n_left(), num_right: g.n_right(), edges: g.edges().map(|(a, b)| [a, b]).collect() };
    let mut s = serde_json::to_string(&file).expect("graph serializes");
    s.push('\n');
    s
}

/// A JSON array of `"p/q"` weights for `side` of `g`.
pub fn parse_measure(text: &str, g: &BipartiteGraph, side: Side) -> Result<Measure, CliError> {
    let raw: Vec<String> =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("{side} measure JSON: {e}")))?;
    let weights: Vec<BigRational> = raw
        .iter()
        .map(|s| parse_ratio(s).map_err(|e| CliError::Parse(format!("{side} measure: {e}"))))
        .collect::<Result<_, _>>()?;
    Measure::for_graph(g, side, weights).map_err(|e| CliError::Measure(e.to_string()))
}

pub fn measure_to_json(m: &Measure) -> String {
    let raw: Vec<String> = m.weights().iter().map(to_ratio_string).collect();
    serde_json::to_string(&raw).expect("measure serializes")
}
