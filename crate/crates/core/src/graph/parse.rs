use std::collections::BTreeSet;
use std::str::FromStr;

use super::{Coloring, Graph, GraphDocument, GraphError, Position};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Json,
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edge-list" | "edgelist" | "txt" => Ok(GraphFormat::EdgeList),
            "json" => Ok(GraphFormat::Json),
            other => Err(format!(
                "unknown graph format '{other}' (expected edge-list or json)"
            )),
        }
    }
}

/// A parsed graph plus the optional user-supplied coloring from JSON input.
#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub coloring: Option<Coloring>,
    /// Input label of each node id.
    pub labels: Vec<u64>,
}

impl ParsedGraph {
    pub fn node_of_label(&self, label: u64) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }
}

pub fn parse_graph(input: &str, format: GraphFormat) -> Result<ParsedGraph, GraphError> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(input).map(|(graph, labels)| ParsedGraph {
            graph,
            coloring: None,
            labels,
        }),
        GraphFormat::Json => parse_json(input),
    }
}

/// Whitespace-separated `u v` pairs, one per line; `#` starts a comment.
/// Node labels are relabelled to `0..n` by ascending value.
fn parse_edge_list(input: &str) -> Result<(Graph, Vec<u64>), GraphError> {
    let mut raw = Vec::new();
    let mut lines = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let content = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() != 2 {
            return Err(GraphError::Parse {
                at: Position::Line(line_no),
                message: format!("expected two node ids, found {} tokens", tokens.len()),
            });
        }
        let mut ids = [0u64; 2];
        for (slot, tok) in ids.iter_mut().zip(&tokens) {
            *slot = tok.parse().map_err(|_| GraphError::Parse {
                at: Position::Line(line_no),
                message: format!("'{tok}' is not a non-negative integer"),
            })?;
        }
        raw.push((ids[0], ids[1]));
        lines.push(line_no);
    }

    let labels: BTreeSet<u64> = raw.iter().flat_map(|&(u, v)| [u, v]).collect();
    let labels: Vec<u64> = labels.into_iter().collect();
    let rank = |x: u64| labels.binary_search(&x).expect("label collected above");
    let edges = raw.iter().map(|&(u, v)| (rank(u), rank(v))).collect();
    let graph = Graph::with_positions(labels.len(), edges, |i| Position::Line(lines[i]))?;
    Ok((graph, labels))
}

fn parse_json(input: &str) -> Result<ParsedGraph, GraphError> {
    let doc: GraphDocument = serde_json::from_str(input).map_err(|e| GraphError::Parse {
        at: Position::LineColumn(e.line(), e.column()),
        message: e.to_string(),
    })?;
    let edges = doc.edges.iter().map(|&[u, v]| (u, v)).collect();
    let graph = Graph::new(doc.nodes, edges)?;
    let coloring = doc
        .colors
        .map(|colors| Coloring::new(&graph, colors))
        .transpose()?;
    let labels = (0..graph.node_count() as u64).collect();
    Ok(ParsedGraph {
        graph,
        coloring,
        labels,
    })
}
