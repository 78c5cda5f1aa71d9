//! Undirected simple connected graphs, the edge-list / JSON readers, and the
//! polarity and starify machinery built on top of them.
//!
//! Node ids are contiguous `0..n` and edges are indexed in insertion order.
//! The edge index doubles as the enumeration used by the qubit layout.

mod coloring;
mod generate;
mod parse;
mod starify;

pub use coloring::{greedy_coloring, Coloring, PolarityMap, Pole};
pub use generate::{complete, cycle, path, random_connected, star};
pub use parse::{parse_graph, GraphFormat, ParsedGraph};
pub use starify::{starify, StarifiedGraph};

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type NodeId = usize;
pub type EdgeId = usize;

/// Where in the input an error was detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    /// 1-based line of an edge-list file.
    Line(usize),
    /// 1-based line and column reported by the JSON reader.
    LineColumn(usize, usize),
    /// 0-based index in the edge sequence.
    Edge(usize),
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::Line(l) => write!(f, "line {l}"),
            Position::LineColumn(l, c) => write!(f, "line {l}, column {c}"),
            Position::Edge(i) => write!(f, "edge #{i}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("parse error at {at}: {message}")]
    Parse { at: Position, message: String },
    #[error("self-loop on node {node} at {at}")]
    SelfLoop { node: NodeId, at: Position },
    #[error("duplicate edge ({u}, {v}) at {at}")]
    DuplicateEdge { u: NodeId, v: NodeId, at: Position },
    #[error("node {node} out of range for {node_count} nodes at {at}")]
    NodeOutOfRange {
        node: NodeId,
        node_count: usize,
        at: Position,
    },
    #[error("graph is disconnected: node {unreached} is not reachable from node 0")]
    Disconnected { unreached: NodeId },
    #[error("graph has no edges")]
    NoEdges,
    #[error("coloring has {got} entries but the graph has {expected} nodes")]
    ColoringLength { expected: usize, got: usize },
    #[error("improper coloring: edge #{edge} ({u}, {v}) has both endpoints colored {color}")]
    ImproperColoring {
        edge: EdgeId,
        u: NodeId,
        v: NodeId,
        color: usize,
    },
    #[error("polarity for edge #{edge} names node {node}, which is not an endpoint")]
    PolarityNotEndpoint { edge: EdgeId, node: NodeId },
    #[error("polarity has {got} entries but the graph has {expected} edges")]
    PolarityLength { expected: usize, got: usize },
}

/// An undirected, simple, connected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(NodeId, NodeId)>,
    adjacency: Vec<Vec<(NodeId, EdgeId)>>,
}

impl Graph {
    /// Builds and validates a graph. Edge positions in errors refer to the
    /// index in `edges`.
    pub fn new(node_count: usize, edges: Vec<(NodeId, NodeId)>) -> Result<Self, GraphError> {
        Self::with_positions(node_count, edges, Position::Edge)
    }

    pub(crate) fn with_positions(
        node_count: usize,
        edges: Vec<(NodeId, NodeId)>,
        position: impl Fn(usize) -> Position,
    ) -> Result<Self, GraphError> {
        if edges.is_empty() {
            return Err(GraphError::NoEdges);
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); node_count];
        for (i, &(u, v)) in edges.iter().enumerate() {
            for node in [u, v] {
                if node >= node_count {
                    return Err(GraphError::NodeOutOfRange {
                        node,
                        node_count,
                        at: position(i),
                    });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop {
                    node: u,
                    at: position(i),
                });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge {
                    u,
                    v,
                    at: position(i),
                });
            }
            adjacency[u].push((v, i));
            adjacency[v].push((u, i));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let graph = Graph {
            node_count,
            edges,
            adjacency,
        };
        if let Some(unreached) = graph.first_unreachable() {
            return Err(GraphError::Disconnected { unreached });
        }
        Ok(graph)
    }

    fn first_unreachable(&self) -> Option<NodeId> {
        let mut visited = vec![false; self.node_count];
        let mut queue = VecDeque::from([0]);
        visited[0] = true;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adjacency[u] {
                if !visited[v] {
                    visited[v] = true;
                    queue.push_back(v);
                }
            }
        }
        visited.iter().position(|&seen| !seen)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (NodeId, NodeId) {
        self.edges[e]
    }

    /// Incident `(neighbor, edge)` pairs, sorted by neighbor id.
    pub fn neighbors(&self, u: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adjacency[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn find_edge(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        self.adjacency
            .get(u)?
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
    }

    /// Same graph with every edge written as `(v, u)` instead of `(u, v)`.
    pub fn reversed_endpoints(&self) -> Graph {
        let edges = self.edges.iter().map(|&(u, v)| (v, u)).collect();
        Graph::new(self.node_count, edges).expect("reversal preserves validity")
    }

    /// One `u v` pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn to_json(&self, colors: Option<&Coloring>) -> String {
        let doc = GraphDocument {
            nodes: self.node_count,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
            colors: colors.map(|c| c.colors().to_vec()),
        };
        serde_json::to_string(&doc).expect("graph document serializes")
    }
}

/// JSON wire form: `{"nodes": n, "edges": [[u,v],...], "colors": [...]}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct GraphDocument {
    pub nodes: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<usize>>,
}
