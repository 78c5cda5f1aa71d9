use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{CircuitError, Locus};
use crate::graph::{EdgeId, Graph, NodeId, PolarityMap};
use crate::walk::seeded_rng;

/// Incident edge of a node and the edge qubit facing it (`eta_k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacingSlot {
    pub edge: EdgeId,
    pub qubit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRegister {
    /// `binary[i]` holds bit `i` of the slot pattern.
    pub binary: Vec<usize>,
    pub flag: usize,
    /// Slot `k` (1-based) is `facing[k - 1]`.
    pub facing: Vec<FacingSlot>,
}

impl NodeRegister {
    pub fn degree(&self) -> usize {
        self.facing.len()
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.binary
            .iter()
            .copied()
            .chain(std::iter::once(self.flag))
    }
}

/// Qubit assignment: edge `k` owns qubits `2k` (`+`) and `2k + 1` (`-`);
/// node registers follow in node order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitLayout {
    pub edges: Vec<[usize; 2]>,
    pub nodes: Vec<NodeRegister>,
}

/// Enumeration of a node's incident edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeOrder {
    /// Ascending neighbor id.
    #[default]
    Ascending,
    /// Seeded shuffle per node.
    Shuffled(u64),
}

/// `ceil(log2 d)`, with `0` for `d <= 1`.
pub(crate) fn binary_width(d: usize) -> usize {
    if d <= 1 {
        0
    } else {
        (usize::BITS - (d - 1).leading_zeros()) as usize
    }
}

pub fn build_layout(g: &Graph, p: &PolarityMap) -> Result<QubitLayout, CircuitError> {
    build_layout_with(g, p, EdgeOrder::Ascending)
}

pub fn build_layout_with(
    g: &Graph,
    p: &PolarityMap,
    order: EdgeOrder,
) -> Result<QubitLayout, CircuitError> {
    if p.edge_count() != g.edge_count() {
        return Err(CircuitError::Polarity(format!(
            "{} polarity entries for {} edges",
            p.edge_count(),
            g.edge_count()
        )));
    }
    let edges: Vec<[usize; 2]> = (0..g.edge_count()).map(|k| [2 * k, 2 * k + 1]).collect();
    let mut next = 2 * g.edge_count();
    let mut rng = match order {
        EdgeOrder::Shuffled(seed) => Some(seeded_rng(seed)),
        EdgeOrder::Ascending => None,
    };
    let mut nodes = Vec::with_capacity(g.node_count());
    for u in 0..g.node_count() {
        let mut facing: Vec<FacingSlot> = g
            .neighbors(u)
            .iter()
            .map(|&(_, e)| FacingSlot {
                edge: e,
                qubit: edges[e][p.facing(e, u).index()],
            })
            .collect();
        if let Some(rng) = rng.as_mut() {
            facing.shuffle(rng);
        }
        let width = binary_width(facing.len());
        let binary: Vec<usize> = (next..next + width).collect();
        let flag = next + width;
        next = flag + 1;
        nodes.push(NodeRegister {
            binary,
            flag,
            facing,
        });
    }
    Ok(QubitLayout { edges, nodes })
}

impl QubitLayout {
    pub fn qubit_count(&self) -> usize {
        2 * self.edges.len() + self.nodes.iter().map(|n| n.binary.len() + 1).sum::<usize>()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, u: NodeId) -> Result<&NodeRegister, CircuitError> {
        self.nodes.get(u).ok_or(CircuitError::NodeOutOfRange {
            node: u,
            node_count: self.nodes.len(),
        })
    }

    /// Qubits the locus may touch: its own qubits, plus for a node both
    /// qubits of every incident edge.
    pub fn reachable_qubits(&self, locus: Locus) -> Vec<usize> {
        match locus {
            Locus::Edge(e) => self.edges.get(e).map(|q| q.to_vec()).unwrap_or_default(),
            Locus::Node(u) => match self.nodes.get(u) {
                Some(reg) => reg
                    .qubits()
                    .chain(reg.facing.iter().flat_map(|s| self.edges[s.edge]))
                    .collect(),
                None => Vec::new(),
            },
        }
    }

    /// Which register owns qubit `q`.
    pub fn owner(&self, q: usize) -> Option<Locus> {
        if q < 2 * self.edges.len() {
            return Some(Locus::Edge(q / 2));
        }
        self.nodes
            .iter()
            .position(|reg| reg.qubits().any(|x| x == q))
            .map(Locus::Node)
    }
}
