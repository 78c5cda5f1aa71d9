use std::collections::HashSet;

use serde::Serialize;

use super::{Circuit, Gate, Locus, PhaseKind};
use crate::graph::NodeId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub instruction: usize,
    pub locus: Locus,
    pub qubit: usize,
}

/// Controlled-operation tally of one node's scattering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeCost {
    pub node: NodeId,
    pub degree: usize,
    /// CNOT and MCX gates of the node's `Tr` block: the edge/node
    /// interactions of the transfer protocol.
    pub transfer_controlled_ops: usize,
    /// Every controlled gate of `Tr`, controlled `D` and `Tr^-1`.
    pub scatter_controlled_ops: usize,
    /// `2 d (ceil(log2 d) + 1)`.
    pub bound: usize,
}

impl NodeCost {
    pub fn within_bound(&self) -> bool {
        self.transfer_controlled_ops <= self.bound
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalityReport {
    pub violations: Vec<Violation>,
    /// Pairs of nodes whose scatter phases share a qubit.
    pub overlapping_scatter: Vec<(NodeId, NodeId)>,
    pub node_costs: Vec<NodeCost>,
}

impl LocalityReport {
    pub fn is_local(&self) -> bool {
        self.violations.is_empty() && self.overlapping_scatter.is_empty()
    }

    pub fn bound_holds(&self) -> bool {
        self.node_costs.iter().all(NodeCost::within_bound)
    }
}

fn ceil_log2(d: usize) -> usize {
    super::layout::binary_width(d)
}

/// Checks that every instruction touches only qubits its locus can reach
/// and tallies controlled operations per node.
pub fn locality_audit(c: &Circuit) -> LocalityReport {
    let mut violations = Vec::new();
    for (idx, ins) in c.instructions.iter().enumerate() {
        let allowed: HashSet<usize> = c.layout.reachable_qubits(ins.locus).into_iter().collect();
        for q in ins.gate.qubits() {
            if !allowed.contains(&q) {
                violations.push(Violation {
                    instruction: idx,
                    locus: ins.locus,
                    qubit: q,
                });
            }
        }
    }

    let n = c.layout.node_count();
    let mut scatter_qubits: Vec<HashSet<usize>> = vec![HashSet::new(); n];
    let mut transfer = vec![0usize; n];
    let mut scatter = vec![0usize; n];
    for phase in &c.phases {
        let Some(u) = phase.kind.node() else { continue };
        if u >= n {
            continue;
        }
        for ins in c.phase_instructions(phase) {
            scatter_qubits[u].extend(ins.gate.qubits());
            if ins.gate.is_controlled() {
                scatter[u] += 1;
                if matches!(phase.kind, PhaseKind::Transfer { .. })
                    && matches!(ins.gate, Gate::Cnot { .. } | Gate::Mcx { .. })
                {
                    transfer[u] += 1;
                }
            }
        }
    }

    let mut overlapping_scatter = Vec::new();
    let mut owner = std::collections::HashMap::new();
    for (u, qs) in scatter_qubits.iter().enumerate() {
        for &q in qs {
            if let Some(&v) = owner.get(&q) {
                if v != u && !overlapping_scatter.contains(&(v, u)) {
                    overlapping_scatter.push((v, u));
                }
            } else {
                owner.insert(q, u);
            }
        }
    }

    let node_costs = (0..n)
        .map(|u| {
            let d = c.layout.nodes[u].degree();
            NodeCost {
                node: u,
                degree: d,
                transfer_controlled_ops: transfer[u],
                scatter_controlled_ops: scatter[u],
                bound: 2 * d * (ceil_log2(d) + 1),
            }
        })
        .collect();

    LocalityReport {
        violations,
        overlapping_scatter,
        node_costs,
    }
}
