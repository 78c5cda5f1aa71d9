//! Gate-level compilation of one walk step into node- and edge-local
//! instructions.
//!
//! Every edge owns two qubits (`+` and `-` amplitude) and every node of
//! degree `d` owns `ceil(log2 d)` binary qubits plus one flag qubit. The
//! walker is a one-hot string over the edge qubits. Oracle and coin are
//! per-edge gates; scattering at a node moves the excitation of its facing
//! edge qubits into the node register (`Tr`), applies the diffusion there,
//! and moves it back (`Tr^-1`).

mod audit;
mod compile;
mod json;
mod layout;

pub use audit::{locality_audit, LocalityReport, NodeCost, Violation};
pub use compile::{
    compile_coin, compile_diffusion, compile_oracle, compile_step, compile_step_with_layout,
    compile_tr, compile_trk, diffusion_matrix, invert,
};
pub use json::CircuitDocument;
pub use layout::{
    build_layout, build_layout_with, EdgeOrder, FacingSlot, NodeRegister, QubitLayout,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, NodeId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("slot {k} out of range for node {node} of degree {degree}")]
    SlotOutOfRange {
        node: NodeId,
        k: usize,
        degree: usize,
    },
    #[error("node {node} out of range for {node_count} nodes")]
    NodeOutOfRange { node: NodeId, node_count: usize },
    #[error("marked edge {edge} out of range for {edge_count} edges")]
    MarkedEdgeOutOfRange { edge: EdgeId, edge_count: usize },
    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("malformed circuit: {0}")]
    Malformed(String),
    #[error("polarity does not match the graph: {0}")]
    Polarity(String),
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self, CircuitError> {
        if data.len() != dim * dim {
            return Err(CircuitError::Malformed(format!(
                "matrix has {} entries, expected {}",
                data.len(),
                dim * dim
            )));
        }
        Ok(DenseMatrix { dim, data })
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::default(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        DenseMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let data = (0..n * n)
            .map(|idx| self.get(idx % n, idx / n).conj())
            .collect();
        DenseMatrix { dim: n, data }
    }

    /// Largest entry of `|M^dagger M - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let dot: Complex64 = (0..n).map(|k| self.get(k, i).conj() * self.get(k, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    X(usize),
    Z(usize),
    Cnot {
        control: usize,
        target: usize,
    },
    Swap(usize, usize),
    /// NOT on `target` when every control is 1.
    Mcx {
        controls: Vec<usize>,
        target: usize,
    },
    /// `matrix` on the `targets` register when `control` is 1. `targets[i]`
    /// is bit `i` of the matrix index.
    CtrlUnitary {
        control: usize,
        targets: Vec<usize>,
        matrix: DenseMatrix,
    },
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::X(_) => "X",
            Gate::Z(_) => "Z",
            Gate::Cnot { .. } => "CNOT",
            Gate::Swap(..) => "SWAP",
            Gate::Mcx { .. } => "MCX",
            Gate::CtrlUnitary { .. } => "CTRL-UNITARY",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::X(q) | Gate::Z(q) => vec![*q],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Swap(a, b) => vec![*a, *b],
            Gate::Mcx { controls, target } => {
                let mut qs = controls.clone();
                qs.push(*target);
                qs
            }
            Gate::CtrlUnitary {
                control, targets, ..
            } => {
                let mut qs = vec![*control];
                qs.extend(targets);
                qs
            }
        }
    }

    /// CNOT, MCX and controlled unitaries: operations that need a control
    /// wire between an edge and a node register.
    pub fn is_controlled(&self) -> bool {
        matches!(
            self,
            Gate::Cnot { .. } | Gate::Mcx { .. } | Gate::CtrlUnitary { .. }
        )
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::CtrlUnitary {
                control,
                targets,
                matrix,
            } => Gate::CtrlUnitary {
                control: *control,
                targets: targets.clone(),
                matrix: matrix.adjoint(),
            },
            other => other.clone(),
        }
    }
}

/// The node or edge responsible for executing an instruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "id", rename_all = "lowercase")]
pub enum Locus {
    Node(NodeId),
    Edge(EdgeId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instruction {
    pub gate: Gate,
    pub locus: Locus,
}

impl Instruction {
    pub fn new(gate: Gate, locus: Locus) -> Self {
        Instruction { gate, locus }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PhaseKind {
    Oracle,
    Coin,
    Transfer { node: NodeId },
    Diffuse { node: NodeId },
    Untransfer { node: NodeId },
}

impl PhaseKind {
    pub fn node(&self) -> Option<NodeId> {
        match *self {
            PhaseKind::Transfer { node }
            | PhaseKind::Diffuse { node }
            | PhaseKind::Untransfer { node } => Some(node),
            PhaseKind::Oracle | PhaseKind::Coin => None,
        }
    }
}

/// A half-open range of instructions belonging to one stage of the step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phase {
    #[serde(flatten)]
    pub kind: PhaseKind,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub layout: QubitLayout,
    pub instructions: Vec<Instruction>,
    pub phases: Vec<Phase>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GateCounts {
    pub x: usize,
    pub z: usize,
    pub cnot: usize,
    pub swap: usize,
    pub mcx: usize,
    pub ctrl_unitary: usize,
    pub total: usize,
}

impl Circuit {
    pub fn qubit_count(&self) -> usize {
        self.layout.qubit_count()
    }

    pub fn gate_counts(&self) -> GateCounts {
        let mut c = GateCounts::default();
        for ins in &self.instructions {
            match ins.gate {
                Gate::X(_) => c.x += 1,
                Gate::Z(_) => c.z += 1,
                Gate::Cnot { .. } => c.cnot += 1,
                Gate::Swap(..) => c.swap += 1,
                Gate::Mcx { .. } => c.mcx += 1,
                Gate::CtrlUnitary { .. } => c.ctrl_unitary += 1,
            }
        }
        c.total = self.instructions.len();
        c
    }

    pub fn phase_instructions(&self, phase: &Phase) -> &[Instruction] {
        &self.instructions[phase.start..phase.end]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CircuitDocument::from(self)).expect("circuit serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CircuitError> {
        let doc: CircuitDocument =
            serde_json::from_str(text).map_err(|e| CircuitError::Malformed(e.to_string()))?;
        doc.into_circuit()
    }
}
