use num_complex::Complex64;

use super::layout::{binary_width, build_layout};
use super::{
    Circuit, CircuitError, DenseMatrix, Gate, Instruction, Locus, Phase, PhaseKind, QubitLayout,
};
use crate::graph::{EdgeId, Graph, NodeId, PolarityMap};
use crate::walk::DiffusionOperator;

/// Two Z gates then a SWAP on every marked edge: `-X` on the one-hot pair.
pub fn compile_oracle(
    layout: &QubitLayout,
    marked: &[EdgeId],
) -> Result<Vec<Instruction>, CircuitError> {
    let mut out = Vec::with_capacity(3 * marked.len());
    for &e in marked {
        let [plus, minus] = *layout
            .edges
            .get(e)
            .ok_or(CircuitError::MarkedEdgeOutOfRange {
                edge: e,
                edge_count: layout.edge_count(),
            })?;
        let locus = Locus::Edge(e);
        out.push(Instruction::new(Gate::Z(plus), locus));
        out.push(Instruction::new(Gate::Z(minus), locus));
        out.push(Instruction::new(Gate::Swap(plus, minus), locus));
    }
    Ok(out)
}

/// One SWAP per edge: the coin `X`.
pub fn compile_coin(layout: &QubitLayout) -> Vec<Instruction> {
    layout
        .edges
        .iter()
        .enumerate()
        .map(|(e, &[plus, minus])| Instruction::new(Gate::Swap(plus, minus), Locus::Edge(e)))
        .collect()
}

/// `Tr_k` for node `u` and 1-based slot `k`: maps `|1>|0..0>|0>` on
/// (`eta_k`, binary, flag) to `|0>|k-1>|1>` and fixes `|0>|0..0>|0>`.
pub fn compile_trk(
    layout: &QubitLayout,
    u: NodeId,
    k: usize,
) -> Result<Vec<Instruction>, CircuitError> {
    let reg = layout.node(u)?;
    if k == 0 || k > reg.degree() {
        return Err(CircuitError::SlotOutOfRange {
            node: u,
            k,
            degree: reg.degree(),
        });
    }
    let eta = reg.facing[k - 1].qubit;
    let pattern = k - 1;
    let locus = Locus::Node(u);
    let bit = |i: usize| (pattern >> i) & 1 == 1;
    let mut out = Vec::new();

    for (i, &q) in reg.binary.iter().enumerate() {
        if bit(i) {
            out.push(Instruction::new(
                Gate::Cnot {
                    control: eta,
                    target: q,
                },
                locus,
            ));
        }
    }
    out.push(Instruction::new(
        Gate::Cnot {
            control: eta,
            target: reg.flag,
        },
        locus,
    ));
    let zero_bits: Vec<usize> = reg
        .binary
        .iter()
        .enumerate()
        .filter(|&(i, _)| !bit(i))
        .map(|(_, &q)| q)
        .collect();
    out.extend(
        zero_bits
            .iter()
            .map(|&q| Instruction::new(Gate::X(q), locus)),
    );
    out.push(Instruction::new(
        Gate::Mcx {
            controls: reg.qubits().collect(),
            target: eta,
        },
        locus,
    ));
    out.extend(
        zero_bits
            .iter()
            .map(|&q| Instruction::new(Gate::X(q), locus)),
    );
    Ok(out)
}

/// `Tr` for node `u`: `Tr_1 .. Tr_d` over the layout's slot enumeration.
pub fn compile_tr(layout: &QubitLayout, u: NodeId) -> Result<Vec<Instruction>, CircuitError> {
    let d = layout.node(u)?.degree();
    let mut out = Vec::new();
    for k in 1..=d {
        out.extend(compile_trk(layout, u, k)?);
    }
    Ok(out)
}

/// `D_d` on basis states `0..d` and identity on `d..2^ceil(log2 d)`.
pub fn diffusion_matrix(d: usize) -> DenseMatrix {
    let dim = 1usize << binary_width(d);
    let diffusion = DiffusionOperator::new(d);
    let mut m = DenseMatrix::identity(dim);
    for i in 0..d {
        for j in 0..d {
            m.set(i, j, Complex64::new(diffusion.entry(i, j), 0.0));
        }
    }
    m
}

/// Flag-controlled diffusion on the binary register; empty for `d = 1`.
pub fn compile_diffusion(
    layout: &QubitLayout,
    u: NodeId,
) -> Result<Vec<Instruction>, CircuitError> {
    let reg = layout.node(u)?;
    if reg.degree() < 2 {
        return Ok(Vec::new());
    }
    Ok(vec![Instruction::new(
        Gate::CtrlUnitary {
            control: reg.flag,
            targets: reg.binary.clone(),
            matrix: diffusion_matrix(reg.degree()),
        },
        Locus::Node(u),
    )])
}

/// Reverses a gate sequence and inverts each gate.
pub fn invert(instructions: &[Instruction]) -> Vec<Instruction> {
    instructions
        .iter()
        .rev()
        .map(|ins| Instruction::new(ins.gate.inverse(), ins.locus))
        .collect()
}

pub fn compile_step(
    g: &Graph,
    p: &PolarityMap,
    marked: &[EdgeId],
) -> Result<Circuit, CircuitError> {
    compile_step_with_layout(build_layout(g, p)?, marked)
}

/// Oracle, coin, then for every node `Tr`, controlled `D`, `Tr^-1`.
pub fn compile_step_with_layout(
    layout: QubitLayout,
    marked: &[EdgeId],
) -> Result<Circuit, CircuitError> {
    let mut instructions = Vec::new();
    let mut phases = Vec::new();
    let mut push =
        |kind: PhaseKind, block: Vec<Instruction>, instructions: &mut Vec<Instruction>| {
            let start = instructions.len();
            instructions.extend(block);
            phases.push(Phase {
                kind,
                start,
                end: instructions.len(),
            });
        };

    push(
        PhaseKind::Oracle,
        compile_oracle(&layout, marked)?,
        &mut instructions,
    );
    push(PhaseKind::Coin, compile_coin(&layout), &mut instructions);
    for u in 0..layout.node_count() {
        let tr = compile_tr(&layout, u)?;
        let undo = invert(&tr);
        push(PhaseKind::Transfer { node: u }, tr, &mut instructions);
        push(
            PhaseKind::Diffuse { node: u },
            compile_diffusion(&layout, u)?,
            &mut instructions,
        );
        push(PhaseKind::Untransfer { node: u }, undo, &mut instructions);
    }
    Ok(Circuit {
        layout,
        instructions,
        phases,
    })
}
