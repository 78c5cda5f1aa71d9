//! Sparse state-vector simulation of compiled circuits.
//!
//! States are maps from basis strings to amplitudes. Compiled walk steps
//! keep the support within a small multiple of the number of edges, so
//! graphs with hundreds of edges (and qubits) stay cheap to simulate.
//!
//! In printed basis strings qubit 0 is the leftmost character.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, Instruction, QubitLayout};
use crate::graph::EdgeId;
use crate::walk::{seeded_rng, EdgeSampler, Walk, WalkState};

/// Amplitudes below this magnitude are dropped after mixing gates.
pub const PRUNE: f64 = 1e-15;
/// Largest weight tolerated outside the one-hot subspace when projecting.
pub const LEAKAGE_TOL: f64 = 1e-10;
/// Unitarity tolerance for controlled-unitary payloads.
pub const PAYLOAD_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("qubit {qubit} out of range for {qubits} qubits")]
    QubitOutOfRange { qubit: usize, qubits: usize },
    #[error("controlled-unitary payload is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("controlled-unitary payload has dimension {got}, expected {expected}")]
    PayloadDimension { expected: usize, got: usize },
    #[error("state has {got} qubits but the circuit needs {expected}")]
    QubitCountMismatch { expected: usize, got: usize },
    #[error("subspace leakage: weight {weight:e} outside the one-hot edge subspace")]
    Leakage { weight: f64 },
}

/// A computational basis string, packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Basis(Vec<u64>);

impl Basis {
    pub fn zero(qubits: usize) -> Self {
        Basis(vec![0; qubits.div_ceil(64).max(1)])
    }

    pub fn with_bit(qubits: usize, q: usize) -> Self {
        let mut b = Self::zero(qubits);
        b.set(q, true);
        b
    }

    pub fn get(&self, q: usize) -> bool {
        (self.0[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn set(&mut self, q: usize, value: bool) {
        let mask = 1u64 << (q % 64);
        if value {
            self.0[q / 64] |= mask;
        } else {
            self.0[q / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, q: usize) {
        self.0[q / 64] ^= 1u64 << (q % 64);
    }

    pub fn count_ones(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn to_bit_string(&self, qubits: usize) -> String {
        (0..qubits)
            .map(|q| if self.get(q) { '1' } else { '0' })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DumpEntry {
    pub basis: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    qubits: usize,
    amps: HashMap<Basis, Complex64>,
}

impl SparseState {
    /// `|0...0>`.
    pub fn zero(qubits: usize) -> Self {
        let mut amps = HashMap::new();
        amps.insert(Basis::zero(qubits), Complex64::new(1.0, 0.0));
        SparseState { qubits, amps }
    }

    pub fn from_entries(
        qubits: usize,
        entries: impl IntoIterator<Item = (Basis, Complex64)>,
    ) -> Self {
        let mut amps = HashMap::new();
        for (b, a) in entries {
            if a.norm() >= PRUNE {
                *amps.entry(b).or_default() += a;
            }
        }
        SparseState { qubits, amps }
    }

    /// Equal superposition over the `2|E|` one-hot edge strings; node
    /// registers zero.
    pub fn init_walk_superposition(layout: &QubitLayout) -> Self {
        let n = layout.qubit_count();
        let edge_qubits = 2 * layout.edge_count();
        let a = Complex64::new(1.0 / (edge_qubits as f64).sqrt(), 0.0);
        Self::from_entries(n, (0..edge_qubits).map(|q| (Basis::with_bit(n, q), a)))
    }

    /// Embeds a walk state into the one-hot subspace.
    pub fn from_walk_state(state: &WalkState, layout: &QubitLayout) -> Self {
        let n = layout.qubit_count();
        let entries = state
            .amplitudes()
            .iter()
            .zip(&layout.edges)
            .flat_map(|(pair, qs)| [(qs[0], pair[0]), (qs[1], pair[1])])
            .map(|(q, a)| (Basis::with_bit(n, q), a));
        Self::from_entries(n, entries)
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    /// Number of stored (non-pruned) amplitudes.
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitude(&self, b: &Basis) -> Complex64 {
        self.amps.get(b).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(Complex64::norm_sqr).sum()
    }

    fn check_qubit(&self, q: usize) -> Result<(), SimError> {
        if q >= self.qubits {
            return Err(SimError::QubitOutOfRange {
                qubit: q,
                qubits: self.qubits,
            });
        }
        Ok(())
    }

    fn permute(&mut self, mut f: impl FnMut(&mut Basis)) {
        let old = std::mem::take(&mut self.amps);
        self.amps.reserve(old.len());
        for (mut b, a) in old {
            f(&mut b);
            self.amps.insert(b, a);
        }
    }

    pub fn apply(&mut self, ins: &Instruction) -> Result<(), SimError> {
        for q in ins.gate.qubits() {
            self.check_qubit(q)?;
        }
        match &ins.gate {
            Gate::X(q) => self.permute(|b| b.flip(*q)),
            Gate::Z(q) => {
                for (b, a) in self.amps.iter_mut() {
                    if b.get(*q) {
                        *a = -*a;
                    }
                }
            }
            Gate::Cnot { control, target } => self.permute(|b| {
                if b.get(*control) {
                    b.flip(*target)
                }
            }),
            Gate::Swap(x, y) => self.permute(|b| {
                let (bx, by) = (b.get(*x), b.get(*y));
                b.set(*x, by);
                b.set(*y, bx);
            }),
            Gate::Mcx { controls, target } => self.permute(|b| {
                if controls.iter().all(|&c| b.get(c)) {
                    b.flip(*target)
                }
            }),
            Gate::CtrlUnitary {
                control,
                targets,
                matrix,
            } => {
                let dim = 1usize << targets.len();
                if matrix.dim() != dim {
                    return Err(SimError::PayloadDimension {
                        expected: dim,
                        got: matrix.dim(),
                    });
                }
                let deviation = matrix.unitarity_deviation();
                if deviation > PAYLOAD_TOL {
                    return Err(SimError::NotUnitary { deviation });
                }
                self.apply_controlled_unitary(*control, targets, matrix);
            }
        }
        Ok(())
    }

    fn apply_controlled_unitary(
        &mut self,
        control: usize,
        targets: &[usize],
        matrix: &crate::circuit::DenseMatrix,
    ) {
        let dim = matrix.dim();
        let mut groups: HashMap<Basis, Vec<Complex64>> = HashMap::new();
        let old = std::mem::take(&mut self.amps);
        for (b, a) in old {
            if !b.get(control) {
                self.amps.insert(b, a);
                continue;
            }
            let mut index = 0;
            let mut rest = b;
            for (i, &t) in targets.iter().enumerate() {
                if rest.get(t) {
                    index |= 1 << i;
                    rest.set(t, false);
                }
            }
            groups
                .entry(rest)
                .or_insert_with(|| vec![Complex64::default(); dim])[index] = a;
        }
        for (rest, v) in groups {
            for (index, a) in matrix.mul_vec(&v).into_iter().enumerate() {
                if a.norm() < PRUNE {
                    continue;
                }
                let mut b = rest.clone();
                for (i, &t) in targets.iter().enumerate() {
                    b.set(t, (index >> i) & 1 == 1);
                }
                self.amps.insert(b, a);
            }
        }
    }

    pub fn run(&mut self, circuit: &Circuit) -> Result<(), SimError> {
        if circuit.qubit_count() != self.qubits {
            return Err(SimError::QubitCountMismatch {
                expected: circuit.qubit_count(),
                got: self.qubits,
            });
        }
        for ins in &circuit.instructions {
            self.apply(ins)?;
        }
        Ok(())
    }

    /// Splits the state into its one-hot edge part and the weight outside it.
    pub fn project_lossy(&self, layout: &QubitLayout) -> (WalkState, f64) {
        let edge_qubits = 2 * layout.edge_count();
        let mut amps = vec![[Complex64::default(); 2]; layout.edge_count()];
        let mut leaked = 0.0;
        for (b, a) in &self.amps {
            match b.first_one() {
                Some(q) if q < edge_qubits && b.count_ones() == 1 => amps[q / 2][q % 2] = *a,
                _ => leaked += a.norm_sqr(),
            }
        }
        (WalkState::from_amplitudes(amps), leaked)
    }

    /// One-hot amplitudes as a walk state; fails if more than
    /// [`LEAKAGE_TOL`] of the weight lies elsewhere.
    pub fn project_to_walk_state(&self, layout: &QubitLayout) -> Result<WalkState, SimError> {
        let (state, weight) = self.project_lossy(layout);
        if weight > LEAKAGE_TOL {
            return Err(SimError::Leakage { weight });
        }
        Ok(state)
    }

    /// Measures the edge register: the edge whose qubit reads 1.
    pub fn measure_edge(&self, layout: &QubitLayout, seed: u64) -> Result<EdgeId, SimError> {
        let state = self.project_to_walk_state(layout)?;
        Ok(EdgeSampler::new(&state.edge_probabilities()).sample(&mut seeded_rng(seed)))
    }

    /// Entries sorted by basis string.
    pub fn dump(&self) -> Vec<DumpEntry> {
        let mut out: Vec<DumpEntry> = self
            .amps
            .iter()
            .map(|(b, a)| DumpEntry {
                basis: b.to_bit_string(self.qubits),
                re: a.re,
                im: a.im,
            })
            .collect();
        out.sort_by(|x, y| x.basis.cmp(&y.basis));
        out
    }

    pub fn dump_json(&self) -> String {
        serde_json::to_string(&self.dump()).expect("dump serializes")
    }
}

/// Column-by-column comparison of a compiled step against the walk step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub dimension: usize,
    pub max_deviation: f64,
    pub max_leakage: f64,
    pub max_support: usize,
}

impl EquivalenceReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation <= tol && self.max_leakage <= LEAKAGE_TOL
    }
}

/// Runs `circuit` on every one-hot basis state of the edge register and
/// compares the result with `walk.step` on the same state.
pub fn verify_step(circuit: &Circuit, walk: &Walk<'_>) -> Result<EquivalenceReport, SimError> {
    let layout = &circuit.layout;
    let edges = walk.graph().edge_count();
    if layout.edge_count() != edges {
        return Err(SimError::QubitCountMismatch {
            expected: 2 * edges,
            got: 2 * layout.edge_count(),
        });
    }
    let mut report = EquivalenceReport {
        dimension: 2 * edges,
        max_deviation: 0.0,
        max_leakage: 0.0,
        max_support: 0,
    };
    for e in 0..edges {
        for pole in [crate::graph::Pole::Plus, crate::graph::Pole::Minus] {
            let mut expected = WalkState::one_hot(edges, e, pole);
            let mut sparse = SparseState::from_walk_state(&expected, layout);
            walk.step(&mut expected)
                .expect("one-hot state matches the walk");
            for ins in &circuit.instructions {
                sparse.apply(ins)?;
                report.max_support = report.max_support.max(sparse.len());
            }
            let (got, leaked) = sparse.project_lossy(layout);
            report.max_deviation = report.max_deviation.max(got.max_deviation(&expected));
            report.max_leakage = report.max_leakage.max(leaked);
        }
    }
    Ok(report)
}
