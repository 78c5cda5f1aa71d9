//! Exact state-vector simulation of the edge walk.
//!
//! The walker lives on edges: every edge carries an amplitude pair
//! `(psi_plus, psi_minus)`. One step applies, in order, the oracle (marked
//! edges get the special coin `R`), the coin `C` on every edge, and the
//! scattering `S`, where every node applies the Grover diffusion
//! `D_d = (2/d) J - I` to the `d` amplitudes facing it.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, Graph, NodeId, PolarityMap, Pole};

pub type Mat2 = [[Complex64; 2]; 2];

/// Tolerance for unitarity checks on user-supplied 2x2 matrices.
pub const UNITARY_TOL: f64 = 1e-12;

/// Default cap on search invocations for [`Walk::guaranteed_search`].
pub const DEFAULT_CALL_CAP: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("{what} matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { what: &'static str, deviation: f64 },
    #[error("marked edge {edge} out of range for {edge_count} edges")]
    MarkedEdgeOutOfRange { edge: EdgeId, edge_count: usize },
    #[error("state has {got} edges but the walk has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("search needs at least one marked edge")]
    NoMarkedEdge,
    #[error("guaranteed search exceeded the cap of {cap} calls")]
    CallCapExceeded { cap: u64 },
    #[error("sweep horizon must be at least 1")]
    EmptyHorizon,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn pauli_x() -> Mat2 {
    [[c(0.0), c(1.0)], [c(1.0), c(0.0)]]
}

pub fn identity2() -> Mat2 {
    [[c(1.0), c(0.0)], [c(0.0), c(1.0)]]
}

fn apply2(m: &Mat2, [a, b]: [Complex64; 2]) -> [Complex64; 2] {
    [m[0][0] * a + m[0][1] * b, m[1][0] * a + m[1][1] * b]
}

/// Largest entry of `|M^dagger M - I|`.
fn unitarity_deviation(m: &Mat2) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let dot: Complex64 = (0..2).map(|k| m[k][i].conj() * m[k][j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).norm());
        }
    }
    worst
}

fn checked_unitary(m: Mat2, what: &'static str) -> Result<Mat2, WalkError> {
    let deviation = unitarity_deviation(&m);
    if deviation > UNITARY_TOL {
        return Err(WalkError::NotUnitary { what, deviation });
    }
    Ok(m)
}

/// The walker `|Phi_t>`: one amplitude pair per edge plus the step counter.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    amps: Vec<[Complex64; 2]>,
    time: usize,
}

impl WalkState {
    /// Uniform superposition `1/sqrt(2|E|)` on every edge and pole.
    pub fn diagonal(g: &Graph) -> Self {
        let a = c(1.0 / (2.0 * g.edge_count() as f64).sqrt());
        WalkState {
            amps: vec![[a, a]; g.edge_count()],
            time: 0,
        }
    }

    /// All weight on one pole of one edge.
    pub fn one_hot(edge_count: usize, edge: EdgeId, pole: Pole) -> Self {
        let mut amps = vec![[Complex64::default(); 2]; edge_count];
        amps[edge][pole.index()] = c(1.0);
        WalkState { amps, time: 0 }
    }

    /// Raw amplitudes at `t = 0`. Normalization is not enforced, so linear
    /// combinations can be stepped too.
    pub fn from_amplitudes(amps: Vec<[Complex64; 2]>) -> Self {
        WalkState { amps, time: 0 }
    }

    pub fn amplitudes(&self) -> &[[Complex64; 2]] {
        &self.amps
    }

    pub fn pair(&self, e: EdgeId) -> [Complex64; 2] {
        self.amps[e]
    }

    pub fn edge_count(&self) -> usize {
        self.amps.len()
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps
            .iter()
            .map(|[p, m]| p.norm_sqr() + m.norm_sqr())
            .sum()
    }

    /// `p(e) = |psi_plus|^2 + |psi_minus|^2`.
    pub fn edge_probabilities(&self) -> Vec<f64> {
        self.amps
            .iter()
            .map(|[p, m]| p.norm_sqr() + m.norm_sqr())
            .collect()
    }

    pub fn probability_of(&self, edges: &[EdgeId]) -> f64 {
        edges
            .iter()
            .map(|&e| self.amps[e][0].norm_sqr() + self.amps[e][1].norm_sqr())
            .fold(0.0, |acc, p| acc + p)
    }

    /// Largest absolute amplitude difference.
    pub fn max_deviation(&self, other: &WalkState) -> f64 {
        assert_eq!(self.amps.len(), other.amps.len());
        self.amps
            .iter()
            .zip(&other.amps)
            .flat_map(|(a, b)| [(a[0] - b[0]).norm(), (a[1] - b[1]).norm()])
            .fold(0.0, f64::max)
    }

    /// `alpha * self + beta * other`, keeping `self`'s time.
    pub fn combine(&self, alpha: Complex64, other: &WalkState, beta: Complex64) -> WalkState {
        let amps = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| [alpha * a[0] + beta * b[0], alpha * a[1] + beta * b[1]])
            .collect();
        WalkState {
            amps,
            time: self.time,
        }
    }

    pub fn apply_coin(&mut self, coin: &CoinSpec) {
        for pair in &mut self.amps {
            *pair = apply2(&coin.0, *pair);
        }
    }

    pub fn apply_oracle(&mut self, oracle: &OracleSpec) -> Result<(), WalkError> {
        for &e in &oracle.marked {
            if e >= self.amps.len() {
                return Err(WalkError::MarkedEdgeOutOfRange {
                    edge: e,
                    edge_count: self.amps.len(),
                });
            }
        }
        for &e in &oracle.marked {
            self.amps[e] = apply2(&oracle.r, self.amps[e]);
        }
        Ok(())
    }
}

/// The coin `C` applied to every edge; defaults to Pauli X.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinSpec(Mat2);

impl CoinSpec {
    pub fn new(m: Mat2) -> Result<Self, WalkError> {
        checked_unitary(m, "coin").map(CoinSpec)
    }

    pub fn x() -> Self {
        CoinSpec(pauli_x())
    }

    pub fn identity() -> Self {
        CoinSpec(identity2())
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }
}

impl Default for CoinSpec {
    fn default() -> Self {
        Self::x()
    }
}

/// The oracle `O_f`: applies `R` to marked edges and identity elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpec {
    marked: Vec<EdgeId>,
    r: Mat2,
}

impl OracleSpec {
    /// `marked` is sorted and deduplicated.
    pub fn new(mut marked: Vec<EdgeId>, r: Mat2) -> Result<Self, WalkError> {
        marked.sort_unstable();
        marked.dedup();
        Ok(OracleSpec {
            marked,
            r: checked_unitary(r, "oracle")?,
        })
    }

    /// Marks `edges` with the default `R = -X`.
    pub fn marking(edges: impl IntoIterator<Item = EdgeId>) -> Self {
        let minus_x = pauli_x().map(|row| row.map(|z| -z));
        Self::new(edges.into_iter().collect(), minus_x).expect("-X is unitary")
    }

    pub fn none() -> Self {
        Self::marking([])
    }

    pub fn marked(&self) -> &[EdgeId] {
        &self.marked
    }

    pub fn is_marked(&self, e: EdgeId) -> bool {
        self.marked.binary_search(&e).is_ok()
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.r
    }
}

/// Grover diffusion `D_n = (2/n) J_n - I_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiffusionOperator {
    pub n: usize,
}

impl DiffusionOperator {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "diffusion needs a positive dimension");
        DiffusionOperator { n }
    }

    /// In-place `y_i = (2/n) * sum(x) - x_i`.
    pub fn apply(&self, x: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.n);
        let scale = 2.0 / self.n as f64;
        let total: Complex64 = x.iter().sum::<Complex64>() * scale;
        for xi in x {
            *xi = total - *xi;
        }
    }

    /// Entry `(i, j)` of the dense matrix.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        2.0 / self.n as f64 - if i == j { 1.0 } else { 0.0 }
    }

    pub fn dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entry(i, j)).collect())
            .collect()
    }
}

/// Optimal-time sweep result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub node_count: usize,
    pub edge_count: usize,
    pub marked: Vec<EdgeId>,
    pub t_max: usize,
    /// Smallest `t` reaching the maximum marked probability.
    pub t_star: usize,
    pub p_star: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted_t: Option<f64>,
    /// `p_t` for `t = 0..=t_max`.
    pub probabilities: Vec<f64>,
}

impl SweepReport {
    fn from_series(g: &Graph, marked: &[EdgeId], probabilities: Vec<f64>) -> Self {
        let (t_star, p_star) = probabilities.iter().copied().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |best, (t, p)| if p > best.1 { (t, p) } else { best },
        );
        SweepReport {
            node_count: g.node_count(),
            edge_count: g.edge_count(),
            marked: marked.to_vec(),
            t_max: probabilities.len() - 1,
            t_star,
            p_star,
            predicted_t: None,
            probabilities,
        }
    }

    /// CSV with header `t,p_marked` (plus `predicted_T` when set).
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["t", "p_marked"];
        if self.predicted_t.is_some() {
            header.push("predicted_T");
        }
        w.write_record(&header).expect("in-memory write");
        for (t, p) in self.probabilities.iter().enumerate() {
            let mut row = vec![t.to_string(), p.to_string()];
            if let Some(pt) = self.predicted_t {
                row.push(pt.to_string());
            }
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("csv is utf-8")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Outcome of the Las Vegas search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GuaranteedOutcome {
    pub edge: EdgeId,
    pub calls: u64,
}

/// Inverse-CDF sampler over an edge distribution.
#[derive(Debug, Clone)]
pub struct EdgeSampler {
    cdf: Vec<f64>,
}

impl EdgeSampler {
    pub fn new(probabilities: &[f64]) -> Self {
        let mut acc = 0.0;
        let cdf = probabilities
            .iter()
            .map(|&p| {
                acc += p;
                acc
            })
            .collect();
        EdgeSampler { cdf }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> EdgeId {
        let total = *self.cdf.last().expect("non-empty distribution");
        let u = rng.random::<f64>() * total;
        self.cdf
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.cdf.len() - 1)
    }
}

/// Seeded generator used by every stochastic operation.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A graph, a polarity, a coin and an oracle: everything one step needs.
#[derive(Debug, Clone)]
pub struct Walk<'g> {
    graph: &'g Graph,
    coin: CoinSpec,
    oracle: OracleSpec,
    /// Per node, the `(edge, pole index)` of each facing amplitude.
    slots: Vec<Vec<(EdgeId, usize)>>,
}

impl<'g> Walk<'g> {
    pub fn new(
        graph: &'g Graph,
        polarity: &PolarityMap,
        coin: CoinSpec,
        oracle: OracleSpec,
    ) -> Result<Self, WalkError> {
        if polarity.edge_count() != graph.edge_count() {
            return Err(WalkError::DimensionMismatch {
                expected: graph.edge_count(),
                got: polarity.edge_count(),
            });
        }
        if let Some(&edge) = oracle.marked().iter().find(|&&e| e >= graph.edge_count()) {
            return Err(WalkError::MarkedEdgeOutOfRange {
                edge,
                edge_count: graph.edge_count(),
            });
        }
        let slots = (0..graph.node_count())
            .map(|u| {
                graph
                    .neighbors(u)
                    .iter()
                    .map(|&(_, e)| (e, polarity.facing(e, u).index()))
                    .collect()
            })
            .collect();
        Ok(Walk {
            graph,
            coin,
            oracle,
            slots,
        })
    }

    /// Coin X, oracle `-X` on `marked`.
    pub fn search_walk(
        graph: &'g Graph,
        polarity: &PolarityMap,
        marked: impl IntoIterator<Item = EdgeId>,
    ) -> Result<Self, WalkError> {
        Self::new(graph, polarity, CoinSpec::x(), OracleSpec::marking(marked))
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn oracle(&self) -> &OracleSpec {
        &self.oracle
    }

    pub fn coin(&self) -> &CoinSpec {
        &self.coin
    }

    /// The facing `(edge, pole index)` slots of node `u`, in adjacency order.
    pub fn facing_slots(&self, u: NodeId) -> &[(EdgeId, usize)] {
        &self.slots[u]
    }

    fn check(&self, s: &WalkState) -> Result<(), WalkError> {
        if s.edge_count() != self.graph.edge_count() {
            return Err(WalkError::DimensionMismatch {
                expected: self.graph.edge_count(),
                got: s.edge_count(),
            });
        }
        Ok(())
    }

    /// Applies `D_deg(u)` at every node to its facing amplitudes.
    pub fn apply_scattering(&self, s: &mut WalkState) -> Result<(), WalkError> {
        self.check(s)?;
        let mut buf = Vec::with_capacity(self.graph.max_degree());
        for slots in &self.slots {
            if slots.len() < 2 {
                // D_1 is the identity
                continue;
            }
            buf.clear();
            buf.extend(slots.iter().map(|&(e, k)| s.amps[e][k]));
            DiffusionOperator::new(slots.len()).apply(&mut buf);
            for (&(e, k), &v) in slots.iter().zip(&buf) {
                s.amps[e][k] = v;
            }
        }
        Ok(())
    }

    /// `S (I x C) O_f`, advancing the step counter.
    pub fn step(&self, s: &mut WalkState) -> Result<(), WalkError> {
        self.check(s)?;
        s.apply_oracle(&self.oracle)?;
        s.apply_coin(&self.coin);
        self.apply_scattering(s)?;
        s.time += 1;
        Ok(())
    }

    /// `steps` steps from the diagonal state.
    pub fn evolve(&self, steps: usize) -> WalkState {
        let mut s = WalkState::diagonal(self.graph);
        for _ in 0..steps {
            self.step(&mut s).expect("diagonal state matches the walk");
        }
        s
    }

    /// Marked probability for every `t <= t_max` starting from the diagonal
    /// state.
    pub fn sweep(&self, t_max: usize) -> Result<SweepReport, WalkError> {
        if t_max == 0 {
            return Err(WalkError::EmptyHorizon);
        }
        let marked = self.oracle.marked();
        let mut s = WalkState::diagonal(self.graph);
        let mut series = Vec::with_capacity(t_max + 1);
        series.push(s.probability_of(marked));
        for _ in 0..t_max {
            self.step(&mut s)?;
            series.push(s.probability_of(marked));
        }
        Ok(SweepReport::from_series(self.graph, marked, series))
    }

    /// Sampler over the edge distribution after `steps` steps.
    pub fn sampler(&self, steps: usize) -> EdgeSampler {
        EdgeSampler::new(&self.evolve(steps).edge_probabilities())
    }

    /// Runs `steps` steps and measures an edge.
    pub fn search(&self, steps: usize, seed: u64) -> EdgeId {
        self.sampler(steps).sample(&mut seeded_rng(seed))
    }

    /// Repeats [`Walk::search`] until a marked edge comes out.
    pub fn guaranteed_search(
        &self,
        steps: usize,
        seed: u64,
        cap: u64,
    ) -> Result<GuaranteedOutcome, WalkError> {
        if self.oracle.marked().is_empty() {
            return Err(WalkError::NoMarkedEdge);
        }
        let sampler = self.sampler(steps);
        let mut rng = seeded_rng(seed);
        for calls in 1..=cap {
            let edge = sampler.sample(&mut rng);
            if self.oracle.is_marked(edge) {
                return Ok(GuaranteedOutcome { edge, calls });
            }
        }
        Err(WalkError::CallCapExceeded { cap })
    }
}
