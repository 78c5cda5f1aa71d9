use graphwalk_core::circuit::{
    build_layout, build_layout_with, compile_coin, compile_oracle, compile_step,
    compile_step_with_layout, compile_tr, compile_trk, invert, locality_audit, Circuit, EdgeOrder,
    Instruction, QubitLayout,
};
use graphwalk_core::graph::{
    complete, cycle, path, random_connected, star, starify, Graph, PolarityMap, Pole,
};
use graphwalk_core::sim::{verify_step, Basis, SparseState};
use graphwalk_core::walk::{seeded_rng, CoinSpec, OracleSpec, Walk, WalkState};
use graphwalk_core::Complex64;
use rand::Rng;

const EQUIV_TOL: f64 = 1e-10;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn run(instructions: &[Instruction], state: &mut SparseState) {
    for ins in instructions {
        state.apply(ins).unwrap();
    }
}

fn single(qubits: usize, set: &[usize]) -> SparseState {
    let mut b = Basis::zero(qubits);
    for &q in set {
        b.set(q, true);
    }
    SparseState::from_entries(qubits, [(b, one())])
}

fn only_basis(s: &SparseState) -> String {
    let dump = s.dump();
    assert_eq!(dump.len(), 1, "expected a basis state, got {dump:?}");
    assert!((Complex64::new(dump[0].re, dump[0].im) - one()).norm() < 1e-15);
    dump[0].basis.clone()
}

fn expected_bits(qubits: usize, set: &[usize]) -> String {
    single(qubits, set).dump()[0].basis.clone()
}

#[test]
fn trk_defining_action() {
    for d in 1..=16 {
        let g = star(d);
        let layout = build_layout(&g, &PolarityMap::greedy(&g)).unwrap();
        let reg = layout.node(0).unwrap().clone();
        let n = layout.qubit_count();
        for k in 1..=d {
            let trk = compile_trk(&layout, 0, k).unwrap();
            let mut s = single(n, &[reg.facing[k - 1].qubit]);
            run(&trk, &mut s);
            let mut want: Vec<usize> = reg
                .binary
                .iter()
                .enumerate()
                .filter(|&(i, _)| (k - 1) >> i & 1 == 1)
                .map(|(_, &q)| q)
                .collect();
            want.push(reg.flag);
            assert_eq!(only_basis(&s), expected_bits(n, &want), "d={d} k={k}");

            let mut vacuum = SparseState::zero(n);
            run(&trk, &mut vacuum);
            assert_eq!(only_basis(&vacuum), expected_bits(n, &[]));
        }
        assert!(compile_trk(&layout, 0, 0).is_err());
        assert!(compile_trk(&layout, 0, d + 1).is_err());
    }
}

#[test]
fn tr_loads_each_slot_into_the_register() {
    for d in 1..=16 {
        let g = star(d);
        let layout = build_layout(&g, &PolarityMap::greedy(&g)).unwrap();
        let reg = layout.node(0).unwrap().clone();
        let tr = compile_tr(&layout, 0).unwrap();
        let n = layout.qubit_count();
        for k in 1..=d {
            let mut s = single(n, &[reg.facing[k - 1].qubit]);
            run(&tr, &mut s);
            let mut want: Vec<usize> = reg
                .binary
                .iter()
                .enumerate()
                .filter(|&(i, _)| (k - 1) >> i & 1 == 1)
                .map(|(_, &q)| q)
                .collect();
            want.push(reg.flag);
            assert_eq!(only_basis(&s), expected_bits(n, &want), "d={d} k={k}");
        }
    }
}

#[test]
fn tr_then_inverse_is_identity_on_the_full_register() {
    for d in 1..=4 {
        let g = star(d);
        let layout = build_layout(&g, &PolarityMap::greedy(&g)).unwrap();
        let reg = layout.node(0).unwrap();
        let mut involved: Vec<usize> = reg.facing.iter().map(|s| s.qubit).collect();
        involved.extend(reg.qubits());
        let tr = compile_tr(&layout, 0).unwrap();
        let undo = invert(&tr);
        let n = layout.qubit_count();
        for mask in 0u32..(1 << involved.len()) {
            let set: Vec<usize> = involved
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &q)| q)
                .collect();
            let mut s = single(n, &set);
            run(&tr, &mut s);
            run(&undo, &mut s);
            assert_eq!(
                only_basis(&s),
                expected_bits(n, &set),
                "d={d} mask={mask:b}"
            );
        }
    }
}

#[test]
fn oracle_and_coin_on_the_edge_subspace() {
    let g = path(3);
    let layout = build_layout(&g, &PolarityMap::greedy(&g)).unwrap();
    let n = layout.qubit_count();
    let oracle = compile_oracle(&layout, &[1]).unwrap();
    let coin = compile_coin(&layout);
    for e in 0..g.edge_count() {
        for pole in [Pole::Plus, Pole::Minus] {
            let q = layout.edges[e][pole.index()];
            let other = layout.edges[e][1 - pole.index()];

            let mut s = single(n, &[q]);
            run(&oracle, &mut s);
            let sign = if e == 1 { -1.0 } else { 1.0 };
            let target = if e == 1 { other } else { q };
            assert_eq!(s.len(), 1);
            let mut b = Basis::zero(n);
            b.set(target, true);
            assert!((s.amplitude(&b) - Complex64::new(sign, 0.0)).norm() < 1e-15);

            let mut s = single(n, &[q]);
            run(&coin, &mut s);
            assert_eq!(only_basis(&s), expected_bits(n, &[other]));
        }
    }
}

fn test_graphs() -> Vec<(&'static str, Graph)> {
    vec![
        ("path-3", path(3)),
        ("star-2", star(2)),
        ("star-3", star(3)),
        ("star-4", star(4)),
        ("triangle", cycle(3)),
        ("k4", complete(4)),
        ("starified-triangle", starify(&cycle(3)).graph),
    ]
}

#[test]
fn compiled_step_matches_the_walk() {
    for (name, g) in test_graphs() {
        let p = PolarityMap::greedy(&g);
        for marked in [vec![], vec![0], vec![g.edge_count() - 1]] {
            let c = compile_step(&g, &p, &marked).unwrap();
            let w = Walk::search_walk(&g, &p, marked.clone()).unwrap();
            let r = verify_step(&c, &w).unwrap();
            assert!(r.passes(EQUIV_TOL), "{name} {marked:?}: {r:?}");
            assert!(r.max_support <= 4 * g.edge_count(), "{name}: {r:?}");
        }
    }
}

#[test]
fn compiled_step_matches_under_shuffled_enumeration() {
    for (name, g) in test_graphs() {
        let p = PolarityMap::greedy(&g);
        let w = Walk::search_walk(&g, &p, [0]).unwrap();
        for seed in 0..5 {
            let layout = build_layout_with(&g, &p, EdgeOrder::Shuffled(seed)).unwrap();
            let c = compile_step_with_layout(layout, &[0]).unwrap();
            let r = verify_step(&c, &w).unwrap();
            assert!(r.passes(EQUIV_TOL), "{name} seed={seed}: {r:?}");
        }
    }
}

fn node_qubits_clear(s: &SparseState, layout: &QubitLayout) -> bool {
    let edge_qubits = 2 * layout.edge_count();
    s.dump()
        .iter()
        .all(|e| e.basis[edge_qubits..].chars().all(|c| c == '0'))
}

#[test]
fn ancillas_return_to_zero() {
    for (name, g) in test_graphs() {
        let c = compile_step(&g, &PolarityMap::greedy(&g), &[0]).unwrap();
        let mut s = SparseState::init_walk_superposition(&c.layout);
        for _ in 0..3 {
            s.run(&c).unwrap();
            assert!(node_qubits_clear(&s, &c.layout), "{name}");
        }
    }
}

#[test]
fn random_subspace_states_commute_with_projection() {
    let mut rng = seeded_rng(11);
    for (name, g) in test_graphs() {
        let p = PolarityMap::greedy(&g);
        let c = compile_step(&g, &p, &[0]).unwrap();
        let w = Walk::search_walk(&g, &p, [0]).unwrap();
        for _ in 0..10 {
            let amps: Vec<[Complex64; 2]> = (0..g.edge_count())
                .map(|_| {
                    [0, 1].map(|_| {
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    })
                })
                .collect();
            let norm = amps
                .iter()
                .flatten()
                .map(|a| a.norm_sqr())
                .sum::<f64>()
                .sqrt();
            let state = WalkState::from_amplitudes(
                amps.iter().map(|[a, b]| [a / norm, b / norm]).collect(),
            );
            let mut sparse = SparseState::from_walk_state(&state, &c.layout);
            sparse.run(&c).unwrap();
            let got = sparse.project_to_walk_state(&c.layout).unwrap();
            let mut want = state.clone();
            w.step(&mut want).unwrap();
            assert!(got.max_deviation(&want) < EQUIV_TOL, "{name}");
        }
    }
}

#[test]
fn compiled_star_reproduces_the_sweep() {
    let g = star(4);
    let p = PolarityMap::greedy(&g);
    let c = compile_step(&g, &p, &[0]).unwrap();
    let w = Walk::search_walk(&g, &p, [0]).unwrap();
    let sweep = w.sweep(8).unwrap();
    let mut s = SparseState::init_walk_superposition(&c.layout);
    for t in 0..=8 {
        let state = s.project_to_walk_state(&c.layout).unwrap();
        assert!(
            (state.probability_of(&[0]) - sweep.probabilities[t]).abs() < EQUIV_TOL,
            "t={t}"
        );
        s.run(&c).unwrap();
    }
}

#[test]
fn measured_edge_frequency_matches_born_rule() {
    let g = star(4);
    let p = PolarityMap::greedy(&g);
    let c = compile_step(&g, &p, &[0]).unwrap();
    let mut s = SparseState::init_walk_superposition(&c.layout);
    s.run(&c).unwrap();
    let prob = s
        .project_to_walk_state(&c.layout)
        .unwrap()
        .probability_of(&[0]);
    let trials = 10_000;
    let hits = (0..trials)
        .filter(|&seed| s.measure_edge(&c.layout, seed).unwrap() == 0)
        .count();
    let freq = hits as f64 / trials as f64;
    let sigma = (prob * (1.0 - prob) / trials as f64).sqrt();
    assert!((freq - prob).abs() <= 3.0 * sigma, "freq={freq} p={prob}");
}

#[test]
fn random_graphs_compile_to_local_circuits() {
    let mut rng = seeded_rng(5);
    for _ in 0..40 {
        let n = rng.random_range(2..24);
        let extra = rng.random_range(0..2 * n);
        let g = random_connected(n, extra, &mut rng);
        let c = compile_step(&g, &PolarityMap::greedy(&g), &[0]).unwrap();
        let report = locality_audit(&c);
        assert!(report.is_local(), "{report:?}");
        assert!(report.bound_holds(), "{:?}", report.node_costs);
    }
}

#[test]
fn coin_and_oracle_choice_is_respected_by_verify() {
    let g = star(3);
    let p = PolarityMap::greedy(&g);
    let c = compile_step(&g, &p, &[0]).unwrap();
    let wrong = Walk::new(&g, &p, CoinSpec::identity(), OracleSpec::marking([0])).unwrap();
    let r = verify_step(&c, &wrong).unwrap();
    assert!(!r.passes(EQUIV_TOL));
}

#[test]
fn json_round_trip_preserves_behavior() {
    let g = starify(&cycle(3)).graph;
    let p = PolarityMap::greedy(&g);
    let c = compile_step(&g, &p, &[2]).unwrap();
    let back = Circuit::from_json(&c.to_json()).unwrap();
    let w = Walk::search_walk(&g, &p, [2]).unwrap();
    assert!(verify_step(&back, &w).unwrap().passes(EQUIV_TOL));
}
