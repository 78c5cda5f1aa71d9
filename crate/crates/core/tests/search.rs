use graphwalk_core::graph::{complete, star, starify, PolarityMap};
use graphwalk_core::spectral::{
    complete_graph_report, numeric_star_eigenvalues, reduced_vs_full, reduced_vs_full_with,
    star_center_polarity, star_predicted_prob, star_spectrum, StarReducedState,
};
use graphwalk_core::walk::{Walk, WalkError, WalkState};

fn star_walk(m: usize) -> (graphwalk_core::graph::Graph, PolarityMap) {
    (star(m), star_center_polarity(m).unwrap())
}

#[test]
fn star_64_search_near_optimal_time() {
    let (g, p) = star_walk(64);
    let w = Walk::search_walk(&g, &p, [0]).unwrap();
    let t = star_spectrum(64).unwrap().t_opt.round() as usize;
    assert_eq!(t, 9);
    let sampler = w.sampler(t);
    let mut rng = graphwalk_core::walk::seeded_rng(2024);
    let trials = 10_000;
    let hits = (0..trials)
        .filter(|_| sampler.sample(&mut rng) == 0)
        .count();
    let freq = hits as f64 / trials as f64;
    assert!(freq >= 0.9, "freq={freq}");
    assert!(w.search(t, 7) == w.search(t, 7));
}

#[test]
fn zero_steps_measure_uniformly() {
    let g = star(8);
    let w = Walk::search_walk(&g, &PolarityMap::greedy(&g), [0]).unwrap();
    let trials = 16_000;
    let mut counts = [0usize; 8];
    for seed in 0..trials {
        counts[w.search(0, seed)] += 1;
    }
    let p = 1.0 / 8.0;
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    for c in counts {
        assert!(
            (c as f64 / trials as f64 - p).abs() <= 4.0 * sigma,
            "{counts:?}"
        );
    }
}

#[test]
fn guaranteed_search_mean_calls() {
    let g = star(16);
    let w = Walk::search_walk(&g, &PolarityMap::greedy(&g), [0]).unwrap();
    let sweep = w.sweep(10).unwrap();
    let runs = 10_000u64;
    let mut total = 0;
    for seed in 0..runs {
        let out = w.guaranteed_search(sweep.t_star, seed, 1_000_000).unwrap();
        assert_eq!(out.edge, 0);
        total += out.calls;
    }
    let mean = total as f64 / runs as f64;
    let expected = 1.0 / sweep.p_star;
    assert!(
        (mean - expected).abs() / expected < 0.1,
        "mean={mean} expected={expected}"
    );
}

#[test]
fn guaranteed_search_errors() {
    let g = star(64);
    let unmarked = Walk::search_walk(&g, &PolarityMap::greedy(&g), []).unwrap();
    assert_eq!(
        unmarked.guaranteed_search(3, 0, 10),
        Err(WalkError::NoMarkedEdge)
    );
    let w = Walk::search_walk(&g, &PolarityMap::greedy(&g), [0]).unwrap();
    let outcomes: Vec<_> = (0..100).map(|s| w.guaranteed_search(0, s, 1)).collect();
    let capped = outcomes
        .iter()
        .filter(|r| **r == Err(WalkError::CallCapExceeded { cap: 1 }))
        .count();
    assert!(capped > 50, "{capped}");
}

#[test]
fn reduced_model_tracks_the_full_walk() {
    for m in [2, 3, 5, 16, 64, 257] {
        let dev = reduced_vs_full(m, 200).unwrap();
        assert!(dev < 1e-12, "m={m} dev={dev}");
    }
    let g = star(16);
    let greedy = PolarityMap::greedy(&g);
    assert!(reduced_vs_full_with(16, 50, &greedy).unwrap() > 1e-3);
    let centered = star_center_polarity(16).unwrap();
    let a = Walk::search_walk(&g, &greedy, [0])
        .unwrap()
        .sweep(50)
        .unwrap();
    let b = Walk::search_walk(&g, &centered, [0])
        .unwrap()
        .sweep(50)
        .unwrap();
    for (x, y) in a.probabilities.iter().zip(&b.probabilities) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn reduced_model_preserves_norm() {
    let mut s = StarReducedState::initial(100).unwrap();
    for _ in 0..1000 {
        s = s.step();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }
    assert_eq!(s.t, 1000);
}

#[test]
fn large_star_follows_the_sine_law() {
    let (g, p) = star_walk(400);
    let w = Walk::search_walk(&g, &p, [0]).unwrap();
    let spectrum = star_spectrum(400).unwrap();
    let horizon = (2.0 * spectrum.t_opt).ceil() as usize;
    let sweep = w.sweep(horizon).unwrap();
    for (t, &prob) in sweep.probabilities.iter().enumerate() {
        let predicted = star_predicted_prob(400, t as f64).unwrap();
        assert!(
            (prob - predicted).abs() < 0.05,
            "t={t}: {prob} vs {predicted}"
        );
    }
}

#[test]
fn closed_form_spectrum_matches_numeric_eigenvalues() {
    for m in [2, 3, 10, 100, 10_000] {
        let s = star_spectrum(m).unwrap();
        let numeric = numeric_star_eigenvalues(m).unwrap();
        for (a, b) in s.eigenvalues.iter().zip(&numeric) {
            assert!((a - b).norm() < 1e-10, "m={m}: {a} vs {b}");
        }
        assert!((s.eigenvalues[1].norm() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn star_optimal_time_approaches_the_asymptote() {
    let first_peak = |m: usize| {
        let (g, p) = star_walk(m);
        let s = star_spectrum(m).unwrap();
        let w = Walk::search_walk(&g, &p, [0]).unwrap();
        let sweep = w.sweep((1.5 * s.t_asymptotic).ceil() as usize).unwrap();
        (sweep.t_star as f64, s.t_asymptotic, sweep.p_star)
    };
    let mut previous = f64::INFINITY;
    for m in [64, 256, 1024, 4096] {
        let (t, asym, p) = first_peak(m);
        assert!((t - asym).abs() < 1.0, "m={m}: T*={t} vs {asym}");
        let err = (t - asym).abs() / asym;
        assert!(err < previous, "m={m}: {err} >= {previous}");
        previous = err;
        assert!(p > 0.98);
    }
    for m in [128, 256, 512, 1024, 2048] {
        let (t, asym, _) = first_peak(m);
        assert!((t - asym).abs() / asym < 0.05, "m={m}");
    }
}

#[test]
fn complete_graph_node_search() {
    let r = complete_graph_report(8, 16).unwrap();
    assert_eq!(r.t_star, 7);
    assert!((r.p_star - 0.8271).abs() < 1e-3, "{}", r.p_star);
    assert_eq!(r.edge_count, 28 + 8);
    let predicted = r.predicted_t.unwrap();
    assert!((predicted - std::f64::consts::PI * 2.0).abs() < 1e-12);

    let s = starify(&complete(8));
    let p = PolarityMap::greedy(&s.graph);
    for u in 0..8 {
        let w = Walk::search_walk(&s.graph, &p, [s.virtual_edge_of(u)]).unwrap();
        let sweep = w.sweep(16).unwrap();
        assert_eq!(sweep.t_star, 7);
        assert!((sweep.p_star - r.p_star).abs() < 1e-9);
    }
}

#[test]
fn walk_state_time_counts_steps() {
    let g = star(5);
    let w = Walk::search_walk(&g, &PolarityMap::greedy(&g), [0]).unwrap();
    let mut s = WalkState::diagonal(&g);
    for _ in 0..4 {
        w.step(&mut s).unwrap();
    }
    assert_eq!(s.time(), 4);
    assert!(w.evolve(4).max_deviation(&s) < 1e-15);
}
