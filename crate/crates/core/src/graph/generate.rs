use rand::Rng;

use super::{Graph, NodeId};

/// Path `0 - 1 - ... - (n-1)`. Panics if `n < 2`.
pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i)).collect()).expect("path is valid")
}

/// Cycle on `n >= 3` nodes.
pub fn cycle(n: usize) -> Graph {
    let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    edges.push((n - 1, 0));
    Graph::new(n, edges).expect("cycle is valid")
}

/// Star with `m` edges: center 0, leaves `1..=m`, edge `i` is `(0, i+1)`.
pub fn star(m: usize) -> Graph {
    Graph::new(m + 1, (1..=m).map(|i| (0, i)).collect()).expect("star is valid")
}

/// Complete graph `K_n`, edges in lexicographic order.
pub fn complete(n: usize) -> Graph {
    let edges = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    Graph::new(n, edges).expect("complete graph is valid")
}

/// Random connected graph: a random spanning tree plus up to `extra` random
/// additional edges (duplicates and loops are skipped).
pub fn random_connected<R: Rng + ?Sized>(n: usize, extra: usize, rng: &mut R) -> Graph {
    assert!(n >= 2, "need at least two nodes");
    let mut edges: Vec<(NodeId, NodeId)> = (1..n).map(|i| (rng.random_range(0..i), i)).collect();
    let mut seen: std::collections::HashSet<(NodeId, NodeId)> =
        edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    for _ in 0..extra {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v && seen.insert((u.min(v), u.max(v))) {
            edges.push((u, v));
        }
    }
    Graph::new(n, edges).expect("spanning tree keeps the graph connected")
}
