use super::{EdgeId, Graph, NodeId};

/// A graph with one pendant virtual node attached to every original node.
///
/// Real node `u` keeps id `u`; its virtual twin is `real_node_count + u`.
/// Real edges keep their indices; the virtual edge of `u` is
/// `original_edge_count + u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarifiedGraph {
    pub graph: Graph,
    pub real_node_count: usize,
    pub real_edge_count: usize,
}

impl StarifiedGraph {
    pub fn virtual_edge_of(&self, u: NodeId) -> EdgeId {
        assert!(u < self.real_node_count, "node {u} is not a real node");
        self.real_edge_count + u
    }

    pub fn virtual_node_of(&self, u: NodeId) -> NodeId {
        assert!(u < self.real_node_count, "node {u} is not a real node");
        self.real_node_count + u
    }

    pub fn is_virtual_node(&self, u: NodeId) -> bool {
        u >= self.real_node_count
    }

    pub fn is_virtual_edge(&self, e: EdgeId) -> bool {
        e >= self.real_edge_count
    }

    /// The real node whose virtual edge is `e`, if `e` is virtual.
    pub fn node_of_virtual_edge(&self, e: EdgeId) -> Option<NodeId> {
        (self.is_virtual_edge(e) && e < self.graph.edge_count()).then(|| e - self.real_edge_count)
    }
}

pub fn starify(g: &Graph) -> StarifiedGraph {
    let n = g.node_count();
    let mut edges = g.edges().to_vec();
    edges.extend((0..n).map(|u| (u, n + u)));
    StarifiedGraph {
        graph: Graph::new(2 * n, edges).expect("starify preserves validity"),
        real_node_count: n,
        real_edge_count: g.edge_count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, path};

    #[test]
    fn single_edge_becomes_path_of_four() {
        let s = starify(&path(2));
        assert_eq!(s.graph.node_count(), 4);
        assert_eq!(s.graph.edge_count(), 3);
        let mut degrees: Vec<_> = (0..4).map(|u| s.graph.degree(u)).collect();
        degrees.sort();
        assert_eq!(degrees, vec![1, 1, 2, 2]);
    }

    #[test]
    fn triangle_and_complete_counts() {
        let s = starify(&complete(3));
        assert_eq!((s.graph.node_count(), s.graph.edge_count()), (6, 6));
        for n in 3..10 {
            let s = starify(&complete(n));
            assert_eq!(s.graph.edge_count(), n * (n - 1) / 2 + n);
        }
    }

    #[test]
    fn virtual_structure() {
        let g = complete(4);
        let s = starify(&g);
        for u in 0..4 {
            let vn = s.virtual_node_of(u);
            assert!(s.is_virtual_node(vn));
            assert_eq!(s.graph.neighbors(vn), &[(u, s.virtual_edge_of(u))]);
            assert_eq!(s.graph.degree(u), g.degree(u) + 1);
            assert_eq!(s.node_of_virtual_edge(s.virtual_edge_of(u)), Some(u));
        }
        assert_eq!(s.node_of_virtual_edge(0), None);
        assert_eq!(&s.graph.edges()[..g.edge_count()], g.edges());
    }
}
