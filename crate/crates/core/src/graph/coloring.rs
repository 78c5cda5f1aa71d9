use serde::{Deserialize, Serialize};

use super::{EdgeId, Graph, GraphError, NodeId};

/// A proper node coloring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring(Vec<usize>);

impl Coloring {
    /// Validates that `colors` is a proper coloring of `g`.
    pub fn new(g: &Graph, colors: Vec<usize>) -> Result<Self, GraphError> {
        if colors.len() != g.node_count() {
            return Err(GraphError::ColoringLength {
                expected: g.node_count(),
                got: colors.len(),
            });
        }
        for (edge, &(u, v)) in g.edges().iter().enumerate() {
            if colors[u] == colors[v] {
                return Err(GraphError::ImproperColoring {
                    edge,
                    u,
                    v,
                    color: colors[u],
                });
            }
        }
        Ok(Coloring(colors))
    }

    pub fn colors(&self) -> &[usize] {
        &self.0
    }

    pub fn color(&self, u: NodeId) -> usize {
        self.0[u]
    }

    pub fn color_count(&self) -> usize {
        self.0.iter().max().map_or(0, |&c| c + 1)
    }
}

/// First-fit greedy coloring, visiting nodes in ascending id order.
pub fn greedy_coloring(g: &Graph) -> Coloring {
    let mut colors: Vec<Option<usize>> = vec![None; g.node_count()];
    let mut taken = Vec::new();
    for u in 0..g.node_count() {
        taken.clear();
        taken.resize(g.degree(u) + 1, false);
        for &(v, _) in g.neighbors(u) {
            if let Some(c) = colors[v] {
                if c < taken.len() {
                    taken[c] = true;
                }
            }
        }
        colors[u] = taken.iter().position(|&t| !t);
    }
    Coloring(
        colors
            .into_iter()
            .map(|c| c.expect("every node visited"))
            .collect(),
    )
}

/// Component of an edge's amplitude pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pole {
    Plus,
    Minus,
}

impl Pole {
    /// 0 for `Plus`, 1 for `Minus`; the slot in an amplitude pair.
    pub fn index(self) -> usize {
        match self {
            Pole::Plus => 0,
            Pole::Minus => 1,
        }
    }
}

/// Edge polarity: for each edge, the endpoint that holds the `+` pole. A
/// node scatters the `+` amplitude of the edges whose `+` pole it holds and
/// the `-` amplitude of all its other edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarityMap {
    plus_node: Vec<NodeId>,
}

impl PolarityMap {
    pub fn new(g: &Graph, plus_node: Vec<NodeId>) -> Result<Self, GraphError> {
        if plus_node.len() != g.edge_count() {
            return Err(GraphError::PolarityLength {
                expected: g.edge_count(),
                got: plus_node.len(),
            });
        }
        for (edge, &node) in plus_node.iter().enumerate() {
            let (u, v) = g.edge(edge);
            if node != u && node != v {
                return Err(GraphError::PolarityNotEndpoint { edge, node });
            }
        }
        Ok(PolarityMap { plus_node })
    }

    /// `+` pole at the endpoint with the larger color.
    pub fn from_coloring(g: &Graph, c: &Coloring) -> Result<Self, GraphError> {
        if c.colors().len() != g.node_count() {
            return Err(GraphError::ColoringLength {
                expected: g.node_count(),
                got: c.colors().len(),
            });
        }
        let mut plus_node = Vec::with_capacity(g.edge_count());
        for (edge, &(u, v)) in g.edges().iter().enumerate() {
            let (cu, cv) = (c.color(u), c.color(v));
            if cu == cv {
                return Err(GraphError::ImproperColoring {
                    edge,
                    u,
                    v,
                    color: cu,
                });
            }
            plus_node.push(if cu > cv { u } else { v });
        }
        Ok(PolarityMap { plus_node })
    }

    /// Greedy coloring followed by [`PolarityMap::from_coloring`].
    pub fn greedy(g: &Graph) -> Self {
        Self::from_coloring(g, &greedy_coloring(g)).expect("greedy coloring is proper")
    }

    pub fn plus_node(&self, e: EdgeId) -> NodeId {
        self.plus_node[e]
    }

    pub fn plus_nodes(&self) -> &[NodeId] {
        &self.plus_node
    }

    /// Which amplitude of edge `e` node `u` scatters. `u` must be an
    /// endpoint of `e`.
    pub fn facing(&self, e: EdgeId, u: NodeId) -> Pole {
        if self.plus_node[e] == u {
            Pole::Plus
        } else {
            Pole::Minus
        }
    }

    pub fn edge_count(&self) -> usize {
        self.plus_node.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{path, star};

    #[test]
    fn greedy_examples() {
        assert_eq!(greedy_coloring(&path(3)).colors(), &[0, 1, 0]);
        assert_eq!(greedy_coloring(&star(3)).colors(), &[0, 1, 1, 1]);
        assert_eq!(greedy_coloring(&path(2)).colors(), &[0, 1]);
    }

    #[test]
    fn plus_pole_toward_higher_color() {
        let k2 = path(2);
        let c = Coloring::new(&k2, vec![0, 1]).unwrap();
        let p = PolarityMap::from_coloring(&k2, &c).unwrap();
        assert_eq!(p.plus_node(0), 1);
        assert_eq!(p.facing(0, 1), Pole::Plus);
        assert_eq!(p.facing(0, 0), Pole::Minus);

        let p3 = path(3);
        let p = PolarityMap::from_coloring(&p3, &greedy_coloring(&p3)).unwrap();
        assert_eq!(p.plus_nodes(), &[1, 1]);
    }

    #[test]
    fn improper_coloring_rejected() {
        let k2 = path(2);
        assert!(Coloring::new(&k2, vec![0, 0]).is_err());
        let bogus = Coloring(vec![0, 0]);
        assert!(matches!(
            PolarityMap::from_coloring(&k2, &bogus),
            Err(GraphError::ImproperColoring { edge: 0, .. })
        ));
    }

    #[test]
    fn explicit_polarity_must_name_an_endpoint() {
        let p3 = path(3);
        assert!(PolarityMap::new(&p3, vec![0, 2]).is_ok());
        assert_eq!(
            PolarityMap::new(&p3, vec![2, 2]),
            Err(GraphError::PolarityNotEndpoint { edge: 0, node: 2 })
        );
        assert!(matches!(
            PolarityMap::new(&p3, vec![0]),
            Err(GraphError::PolarityLength { .. })
        ));
    }
}
