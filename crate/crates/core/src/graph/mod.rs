//! Combinatorial graphs and p-labelled graphs.

mod chordal;
mod cliques;
mod pgraph;

pub use chordal::{chordal_structure, ChordalStructure, NotChordal, PastingTree};
pub use cliques::{clique_polynomial, is_triangle_free, maximal_cliques};
pub use pgraph::{
    label_ok, min_label_valuation, parse_pgraph, parse_pgraph_with, ParseError, ParseErrorKind, PGraph,
    DEFAULT_P, DEFAULT_PRECISION,
};

use serde::Serialize;
use thiserror::Error;

/// Largest vertex count supported; adjacency is stored as 64-bit masks.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(String),
    #[error("antiparallel edges between {0} and {1}")]
    Antiparallel(String, String),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("too many vertices ({0}, limit {MAX_VERTICES})")]
    TooLarge(usize),
}

/// A combinatorial graph: ordered vertex names, oriented edges, no loops and
/// no antiparallel pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
    #[serde(skip)]
    adj: Vec<u64>,
}

impl Graph {
    pub fn new(vertices: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let n = vertices.len();
        if n > MAX_VERTICES {
            return Err(GraphError::TooLarge(n));
        }
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut adj = vec![0u64; n];
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in &edges {
            assert!(a < n && b < n, "edge index out of range");
            if a == b {
                return Err(GraphError::Loop(vertices[a].clone()));
            }
            if seen.contains(&(b, a)) {
                return Err(GraphError::Antiparallel(vertices[b].clone(), vertices[a].clone()));
            }
            if !seen.insert((a, b)) {
                return Err(GraphError::DuplicateEdge(vertices[a].clone(), vertices[b].clone()));
            }
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Ok(Graph {
            vertices,
            edges,
            adj,
        })
    }

    /// Vertices named x1..xn.
    pub fn standard_names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("x{i}")).collect()
    }

    /// Build from unordered pairs on x1..xn, oriented from the smaller index.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let edges = pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        Graph::new(Self::standard_names(n), edges).expect("valid pair list")
    }

    pub fn edgeless(n: usize) -> Self {
        Self::from_pairs(n, &[])
    }

    pub fn complete(n: usize) -> Self {
        let pairs: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::from_pairs(n, &pairs)
    }

    pub fn cycle(n: usize) -> Self {
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(Self::standard_names(n), edges).expect("cycle")
    }

    pub fn path(n: usize) -> Self {
        let pairs: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Self::from_pairs(n, &pairs)
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let pairs: Vec<_> = (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j))).collect();
        Self::from_pairs(a + b, &pairs)
    }

    /// Every labelled graph on x1..xn, indexed by a bitmask over pairs i<j.
    pub fn all_on(n: usize) -> impl Iterator<Item = Graph> {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let m = pairs.len();
        (0u64..(1u64 << m)).map(move |mask| {
            let chosen: Vec<_> = (0..m)
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| pairs[b])
                .collect();
            Graph::from_pairs(n, &chosen)
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    /// Neighbourhood as a bitmask.
    pub fn neighbors_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n()).filter(|&u| self.adjacent(v, u)).collect()
    }

    /// Index of the edge joining a and b, with `true` when it is stored as (b, a).
    pub fn edge_between(&self, a: usize, b: usize) -> Option<(usize, bool)> {
        self.edges.iter().enumerate().find_map(|(i, &e)| {
            if e == (a, b) {
                Some((i, false))
            } else if e == (b, a) {
                Some((i, true))
            } else {
                None
            }
        })
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        self.edges.len() == n * n.saturating_sub(1) / 2
    }

    /// Connected components, each in increasing vertex order.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut members = Vec::new();
            comp[s] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for u in self.neighbors(v) {
                    if comp[u] == usize::MAX {
                        comp[u] = id;
                        stack.push(u);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Induced subgraph on the given vertex indices (kept in the given order).
    pub fn induced(&self, subset: &[usize]) -> Graph {
        let pos = |v: usize| subset.iter().position(|&s| s == v);
        let edges = self
            .edges
            .iter()
            .filter_map(|&(a, b)| Some((pos(a)?, pos(b)?)))
            .collect();
        let names = subset.iter().map(|&v| self.vertices[v].clone()).collect();
        Graph::new(names, edges).expect("induced subgraph of a valid graph")
    }

    /// Non-adjacent distinct pairs, oriented by vertex order.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.adjacent(i, j))
            .collect()
    }
}

/// Same vertices; an edge for every non-adjacent pair.
pub fn opposite_graph(g: &Graph) -> Graph {
    Graph::new(g.vertices.clone(), g.non_edges()).expect("complement is combinatorial")
}

/// Full subgraph on the named vertices, in the graph's vertex order.
pub fn full_subgraph<S: AsRef<str>>(g: &Graph, names: &[S]) -> Result<Graph, GraphError> {
    let mut idx = Vec::new();
    for s in names {
        let i = g
            .vertex_index(s.as_ref())
            .ok_or_else(|| GraphError::UnknownVertex(s.as_ref().to_string()))?;
        if !idx.contains(&i) {
            idx.push(i);
        }
    }
    idx.sort_unstable();
    Ok(g.induced(&idx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn unordered(g: &Graph) -> BTreeSet<(usize, usize)> {
        g.edges().iter().map(|&(a, b)| (a.min(b), a.max(b))).collect()
    }

    #[test]
    fn validation() {
        let names = Graph::standard_names(2);
        assert!(matches!(Graph::new(names.clone(), vec![(0, 0)]), Err(GraphError::Loop(_))));
        assert!(matches!(
            Graph::new(names.clone(), vec![(0, 1), (1, 0)]),
            Err(GraphError::Antiparallel(..))
        ));
        assert!(matches!(
            Graph::new(names, vec![(0, 1), (0, 1)]),
            Err(GraphError::DuplicateEdge(..))
        ));
    }

    #[test]
    fn opposite_examples() {
        assert!(opposite_graph(&Graph::complete(3)).edges().is_empty());
        assert!(opposite_graph(&Graph::edgeless(3)).is_complete());
        let diag = opposite_graph(&Graph::cycle(4));
        assert_eq!(unordered(&diag), [(0, 2), (1, 3)].into_iter().collect());
    }

    #[test]
    fn opposite_is_involution() {
        for n in 0..=5 {
            for g in Graph::all_on(n) {
                assert_eq!(unordered(&opposite_graph(&opposite_graph(&g))), unordered(&g));
            }
        }
    }

    #[test]
    fn full_subgraphs() {
        let k4 = Graph::complete(4);
        assert!(full_subgraph(&k4, &["x1", "x2", "x4"]).unwrap().is_complete());
        let c4 = Graph::cycle(4);
        assert_eq!(full_subgraph(&c4, &["x1", "x2"]).unwrap().edges().len(), 1);
        assert!(full_subgraph(&c4, &["x1", "x3"]).unwrap().edges().is_empty());
        assert_eq!(
            full_subgraph(&c4, &["x9"]),
            Err(GraphError::UnknownVertex("x9".into()))
        );
    }

    #[test]
    fn components_split() {
        let g = Graph::from_pairs(5, &[(0, 1), (3, 4)]);
        assert_eq!(g.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
    }
}
