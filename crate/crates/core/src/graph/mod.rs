//! Simple undirected graphs and the combinatorial data derived from them.
//!
//! A [`Graph`] is always connected and loop-free: every characterization in
//! this crate assumes connectedness, so the constructor rejects anything else
//! instead of letting each downstream routine re-check it.

mod bipartite;
mod distance;

use std::collections::VecDeque;
use std::fmt::Write as _;

use nalgebra::DMatrix;

pub use bipartite::{bipartition, halved_graphs, semiregular_profile, Bipartition, HalvedPair, Side};
pub use distance::{distance_data, girth, DistanceData};

use crate::error::{Error, Result};

/// Connected simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Normalised edges `(u, v)` with `u < v`, sorted and deduplicated.
    edges: Vec<(usize, usize)>,
    /// Sorted neighbour lists.
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph on `0..n` from an edge list.
    ///
    /// Duplicate edges (in either orientation) collapse. A loop is reported
    /// as [`Error::LoopEdge`] with `line` set to its 1-based position in the
    /// input sequence.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut normalized = Vec::new();
        for (pos, (u, v)) in edges.into_iter().enumerate() {
            if u == v {
                return Err(Error::LoopEdge {
                    line: pos + 1,
                    vertex: u,
                });
            }
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange(u, v));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        normalized.dedup();

        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in &normalized {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }

        let graph = Graph {
            n,
            edges: normalized,
            neighbors,
        };
        if let Some(unreached) = graph.first_unreachable() {
            return Err(Error::Disconnected { unreached });
        }
        Ok(graph)
    }

    fn first_unreachable(&self) -> Option<usize> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &w in &self.neighbors[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.iter().position(|&s| !s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.neighbors[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.neighbors[u].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].binary_search(&v).is_ok()
    }

    /// Common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        self.regularity_witness().err()
    }

    /// `Ok((u, v))` names two vertices of different degree; `Err(k)` means
    /// the graph is `k`-regular.
    pub(crate) fn regularity_witness(&self) -> std::result::Result<(usize, usize), usize> {
        let k = self.degree(0);
        match (1..self.n).find(|&v| self.degree(v) != k) {
            Some(v) => Ok((0, v)),
            None => Err(k),
        }
    }

    /// Ensures the graph is regular, returning its degree.
    pub fn require_regular(&self) -> Result<usize> {
        match self.regularity_witness() {
            Err(k) => Ok(k),
            Ok((u, v)) => Err(Error::NotRegular {
                u,
                deg_u: self.degree(u),
                v,
                deg_v: self.degree(v),
            }),
        }
    }

    /// Dense 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        a
    }

    /// Graph on `vertices` (relabelled to `0..vertices.len()` in the given
    /// order) whose edges are the pairs satisfying `adjacent`.
    pub fn from_relation(
        vertices: &[usize],
        mut adjacent: impl FnMut(usize, usize) -> bool,
    ) -> Result<Graph> {
        let mut edges = Vec::new();
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if adjacent(a, b) {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(vertices.len(), edges)
    }
}

/// Parses the whitespace-separated `u v` edge-list format.
///
/// `#` starts a comment, blank lines are skipped, `n` is one more than the
/// largest id mentioned. Missing ids therefore become isolated vertices and
/// the graph is rejected as disconnected.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut max_id = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let malformed = || Error::MalformedLine {
            line,
            content: raw.to_string(),
        };
        let mut tokens = body.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(malformed());
        };
        let u: usize = a.parse().map_err(|_| malformed())?;
        let v: usize = b.parse().map_err(|_| malformed())?;
        if u == v {
            return Err(Error::LoopEdge { line, vertex: u });
        }
        max_id = max_id.max(Some(u.max(v)));
        edges.push((u, v));
    }
    let n = max_id.map_or(0, |m| m + 1);
    Graph::from_edges(n, edges)
}

/// Renders a graph in the format read by [`parse_edge_list`].
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# n={} m={}", g.n(), g.edge_count());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}
