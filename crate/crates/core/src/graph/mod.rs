//! Finite (q+1)-regular multigraphs standing in for quotients of the
//! Bruhat–Tits tree of PGL₂ by a torsion-free cocompact lattice.
//!
//! Vertices play the role of Γ\G/K and directed edges of Γ\G/I. Each undirected
//! edge k yields the directed edges 2k and 2k+1, so reversal is `e ^ 1`.
//! Self-loops are rejected (they come from torsion); multi-edges are fine.

mod character;
mod geodesic;

pub use character::{EdgeCharacter, TwistParseError};
pub use geodesic::{primitive_decomposition, primitive_geodesics, CycleError, GeodesicClass};

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use num::complex::Complex64;
use num::{BigInt, One, Zero};
use thiserror::Error;

use crate::matrix::IntMatrix;
use crate::padic::is_prime;

pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing `{0}` declaration")]
    Missing(&'static str),
    #[error("q must be at least 2, got {0}")]
    DegreeTooSmall(u64),
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: usize, vertex: String },
    #[error("edge {edge} references unknown vertex {vertex}")]
    DanglingEdge { edge: usize, vertex: String },
    #[error("vertex {vertex} has degree {degree}, expected q+1 = {expected}")]
    NonRegular { vertex: String, degree: usize, expected: u64 },
    #[error("cannot read graph file: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphWarning {
    /// Any regular graph satisfies the combinatorial identities, but only prime
    /// q corresponds to a tree quotient.
    NonPrimeQ(u64),
}

impl fmt::Display for GraphWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphWarning::NonPrimeQ(q) => write!(f, "q = {q} is not prime; no Bruhat-Tits tree interpretation"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicGraph {
    q: u64,
    labels: Vec<String>,
    tail: Vec<usize>,
    head: Vec<usize>,
    out: Vec<Vec<EdgeId>>,
}

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: GeodesicGraph,
    pub warnings: Vec<GraphWarning>,
}

impl GeodesicGraph {
    /// Builds and validates a graph on vertices 0..vertex_count.
    pub fn from_edges(q: u64, vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let labels = (0..vertex_count).map(|v| v.to_string()).collect();
        Self::build(q, labels, edges)
    }

    fn build(q: u64, labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if q < 2 {
            return Err(GraphError::DegreeTooSmall(q));
        }
        let n = labels.len();
        let mut tail = Vec::with_capacity(2 * edges.len());
        let mut head = Vec::with_capacity(2 * edges.len());
        let mut out = vec![Vec::new(); n];
        for (k, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::DanglingEdge { edge: k, vertex: w.to_string() });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { edge: k, vertex: labels[u].clone() });
            }
            tail.extend([u, v]);
            head.extend([v, u]);
            out[u].push(2 * k);
            out[v].push(2 * k + 1);
        }
        for (v, o) in out.iter().enumerate() {
            if o.len() as u64 != q + 1 {
                return Err(GraphError::NonRegular { vertex: labels[v].clone(), degree: o.len(), expected: q + 1 });
            }
        }
        Ok(GeodesicGraph { q, labels, tail, head, out })
    }

    /// Parses the line-oriented graph format:
    ///
    /// ```text
    /// q 2
    /// vertices 4          # a count, or a list of labels
    /// edge 0 1            # one line per undirected edge, repeats allowed
    /// ```
    pub fn parse(text: &str) -> Result<LoadedGraph, GraphError> {
        let mut q: Option<u64> = None;
        let mut labels: Option<Vec<String>> = None;
        let mut raw_edges: Vec<(usize, String, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut tok = content.split_whitespace();
            let key = tok.next().unwrap();
            let rest: Vec<&str> = tok.collect();
            let err = |msg: &str| GraphError::Parse { line, msg: msg.to_string() };
            match key {
                "q" => {
                    let [v] = rest.as_slice() else { return Err(err("expected `q <int>`")) };
                    q = Some(v.parse().map_err(|_| err("q is not a nonnegative integer"))?);
                }
                "vertices" => {
                    let list = match rest.as_slice() {
                        [] => return Err(err("expected a vertex count or labels")),
                        [single] if single.parse::<usize>().is_ok() => {
                            (0..single.parse::<usize>().unwrap()).map(|v| v.to_string()).collect()
                        }
                        many => many.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                    };
                    labels = Some(list);
                }
                "edge" => {
                    let [u, v] = rest.as_slice() else { return Err(err("expected `edge <u> <v>`")) };
                    raw_edges.push((line, u.to_string(), v.to_string()));
                }
                other => return Err(err(&format!("unknown field `{other}`"))),
            }
        }
        let q = q.ok_or(GraphError::Missing("q"))?;
        let labels = labels.ok_or(GraphError::Missing("vertices"))?;
        let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let mut edges = Vec::with_capacity(raw_edges.len());
        for (k, (_, u, v)) in raw_edges.iter().enumerate() {
            let lookup = |w: &String| {
                index
                    .get(w.as_str())
                    .copied()
                    .ok_or_else(|| GraphError::DanglingEdge { edge: k, vertex: w.clone() })
            };
            edges.push((lookup(u)?, lookup(v)?));
        }
        let graph = Self::build(q, labels, &edges)?;
        let warnings = if is_prime(q) { vec![] } else { vec![GraphWarning::NonPrimeQ(q)] };
        Ok(LoadedGraph { graph, warnings })
    }

    pub fn load(path: &Path) -> Result<LoadedGraph, GraphError> {
        let text = std::fs::read_to_string(path).map_err(|e| GraphError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn directed_edge_count(&self) -> usize {
        self.tail.len()
    }

    pub fn undirected_edge_count(&self) -> usize {
        self.tail.len() / 2
    }

    pub fn tail(&self, e: EdgeId) -> usize {
        self.tail[e]
    }

    pub fn head(&self, e: EdgeId) -> usize {
        self.head[e]
    }

    pub fn rev(&self, e: EdgeId) -> EdgeId {
        e ^ 1
    }

    pub fn out_edges(&self, v: usize) -> &[EdgeId] {
        &self.out[v]
    }

    /// Non-backtracking continuations f of e: tail(f) = head(e), f ≠ rev(e).
    pub fn successors(&self, e: EdgeId) -> impl Iterator<Item = EdgeId> + '_ {
        let r = self.rev(e);
        self.out[self.head[e]].iter().copied().filter(move |&f| f != r)
    }

    pub fn is_successor(&self, e: EdgeId, f: EdgeId) -> bool {
        self.head[e] == self.tail[f] && f != self.rev(e)
    }

    pub fn adjacency_matrix(&self) -> IntMatrix {
        let n = self.vertex_count();
        let mut a = IntMatrix::zeros(n, n);
        for e in 0..self.directed_edge_count() {
            let (u, v) = (self.tail[e], self.head[e]);
            a.set(u, v, a.get(u, v) + BigInt::one());
        }
        a
    }

    /// The non-backtracking edge matrix: T[e, f] = 1 iff f continues e without backtracking.
    pub fn hashimoto_matrix(&self) -> IntMatrix {
        let m = self.directed_edge_count();
        let mut t = IntMatrix::zeros(m, m);
        for e in 0..m {
            for f in self.successors(e) {
                t.set(e, f, BigInt::one());
            }
        }
        t
    }

    /// tr(T^m) for m = 1..=max_len, by repeated sparse right-multiplication.
    pub fn closed_geodesic_counts(&self, max_len: usize) -> Vec<BigInt> {
        self.transfer_traces(max_len, |_| BigInt::one())
    }

    /// tr(T^m): the number of based closed non-backtracking walks of length m.
    pub fn closed_geodesic_count(&self, m: usize) -> BigInt {
        assert!(m >= 1);
        self.closed_geodesic_counts(m).pop().unwrap()
    }

    /// tr(T_ω^m) for the transfer matrix with row e scaled by ω(e).
    pub fn twisted_transfer_traces(&self, omega: &EdgeCharacter, max_len: usize) -> Vec<Complex64> {
        self.transfer_traces(max_len, |e| omega.weight(e))
    }

    fn transfer_traces<T>(&self, max_len: usize, weight: impl Fn(EdgeId) -> T) -> Vec<T>
    where
        T: Clone + Zero + std::ops::Mul<Output = T>,
    {
        let m = self.directed_edge_count();
        let w: Vec<T> = (0..m).map(&weight).collect();
        // power[i][f] = (T^k)[i][f]
        let mut power: Vec<Vec<T>> = (0..m)
            .map(|e| {
                let mut row = vec![T::zero(); m];
                for f in self.successors(e) {
                    row[f] = w[e].clone();
                }
                row
            })
            .collect();
        let mut traces = Vec::with_capacity(max_len);
        for k in 1..=max_len {
            if k > 1 {
                power = power
                    .iter()
                    .map(|row| {
                        let mut next = vec![T::zero(); m];
                        for (e, x) in row.iter().enumerate() {
                            if x.is_zero() {
                                continue;
                            }
                            for f in self.successors(e) {
                                next[f] = next[f].clone() + x.clone() * w[e].clone();
                            }
                        }
                        next
                    })
                    .collect();
            }
            traces.push((0..m).fold(T::zero(), |acc, i| acc + power[i][i].clone()));
        }
        traces
    }

    /// Length of the shortest closed non-backtracking walk, if one exists within `max_len`.
    pub fn girth(&self, max_len: usize) -> Option<usize> {
        self.closed_geodesic_counts(max_len)
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| i + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const K4: &str = "q 2\nvertices 4\nedge 0 1\nedge 0 2\nedge 0 3\nedge 1 2\nedge 1 3\nedge 2 3\n";

    fn petersen() -> GeodesicGraph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        GeodesicGraph::from_edges(2, 10, &edges).unwrap()
    }

    #[test]
    fn load_examples() {
        let g = GeodesicGraph::parse(K4).unwrap().graph;
        assert_eq!((g.vertex_count(), g.directed_edge_count()), (4, 12));
        let p = petersen();
        assert_eq!((p.vertex_count(), p.directed_edge_count()), (10, 30));
        let path = "q 2\nvertices 3\nedge 0 1\nedge 1 2\n";
        assert!(matches!(GeodesicGraph::parse(path), Err(GraphError::NonRegular { degree: 1, .. })));
    }

    #[test]
    fn load_diagnostics() {
        let self_loop = "q 1\nvertices 1\nedge 0 0\n";
        assert_eq!(GeodesicGraph::parse(self_loop).unwrap_err(), GraphError::DegreeTooSmall(1));
        let self_loop = "q 2\nvertices 2\nedge 0 0\nedge 0 1\nedge 1 1\n";
        assert!(matches!(GeodesicGraph::parse(self_loop), Err(GraphError::SelfLoop { edge: 0, .. })));
        let dangling = "q 2\nvertices 2\nedge 0 5\n";
        assert!(matches!(GeodesicGraph::parse(dangling), Err(GraphError::DanglingEdge { .. })));
        assert!(matches!(GeodesicGraph::parse("vertices 2\n"), Err(GraphError::Missing("q"))));
        assert!(matches!(GeodesicGraph::parse("q two\n"), Err(GraphError::Parse { line: 1, .. })));
        assert!(matches!(GeodesicGraph::parse("q 2\nfoo\n"), Err(GraphError::Parse { line: 2, .. })));
    }

    #[test]
    fn non_prime_degree_is_a_warning() {
        // K5 is 4-regular, q = 3 prime; K6 is 5-regular, q = 4 not prime.
        let mut text = String::from("q 4\nvertices 6\n");
        for i in 0..6 {
            for j in i + 1..6 {
                text.push_str(&format!("edge {i} {j}\n"));
            }
        }
        let loaded = GeodesicGraph::parse(&text).unwrap();
        assert_eq!(loaded.warnings, vec![GraphWarning::NonPrimeQ(4)]);
    }

    #[test]
    fn labels_and_multi_edges() {
        // theta graph: two vertices joined by three parallel edges
        let theta = "q 2\nvertices a b\nedge a b\nedge a b\nedge b a\n";
        let g = GeodesicGraph::parse(theta).unwrap().graph;
        assert_eq!(g.label(1), "b");
        assert_eq!(g.directed_edge_count(), 6);
        assert_eq!(g.closed_geodesic_count(1), BigInt::zero());
        // out along one edge, back along another: 6 starting edges, 2 returns each
        assert_eq!(g.closed_geodesic_count(2), BigInt::from(12));
    }

    #[test]
    fn involution_and_regularity() {
        let g = petersen();
        for e in 0..g.directed_edge_count() {
            assert_eq!(g.rev(g.rev(e)), e);
            assert_eq!(g.head(g.rev(e)), g.tail(e));
            assert_eq!(g.successors(e).count() as u64, g.q());
        }
    }

    #[test]
    fn hashimoto_examples() {
        let g = GeodesicGraph::parse(K4).unwrap().graph;
        let t = g.hashimoto_matrix();
        assert_eq!(t.rows(), 12);
        for i in 0..12 {
            assert_eq!(t.row(i).iter().sum::<BigInt>(), BigInt::from(2));
        }
        assert!(t.trace().is_zero());
        assert!(t.pow(2).trace().is_zero());
        // sparse powering agrees with dense matrix powers
        let counts = g.closed_geodesic_counts(6);
        for (k, c) in counts.iter().enumerate() {
            assert_eq!(*c, t.pow(k as u32 + 1).trace());
        }
    }

    #[test]
    fn k4_closed_walk_counts() {
        let g = GeodesicGraph::parse(K4).unwrap().graph;
        assert_eq!(g.closed_geodesic_count(1), BigInt::zero());
        assert_eq!(g.closed_geodesic_count(3), BigInt::from(24));
        assert_eq!(g.closed_geodesic_count(4), BigInt::from(24));
        assert_eq!(g.girth(10), Some(3));
        assert_eq!(petersen().girth(10), Some(5));
    }
}
