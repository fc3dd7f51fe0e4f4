//! Closed geodesics as cyclic words of directed edges.

use thiserror::Error;

use super::{EdgeId, GeodesicGraph};
use crate::cyclic::{canonical_rotation, minimal_period};

/// A closed non-backtracking cycle up to rotation, stored in canonical form
/// (least rotation of the edge sequence).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeodesicClass {
    edges: Vec<EdgeId>,
    primitive_length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("empty cycle")]
    Empty,
    #[error("edge {0} does not exist")]
    UnknownEdge(EdgeId),
    #[error("step {0} -> {1} is not a non-backtracking continuation")]
    NotGeodesic(EdgeId, EdgeId),
}

impl GeodesicClass {
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn length(&self) -> usize {
        self.edges.len()
    }

    /// ℓ(γ₀), the length of the underlying primitive geodesic.
    pub fn primitive_length(&self) -> usize {
        self.primitive_length
    }

    /// μ with γ = γ₀^μ.
    pub fn multiplicity(&self) -> usize {
        self.edges.len() / self.primitive_length
    }

    pub fn is_primitive(&self) -> bool {
        self.multiplicity() == 1
    }

    pub fn primitive(&self) -> GeodesicClass {
        GeodesicClass { edges: self.edges[..self.primitive_length].to_vec(), primitive_length: self.primitive_length }
    }

    pub fn power(&self, k: usize) -> GeodesicClass {
        assert!(k >= 1);
        GeodesicClass { edges: self.edges.repeat(k), primitive_length: self.primitive_length }
    }

    /// The same cycle traversed backwards.
    pub fn reversed(&self) -> GeodesicClass {
        let word: Vec<EdgeId> = self.edges.iter().rev().map(|&e| e ^ 1).collect();
        GeodesicClass { edges: canonical_rotation(&word), primitive_length: self.primitive_length }
    }
}

/// Writes a closed geodesic as γ₀^μ with γ₀ primitive.
pub fn primitive_decomposition(g: &GeodesicGraph, cycle: &[EdgeId]) -> Result<(GeodesicClass, usize), CycleError> {
    if cycle.is_empty() {
        return Err(CycleError::Empty);
    }
    if let Some(&e) = cycle.iter().find(|&&e| e >= g.directed_edge_count()) {
        return Err(CycleError::UnknownEdge(e));
    }
    let n = cycle.len();
    for i in 0..n {
        let (e, f) = (cycle[i], cycle[(i + 1) % n]);
        if !g.is_successor(e, f) {
            return Err(CycleError::NotGeodesic(e, f));
        }
    }
    let p = minimal_period(cycle);
    let base = canonical_rotation(&cycle[..p]);
    Ok((GeodesicClass { edges: base, primitive_length: p }, n / p))
}

/// All primitive closed geodesics of length ≤ `max_len`, ordered by length and
/// then by canonical edge word.
///
/// Canonical forms of primitive cycles are exactly the Lyndon words in the
/// edge alphabet, so the search extends only prenecklaces (FKM pruning).
pub fn primitive_geodesics(g: &GeodesicGraph, max_len: usize) -> Vec<GeodesicClass> {
    let mut found = Vec::new();
    let mut word = Vec::with_capacity(max_len);
    for s in 0..g.directed_edge_count() {
        if max_len == 0 {
            break;
        }
        word.push(s);
        extend(g, max_len, &mut word, 1, &mut found);
        word.pop();
    }
    found.sort_by(|a: &GeodesicClass, b| a.length().cmp(&b.length()).then_with(|| a.edges.cmp(&b.edges)));
    found
}

fn extend(g: &GeodesicGraph, max_len: usize, word: &mut Vec<EdgeId>, period: usize, out: &mut Vec<GeodesicClass>) {
    let t = word.len();
    let last = word[t - 1];
    if period == t && g.is_successor(last, word[0]) {
        out.push(GeodesicClass { edges: word.clone(), primitive_length: t });
    }
    if t == max_len {
        return;
    }
    let floor = word[t - period];
    for c in g.successors(last) {
        if c < floor {
            continue;
        }
        let p = if c == floor { period } else { t + 1 };
        word.push(c);
        extend(g, max_len, word, p, out);
        word.pop();
    }
}
