//! Spherical Hecke operators on the vertices of a tree quotient.

use num::{BigInt, BigRational, One, Zero};

use crate::graph::GeodesicGraph;
use crate::matrix::IntMatrix;
use crate::poly::{interpolate, resultant, IntPoly};

/// A_m: the image of the indicator of the distance-m sphere in the tree,
/// i.e. A_m[u, v] counts non-backtracking walks of length m from u to v.
pub fn hecke_operator(g: &GeodesicGraph, m: usize) -> IntMatrix {
    let n = g.vertex_count();
    if m == 0 {
        return IntMatrix::identity(n);
    }
    let edges = g.directed_edge_count();
    let mut out = IntMatrix::zeros(n, n);
    for u in 0..n {
        let mut walks = vec![BigInt::zero(); edges];
        for &e in g.out_edges(u) {
            walks[e] += 1;
        }
        for _ in 1..m {
            let mut next = vec![BigInt::zero(); edges];
            for (e, w) in walks.iter().enumerate() {
                if w.is_zero() {
                    continue;
                }
                for f in g.successors(e) {
                    next[f] += w;
                }
            }
            walks = next;
        }
        for (e, w) in walks.into_iter().enumerate() {
            let v = g.head(e);
            let cur = out.get(u, v) + w;
            out.set(u, v, cur);
        }
    }
    out
}

/// P_m with A_m = P_m(A₁): P₀ = 1, P₁ = x, P₂ = x² − (q+1), P_{m+1} = x·P_m − q·P_{m−1}.
pub fn hecke_polynomial(q: u64, m: usize) -> IntPoly {
    let q = BigInt::from(q);
    let x = IntPoly::x();
    let mut prev = IntPoly::one();
    if m == 0 {
        return prev;
    }
    let mut cur = x.clone();
    for k in 1..m {
        let c = if k == 1 { &q + 1 } else { q.clone() };
        let next = &(&x * &cur) - &prev.scale(&c);
        prev = cur;
        cur = next;
    }
    cur
}

/// Res_y(f(y), x − P(y)) = Π_{f(α) = 0} (x − P(α)) for monic f, by evaluation at
/// deg f + 1 integer points and interpolation.
pub fn spectral_mapping_polynomial(f: &IntPoly, p: &IntPoly) -> IntPoly {
    assert!(f.is_monic(), "spectral mapping needs a monic polynomial");
    let n = f.degree().unwrap_or(0);
    let points: Vec<(BigRational, BigRational)> = (0..=n as i64)
        .map(|x| {
            let g = &IntPoly::constant(BigInt::from(x)) - p;
            let r = resultant(f, &g);
            (BigRational::from_integer(x.into()), BigRational::from_integer(r))
        })
        .collect();
    interpolate(&points).to_integer().expect("resultant of integer polynomials is integral")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeRow {
    pub m: usize,
    /// A₁A_m = A_{m+1} + c·A_{m−1} with c = q+1 at m = 1 and q afterwards.
    pub recurrence: bool,
    /// charpoly(A_m) = Res_y(charpoly(A₁)(y), x − P_m(y)).
    pub spectral_mapping: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeReport {
    pub q: u64,
    pub rows: Vec<HeckeRow>,
}

impl HeckeReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.recurrence && r.spectral_mapping)
    }
}

pub fn check_hecke(g: &GeodesicGraph, max_m: usize) -> HeckeReport {
    let q = BigInt::from(g.q());
    let ops: Vec<IntMatrix> = (0..=max_m + 1).map(|m| hecke_operator(g, m)).collect();
    let chi_a = ops[1].charpoly();
    let rows = (1..=max_m)
        .map(|m| {
            let c = if m == 1 { &q + BigInt::one() } else { q.clone() };
            let lhs = &ops[1] * &ops[m];
            let rhs = &ops[m + 1] + &ops[m - 1].scale(&c);
            let image = spectral_mapping_polynomial(&chi_a, &hecke_polynomial(g.q(), m));
            HeckeRow { m, recurrence: lhs == rhs, spectral_mapping: ops[m].charpoly() == image }
        })
        .collect();
    HeckeReport { q: g.q(), rows }
}
