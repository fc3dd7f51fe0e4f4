//! Unitary characters of π₁ given by edge weights ω(e) = exp(2πi·t(e)) with
//! t(rev e) = −t(e).

use std::f64::consts::TAU;

use num::complex::Complex64;
use num::{BigInt, BigRational, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

use super::{EdgeId, GeodesicClass, GeodesicGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistParseError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("edge index {index} out of range (graph has {count} edges)")]
    EdgeOutOfRange { index: usize, count: usize },
    #[error("expected {expected} turns, got {got}")]
    WrongLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCharacter {
    /// Turns per directed edge, as fractions of a full rotation.
    turns: Vec<f64>,
    exact: Option<Vec<BigRational>>,
}

fn frac(t: &BigRational) -> BigRational {
    t - BigRational::from_integer(t.floor().to_integer())
}

fn turn_to_unit(t: f64) -> Complex64 {
    let t = t - t.floor();
    Complex64::from_polar(1.0, TAU * t)
}

impl EdgeCharacter {
    pub fn trivial(g: &GeodesicGraph) -> Self {
        Self::from_turns(g, &vec![BigRational::zero(); g.undirected_edge_count()]).unwrap()
    }

    /// Exact rational turns, one per undirected edge in file order.
    pub fn from_turns(g: &GeodesicGraph, turns: &[BigRational]) -> Result<Self, TwistParseError> {
        let expected = g.undirected_edge_count();
        if turns.len() != expected {
            return Err(TwistParseError::WrongLength { expected, got: turns.len() });
        }
        let exact: Vec<BigRational> = turns.iter().flat_map(|t| [frac(t), frac(&-t)]).collect();
        let turns = exact.iter().map(|t| t.to_f64().unwrap_or(0.0)).collect();
        Ok(EdgeCharacter { turns, exact: Some(exact) })
    }

    pub fn from_float_turns(g: &GeodesicGraph, turns: &[f64]) -> Result<Self, TwistParseError> {
        let expected = g.undirected_edge_count();
        if turns.len() != expected {
            return Err(TwistParseError::WrongLength { expected, got: turns.len() });
        }
        let turns = turns.iter().flat_map(|&t| [t - t.floor(), (-t) - (-t).floor()]).collect();
        Ok(EdgeCharacter { turns, exact: None })
    }

    /// Independent uniform turns on each undirected edge.
    pub fn random<R: Rng + ?Sized>(g: &GeodesicGraph, rng: &mut R) -> Self {
        let t: Vec<f64> = (0..g.undirected_edge_count()).map(|_| rng.random::<f64>()).collect();
        Self::from_float_turns(g, &t).unwrap()
    }

    /// Reads lines `turn <edge-index> <value>` where the value is `p/q` or a
    /// decimal; both are kept exact. Unlisted edges get turn 0.
    pub fn parse(g: &GeodesicGraph, text: &str) -> Result<Self, TwistParseError> {
        let count = g.undirected_edge_count();
        let mut turns = vec![BigRational::zero(); count];
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |msg: &str| TwistParseError::Parse { line, msg: msg.to_string() };
            let tok: Vec<&str> = content.split_whitespace().collect();
            let ["turn", index, value] = tok.as_slice() else {
                return Err(err("expected `turn <edge-index> <value>`"));
            };
            let index: usize = index.parse().map_err(|_| err("edge index is not a nonnegative integer"))?;
            if index >= count {
                return Err(TwistParseError::EdgeOutOfRange { index, count });
            }
            turns[index] = parse_exact(value).ok_or_else(|| err("turn must be `p/q` or a decimal"))?;
        }
        Self::from_turns(g, &turns)
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn is_trivial(&self) -> bool {
        match &self.exact {
            Some(e) => e.iter().all(Zero::is_zero),
            None => self.turns.iter().all(|&t| t == 0.0),
        }
    }

    pub fn turn(&self, e: EdgeId) -> f64 {
        self.turns[e]
    }

    pub fn exact_turn(&self, e: EdgeId) -> Option<&BigRational> {
        self.exact.as_ref().map(|v| &v[e])
    }

    pub fn weight(&self, e: EdgeId) -> Complex64 {
        turn_to_unit(self.turns[e])
    }

    /// Σ t(e) over the cycle, reduced into [0, 1), when all turns are exact.
    pub fn exact_holonomy(&self, class: &GeodesicClass) -> Option<BigRational> {
        let exact = self.exact.as_ref()?;
        Some(frac(&class.edges().iter().map(|&e| exact[e].clone()).sum::<BigRational>()))
    }

    /// ω(γ) = Π ω(e) over the edges of γ.
    pub fn value(&self, class: &GeodesicClass) -> Complex64 {
        match self.exact_holonomy(class) {
            Some(t) => turn_to_unit(t.to_f64().unwrap_or(0.0)),
            None => turn_to_unit(class.edges().iter().map(|&e| self.turns[e]).sum()),
        }
    }
}

fn parse_exact(s: &str) -> Option<BigRational> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        return (!d.is_zero()).then(|| BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let num: BigInt = digits.parse().ok()?;
    let den = num::pow(BigInt::from(10), frac_part.len());
    let v = BigRational::new(num, den);
    Some(if neg { -v } else { v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::primitive_geodesics;
    use num::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k4() -> GeodesicGraph {
        GeodesicGraph::from_edges(2, 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn is_unit(z: Complex64) -> bool {
        (z.norm() - 1.0).abs() < 1e-12
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn trivial_character() {
        let g = k4();
        let w = EdgeCharacter::trivial(&g);
        assert!(w.is_trivial() && w.is_exact());
        for c in primitive_geodesics(&g, 4) {
            assert_eq!(w.value(&c), Complex64::new(1.0, 0.0));
            assert_eq!(w.exact_holonomy(&c), Some(BigRational::zero()));
        }
    }

    #[test]
    fn unitary_and_inverse_on_reversal() {
        let g = k4();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let w = EdgeCharacter::random(&g, &mut rng);
        for e in 0..g.directed_edge_count() {
            assert!(is_unit(w.weight(e)));
            assert!((w.weight(e) * w.weight(g.rev(e)) - Complex64::one()).norm() < 1e-12);
        }
        for c in primitive_geodesics(&g, 6) {
            let z = w.value(&c) * w.value(&c.reversed());
            assert!((z - Complex64::one()).norm() < 1e-12);
        }
    }

    #[test]
    fn parse_twists() {
        let g = k4();
        let w = EdgeCharacter::parse(&g, "# quarter turn on edge 0\nturn 0 1/4\nturn 3 0.5\n").unwrap();
        assert_eq!(w.exact_turn(0), Some(&r(1, 4)));
        assert_eq!(w.exact_turn(1), Some(&r(3, 4)));
        assert_eq!(w.exact_turn(6), Some(&r(1, 2)));
        assert!((w.weight(0) - Complex64::i()).norm() < 1e-15);
        assert_eq!(parse_exact("-0.125"), Some(r(-1, 8)));
        assert_eq!(parse_exact("3"), Some(r(3, 1)));
        assert_eq!(parse_exact("1/0"), None);
        assert_eq!(parse_exact("."), None);
        assert!(matches!(EdgeCharacter::parse(&g, "turn 9 1/2"), Err(TwistParseError::EdgeOutOfRange { .. })));
        assert!(matches!(EdgeCharacter::parse(&g, "turn 0 abc"), Err(TwistParseError::Parse { line: 1, .. })));
    }

    #[test]
    fn exact_holonomy_of_triangle() {
        let g = k4();
        // edges 0:(0,1) 1:(0,2) 3:(1,2); triangle 0->1->2->0 uses directed 0, 6, 3
        let w = EdgeCharacter::from_turns(&g, &[r(1, 3), r(0, 1), r(0, 1), r(1, 3), r(0, 1), r(0, 1)]).unwrap();
        let (tri, _) = crate::graph::primitive_decomposition(&g, &[0, 6, 3]).unwrap();
        assert_eq!(w.exact_holonomy(&tri), Some(r(2, 3)));
        assert_eq!(w.exact_holonomy(&tri.reversed()), Some(r(1, 3)));
    }
}
