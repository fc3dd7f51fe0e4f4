//! q-adic valuations on ℚ and eigenvalue absolute values via Newton polygons.
//!
//! The base field is ℚ with the q-adic valuation and uniformizer q. Absolute
//! values are q^{-v}, so every quantity here is carried as a rational exponent
//! and never as a float.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, Integer, Signed, Zero};
use thiserror::Error;

use crate::matrix::RatMatrix;
use crate::poly::{cyclotomic, RatPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("q = {0} is not a prime")]
    NotPrime(u64),
    #[error("the zero polynomial has no Newton polygon")]
    ZeroPolynomial,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular: 0 is an eigenvalue")]
    Singular,
    #[error("empty absolute-value spectrum")]
    EmptySpectrum,
    #[error("degree bound must be at least 1")]
    DegreeBound,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Residue field size q, which is also the valuation prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicContext {
    q: u64,
}

/// An element of ℤ ∪ {+∞}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "+inf"),
        }
    }
}

impl PadicContext {
    pub fn new(q: u64) -> Result<Self, PadicError> {
        if is_prime(q) {
            Ok(PadicContext { q })
        } else {
            Err(PadicError::NotPrime(q))
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn q_big(&self) -> BigInt {
        BigInt::from(self.q)
    }

    fn int_valuation(&self, n: &BigInt) -> i64 {
        let q = self.q_big();
        let mut n = n.abs();
        let mut v = 0;
        loop {
            let (d, r) = n.div_rem(&q);
            if !r.is_zero() {
                return v;
            }
            n = d;
            v += 1;
        }
    }

    pub fn valuation(&self, x: &BigRational) -> Valuation {
        if x.is_zero() {
            return Valuation::Infinity;
        }
        Valuation::Finite(self.int_valuation(x.numer()) - self.int_valuation(x.denom()))
    }

    /// q^k as an exact rational (k may be negative).
    pub fn power(&self, k: i64) -> BigRational {
        let base = BigRational::from_integer(self.q_big());
        if k >= 0 {
            num::pow(base, k as usize)
        } else {
            num::pow(base.recip(), k.unsigned_abs() as usize)
        }
    }

    /// The absolute value |x| = q^{-v(x)}.
    pub fn abs(&self, x: &BigRational) -> BigRational {
        match self.valuation(x) {
            Valuation::Finite(v) => self.power(-v),
            Valuation::Infinity => BigRational::zero(),
        }
    }

    pub fn qpower(&self, exponent: BigRational) -> QPower {
        QPower { q: self.q, exponent }
    }

    /// Root valuations of a polynomial read off its Newton polygon.
    pub fn newton_slopes(&self, poly: &RatPoly) -> Result<NewtonSlopes, PadicError> {
        if poly.is_zero() {
            return Err(PadicError::ZeroPolynomial);
        }
        let zero_roots = poly.zero_order();
        let points: Vec<(i64, i64)> = poly
            .coeffs()
            .iter()
            .enumerate()
            .filter_map(|(i, c)| self.valuation(c).finite().map(|v| (i as i64, v)))
            .collect();
        let hull = lower_hull(&points);
        let mut spectrum = AbsValueSpectrum::default();
        for w in hull.windows(2) {
            let ((i0, v0), (i1, v1)) = (w[0], w[1]);
            let len = i1 - i0;
            let root_val = BigRational::new(BigInt::from(v0 - v1), BigInt::from(len));
            spectrum.insert(root_val, len as usize);
        }
        Ok(NewtonSlopes { spectrum, zero_roots })
    }

    /// E(g|V) for the standard representation of an invertible rational matrix.
    pub fn eigen_abs_values(&self, g: &RatMatrix) -> Result<AbsValueSpectrum, PadicError> {
        if !g.is_square() {
            return Err(PadicError::NotSquare { rows: g.rows(), cols: g.cols() });
        }
        let cp = g.charpoly();
        if cp.coeff(0).is_zero() {
            return Err(PadicError::Singular);
        }
        Ok(self.newton_slopes(&cp)?.spectrum)
    }
}

/// Monotone-chain lower convex hull of points sorted by x.
fn lower_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(points.len());
    for &p in points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) as i128 * (p.1 - a.1) as i128
                - (b.1 - a.1) as i128 * (p.0 - a.0) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// Newton-polygon output: valuations of the nonzero roots plus the number of zero roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonSlopes {
    pub spectrum: AbsValueSpectrum,
    pub zero_roots: usize,
}

/// Multiset of valuations s, each standing for the absolute value q^{-s}.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AbsValueSpectrum {
    entries: BTreeMap<BigRational, usize>,
}

impl AbsValueSpectrum {
    pub fn from_valuations<I: IntoIterator<Item = BigRational>>(vals: I) -> Self {
        let mut s = Self::default();
        for v in vals {
            s.insert(v, 1);
        }
        s
    }

    pub fn insert(&mut self, valuation: BigRational, mult: usize) {
        if mult > 0 {
            *self.entries.entry(valuation).or_insert(0) += mult;
        }
    }

    pub fn merge(&mut self, other: &AbsValueSpectrum) {
        for (v, &m) in &other.entries {
            self.insert(v.clone(), m);
        }
    }

    /// (valuation, multiplicity) pairs in increasing valuation.
    pub fn iter(&self) -> impl Iterator<Item = (&BigRational, usize)> {
        self.entries.iter().map(|(v, &m)| (v, m))
    }

    pub fn dimension(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn min_valuation(&self) -> Option<&BigRational> {
        self.entries.keys().next()
    }

    pub fn max_valuation(&self) -> Option<&BigRational> {
        self.entries.keys().next_back()
    }

    /// The spectrum of the inverse: every valuation negated.
    pub fn inverse(&self) -> Self {
        let mut s = Self::default();
        for (v, &m) in &self.entries {
            s.insert(-v.clone(), m);
        }
        s
    }

    /// λ_min and λ_max as exponents of q.
    pub fn lambda_min_max(&self) -> Result<LambdaExtremes, PadicError> {
        let (lo, hi) = self
            .min_valuation()
            .zip(self.max_valuation())
            .ok_or(PadicError::EmptySpectrum)?;
        Ok(LambdaExtremes { min_exp: -hi.clone(), max_exp: -lo.clone() })
    }
}

impl fmt::Display for AbsValueSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (v, m)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
            if *m > 1 {
                write!(f, " (x{m})")?;
            }
        }
        write!(f, "}}")
    }
}

/// λ_min = q^{min_exp} ≤ λ_max = q^{max_exp}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaExtremes {
    pub min_exp: BigRational,
    pub max_exp: BigRational,
}

/// The positive real number q^exponent, kept symbolically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QPower {
    pub q: u64,
    pub exponent: BigRational,
}

impl QPower {
    /// Exact rational value when the exponent is integral.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.exponent.is_integer().then(|| {
            let k: i64 = self.exponent.to_integer().try_into().expect("exponent out of range");
            PadicContext { q: self.q }.power(k)
        })
    }

    pub fn to_f64(&self) -> f64 {
        use num::ToPrimitive;
        (self.q as f64).powf(self.exponent.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for QPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^({})", self.q, self.exponent)
    }
}

/// Whether some eigenvalue of `g` is a root of unity of order 2..=degree_bound.
///
/// Φ_k is irreducible over ℚ, so sharing a factor with it means Φ_k divides the
/// characteristic polynomial. Eigenvalue 1 (Φ_1) is never reported.
pub fn has_root_of_unity_eigenvalue(g: &RatMatrix, degree_bound: usize) -> Result<bool, PadicError> {
    if !g.is_square() {
        return Err(PadicError::NotSquare { rows: g.rows(), cols: g.cols() });
    }
    if degree_bound < 1 {
        return Err(PadicError::DegreeBound);
    }
    let cp = g.charpoly();
    let n = g.rows();
    Ok((2..=degree_bound).any(|k| {
        let phi = cyclotomic(k);
        // deg Φ_k = φ(k) > n cannot divide a degree-n polynomial.
        phi.degree().unwrap() <= n && cp.rem(&phi.to_rational()).is_zero()
    }))
}

/// Default cyclotomic order bound for an n x n input.
pub fn default_degree_bound(n: usize) -> usize {
    (n * n).max(1)
}

#[cfg(test)]
pub(crate) fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
