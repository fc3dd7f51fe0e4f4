//! Root data of split tori for GL_n, SL_n and PGL₂ with the upper-triangular
//! Borel, together with torus elements, the character/cocharacter pairing and
//! unramified quasicharacters.
//!
//! Characters and cocharacters both live in ℤ^n with the dot-product pairing.
//! A torus element is stored by its image in Σ = A/A_c, i.e. the valuations of
//! its diagonal entries. SL_n elements have valuation vectors summing to zero;
//! PGL₂ classes are stored in the gauge whose last entry is zero.

use std::f64::consts::TAU;
use std::fmt;

use num::complex::Complex64;
use num::{BigInt, BigRational, FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::padic::{PadicContext, QPower, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootDatumError {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("{family} needs n >= {min}")]
    BadRank { family: &'static str, min: usize },
    #[error("torus entries must be nonzero")]
    ZeroEntry,
    #[error("SL_n torus element must have valuation vector summing to zero, got sum {0}")]
    NotDeterminantOne(i64),
    #[error("quasicharacter values must be nonzero")]
    ZeroValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Gl,
    Sl,
    Pgl2,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Gl => "GL",
            Family::Sl => "SL",
            Family::Pgl2 => "PGL",
        })
    }
}

/// The root e_i - e_j together with its coroot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    pub i: usize,
    pub j: usize,
    pub character: Vec<i64>,
    pub coroot: Vec<i64>,
}

impl Root {
    fn new(n: usize, i: usize, j: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        v[j] = -1;
        Root { i, j, character: v.clone(), coroot: v }
    }

    /// Positive with respect to the upper-triangular Borel.
    pub fn is_positive(&self) -> bool {
        self.i < self.j
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    family: Family,
    n: usize,
    roots: Vec<Root>,
    simple: Vec<usize>,
    rho2: Vec<i64>,
    rank: usize,
}

impl RootDatum {
    pub fn gl(n: usize) -> Result<Self, RootDatumError> {
        if n < 1 {
            return Err(RootDatumError::BadRank { family: "GL_n", min: 1 });
        }
        Ok(Self::build(Family::Gl, n, n))
    }

    pub fn sl(n: usize) -> Result<Self, RootDatumError> {
        if n < 2 {
            return Err(RootDatumError::BadRank { family: "SL_n", min: 2 });
        }
        Ok(Self::build(Family::Sl, n, n - 1))
    }

    pub fn pgl2() -> Self {
        Self::build(Family::Pgl2, 2, 1)
    }

    pub fn new(family: Family, n: usize) -> Result<Self, RootDatumError> {
        match family {
            Family::Gl => Self::gl(n),
            Family::Sl => Self::sl(n),
            Family::Pgl2 if n == 2 => Ok(Self::pgl2()),
            Family::Pgl2 => Err(RootDatumError::RankMismatch { expected: 2, got: n }),
        }
    }

    fn build(family: Family, n: usize, rank: usize) -> Self {
        let mut roots = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    roots.push(Root::new(n, i, j));
                }
            }
        }
        let simple = roots
            .iter()
            .enumerate()
            .filter(|(_, r)| r.j == r.i + 1)
            .map(|(k, _)| k)
            .collect();
        let mut rho2 = vec![0i64; n];
        for r in roots.iter().filter(|r| r.is_positive()) {
            for (acc, c) in rho2.iter_mut().zip(&r.character) {
                *acc += c;
            }
        }
        RootDatum { family, n, roots, simple, rho2, rank }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Size of the matrices (coordinate dimension of X*(A) in the chosen gauge).
    pub fn n(&self) -> usize {
        self.n
    }

    /// r = dim A.
    pub fn torus_rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.is_positive())
    }

    pub fn simple_roots(&self) -> impl Iterator<Item = &Root> {
        self.simple.iter().map(|&k| &self.roots[k])
    }

    /// The element 2ρ of X*(A).
    pub fn rho2(&self) -> &[i64] {
        &self.rho2
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.n)
    }
}

/// The ℤ-valued pairing X*(A) × X_*(A) → ℤ.
pub fn pairing(character: &[i64], cocharacter: &[i64]) -> Result<i64, RootDatumError> {
    if character.len() != cocharacter.len() {
        return Err(RootDatumError::RankMismatch { expected: character.len(), got: cocharacter.len() });
    }
    Ok(character.iter().zip(cocharacter).map(|(a, b)| a * b).sum())
}

/// ν_α = (ν, α̌) for ν with real, rational or complex coordinates.
pub fn nu_alpha<T>(nu: &[T], root: &Root) -> Result<T, RootDatumError>
where
    T: Clone + Num + FromPrimitive,
{
    if nu.len() != root.coroot.len() {
        return Err(RootDatumError::RankMismatch { expected: root.coroot.len(), got: nu.len() });
    }
    Ok(nu.iter().zip(&root.coroot).fold(T::zero(), |acc, (x, &c)| {
        acc + x.clone() * T::from_i64(c).expect("coroot coordinate")
    }))
}

/// ν > 0, meaning ν_α > 0 for every positive root α.
pub fn is_positive(nu: &[BigRational], rd: &RootDatum) -> bool {
    rd.positive_roots()
        .all(|r| nu_alpha(nu, r).is_ok_and(|v| v.is_positive()))
}

/// A class a·A_c in Σ, stored by the valuation vector of its diagonal entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusElement {
    ctx: PadicContext,
    family: Family,
    val: Vec<i64>,
}

impl TorusElement {
    pub fn from_valuations(
        ctx: PadicContext,
        rd: &RootDatum,
        mut val: Vec<i64>,
    ) -> Result<Self, RootDatumError> {
        if val.len() != rd.n() {
            return Err(RootDatumError::RankMismatch { expected: rd.n(), got: val.len() });
        }
        match rd.family() {
            Family::Gl => {}
            Family::Sl => {
                let s: i64 = val.iter().sum();
                if s != 0 {
                    return Err(RootDatumError::NotDeterminantOne(s));
                }
            }
            Family::Pgl2 => {
                let last = *val.last().unwrap();
                val.iter_mut().for_each(|v| *v -= last);
            }
        }
        Ok(TorusElement { ctx, family: rd.family(), val })
    }

    pub fn from_diagonal(
        ctx: PadicContext,
        rd: &RootDatum,
        diag: &[BigRational],
    ) -> Result<Self, RootDatumError> {
        let val = diag
            .iter()
            .map(|x| match ctx.valuation(x) {
                Valuation::Finite(v) => Ok(v),
                Valuation::Infinity => Err(RootDatumError::ZeroEntry),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_valuations(ctx, rd, val)
    }

    pub fn identity(ctx: PadicContext, rd: &RootDatum) -> Self {
        TorusElement { ctx, family: rd.family(), val: vec![0; rd.n()] }
    }

    pub fn ctx(&self) -> PadicContext {
        self.ctx
    }

    pub fn valuations(&self) -> &[i64] {
        &self.val
    }

    /// Group law of Σ: valuations add.
    pub fn mul(&self, other: &TorusElement) -> TorusElement {
        assert_eq!(self.val.len(), other.val.len());
        TorusElement {
            ctx: self.ctx,
            family: self.family,
            val: self.val.iter().zip(&other.val).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> TorusElement {
        TorusElement { ctx: self.ctx, family: self.family, val: self.val.iter().map(|v| v * k).collect() }
    }

    /// The diagonal representative diag(q^{v_1}, ..., q^{v_n}).
    pub fn representative(&self) -> Vec<BigRational> {
        self.val.iter().map(|&v| self.ctx.power(v)).collect()
    }

    /// a^μ = q^{-μ(a)} for μ ∈ a₀* given in dual coordinates.
    pub fn to_the(&self, mu: &[BigRational]) -> Result<QPower, RootDatumError> {
        if mu.len() != self.val.len() {
            return Err(RootDatumError::RankMismatch { expected: self.val.len(), got: mu.len() });
        }
        let e: BigRational = mu
            .iter()
            .zip(&self.val)
            .map(|(m, &v)| m * BigRational::from_integer(BigInt::from(v)))
            .fold(BigRational::zero(), |a, b| a + b);
        Ok(self.ctx.qpower(-e))
    }
}

/// a ∈ A^-: |a^α| < 1, i.e. (α, v(a)) > 0, for every simple root α.
pub fn in_a_minus(a: &TorusElement, rd: &RootDatum) -> bool {
    rd.simple_roots()
        .all(|r| pairing(&r.character, a.valuations()).is_ok_and(|p| p > 0))
}

/// Δ_P(a) = |a^{2ρ}| = q^{-(2ρ, v(a))}.
pub fn modular_delta(a: &TorusElement, rd: &RootDatum) -> QPower {
    let p = pairing(rd.rho2(), a.valuations()).expect("torus element built for this datum");
    a.ctx().qpower(BigRational::from_integer(BigInt::from(-p)))
}

/// A value of an unramified quasicharacter on a basis element of Σ.
#[derive(Debug, Clone, PartialEq)]
pub enum CharValue {
    /// modulus · e^{2πi·turns}, with positive rational modulus and rational turns in [0, 1).
    Exact { modulus: BigRational, turns: BigRational },
    Float(Complex64),
}

impl CharValue {
    pub fn exact(modulus: BigRational, turns: BigRational) -> Self {
        let turns = &turns - turns.floor();
        CharValue::Exact { modulus, turns }
    }

    /// An exact nonzero rational (sign encoded as half a turn).
    pub fn rational(x: BigRational) -> Self {
        let turns = if x.is_negative() { BigRational::new(BigInt::one(), BigInt::from(2)) } else { BigRational::zero() };
        CharValue::Exact { modulus: x.abs(), turns }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CharValue::Exact { modulus, .. } => modulus.is_zero(),
            CharValue::Float(z) => z.norm() == 0.0,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            CharValue::Exact { modulus, turns } => {
                let r = modulus.to_f64().unwrap_or(f64::NAN);
                Complex64::from_polar(r, TAU * turns.to_f64().unwrap_or(f64::NAN))
            }
            CharValue::Float(z) => *z,
        }
    }

    pub fn powi(&self, k: i64) -> CharValue {
        match self {
            CharValue::Exact { modulus, turns } => {
                let m = if k >= 0 {
                    num::pow(modulus.clone(), k as usize)
                } else {
                    num::pow(modulus.recip(), k.unsigned_abs() as usize)
                };
                CharValue::exact(m, turns * BigRational::from_integer(BigInt::from(k)))
            }
            CharValue::Float(z) => CharValue::Float(z.powi(k as i32)),
        }
    }

    pub fn mul(&self, other: &CharValue) -> CharValue {
        match (self, other) {
            (
                CharValue::Exact { modulus: m1, turns: t1 },
                CharValue::Exact { modulus: m2, turns: t2 },
            ) => CharValue::exact(m1 * m2, t1 + t2),
            _ => CharValue::Float(self.to_complex() * other.to_complex()),
        }
    }

    /// -log_q |z|, exact whenever |z| is an exact integral power of q.
    pub fn real_exponent(&self, ctx: PadicContext) -> f64 {
        if let CharValue::Exact { modulus, .. } = self {
            if let Valuation::Finite(v) = ctx.valuation(modulus) {
                if *modulus == ctx.power(v) {
                    return -(v as f64);
                }
            }
        }
        -self.to_complex().norm().ln() / (ctx.q() as f64).ln()
    }
}

/// An unramified quasicharacter of A, given by its values on a basis of Σ.
#[derive(Debug, Clone, PartialEq)]
pub struct Quasicharacter {
    values: Vec<CharValue>,
}

impl Quasicharacter {
    pub fn new(values: Vec<CharValue>) -> Result<Self, RootDatumError> {
        if values.iter().any(CharValue::is_zero) {
            return Err(RootDatumError::ZeroValue);
        }
        Ok(Quasicharacter { values })
    }

    pub fn trivial(rank: usize) -> Self {
        Quasicharacter { values: vec![CharValue::rational(BigRational::one()); rank] }
    }

    /// The character a ↦ q^{-(μ, v(a))} for an integral exponent vector μ.
    pub fn from_exponents(ctx: PadicContext, mu: &[i64]) -> Self {
        Quasicharacter {
            values: mu.iter().map(|&m| CharValue::rational(ctx.power(-m))).collect(),
        }
    }

    pub fn values(&self) -> &[CharValue] {
        &self.values
    }

    pub fn is_exact(&self) -> bool {
        self.values.iter().all(|v| matches!(v, CharValue::Exact { .. }))
    }

    pub fn mul(&self, other: &Quasicharacter) -> Quasicharacter {
        assert_eq!(self.values.len(), other.values.len());
        Quasicharacter {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    /// Re(χ) ∈ a₀*: the i-th entry is -log_q |χ(basis_i)|.
    pub fn re_part(&self, ctx: PadicContext) -> Vec<f64> {
        self.values.iter().map(|v| v.real_exponent(ctx)).collect()
    }

    /// Evaluates the character on the class of a: Π χ(basis_i)^{v_i(a)}.
    pub fn eval(&self, a: &TorusElement) -> Result<CharValue, RootDatumError> {
        if self.values.len() != a.valuations().len() {
            return Err(RootDatumError::RankMismatch {
                expected: a.valuations().len(),
                got: self.values.len(),
            });
        }
        Ok(self
            .values
            .iter()
            .zip(a.valuations())
            .fold(CharValue::rational(BigRational::one()), |acc, (z, &v)| acc.mul(&z.powi(v))))
    }
}

/// a^λ for a quasicharacter λ.
pub fn a_to_lambda(a: &TorusElement, lambda: &Quasicharacter) -> Result<CharValue, RootDatumError> {
    lambda.eval(a)
}
