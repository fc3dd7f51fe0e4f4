//! The rank-one Lefschetz identity on a finite (q+1)-regular graph.
//!
//! Three routes to the same numbers, for each length m:
//!
//! - geometric: Σ over closed geodesic classes γ = γ₀^μ of length m of
//!   λ_γ · χ₁(Γ_γ) · ω(γ), with λ_γ = ℓ(γ₀) and Γ_γ ≅ ℤ;
//! - transfer trace: tr(T_ω^m) for the ω-weighted non-backtracking matrix;
//! - spectral: power sums of the transfer spectrum, recovered from the adjacency
//!   characteristic polynomial through det(I − uT) = (1 − u²)^{|E|−|V|} det(I − uA + qu²I).
//!   Only available for trivial ω.
//!
//! The test function is normalized as φ(a) = |a^{−2ρ}| · 1_{ℓ(a) = m}, which
//! cancels the |a_γ^{2ρ}| factor of c_γ; general finitely supported φ are
//! handled by [`evaluate_distribution`].
//!
//! Dictionary: vertices ↔ Γ\G/K, directed edges ↔ Γ\G/I, hyperbolic classes ↔
//! closed geodesics, a_γ ↔ ℓ(γ), λ_γ ↔ ℓ(γ₀), tr σ(m_γ) = 1 for trivial σ.

mod hecke;

pub use hecke::{check_hecke, hecke_operator, hecke_polynomial, spectral_mapping_polynomial, HeckeReport, HeckeRow};

use std::collections::BTreeMap;
use std::fmt;

use num::complex::Complex64;
use num::{BigInt, BigRational, ToPrimitive, Zero};
use thiserror::Error;

use crate::euler::{chi_r, covolume, BettiVector};
use crate::graph::{primitive_geodesics, EdgeCharacter, GeodesicClass, GeodesicGraph};
use crate::padic::PadicContext;
use crate::poly::IntPoly;
use crate::root_datum::{modular_delta, RootDatum, TorusElement};

/// Absolute tolerance for twisted (floating) comparisons.
pub const TWIST_TOLERANCE: f64 = 1e-9;

/// Split rank q(G) of PGL₂.
const SPLIT_RANK: u32 = 1;
/// Rank r of Γ_γ ≅ ℤ.
const CENTRALIZER_RANK: usize = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LefschetzError {
    #[error("length bound must be at least 1")]
    ZeroLength,
    #[error("test function is supported at m = 0, outside A^-")]
    SupportOutsideAMinus,
    #[error("test function is supported at m = {m}, beyond the computed range 1..={computed}")]
    SupportOutOfRange { m: usize, computed: usize },
    #[error("identity fails at m = {m}: geometric {geometric}, transfer trace {transfer_trace}, spectral {spectral}")]
    Mismatch { m: usize, geometric: Value, transfer_trace: Value, spectral: String },
}

/// A side value: an exact integer (trivial ω) or a complex float.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(BigInt),
    Approx(Complex64),
}

impl Value {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Value::Exact(n) => Complex64::new(n.to_f64().unwrap_or(f64::NAN), 0.0),
            Value::Approx(z) => *z,
        }
    }

    pub fn as_exact(&self) -> Option<&BigInt> {
        match self {
            Value::Exact(n) => Some(n),
            Value::Approx(_) => None,
        }
    }

    /// Exact equality when both are exact, otherwise agreement within [`TWIST_TOLERANCE`].
    pub fn agrees_with(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => a == b,
            _ => (self.to_complex() - other.to_complex()).norm() < TWIST_TOLERANCE,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(n) => write!(f, "{n}"),
            Value::Approx(z) => {
                let im = if z.im == 0.0 { 0.0 } else { z.im };
                let re = if z.re == 0.0 { 0.0 } else { z.re };
                write!(f, "{re:.12}{}{:.12}i", if im < 0.0 { "-" } else { "+" }, im.abs())
            }
        }
    }
}

/// Transfer-matrix eigendata, encoded exactly by the adjacency characteristic
/// polynomial and the number |E| − |V| of {+1, −1} correction pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSide {
    q: u64,
    adjacency_charpoly: IntPoly,
    correction: usize,
    transfer_charpoly: IntPoly,
    power_sums: Vec<BigInt>,
}

impl SpectralSide {
    pub fn adjacency_charpoly(&self) -> &IntPoly {
        &self.adjacency_charpoly
    }

    /// |E| − |V|, the multiplicity of each of the eigenvalues ±1 added by the correction factor.
    pub fn correction(&self) -> usize {
        self.correction
    }

    /// u^{2|E|} det(I − T/u): the characteristic polynomial of T.
    pub fn transfer_charpoly(&self) -> &IntPoly {
        &self.transfer_charpoly
    }

    /// tr(T^m) for m = 1..=len.
    pub fn power_sums(&self) -> &[BigInt] {
        &self.power_sums
    }

    pub fn power_sum(&self, m: usize) -> Option<&BigInt> {
        m.checked_sub(1).and_then(|i| self.power_sums.get(i))
    }

    pub fn q(&self) -> u64 {
        self.q
    }
}

/// The spectral side from the adjacency matrix alone, via Newton power sums.
/// Never extracts numerical roots.
pub fn spectral_side_from_adjacency(g: &GeodesicGraph, max_len: usize) -> SpectralSide {
    let chi_a = g.adjacency_matrix().charpoly();
    let n = g.vertex_count();
    let correction = g.undirected_edge_count() - n;
    let q = BigInt::from(g.q());
    // Π_λ (u² − λu + q) = Σ_k c_k (u² + q)^k u^{n−k}
    let shifted = IntPoly::new(vec![q.clone(), BigInt::zero(), BigInt::from(1)]);
    let mut pairs = IntPoly::zero();
    for (k, c) in chi_a.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = shifted.pow(k as u32) * IntPoly::monomial(c.clone(), n - k);
        pairs = &pairs + &term;
    }
    let correction_poly = IntPoly::from_i64(&[-1, 0, 1]).pow(correction as u32);
    let transfer_charpoly = pairs * correction_poly;
    let power_sums = transfer_charpoly.root_power_sums(max_len);
    SpectralSide { q: g.q(), adjacency_charpoly: chi_a, correction, transfer_charpoly, power_sums }
}

/// terms[m] = Σ_{ℓ(γ) = m} c_γ · tr ω(γ) · σ, with the |a_γ^{2ρ}| factor cancelled.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricSide {
    terms: Vec<Value>,
}

impl GeometricSide {
    pub fn term(&self, m: usize) -> Option<&Value> {
        m.checked_sub(1).and_then(|i| self.terms.get(i))
    }

    pub fn terms(&self) -> &[Value] {
        &self.terms
    }

    pub fn max_len(&self) -> usize {
        self.terms.len()
    }
}

/// λ_γ · (−1)^{q(G)+r} · χ_r(Γ_γ) with Γ_γ ≅ ℤ; equals ℓ(γ₀).
pub fn centralizer_weight(primitive_length: usize) -> BigRational {
    let lambda = BigRational::from_integer(BigInt::from(primitive_length));
    covolume(&lambda, SPLIT_RANK, CENTRALIZER_RANK, &BettiVector::free_abelian(CENTRALIZER_RANK))
}

pub fn geometric_side(g: &GeodesicGraph, max_len: usize, omega: &EdgeCharacter, sigma: Complex64) -> GeometricSide {
    geometric_side_from_classes(&primitive_geodesics(g, max_len), max_len, omega, sigma)
}

/// Like [`geometric_side`], reusing an enumeration of primitive classes
/// (which must contain every primitive class of length ≤ max_len).
pub fn geometric_side_from_classes(
    primitives: &[GeodesicClass],
    max_len: usize,
    omega: &EdgeCharacter,
    sigma: Complex64,
) -> GeometricSide {
    let mut weights: BTreeMap<usize, BigRational> = BTreeMap::new();
    let mut weight = |l: usize| weights.entry(l).or_insert_with(|| centralizer_weight(l)).clone();
    let exact = omega.is_trivial() && sigma == Complex64::new(1.0, 0.0);
    if exact {
        let mut terms = vec![BigRational::zero(); max_len];
        for c in primitives.iter().filter(|c| c.length() <= max_len) {
            let w = weight(c.length());
            for m in (c.length()..=max_len).step_by(c.length()) {
                terms[m - 1] += &w;
            }
        }
        let terms = terms
            .into_iter()
            .map(|t| Value::Exact(t.to_integer()))
            .collect();
        return GeometricSide { terms };
    }
    let mut terms = vec![Complex64::zero(); max_len];
    for c in primitives.iter().filter(|c| c.length() <= max_len) {
        let w = weight(c.length()).to_f64().unwrap_or(f64::NAN);
        for mu in 1..=max_len / c.length() {
            terms[mu * c.length() - 1] += omega.value(&c.power(mu)) * sigma * w;
        }
    }
    GeometricSide { terms: terms.into_iter().map(Value::Approx).collect() }
}

/// A finitely supported test function on A^-/A_c ≅ ℤ_{>0}, written in the
/// normalized basis φ_m = |a_m^{−2ρ}| · 1_{ℓ(a) = m}.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TestFunction {
    support: BTreeMap<usize, Complex64>,
}

impl TestFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn delta(m: usize) -> Result<Self, LefschetzError> {
        Self::from_pairs([(m, Complex64::new(1.0, 0.0))])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Complex64)>) -> Result<Self, LefschetzError> {
        let mut support = BTreeMap::new();
        for (m, c) in pairs {
            if m == 0 {
                return Err(LefschetzError::SupportOutsideAMinus);
            }
            *support.entry(m).or_insert_with(Complex64::zero) += c;
        }
        support.retain(|_, c| !c.is_zero());
        Ok(TestFunction { support })
    }

    pub fn add(&self, other: &TestFunction) -> TestFunction {
        let pairs = self.support.iter().chain(&other.support).map(|(&m, &c)| (m, c));
        Self::from_pairs(pairs).expect("supports are already positive")
    }

    pub fn scale(&self, c: Complex64) -> TestFunction {
        Self::from_pairs(self.support.iter().map(|(&m, &v)| (m, v * c))).expect("supports are already positive")
    }

    pub fn coefficient(&self, m: usize) -> Complex64 {
        self.support.get(&m).copied().unwrap_or_else(Complex64::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.support.iter().map(|(&m, &c)| (m, c))
    }

    pub fn max_support(&self) -> Option<usize> {
        self.support.keys().next_back().copied()
    }

    /// φ(a_m) itself: the coefficient times |a_m^{−2ρ}| = q^m.
    pub fn value_at(&self, ctx: &PadicContext, m: usize) -> Complex64 {
        self.coefficient(m) * length_delta(ctx, m).recip()
    }

    /// ‖φ‖ = Σ_m |φ(a_m)| · |a_m^{−2ρ}| for the counting measure on A^-/A_c.
    pub fn weighted_norm(&self, ctx: &PadicContext) -> f64 {
        self.support
            .keys()
            .map(|&m| self.value_at(ctx, m).norm() / length_delta(ctx, m))
            .sum()
    }
}

/// |a_m^{2ρ}| for the element a_m = diag(ϖ^m, 1) of length m in PGL₂.
pub fn length_delta(ctx: &PadicContext, m: usize) -> f64 {
    let a = length_element(ctx, m);
    modular_delta(&a, &RootDatum::pgl2()).to_f64()
}

/// The torus element a_m ∈ A^- corresponding to geodesic length m.
pub fn length_element(ctx: &PadicContext, m: usize) -> TorusElement {
    let rd = RootDatum::pgl2();
    TorusElement::from_valuations(*ctx, &rd, vec![m as i64, 0]).expect("valid PGL2 valuation vector")
}

/// A side of the identity viewed as a distribution on A^-.
pub trait Distribution {
    /// Largest m for which the side was computed.
    fn computed_range(&self) -> usize;
    fn term_at(&self, m: usize) -> Complex64;
}

impl Distribution for GeometricSide {
    fn computed_range(&self) -> usize {
        self.terms.len()
    }

    fn term_at(&self, m: usize) -> Complex64 {
        self.terms[m - 1].to_complex()
    }
}

impl Distribution for SpectralSide {
    fn computed_range(&self) -> usize {
        self.power_sums.len()
    }

    fn term_at(&self, m: usize) -> Complex64 {
        Complex64::new(self.power_sums[m - 1].to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

/// Σ_m φ_m · side[m]. Linear in φ; bounded by max_m |side[m]| · |a_m^{2ρ}| · ‖φ‖.
pub fn evaluate_distribution<D: Distribution + ?Sized>(side: &D, phi: &TestFunction) -> Result<Complex64, LefschetzError> {
    if let Some(m) = phi.max_support() {
        if m > side.computed_range() {
            return Err(LefschetzError::SupportOutOfRange { m, computed: side.computed_range() });
        }
    }
    Ok(phi.support().map(|(m, c)| c * side.term_at(m)).sum())
}

/// Constants used to match the geometric weights to centralizer covolumes.
#[derive(Debug, Clone, PartialEq)]
pub struct Dictionary {
    pub lambda_convention: &'static str,
    pub split_rank: u32,
    pub centralizer_rank: usize,
    /// χ₁(ℤ), computed from the Betti vector (1, 1).
    pub chi1: BigInt,
    /// (−1)^{q(G) + r}
    pub sign: i32,
    pub sigma_trace: f64,
    pub test_function: &'static str,
    pub tolerance: f64,
}

impl Dictionary {
    pub fn standard() -> Self {
        Dictionary {
            lambda_convention: "lambda_gamma = primitive length l(gamma_0), vol(A_c) = 1",
            split_rank: SPLIT_RANK,
            centralizer_rank: CENTRALIZER_RANK,
            chi1: chi_r(&BettiVector::free_abelian(CENTRALIZER_RANK), CENTRALIZER_RANK),
            sign: if (SPLIT_RANK as usize + CENTRALIZER_RANK).is_multiple_of(2) { 1 } else { -1 },
            sigma_trace: 1.0,
            test_function: "phi(a) = |a^(-2rho)| * 1[l(a) = m]",
            tolerance: TWIST_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LefschetzRow {
    pub m: usize,
    pub geometric: Value,
    pub transfer_trace: Value,
    pub spectral_from_adjacency: Option<BigInt>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LefschetzReport {
    pub q: u64,
    pub exact: bool,
    pub rows: Vec<LefschetzRow>,
    pub dictionary: Dictionary,
}

impl LefschetzReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn first_failure(&self) -> Option<&LefschetzRow> {
        self.rows.iter().find(|r| !r.pass)
    }

    pub fn into_result(self) -> Result<Self, LefschetzError> {
        match self.first_failure() {
            None => Ok(self),
            Some(r) => Err(LefschetzError::Mismatch {
                m: r.m,
                geometric: r.geometric.clone(),
                transfer_trace: r.transfer_trace.clone(),
                spectral: r.spectral_from_adjacency.as_ref().map_or("skipped".into(), ToString::to_string),
            }),
        }
    }
}

pub fn verify_lefschetz(g: &GeodesicGraph, max_len: usize, omega: &EdgeCharacter) -> Result<LefschetzReport, LefschetzError> {
    if max_len == 0 {
        return Err(LefschetzError::ZeroLength);
    }
    Ok(verify_with_classes(g, &primitive_geodesics(g, max_len), max_len, omega))
}

/// [`verify_lefschetz`] with a precomputed enumeration of primitive classes.
pub fn verify_with_classes(
    g: &GeodesicGraph,
    primitives: &[GeodesicClass],
    max_len: usize,
    omega: &EdgeCharacter,
) -> LefschetzReport {
    let geometric = geometric_side_from_classes(primitives, max_len, omega, Complex64::new(1.0, 0.0));
    let exact = omega.is_trivial();
    let (transfer, spectral): (Vec<Value>, Option<SpectralSide>) = if exact {
        let t = g.closed_geodesic_counts(max_len).into_iter().map(Value::Exact).collect();
        (t, Some(spectral_side_from_adjacency(g, max_len)))
    } else {
        (g.twisted_transfer_traces(omega, max_len).into_iter().map(Value::Approx).collect(), None)
    };
    let rows = (1..=max_len)
        .map(|m| {
            let geo = geometric.term(m).unwrap().clone();
            let tr = transfer[m - 1].clone();
            let sp = spectral.as_ref().and_then(|s| s.power_sum(m).cloned());
            let pass = geo.agrees_with(&tr) && sp.as_ref().is_none_or(|s| Value::Exact(s.clone()) == tr);
            LefschetzRow { m, geometric: geo, transfer_trace: tr, spectral_from_adjacency: sp, pass }
        })
        .collect();
    LefschetzReport { q: g.q(), exact, rows, dictionary: Dictionary::standard() }
}
