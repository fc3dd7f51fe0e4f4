//! The contraction region (AM)~ of elements am whose torus part dominates.
//!
//! Adjoint actions are computed on the matrix-unit basis {e_ij} of the Lie
//! algebra: n = upper triangular units, n̄ = lower triangular units and the
//! diagonal part. For SL_n and PGL₂ the diagonal part is the trace-zero
//! subspace spanned by e_ii - e_nn, which drops the center.
//!
//! The parabolic is the upper-triangular Borel, so the Levi L is the diagonal
//! torus and M is its unit-valuation part. An m is "elliptic" when every
//! eigenvalue of m has absolute value 1.

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::matrix::RatMatrix;
use crate::padic::{AbsValueSpectrum, PadicContext, PadicError, QPower, Valuation};
use crate::root_datum::{in_a_minus, modular_delta, Family, RootDatum, RootDatumError, TorusElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractionError {
    #[error(transparent)]
    RootDatum(#[from] RootDatumError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("the contraction region needs n >= 2, got n = {0}")]
    TooSmall(usize),
    #[error("m must be an invertible {n}x{n} matrix")]
    BadLevi { n: usize },
    #[error("m is not in the Levi subgroup (diagonal torus of the Borel)")]
    NotInLevi,
    #[error("a and m do not commute")]
    NotCommuting,
    #[error("determinant identity needs a in A^- and elliptic m: {0}")]
    Precondition(&'static str),
}

/// An Ad(am)-stable subspace of the Lie algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subspace {
    N,
    NBar,
    G,
    /// a + m + n
    AMN,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BasisElem {
    Unit(usize, usize),
    /// e_ii - e_{n-1,n-1}
    DiagDiff(usize),
}

fn basis(rd: &RootDatum, sub: Subspace) -> Vec<BasisElem> {
    let n = rd.n();
    let upper = (0..n).flat_map(|i| (i + 1..n).map(move |j| BasisElem::Unit(i, j)));
    let lower = (0..n).flat_map(|i| (0..i).map(move |j| BasisElem::Unit(i, j)));
    let diag: Vec<BasisElem> = match rd.family() {
        Family::Gl => (0..n).map(|i| BasisElem::Unit(i, i)).collect(),
        Family::Sl | Family::Pgl2 => (0..n - 1).map(BasisElem::DiagDiff).collect(),
    };
    match sub {
        Subspace::N => upper.collect(),
        Subspace::NBar => lower.collect(),
        Subspace::AMN => diag.into_iter().chain(upper).collect(),
        Subspace::G => diag.into_iter().chain(upper).chain(lower).collect(),
    }
}

fn basis_matrix(n: usize, b: BasisElem) -> RatMatrix {
    let mut m = RatMatrix::zeros(n, n);
    match b {
        BasisElem::Unit(i, j) => m.set(i, j, BigRational::one()),
        BasisElem::DiagDiff(i) => {
            m.set(i, i, BigRational::one());
            m.set(n - 1, n - 1, -BigRational::one());
        }
    }
    m
}

fn coordinate(y: &RatMatrix, b: BasisElem) -> BigRational {
    match b {
        BasisElem::Unit(i, j) => y.get(i, j).clone(),
        BasisElem::DiagDiff(i) => y.get(i, i).clone(),
    }
}

/// Matrix of X ↦ g X g⁻¹ on the given subspace, in its basis.
pub fn adjoint_matrix(rd: &RootDatum, g: &RatMatrix, sub: Subspace) -> RatMatrix {
    let n = rd.n();
    let g_inv = g.inverse().expect("adjoint action of a singular matrix");
    let b = basis(rd, sub);
    let mut out = RatMatrix::zeros(b.len(), b.len());
    for (col, &elem) in b.iter().enumerate() {
        let image = &(g * &basis_matrix(n, elem)) * &g_inv;
        for (row, &target) in b.iter().enumerate() {
            out.set(row, col, coordinate(&image, target));
        }
    }
    out
}

/// E(Ad(g) | subspace).
pub fn adjoint_spectrum_of(
    ctx: PadicContext,
    rd: &RootDatum,
    g: &RatMatrix,
    sub: Subspace,
) -> Result<AbsValueSpectrum, PadicError> {
    let ad = adjoint_matrix(rd, g, sub);
    if ad.rows() == 0 {
        return Ok(AbsValueSpectrum::default());
    }
    ctx.eigen_abs_values(&ad)
}

/// A torus element a with a diagonal representative, and m in the Levi.
#[derive(Debug, Clone, PartialEq)]
pub struct LeviPair {
    ctx: PadicContext,
    rd: RootDatum,
    a: TorusElement,
    a_matrix: RatMatrix,
    m: RatMatrix,
}

impl LeviPair {
    pub fn new(
        ctx: PadicContext,
        rd: RootDatum,
        a_diag: &[BigRational],
        m: RatMatrix,
    ) -> Result<Self, ContractionError> {
        let n = rd.n();
        if n < 2 {
            return Err(ContractionError::TooSmall(n));
        }
        let a = TorusElement::from_diagonal(ctx, &rd, a_diag)?;
        if m.rows() != n || m.cols() != n || m.det().is_zero() {
            return Err(ContractionError::BadLevi { n });
        }
        if !m.is_diagonal() {
            return Err(ContractionError::NotInLevi);
        }
        let a_matrix = RatMatrix::from_diagonal(a_diag);
        if &a_matrix * &m != &m * &a_matrix {
            return Err(ContractionError::NotCommuting);
        }
        Ok(LeviPair { ctx, rd, a, a_matrix, m })
    }

    /// a = diag(q^{v_1}, ..., q^{v_n}) and m = 1.
    pub fn from_valuations(ctx: PadicContext, rd: RootDatum, val: &[i64]) -> Result<Self, ContractionError> {
        let diag: Vec<BigRational> = val.iter().map(|&v| ctx.power(v)).collect();
        let m = RatMatrix::identity(rd.n());
        Self::new(ctx, rd, &diag, m)
    }

    pub fn ctx(&self) -> PadicContext {
        self.ctx
    }

    pub fn root_datum(&self) -> &RootDatum {
        &self.rd
    }

    pub fn a(&self) -> &TorusElement {
        &self.a
    }

    pub fn a_matrix(&self) -> &RatMatrix {
        &self.a_matrix
    }

    pub fn m(&self) -> &RatMatrix {
        &self.m
    }

    pub fn am(&self) -> RatMatrix {
        &self.a_matrix * &self.m
    }

    /// All eigenvalues of m have absolute value 1.
    pub fn is_elliptic_model(&self) -> bool {
        self.ctx
            .eigen_abs_values(&self.m)
            .map(|s| s.iter().all(|(v, _)| v.is_zero()))
            .unwrap_or(false)
    }

    /// a^k m (m unchanged).
    pub fn with_torus_power(&self, k: i64) -> Result<Self, ContractionError> {
        let diag: Vec<BigRational> = self
            .a_matrix
            .diagonal()
            .into_iter()
            .map(|x| if k >= 0 { num::pow(x, k as usize) } else { num::pow(x.recip(), k.unsigned_abs() as usize) })
            .collect();
        Self::new(self.ctx, self.rd.clone(), &diag, self.m.clone())
    }

    pub fn adjoint_spectrum(&self, sub: Subspace) -> Result<AbsValueSpectrum, ContractionError> {
        Ok(adjoint_spectrum_of(self.ctx, &self.rd, &self.am(), sub)?)
    }

    /// λ(am) = λ_min(a | n̄) / λ_max(m | g)², as the exponent e with λ(am) = q^e.
    pub fn lambda_am(&self) -> Result<BigRational, ContractionError> {
        let a_nbar = adjoint_spectrum_of(self.ctx, &self.rd, &self.a_matrix, Subspace::NBar)?;
        let m_g = adjoint_spectrum_of(self.ctx, &self.rd, &self.m, Subspace::G)?;
        let lo = a_nbar.lambda_min_max()?.min_exp;
        let hi = m_g.lambda_min_max()?.max_exp;
        Ok(lo - hi * BigRational::from_integer(BigInt::from(2)))
    }

    pub fn in_am_tilde(&self) -> Result<bool, ContractionError> {
        Ok(self.lambda_am()?.is_positive())
    }

    /// (|det(1 - Ad(am) | n + n̄)|, |a^{-2ρ}|), both as powers of q.
    pub fn det_identity(&self) -> Result<DetIdentity, ContractionError> {
        if !in_a_minus(&self.a, &self.rd) {
            return Err(ContractionError::Precondition("a is not in A^-"));
        }
        if !self.is_elliptic_model() {
            return Err(ContractionError::Precondition("m is not elliptic"));
        }
        let ad = adjoint_matrix(&self.rd, &self.am(), Subspace::G);
        let b = basis(&self.rd, Subspace::G);
        // Restrict to the n + n̄ block: off-diagonal matrix units only.
        let idx: Vec<usize> = b
            .iter()
            .enumerate()
            .filter(|(_, e)| matches!(e, BasisElem::Unit(i, j) if i != j))
            .map(|(k, _)| k)
            .collect();
        let one_minus = RatMatrix::from_fn(idx.len(), idx.len(), |r, c| {
            let delta = if r == c { BigRational::one() } else { BigRational::zero() };
            delta - ad.get(idx[r], idx[c]).clone()
        });
        let det = one_minus.det();
        let lhs = match self.ctx.valuation(&det) {
            Valuation::Finite(v) => self.ctx.qpower(BigRational::from_integer(BigInt::from(-v))),
            Valuation::Infinity => return Err(ContractionError::Precondition("1 - Ad(am) is singular")),
        };
        let delta = modular_delta(&self.a, &self.rd);
        let rhs = self.ctx.qpower(-delta.exponent);
        Ok(DetIdentity { lhs, rhs })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetIdentity {
    pub lhs: QPower,
    pub rhs: QPower,
}

impl DetIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// The structural properties of (AM)~ checked on one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaProperty {
    /// a ∈ A^- and m elliptic ⇒ am ∈ (AM)~
    ContainsAMinusElliptic,
    /// am ∈ (AM)~ ⇒ a ∈ A^-
    ImpliesAMinus,
    /// am ∈ (AM)~ ⇒ every eigenvalue on n̄ is strictly bigger than every eigenvalue on a + m + n
    Separation,
    /// λ_max(m | g) · λ_min(m | g) = 1
    AdjointSymmetry,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaFailure {
    pub sample: usize,
    pub property: MaProperty,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MaReport {
    pub samples: usize,
    /// Samples where property 1 applied (a ∈ A^-, m elliptic).
    pub premise_contains: usize,
    /// Samples inside (AM)~.
    pub in_region: usize,
    /// Samples with a ∉ A^-.
    pub outside_a_minus: usize,
    pub failures: Vec<MaFailure>,
}

impl MaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the (AM)~ properties on every sample; the report keeps input order.
pub fn check_ma_properties(samples: &[LeviPair]) -> Result<MaReport, ContractionError> {
    let mut report = MaReport { samples: samples.len(), ..MaReport::default() };
    for (k, p) in samples.iter().enumerate() {
        let a_minus = in_a_minus(p.a(), p.root_datum());
        let elliptic = p.is_elliptic_model();
        let lambda = p.lambda_am()?;
        let inside = lambda.is_positive();
        let mut fail = |property, detail: String| {
            report.failures.push(MaFailure { sample: k, property, detail });
        };
        if !a_minus {
            report.outside_a_minus += 1;
        }
        if a_minus && elliptic {
            report.premise_contains += 1;
            if !inside {
                fail(MaProperty::ContainsAMinusElliptic, format!("λ(am) exponent {lambda} <= 0"));
            }
        }
        if inside {
            report.in_region += 1;
            if !a_minus {
                fail(MaProperty::ImpliesAMinus, format!("v(a) = {:?}", p.a().valuations()));
            }
            let nbar = p.adjoint_spectrum(Subspace::NBar)?;
            let rest = p.adjoint_spectrum(Subspace::AMN)?;
            // bigger absolute value means smaller valuation
            let (Some(nbar_max), Some(rest_min)) = (nbar.max_valuation(), rest.min_valuation()) else {
                continue;
            };
            if nbar_max >= rest_min {
                fail(
                    MaProperty::Separation,
                    format!("n̄ valuations {nbar} vs a+m+n valuations {rest}"),
                );
            }
        }
        let mg = adjoint_spectrum_of(p.ctx(), p.root_datum(), p.m(), Subspace::G)?;
        let ext = mg.lambda_min_max()?;
        if !(ext.min_exp.clone() + ext.max_exp.clone()).is_zero() {
            fail(
                MaProperty::AdjointSymmetry,
                format!("λ_min, λ_max exponents {} and {}", ext.min_exp, ext.max_exp),
            );
        }
    }
    Ok(report)
}

/// How to draw the torus part of a random sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorusDraw {
    /// strictly decreasing valuations
    AMinus,
    /// independent valuations in [-3, 3]
    Any,
}

fn random_unit<R: Rng + ?Sized>(ctx: PadicContext, rng: &mut R) -> BigRational {
    let q = ctx.q() as i64;
    let mut draw = || loop {
        let x: i64 = rng.random_range(1..=20);
        if x % q != 0 {
            return x;
        }
    };
    let (num, den) = (draw(), draw());
    let sign = if rng.random_bool(0.5) { 1 } else { -1 };
    BigRational::new(BigInt::from(sign * num), BigInt::from(den))
}

fn random_valuations<R: Rng + ?Sized>(rd: &RootDatum, draw: TorusDraw, rng: &mut R) -> Vec<i64> {
    let n = rd.n();
    loop {
        let mut v = vec![0i64; n];
        match draw {
            TorusDraw::AMinus => {
                v[n - 1] = rng.random_range(-3..=3);
                for i in (0..n - 1).rev() {
                    v[i] = v[i + 1] + rng.random_range(1..=3);
                }
            }
            TorusDraw::Any => v.iter_mut().for_each(|x| *x = rng.random_range(-3..=3)),
        }
        if rd.family() != Family::Sl {
            return v;
        }
        let s: i64 = v.iter().sum();
        if s % n as i64 == 0 {
            let shift = s / n as i64;
            return v.into_iter().map(|x| x - shift).collect();
        }
    }
}

/// A random Levi pair. `elliptic` draws m with unit entries, otherwise m has
/// random valuations.
pub fn random_levi_pair<R: Rng + ?Sized>(
    ctx: PadicContext,
    rd: &RootDatum,
    draw: TorusDraw,
    elliptic: bool,
    rng: &mut R,
) -> LeviPair {
    let n = rd.n();
    let val = random_valuations(rd, draw, rng);
    let a_diag: Vec<BigRational> = val.iter().map(|&v| ctx.power(v) * random_unit(ctx, rng)).collect();
    let m_diag: Vec<BigRational> = (0..n)
        .map(|_| {
            let u = random_unit(ctx, rng);
            if elliptic {
                u
            } else {
                u * ctx.power(rng.random_range(-2..=2))
            }
        })
        .collect();
    LeviPair::new(ctx, rd.clone(), &a_diag, RatMatrix::from_diagonal(&m_diag))
        .expect("random samples satisfy the Levi constraints")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{rat, ratio};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx(q: u64) -> PadicContext {
        PadicContext::new(q).unwrap()
    }

    fn gl(n: usize) -> RootDatum {
        RootDatum::gl(n).unwrap()
    }

    fn vals(s: &AbsValueSpectrum) -> Vec<(BigRational, usize)> {
        s.iter().map(|(v, m)| (v.clone(), m)).collect()
    }

    #[test]
    fn adjoint_spectrum_examples() {
        let p = LeviPair::from_valuations(ctx(3), gl(2), &[2, 0]).unwrap();
        assert_eq!(vals(&p.adjoint_spectrum(Subspace::NBar).unwrap()), vec![(rat(-2), 1)]);

        let id = LeviPair::from_valuations(ctx(3), gl(3), &[0, 0, 0]).unwrap();
        for sub in [Subspace::N, Subspace::NBar, Subspace::G, Subspace::AMN] {
            assert!(id.adjoint_spectrum(sub).unwrap().iter().all(|(v, _)| v.is_zero()));
        }

        let u = ratio(5, 7);
        let m = RatMatrix::from_diagonal(&[u, rat(1)]);
        let p = LeviPair::new(ctx(3), gl(2), &[rat(3), rat(1)], m).unwrap();
        assert_eq!(vals(&p.adjoint_spectrum(Subspace::N).unwrap()), vec![(rat(1), 1)]);
        assert_eq!(p.adjoint_spectrum(Subspace::G).unwrap().dimension(), 4);
    }

    #[test]
    fn lambda_examples() {
        let p = LeviPair::from_valuations(ctx(3), gl(2), &[2, 0]).unwrap();
        assert_eq!(p.lambda_am().unwrap(), rat(2));
        assert!(p.in_am_tilde().unwrap());

        let id = LeviPair::from_valuations(ctx(3), gl(2), &[0, 0]).unwrap();
        assert_eq!(id.lambda_am().unwrap(), rat(0));
        assert!(!id.in_am_tilde().unwrap());

        let m = RatMatrix::from_diagonal(&[ratio(3, 5), ratio(-1, 7)]);
        let p = LeviPair::new(ctx(2), gl(2), &[rat(2), rat(1)], m).unwrap();
        assert!(p.is_elliptic_model());
        assert_eq!(p.lambda_am().unwrap(), rat(1));

        let p = LeviPair::from_valuations(ctx(3), gl(2), &[0, 1]).unwrap();
        assert!(!p.in_am_tilde().unwrap());
    }

    #[test]
    fn non_elliptic_m_shrinks_lambda() {
        // λ_max(m|g) = 3 squared cancels the torus contraction of 9.
        let m = RatMatrix::from_diagonal(&[rat(3), rat(1)]);
        let p = LeviPair::new(ctx(3), gl(2), &[rat(9), rat(1)], m).unwrap();
        assert!(!p.is_elliptic_model());
        assert_eq!(p.lambda_am().unwrap(), rat(0));
    }

    #[test]
    fn separation_example() {
        let p = LeviPair::from_valuations(ctx(3), gl(2), &[2, 0]).unwrap();
        let report = check_ma_properties(&[p]).unwrap();
        assert!(report.passed());
        assert_eq!(report.in_region, 1);
    }

    #[test]
    fn identity_sample_is_vacuous() {
        let id = LeviPair::from_valuations(ctx(5), gl(3), &[0, 0, 0]).unwrap();
        let report = check_ma_properties(&[id]).unwrap();
        assert!(report.passed());
        assert_eq!((report.premise_contains, report.in_region), (0, 0));
    }

    #[test]
    fn det_identity_examples() {
        let p = LeviPair::from_valuations(ctx(3), gl(2), &[1, 0]).unwrap();
        let d = p.det_identity().unwrap();
        assert_eq!(d.lhs.to_rational(), Some(rat(3)));
        assert_eq!(d.rhs.to_rational(), Some(rat(3)));

        let p = LeviPair::from_valuations(ctx(2), gl(3), &[2, 1, 0]).unwrap();
        let d = p.det_identity().unwrap();
        assert!(d.holds());
        assert_eq!(d.lhs.to_rational(), Some(rat(16)));

        let id = LeviPair::from_valuations(ctx(2), gl(2), &[0, 0]).unwrap();
        assert!(matches!(id.det_identity(), Err(ContractionError::Precondition(_))));
    }

    #[test]
    fn sl_and_pgl_models() {
        let sl = RootDatum::sl(3).unwrap();
        let p = LeviPair::from_valuations(ctx(3), sl.clone(), &[1, 0, -1]).unwrap();
        assert_eq!(p.adjoint_spectrum(Subspace::G).unwrap().dimension(), 8);
        assert!(p.det_identity().unwrap().holds());
        let pgl = RootDatum::pgl2();
        let p = LeviPair::from_valuations(ctx(2), pgl, &[3, 1]).unwrap();
        assert_eq!(p.adjoint_spectrum(Subspace::G).unwrap().dimension(), 3);
        assert_eq!(p.lambda_am().unwrap(), rat(2));
    }

    #[test]
    fn levi_validation() {
        let off = RatMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(
            LeviPair::new(ctx(2), gl(2), &[rat(1), rat(1)], off),
            Err(ContractionError::NotInLevi)
        );
        let sing = RatMatrix::from_diagonal(&[rat(0), rat(1)]);
        assert!(matches!(
            LeviPair::new(ctx(2), gl(2), &[rat(1), rat(1)], sing),
            Err(ContractionError::BadLevi { .. })
        ));
        assert_eq!(
            LeviPair::from_valuations(ctx(2), gl(1), &[1]),
            Err(ContractionError::TooSmall(1))
        );
    }

    #[test]
    fn lambda_is_linear_in_torus_powers() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let rd = gl(rng.random_range(2..=3));
            let base = random_levi_pair(ctx(3), &rd, TorusDraw::Any, true, &mut rng);
            let p = LeviPair::new(ctx(3), rd, &base.a_matrix().diagonal(), RatMatrix::identity(base.rd.n())).unwrap();
            let l1 = p.lambda_am().unwrap();
            for k in 1..=3 {
                let lk = p.with_torus_power(k).unwrap().lambda_am().unwrap();
                assert_eq!(lk, &l1 * BigRational::from_integer(BigInt::from(k)));
            }
        }
    }
}
