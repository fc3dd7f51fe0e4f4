//! Euler characteristics and higher Euler characteristics of Betti vectors.
//!
//! A central extension 1 → ℤ^r → Γ → Λ → 1 whose Hochschild–Serre spectral
//! sequence degenerates at E_2 has the Betti vector of Λ convolved r times
//! with (1, 1), the rational cohomology of ℤ.

use std::fmt;

use num::{BigInt, BigRational, BigUint, One, Zero};
use rand::Rng;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BettiVector {
    b: Vec<BigUint>,
}

impl BettiVector {
    pub fn new(mut b: Vec<BigUint>) -> Self {
        while b.last().is_some_and(Zero::is_zero) {
            b.pop();
        }
        BettiVector { b }
    }

    pub fn entries(&self) -> &[BigUint] {
        &self.b
    }

    /// cd over ℚ, or `None` for the zero vector.
    pub fn cohomological_dimension(&self) -> Option<usize> {
        self.b.len().checked_sub(1)
    }

    /// Betti numbers of ℤ^r: the binomial row.
    pub fn free_abelian(r: usize) -> Self {
        central_extension_betti(&BettiVector::from(vec![1u64]), r)
    }

    pub fn add(&self, other: &BettiVector) -> BettiVector {
        let n = self.b.len().max(other.b.len());
        let get = |v: &[BigUint], i: usize| v.get(i).cloned().unwrap_or_default();
        BettiVector::new((0..n).map(|i| get(&self.b, i) + get(&other.b, i)).collect())
    }

    /// Random vector of length 1..=max_len with entries in 0..=max_entry and b_0 ≥ 1.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_len: usize, max_entry: u64) -> Self {
        let len = rng.random_range(1..=max_len);
        let mut b: Vec<u64> = (0..len).map(|_| rng.random_range(0..=max_entry)).collect();
        b[0] = b[0].max(1);
        BettiVector::from(b)
    }
}

impl From<Vec<u64>> for BettiVector {
    fn from(v: Vec<u64>) -> Self {
        BettiVector::new(v.into_iter().map(BigUint::from).collect())
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.b.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// χ = Σ_p (-1)^p b_p.
pub fn chi(b: &BettiVector) -> BigInt {
    chi_r(b, 0)
}

/// χ_r = Σ_p (-1)^{p+r} C(p, r) b_p.
pub fn chi_r(b: &BettiVector, r: usize) -> BigInt {
    b.b.iter()
        .enumerate()
        .skip(r)
        .map(|(p, bp)| {
            let term = binomial(p, r) * BigInt::from(bp.clone());
            if (p + r).is_multiple_of(2) {
                term
            } else {
                -term
            }
        })
        .sum()
}

fn convolve_circle(b: &BettiVector) -> BettiVector {
    if b.b.is_empty() {
        return b.clone();
    }
    let mut out = vec![BigUint::zero(); b.b.len() + 1];
    for (p, bp) in b.b.iter().enumerate() {
        out[p] += bp;
        out[p + 1] += bp;
    }
    BettiVector::new(out)
}

/// Betti vector of a central ℤ^r extension of a group with Betti vector `b`.
pub fn central_extension_betti(b: &BettiVector, r: usize) -> BettiVector {
    (0..r).fold(b.clone(), |acc, _| convolve_circle(&acc))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChichiCheck {
    /// χ(Λ)
    pub base_chi: BigInt,
    /// χ_r(Γ)
    pub extension_chi_r: BigInt,
    /// s for which χ_{s-1}(Λ) ≠ χ_s(Λ * (1,1)).
    pub failed_steps: Vec<usize>,
}

impl ChichiCheck {
    pub fn holds(&self) -> bool {
        self.base_chi == self.extension_chi_r && self.failed_steps.is_empty()
    }
}

/// Checks χ(Λ) = χ_r(Γ) for the extension, together with the one-step
/// identities χ_{s-1}(Λ) = χ_s(Λ ⊗ ℤ) for 1 ≤ s ≤ r.
pub fn verify_chichi(b: &BettiVector, r: usize) -> ChichiCheck {
    let ext = central_extension_betti(b, r);
    let one_step = convolve_circle(b);
    let failed_steps = (1..=r)
        .filter(|&s| chi_r(b, s - 1) != chi_r(&one_step, s))
        .collect();
    ChichiCheck { base_chi: chi(b), extension_chi_r: chi_r(&ext, r), failed_steps }
}

/// vol(Γ_γ \ G_γ) = λ_γ · (-1)^{q(G)+r} · χ_r(Γ_γ).
pub fn covolume(lambda: &BigRational, split_rank: u32, r: usize, b: &BettiVector) -> BigRational {
    let chi = BigRational::from_integer(chi_r(b, r));
    let v = lambda * chi;
    if (split_rank as usize + r).is_multiple_of(2) {
        v
    } else {
        -v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::rat;
    use proptest::prelude::*;

    fn bv(v: &[u64]) -> BettiVector {
        BettiVector::from(v.to_vec())
    }

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(&bv(&[1])), int(1));
        assert_eq!(chi(&bv(&[1, 4, 1])), int(-2));
        assert_eq!(chi(&bv(&[1, 2, 1])), int(0));
    }

    #[test]
    fn chi_r_examples() {
        for r in 0..=6 {
            assert_eq!(chi_r(&BettiVector::free_abelian(r), r), int(1), "r = {r}");
        }
        assert_eq!(chi_r(&bv(&[1, 1]), 1), int(1));
        assert_eq!(chi_r(&bv(&[1, 5, 5, 1]), 1), int(-2));
        assert_eq!(chi_r(&bv(&[1, 4, 1]), 0), chi(&bv(&[1, 4, 1])));
        assert_eq!(chi_r(&bv(&[1, 1]), 5), int(0));
    }

    #[test]
    fn extension_examples() {
        assert_eq!(central_extension_betti(&bv(&[1, 4, 1]), 1), bv(&[1, 5, 5, 1]));
        assert_eq!(central_extension_betti(&bv(&[2, 0, 7]), 0), bv(&[2, 0, 7]));
        assert_eq!(central_extension_betti(&bv(&[1]), 3), bv(&[1, 3, 3, 1]));
        assert_eq!(bv(&[1, 2, 0, 0]), bv(&[1, 2]));
    }

    #[test]
    fn chichi_examples() {
        let c = verify_chichi(&bv(&[1, 4, 1]), 1);
        assert!(c.holds());
        assert_eq!(c.base_chi, int(-2));
        for r in 0..=6 {
            assert!(verify_chichi(&bv(&[1]), r).holds());
        }
    }

    #[test]
    fn covolume_examples() {
        assert_eq!(covolume(&rat(2), 1, 1, &bv(&[1, 1])), rat(2));
        assert_eq!(covolume(&rat(1), 0, 0, &bv(&[1])), rat(1));
        assert_eq!(covolume(&rat(3), 1, 1, &bv(&[1, 1])), rat(3));
        // sign flips with the parity of q(G) + r
        assert_eq!(covolume(&rat(3), 0, 1, &bv(&[1, 1])), rat(-3));
    }

    fn betti() -> impl Strategy<Value = BettiVector> {
        prop::collection::vec(0u64..=20, 1..=10).prop_map(BettiVector::from)
    }

    proptest! {
        #[test]
        fn chichi_always_holds(b in betti(), r in 0usize..=4) {
            prop_assert!(verify_chichi(&b, r).holds());
        }

        #[test]
        fn chi_r_is_linear(a in betti(), b in betti(), r in 0usize..=5) {
            prop_assert_eq!(chi_r(&a.add(&b), r), chi_r(&a, r) + chi_r(&b, r));
        }

        #[test]
        fn extensions_compose(b in betti(), r1 in 0usize..=3, r2 in 0usize..=3) {
            let two_step = central_extension_betti(&central_extension_betti(&b, r1), r2);
            prop_assert_eq!(two_step, central_extension_betti(&b, r1 + r2));
        }

        #[test]
        fn plain_chi_vanishes_on_extensions(b in betti(), r in 1usize..=4) {
            prop_assert_eq!(chi(&central_extension_betti(&b, r)), BigInt::zero());
        }
    }
}
