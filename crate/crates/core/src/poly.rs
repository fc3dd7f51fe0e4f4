//! Dense univariate polynomials over exact rings.
//!
//! Coefficients are stored in ascending degree order: `coeffs[i]` is the
//! coefficient of x^i. The zero polynomial has an empty coefficient vector and
//! the leading coefficient of every other polynomial is nonzero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::matrix::IntMatrix;

/// Coefficient ring for [`Poly`].
pub trait Coeff:
    Clone + PartialEq + Zero + One + Neg<Output = Self> + Sub<Output = Self> + fmt::Debug
{
}

impl<T> Coeff for T where
    T: Clone + PartialEq + Zero + One + Neg<Output = T> + Sub<Output = T> + fmt::Debug
{
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type IntPoly = Poly<BigInt>;
pub type RatPoly = Poly<BigRational>;

impl<T: Coeff> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Builds a polynomial from coefficients listed from the leading term down.
    pub fn from_descending(mut coeffs: Vec<T>) -> Self {
        coeffs.reverse();
        Self::new(coeffs)
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate x.
    pub fn x() -> Self {
        Poly { coeffs: vec![T::zero(), T::one()] }
    }

    pub fn monomial(c: T, deg: usize) -> Self {
        let mut coeffs = vec![T::zero(); deg + 1];
        coeffs[deg] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    /// Order of vanishing at zero (number of leading zero coefficients).
    pub fn zero_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Evaluates at a polynomial argument, i.e. computes `self(inner)`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl IntPoly {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn to_rational(&self) -> RatPoly {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    /// Power sums p_m = Σ r_i^m of the roots of a monic polynomial, for m = 1..=count,
    /// by Newton's identities. Integer-exact because the polynomial is monic.
    pub fn root_power_sums(&self, count: usize) -> Vec<BigInt> {
        assert!(self.is_monic(), "power sums need a monic polynomial");
        let n = self.degree().unwrap_or(0);
        // f[k] is the coefficient of x^{n-k}.
        let f: Vec<BigInt> = (0..=n).map(|k| self.coeff(n - k)).collect();
        let mut p: Vec<BigInt> = Vec::with_capacity(count + 1);
        p.push(BigInt::from(n));
        for m in 1..=count {
            let mut s = BigInt::zero();
            for k in 1..=m.min(n) {
                if k < m {
                    s += &f[k] * &p[m - k];
                } else {
                    s += &f[k] * BigInt::from(m);
                }
            }
            p.push(-s);
        }
        p.remove(0);
        p
    }
}

impl RatPoly {
    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        for shift in (0..=nd - dd).rev() {
            let c = &rem[shift + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &c * d;
            }
            quot[shift] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        match a.leading().cloned() {
            Some(l) => a.scale(&l.recip()),
            None => a,
        }
    }

    /// Returns the integer polynomial when every coefficient is integral.
    pub fn to_integer(&self) -> Option<IntPoly> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntPoly::new)
    }
}

/// The k-th cyclotomic polynomial, via x^k - 1 = Π_{d | k} Φ_d.
pub fn cyclotomic(k: usize) -> IntPoly {
    assert!(k >= 1);
    let mut p = RatPoly::monomial(BigRational::one(), k) - RatPoly::one();
    for d in 1..k {
        if k.is_multiple_of(d) {
            p = p.div_rem(&cyclotomic(d).to_rational()).0;
        }
    }
    p.to_integer().expect("cyclotomic polynomials are integral")
}

/// Res(f, g) = lc(f)^deg(g) · Π g(α) over the roots α of f, as a Sylvester determinant.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    let (Some(n), Some(k)) = (f.degree(), g.degree()) else {
        return BigInt::zero();
    };
    let size = n + k;
    if size == 0 {
        return BigInt::one();
    }
    let mut s = IntMatrix::zeros(size, size);
    for row in 0..k {
        for i in 0..=n {
            s.set(row, row + i, f.coeff(n - i));
        }
    }
    for row in 0..n {
        for i in 0..=k {
            s.set(k + row, row + i, g.coeff(k - i));
        }
    }
    s.det()
}

/// The polynomial of degree < points.len() through the given points (Newton form).
pub fn interpolate(points: &[(BigRational, BigRational)]) -> RatPoly {
    let n = points.len();
    let mut dd: Vec<BigRational> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let dx = &points[i].0 - &points[i - level].0;
            assert!(!dx.is_zero(), "interpolation nodes must be distinct");
            dd[i] = (&dd[i] - &dd[i - 1]) / dx;
        }
    }
    let mut out = RatPoly::zero();
    for i in (0..n).rev() {
        let shift = RatPoly::new(vec![-points[i].0.clone(), BigRational::one()]);
        out = &(&out * &shift) + &RatPoly::constant(dd[i].clone());
    }
    out
}

impl<'a, T: Coeff> Add<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a, T: Coeff> Sub<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a, T: Coeff> Mul<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Coeff> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Coeff> Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Coeff> Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<T: Coeff> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Self {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<T: Coeff + fmt::Display + Signed> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !abs.is_one() || i == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Poly").field(&self.coeffs).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(3), IntPoly::from_i64(&[1, 1, 1]));
        assert_eq!(cyclotomic(4), IntPoly::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), IntPoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn power_sums_of_known_roots() {
        // (x-3)(x+1)^3
        let p = IntPoly::from_i64(&[-3, 1]) * IntPoly::from_i64(&[1, 1]).pow(3);
        let sums = p.root_power_sums(4);
        let expect: Vec<BigInt> = [0i64, 12, 24, 84].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(sums, expect);
        // u^2 + u + 2: roots satisfy p3 = 5, p4 = 1
        let q = IntPoly::from_i64(&[2, 1, 1]);
        let s = q.root_power_sums(4);
        assert_eq!(s[2], BigInt::from(5));
        assert_eq!(s[3], BigInt::from(1));
    }

    #[test]
    fn resultant_matches_root_product() {
        // f = (y-1)(y-2), g = y + 3: Res = g(1) g(2) = 4 * 5
        let f = IntPoly::from_i64(&[2, -3, 1]);
        let g = IntPoly::from_i64(&[3, 1]);
        assert_eq!(resultant(&f, &g), BigInt::from(20));
        // common root
        assert_eq!(resultant(&f, &IntPoly::from_i64(&[-2, 1])), BigInt::zero());
        // constant g: c^deg f
        assert_eq!(resultant(&f, &IntPoly::from_i64(&[5])), BigInt::from(25));
        // lc(f)^deg g factor: f = 2y - 2, g = y^2 + 1 -> 2^2 * g(1)
        assert_eq!(resultant(&IntPoly::from_i64(&[-2, 2]), &IntPoly::from_i64(&[1, 0, 1])), BigInt::from(8));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = IntPoly::from_i64(&[7, -3, 0, 2]).to_rational();
        let pts: Vec<_> = (-2..2)
            .map(|x| {
                let x = BigRational::from_integer(BigInt::from(x));
                let y = p.eval(&x);
                (x, y)
            })
            .collect();
        assert_eq!(interpolate(&pts), p);
        assert!(interpolate(&[]).is_zero());
    }

    #[test]
    fn division_and_gcd() {
        let a = IntPoly::from_i64(&[-1, 0, 1]).to_rational();
        let b = IntPoly::from_i64(&[1, 1]).to_rational();
        let (q, r) = a.div_rem(&b);
        assert!(r.is_zero());
        assert_eq!(q, IntPoly::from_i64(&[-1, 1]).to_rational());
        let g = a.gcd(&IntPoly::from_i64(&[2, 2]).to_rational());
        assert_eq!(g, b);
    }

    #[test]
    fn compose_and_display() {
        let p = IntPoly::from_i64(&[0, 0, 1]);
        let q = IntPoly::from_i64(&[1, 1]);
        assert_eq!(p.compose(&q), IntPoly::from_i64(&[1, 2, 1]));
        assert_eq!(IntPoly::from_i64(&[3, -4, 1]).to_string(), "x^2 - 4x + 3");
    }
}
