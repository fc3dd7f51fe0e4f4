//! Dense matrices over exact rings, with division-free characteristic
//! polynomials and exact determinants.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num::{BigInt, BigRational, Integer, One, Zero};

use crate::poly::{IntPoly, RatPoly};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<BigRational>;

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics when rows have unequal lengths.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U: Clone + Zero>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        Matrix::from_fn(n, n, |i, j| if i == j { diag[i].clone() } else { T::zero() })
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
{
    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
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

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }
}

impl<'a, T> Mul<&'a Matrix<T>> for &'a Matrix<T>
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
{
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * rhs.get(k, j).clone();
                }
            }
        }
        out
    }
}

impl<'a, T> Add<&'a Matrix<T>> for &'a Matrix<T>
where
    T: Clone + Zero + Add<Output = T>,
{
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() + rhs.get(i, j).clone())
    }
}

impl<'a, T> Sub<&'a Matrix<T>> for &'a Matrix<T>
where
    T: Clone + Zero + Sub<Output = T>,
{
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() - rhs.get(i, j).clone())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).take(self.rows).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl IntMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
    }

    /// det(xI - M) by Berkowitz's algorithm. Uses only ring operations, so every
    /// intermediate value stays an integer.
    pub fn charpoly(&self) -> IntPoly {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        // Descending coefficients of the characteristic polynomial of the leading r x r block.
        let mut c: Vec<BigInt> = vec![BigInt::one()];
        for r in 0..n {
            // Column of the Toeplitz factor: 1, -a_rr, -R S, -R M S, ..., -R M^{r-1} S.
            let mut t: Vec<BigInt> = Vec::with_capacity(r + 2);
            t.push(BigInt::one());
            t.push(-self.get(r, r).clone());
            let mut v: Vec<BigInt> = (0..r).map(|i| self.get(i, r).clone()).collect();
            for _ in 0..r {
                let rs: BigInt = (0..r).map(|j| self.get(r, j) * &v[j]).sum();
                t.push(-rs);
                v = (0..r)
                    .map(|i| (0..r).map(|j| self.get(i, j) * &v[j]).sum())
                    .collect();
            }
            let next: Vec<BigInt> = (0..r + 2)
                .map(|i| (0..=i.min(r)).map(|j| &t[i - j] * &c[j]).sum())
                .collect();
            c = next;
        }
        IntPoly::from_descending(c)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1).clone()
    }
}

impl RatMatrix {
    pub fn from_int(m: &IntMatrix) -> Self {
        m.map(|v| BigRational::from_integer(v.clone()))
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_int(&IntMatrix::from_i64(rows))
    }

    /// Common denominator d and integer matrix B with self = B / d.
    pub fn clear_denominators(&self) -> (BigInt, IntMatrix) {
        let d = self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let b = self.map(|x| (x * BigRational::from_integer(d.clone())).to_integer());
        (d, b)
    }

    /// det(xI - M). Denominators are cleared first, the integer characteristic
    /// polynomial is computed division-free, and coefficient k is rescaled by d^{n-k}.
    pub fn charpoly(&self) -> RatPoly {
        let n = self.rows;
        let (d, b) = self.clear_denominators();
        let cb = b.charpoly();
        let mut coeffs = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let scale = num::pow(d.clone(), n - k);
            coeffs.push(BigRational::new(cb.coeff(k), scale));
        }
        RatPoly::new(coeffs)
    }

    pub fn det(&self) -> BigRational {
        let n = self.rows;
        let (d, b) = self.clear_denominators();
        BigRational::new(b.det(), num::pow(d, n))
    }

    /// Inverse by Gauss-Jordan elimination, or `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let p = (col..n).find(|&i| !a.get(i, col).is_zero())?;
            if p != col {
                for j in 0..n {
                    a.data.swap(col * n + j, p * n + j);
                    inv.data.swap(col * n + j, p * n + j);
                }
            }
            let pivot = a.get(col, col).recip();
            for j in 0..n {
                a.set(col, j, a.get(col, j) * &pivot);
                inv.set(col, j, inv.get(col, j) * &pivot);
            }
            for i in 0..n {
                if i == col || a.get(i, col).is_zero() {
                    continue;
                }
                let f = a.get(i, col).clone();
                for j in 0..n {
                    a.set(i, j, a.get(i, j) - &f * a.get(col, j));
                    inv.set(i, j, inv.get(i, j) - &f * inv.get(col, j));
                }
            }
        }
        Some(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn berkowitz_two_by_two() {
        let m = IntMatrix::from_i64(&[&[0, 1], &[3, 0]]);
        assert_eq!(m.charpoly(), IntPoly::from_i64(&[-3, 0, 1]));
        let m = IntMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.charpoly(), IntPoly::from_i64(&[-2, -5, 1]));
    }

    #[test]
    fn berkowitz_matches_cofactor_expansion() {
        // det(xI - M) at several integer points against a brute-force determinant.
        let m = IntMatrix::from_i64(&[&[2, -1, 0, 3], &[1, 0, 4, -2], &[0, 5, -3, 1], &[7, 1, 1, 1]]);
        let cp = m.charpoly();
        for x in -3..=3 {
            let shifted = &IntMatrix::identity(4).scale(&int(x)) - &m;
            assert_eq!(cp.eval(&int(x)), laplace_det(&shifted));
        }
    }

    fn laplace_det(m: &IntMatrix) -> BigInt {
        let n = m.rows();
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut total = BigInt::zero();
        for j in 0..n {
            let minor = Matrix::from_fn(n - 1, n - 1, |r, c| {
                m.get(r + 1, if c < j { c } else { c + 1 }).clone()
            });
            let term = m.get(0, j) * laplace_det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn bareiss_with_pivoting() {
        let m = IntMatrix::from_i64(&[&[0, 2, 1], &[3, 0, 0], &[1, 1, 1]]);
        assert_eq!(m.det(), laplace_det(&m));
        let singular = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(singular.det().is_zero());
    }

    #[test]
    fn rational_charpoly_and_inverse() {
        let half = BigRational::new(int(1), int(2));
        let m = RatMatrix::from_rows(vec![
            vec![half.clone(), BigRational::from_integer(int(1))],
            vec![BigRational::zero(), BigRational::from_integer(int(3))],
        ]);
        let cp = m.charpoly();
        // (x - 1/2)(x - 3) = x^2 - 7/2 x + 3/2
        assert_eq!(cp.coeff(0), BigRational::new(int(3), int(2)));
        assert_eq!(cp.coeff(1), BigRational::new(int(-7), int(2)));
        assert_eq!(m.det(), BigRational::new(int(3), int(2)));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, RatMatrix::identity(2));
        assert!(RatMatrix::from_i64(&[&[1, 1], &[1, 1]]).inverse().is_none());
    }
}
