//! Exact integer matrices: characteristic polynomials, powers, inverses.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// Square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    a: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(n: usize) -> Self {
        IntMatrix { n, a: vec![BigInt::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    /// Builds from rows; all rows must have the same length as the row count.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        let a = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        Ok(IntMatrix { n, a })
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        Ok(IntMatrix { n, a: rows.into_iter().flatten().collect() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.a[i * self.n + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.a[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j).clone()).collect())
            .collect()
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        use num_traits::ToPrimitive;
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.at(i, j).to_f64().unwrap_or(f64::INFINITY))
                    .collect()
            })
            .collect()
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.at(i, i).clone()).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.at(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = aik * other.at(k, j);
                    *out.at_mut(i, j) += t;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        IntMatrix {
            n: self.n,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntMatrix { n: self.n, a: self.a.iter().map(|x| x * c).collect() }
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j) * &x[j]).sum())
            .collect()
    }

    pub fn max_entry_bits(&self) -> u64 {
        self.a.iter().map(|x| x.bits()).max().unwrap_or(0)
    }

    /// Exact power with an entry-size guard (entries grow like |θ_max|^m).
    pub fn pow_guarded(&self, m: u64, bit_limit: u64) -> Result<Self> {
        let mut acc = Self::identity(self.n);
        let mut base = self.clone();
        let mut e = m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
            let bits = acc.max_entry_bits().max(base.max_entry_bits());
            if bits > bit_limit {
                return Err(Error::MatrixPowerOverflow { bits, limit: bit_limit });
            }
        }
        Ok(acc)
    }

    /// Characteristic polynomial det(uI − A), monic, exact.
    ///
    /// Faddeev–LeVerrier: N₁ = A, c_{n−k} = −tr(A·N_k)/k, every division
    /// exact over ℤ.
    pub fn char_poly(&self) -> IntPolynomial {
        let n = self.n;
        if n == 0 {
            return IntPolynomial::one();
        }
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut nk = self.clone();
        for k in 1..=n {
            debug_assert!((nk.trace() % BigInt::from(k)).is_zero());
            let ck = -nk.trace() / BigInt::from(k);
            coeffs[n - k] = ck.clone();
            if k < n {
                let mut shifted = nk;
                for i in 0..n {
                    *shifted.at_mut(i, i) += &ck;
                }
                nk = self.mul(&shifted);
            }
        }
        IntPolynomial::from_coeffs(coeffs)
    }

    pub fn det(&self) -> BigInt {
        let cp = self.char_poly();
        let c0 = cp.constant_term();
        if self.n % 2 == 0 {
            c0
        } else {
            -c0
        }
    }

    /// Inverse of a unimodular matrix (det ±1) via Cayley–Hamilton:
    /// A⁻¹ = −(Aⁿ⁻¹ + c_{n−1}Aⁿ⁻² + … + c₁I)/c₀.
    pub fn inverse_unimodular(&self) -> Result<Self> {
        let cp = self.char_poly();
        let c0 = cp.constant_term();
        if !c0.abs().is_one() {
            return Err(Error::NotAlgebraicUnit);
        }
        let n = self.n;
        let mut acc = Self::zero(n);
        // Horner on the matrix polynomial.
        for k in (1..=n).rev() {
            acc = acc.mul(self);
            let ck = cp.coeff(k);
            for i in 0..n {
                *acc.at_mut(i, i) += &ck;
            }
        }
        let neg_inv_c0 = -c0;
        Ok(acc.scale(&neg_inv_c0))
    }
}
