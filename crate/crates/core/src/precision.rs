//! Dyadic fixed-precision arithmetic: values m·2^e with BigInt mantissa.
//!
//! Internal substrate for certified root refinement and high-precision frame
//! residuals. Operations round the mantissa to the requested bit count
//! (round half away from zero), so relative error per operation is below
//! 2^{1−prec}.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::math::{self, Complex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Dy {
    pub m: BigInt,
    pub e: i64,
}

impl Dy {
    pub fn zero() -> Self {
        Dy { m: BigInt::zero(), e: 0 }
    }

    pub fn from_int(v: i64) -> Self {
        Dy { m: BigInt::from(v), e: 0 }
    }

    pub fn from_big(m: BigInt) -> Self {
        Dy { m, e: 0 }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            return Dy::zero();
        }
        debug_assert!(x.is_finite());
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let mant = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp == 0 {
            (mant, -1074)
        } else {
            (mant | (1u64 << 52), exp - 1075)
        };
        Dy { m: BigInt::from(sign) * BigInt::from(m), e }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn neg(&self) -> Self {
        Dy { m: -&self.m, e: self.e }
    }

    #[cfg(test)]
    pub fn abs(&self) -> Self {
        Dy { m: self.m.abs(), e: self.e }
    }

    fn bits(&self) -> u64 {
        self.m.bits()
    }

    /// log2 magnitude estimate (exact up to ±1).
    pub fn mag2(&self) -> i64 {
        if self.is_zero() {
            i64::MIN / 2
        } else {
            self.e + self.bits() as i64
        }
    }

    /// Rounds the mantissa to at most `prec` bits.
    pub fn round(mut self, prec: u32) -> Self {
        let bits = self.bits();
        if bits <= u64::from(prec) {
            return self;
        }
        let shift = bits - u64::from(prec);
        let half = BigInt::from(1) << (shift - 1);
        let adj = if self.m.is_negative() { -half } else { half };
        self.m = (self.m + adj) >> shift;
        self.e += shift as i64;
        self
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let neg = self.m.is_negative();
        let mag = self.m.abs();
        let bits = mag.bits();
        // Keep 54 bits, round to nearest 53.
        let (top, shift) = if bits > 54 {
            let t = (&mag >> (bits - 54)).to_u64().unwrap();
            ((t + 1) >> 1, bits as i64 - 53)
        } else {
            (mag.to_u64().unwrap(), 0)
        };
        let e = self.e + shift;
        if e > i32::MAX as i64 / 2 {
            return if neg { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        if e < i32::MIN as i64 / 2 {
            return 0.0;
        }
        let v = math::scalbn(top as f64, e as i32);
        if neg {
            -v
        } else {
            v
        }
    }

    pub fn add(&self, other: &Self, prec: u32) -> Self {
        if self.is_zero() {
            return other.clone().round(prec);
        }
        if other.is_zero() {
            return self.clone().round(prec);
        }
        let guard = i64::from(prec) + 8;
        if self.mag2() > other.mag2() + guard {
            return self.clone().round(prec);
        }
        if other.mag2() > self.mag2() + guard {
            return other.clone().round(prec);
        }
        let e = self.e.min(other.e);
        let m = (&self.m << (self.e - e) as u64) + (&other.m << (other.e - e) as u64);
        Dy { m, e }.round(prec)
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: u32) -> Self {
        Dy { m: &self.m * &other.m, e: self.e + other.e }.round(prec)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Dy { m: &self.m * k, e: self.e }
    }

    pub fn div(&self, other: &Self, prec: u32) -> Self {
        debug_assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dy::zero();
        }
        let k = i64::from(prec) + other.bits() as i64 - self.bits() as i64 + 4;
        let k = k.max(0) as u64;
        let q = (&self.m << k) / &other.m;
        Dy { m: q, e: self.e - other.e - k as i64 }.round(prec)
    }

    /// Square root of a nonnegative value.
    pub fn sqrt(&self, prec: u32) -> Self {
        debug_assert!(!self.m.is_negative(), "dyadic sqrt of negative");
        if self.is_zero() {
            return Dy::zero();
        }
        let mut m = self.m.clone();
        let mut e = self.e;
        if e % 2 != 0 {
            m <<= 1;
            e -= 1;
        }
        let want = 2 * (u64::from(prec) + 2);
        let have = m.bits();
        let extra = if have < want { (want - have + 1) / 2 * 2 } else { 0 };
        m <<= extra;
        e -= extra as i64;
        let s = m.sqrt();
        Dy { m: s, e: e / 2 }.round(prec)
    }

}

/// Complex number with dyadic components.
#[derive(Debug, Clone)]
pub(crate) struct DyC {
    pub re: Dy,
    pub im: Dy,
}

impl DyC {
    pub fn zero() -> Self {
        DyC { re: Dy::zero(), im: Dy::zero() }
    }

    pub fn from_f64(z: Complex) -> Self {
        DyC { re: Dy::from_f64(z.re), im: Dy::from_f64(z.im) }
    }

    pub fn real(x: Dy) -> Self {
        DyC { re: x, im: Dy::zero() }
    }

    pub fn to_f64(&self) -> Complex {
        Complex::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        DyC { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        DyC { re: self.re.add(&o.re, prec), im: self.im.add(&o.im, prec) }
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        DyC { re: self.re.sub(&o.re, prec), im: self.im.sub(&o.im, prec) }
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        let re = self.re.mul(&o.re, prec + 4).sub(&self.im.mul(&o.im, prec + 4), prec);
        let im = self.re.mul(&o.im, prec + 4).add(&self.im.mul(&o.re, prec + 4), prec);
        DyC { re, im }
    }

    pub fn norm_sqr(&self, prec: u32) -> Dy {
        self.re.mul(&self.re, prec + 4).add(&self.im.mul(&self.im, prec + 4), prec)
    }

    pub fn div(&self, o: &Self, prec: u32) -> Self {
        let d = o.norm_sqr(prec + 8);
        let num = self.mul(&o.conj(), prec + 8);
        DyC { re: num.re.div(&d, prec), im: num.im.div(&d, prec) }
    }

    /// Magnitude estimate of the larger component.
    pub fn mag2(&self) -> i64 {
        self.re.mag2().max(self.im.mag2())
    }
}

/// Gauss-Jordan inverse of an n×n dyadic matrix (row-major).
pub(crate) fn dy_mat_inverse(a: &[Vec<Dy>], prec: u32) -> Vec<Vec<Dy>> {
    let n = a.len();
    let mut m: Vec<Vec<Dy>> = a.iter().map(|r| r.clone()).collect();
    let mut inv: Vec<Vec<Dy>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Dy::from_int(1) } else { Dy::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by_key(|&r| m[r][col].mag2())
            .expect("nonempty");
        debug_assert!(!m[pivot][col].is_zero(), "singular matrix in dyadic inverse");
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].clone();
        for j in 0..n {
            m[col][j] = m[col][j].div(&p, prec);
            inv[col][j] = inv[col][j].div(&p, prec);
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for j in 0..n {
                let t = factor.mul(&m[col][j], prec);
                m[r][j] = m[r][j].sub(&t, prec);
                let t = factor.mul(&inv[col][j], prec);
                inv[r][j] = inv[r][j].sub(&t, prec);
            }
        }
    }
    inv
}

#[cfg(test)]
pub(crate) fn dy_mat_mul(a: &[Vec<Dy>], b: &[Vec<Dy>], prec: u32) -> Vec<Vec<Dy>> {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = Dy::zero();
                    for l in 0..k {
                        acc = acc.add(&a[i][l].mul(&b[l][j], prec), prec);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        math::abs(a - b) <= tol * (1.0 + math::abs(b))
    }

    #[test]
    fn f64_round_trip() {
        for x in [0.0, 1.0, -3.5, 0.1, 1e300, -2.2e-308, 12345.6789] {
            assert_eq!(Dy::from_f64(x).to_f64(), x);
        }
    }

    #[test]
    fn arithmetic_matches_f64() {
        let prec = 96;
        let a = Dy::from_f64(1.75);
        let b = Dy::from_f64(-0.3);
        assert!(close(a.add(&b, prec).to_f64(), 1.45, 1e-14));
        assert!(close(a.mul(&b, prec).to_f64(), -0.525, 1e-14));
        assert!(close(a.div(&b, prec).to_f64(), 1.75 / -0.3, 1e-14));
        assert!(close(Dy::from_f64(2.0).sqrt(prec).to_f64(), math::sqrt(2.0), 1e-15));
    }

    #[test]
    fn sqrt_is_high_precision() {
        // (√2)² − 2 should vanish to ~prec bits, far beyond f64.
        let prec = 192;
        let s = Dy::from_int(2).sqrt(prec);
        let err = s.mul(&s, prec).sub(&Dy::from_int(2), prec).abs();
        assert!(err.mag2() < -170, "mag {}", err.mag2());
    }

    #[test]
    fn complex_division() {
        let prec = 96;
        let a = DyC::from_f64(Complex::new(3.0, -4.0));
        let b = DyC::from_f64(Complex::new(-1.0, 2.0));
        let q = a.mul(&b, prec).div(&b, prec).to_f64();
        assert!(close(q.re, 3.0, 1e-14) && close(q.im, -4.0, 1e-14));
    }

    #[test]
    fn matrix_inverse_identity() {
        let prec = 128;
        let a = vec![
            vec![Dy::from_int(2), Dy::from_int(1), Dy::from_int(0)],
            vec![Dy::from_int(1), Dy::from_int(3), Dy::from_int(1)],
            vec![Dy::from_int(0), Dy::from_int(1), Dy::from_int(4)],
        ];
        let inv = dy_mat_inverse(&a, prec);
        let prod = dy_mat_mul(&a, &inv, prec);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                let got = prod[i][j].to_f64();
                assert!(math::abs(got - want) < 1e-25, "entry {i}{j} = {got}");
            }
        }
    }
}
