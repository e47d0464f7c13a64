//! Sturm chains: exact real-root counting and isolation.
//!
//! The chain is kept literally as specified: first entry the polynomial,
//! second its derivative, each later entry the negated Euclidean remainder of
//! the two preceding, over ℚ. For squarefree input the last entry is a
//! nonzero constant and the sign-variation difference counts distinct real
//! roots in a half-open interval.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{is_squarefree, IntPolynomial, RationalPolynomial};

/// Sturm chain of a squarefree integer polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<RationalPolynomial>,
    source: IntPolynomial,
}

impl SturmChain {
    /// Builds the chain; the input must be nonzero and squarefree.
    pub fn new(source: &IntPolynomial) -> Result<Self> {
        if source.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !is_squarefree(source) {
            return Err(Error::NotSquarefree);
        }
        let p0 = RationalPolynomial::from_int(source);
        let p1 = p0.derivative();
        let mut chain = alloc::vec![p0, p1];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            if chain[n - 1].degree() == Some(0) {
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        Ok(SturmChain { chain, source: source.clone() })
    }

    pub fn chain(&self) -> &[RationalPolynomial] {
        &self.chain
    }

    pub fn source(&self) -> &IntPolynomial {
        &self.source
    }

    /// Sign variations of the chain at x (zeros skipped).
    pub fn variations(&self, x: &BigRational) -> usize {
        let mut count = 0usize;
        let mut last: Option<bool> = None;
        for p in &self.chain {
            let v = p.eval(x);
            if v.is_zero() {
                continue;
            }
            let s = v.is_positive();
            if let Some(prev) = last {
                if prev != s {
                    count += 1;
                }
            }
            last = Some(s);
        }
        count
    }

    /// Distinct real roots in (lo, hi].
    pub fn count(&self, lo: &BigRational, hi: &BigRational) -> usize {
        debug_assert!(lo < hi);
        self.variations(lo) - self.variations(hi)
    }

    /// Distinct real roots in the open interval (lo, hi).
    pub fn count_open(&self, lo: &BigRational, hi: &BigRational) -> usize {
        let c = self.count(lo, hi);
        if self.source.eval_rational(hi).is_zero() {
            c - 1
        } else {
            c
        }
    }

    /// 1 + max |cᵢ/c_n|, an exact bound on root magnitudes.
    pub fn cauchy_bound(&self) -> BigRational {
        cauchy_bound(&self.source)
    }

    /// Disjoint half-open intervals (a, b], each containing exactly one root,
    /// covering all roots in (lo, hi].
    pub fn isolate(&self, lo: &BigRational, hi: &BigRational) -> Vec<(BigRational, BigRational)> {
        let mut out = Vec::new();
        self.isolate_rec(lo.clone(), hi.clone(), &mut out);
        out
    }

    fn isolate_rec(
        &self,
        lo: BigRational,
        hi: BigRational,
        out: &mut Vec<(BigRational, BigRational)>,
    ) {
        let n = self.count(&lo, &hi);
        if n == 0 {
            return;
        }
        if n == 1 {
            out.push((lo, hi));
            return;
        }
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        self.isolate_rec(lo, mid.clone(), out);
        self.isolate_rec(mid, hi, out);
    }

    /// Shrinks an isolating interval by bisection until hi − lo ≤ 2^−bits.
    pub fn refine(
        &self,
        mut lo: BigRational,
        mut hi: BigRational,
        bits: u32,
    ) -> (BigRational, BigRational) {
        let two = BigRational::from_integer(BigInt::from(2));
        let width_target = BigRational::new(BigInt::one(), BigInt::one() << bits);
        let f_hi_zero = self.source.eval_rational(&hi).is_zero();
        if f_hi_zero {
            // The root is the right endpoint; collapse directly.
            return (hi.clone(), hi);
        }
        let sign_hi = self.source.eval_rational(&hi).is_positive();
        while &hi - &lo > width_target {
            let mid = (&lo + &hi) / &two;
            let v = self.source.eval_rational(&mid);
            if v.is_zero() {
                return (mid.clone(), mid);
            }
            if v.is_positive() == sign_hi {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo, hi)
    }
}

/// 1 + max|cᵢ|/|c_n| for a nonzero polynomial.
pub fn cauchy_bound(p: &IntPolynomial) -> BigRational {
    let lead = p.leading().abs();
    let m = p
        .coeffs()
        .iter()
        .map(Signed::abs)
        .max()
        .unwrap_or_else(BigInt::zero);
    BigRational::one() + BigRational::new(m, lead)
}

/// Distinct real roots of a squarefree p in (lo, hi].
pub fn sturm_count(p: &IntPolynomial, lo: &BigRational, hi: &BigRational) -> Result<usize> {
    Ok(SturmChain::new(p)?.count(lo, hi))
}

/// Like [`sturm_count`] but divides by gcd(p, p′) first, so repeated-root
/// inputs are accepted and distinct roots are counted.
pub fn sturm_count_reduced(p: &IntPolynomial, lo: &BigRational, hi: &BigRational) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sf = crate::poly::squarefree_part(p);
    sturm_count(&sf, lo, hi)
}

/// Total number of distinct real roots of a squarefree p.
pub fn real_root_count(p: &IntPolynomial) -> Result<usize> {
    let chain = SturmChain::new(p)?;
    let b = chain.cauchy_bound();
    Ok(chain.count(&-&b, &b))
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
