//! Exact arithmetic over integer and rational polynomials.
//!
//! `IntPolynomial` stores coefficients in increasing degree order with
//! arbitrary-precision integers, index 0 the constant term; the zero
//! polynomial has an empty coefficient vector. Everything here is exact:
//! resultants use the subresultant remainder sequence, divisions verify
//! their remainders, and the self-inversive reduction `f(u) = u^m·g(u+1/u)`
//! is carried out symbolically.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::math::Complex;

/// Integer polynomial, constant term first; empty coefficients = zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial { coeffs: vec![BigInt::one()] }
    }

    /// Builds from a coefficient vector (constant term first), trimming
    /// leading zeros so the invariant `coeffs.last() != 0` holds.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// c·uᵏ.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficients as i64 when they all fit.
    pub fn coeffs_i64(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(ToPrimitive::to_i64).collect()
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, One::is_one)
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::INFINITY);
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex) -> Complex {
        let mut acc = Complex::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * z + Complex::new(c.to_f64().unwrap_or(f64::INFINITY), 0.0);
        }
        acc
    }

    pub fn neg(&self) -> Self {
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + other.coeff(i));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - other.coeff(i));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntPolynomial { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// gcd of the coefficients, nonnegative; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Divides out the content, keeping the leading sign.
    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        IntPolynomial { coeffs: self.coeffs.iter().map(|a| a / &c).collect() }
    }

    pub fn max_coeff_abs(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Σ cᵢ², the squared l2 norm (exact).
    pub fn l2_norm_sqr(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// f(c·u): coefficient i is multiplied by cⁱ.
    pub fn compose_scale(&self, c: &BigInt) -> Self {
        let mut p = BigInt::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a * &p);
            p *= c;
        }
        Self::from_coeffs(coeffs)
    }

    /// f(uᵏ).
    pub fn substitute_power(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Self::from_coeffs(coeffs)
    }

    /// Coefficient reversal u^deg·f(1/u), trimmed.
    pub fn reversed(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::from_coeffs(coeffs)
    }

    /// +1 if the reversal equals f, −1 if it equals −f, None otherwise.
    pub fn self_inversive_sign(&self) -> Option<i8> {
        if self.is_zero() {
            return None;
        }
        let n = self.coeffs.len();
        let mut plus = true;
        let mut minus = true;
        for i in 0..n {
            let r = &self.coeffs[n - 1 - i];
            if &self.coeffs[i] != r {
                plus = false;
            }
            if self.coeffs[i] != -r {
                minus = false;
            }
            if !plus && !minus {
                return None;
            }
        }
        if plus {
            Some(1)
        } else {
            Some(-1)
        }
    }

    /// Pseudo-remainder: lc(d)^{δ+1}·self = q·d + r with deg r < deg d.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("pseudo_rem by zero");
        let lc = d.leading();
        let mut r = self.clone();
        let mut reductions = 0usize;
        let bound = self.degree().map_or(0, |n| n.saturating_sub(dd)) + 1;
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let coef = r.leading();
            let shift = rd - dd;
            // r ← lc·r − coef·u^shift·d
            let mut coeffs = vec![BigInt::zero(); rd + 1];
            for (i, c) in r.coeffs.iter().enumerate() {
                coeffs[i] = c * &lc;
            }
            for (i, c) in d.coeffs.iter().enumerate() {
                coeffs[i + shift] -= c * &coef;
            }
            r = Self::from_coeffs(coeffs);
            reductions += 1;
        }
        // Pad with lc powers so exactly δ+1 multiplications happened.
        for _ in reductions..bound {
            r = r.scale(&lc);
        }
        r
    }

    /// Exact quotient if `d` divides `self` over ℤ, else None.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let n = self.degree().unwrap();
        if n < dd {
            return None;
        }
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (quot, r) = top.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            for (i, c) in d.coeffs.iter().enumerate() {
                let t = c * &quot;
                rem[k + i] -= t;
            }
            q[k] = quot;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(q))
    }

    pub fn divides(&self, f: &Self) -> bool {
        !self.is_zero() && self.degree().is_some() && f.div_exact(self).is_some()
    }

    /// Remainder of division by a monic (or ±1-leading) divisor.
    pub fn rem_monic(&self, d: &Self) -> Self {
        let dd = d.degree().expect("rem by zero");
        let lc = d.leading();
        debug_assert!(lc.is_one() || (-&lc).is_one());
        let mut rem = self.clone();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let coef = if lc.is_one() { rem.leading() } else { -rem.leading() };
            let shift = rd - dd;
            let mut coeffs = rem.coeffs.clone();
            for (i, c) in d.coeffs.iter().enumerate() {
                coeffs[i + shift] -= c * &coef;
            }
            rem = Self::from_coeffs(coeffs);
        }
        rem
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if i == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if i == 1 {
                    write!(f, "u")?;
                } else {
                    write!(f, "u^{i}")?;
                }
            }
        }
        Ok(())
    }
}

impl core::str::FromStr for IntPolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        poly_parse(s)
    }
}

/// Parses sums of monomials `c*u^k` (variable `u` or `x`, `*` optional).
pub fn poly_parse(text: &str) -> Result<IntPolynomial> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let mut terms: Vec<(BigInt, usize)> = Vec::new();
    let err = |pos: usize, m: &str| Error::Parse { position: pos, message: m.to_string() };

    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };

    skip_ws(&mut pos);
    if pos == bytes.len() {
        return Err(err(pos, "empty input"));
    }
    let mut first = true;
    while pos < bytes.len() {
        skip_ws(&mut pos);
        if pos == bytes.len() {
            break;
        }
        // sign
        let mut sign = 1i32;
        if bytes[pos] == b'+' || bytes[pos] == b'-' {
            if bytes[pos] == b'-' {
                sign = -1;
            }
            pos += 1;
            skip_ws(&mut pos);
        } else if !first {
            return Err(err(pos, "expected '+' or '-' between terms"));
        }
        first = false;
        if pos == bytes.len() {
            return Err(err(pos, "dangling sign"));
        }
        // coefficient digits (optional if a variable follows)
        let digit_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let mut coeff = if pos > digit_start {
            let s = core::str::from_utf8(&bytes[digit_start..pos]).unwrap();
            s.parse::<BigInt>()
                .map_err(|_| err(digit_start, "bad integer coefficient"))?
        } else {
            BigInt::one()
        };
        if pos < bytes.len() && bytes[pos] == b'.' {
            return Err(err(pos, "non-integer coefficient"));
        }
        if sign < 0 {
            coeff = -coeff;
        }
        skip_ws(&mut pos);
        // optional '*'
        if pos < bytes.len() && bytes[pos] == b'*' {
            pos += 1;
            skip_ws(&mut pos);
            if pos == bytes.len() || (bytes[pos] != b'u' && bytes[pos] != b'x') {
                return Err(err(pos, "expected variable after '*'"));
            }
        }
        // optional variable with exponent
        let mut exponent = 0usize;
        if pos < bytes.len() && (bytes[pos] == b'u' || bytes[pos] == b'x') {
            pos += 1;
            exponent = 1;
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                skip_ws(&mut pos);
                if pos < bytes.len() && bytes[pos] == b'-' {
                    return Err(err(pos, "exponent must be nonnegative"));
                }
                let e_start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == e_start {
                    return Err(err(pos, "expected exponent digits after '^'"));
                }
                let s = core::str::from_utf8(&bytes[e_start..pos]).unwrap();
                exponent = s.parse::<usize>().map_err(|_| err(e_start, "exponent too large"))?;
                if exponent > 1_000 {
                    return Err(err(e_start, "exponent too large"));
                }
            }
        } else if pos == digit_start {
            return Err(err(pos, "expected coefficient or variable"));
        }
        terms.push((coeff, exponent));
        skip_ws(&mut pos);
    }
    let deg = terms.iter().map(|t| t.1).max().unwrap_or(0);
    let mut coeffs = vec![BigInt::zero(); deg + 1];
    for (c, k) in terms {
        coeffs[k] += c;
    }
    Ok(IntPolynomial::from_coeffs(coeffs))
}

/// Rational polynomial: denominators positive, fractions in lowest terms
/// (both maintained by `BigRational` itself).
#[derive(Debug, Clone, PartialEq)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn zero() -> Self {
        RationalPolynomial { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn from_int(p: &IntPolynomial) -> Self {
        RationalPolynomial {
            coeffs: p
                .coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        RationalPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Euclidean remainder.
    pub fn rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("rem by zero");
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        while rem.len() > dd {
            let top = rem.last().unwrap().clone();
            if top.is_zero() {
                rem.pop();
                continue;
            }
            let k = rem.len() - 1 - dd;
            let q = top / &lc;
            for (i, c) in d.coeffs.iter().enumerate() {
                let t = c * &q;
                rem[k + i] -= t;
            }
            while rem.last().map_or(false, Zero::is_zero) {
                rem.pop();
            }
        }
        Self::from_coeffs(rem)
    }
}

/// Integer polynomial gcd via the primitive remainder sequence; the result
/// is primitive with positive leading coefficient, scaled by the gcd of the
/// contents.
pub fn poly_gcd(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    if a.is_zero() {
        return normalize_sign(b.clone());
    }
    if b.is_zero() {
        return normalize_sign(a.clone());
    }
    let content = a.content().gcd(&b.content());
    let mut p = a.primitive_part();
    let mut q = b.primitive_part();
    if p.degree() < q.degree() {
        core::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        let r = p.pseudo_rem(&q).primitive_part();
        p = q;
        q = r;
    }
    normalize_sign(p.scale(&content))
}

fn normalize_sign(p: IntPolynomial) -> IntPolynomial {
    if p.leading().is_negative() {
        p.neg()
    } else {
        p
    }
}

pub fn is_squarefree(p: &IntPolynomial) -> bool {
    match p.degree() {
        None => false,
        Some(0) => true,
        Some(_) => poly_gcd(p, &p.derivative()).degree() == Some(0),
    }
}

/// p divided by gcd(p, p′): same roots, all simple.
pub fn squarefree_part(p: &IntPolynomial) -> IntPolynomial {
    match p.degree() {
        None | Some(0) => p.clone(),
        Some(_) => {
            let g = poly_gcd(p, &p.derivative());
            if g.degree() == Some(0) {
                p.clone()
            } else {
                p.div_exact(&g)
                    .expect("gcd divides")
            }
        }
    }
}

/// Resultant over ℤ by the subresultant remainder sequence.
///
/// Convention: Res(p, q) = lc(p)^{deg q} · ∏_{p(α)=0} q(α), the Sylvester
/// determinant with p-rows first, so Res(u−2, u−3) = −1.
pub fn poly_resultant(p: &IntPolynomial, q: &IntPolynomial) -> Result<BigInt> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    let mut sign = BigInt::one();
    if a.degree() < b.degree() {
        if a.degree().unwrap() % 2 == 1 && b.degree().unwrap() % 2 == 1 {
            sign = -sign;
        }
        core::mem::swap(&mut a, &mut b);
    }
    if b.degree() == Some(0) {
        let da = a.degree().unwrap();
        return Ok(sign * num_traits::pow::pow(b.leading(), da));
    }
    let ca = a.content();
    let cb = b.content();
    a = a.primitive_part();
    b = b.primitive_part();
    let scale = num_traits::pow::pow(ca, b.degree().unwrap())
        * num_traits::pow::pow(cb, a.degree().unwrap());
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            // Common factor of positive degree ⇒ resultant 0.
            return Ok(BigInt::zero());
        }
        let divisor = &g * num_traits::pow::pow(h.clone(), delta);
        a = b;
        b = IntPolynomial::from_coeffs(
            r.coeffs().iter().map(|c| c / &divisor).collect(),
        );
        g = a.leading();
        // h ← g^δ · h^{1−δ}
        h = if delta == 0 {
            h
        } else {
            let num = num_traits::pow::pow(g.clone(), delta);
            let den = num_traits::pow::pow(h.clone(), delta - 1);
            num / den
        };
        if b.degree() == Some(0) {
            let da = a.degree().unwrap();
            let num = num_traits::pow::pow(b.leading(), da);
            let den = num_traits::pow::pow(h.clone(), da.saturating_sub(1));
            return Ok(sign * scale * (num / den));
        }
    }
}

/// True iff the reversed coefficient vector equals f up to a global sign.
pub fn is_self_inversive(f: &IntPolynomial) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.constant_term().is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    Ok(f.self_inversive_sign().is_some())
}

/// For self-inversive f of even degree 2m with positive sign, returns g of
/// degree m with f(u) = u^m·g(u + 1/u). Unit-circle roots of f correspond to
/// real roots of g in (−2, 2), in conjugate pairs.
pub fn chebyshev_reduce(f: &IntPolynomial) -> Result<IntPolynomial> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.constant_term().is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    match f.self_inversive_sign() {
        Some(1) => {}
        Some(_) => return Err(Error::AntiPalindromic),
        None => return Err(Error::NotSelfInversive),
    }
    let n = f.degree().unwrap();
    if n % 2 != 0 {
        return Err(Error::OddDegree);
    }
    let m = n / 2;
    // u^j + u^{-j} = V_j(t) with V_0 = 2, V_1 = t, V_{j+1} = t·V_j − V_{j−1}.
    let t = IntPolynomial::from_i64(&[0, 1]);
    let mut v_prev = IntPolynomial::from_i64(&[2]);
    let mut v_cur = t.clone();
    let mut g = IntPolynomial::monomial(f.coeff(m), 0);
    for j in 1..=m {
        let v_j = if j == 1 {
            v_cur.clone()
        } else {
            let next = t.mul(&v_cur).sub(&v_prev);
            v_prev = core::mem::replace(&mut v_cur, next);
            v_cur.clone()
        };
        g = g.add(&v_j.scale(&f.coeff(m - j)));
    }
    Ok(g)
}

/// Lagrange interpolation through integer points; Some only when every
/// coefficient lands in ℤ.
pub(crate) fn interpolate_integer(
    points: &[BigInt],
    values: &[BigInt],
) -> Option<IntPolynomial> {
    let n = points.len();
    let mut acc = vec![BigRational::zero(); n];
    for i in 0..n {
        // basis polynomial ∏_{j≠i} (x − x_j)/(x_i − x_j)
        let mut num = vec![BigRational::one()];
        let mut den = BigRational::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            let root = BigRational::from_integer(points[j].clone());
            let mut next = vec![BigRational::zero(); num.len() + 1];
            for (k, c) in num.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &root;
            }
            num = next;
            den *= BigRational::from_integer(&points[i] - &points[j]);
        }
        let scale = BigRational::from_integer(values[i].clone()) / den;
        for (k, c) in num.iter().enumerate() {
            acc[k] += c * &scale;
        }
    }
    let mut coeffs = Vec::with_capacity(n);
    for c in acc {
        if !c.denom().is_one() {
            return None;
        }
        coeffs.push(c.to_integer());
    }
    Some(IntPolynomial::from_coeffs(coeffs))
}

/// Expands u^m·g(u + 1/u) back into an ordinary polynomial; exact inverse of
/// [`chebyshev_reduce`] and the round-trip oracle for it.
pub fn chebyshev_expand(g: &IntPolynomial) -> IntPolynomial {
    let m = match g.degree() {
        None => return IntPolynomial::zero(),
        Some(m) => m,
    };
    // u^m·g(u + 1/u) = Σ_j g_j·u^{m−j}·(u² + 1)^j
    let u2p1 = IntPolynomial::from_i64(&[1, 0, 1]);
    let mut acc = IntPolynomial::zero();
    let mut pw = IntPolynomial::one();
    for j in 0..=m {
        let term = IntPolynomial::monomial(g.coeff(j), m - j).mul(&pw);
        acc = acc.add(&term);
        if j < m {
            pw = pw.mul(&u2p1);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn p(s: &str) -> IntPolynomial {
        poly_parse(s).unwrap()
    }

    #[test]
    fn parse_paper_examples() {
        assert_eq!(p("u^4 - u^3 - u^2 - u + 1").coeffs(), IntPolynomial::from_i64(&[1, -1, -1, -1, 1]).coeffs());
        assert_eq!(p("5u^2 - 6u + 5").coeffs(), IntPolynomial::from_i64(&[5, -6, 5]).coeffs());
        assert!(p("0").is_zero());
    }

    #[test]
    fn parse_variants() {
        assert_eq!(p("6*x^4 + 3x^3"), p("6u^4 + 3u^3"));
        assert_eq!(p("-u + 3"), IntPolynomial::from_i64(&[3, -1]));
        assert_eq!(p("x"), IntPolynomial::from_i64(&[0, 1]));
        assert_eq!(p("u^2 + u^2"), IntPolynomial::from_i64(&[0, 0, 2]));
    }

    #[test]
    fn parse_errors_carry_position() {
        match poly_parse("u^4 + 1.5") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 7),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(poly_parse("u^-2").is_err());
        assert!(poly_parse("").is_err());
        assert!(poly_parse("u u").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["u^4 - u^3 - u^2 - u + 1", "5*u^2 - 6*u + 5", "0", "-2*u^3 + 7"] {
            let q = p(s);
            assert_eq!(poly_parse(&q.to_string()).unwrap(), q);
        }
    }

    #[test]
    fn resultant_linear_convention() {
        // Res(u−2, u−3) = −1 pins the sign convention.
        let r = poly_resultant(&p("u - 2"), &p("u - 3")).unwrap();
        assert_eq!(r, BigInt::from(-1));
    }

    #[test]
    fn resultant_quadratics() {
        // Res(u²+1, u²−1) = 4: brute force over roots (i,−i)×(1,−1).
        let r = poly_resultant(&p("u^2 + 1"), &p("u^2 - 1")).unwrap();
        assert_eq!(r, BigInt::from(4));
    }

    #[test]
    fn resultant_of_self_is_zero() {
        for s in ["u^2 + 3u + 1", "u^4 - u^3 - u^2 - u + 1", "2u^3 - 5"] {
            assert_eq!(poly_resultant(&p(s), &p(s)).unwrap(), BigInt::zero());
        }
    }

    #[test]
    fn resultant_rejects_zero() {
        assert!(poly_resultant(&IntPolynomial::zero(), &p("u")).is_err());
    }

    /// Brute-force oracle: Res(p,q) = lc(p)^{deg q}·∏ q(αᵢ) over numeric roots.
    fn resultant_oracle(a: &IntPolynomial, b: &IntPolynomial) -> f64 {
        let roots = crate::roots::all_roots_f64(a);
        let mut acc = Complex::new(1.0, 0.0);
        for r in &roots {
            acc = acc * b.eval_complex(*r);
        }
        let lead = a.leading().to_f64().unwrap();
        let mut scale = 1.0;
        for _ in 0..b.degree().unwrap_or(0) {
            scale *= lead;
        }
        acc.re * scale
    }

    #[test]
    fn resultant_matches_root_product() {
        let mut rng = Rng::stream(42, "poly/resultant-oracle");
        let mut done = 0;
        while done < 40 {
            let da = 1 + (rng.below(4) as usize);
            let db = 1 + (rng.below(4) as usize);
            let a = random_poly(&mut rng, da, 5);
            let b = random_poly(&mut rng, db, 5);
            if a.degree() != Some(da) || b.degree() != Some(db) {
                continue;
            }
            let exact = poly_resultant(&a, &b).unwrap().to_f64().unwrap();
            let approx = resultant_oracle(&a, &b);
            let scale = 1.0f64.max(crate::math::abs(exact));
            assert!(
                crate::math::abs(exact - approx) / scale < 1e-6,
                "res mismatch for {a} / {b}: {exact} vs {approx}"
            );
            done += 1;
        }
    }

    fn random_poly(rng: &mut Rng, deg: usize, bound: i64) -> IntPolynomial {
        let coeffs: Vec<i64> = (0..=deg)
            .map(|_| rng.below((2 * bound + 1) as u64) as i64 - bound)
            .collect();
        IntPolynomial::from_i64(&coeffs)
    }

    /// Exact oracle: determinant of the Sylvester matrix (p-rows first)
    /// over ℚ by Gaussian elimination.
    fn sylvester_det(a: &IntPolynomial, b: &IntPolynomial) -> BigInt {
        let m = a.degree().unwrap();
        let n = b.degree().unwrap();
        let size = m + n;
        let mut mat = vec![vec![BigRational::zero(); size]; size];
        for row in 0..n {
            for (i, c) in a.coeffs().iter().enumerate() {
                mat[row][row + m - i] = BigRational::from_integer(c.clone());
            }
        }
        for row in 0..m {
            for (i, c) in b.coeffs().iter().enumerate() {
                mat[n + row][row + n - i] = BigRational::from_integer(c.clone());
            }
        }
        let mut det = BigRational::one();
        for col in 0..size {
            let pivot = (col..size).find(|&r| !mat[r][col].is_zero());
            let pivot = match pivot {
                Some(p) => p,
                None => return BigInt::zero(),
            };
            if pivot != col {
                mat.swap(col, pivot);
                det = -det;
            }
            let p = mat[col][col].clone();
            det *= &p;
            for r in col + 1..size {
                if mat[r][col].is_zero() {
                    continue;
                }
                let factor = &mat[r][col] / &p;
                for c in col..size {
                    let t = &factor * &mat[col][c];
                    mat[r][c] -= t;
                }
            }
        }
        assert!(det.denom().is_one());
        det.to_integer()
    }

    #[test]
    fn resultant_matches_sylvester_determinant() {
        let mut rng = Rng::stream(33, "poly/sylvester-oracle");
        let mut done = 0;
        while done < 60 {
            let da = 1 + rng.below(5) as usize;
            let db = 1 + rng.below(5) as usize;
            let a = random_poly(&mut rng, da, 7);
            let b = random_poly(&mut rng, db, 7);
            if a.degree() != Some(da) || b.degree() != Some(db) {
                continue;
            }
            let fast = poly_resultant(&a, &b).unwrap();
            let slow = sylvester_det(&a, &b);
            assert_eq!(fast, slow, "sign or value mismatch for {a} / {b}");
            done += 1;
        }
    }

    #[test]
    fn resultant_zero_iff_common_factor() {
        // Spec invariant: Res(p,q) = 0 iff gcd(p,q) nonconstant, degree ≤ 6.
        let mut rng = Rng::stream(7, "poly/res-gcd");
        let mut done = 0;
        while done < 120 {
            let da = 1 + rng.below(6) as usize;
            let db = 1 + rng.below(6) as usize;
            let a = random_poly(&mut rng, da, 9);
            let b = random_poly(&mut rng, db, 9);
            if a.degree().is_none() || b.degree().is_none() || a.degree() == Some(0) || b.degree() == Some(0) {
                continue;
            }
            let r = poly_resultant(&a, &b).unwrap();
            let g = poly_gcd(&a, &b);
            assert_eq!(r.is_zero(), g.degree().map_or(false, |d| d > 0), "{a} vs {b}");
            done += 1;
        }
        // Force some common-factor cases.
        for _ in 0..30 {
            let dc = 1 + rng.below(2) as usize;
            let da = 1 + rng.below(3) as usize;
            let db = 1 + rng.below(3) as usize;
            let c = random_poly(&mut rng, dc, 4);
            let a = random_poly(&mut rng, da, 4);
            let b = random_poly(&mut rng, db, 4);
            if c.degree().map_or(true, |d| d == 0) || a.is_zero() || b.is_zero() {
                continue;
            }
            let r = poly_resultant(&a.mul(&c), &b.mul(&c)).unwrap();
            assert!(r.is_zero());
        }
    }

    #[test]
    fn gcd_basics() {
        let g = poly_gcd(&p("u^2 - 1"), &p("u^2 - 2u + 1"));
        assert_eq!(g, p("u - 1"));
        assert!(is_squarefree(&p("u^2 - 1")));
        assert!(!is_squarefree(&p("u^2 - 2u + 1")));
        assert_eq!(squarefree_part(&p("u^2 - 2u + 1")), p("u - 1"));
    }

    #[test]
    fn self_inversive_detection() {
        assert!(is_self_inversive(&p("u^4 - u^3 - u^2 - u + 1")).unwrap());
        assert!(is_self_inversive(&p("5u^2 - 6u + 5")).unwrap());
        // Printed coefficients of the third worked example: reversal differs.
        assert!(!is_self_inversive(&p("6u^4 + 3u^3 + 10u^2 + 6u + 6")).unwrap());
        assert!(is_self_inversive(&IntPolynomial::zero()).is_err());
        assert!(is_self_inversive(&p("u^2 + u")).is_err());
        assert_eq!(p("u^2 - 1").self_inversive_sign(), Some(-1));
    }

    #[test]
    fn chebyshev_reduce_examples() {
        assert_eq!(chebyshev_reduce(&p("u^4 - u^3 - u^2 - u + 1")).unwrap(), p("u^2 - u - 3"));
        assert_eq!(
            chebyshev_reduce(&p("u^6 - u^5 - u^4 - u^3 - u^2 - u + 1")).unwrap(),
            p("u^3 - u^2 - 4u + 1")
        );
        assert_eq!(chebyshev_reduce(&p("5u^2 - 6u + 5")).unwrap(), p("5u - 6"));
    }

    #[test]
    fn chebyshev_rejects() {
        assert!(matches!(chebyshev_reduce(&p("u^2 - 1")), Err(Error::AntiPalindromic)));
        assert!(matches!(chebyshev_reduce(&p("u^2 + 3u + 2")), Err(Error::NotSelfInversive)));
        // Odd-degree palindromes vanish at −1 but are still rejected by parity.
        assert!(matches!(chebyshev_reduce(&p("u^3 + 2u^2 + 2u + 1")), Err(Error::OddDegree)));
    }

    #[test]
    fn chebyshev_round_trip_random() {
        // Expanding u^m·g(u+1/u) reproduces f exactly for every accepted input.
        let mut rng = Rng::stream(9, "poly/chebyshev-roundtrip");
        let mut done = 0;
        while done < 60 {
            let m = 1 + rng.below(6) as usize;
            let mut half: Vec<i64> = (0..=m)
                .map(|_| rng.below(19) as i64 - 9)
                .collect();
            if half[0] == 0 {
                half[0] = 1;
            }
            let mut coeffs = half.clone();
            for i in (0..m).rev() {
                coeffs.push(half[i]);
            }
            let f = IntPolynomial::from_i64(&coeffs);
            if f.degree() != Some(2 * m) || f.constant_term().is_zero() {
                continue;
            }
            let _ = &mut half;
            let g = chebyshev_reduce(&f).unwrap();
            assert_eq!(chebyshev_expand(&g), f, "round trip failed for {f}");
            done += 1;
        }
    }

    #[test]
    fn division_and_pseudo_remainder() {
        let f = p("u^4 - 1");
        let d = p("u^2 + 1");
        assert_eq!(f.div_exact(&d).unwrap(), p("u^2 - 1"));
        assert!(p("u^2 + 2").div_exact(&d).is_none());
        assert!(d.divides(&f));
        let r = f.rem_monic(&d);
        assert!(r.is_zero());
        assert_eq!(p("u^3").rem_monic(&p("u^2 + 1")), p("-u"));
    }

    #[test]
    fn eval_agrees_between_domains() {
        let f = p("3u^3 - 2u + 7");
        let x = BigRational::new(BigInt::from(3), BigInt::from(2));
        let exact = f.eval_rational(&x);
        let approx = f.eval_f64(1.5);
        assert!(crate::math::abs(exact.to_f64().unwrap() - approx) < 1e-12);
        assert_eq!(f.eval_int(&BigInt::from(-2)), BigInt::from(-13));
    }
}
