//! Irreducibility over ℤ at desk scale (degree ≤ 16).
//!
//! Primary certificate: factor-degree patterns modulo several primes. Each
//! prime p with f squarefree mod p contributes the set of degrees realizable
//! as sums of its irreducible-factor degrees; a ℤ-factorization would have to
//! survive in every such set, so an empty intersection certifies
//! irreducibility. When patterns stay inconclusive, an exhaustive Kronecker
//! search (interpolation through divisor tuples, pruned by Mignotte bounds)
//! settles the question either way.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// Hard degree cap of the desk-scale contract.
pub const MAX_DEGREE: usize = 16;

const PRIMES: &[u64] = &[
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127,
];

/// True iff f has no nontrivial factorization over ℤ.
///
/// Requires a primitive input of degree 1..=16 (content reported otherwise).
pub fn is_irreducible(f: &IntPolynomial) -> Result<bool> {
    let n = match f.degree() {
        None | Some(0) => return Err(Error::ZeroPolynomial),
        Some(n) => n,
    };
    if n > MAX_DEGREE {
        return Err(Error::DegreeOutOfRange { degree: n, max: MAX_DEGREE });
    }
    let content = f.content();
    if !content.is_one() {
        return Err(Error::NotPrimitive { content: alloc::format!("{content}") });
    }
    if n == 1 {
        return Ok(true);
    }
    // u | f ⇔ zero constant term.
    if f.constant_term().is_zero() {
        return Ok(false);
    }
    if has_rational_root(f) {
        return Ok(false);
    }
    if n <= 3 {
        // Any factorization of degree ≤ 3 has a linear factor.
        return Ok(true);
    }
    // Degree-pattern sieve.
    let mut surviving: u32 = !0u32;
    let mut usable = 0;
    for &p in PRIMES {
        if (&f.leading() % BigInt::from(p)).is_zero() {
            continue;
        }
        if let Some(mask) = modp_degree_mask(f, p) {
            surviving &= mask;
            usable += 1;
            let proper = surviving & !(1u32 | (1u32 << n));
            if proper == 0 {
                return Ok(true);
            }
            if usable >= 18 {
                break;
            }
        }
    }
    // Patterns inconclusive: settle by exhaustive factor search over the
    // surviving degrees (a minimal factor has degree ≤ n/2).
    for d in 2..=n / 2 {
        if surviving & (1u32 << d) == 0 {
            continue;
        }
        if kronecker_has_factor(f, d) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn has_rational_root(f: &IntPolynomial) -> bool {
    // Roots p/q need p | f₀ and q | f_n.
    let ps = divisors(&f.constant_term().abs());
    let qs = divisors(&f.leading().abs());
    for p in &ps {
        for q in &qs {
            if !p.gcd(q).is_one() {
                continue;
            }
            for sign in [1, -1] {
                let x = BigRational::new(p * BigInt::from(sign), q.clone());
                if f.eval_rational(&x).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    debug_assert!(n.is_positive());
    let mut out = Vec::new();
    let mut d = BigInt::one();
    loop {
        if (&d * &d) > *n {
            break;
        }
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

// ---- arithmetic in F_p[x] ------------------------------------------------

fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    r
}

fn invm(a: u64, p: u64) -> u64 {
    powm(a, p - 2, p)
}

type PolyP = Vec<u64>; // constant term first, trimmed

fn trim(mut a: PolyP) -> PolyP {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn degp(a: &PolyP) -> Option<usize> {
    a.len().checked_sub(1)
}

fn to_modp(f: &IntPolynomial, p: u64) -> PolyP {
    let bp = BigInt::from(p);
    trim(
        f.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(&bp);
                r.to_u64().unwrap()
            })
            .collect(),
    )
}

fn mulp(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = addm(out[i + j], mulm(x, y, p), p);
        }
    }
    trim(out)
}

fn remp(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    let db = degp(b).expect("rem by zero");
    let inv_lead = invm(b[db], p);
    let mut r = a.clone();
    while let Some(dr) = degp(&r) {
        if dr < db {
            break;
        }
        let c = mulm(r[dr], inv_lead, p);
        let shift = dr - db;
        for (i, &bc) in b.iter().enumerate() {
            let t = mulm(c, bc, p);
            r[i + shift] = addm(r[i + shift], p - t % p, p) % p;
        }
        r = trim(r);
    }
    r
}

fn gcdp(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_empty() {
        let r = remp(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(d) = degp(&x) {
        // monic normalization
        let inv = invm(x[d], p);
        x = x.iter().map(|&c| mulm(c, inv, p)).collect();
    }
    x
}

fn derivp(a: &PolyP, p: u64) -> PolyP {
    if a.len() <= 1 {
        return Vec::new();
    }
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulm(c, i as u64 % p, p))
            .collect(),
    )
}

/// x^(p^k) mod f accumulated by repeated Frobenius; with f squarefree this
/// yields the distinct-degree factor structure.
fn ddf_degrees(f: &PolyP, p: u64) -> Vec<usize> {
    let mut degrees = Vec::new();
    let mut g = f.clone();
    // x mod g
    let mut xq: PolyP = vec![0, 1];
    xq = remp(&xq, &g, p);
    let mut d = 0usize;
    while let Some(dg) = degp(&g) {
        if dg == 0 {
            break;
        }
        d += 1;
        if d > dg / 2 {
            degrees.push(dg);
            break;
        }
        xq = powp_mod(&xq, p, &g, p);
        // gcd(g, x^{p^d} − x)
        let mut diff = xq.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = addm(diff[1], p - 1, p);
        let diff = trim(diff);
        if diff.is_empty() {
            // every irreducible factor has degree dividing d
            let count = dg / d;
            for _ in 0..count {
                degrees.push(d);
            }
            return degrees;
        }
        let h = gcdp(&g, &diff, p);
        if let Some(dh) = degp(&h) {
            if dh > 0 {
                for _ in 0..dh / d {
                    degrees.push(d);
                }
                g = divp_exact(&g, &h, p);
                xq = remp(&xq, &g, p);
            }
        }
    }
    degrees
}

fn divp_exact(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    let da = degp(a).unwrap();
    let db = degp(b).unwrap();
    let inv_lead = invm(b[db], p);
    let mut r = a.clone();
    let mut q = vec![0u64; da - db + 1];
    while let Some(dr) = degp(&r) {
        if dr < db {
            break;
        }
        let c = mulm(r[dr], inv_lead, p);
        q[dr - db] = c;
        let shift = dr - db;
        for (i, &bc) in b.iter().enumerate() {
            let t = mulm(c, bc, p);
            r[i + shift] = addm(r[i + shift], p - t % p, p) % p;
        }
        r = trim(r);
    }
    debug_assert!(r.is_empty());
    trim(q)
}

fn powp_mod(a: &PolyP, e: u64, modulus: &PolyP, p: u64) -> PolyP {
    let mut base = remp(a, modulus, p);
    let mut acc: PolyP = vec![1];
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = remp(&mulp(&acc, &base, p), modulus, p);
        }
        base = remp(&mulp(&base, &base, p), modulus, p);
        e >>= 1;
    }
    acc
}

/// Bitmask of degrees realizable as subset sums of the factor degrees of
/// f mod p; None when f mod p is not squarefree.
fn modp_degree_mask(f: &IntPolynomial, p: u64) -> Option<u32> {
    let fp = to_modp(f, p);
    if degp(&fp) != f.degree() {
        return None;
    }
    let d = derivp(&fp, p);
    if d.is_empty() {
        return None;
    }
    let g = gcdp(&fp, &d, p);
    if degp(&g) != Some(0) {
        return None;
    }
    let mut mask = 1u32;
    for deg in ddf_degrees(&fp, p) {
        mask |= mask << deg;
    }
    Some(mask)
}

// ---- Kronecker fallback ---------------------------------------------------

/// Mignotte-style bound on factor coefficients: 2^d · ‖f‖₂ · (ceil).
fn factor_coeff_bound(f: &IntPolynomial, d: usize) -> BigInt {
    let norm2 = f.l2_norm_sqr().sqrt() + BigInt::one();
    (BigInt::one() << d) * norm2
}

use crate::poly::interpolate_integer;

/// Exhaustive degree-d factor search by interpolation through divisor tuples
/// of f at small integer points.
fn kronecker_has_factor(f: &IntPolynomial, d: usize) -> bool {
    // Evaluation points 0, 1, −1, 2, −2, …
    let mut points: Vec<BigInt> = Vec::with_capacity(d + 1);
    let mut k = 0i64;
    while points.len() < d + 1 {
        let t = BigInt::from(k);
        // f(t) = 0 is impossible here: rational roots were removed.
        debug_assert!(!f.eval_int(&t).is_zero());
        points.push(t);
        k = if k > 0 { -k } else { -k + 1 };
    }
    let values: Vec<BigInt> = points.iter().map(|t| f.eval_int(t)).collect();
    let divisor_lists: Vec<Vec<BigInt>> = values
        .iter()
        .map(|v| {
            let mut ds = divisors(&v.abs());
            let negs: Vec<BigInt> = ds.iter().map(|x| -x).collect();
            ds.extend(negs);
            ds
        })
        .collect();
    let bound = factor_coeff_bound(f, d);
    // Fix the first divisor positive: g and −g divide together.
    let mut idx = vec![0usize; d + 1];
    let limits: Vec<usize> = divisor_lists
        .iter()
        .enumerate()
        .map(|(i, l)| if i == 0 { l.len() / 2 } else { l.len() })
        .collect();
    loop {
        let sample: Vec<BigInt> = idx
            .iter()
            .enumerate()
            .map(|(i, &j)| divisor_lists[i][j].clone())
            .collect();
        if let Some(g) = interpolate_integer(&points, &sample) {
            if g.degree() == Some(d)
                && g.max_coeff_abs() <= bound
                && g.divides(f)
            {
                return true;
            }
        }
        // odometer
        let mut pos = 0;
        loop {
            idx[pos] += 1;
            if idx[pos] < limits[pos] {
                break;
            }
            idx[pos] = 0;
            pos += 1;
            if pos > d {
                return false;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{poly_gcd, poly_parse};
    use crate::rng::Rng;

    fn p(s: &str) -> IntPolynomial {
        poly_parse(s).unwrap()
    }

    #[test]
    fn spec_examples() {
        assert!(is_irreducible(&p("u^4 - u^3 - u^2 - u + 1")).unwrap());
        assert!(is_irreducible(&p("u^2 + u + 1")).unwrap());
        assert!(!is_irreducible(&p("u^4 - 1")).unwrap());
    }

    #[test]
    fn contract_errors() {
        assert!(matches!(
            is_irreducible(&p("2u^2 + 2")),
            Err(Error::NotPrimitive { .. })
        ));
        assert!(is_irreducible(&IntPolynomial::zero()).is_err());
        let too_big = IntPolynomial::monomial(BigInt::one(), 17).add(&IntPolynomial::one());
        assert!(matches!(
            is_irreducible(&too_big),
            Err(Error::DegreeOutOfRange { .. })
        ));
    }

    #[test]
    fn classic_hard_cases() {
        // Swinnerton-Dyer-flavored: irreducible but splits mod every prime.
        assert!(is_irreducible(&p("u^4 - 10u^2 + 1")).unwrap());
        // x^4 + 1 likewise.
        assert!(is_irreducible(&p("u^4 + 1")).unwrap());
        // Reducible without rational roots.
        assert!(!is_irreducible(&p("u^4 + 2u^2 + 1")).unwrap());
        assert!(!is_irreducible(&p("u^4 - 4")).unwrap());
        // (u²−u−1)(u²−2) has no rational roots and no small-prime witness.
        let f = p("u^2 - u - 1").mul(&p("u^2 - 2"));
        assert!(!is_irreducible(&f).unwrap());
        // Lehmer's degree-10 polynomial is irreducible.
        assert!(is_irreducible(&p("u^10 + u^9 - u^7 - u^6 - u^5 - u^4 - u^3 + u + 1")).unwrap());
    }

    /// Brute-force oracle: enumerate candidate factors of degree ≤ deg/2
    /// directly by coefficient vectors within the Mignotte bound.
    fn reducible_by_enumeration(f: &IntPolynomial) -> bool {
        let n = f.degree().unwrap();
        for d in 1..=n / 2 {
            let bound = factor_coeff_bound(f, d).to_i64().unwrap().min(40);
            let lead_divs = divisors(&f.leading().abs());
            let const_divs = divisors(&f.constant_term().abs());
            let mut stack = vec![Vec::<i64>::new()];
            while let Some(partial) = stack.pop() {
                if partial.len() == d + 1 {
                    let g = IntPolynomial::from_i64(&partial);
                    if g.degree() == Some(d) && g.divides(f) {
                        return true;
                    }
                    continue;
                }
                if partial.is_empty() {
                    // constant coefficient divides f(0)
                    for c in &const_divs {
                        let c = c.to_i64().unwrap();
                        stack.push(vec![c]);
                        stack.push(vec![-c]);
                    }
                } else if partial.len() == d {
                    // leading coefficient divides lead(f); positive wlog
                    for c in &lead_divs {
                        let mut next = partial.clone();
                        next.push(c.to_i64().unwrap());
                        stack.push(next);
                    }
                } else {
                    for c in -bound..=bound {
                        let mut next = partial.clone();
                        next.push(c);
                        stack.push(next);
                    }
                }
            }
        }
        false
    }

    #[test]
    fn agrees_with_enumeration_on_fixture_corpus() {
        let mut rng = Rng::stream(5, "irreducible/corpus");
        let mut done = 0;
        while done < 40 {
            let deg = 2 + rng.below(5) as usize;
            let coeffs: Vec<i64> = (0..=deg).map(|_| rng.below(7) as i64 - 3).collect();
            let f = IntPolynomial::from_i64(&coeffs);
            if f.degree() != Some(deg) || !f.is_primitive() || f.constant_term().is_zero() {
                continue;
            }
            let fast = is_irreducible(&f).unwrap();
            let slow = !reducible_by_enumeration(&f);
            assert_eq!(fast, slow, "disagreement on {f}");
            done += 1;
        }
    }

    #[test]
    fn products_are_reducible() {
        let mut rng = Rng::stream(6, "irreducible/products");
        let mut done = 0;
        while done < 25 {
            let a_coeffs: Vec<i64> = (0..=2 + rng.below(3) as usize)
                .map(|_| rng.below(9) as i64 - 4)
                .collect();
            let b_coeffs: Vec<i64> = (0..=2 + rng.below(3) as usize)
                .map(|_| rng.below(9) as i64 - 4)
                .collect();
            let a = IntPolynomial::from_i64(&a_coeffs);
            let b = IntPolynomial::from_i64(&b_coeffs);
            if a.degree().map_or(true, |d| d == 0) || b.degree().map_or(true, |d| d == 0) {
                continue;
            }
            let f = a.mul(&b).primitive_part();
            if f.degree().unwrap() > MAX_DEGREE || f.constant_term().is_zero() {
                continue;
            }
            assert!(!is_irreducible(&f).unwrap(), "{f} should be reducible");
            done += 1;
        }
        let _ = poly_gcd(&p("u"), &p("u")); // keep import used
    }
}
