//! Cyclotomic polynomials and totient enumeration.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::poly::IntPolynomial;

/// Prime factorization by trial division; fine for the desk-scale k in use.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_totient(n: u64) -> u64 {
    let mut t = n;
    for (p, _) in factorize(n) {
        t = t / p * (p - 1);
    }
    t
}

/// Φ_k, built multiplicatively: Φ_{pm}(x) = Φ_m(x^p)/Φ_m(x) for p ∤ m,
/// then Φ_{p^e·m}(x) = Φ_{pm}(x^{p^{e−1}}).
pub fn cyclotomic_poly(k: u64) -> IntPolynomial {
    assert!(k >= 1, "cyclotomic index must be positive");
    let mut phi = IntPolynomial::from_i64(&[-1, 1]); // Φ_1 = u − 1
    let factors = factorize(k);
    let mut radical_part = 1u64;
    for &(p, _) in &factors {
        radical_part *= p;
        let up = phi.substitute_power(p as usize);
        phi = up.div_exact(&phi).expect("cyclotomic recursion divides exactly");
    }
    let rest = k / radical_part;
    if rest > 1 {
        phi = phi.substitute_power(rest as usize);
    }
    phi
}

/// u^k − 1.
pub fn u_pow_minus_one(k: usize) -> IntPolynomial {
    let mut coeffs = alloc::vec![BigInt::from(-1)];
    coeffs.resize(k, BigInt::from(0));
    coeffs.push(BigInt::one());
    IntPolynomial::from_coeffs(coeffs)
}

/// All k with φ(k) = n. Uses φ(k) ≥ √(k/2), so k ≤ 2n² suffices.
pub fn inverse_totient(n: u64) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    let cap = 2 * n * n + 6;
    (1..=cap).filter(|&k| euler_totient(k) == n).collect()
}

/// All k ≥ 2 with φ(k) ≤ bound. Uses φ(k) ≥ √k for k > 6.
pub fn totient_at_most(bound: u64) -> Vec<u64> {
    let cap = (bound * bound).max(6);
    (2..=cap).filter(|&k| euler_totient(k) <= bound).collect()
}

/// Some(k) iff f = Φ_k.
pub fn cyclotomic_order(f: &IntPolynomial) -> Option<u64> {
    let n = f.degree()? as u64;
    if n == 0 || !f.is_monic() {
        return None;
    }
    inverse_totient(n).into_iter().find(|&k| &cyclotomic_poly(k) == f)
}
