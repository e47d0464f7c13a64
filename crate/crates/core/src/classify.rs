//! Dynamical classification of integer polynomials and matrices.
//!
//! For an irreducible f the automorphism it defines is: ergodic iff f is not
//! cyclotomic; expansive iff f has no roots of modulus 1; totally irreducible
//! iff no two distinct roots have a root-of-unity ratio; and acts on a torus
//! (rather than a solenoid) iff f is an algebraic unit. The unit-circle root
//! count is certified exactly: self-inversive test, then the Sturm count of
//! the reduced polynomial g with f(u) = u^m·g(u + 1/u) on (−2, 2).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cyclotomic::{cyclotomic_order, cyclotomic_poly, totient_at_most};
use crate::error::{Error, Result};
use crate::irreducible::is_irreducible;
use crate::matrix::IntMatrix;
use crate::poly::{
    chebyshev_reduce, interpolate_integer, is_squarefree, poly_resultant, squarefree_part,
    IntPolynomial,
};
use crate::sturm::{rat, real_root_count, SturmChain};

/// The classification verdicts plus place structure.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub input: IntPolynomial,
    pub irreducible: bool,
    pub ergodic: bool,
    pub expansive: bool,
    pub totally_irreducible: bool,
    pub algebraic_unit: bool,
    /// Number of complex places v with |θ|_v = 1 (conjugate pairs on the
    /// unit circle).
    pub s0_count: usize,
    /// dim_ℝ of the central subspace, 2·s0_count.
    pub central_real_dim: usize,
    pub real_place_count: usize,
    pub complex_place_count: usize,
    /// Primes dividing f₀·f_n: the candidate support of the finite places.
    pub finite_place_primes: Vec<u64>,
    pub notes: Vec<String>,
}

/// Classifies a primitive integer polynomial with nonzero constant term.
///
/// Inputs with negative leading coefficient are negated on entry.
pub fn classify(f: &IntPolynomial) -> Result<ClassificationReport> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.constant_term().is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let content = f.content();
    if !content.is_one() {
        return Err(Error::NotPrimitive { content: format!("{content}") });
    }
    let mut notes = Vec::new();
    let f = if f.leading().is_negative() {
        notes.push(String::from("input negated so the leading coefficient is positive"));
        f.neg()
    } else {
        f.clone()
    };
    let n = f.degree().unwrap();
    if n == 0 {
        return Err(Error::ZeroPolynomial);
    }

    let irreducible = is_irreducible(&f)?;
    if irreducible {
        notes.push(String::from(
            "irreducible over ℤ (factor-degree patterns mod p, exhaustive search fallback)",
        ));
    }

    let mut s0_count = 0usize;
    let mut ergodic = false;
    let mut totally_irreducible = false;
    let mut expansive = false;

    if irreducible {
        s0_count = unit_circle_root_pairs(&f)?;
        match f.self_inversive_sign() {
            Some(_) => notes.push(format!(
                "is_self_inversive=true; Sturm-certified unit-circle pairs: {s0_count}"
            )),
            None if n >= 2 => notes.push(String::from(
                "is_self_inversive=false: the reversed coefficient vector differs, so an \
                 irreducible polynomial of this shape has no roots of modulus 1 and s0_count=0; \
                 any claim that all roots lie on the unit circle is inconsistent with these \
                 coefficients",
            )),
            None => {}
        }
        let cyclo = is_cyclotomic(&f)?;
        ergodic = !cyclo;
        if let Some(k) = cyclotomic_order(&f) {
            notes.push(format!("f = Φ_{k}: divides u^{k} − 1, hence not ergodic"));
        }
        let degenerate = if n >= 2 { is_degenerate(&f)? } else { false };
        totally_irreducible = !degenerate;
        if degenerate {
            notes.push(String::from(
                "degenerate: two distinct roots have a root-of-unity ratio; powers of the \
                 automorphism lose irreducibility",
            ));
        } else {
            notes.push(String::from(
                "totally irreducible: the ratio resultant has no cyclotomic factor",
            ));
        }
        expansive = if n == 1 {
            f.constant_term().abs() != f.leading().abs()
        } else {
            s0_count == 0
        };
    } else {
        notes.push(String::from(
            "reducible: ergodic/expansive/totally_irreducible verdicts are not computed for \
             reducible polynomials and default to false",
        ));
    }

    let algebraic_unit = f.constant_term().abs().is_one() && f.leading().abs().is_one();
    let finite_place_primes = prime_divisors(&(f.constant_term() * f.leading()).abs());
    if algebraic_unit {
        notes.push(String::from("algebraic unit: |f_0| = |f_n| = 1 (torus case)"));
    } else {
        notes.push(format!(
            "non-unit: finite places supported on primes {finite_place_primes:?} (solenoid case)"
        ));
    }

    // Archimedean place structure from the squarefree part (exact Sturm).
    let sf = squarefree_part(&f);
    let real_place_count = real_root_count(&sf)?;
    let complex_place_count = (sf.degree().unwrap() - real_place_count) / 2;

    Ok(ClassificationReport {
        input: f,
        irreducible,
        ergodic,
        expansive,
        totally_irreducible,
        algebraic_unit,
        s0_count,
        central_real_dim: 2 * s0_count,
        real_place_count,
        complex_place_count,
        finite_place_primes,
        notes,
    })
}

/// Classifies an integer matrix through its characteristic polynomial.
pub fn classify_matrix(a: &IntMatrix) -> Result<ClassificationReport> {
    let mut report = classify(&a.char_poly())?;
    report.notes.push(format!(
        "classified via the exact characteristic polynomial of a {0}×{0} matrix",
        a.dim()
    ));
    Ok(report)
}

/// True iff f = Φ_k for some k (pre: f irreducible).
pub fn is_cyclotomic(f: &IntPolynomial) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Ok(false);
    }
    Ok(cyclotomic_order(f).is_some())
}

/// Exact number of conjugate root pairs on the unit circle (pre: f
/// irreducible; degree 1 returns 0 since ±1 cannot be roots upstream).
pub fn unit_circle_root_pairs(f: &IntPolynomial) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.degree() == Some(0) {
        return Ok(0);
    }
    if f.degree() == Some(1) {
        return Ok(0);
    }
    if f.self_inversive_sign().is_none() {
        return Ok(0);
    }
    self_inversive_unit_pairs(f)
}

/// Unit-circle pair count for any self-inversive polynomial: forced u±1
/// factors are divided out, the squarefree part is taken, and the Sturm
/// count of the reduced polynomial on the open interval (−2, 2) is returned.
///
/// Total on self-inversive inputs whether or not they are irreducible; the
/// count is of distinct conjugate pairs strictly on the circle (roots at ±1
/// excluded).
pub fn self_inversive_unit_pairs(f: &IntPolynomial) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.constant_term().is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    if f.self_inversive_sign().is_none() {
        return Err(Error::NotSelfInversive);
    }
    let mut g = squarefree_part(f);
    // Remove the (now simple) roots at ±1.
    for root in [1i64, -1] {
        let lin = IntPolynomial::from_i64(&[-root, 1]);
        if let Some(q) = g.div_exact(&lin) {
            g = q;
        }
    }
    if g.degree() == Some(0) {
        return Ok(0);
    }
    debug_assert_eq!(g.self_inversive_sign(), Some(1));
    let reduced = chebyshev_reduce(&g)?;
    let chain = SturmChain::new(&squarefree_part(&reduced))?;
    Ok(chain.count_open(&rat(-2, 1), &rat(2, 1)))
}

/// True ⇒ not totally irreducible: some ratio of distinct roots is a root of
/// unity. Resultant route: D(y) = Res_x(f(x), f(y·x)) vanishes exactly at
/// root ratios; after removing the diagonal factor (y−1)^n, degeneracy is a
/// cyclotomic divisor Φ_k with φ(k) ≤ n².
pub fn is_degenerate(f: &IntPolynomial) -> Result<bool> {
    let n = degenerate_precheck(f)?;
    if n < 2 {
        return Ok(false);
    }
    let dpoly = ratio_resultant(f)?;
    // Diagonal contributions: exactly (y−1)^n for squarefree f.
    let mut reduced = dpoly;
    let y_minus_1 = IntPolynomial::from_i64(&[-1, 1]);
    for _ in 0..n {
        reduced = reduced
            .div_exact(&y_minus_1)
            .ok_or(Error::NotSquarefree)?;
    }
    let bound = (n * n) as u64;
    for k in totient_at_most(bound) {
        if cyclotomic_poly(k).divides(&reduced) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Graeffe-route cross-check for [`is_degenerate`]: for each candidate order
/// k, the polynomial with roots θᵢᵏ (computed as Res_y(f(y), x − yᵏ)) is
/// squarefree iff the k-th powers of the roots stay distinct.
pub fn is_degenerate_graeffe(f: &IntPolynomial) -> Result<bool> {
    let n = degenerate_precheck(f)?;
    if n < 2 {
        return Ok(false);
    }
    let bound = (n * n) as u64;
    for k in totient_at_most(bound) {
        let gk = power_roots_poly(f, k)?;
        if !is_squarefree(&gk) {
            return Ok(true);
        }
    }
    Ok(false)
}

fn degenerate_precheck(f: &IntPolynomial) -> Result<usize> {
    match f.degree() {
        None => Err(Error::ZeroPolynomial),
        Some(n) => {
            if !is_squarefree(f) {
                Err(Error::NotSquarefree)
            } else {
                Ok(n)
            }
        }
    }
}

/// D(y) = Res_x(f(x), f(y·x)) ∈ ℤ[y], degree n², by evaluation at n²+1
/// nonzero integers and exact interpolation.
fn ratio_resultant(f: &IntPolynomial) -> Result<IntPolynomial> {
    let n = f.degree().unwrap();
    let deg_d = n * n;
    let mut points = Vec::with_capacity(deg_d + 1);
    let mut k = 1i64;
    while points.len() < deg_d + 1 {
        points.push(BigInt::from(k));
        k = if k > 0 { -k } else { -k + 1 };
    }
    let mut values = Vec::with_capacity(points.len());
    for t in &points {
        let ft = f.compose_scale(t);
        values.push(poly_resultant(f, &ft)?);
    }
    interpolate_integer(&points, &values).ok_or_else(|| Error::Internal {
        message: String::from("ratio resultant interpolation left rational coefficients"),
    })
}

/// Res_y(f(y), x − yᵏ) = f_nᵏ·∏ᵢ(x − θᵢᵏ), by evaluation/interpolation in x.
fn power_roots_poly(f: &IntPolynomial, k: u64) -> Result<IntPolynomial> {
    let n = f.degree().unwrap();
    let mut points = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity(n + 1);
    for x0 in 0..=(n as i64) {
        // q(y) = x0 − y^k
        let mut q = IntPolynomial::monomial(BigInt::from(-1), k as usize);
        q = q.add(&IntPolynomial::monomial(BigInt::from(x0), 0));
        points.push(BigInt::from(x0));
        values.push(poly_resultant(f, &q)?);
    }
    interpolate_integer(&points, &values).ok_or_else(|| Error::Internal {
        message: String::from("power-roots interpolation left rational coefficients"),
    })
}

/// Licenses modeling Γ as the full s-torus: ergodic and totally irreducible
/// (the surjectivity hypothesis onto pairs of central places).
pub fn multiplicative_independence(f: &IntPolynomial) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let ergodic = !is_cyclotomic(f)?;
    let degenerate = match f.degree() {
        Some(n) if n >= 2 => is_degenerate(f)?,
        _ => false,
    };
    Ok(ergodic && !degenerate)
}

fn prime_divisors(n: &BigInt) -> Vec<u64> {
    use num_traits::ToPrimitive;
    let mut n = n.abs().to_u64().unwrap_or_else(|| {
        // Coefficients beyond u64 don't occur at desk scale; factor the
        // residue conservatively.
        u64::MAX
    });
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}
