//! Numeric root isolation: Aberth–Ehrlich in f64 for starting points, then
//! dyadic Newton polishing to the requested precision.
//!
//! Exact counts always come from Sturm certificates; this module only
//! refines locations — except for [`unit_modulus_pairs`], which is the
//! deliberately independent numeric route used to cross-check the certified
//! unit-circle counts.

use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::math::{self, Complex};
use crate::poly::IntPolynomial;
use crate::precision::{Dy, DyC};

/// All complex roots in f64 precision, in no particular order.
pub fn all_roots_f64(f: &IntPolynomial) -> Vec<Complex> {
    let n = match f.degree() {
        None | Some(0) => return Vec::new(),
        Some(n) => n,
    };
    // Strip zero roots so Aberth never sees coincident iterates at 0.
    let mut coeffs: Vec<f64> = f
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
        .collect();
    let mut zeros = 0usize;
    while coeffs.first().map_or(false, |c| *c == 0.0) {
        coeffs.remove(0);
        zeros += 1;
    }
    let mut roots = Vec::with_capacity(n);
    roots.resize(zeros, Complex::ZERO);
    if coeffs.len() > 1 {
        roots.extend(aberth(&coeffs));
    }
    roots
}

fn horner(coeffs: &[f64], z: Complex) -> (Complex, Complex) {
    let mut p = Complex::ZERO;
    let mut dp = Complex::ZERO;
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + Complex::new(*c, 0.0);
    }
    (p, dp)
}

fn aberth(coeffs: &[f64]) -> Vec<Complex> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let radius = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| math::abs(c / lead))
            .fold(0.0, f64::max);
    let mut z: Vec<Complex> = (0..n)
        .map(|k| {
            let theta = math::TAU * (k as f64 + 0.35) / n as f64 + 0.4;
            Complex::cis(theta).scale(radius * 0.8)
        })
        .collect();
    for _ in 0..400 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = if dp.norm() == 0.0 {
                Complex::new(1e-12, 1e-12)
            } else {
                p / dp
            };
            let mut s = Complex::ZERO;
            for j in 0..n {
                if j != i {
                    s += Complex::ONE / (z[i] - z[j]);
                }
            }
            let denom = Complex::ONE - w * s;
            let step = if denom.norm() < 1e-300 { w } else { w / denom };
            z[i] = z[i] - step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

/// Newton-polishes a root approximation to roughly `prec` bits.
pub(crate) fn polish(f: &IntPolynomial, z0: Complex, prec: u32) -> Result<DyC> {
    let work = prec + 64;
    let coeffs: Vec<DyC> = f
        .coeffs()
        .iter()
        .map(|c| DyC::real(Dy::from_big(c.clone())))
        .collect();
    let eval = |z: &DyC| -> (DyC, DyC) {
        let mut p = DyC::zero();
        let mut dp = DyC::zero();
        for c in coeffs.iter().rev() {
            dp = dp.mul(z, work).add(&p, work);
            p = p.mul(z, work).add(c, work);
        }
        (p, dp)
    };
    let mut z = DyC::from_f64(z0);
    let scale = z.mag2().max(0);
    for _ in 0..(2 + prec / 4) {
        let (p, dp) = eval(&z);
        if dp.is_zero() {
            return Err(Error::PrecisionInsufficient { needed_bits: prec * 2 });
        }
        let step = p.div(&dp, work);
        z = z.sub(&step, work);
        if step.mag2() < scale - i64::from(prec) - 8 {
            let (p, _) = eval(&z);
            if p.is_zero() || p.mag2() < f_residual_target(f, &z, prec) {
                return Ok(z);
            }
        }
    }
    let (p, _) = eval(&z);
    if p.is_zero() || p.mag2() < f_residual_target(f, &z, prec) {
        Ok(z)
    } else {
        Err(Error::PrecisionInsufficient { needed_bits: prec * 2 })
    }
}

/// Acceptable |f(z)| magnitude for a polished root: the backward-error scale
/// max|cᵢ|·max(1,|z|)^deg · 2^{−prec+margin}.
fn f_residual_target(f: &IntPolynomial, z: &DyC, prec: u32) -> i64 {
    let deg = f.degree().unwrap_or(0) as i64;
    let coeff_mag = f.max_coeff_abs().bits() as i64;
    let zmag = z.mag2().max(0);
    coeff_mag + deg * zmag - i64::from(prec) + 16
}

/// All roots polished to `prec` bits, paired with their f64 shadows.
pub(crate) fn all_roots_polished(f: &IntPolynomial, prec: u32) -> Result<Vec<DyC>> {
    let approx = all_roots_f64(f);
    approx.into_iter().map(|z| polish(f, z, prec)).collect()
}

/// Counts conjugate root pairs numerically certified to lie on the unit
/// circle at `prec` working bits: pairs with Im θ decidedly nonzero and
/// | |θ|² − 1 | < 2^{−prec/4}.
///
/// This is the independent numeric route; the exact route is the Sturm count
/// of the Chebyshev-reduced polynomial.
pub fn unit_modulus_pairs(f: &IntPolynomial, prec: u32) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let work = prec + 32;
    let roots = all_roots_polished(f, work)?;
    let one = Dy::from_int(1);
    let mut pairs = 0usize;
    for z in &roots {
        // Each conjugate pair contributes exactly one root with Im > 0.
        if z.im.mag2() <= -i64::from(prec) / 2 || z.im.m.sign() == num_bigint::Sign::Minus {
            continue;
        }
        let d = z.norm_sqr(work).sub(&one, work);
        if d.mag2() < -i64::from(prec) / 4 {
            pairs += 1;
        }
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly_parse;

    fn p(s: &str) -> IntPolynomial {
        poly_parse(s).unwrap()
    }

    #[test]
    fn quadratic_roots() {
        let roots = all_roots_f64(&p("u^2 - u - 1"));
        let mut vals: Vec<f64> = roots.iter().map(|z| z.re).collect();
        vals.sort_by(f64::total_cmp);
        assert!(math::abs(vals[0] + 0.6180339887) < 1e-9);
        assert!(math::abs(vals[1] - 1.6180339887) < 1e-9);
    }

    #[test]
    fn polish_reaches_precision() {
        let f = p("u^4 - u^3 - u^2 - u + 1");
        for z0 in all_roots_f64(&f) {
            let z = polish(&f, z0, 256).unwrap();
            // Residual should be far below f64 resolution.
            let coeffs: Vec<DyC> = f
                .coeffs()
                .iter()
                .map(|c| DyC::real(Dy::from_big(c.clone())))
                .collect();
            let mut acc = DyC::zero();
            for c in coeffs.iter().rev() {
                acc = acc.mul(&z, 320).add(c, 320);
            }
            assert!(acc.mag2() < -200, "residual mag {}", acc.mag2());
        }
    }

    #[test]
    fn unit_pairs_on_examples() {
        assert_eq!(unit_modulus_pairs(&p("u^4 - u^3 - u^2 - u + 1"), 256).unwrap(), 1);
        assert_eq!(unit_modulus_pairs(&p("u^6 - u^5 - u^4 - u^3 - u^2 - u + 1"), 256).unwrap(), 2);
        assert_eq!(unit_modulus_pairs(&p("5u^2 - 6u + 5"), 256).unwrap(), 1);
        assert_eq!(unit_modulus_pairs(&p("u^2 - u - 1"), 256).unwrap(), 0);
        // Lehmer's polynomial: a Salem number, 4 unit pairs out of degree 10.
        assert_eq!(
            unit_modulus_pairs(&p("u^10 + u^9 - u^7 - u^6 - u^5 - u^4 - u^3 + u + 1"), 256)
                .unwrap(),
            4
        );
    }

    #[test]
    fn zero_roots_are_stripped() {
        let roots = all_roots_f64(&p("u^3 - u^2"));
        let zeros = roots.iter().filter(|z| z.norm() < 1e-12).count();
        assert_eq!(zeros, 2);
    }
}
