//! The archimedean picture for the torus case: companion matrix, certified
//! eigendata grouped into places, a real basis of the central subspace W⁽⁰⁾,
//! the invariant projection onto it, and the rotation multipliers ξ.
//!
//! Exact certificates pick all counts (Sturm on the reduced polynomial for
//! unit-circle pairs, Sturm on f for real places); numerics only refine
//! locations. The eigenbasis and projection are computed in dyadic arithmetic
//! at the requested precision and the frame invariants are verified at
//! 2^{−precision_bits/2} before the frame is returned.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::classify::{classify, multiplicative_independence, unit_circle_root_pairs};
use crate::error::{Error, Result};
use crate::math::{self, Complex};
use crate::matrix::IntMatrix;
use crate::poly::{chebyshev_reduce, IntPolynomial};
use crate::precision::{dy_mat_inverse, Dy, DyC};
use crate::roots;
use crate::sturm::SturmChain;

/// Archimedean place of the number field ℚ(θ).
#[derive(Debug, Clone)]
pub enum Place {
    Real { root: f64 },
    Complex { root: Complex, unit_circle: bool },
}

/// Residual magnitudes (log₂) certified at frame construction.
#[derive(Debug, Clone, Copy)]
pub struct FrameCertificate {
    pub invariance_log2: i64,
    pub projection_log2: i64,
    pub round_trip_log2: i64,
}

/// Basis and rotation data for the central subspace of a toral automorphism.
#[derive(Debug, Clone)]
pub struct CentralFrame {
    pub f: IntPolynomial,
    pub companion: IntMatrix,
    /// Torus dimension n = deg f.
    pub dim: usize,
    /// Number of unit-circle conjugate pairs; dim W⁽⁰⁾ = 2s.
    pub s: usize,
    pub places: Vec<Place>,
    /// Indices into `places` of the unit-circle complex places.
    pub s0_places: Vec<usize>,
    /// Rotation angles φ_v with θ_v = e^{iφ_v}, ascending.
    pub angles: Vec<f64>,
    /// Multiplicative independence of the central places (ergodic and
    /// totally irreducible): licenses modeling Γ as the full s-torus.
    pub independent: bool,
    /// 2s column vectors in ℝⁿ spanning W⁽⁰⁾ (Re/Im of unit eigenvectors).
    pub basis_w0: Vec<Vec<f64>>,
    /// n−2s column vectors spanning the invariant complement.
    pub basis_complement: Vec<Vec<f64>>,
    /// n×n projection onto W⁽⁰⁾ along the complement.
    pub proj_w0: Vec<Vec<f64>>,
    pub precision_bits: u32,
    pub certificate: FrameCertificate,
    // W⁽⁰⁾-coordinate rows (first 2s rows of the basis inverse).
    coords_w0: Vec<Vec<f64>>,
    coords_complement: Vec<Vec<f64>>,
    companion_f64: Vec<Vec<f64>>,
    companion_inv_f64: Vec<Vec<f64>>,
    // High-precision internals for certified checks.
    hp_basis: Vec<Vec<Dy>>,
    hp_inv: Vec<Vec<Dy>>,
    hp_rot: Vec<(Dy, Dy)>,
}

/// Companion matrix: ones on the superdiagonal, last row −f₀,…,−f_{n−1}.
pub fn companion(f: &IntPolynomial) -> Result<IntMatrix> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let n = f.degree().unwrap();
    if n == 0 {
        return Err(Error::ZeroPolynomial);
    }
    let mut m = IntMatrix::zero(n);
    for i in 0..n - 1 {
        *m.at_mut(i, i + 1) = BigInt::one();
    }
    for j in 0..n {
        *m.at_mut(n - 1, j) = -f.coeff(j);
    }
    Ok(m)
}

/// Builds the central frame of an irreducible, ergodic, unit polynomial with
/// at least one unit-circle root pair.
pub fn build_frame(f: &IntPolynomial, precision_bits: u32) -> Result<CentralFrame> {
    let prec = precision_bits.max(64);
    let work = prec + 32;
    let report = classify(f)?;
    if !report.irreducible {
        return Err(Error::FrameUnsupported { reason: String::from("polynomial is reducible") });
    }
    if !report.algebraic_unit {
        return Err(Error::NotAlgebraicUnit);
    }
    if !report.ergodic {
        return Err(Error::FrameUnsupported { reason: String::from("polynomial is cyclotomic") });
    }
    if report.s0_count == 0 {
        return Err(Error::NoCentralDirections);
    }
    let f = report.input.clone(); // sign-normalized, hence monic for units
    let n = f.degree().unwrap();
    let s = report.s0_count;
    let a = companion(&f)?;

    // Certified unit-circle pairs from the reduced polynomial.
    let reduced = chebyshev_reduce(&f)?;
    let chain = SturmChain::new(&reduced)?;
    let two = BigRational::from_integer(BigInt::from(2));
    let mut intervals = chain.isolate(&-&two, &two);
    if intervals.len() != s {
        return Err(Error::Internal {
            message: format!("expected {s} unit intervals, found {}", intervals.len()),
        });
    }
    // Ascending t = 2cos φ means descending φ; sort by −t for ascending φ.
    intervals.sort_by(|x, y| y.0.cmp(&x.0));
    let mut unit_roots: Vec<DyC> = Vec::with_capacity(s);
    let mut angles = Vec::with_capacity(s);
    let mut hp_rot = Vec::with_capacity(s);
    for (lo, hi) in intervals {
        let (lo, hi) = chain.refine(lo, hi, prec + 8);
        let mid = (&lo + &hi) / &two;
        let t = dy_from_rational(&mid, work);
        let re = t.div(&Dy::from_int(2), work);
        let im_sq = Dy::from_int(1).sub(&re.mul(&re, work), work);
        if im_sq.m.is_negative() {
            return Err(Error::PrecisionInsufficient { needed_bits: prec * 2 });
        }
        let im = im_sq.sqrt(work);
        angles.push(math::acos(re.to_f64()));
        hp_rot.push((re.clone(), im.clone()));
        unit_roots.push(DyC { re, im });
    }

    // Certified real roots of f.
    let fchain = SturmChain::new(&f)?;
    let bound = fchain.cauchy_bound();
    let mut real_intervals = fchain.isolate(&-&bound, &bound);
    real_intervals.sort_by(|x, y| x.0.cmp(&y.0));
    let real_roots: Vec<Dy> = real_intervals
        .into_iter()
        .map(|(lo, hi)| {
            let (lo, hi) = fchain.refine(lo, hi, prec + 8);
            let mid = (&lo + &hi) / &two;
            dy_from_rational(&mid, work)
        })
        .collect();
    let r = real_roots.len();
    let c_total = (n - r) / 2;
    let c_off = c_total - s;

    // Non-unit complex pairs by numeric isolation + polish.
    let mut off_roots: Vec<DyC> = Vec::new();
    for z0 in roots::all_roots_f64(&f) {
        if z0.im <= 0.0 {
            continue;
        }
        let z = roots::polish(&f, z0, prec)?;
        if z.im.mag2() <= -i64::from(prec) / 2 {
            continue; // actually real
        }
        let dist = z.norm_sqr(work).sub(&Dy::from_int(1), work);
        if dist.mag2() < -i64::from(prec) / 4 {
            continue; // one of the certified unit pairs
        }
        off_roots.push(z);
    }
    if off_roots.len() != c_off {
        return Err(Error::Internal {
            message: format!(
                "numeric route found {} off-circle pairs, certificates say {c_off}",
                off_roots.len()
            ),
        });
    }

    // Places: unit pairs first (matching angle order), then real, then
    // off-circle pairs.
    let mut places = Vec::with_capacity(s + r + c_off);
    let mut s0_places = Vec::with_capacity(s);
    for z in &unit_roots {
        s0_places.push(places.len());
        places.push(Place::Complex { root: z.to_f64(), unit_circle: true });
    }
    for x in &real_roots {
        places.push(Place::Real { root: x.to_f64() });
    }
    for z in &off_roots {
        places.push(Place::Complex { root: z.to_f64(), unit_circle: false });
    }

    // Basis columns: Vandermonde eigenvectors (1, θ, θ², …) of the companion
    // matrix; Re/Im for complex pairs.
    let mut columns: Vec<Vec<Dy>> = Vec::with_capacity(n);
    for z in &unit_roots {
        let (re_col, im_col) = vandermonde_pair(z, n, work);
        columns.push(re_col);
        columns.push(im_col);
    }
    let mut complement: Vec<Vec<Dy>> = Vec::new();
    for x in &real_roots {
        complement.push(vandermonde_real(x, n, work));
    }
    for z in &off_roots {
        let (re_col, im_col) = vandermonde_pair(z, n, work);
        complement.push(re_col);
        complement.push(im_col);
    }
    // Orthogonalize the complement among itself for conditioning (the span,
    // hence the projection, is unchanged).
    gram_schmidt(&mut complement, work);
    columns.extend(complement.iter().cloned());

    // Row-major basis matrix with the columns above.
    let hp_basis: Vec<Vec<Dy>> = (0..n)
        .map(|i| (0..n).map(|j| columns[j][i].clone()).collect())
        .collect();
    let hp_inv = dy_mat_inverse(&hp_basis, work);

    let basis_w0: Vec<Vec<f64>> =
        columns[..2 * s].iter().map(|c| c.iter().map(Dy::to_f64).collect()).collect();
    let basis_complement: Vec<Vec<f64>> =
        columns[2 * s..].iter().map(|c| c.iter().map(Dy::to_f64).collect()).collect();
    let coords_w0: Vec<Vec<f64>> =
        hp_inv[..2 * s].iter().map(|row| row.iter().map(Dy::to_f64).collect()).collect();
    let coords_complement: Vec<Vec<f64>> =
        hp_inv[2 * s..].iter().map(|row| row.iter().map(Dy::to_f64).collect()).collect();

    // proj = B · diag(1…1, 0…0) · B⁻¹ from the high-precision factors.
    let mut proj_hp = vec![vec![Dy::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Dy::zero();
            for k in 0..2 * s {
                acc = acc.add(&hp_basis[i][k].mul(&hp_inv[k][j], work), work);
            }
            proj_hp[i][j] = acc;
        }
    }
    let proj_w0: Vec<Vec<f64>> =
        proj_hp.iter().map(|row| row.iter().map(Dy::to_f64).collect()).collect();

    let companion_f64 = a.to_f64_rows();
    let companion_inv_f64 = a.inverse_unimodular()?.to_f64_rows();

    let independent = multiplicative_independence(&f)?;
    let mut frame = CentralFrame {
        f,
        companion: a,
        dim: n,
        s,
        places,
        s0_places,
        angles,
        independent,
        basis_w0,
        basis_complement,
        proj_w0,
        precision_bits: prec,
        certificate: FrameCertificate {
            invariance_log2: 0,
            projection_log2: 0,
            round_trip_log2: 0,
        },
        coords_w0,
        coords_complement,
        companion_f64,
        companion_inv_f64,
        hp_basis,
        hp_inv,
        hp_rot,
    };
    frame.certificate = frame.verify(&proj_hp)?;
    // Cross-check against the independent exact route.
    debug_assert_eq!(frame.s, unit_circle_root_pairs(&frame.f)?);
    Ok(frame)
}

fn dy_from_rational(x: &BigRational, prec: u32) -> Dy {
    Dy::from_big(x.numer().clone()).div(&Dy::from_big(x.denom().clone()), prec)
}

/// Basis pair (Re v(θ), −Im v(θ)) for the eigenvector v(θ) = (1, θ, θ², …).
/// With the sign flip, A acts on the (re, im) coordinates as rotation by +φ,
/// i.e. multiplication by θ.
fn vandermonde_pair(z: &DyC, n: usize, prec: u32) -> (Vec<Dy>, Vec<Dy>) {
    let mut re = Vec::with_capacity(n);
    let mut im = Vec::with_capacity(n);
    let mut p = DyC { re: Dy::from_int(1), im: Dy::zero() };
    for _ in 0..n {
        re.push(p.re.clone());
        im.push(p.im.neg());
        p = p.mul(z, prec);
    }
    (re, im)
}

fn vandermonde_real(x: &Dy, n: usize, prec: u32) -> Vec<Dy> {
    let mut col = Vec::with_capacity(n);
    let mut p = Dy::from_int(1);
    for _ in 0..n {
        col.push(p.clone());
        p = p.mul(x, prec);
    }
    col
}

fn gram_schmidt(cols: &mut [Vec<Dy>], prec: u32) {
    for i in 0..cols.len() {
        for j in 0..i {
            let mut dot = Dy::zero();
            for (a, b) in cols[i].iter().zip(&cols[j]) {
                dot = dot.add(&a.mul(b, prec), prec);
            }
            let coeffs: Vec<Dy> = cols[j].iter().map(|b| dot.mul(b, prec)).collect();
            for (a, d) in cols[i].iter_mut().zip(coeffs) {
                *a = a.sub(&d, prec);
            }
        }
        let mut norm = Dy::zero();
        for a in &cols[i] {
            norm = norm.add(&a.mul(a, prec), prec);
        }
        let norm = norm.sqrt(prec);
        for a in cols[i].iter_mut() {
            *a = a.div(&norm, prec);
        }
    }
}

impl CentralFrame {
    /// Max-of-moduli norm on W⁽⁰⁾ coordinates.
    pub fn central_norm(&self, w: &[Complex]) -> Result<f64> {
        if w.len() != self.s {
            return Err(Error::DimensionMismatch { expected: self.s, got: w.len() });
        }
        Ok(w.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    /// ξ^m: the s complex multipliers (e^{imφ_v}).
    pub fn central_rotation(&self, m: i64) -> Vec<Complex> {
        self.angles.iter().map(|&phi| Complex::cis(phi * m as f64)).collect()
    }

    /// Lifts W⁽⁰⁾ coordinates to ℝⁿ through the basis (no reduction mod 1).
    pub fn lift(&self, w: &[Complex]) -> Result<Vec<f64>> {
        if w.len() != self.s {
            return Err(Error::DimensionMismatch { expected: self.s, got: w.len() });
        }
        let mut v = vec![0.0; self.dim];
        for (k, z) in w.iter().enumerate() {
            for i in 0..self.dim {
                v[i] += z.re * self.basis_w0[2 * k][i] + z.im * self.basis_w0[2 * k + 1][i];
            }
        }
        Ok(v)
    }

    /// Reads W⁽⁰⁾ coordinates off an ℝⁿ vector.
    pub fn leaf_coords(&self, v: &[f64]) -> Result<Vec<Complex>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok((0..self.s)
            .map(|k| {
                let re = dot(&self.coords_w0[2 * k], v);
                let im = dot(&self.coords_w0[2 * k + 1], v);
                Complex::new(re, im)
            })
            .collect())
    }

    /// Coordinates along the invariant complement.
    pub fn complement_coords(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(self.coords_complement.iter().map(|row| dot(row, v)).collect())
    }

    /// The character a∘lift as place coefficients: a·lift(w) = Σ_v Re(c_v·w_v).
    pub fn character_coeffs(&self, a: &[i64]) -> Result<Vec<Complex>> {
        if a.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: a.len() });
        }
        Ok((0..self.s)
            .map(|k| {
                let re: f64 = a
                    .iter()
                    .zip(&self.basis_w0[2 * k])
                    .map(|(&ai, bi)| ai as f64 * bi)
                    .sum();
                let im: f64 = a
                    .iter()
                    .zip(&self.basis_w0[2 * k + 1])
                    .map(|(&ai, bi)| ai as f64 * bi)
                    .sum();
                Complex::new(re, -im)
            })
            .collect())
    }

    pub fn companion_f64(&self) -> &[Vec<f64>] {
        &self.companion_f64
    }

    pub fn companion_inv_f64(&self) -> &[Vec<f64>] {
        &self.companion_inv_f64
    }

    /// f64 round-trip error of lift → apply A → read coordinates vs ξ·w.
    pub fn round_trip_error(&self, w: &[Complex]) -> Result<f64> {
        let lifted = self.lift(w)?;
        let mapped: Vec<f64> = self
            .companion_f64
            .iter()
            .map(|row| dot(row, &lifted))
            .collect();
        let back = self.leaf_coords(&mapped)?;
        let xi = self.central_rotation(1);
        let mut err = 0.0f64;
        for ((b, w0), m) in back.iter().zip(w).zip(&xi) {
            let expect = *m * *w0;
            err = err.max((*b - expect).norm());
        }
        Ok(err)
    }

    /// Verifies the frame invariants in dyadic arithmetic; residual bound is
    /// 2^{−precision_bits/2}.
    fn verify(&self, proj_hp: &[Vec<Dy>]) -> Result<FrameCertificate> {
        let n = self.dim;
        let work = self.precision_bits + 32;
        let limit = -i64::from(self.precision_bits) / 2;
        let a_rows = self.companion.rows();

        // A·[b_re | b_im] = [b_re | b_im]·(rotation by +φ_v) per place:
        // A·b_re = cos·b_re + sin·b_im, A·b_im = −sin·b_re + cos·b_im.
        let mut inv_mag = i64::MIN / 2;
        for (k, (cos, sin)) in self.hp_rot.iter().enumerate() {
            let b_re: Vec<Dy> = (0..n).map(|i| self.hp_basis[i][2 * k].clone()).collect();
            let b_im: Vec<Dy> = (0..n).map(|i| self.hp_basis[i][2 * k + 1].clone()).collect();
            let a_re = int_mat_vec(&a_rows, &b_re, work);
            let a_im = int_mat_vec(&a_rows, &b_im, work);
            for i in 0..n {
                let want_re = cos.mul(&b_re[i], work).add(&sin.mul(&b_im[i], work), work);
                let want_im = cos.mul(&b_im[i], work).sub(&sin.mul(&b_re[i], work), work);
                inv_mag = inv_mag.max(a_re[i].sub(&want_re, work).mag2());
                inv_mag = inv_mag.max(a_im[i].sub(&want_im, work).mag2());
            }
        }

        // proj² = proj.
        let mut proj_mag = i64::MIN / 2;
        for i in 0..n {
            for j in 0..n {
                let mut acc = Dy::zero();
                for k in 0..n {
                    acc = acc.add(&proj_hp[i][k].mul(&proj_hp[k][j], work), work);
                }
                proj_mag = proj_mag.max(acc.sub(&proj_hp[i][j], work).mag2());
            }
        }

        // Round trip in high precision on basis coordinate vectors.
        let mut rt_mag = i64::MIN / 2;
        for k in 0..self.s {
            let b_re: Vec<Dy> = (0..n).map(|i| self.hp_basis[i][2 * k].clone()).collect();
            let mapped = int_mat_vec(&a_rows, &b_re, work);
            // coordinates of mapped must be (cos, sin) in place k, 0 elsewhere
            for row in 0..2 * self.s {
                let mut acc = Dy::zero();
                for i in 0..n {
                    acc = acc.add(&self.hp_inv[row][i].mul(&mapped[i], work), work);
                }
                // A·b_re has coordinates (cos, +sin) in its own place block.
                let want = if row == 2 * k {
                    self.hp_rot[k].0.clone()
                } else if row == 2 * k + 1 {
                    self.hp_rot[k].1.clone()
                } else {
                    Dy::zero()
                };
                rt_mag = rt_mag.max(acc.sub(&want, work).mag2());
            }
        }

        if inv_mag > limit || proj_mag > limit || rt_mag > limit {
            return Err(Error::PrecisionInsufficient {
                needed_bits: self.precision_bits * 2,
            });
        }
        Ok(FrameCertificate {
            invariance_log2: inv_mag,
            projection_log2: proj_mag,
            round_trip_log2: rt_mag,
        })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn int_mat_vec(rows: &[Vec<BigInt>], x: &[Dy], prec: u32) -> Vec<Dy> {
    rows.iter()
        .map(|row| {
            let mut acc = Dy::zero();
            for (c, v) in row.iter().zip(x) {
                acc = acc.add(&v.mul_int(c), prec);
            }
            acc
        })
        .collect()
}
