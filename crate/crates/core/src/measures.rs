//! Weighted point measures, empirical leaf-mass profiles, the finiteness
//! diagnostic, the center-of-mass map and the τ map.
//!
//! The conditional leaf measure has no finite exact representation; its
//! desk-scale surrogate counts sample mass in tubes around the central leaf
//! (complement-coordinate tolerance `tube_eps`) normalized so the mass of the
//! r₀-ball is 1. The center of mass uses the measure-relative threshold
//! ε = M/2 (M the maximal ball mass), which is exactly isometry- and
//! scale-equivariant on finitely supported measures.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::embedding::CentralFrame;
use crate::error::{Error, Result};
use crate::math::{self, Complex};
use crate::rng::Rng;
use crate::torus::TorusPoint;

pub const MERGE_TOLERANCE: f64 = 1e-12;

/// Finitely supported measure with strictly positive weights; support points
/// within 1e−12 (sup metric) are merged at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPointMeasure {
    support: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl WeightedPointMeasure {
    pub fn new(support: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if support.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: support.len(),
                got: weights.len(),
            });
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::NonPositiveWeight);
        }
        let dim = support.first().map_or(0, Vec::len);
        if support.iter().any(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: 0 });
        }
        let mut out_pts: Vec<Vec<f64>> = Vec::with_capacity(support.len());
        let mut out_w: Vec<f64> = Vec::with_capacity(weights.len());
        'outer: for (p, w) in support.into_iter().zip(weights) {
            for (q, wq) in out_pts.iter().zip(out_w.iter_mut()) {
                let close = p
                    .iter()
                    .zip(q)
                    .all(|(a, b)| math::abs(a - b) <= MERGE_TOLERANCE);
                if close {
                    *wq += w;
                    continue 'outer;
                }
            }
            out_pts.push(p);
            out_w.push(w);
        }
        Ok(WeightedPointMeasure { support: out_pts, weights: out_w })
    }

    /// Point mass, skipping the merge scan.
    pub fn dirac(point: Vec<f64>) -> Self {
        WeightedPointMeasure { support: vec![point], weights: vec![1.0] }
    }

    pub fn uniform(points: Vec<Vec<f64>>) -> Result<Self> {
        let k = points.len();
        Self::new(points, vec![1.0 / k as f64; k])
    }

    /// Trusted constructor for bulk samples known to be distinct; skips the
    /// O(k²) merge scan.
    pub(crate) fn raw(support: Vec<Vec<f64>>, weights: Vec<f64>) -> Self {
        WeightedPointMeasure { support, weights }
    }

    pub fn support(&self) -> &[Vec<f64>] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.support.first().map_or(0, Vec::len)
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn is_probability(&self, tol: f64) -> bool {
        math::abs(self.total() - 1.0) <= tol
    }

    /// Rescales weights to total 1.
    pub fn normalized(&self) -> Self {
        let t = self.total();
        WeightedPointMeasure {
            support: self.support.clone(),
            weights: self.weights.iter().map(|w| w / t).collect(),
        }
    }

    /// New measure with transformed support points (weights unchanged).
    pub fn map_points<F: Fn(&[f64]) -> Vec<f64>>(&self, f: F) -> Self {
        WeightedPointMeasure {
            support: self.support.iter().map(|p| f(p)).collect(),
            weights: self.weights.clone(),
        }
    }

    /// Weights scaled by t > 0 (scalar multiplication of the measure).
    pub fn scaled(&self, t: f64) -> Self {
        WeightedPointMeasure {
            support: self.support.clone(),
            weights: self.weights.iter().map(|w| w * t).collect(),
        }
    }
}

/// Families of α-invariant sample measures.
#[derive(Debug, Clone)]
pub enum InvariantKind {
    /// Uniform (Haar) samples on 𝕋ⁿ.
    Haar,
    /// Orbit {α^m(π(w0))} of a central point: stays in the compact rotation
    /// orbit closure, evaluated stably through the central rotation.
    CentralOrbitClosure { w0: Vec<Complex> },
    /// Exact rational periodic orbit of numerators/denominator mod 1.
    PeriodicOrbit { numerators: Vec<i64>, denominator: u64 },
}

/// Draws `count` sample points of the requested invariant family.
pub fn sample_invariant(
    frame: &CentralFrame,
    kind: &InvariantKind,
    count: usize,
    seed: u64,
) -> Result<WeightedPointMeasure> {
    let n = frame.dim;
    match kind {
        InvariantKind::Haar => {
            let mut rng = Rng::stream(seed, "measures/sample_invariant");
            let pts: Vec<Vec<f64>> =
                (0..count).map(|_| (0..n).map(|_| rng.next_f64()).collect()).collect();
            Ok(WeightedPointMeasure::raw(pts, vec![1.0 / count as f64; count]))
        }
        InvariantKind::CentralOrbitClosure { w0 } => {
            if w0.len() != frame.s {
                return Err(Error::DimensionMismatch { expected: frame.s, got: w0.len() });
            }
            let mut pts = Vec::with_capacity(count);
            for m in 0..count {
                let xi = frame.central_rotation(m as i64);
                let rotated: Vec<Complex> = w0.iter().zip(&xi).map(|(z, g)| *z * *g).collect();
                let lifted = frame.lift(&rotated)?;
                pts.push(lifted.into_iter().map(math::fract1).collect());
            }
            Ok(WeightedPointMeasure::raw(pts, vec![1.0 / count as f64; count]))
        }
        InvariantKind::PeriodicOrbit { numerators, denominator } => {
            if numerators.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: numerators.len() });
            }
            let q = BigInt::from(*denominator);
            let start: Vec<BigInt> = numerators
                .iter()
                .map(|&v| BigInt::from(v).mod_floor(&q))
                .collect();
            let rows = frame.companion.rows();
            let mut orbit = vec![start.clone()];
            let budget = count.max(1) as u64;
            loop {
                let last = orbit.last().unwrap();
                let next: Vec<BigInt> = rows
                    .iter()
                    .map(|row| {
                        let s: BigInt = row.iter().zip(last).map(|(a, v)| a * v).sum();
                        s.mod_floor(&q)
                    })
                    .collect();
                if next == start {
                    break;
                }
                if orbit.len() as u64 >= budget {
                    return Err(Error::PeriodicOrbitNotFound { budget });
                }
                orbit.push(next);
            }
            let qf = *denominator as f64;
            let w = 1.0 / orbit.len() as f64;
            let pts: Vec<Vec<f64>> = orbit
                .iter()
                .map(|v| v.iter().map(|x| x.to_f64().unwrap() / qf).collect())
                .collect();
            let k = pts.len();
            Ok(WeightedPointMeasure::raw(pts, vec![w; k]))
        }
    }
}

/// Estimated mass of central balls B(0, r) for the empirical leaf measure
/// through a base point; normalized so the mass at r₀ = radii[0] is 1.
#[derive(Debug, Clone)]
pub struct LeafMassProfile {
    pub radii: Vec<f64>,
    pub masses: Vec<f64>,
    pub sample_size: usize,
    pub r0: f64,
}

/// Counts sample mass in leaf tubes around x: a sample point charges radius
/// ‖w‖ when its symmetric lift relative to x has complement coordinates
/// within `tube_eps` (sup norm) and leaf coordinates w.
pub fn estimate_leaf_profile(
    frame: &CentralFrame,
    sample: &WeightedPointMeasure,
    x: &TorusPoint,
    radii: &[f64],
    tube_eps: f64,
) -> Result<LeafMassProfile> {
    if radii.is_empty() || radii.windows(2).any(|w| w[1] <= w[0]) || !(radii[0] > 0.0) {
        return Err(Error::ProfileUnusable {
            message: String::from("radii must be strictly increasing and positive"),
        });
    }
    if !(tube_eps > 0.0) {
        return Err(Error::ProfileUnusable {
            message: String::from("tube_eps must be positive"),
        });
    }
    if sample.dim() != frame.dim || x.dim() != frame.dim {
        return Err(Error::DimensionMismatch { expected: frame.dim, got: sample.dim() });
    }
    let mut masses = vec![0.0f64; radii.len()];
    for (p, &w) in sample.support().iter().zip(sample.weights()) {
        // Symmetric lift of p − x into [−1/2, 1/2)ⁿ.
        let v: Vec<f64> = p
            .iter()
            .zip(x.coords())
            .map(|(&a, &b)| {
                let d = math::fract1(a - b);
                if d >= 0.5 {
                    d - 1.0
                } else {
                    d
                }
            })
            .collect();
        let comp = frame.complement_coords(&v)?;
        if comp.iter().any(|&c| math::abs(c) >= tube_eps) {
            continue;
        }
        let leaf = frame.leaf_coords(&v)?;
        let norm = frame.central_norm(&leaf)?;
        let idx = radii.partition_point(|&r| r < norm);
        for m in masses.iter_mut().skip(idx) {
            *m += w;
        }
    }
    let r0 = radii[0];
    if masses[0] <= 0.0 {
        return Err(Error::EmptyTube { radius: r0 });
    }
    let norm0 = masses[0];
    for m in masses.iter_mut() {
        *m /= norm0;
    }
    debug_assert!(masses.windows(2).all(|w| w[1] >= w[0]));
    Ok(LeafMassProfile { radii: radii.to_vec(), masses, sample_size: sample.len(), r0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinitenessVerdict {
    Finite,
    InfiniteGrowth,
    Inconclusive,
}

#[derive(Debug, Clone, Copy)]
pub struct FinitenessDiagnostic {
    pub verdict: FinitenessVerdict,
    /// Log-log growth exponent of mass against radius.
    pub exponent: f64,
    /// RMS residual of the log-log fit.
    pub fit_residual: f64,
}

/// Fits log mass against log r: a plateau (last two masses within 5%) reads
/// as a finite total; exponent > 0.5 with a good fit as infinite growth.
pub fn finiteness_diagnostic(profile: &LeafMassProfile) -> Result<FinitenessDiagnostic> {
    let k = profile.radii.len();
    if k < 5 {
        return Err(Error::ProfileUnusable { message: String::from("need at least 5 radii") });
    }
    if profile.radii[k - 1] < 10.0 * profile.radii[0] {
        return Err(Error::ProfileUnusable {
            message: String::from("radii must span a factor of at least 10"),
        });
    }
    let xs: Vec<f64> = profile.radii.iter().map(|&r| math::ln(r)).collect();
    let ys: Vec<f64> = profile.masses.iter().map(|&m| math::ln(m.max(1e-300))).collect();
    let (exponent, fit_residual) = math::ls_fit(&xs, &ys);
    let plateau = profile.masses[k - 1] <= 1.05 * profile.masses[k - 2];
    let verdict = if plateau {
        FinitenessVerdict::Finite
    } else if exponent > 0.5 && fit_residual <= 0.2 {
        FinitenessVerdict::InfiniteGrowth
    } else {
        FinitenessVerdict::Inconclusive
    };
    Ok(FinitenessDiagnostic { verdict, exponent, fit_residual })
}

/// Center of mass of a finite measure on ℝᵈ.
///
/// M = max over support atoms of the mass of the r-ball around the atom;
/// atoms whose ball mass reaches ε = M/2 are selected and averaged with
/// their own weights.
pub fn center_of_mass(rho: &WeightedPointMeasure, r: f64) -> Result<Vec<f64>> {
    if rho.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    if !(r > 0.0) {
        return Err(Error::ProfileUnusable {
            message: String::from("radius must be positive"),
        });
    }
    let pts = rho.support();
    let w = rho.weights();
    let k = pts.len();
    let mut ball = vec![0.0f64; k];
    for i in 0..k {
        for j in 0..k {
            if euclid(&pts[i], &pts[j]) <= r {
                ball[i] += w[j];
            }
        }
    }
    let m = ball.iter().fold(0.0f64, |a, &b| a.max(b));
    let eps = m / 2.0;
    let dim = rho.dim();
    let mut acc = vec![0.0f64; dim];
    let mut mass = 0.0f64;
    for i in 0..k {
        if ball[i] >= eps {
            for (a, &c) in acc.iter_mut().zip(&pts[i]) {
                *a += c * w[i];
            }
            mass += w[i];
        }
    }
    Ok(acc.into_iter().map(|a| a / mass).collect())
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    math::sqrt(s)
}

/// Assignment of empirical leaf measures (in W⁽⁰⁾ coordinates: 2s reals per
/// support point) to base points of the torus.
#[derive(Debug, Clone, Default)]
pub struct LeafMeasureMap {
    entries: Vec<(TorusPoint, WeightedPointMeasure)>,
}

impl LeafMeasureMap {
    pub fn new() -> Self {
        LeafMeasureMap { entries: Vec::new() }
    }

    pub fn insert(&mut self, x: TorusPoint, rho: WeightedPointMeasure) {
        self.entries.push((x, rho));
    }

    pub fn get(&self, x: &TorusPoint) -> Option<&WeightedPointMeasure> {
        self.entries
            .iter()
            .find(|(p, _)| p.dist_sup(x) <= 1e-9)
            .map(|(_, m)| m)
    }
}

/// τ(x) = x + π(c_m(ρ_x)): translates x by the lifted center of mass of its
/// leaf measure.
pub fn tau_map(
    frame: &CentralFrame,
    measures: &LeafMeasureMap,
    x: &TorusPoint,
    r: f64,
) -> Result<TorusPoint> {
    let rho = measures.get(x).ok_or(Error::MissingLeafMeasure)?;
    tau_point(frame, rho, x, r)
}

/// τ for an explicitly supplied leaf measure.
pub fn tau_point(
    frame: &CentralFrame,
    rho: &WeightedPointMeasure,
    x: &TorusPoint,
    r: f64,
) -> Result<TorusPoint> {
    if rho.dim() != 2 * frame.s {
        return Err(Error::DimensionMismatch { expected: 2 * frame.s, got: rho.dim() });
    }
    let c = center_of_mass(rho, r)?;
    let w: Vec<Complex> = (0..frame.s)
        .map(|k| Complex::new(c[2 * k], c[2 * k + 1]))
        .collect();
    crate::torus::leaf_point(frame, x, &w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::build_frame;
    use crate::poly::poly_parse;

    fn frame_a() -> CentralFrame {
        build_frame(&poly_parse("u^4 - u^3 - u^2 - u + 1").unwrap(), 128).unwrap()
    }

    #[test]
    fn measure_construction_merges_and_validates() {
        let m = WeightedPointMeasure::new(
            vec![vec![0.0, 0.0], vec![0.0, 5e-13], vec![1.0, 0.0]],
            vec![0.25, 0.25, 0.5],
        )
        .unwrap();
        assert_eq!(m.len(), 2);
        assert!(math::abs(m.weights()[0] - 0.5) < 1e-15);
        assert!(m.is_probability(1e-12));
        assert!(WeightedPointMeasure::new(vec![vec![0.0]], vec![0.0]).is_err());
        assert!(WeightedPointMeasure::new(vec![vec![0.0]], vec![-1.0]).is_err());
    }

    #[test]
    fn haar_sample_is_uniformish() {
        let fr = frame_a();
        let m = sample_invariant(&fr, &InvariantKind::Haar, 100_000, 3).unwrap();
        assert!(m.is_probability(1e-9));
        for coord in 0..4 {
            let mean: f64 = m
                .support()
                .iter()
                .zip(m.weights())
                .map(|(p, w)| p[coord] * w)
                .sum();
            assert!(math::abs(mean - 0.5) < 0.01, "coordinate {coord} mean {mean}");
        }
    }

    #[test]
    fn orbit_closure_stays_on_compact_leaf_set() {
        let fr = frame_a();
        let w0 = vec![Complex::new(0.12, 0.09)];
        let norm0 = fr.central_norm(&w0).unwrap();
        let m = sample_invariant(
            &fr,
            &InvariantKind::CentralOrbitClosure { w0: w0.clone() },
            500,
            0,
        )
        .unwrap();
        // Every point is π(w) with ‖w‖ = ‖w0‖: zero complement coordinates
        // and leaf norm ‖w0‖ after the symmetric lift.
        for p in m.support() {
            let v: Vec<f64> = p
                .iter()
                .map(|&a| if a >= 0.5 { a - 1.0 } else { a })
                .collect();
            let comp = fr.complement_coords(&v).unwrap();
            for c in comp {
                assert!(math::abs(c) < 1e-9);
            }
            let leaf = fr.leaf_coords(&v).unwrap();
            let n = fr.central_norm(&leaf).unwrap();
            assert!(math::abs(n - norm0) < 1e-9);
        }
    }

    #[test]
    fn periodic_orbit_is_exact_and_invariant() {
        let fr = frame_a();
        let m = sample_invariant(
            &fr,
            &InvariantKind::PeriodicOrbit { numerators: vec![1, 0, 0, 0], denominator: 5 },
            10_000,
            0,
        )
        .unwrap();
        let pts: Vec<TorusPoint> =
            m.support().iter().map(|p| TorusPoint::new(p.clone())).collect();
        for p in &pts {
            let image = crate::torus::apply_alpha(&fr, p, 1).unwrap();
            assert!(pts.iter().any(|q| q.dist_sup(&image) < 1e-12), "orbit not invariant");
        }
        assert!(m.len() > 1);
    }

    #[test]
    fn dirac_profile_is_flat() {
        let fr = frame_a();
        let x = TorusPoint::new(vec![0.3, 0.4, 0.5, 0.6]);
        let sample = WeightedPointMeasure::dirac(x.coords().to_vec());
        let radii: Vec<f64> = (1..=12).map(|i| 0.05 * i as f64).collect();
        let prof = estimate_leaf_profile(&fr, &sample, &x, &radii, 0.02).unwrap();
        for m in &prof.masses {
            assert_eq!(*m, 1.0);
        }
        let d = finiteness_diagnostic(&prof).unwrap();
        assert_eq!(d.verdict, FinitenessVerdict::Finite);
    }

    #[test]
    fn empty_tube_is_detected() {
        let fr = frame_a();
        let x = TorusPoint::zero(4);
        let far = WeightedPointMeasure::dirac(vec![0.5, 0.5, 0.5, 0.5]);
        let radii = [0.01, 0.02, 0.04, 0.08, 0.16];
        assert!(matches!(
            estimate_leaf_profile(&fr, &far, &x, &radii, 0.001),
            Err(Error::EmptyTube { .. })
        ));
    }

    #[test]
    fn synthetic_growth_profiles() {
        // Exact r² profile → infinite growth with exponent ≈ 2.
        let radii: Vec<f64> = (0..11).map(|i| 0.1 * math::pow(1.3, i as f64)).collect();
        let masses: Vec<f64> = radii.iter().map(|r| (r / radii[0]) * (r / radii[0])).collect();
        let prof = LeafMassProfile { radii: radii.clone(), masses, sample_size: 1, r0: radii[0] };
        let d = finiteness_diagnostic(&prof).unwrap();
        assert_eq!(d.verdict, FinitenessVerdict::InfiniteGrowth);
        assert!(math::abs(d.exponent - 2.0) < 1e-9);

        // Constant profile → finite.
        let prof = LeafMassProfile {
            radii: radii.clone(),
            masses: vec![1.0; radii.len()],
            sample_size: 1,
            r0: radii[0],
        };
        assert_eq!(finiteness_diagnostic(&prof).unwrap().verdict, FinitenessVerdict::Finite);

        // Noisy mixed profile (growth with heavy oscillation, ending on an
        // upswing) → inconclusive.
        let masses: Vec<f64> = radii
            .iter()
            .enumerate()
            .map(|(i, &r)| r * r * if i % 2 == 0 { 1.8 } else { 0.2 })
            .collect();
        let prof = LeafMassProfile { radii, masses, sample_size: 1, r0: 0.1 };
        assert_eq!(
            finiteness_diagnostic(&prof).unwrap().verdict,
            FinitenessVerdict::Inconclusive
        );
    }

    #[test]
    fn profile_preconditions() {
        let prof = LeafMassProfile {
            radii: vec![1.0, 2.0, 3.0],
            masses: vec![1.0, 1.0, 1.0],
            sample_size: 1,
            r0: 1.0,
        };
        assert!(finiteness_diagnostic(&prof).is_err());
        let prof = LeafMassProfile {
            radii: vec![1.0, 2.0, 3.0, 4.0, 5.0],
            masses: vec![1.0; 5],
            sample_size: 1,
            r0: 1.0,
        };
        assert!(matches!(finiteness_diagnostic(&prof), Err(Error::ProfileUnusable { .. })));
    }

    #[test]
    fn center_of_mass_cases() {
        // δ_x → x.
        let d = WeightedPointMeasure::dirac(vec![1.5, -2.0]);
        assert_eq!(center_of_mass(&d, 1.0).unwrap(), vec![1.5, -2.0]);

        // Dominant atom: with weights 0.8/0.2 only the heavy atom reaches
        // ε = M/2 = 0.4.
        let m = WeightedPointMeasure::new(
            vec![vec![0.0, 0.0], vec![10.0, 0.0]],
            vec![0.8, 0.2],
        )
        .unwrap();
        let c = center_of_mass(&m, 1.0).unwrap();
        assert_eq!(c, vec![0.0, 0.0]);

        // Symmetric pair → midpoint.
        let m = WeightedPointMeasure::new(
            vec![vec![-1.0, 0.0], vec![1.0, 0.0]],
            vec![0.5, 0.5],
        )
        .unwrap();
        let c = center_of_mass(&m, 0.5).unwrap();
        assert!(math::abs(c[0]) < 1e-15 && math::abs(c[1]) < 1e-15);

        // With masses 0.6/0.4 both atoms clear ε = 0.3, so the rule gives
        // the weighted mean.
        let m = WeightedPointMeasure::new(vec![vec![0.0], vec![10.0]], vec![0.6, 0.4]).unwrap();
        let c = center_of_mass(&m, 1.0).unwrap();
        assert!(math::abs(c[0] - 4.0) < 1e-12);
    }

    #[test]
    fn center_of_mass_equivariance_sample() {
        let mut rng = Rng::stream(17, "measures/com-equivariance");
        for _ in 0..50 {
            let k = 2 + rng.below(6) as usize;
            let pts: Vec<Vec<f64>> = (0..k)
                .map(|_| vec![rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)])
                .collect();
            let ws: Vec<f64> = (0..k).map(|_| rng.uniform(0.1, 2.0)).collect();
            let m = WeightedPointMeasure::new(pts, ws).unwrap();
            let r = 1.0;
            let theta = rng.uniform(0.0, math::TAU);
            let (s, c) = math::sincos(theta);
            let shift = [rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)];
            let scale = rng.log_uniform(1e-3, 1e3);
            let moved = m
                .map_points(|p| {
                    vec![c * p[0] - s * p[1] + shift[0], s * p[0] + c * p[1] + shift[1]]
                })
                .scaled(scale);
            let c0 = center_of_mass(&m, r).unwrap();
            let c1 = center_of_mass(&moved, r).unwrap();
            let want = [c * c0[0] - s * c0[1] + shift[0], s * c0[0] + c * c0[1] + shift[1]];
            assert!(math::abs(c1[0] - want[0]) < 1e-9);
            assert!(math::abs(c1[1] - want[1]) < 1e-9);
        }
    }

    #[test]
    fn tau_of_dirac_at_origin_is_identity() {
        let fr = frame_a();
        let x = TorusPoint::new(vec![0.2, 0.4, 0.6, 0.8]);
        let rho = WeightedPointMeasure::dirac(vec![0.0, 0.0]);
        let t = tau_point(&fr, &rho, &x, 1.0).unwrap();
        assert!(t.dist_sup(&x) < 1e-12);
    }

    #[test]
    fn tau_translation_consistency() {
        // τ(x) = τ(x + π(w)) when ρ_{x+π(w)} = ρ_x shifted by −w.
        let fr = frame_a();
        let x = TorusPoint::new(vec![0.2, 0.4, 0.6, 0.8]);
        let rho = WeightedPointMeasure::new(
            vec![vec![0.05, 0.01], vec![0.11, -0.04], vec![-0.03, 0.08]],
            vec![0.5, 0.3, 0.2],
        )
        .unwrap();
        let w = Complex::new(0.07, -0.02);
        let y = crate::torus::leaf_point(&fr, &x, &[w]).unwrap();
        let rho_shifted = rho.map_points(|p| vec![p[0] - w.re, p[1] - w.im]);
        let tx = tau_point(&fr, &rho, &x, 1.0).unwrap();
        let ty = tau_point(&fr, &rho_shifted, &y, 1.0).unwrap();
        assert!(tx.dist_sup(&ty) < 1e-9);
    }

    #[test]
    fn tau_equivariance() {
        // τ(αx) = α(τ(x)) when ρ_{αx} = ρ_x∘β̄ (support rotated by ξ).
        let fr = frame_a();
        let x = TorusPoint::new(vec![0.125, 0.375, 0.625, 0.875]);
        let rho = WeightedPointMeasure::new(
            vec![vec![0.08, 0.02], vec![-0.02, 0.05]],
            vec![0.6, 0.4],
        )
        .unwrap();
        let xi = fr.central_rotation(1)[0];
        let rho_next = rho.map_points(|p| {
            let z = Complex::new(p[0], p[1]) * xi;
            vec![z.re, z.im]
        });
        let ax = crate::torus::apply_alpha(&fr, &x, 1).unwrap();
        let lhs = tau_point(&fr, &rho_next, &ax, 1.0).unwrap();
        let rhs =
            crate::torus::apply_alpha(&fr, &tau_point(&fr, &rho, &x, 1.0).unwrap(), 1).unwrap();
        assert!(lhs.dist_sup(&rhs) < 1e-9);
    }

    #[test]
    fn leaf_measure_map_lookup() {
        let fr = frame_a();
        let mut map = LeafMeasureMap::new();
        let x = TorusPoint::zero(4);
        map.insert(x.clone(), WeightedPointMeasure::dirac(vec![0.0, 0.0]));
        assert!(tau_map(&fr, &map, &x, 1.0).is_ok());
        let y = TorusPoint::new(vec![0.5, 0.0, 0.0, 0.0]);
        assert!(matches!(tau_map(&fr, &map, &y, 1.0), Err(Error::MissingLeafMeasure)));
    }
}
