//! Dynamics on X = 𝕋ⁿ: exact orbits, central-leaf translations, and
//! R-separated subsets of W⁽⁰⁾.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::embedding::CentralFrame;
use crate::error::{Error, Result};
use crate::math::{self, Complex};
use crate::rng::Rng;

/// Entry-size guard for exact matrix powers (bits).
pub const POWER_BIT_LIMIT: u64 = 4096;
/// Exponent guard for [`apply_alpha`].
pub const POWER_EXP_LIMIT: i64 = 1 << 20;

/// Point of 𝕋ⁿ with coordinates reduced to [0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    coords: Vec<f64>,
}

impl TorusPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        TorusPoint { coords: coords.into_iter().map(math::fract1).collect() }
    }

    pub fn zero(dim: usize) -> Self {
        TorusPoint { coords: vec![0.0; dim] }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Torus metric: max over coordinates of the circle distance.
    pub fn dist_sup(&self, other: &TorusPoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| math::torus_dist1(a, b))
            .fold(0.0, f64::max)
    }

    /// Euclidean torus metric (minimum over lifts).
    pub fn dist_euclid(&self, other: &TorusPoint) -> f64 {
        let s: f64 = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| {
                let d = math::torus_dist1(a, b);
                d * d
            })
            .sum();
        math::sqrt(s)
    }
}

/// Finite subset of W⁽⁰⁾ with certified pairwise separation.
#[derive(Debug, Clone)]
pub struct SeparatedSet {
    pub points: Vec<Vec<Complex>>,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparationStrategy {
    Grid,
    GreedyRandom,
}

/// α^m x: the exact integer matrix power applied to the dyadic lift of x,
/// reduced mod 1, then rounded back to f64.
pub fn apply_alpha(frame: &CentralFrame, x: &TorusPoint, m: i64) -> Result<TorusPoint> {
    if x.dim() != frame.dim {
        return Err(Error::DimensionMismatch { expected: frame.dim, got: x.dim() });
    }
    if m.abs() > POWER_EXP_LIMIT {
        return Err(Error::BudgetExceeded {
            budget: POWER_EXP_LIMIT as u64,
            requested: m.unsigned_abs(),
        });
    }
    let base = if m >= 0 { frame.companion.clone() } else { frame.companion.inverse_unimodular()? };
    let power = base.pow_guarded(m.unsigned_abs(), POWER_BIT_LIMIT)?;
    let lift: Vec<BigRational> = x
        .coords
        .iter()
        .map(|&c| BigRational::from_float(c).expect("coordinates are finite"))
        .collect();
    let rows = power.rows();
    let coords = rows
        .iter()
        .map(|row| {
            let mut acc = BigRational::zero();
            for (a, v) in row.iter().zip(&lift) {
                acc += BigRational::from_integer(a.clone()) * v;
            }
            let fl = acc.floor();
            let frac = acc - fl;
            frac.to_f64().expect("fraction in [0,1)")
        })
        .collect();
    Ok(TorusPoint { coords })
}

/// Exact orbit step for rational points: coordinates as numerators over a
/// common denominator q, reduced mod q.
pub fn apply_alpha_rational(
    frame: &CentralFrame,
    numerators: &[BigInt],
    denominator: &BigInt,
    m: i64,
) -> Result<Vec<BigInt>> {
    if numerators.len() != frame.dim {
        return Err(Error::DimensionMismatch { expected: frame.dim, got: numerators.len() });
    }
    let base = if m >= 0 { frame.companion.clone() } else { frame.companion.inverse_unimodular()? };
    let power = base.pow_guarded(m.unsigned_abs(), POWER_BIT_LIMIT)?;
    Ok(power
        .mul_vec(numerators)
        .into_iter()
        .map(|v| v.mod_floor(denominator))
        .collect())
}

use num_integer::Integer as _;

/// x + π(w): lift w through the frame basis and translate along the leaf.
pub fn leaf_point(frame: &CentralFrame, x: &TorusPoint, w: &[Complex]) -> Result<TorusPoint> {
    if x.dim() != frame.dim {
        return Err(Error::DimensionMismatch { expected: frame.dim, got: x.dim() });
    }
    let lifted = frame.lift(w)?;
    Ok(TorusPoint::new(
        x.coords.iter().zip(&lifted).map(|(&a, &b)| a + b).collect(),
    ))
}

/// Builds a K-point R-separated subset of W⁽⁰⁾.
pub fn make_separated(
    frame: &CentralFrame,
    r: f64,
    k: usize,
    strategy: SeparationStrategy,
    seed: u64,
) -> Result<SeparatedSet> {
    if !(r > 0.0) || k == 0 {
        return Err(Error::StrategyFailed {
            message: alloc::string::String::from("need R > 0 and K ≥ 1"),
        });
    }
    let s = frame.s;
    let points = match strategy {
        SeparationStrategy::Grid => {
            // Scaled integer lattice in the 2s real coordinates; spacing R in
            // every coordinate keeps every place-difference at least R.
            let dims = 2 * s;
            let side = int_root_ceil(k, dims);
            let mut pts = Vec::with_capacity(k);
            let mut idx = vec![0usize; dims];
            'fill: loop {
                let mut w = Vec::with_capacity(s);
                for place in 0..s {
                    w.push(Complex::new(
                        idx[2 * place] as f64 * r,
                        idx[2 * place + 1] as f64 * r,
                    ));
                }
                pts.push(w);
                if pts.len() == k {
                    break 'fill;
                }
                // odometer with the first coordinate fastest
                let mut pos = 0;
                loop {
                    idx[pos] += 1;
                    if idx[pos] < side {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                    if pos == dims {
                        break 'fill;
                    }
                }
            }
            pts
        }
        SeparationStrategy::GreedyRandom => {
            let mut rng = Rng::stream(seed, "torus/make_separated");
            let side = (int_root_ceil(k, 2 * s) as f64 + 1.0) * r * 1.6;
            let mut pts: Vec<Vec<Complex>> = Vec::with_capacity(k);
            let budget = 400 * k as u64 + 4000;
            let mut attempts = 0u64;
            while pts.len() < k {
                attempts += 1;
                if attempts > budget {
                    return Err(Error::StrategyFailed {
                        message: alloc::format!(
                            "greedy-random placed {} of {k} points in {budget} attempts",
                            pts.len()
                        ),
                    });
                }
                let cand: Vec<Complex> = (0..s)
                    .map(|_| Complex::new(rng.uniform(0.0, side), rng.uniform(0.0, side)))
                    .collect();
                let ok = pts.iter().all(|p| place_dist(p, &cand) >= r);
                if ok {
                    pts.push(cand);
                }
            }
            pts
        }
    };
    let set = SeparatedSet { points, r };
    verify_separated(&set)?;
    Ok(set)
}

fn int_root_ceil(k: usize, dims: usize) -> usize {
    let mut side = 1usize;
    while side.pow(dims as u32) < k {
        side += 1;
    }
    side
}

fn place_dist(a: &[Complex], b: &[Complex]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (*x - *y).norm())
        .fold(0.0, f64::max)
}

/// Exhaustive O(K²) pairwise check of the separation invariant.
pub fn verify_separated(set: &SeparatedSet) -> Result<()> {
    for i in 0..set.points.len() {
        for j in 0..i {
            let d = place_dist(&set.points[i], &set.points[j]);
            if d < set.r * (1.0 - 1e-12) {
                return Err(Error::Internal {
                    message: alloc::format!("separation violated: pair ({j},{i}) at distance {d}"),
                });
            }
        }
    }
    Ok(())
}

/// {α^{−n}(π(a) + x0) : a ∈ A, 1 ≤ n ≤ N}, iterated with the exact integer
/// inverse matrix in f64 coordinates.
pub fn inverse_orbit_union(
    frame: &CentralFrame,
    set: &SeparatedSet,
    x0: &TorusPoint,
    n: usize,
    budget: u64,
) -> Result<Vec<TorusPoint>> {
    let total = set.points.len() as u64 * n as u64;
    if total > budget {
        return Err(Error::BudgetExceeded { budget, requested: total });
    }
    let ainv = frame.companion_inv_f64();
    let mut out = Vec::with_capacity(total as usize);
    for a in &set.points {
        let mut x = leaf_point(frame, x0, a)?;
        for _ in 0..n {
            x = step_f64(ainv, &x);
            out.push(x.clone());
        }
    }
    Ok(out)
}

/// One application of an integer matrix (as f64 rows) mod 1.
pub(crate) fn step_f64(rows: &[Vec<f64>], x: &TorusPoint) -> TorusPoint {
    let coords = rows
        .iter()
        .map(|row| {
            let mut acc = 0.0;
            for (a, v) in row.iter().zip(&x.coords) {
                acc += a * v;
            }
            math::fract1(acc)
        })
        .collect();
    TorusPoint { coords }
}
