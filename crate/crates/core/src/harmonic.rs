//! Characters, oscillatory integrals, sublevel measures, energy integrals
//! and Cesàro character averages.
//!
//! The oscillatory kernel evaluates ∫₀¹ e^{ip(t)} dt for a trigonometric
//! polynomial p by the trapezoid rule (spectrally accurate for periodic
//! integrands). The integrand's essential bandwidth grows like Σ m_k|c_k|,
//! so node counts adapt to it and every result carries a doubling-based
//! error estimate; results whose doubling delta exceeds the tolerance are
//! refused rather than returned.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::embedding::CentralFrame;
use crate::error::{Error, Result};
use crate::math::{self, Complex};
use crate::measures::WeightedPointMeasure;
use crate::rng::Rng;
use crate::torus::TorusPoint;

/// Default relative tolerance for doubling-based quadrature refusal.
pub const QUAD_REL_TOL: f64 = 1e-6;
/// Cap on N·|support| for Cesàro averaging.
pub const CESARO_BUDGET: u64 = 2_000_000_000;
/// Node cap for adaptive doubling.
pub const QUAD_NODE_CAP: usize = 1 << 28;

/// One term a·cos(2πmt) + b·sin(2πmt).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigTerm {
    pub freq: u32,
    pub a: f64,
    pub b: f64,
}

/// Trigonometric polynomial with distinct positive integer frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    terms: Vec<TrigTerm>,
}

impl TrigPolynomial {
    pub fn new(mut terms: Vec<TrigTerm>) -> Result<Self> {
        terms.sort_by_key(|t| t.freq);
        if terms.iter().any(|t| t.freq == 0) {
            return Err(Error::StrategyFailed {
                message: String::from("frequencies must be positive"),
            });
        }
        if terms.windows(2).any(|w| w[0].freq == w[1].freq) {
            return Err(Error::StrategyFailed {
                message: String::from("frequencies must be distinct"),
            });
        }
        Ok(TrigPolynomial { terms })
    }

    pub fn empty() -> Self {
        TrigPolynomial { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// ‖p‖ = max |a_k + i b_k|.
    pub fn norm(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| math::hypot(t.a, t.b))
            .fold(0.0, f64::max)
    }

    /// M = max frequency (0 for the empty polynomial).
    pub fn max_freq(&self) -> u32 {
        self.terms.last().map_or(0, |t| t.freq)
    }

    /// Essential bandwidth of e^{ip}: the instantaneous frequency
    /// |p′(t)|/2π peaks at Σ m_k·|c_k|, plus the carrier itself.
    pub fn bandwidth(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.freq as f64 * math::hypot(t.a, t.b))
            .sum::<f64>()
            + self.max_freq() as f64
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| {
                let (s, c) = math::sincos(math::TAU * term.freq as f64 * t);
                term.a * c + term.b * s
            })
            .sum()
    }

    pub fn eval_derivative(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| {
                let w = math::TAU * term.freq as f64;
                let (s, c) = math::sincos(w * t);
                w * (term.b * c - term.a * s)
            })
            .sum()
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        TrigPolynomial {
            terms: self
                .terms
                .iter()
                .map(|t| TrigTerm { freq: t.freq, a: t.a * lambda, b: t.b * lambda })
                .collect(),
        }
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }
}

/// Character of 𝕋ⁿ: x ↦ e^{2πi a·x}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub exponents: Vec<i64>,
}

impl Character {
    pub fn new(exponents: Vec<i64>) -> Self {
        Character { exponents }
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn eval(&self, x: &TorusPoint) -> Result<Complex> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.dim() });
        }
        let phase: f64 = self
            .exponents
            .iter()
            .zip(x.coords())
            .map(|(&a, &c)| a as f64 * c)
            .sum();
        Ok(Complex::cis(math::TAU * phase))
    }
}

/// Quadrature value with its doubling error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: Complex,
    pub error: f64,
    pub nodes: usize,
}

/// Trapezoid sums of e^{ip} at n nodes and at the nested n/2 subset.
///
/// Carrier waves advance by incremental complex rotation, refreshed from
/// libm every 256 steps to stop error accumulation at large amplitudes.
fn trig_exp_sums(p: &TrigPolynomial, n: usize) -> (Complex, Complex) {
    debug_assert!(n % 2 == 0 && n >= 2);
    let k = p.term_count();
    let mut rot = Vec::with_capacity(k);
    let mut cur = Vec::with_capacity(k);
    for term in p.terms() {
        let step = math::TAU * term.freq as f64 / n as f64;
        rot.push(Complex::cis(step));
        cur.push(Complex::ONE);
    }
    let mut full = Complex::ZERO;
    let mut half = Complex::ZERO;
    for j in 0..n {
        if j % 256 == 0 && j > 0 {
            for (i, term) in p.terms().iter().enumerate() {
                cur[i] = Complex::cis(math::TAU * term.freq as f64 * j as f64 / n as f64);
            }
        }
        let mut phase = 0.0;
        for (i, term) in p.terms().iter().enumerate() {
            phase += term.a * cur[i].re + term.b * cur[i].im;
        }
        let e = Complex::cis(phase);
        full += e;
        if j % 2 == 0 {
            half += e;
        }
        for (c, r) in cur.iter_mut().zip(&rot) {
            *c = *c * *r;
        }
    }
    (full.scale(1.0 / n as f64), half.scale(2.0 / n as f64))
}

/// ∫₀¹ e^{ip(t)} dt by the trapezoid rule at the given node count, with the
/// nested half-grid difference as the error estimate.
pub fn oscillatory_integral(p: &TrigPolynomial, quadrature_points: usize) -> Result<Quadrature> {
    let needed = 64 * p.max_freq() as usize;
    if quadrature_points < needed.max(2) {
        return Err(Error::InsufficientQuadrature {
            given: quadrature_points,
            needed: needed.max(2),
        });
    }
    if p.terms.is_empty() {
        return Ok(Quadrature { value: Complex::ONE, error: 0.0, nodes: quadrature_points });
    }
    let n = quadrature_points.next_power_of_two();
    let (full, half) = trig_exp_sums(p, n);
    Ok(Quadrature { value: full, error: (full - half).norm(), nodes: n })
}

/// Doubles nodes until the nested error estimate is below
/// `tol·max(1, |I|)`; refuses past the node cap.
pub fn oscillatory_integral_auto(
    p: &TrigPolynomial,
    tol: f64,
    node_cap: usize,
) -> Result<Quadrature> {
    if p.terms.is_empty() {
        return Ok(Quadrature { value: Complex::ONE, error: 0.0, nodes: 0 });
    }
    let mut n = ((64 * p.max_freq() as usize).max(256))
        .max((4.0 * p.bandwidth()) as usize)
        .next_power_of_two();
    loop {
        let q = oscillatory_integral(p, n)?;
        if q.error <= tol * q.value.norm().max(1.0) {
            return Ok(q);
        }
        if n >= node_cap {
            return Err(Error::QuadratureNotConverged { delta: q.error, tolerance: tol });
        }
        n *= 2;
    }
}

/// A fitted empirical constant with the sweep behind it.
#[derive(Debug, Clone)]
pub struct FitReport {
    pub constant: f64,
    pub seed: u64,
    pub samples: usize,
    /// (‖p‖ or ‖w‖, measured value) per sample.
    pub sweep: Vec<(f64, f64)>,
}

/// Empirical lower bound for the oscillatory constant: max over random
/// trigonometric polynomials (one coefficient at the target norm, the rest
/// log-uniform below it, norms log-uniform in [1, 10⁶]) of
/// |∫e^{ip}|·‖p‖^{1/2s}.
pub fn fit_c2(s: usize, max_freq: u32, trials: usize, seed: u64) -> Result<FitReport> {
    if trials < 100 {
        return Err(Error::StrategyFailed {
            message: format!("need at least 100 trials, got {trials}"),
        });
    }
    if s == 0 || max_freq == 0 || (max_freq as usize) < s {
        return Err(Error::StrategyFailed {
            message: String::from("need 1 ≤ s ≤ max_freq"),
        });
    }
    let mut rng = Rng::stream(seed, "harmonic/fit_c2");
    let mut best = 0.0f64;
    let mut sweep = Vec::with_capacity(trials);
    for _ in 0..trials {
        let p = random_trig(&mut rng, s, max_freq, 1.0, 1e6);
        let norm = p.norm();
        let q = oscillatory_integral_auto(&p, QUAD_REL_TOL, QUAD_NODE_CAP)?;
        let value = q.value.norm() * math::pow(norm, 1.0 / (2.0 * s as f64));
        sweep.push((norm, q.value.norm()));
        best = best.max(value);
    }
    Ok(FitReport { constant: best, seed, samples: trials, sweep })
}

/// Random s-term polynomial with distinct frequencies in 1..=max_freq and
/// ‖p‖ log-uniform in [lo, hi].
pub fn random_trig(rng: &mut Rng, s: usize, max_freq: u32, lo: f64, hi: f64) -> TrigPolynomial {
    let mut freqs: Vec<u32> = Vec::with_capacity(s);
    while freqs.len() < s {
        let f = 1 + rng.below(max_freq as u64) as u32;
        if !freqs.contains(&f) {
            freqs.push(f);
        }
    }
    let target = rng.log_uniform(lo, hi);
    let lead = rng.below(s as u64) as usize;
    let terms = freqs
        .iter()
        .enumerate()
        .map(|(i, &freq)| {
            let mag = if i == lead { target } else { rng.log_uniform(lo.min(target), target) };
            let phase = rng.uniform(0.0, math::TAU);
            let (sn, cs) = math::sincos(phase);
            TrigTerm { freq, a: mag * cs, b: mag * sn }
        })
        .collect();
    TrigPolynomial::new(terms).expect("distinct frequencies by construction")
}

/// Grid estimate of λ({t ∈ [0,1] : |p′(t)| < A}).
pub fn sublevel_measure(p: &TrigPolynomial, a: f64, grid: usize) -> Result<f64> {
    if grid < 10_000 {
        return Err(Error::InsufficientQuadrature { given: grid, needed: 10_000 });
    }
    let mut count = 0usize;
    for j in 0..grid {
        let t = (j as f64 + 0.5) / grid as f64;
        if math::abs(p.eval_derivative(t)) < a {
            count += 1;
        }
    }
    Ok(count as f64 / grid as f64)
}

/// Upper bound for the polynomial-sublevel constant A_s: minimizes
/// sup_{t∈(−1,1)} |p(t)| over degree ≤ 2s−1 coefficient vectors with
/// max|a_l| = 1, by nested grid search plus coordinate descent.
pub fn estimate_a_s(s: usize, coeff_grid: usize) -> Result<f64> {
    if s == 0 || s > 3 {
        return Err(Error::DegreeOutOfRange { degree: s, max: 3 });
    }
    if coeff_grid < 2 {
        return Err(Error::InsufficientQuadrature { given: coeff_grid, needed: 2 });
    }
    let dims = 2 * s;
    let mut best = f64::INFINITY;
    let mut best_coeffs = alloc::vec![0.0f64; dims];
    // One coordinate pinned to ±1, the rest on the grid.
    let mut idx = alloc::vec![0usize; dims - 1];
    for pin in 0..dims {
        for pin_sign in [1.0f64, -1.0] {
            idx.iter_mut().for_each(|i| *i = 0);
            loop {
                let mut coeffs = alloc::vec![0.0f64; dims];
                coeffs[pin] = pin_sign;
                let mut k = 0;
                for (d, c) in coeffs.iter_mut().enumerate() {
                    if d != pin {
                        *c = -1.0 + 2.0 * idx[k] as f64 / coeff_grid as f64;
                        k += 1;
                    }
                }
                let v = sup_on_interval(&coeffs);
                if v < best {
                    best = v;
                    best_coeffs = coeffs;
                }
                // odometer
                let mut pos = 0;
                loop {
                    if pos == dims - 1 {
                        break;
                    }
                    idx[pos] += 1;
                    if idx[pos] <= coeff_grid {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == dims - 1 {
                    break;
                }
            }
        }
    }
    // Coordinate descent around the grid optimum, respecting max|a| = 1.
    let mut step = 2.0 / coeff_grid as f64;
    while step > 1e-5 {
        let mut improved = false;
        for d in 0..dims {
            for dir in [-1.0, 1.0] {
                let mut cand = best_coeffs.clone();
                cand[d] = (cand[d] + dir * step).clamp(-1.0, 1.0);
                if cand.iter().map(|c| math::abs(*c)).fold(0.0, f64::max) < 1.0 {
                    continue;
                }
                let v = sup_on_interval(&cand);
                if v < best {
                    best = v;
                    best_coeffs = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    Ok(best)
}

/// sup over [−1, 1] of |Σ a_l t^l| (equals the sup over the open interval by
/// continuity), by dense grid plus golden-section refinement.
fn sup_on_interval(coeffs: &[f64]) -> f64 {
    let eval = |t: f64| {
        let mut acc = 0.0;
        for c in coeffs.iter().rev() {
            acc = acc * t + c;
        }
        math::abs(acc)
    };
    let n = 256;
    let mut best = 0.0f64;
    let mut best_t = -1.0f64;
    for j in 0..=n {
        let t = -1.0 + 2.0 * j as f64 / n as f64;
        let v = eval(t);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    // Local refinement around the best grid point.
    let mut lo = (best_t - 2.0 / n as f64).max(-1.0);
    let mut hi = (best_t + 2.0 / n as f64).min(1.0);
    for _ in 0..40 {
        let m1 = lo + (hi - lo) * 0.382;
        let m2 = lo + (hi - lo) * 0.618;
        if eval(m1) < eval(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    best.max(eval(0.5 * (lo + hi)))
}

/// ∫_Γ ⟨a, π(M_γ w)⟩ dγ over the full s-torus model of Γ.
///
/// The integrand factors over places: each factor is a one-dimensional
/// circle integral of a single-frequency phase, evaluated by the adaptive
/// trapezoid rule at ≥ `quad_per_angle` nodes.
pub fn gamma_character_average(
    frame: &CentralFrame,
    a: &Character,
    w: &[Complex],
    quad_per_angle: usize,
) -> Result<Complex> {
    if !frame.independent {
        return Err(Error::IndependenceRequired);
    }
    if w.len() != frame.s {
        return Err(Error::DimensionMismatch { expected: frame.s, got: w.len() });
    }
    let coeffs = frame.character_coeffs(&a.exponents)?;
    let mut product = Complex::ONE;
    for (c, wv) in coeffs.iter().zip(w) {
        let rho = *c * *wv;
        // ∫₀¹ e^{2πi Re(ρ e^{2πit})} dt with Re(ρe^{iθ}) expanded into
        // cos/sin components.
        let term = TrigTerm { freq: 1, a: math::TAU * rho.re, b: -math::TAU * rho.im };
        let p = TrigPolynomial::new(alloc::vec![term]).expect("single term");
        if p.norm() == 0.0 {
            continue; // factor is exactly 1
        }
        let n0 = quad_per_angle.max(64).max((4.0 * p.bandwidth()) as usize);
        let mut n = n0.next_power_of_two();
        let q = loop {
            let q = oscillatory_integral(&p, n)?;
            if q.error <= QUAD_REL_TOL * q.value.norm().max(1.0) {
                break q;
            }
            if n >= QUAD_NODE_CAP {
                return Err(Error::QuadratureNotConverged {
                    delta: q.error,
                    tolerance: QUAD_REL_TOL,
                });
            }
            n *= 2;
        };
        product = product * q.value;
    }
    Ok(product)
}

/// Empirical constant for the character-average decay: max over sampled w
/// (norms log-uniform in [1, 10⁴], directions uniform) of
/// |∫_Γ⟨a, π(M_γ w)⟩dγ| · max(1, ‖w‖^{1/2s}).
pub fn fit_ca(
    frame: &CentralFrame,
    a: &Character,
    samples: usize,
    seed: u64,
) -> Result<FitReport> {
    if a.is_trivial() {
        return Err(Error::StrategyFailed {
            message: String::from("fit_ca needs a nontrivial character"),
        });
    }
    let mut rng = Rng::stream(seed, "harmonic/fit_ca");
    let s = frame.s;
    let mut best = 0.0f64;
    let mut sweep = Vec::with_capacity(samples);
    for _ in 0..samples {
        let norm = rng.log_uniform(1.0, 1e4);
        let w = random_direction(&mut rng, s, norm);
        let avg = gamma_character_average(frame, a, &w, 64)?.norm();
        let value = avg * math::pow(norm, 1.0 / (2.0 * s as f64)).max(1.0);
        sweep.push((norm, avg));
        best = best.max(value);
    }
    Ok(FitReport { constant: best, seed, samples, sweep })
}

/// Uniform direction on the unit sphere of the max-of-moduli norm, scaled.
pub fn random_direction(rng: &mut Rng, s: usize, norm: f64) -> Vec<Complex> {
    let lead = rng.below(s as u64) as usize;
    (0..s)
        .map(|k| {
            let m = if k == lead { 1.0 } else { rng.next_f64() };
            let phase = rng.uniform(0.0, math::TAU);
            Complex::cis(phase).scale(m * norm)
        })
        .collect()
}

/// ∬ min(1, ‖w−w′‖^{−1/2s}) dτ̄ dτ̄ as an exact double sum over support
/// pairs; diagonal pairs contribute 1.
pub fn energy_integral(tau: &WeightedPointMeasure, s: usize) -> Result<f64> {
    if !tau.is_probability(1e-12) {
        return Err(Error::NotProbability { total: tau.total() });
    }
    if tau.dim() != 2 * s {
        return Err(Error::DimensionMismatch { expected: 2 * s, got: tau.dim() });
    }
    let pts = tau.support();
    let ws = tau.weights();
    let exponent = -1.0 / (2.0 * s as f64);
    let mut acc = 0.0f64;
    for i in 0..pts.len() {
        acc += ws[i] * ws[i]; // diagonal
        for j in 0..i {
            let d = place_norm(&pts[i], &pts[j], s);
            let kernel = if d <= 1.0 { 1.0 } else { math::pow(d, exponent) };
            acc += 2.0 * ws[i] * ws[j] * kernel;
        }
    }
    Ok(acc)
}

fn place_norm(a: &[f64], b: &[f64], s: usize) -> f64 {
    (0..s)
        .map(|k| math::hypot(a[2 * k] - b[2 * k], a[2 * k + 1] - b[2 * k + 1]))
        .fold(0.0, f64::max)
}

/// Cesàro average of a character against pushforwards of a leaf measure:
/// (1/N)Σ_{i<N} ∫⟨a,x⟩ d(ρα^i) together with the Cauchy–Schwarz companion
/// (1/N)Σ_{i<N} |∫⟨a,x⟩ d(ρα^i)|².
#[derive(Debug, Clone, Copy)]
pub struct CesaroAverage {
    pub mean: Complex,
    pub mean_square: f64,
}

pub fn cesaro_character_average(
    frame: &CentralFrame,
    a: &Character,
    tau: &WeightedPointMeasure,
    x0: &TorusPoint,
    n: usize,
) -> Result<CesaroAverage> {
    let scan = cesaro_scan(frame, a, tau, x0, n, n)?;
    Ok(scan.terminal)
}

/// Running Cesàro data: terminal averages plus the maximum of the squared
/// Cesàro mean over a window of N values.
#[derive(Debug, Clone, Copy)]
pub struct CesaroScan {
    pub terminal: CesaroAverage,
    /// max over N ∈ [window_lo, window_hi] of |(1/N)Σ_{i<N} D_i|².
    pub window_max_square: f64,
}

pub fn cesaro_scan(
    frame: &CentralFrame,
    a: &Character,
    tau: &WeightedPointMeasure,
    x0: &TorusPoint,
    window_lo: usize,
    window_hi: usize,
) -> Result<CesaroScan> {
    if !tau.is_probability(1e-12) {
        return Err(Error::NotProbability { total: tau.total() });
    }
    if tau.dim() != 2 * frame.s {
        return Err(Error::DimensionMismatch { expected: 2 * frame.s, got: tau.dim() });
    }
    if a.dim() != frame.dim {
        return Err(Error::DimensionMismatch { expected: frame.dim, got: a.dim() });
    }
    if window_lo == 0 || window_lo > window_hi {
        return Err(Error::StrategyFailed {
            message: String::from("need 1 ≤ window_lo ≤ window_hi"),
        });
    }
    let work = window_hi as u64 * tau.len() as u64;
    if work > CESARO_BUDGET {
        return Err(Error::BudgetExceeded { budget: CESARO_BUDGET, requested: work });
    }
    let n = window_hi;
    let coeffs = frame.character_coeffs(&a.exponents)?;
    let support: Vec<Vec<Complex>> = tau
        .support()
        .iter()
        .map(|p| {
            (0..frame.s)
                .map(|k| Complex::new(p[2 * k], p[2 * k + 1]))
                .collect()
        })
        .collect();
    let weights = tau.weights();
    let mut base = x0.clone();
    let x0_is_zero = x0.coords().iter().all(|&c| c == 0.0);
    let mut sum = Complex::ZERO;
    let mut sum_sq = 0.0f64;
    let mut window_max = 0.0f64;
    for i in 0..n {
        // D_i = ⟨a, α^i x0⟩ · Σ_j τ_j e^{2πi Σ_v Re(c_v (ξ^i w_j)_v)}
        let base_char = if x0_is_zero { Complex::ONE } else { a.eval(&base)? };
        let xi = frame.central_rotation(i as i64);
        let mut d = Complex::ZERO;
        for (w, &weight) in support.iter().zip(weights) {
            let mut phase = 0.0;
            for ((z, g), c) in w.iter().zip(&xi).zip(&coeffs) {
                let rotated = *z * *g;
                phase += c.re * rotated.re - c.im * rotated.im;
            }
            d += Complex::cis(math::TAU * phase).scale(weight);
        }
        d = d * base_char;
        sum += d;
        sum_sq += d.norm_sqr();
        let count = i + 1;
        if count >= window_lo {
            let mean = sum.scale(1.0 / count as f64);
            window_max = window_max.max(mean.norm_sqr());
        }
        if !x0_is_zero && i + 1 < n {
            base = crate::torus::step_f64(frame.companion_f64(), &base);
        }
    }
    Ok(CesaroScan {
        terminal: CesaroAverage {
            mean: sum.scale(1.0 / n as f64),
            mean_square: sum_sq / n as f64,
        },
        window_max_square: window_max,
    })
}

/// Time average (1/N)Σ g(ξ^i) of g(γ) = |∫⟨a, π(M_γ w)⟩ dτ̄|² against the
/// Γ-quadrature value ∫_Γ g dγ; returns (time_average, gamma_average).
///
/// Unique ergodicity of the rotation by ξ on Γ makes the two agree in the
/// limit; this is the operative check that the full-torus model of Γ is
/// sound for the frame.
pub fn unique_ergodicity_check(
    frame: &CentralFrame,
    a: &Character,
    tau: &WeightedPointMeasure,
    n: usize,
    gamma_nodes: usize,
) -> Result<(f64, f64)> {
    if !frame.independent {
        return Err(Error::IndependenceRequired);
    }
    if tau.dim() != 2 * frame.s {
        return Err(Error::DimensionMismatch { expected: 2 * frame.s, got: tau.dim() });
    }
    let coeffs = frame.character_coeffs(&a.exponents)?;
    let support: Vec<Vec<Complex>> = tau
        .support()
        .iter()
        .map(|p| {
            (0..frame.s)
                .map(|k| Complex::new(p[2 * k], p[2 * k + 1]))
                .collect()
        })
        .collect();
    let weights = tau.weights();
    let g_at = |gamma: &[Complex]| -> f64 {
        let mut d = Complex::ZERO;
        for (w, &weight) in support.iter().zip(weights) {
            let mut phase = 0.0;
            for ((z, gv), c) in w.iter().zip(gamma).zip(&coeffs) {
                let rotated = *z * *gv;
                phase += c.re * rotated.re - c.im * rotated.im;
            }
            d += Complex::cis(math::TAU * phase).scale(weight);
        }
        d.norm_sqr()
    };
    // Time average along ξ^i.
    let mut time_avg = 0.0f64;
    for i in 0..n {
        let xi = frame.central_rotation(i as i64);
        time_avg += g_at(&xi);
    }
    time_avg /= n as f64;
    // Γ-average by product trapezoid over the s-torus, with doubling check.
    let mut nodes = gamma_nodes.next_power_of_two().max(32);
    let mut prev: Option<f64> = None;
    loop {
        let value = torus_average(&g_at, frame.s, nodes);
        if let Some(p) = prev {
            if math::abs(value - p) <= 1e-6 * value.max(1.0) {
                return Ok((time_avg, value));
            }
        }
        if nodes.pow(frame.s as u32) >= (1 << 24) {
            return Ok((time_avg, value));
        }
        prev = Some(value);
        nodes *= 2;
    }
}

fn torus_average<F: Fn(&[Complex]) -> f64>(g: &F, s: usize, nodes: usize) -> f64 {
    let mut idx = alloc::vec![0usize; s];
    let mut acc = 0.0f64;
    let total = nodes.pow(s as u32);
    let mut gamma = alloc::vec![Complex::ONE; s];
    loop {
        for (k, &i) in idx.iter().enumerate() {
            gamma[k] = Complex::cis(math::TAU * i as f64 / nodes as f64);
        }
        acc += g(&gamma);
        let mut pos = 0;
        loop {
            if pos == s {
                return acc / total as f64;
            }
            idx[pos] += 1;
            if idx[pos] < nodes {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::build_frame;
    use crate::poly::poly_parse;

    fn frame_a() -> CentralFrame {
        build_frame(&poly_parse("u^4 - u^3 - u^2 - u + 1").unwrap(), 128).unwrap()
    }

    /// Series oracle for J₀(x), good to ~1e-15 for |x| ≤ 15.
    fn bessel_j0(x: f64) -> f64 {
        let q = 0.25 * x * x;
        let mut term = 1.0f64;
        let mut acc = 1.0f64;
        for k in 1..60 {
            term *= -q / ((k * k) as f64);
            acc += term;
            if math::abs(term) < 1e-18 {
                break;
            }
        }
        acc
    }

    #[test]
    fn character_basics() {
        let x = TorusPoint::new(alloc::vec![0.5, 0.1, 0.2, 0.3]);
        let trivial = Character::new(alloc::vec![0, 0, 0, 0]);
        let v = trivial.eval(&x).unwrap();
        assert!((v - Complex::ONE).norm() < 1e-15);
        let a = Character::new(alloc::vec![1, 0, 0, 0]);
        let v = a.eval(&x).unwrap();
        assert!((v - Complex::new(-1.0, 0.0)).norm() < 1e-12);
        for exps in [[3, -2, 5, 1], [7, 0, 0, -9]] {
            let a = Character::new(exps.to_vec());
            assert!(math::abs(a.eval(&x).unwrap().norm() - 1.0) < 1e-12);
        }
        assert!(a.eval(&TorusPoint::zero(3)).is_err());
    }

    #[test]
    fn empty_integrand_gives_one() {
        let q = oscillatory_integral(&TrigPolynomial::empty(), 128).unwrap();
        assert!((q.value - Complex::ONE).norm() == 0.0);
    }

    #[test]
    fn bessel_cross_check() {
        for a in [1.0, 2.404826, 10.0] {
            let p = TrigPolynomial::new(alloc::vec![TrigTerm { freq: 1, a, b: 0.0 }]).unwrap();
            let q = oscillatory_integral_auto(&p, 1e-9, QUAD_NODE_CAP).unwrap();
            let want = bessel_j0(a);
            assert!(
                math::abs(q.value.re - want) < 1e-8 && math::abs(q.value.im) < 1e-8,
                "a = {a}: got {:?} want {want}",
                q.value
            );
        }
        // First Bessel zero: integral nearly vanishes.
        let p = TrigPolynomial::new(alloc::vec![TrigTerm { freq: 1, a: 2.404826, b: 0.0 }])
            .unwrap();
        let q = oscillatory_integral_auto(&p, 1e-9, QUAD_NODE_CAP).unwrap();
        assert!(q.value.norm() < 1e-5);
    }

    #[test]
    fn conjugation_symmetry() {
        let p = TrigPolynomial::new(alloc::vec![
            TrigTerm { freq: 1, a: 3.0, b: -1.0 },
            TrigTerm { freq: 4, a: -2.0, b: 5.0 },
        ])
        .unwrap();
        let q1 = oscillatory_integral_auto(&p, 1e-8, QUAD_NODE_CAP).unwrap();
        let q2 = oscillatory_integral_auto(&p.negated(), 1e-8, QUAD_NODE_CAP).unwrap();
        assert!((q1.value.conj() - q2.value).norm() < 1e-7);
    }

    #[test]
    fn nyquist_precondition() {
        let p = TrigPolynomial::new(alloc::vec![TrigTerm { freq: 10, a: 1.0, b: 0.0 }]).unwrap();
        assert!(matches!(
            oscillatory_integral(&p, 100),
            Err(Error::InsufficientQuadrature { .. })
        ));
    }

    #[test]
    fn trig_polynomial_invariants() {
        assert!(TrigPolynomial::new(alloc::vec![
            TrigTerm { freq: 2, a: 1.0, b: 0.0 },
            TrigTerm { freq: 2, a: 0.0, b: 1.0 },
        ])
        .is_err());
        assert!(TrigPolynomial::new(alloc::vec![TrigTerm { freq: 0, a: 1.0, b: 0.0 }]).is_err());
        let p = TrigPolynomial::new(alloc::vec![
            TrigTerm { freq: 3, a: 3.0, b: 4.0 },
            TrigTerm { freq: 1, a: 1.0, b: 0.0 },
        ])
        .unwrap();
        assert_eq!(p.norm(), 5.0);
        assert_eq!(p.max_freq(), 3);
        assert_eq!(p.terms()[0].freq, 1);
    }

    #[test]
    fn large_amplitude_decay_stays_under_fitted_constant() {
        // λ-sweeps of fixture polynomials stay below the fitted constant for
        // the same (s, M) family (finite-sample margin 1.25).
        let c2 = fit_c2(2, 6, 150, 44).unwrap().constant;
        let mut rng = Rng::stream(5, "harmonic/decay-test");
        for _ in 0..4 {
            let base = random_trig(&mut rng, 2, 6, 1.0, 1.0);
            for k in 0..13 {
                let lambda = math::pow(10.0, k as f64 / 2.0);
                let p = base.scaled(lambda / base.norm());
                let q = oscillatory_integral_auto(&p, QUAD_REL_TOL, QUAD_NODE_CAP).unwrap();
                let v = q.value.norm() * math::pow(p.norm(), 0.25);
                assert!(v <= c2 * 1.25, "λ = {lambda}: {v} > 1.25·{c2}");
            }
        }
    }

    #[test]
    fn fit_c2_single_term_matches_bessel_envelope() {
        // s = 1, M = 1: the integral is J₀(‖p‖), so the fitted constant is
        // the sup of |J₀(a)|·√a over the sweep, approaching √(2/π) ≈ 0.7979.
        let fit = fit_c2(1, 1, 300, 99).unwrap();
        let envelope = math::sqrt(2.0 / math::PI);
        assert!(
            math::abs(fit.constant - envelope) < 0.02,
            "fitted {} vs asymptotic envelope {envelope}",
            fit.constant
        );
    }

    #[test]
    fn gamma_average_decay_at_large_norm() {
        // The average at ‖w‖ = 10⁴ obeys the fitted bound (sampling margin).
        let fr = frame_a();
        let a = Character::new(alloc::vec![1, 0, 0, 0]);
        let c_a = fit_ca(&fr, &a, 150, 7).unwrap().constant;
        let mut rng = Rng::stream(12, "harmonic/gamma-decay");
        for _ in 0..10 {
            let w = random_direction(&mut rng, 1, 1e4);
            let avg = gamma_character_average(&fr, &a, &w, 64).unwrap().norm();
            assert!(avg <= c_a * math::pow(1e4, -0.5) * 1.15, "{avg} vs bound");
        }
    }

    #[test]
    fn sublevel_examples() {
        // p = cos 2πt: |p′| = 2π|sin 2πt| < 2π·1/2 on a set of measure 1/3.
        let p = TrigPolynomial::new(alloc::vec![TrigTerm { freq: 1, a: 1.0, b: 0.0 }]).unwrap();
        let a = math::TAU * math::sin(math::PI / 6.0);
        let m = sublevel_measure(&p, a, 30_000).unwrap();
        assert!(math::abs(m - 1.0 / 3.0) < 1e-3, "got {m}");
        assert_eq!(sublevel_measure(&p, 1e9, 10_000).unwrap(), 1.0);
        assert_eq!(sublevel_measure(&p, 0.0, 10_000).unwrap(), 0.0);
        assert!(sublevel_measure(&p, 1.0, 100).is_err());
    }

    #[test]
    fn a_s_estimates() {
        // s = 1: the minimum is exactly 1 (witnessed by p = ±t and p = ±1).
        let a1 = estimate_a_s(1, 8).unwrap();
        assert!(math::abs(a1 - 1.0) < 1e-6, "got {a1}");
        for s in [2usize, 3] {
            let a = estimate_a_s(s, 4).unwrap();
            assert!(a > 0.0 && a <= 1.0 + 1e-12);
        }
        // Refinement never increases the estimate.
        let coarse = estimate_a_s(2, 4).unwrap();
        let fine = estimate_a_s(2, 8).unwrap();
        assert!(fine <= coarse + 1e-12);
        assert!(estimate_a_s(4, 8).is_err());
    }

    #[test]
    fn gamma_average_trivial_cases() {
        let fr = frame_a();
        let a = Character::new(alloc::vec![1, 0, 0, 0]);
        let zero = alloc::vec![Complex::ZERO];
        let v = gamma_character_average(&fr, &a, &zero, 64).unwrap();
        assert!((v - Complex::ONE).norm() < 1e-12);
        let trivial = Character::new(alloc::vec![0, 0, 0, 0]);
        let w = alloc::vec![Complex::new(2.0, 1.0)];
        let v = gamma_character_average(&fr, &trivial, &w, 64).unwrap();
        assert!((v - Complex::ONE).norm() < 1e-12);
    }

    #[test]
    fn gamma_average_is_bessel_for_s1() {
        // One place: the average is J₀(2π|c·w|).
        let fr = frame_a();
        let a = Character::new(alloc::vec![1, 0, 0, 0]);
        let c = fr.character_coeffs(&a.exponents).unwrap()[0];
        let w = Complex::new(0.4, -0.3);
        let v = gamma_character_average(&fr, &a, &[w], 64).unwrap();
        let want = bessel_j0(math::TAU * (c * w).norm());
        assert!(math::abs(v.re - want) < 1e-7 && math::abs(v.im) < 1e-7);
    }

    #[test]
    fn fit_ca_bound_holds_definitionally() {
        let fr = frame_a();
        let a = Character::new(alloc::vec![1, 0, 0, 0]);
        let fit = fit_ca(&fr, &a, 60, 11).unwrap();
        assert!(fit.constant > 0.0);
        let again = fit_ca(&fr, &a, 60, 11).unwrap();
        assert_eq!(fit.constant, again.constant);
        // Every recorded sample satisfies |avg| ≤ c_a·‖w‖^{−1/2s} in the
        // normalized form.
        for (norm, avg) in &fit.sweep {
            assert!(avg * math::pow(*norm, 0.5).max(1.0) <= fit.constant + 1e-12);
        }
        assert!(fit_ca(&fr, &Character::new(alloc::vec![0, 0, 0, 0]), 10, 0).is_err());
    }

    #[test]
    fn energy_examples() {
        // Single atom → 1.
        let one = WeightedPointMeasure::dirac(alloc::vec![0.0, 0.0]);
        assert!(math::abs(energy_integral(&one, 1).unwrap() - 1.0) < 1e-15);
        // Two atoms weight 1/2 at distance d ≥ 1 → 1/2 + d^{−1/2s}/2.
        let d = 3.0f64;
        let two = WeightedPointMeasure::new(
            alloc::vec![alloc::vec![0.0, 0.0], alloc::vec![d, 0.0]],
            alloc::vec![0.5, 0.5],
        )
        .unwrap();
        let e = energy_integral(&two, 1).unwrap();
        assert!(math::abs(e - 0.5 - 0.5 * math::pow(d, -0.5)) < 1e-12);
        // Non-probability weights refused.
        let bad = WeightedPointMeasure::new(
            alloc::vec![alloc::vec![0.0, 0.0]],
            alloc::vec![0.7],
        )
        .unwrap();
        assert!(matches!(energy_integral(&bad, 1), Err(Error::NotProbability { .. })));
    }

    #[test]
    fn energy_uniform_separated_bound() {
        let fr = frame_a();
        let set =
            crate::torus::make_separated(&fr, 2.0, 25, crate::torus::SeparationStrategy::Grid, 0)
                .unwrap();
        let pts: Vec<Vec<f64>> = set
            .points
            .iter()
            .map(|w| w.iter().flat_map(|z| [z.re, z.im]).collect())
            .collect();
        let tau = WeightedPointMeasure::uniform(pts).unwrap();
        let e = energy_integral(&tau, 1).unwrap();
        let k = 25.0f64;
        assert!(e <= 1.0 / k + math::pow(2.0, -0.5) + 1e-12);
    }

    #[test]
    fn energy_rotation_translation_invariance() {
        let mut rng = Rng::stream(31, "harmonic/energy-invariance");
        let pts: Vec<Vec<f64>> = (0..8)
            .map(|_| alloc::vec![rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)])
            .collect();
        let tau = WeightedPointMeasure::uniform(pts).unwrap();
        let e0 = energy_integral(&tau, 1).unwrap();
        let theta = rng.uniform(0.0, math::TAU);
        let (sn, cs) = math::sincos(theta);
        let shift = [0.7, -1.3];
        let moved = tau.map_points(|p| {
            alloc::vec![
                cs * p[0] - sn * p[1] + shift[0],
                sn * p[0] + cs * p[1] + shift[1]
            ]
        });
        let e1 = energy_integral(&moved, 1).unwrap();
        assert!(math::abs(e0 - e1) < 1e-12);
    }

    #[test]
    fn cesaro_trivial_cases() {
        let fr = frame_a();
        let tau = WeightedPointMeasure::dirac(alloc::vec![0.0, 0.0]);
        let x0 = TorusPoint::zero(4);
        let trivial = Character::new(alloc::vec![0, 0, 0, 0]);
        let avg = cesaro_character_average(&fr, &trivial, &tau, &x0, 50).unwrap();
        assert!((avg.mean - Complex::ONE).norm() < 1e-12);
        assert!(math::abs(avg.mean_square - 1.0) < 1e-12);
        let a = Character::new(alloc::vec![1, 0, 0, 0]);
        let avg = cesaro_character_average(&fr, &a, &tau, &x0, 1).unwrap();
        assert!((avg.mean - Complex::ONE).norm() < 1e-12);
    }

    #[test]
    fn unique_ergodicity_small() {
        let fr = frame_a();
        let a = Character::new(alloc::vec![1, 0, 0, 0]);
        let mut rng = Rng::stream(3, "harmonic/ue-small");
        let pts: Vec<Vec<f64>> = (0..5)
            .map(|_| alloc::vec![rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)])
            .collect();
        let tau = WeightedPointMeasure::uniform(pts).unwrap();
        let (time_avg, gamma_avg) = unique_ergodicity_check(&fr, &a, &tau, 30_000, 64).unwrap();
        assert!(
            math::abs(time_avg - gamma_avg) < 0.1,
            "time {time_avg} vs gamma {gamma_avg}"
        );
    }

    #[test]
    fn van_der_corput_bound() {
        // φ(t) = Bt² on [1, 2]: φ′ = 2Bt ≥ 2B, so |∫e^{iφ}| ≤ 4/(2B).
        for &b in &[50.0f64, 200.0] {
            let a_lower = 2.0 * b;
            let n = 1 << 16;
            let mut acc = Complex::ZERO;
            for j in 0..=n {
                let t = 1.0 + j as f64 / n as f64;
                let weight = if j == 0 || j == n { 0.5 } else { 1.0 };
                acc += Complex::cis(b * t * t).scale(weight);
            }
            let integral = acc.scale(1.0 / n as f64);
            assert!(
                integral.norm() <= 4.0 / a_lower + 1e-6,
                "B = {b}: {} > {}",
                integral.norm(),
                4.0 / a_lower
            );
        }
    }
}
