//! Command-line front end: configuration, seeded runs, and machine-readable
//! report emission for the `leafdyn` library.
//!
//! Every report is a JSON envelope `{command, version, config, provenance,
//! data}`. Reports contain no timestamps, so identical configurations
//! (including the seed) produce byte-identical files. The `provenance` block
//! tags each reported numeric as `exact`, `quadrature(err=…)`, or
//! `fitted(seed=…,samples=…)`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use leafdyn::classify::{classify, classify_matrix, ClassificationReport};
use leafdyn::density::{
    density_experiment, DensityMode, DensityReport, RkCaps, PROBE_CAP,
};
use leafdyn::embedding::{build_frame, Place};
use leafdyn::error::Error as CoreError;
use leafdyn::harmonic::{energy_integral, fit_c2, fit_ca, Character, FitReport};
use leafdyn::math::Complex;
use leafdyn::measures::{
    estimate_leaf_profile, finiteness_diagnostic, sample_invariant, tau_point, FinitenessVerdict,
    InvariantKind, WeightedPointMeasure,
};
use leafdyn::poly::{poly_parse, IntPolynomial};
use leafdyn::torus::{make_separated, SeparationStrategy, TorusPoint};
use leafdyn::IntMatrix;

/// CLI failure with the exit code contract: 2 for contract violations, 1 for
/// internal or IO errors.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub exit_code: u8,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let exit_code = match e {
            CoreError::Internal { .. } => 1,
            _ => 2,
        };
        CliError { message: format!("{e}"), exit_code }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError { message: format!("io error: {e}"), exit_code: 1 }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError { message: format!("json error: {e}"), exit_code: 1 }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn contract(message: impl Into<String>) -> CliError {
    CliError { message: message.into(), exit_code: 2 }
}

/// Report body format. CSV is available for the commands with a natural
/// table (oscillatory sweeps, leafsim profiles, density gap traces).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

/// Shared run options (seed, precision, budgets, output, format).
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub precision_bits: u32,
    pub points_budget: u64,
    pub quadrature_points: usize,
    pub trials: usize,
    pub format: ReportFormat,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            precision_bits: 128,
            points_budget: 10_000_000,
            quadrature_points: 4096,
            trials: 500,
            format: ReportFormat::Json,
            output: None,
        }
    }
}

/// Report envelope: config and library version embedded for reproducibility,
/// no timestamps.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub config: Value,
    pub provenance: BTreeMap<String, String>,
    pub data: Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Either a JSON report or a CSV table, per the configured format.
pub enum Emission {
    Report(Report),
    Csv(String),
}

impl Emission {
    pub fn body(&self) -> String {
        match self {
            Emission::Report(r) => r.to_json(),
            Emission::Csv(s) => s.clone(),
        }
    }

    pub fn emit(&self, output: Option<&Path>) -> CliResult<()> {
        let body = self.body();
        match output {
            Some(path) => fs::write(path, body)?,
            None => {
                std::io::stdout().write_all(body.as_bytes())?;
            }
        }
        Ok(())
    }
}

/// CSV is only defined for commands with tabular data.
pub fn require_json(cfg: &RunConfig, command: &str) -> CliResult<()> {
    if cfg.format == ReportFormat::Csv {
        return Err(contract(format!("csv format is not available for `{command}`")));
    }
    Ok(())
}

fn prov_exact() -> String {
    "exact".into()
}

fn prov_quadrature(err: f64) -> String {
    format!("quadrature(err={err:e})")
}

fn prov_fitted(seed: u64, samples: usize) -> String {
    format!("fitted(seed={seed},samples={samples})")
}

// ---- input readers ---------------------------------------------------------

#[derive(Debug, Deserialize)]
struct PolyJson {
    coeffs: Vec<i64>,
}

#[derive(Debug, Deserialize)]
struct MatrixJson {
    matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
struct MeasureJson {
    support: Vec<Vec<f64>>,
    weights: Option<Vec<f64>>,
}

/// Polynomial from inline text or a JSON file (`{"coeffs": [...]}`).
pub fn read_polynomial(poly: Option<&str>, input: Option<&Path>) -> CliResult<IntPolynomial> {
    match (poly, input) {
        (Some(text), None) => Ok(poly_parse(text)?),
        (None, Some(path)) => {
            let body = fs::read_to_string(path)?;
            let parsed: PolyJson = serde_json::from_str(&body)
                .map_err(|e| contract(format!("bad polynomial file {}: {e}", path.display())))?;
            Ok(IntPolynomial::from_i64(&parsed.coeffs))
        }
        _ => Err(contract("provide exactly one of an inline polynomial or --input")),
    }
}

/// Classification input: polynomial text, `{"coeffs": …}`, or
/// `{"matrix": …}` (classified through its characteristic polynomial).
pub fn read_classify_input(
    poly: Option<&str>,
    input: Option<&Path>,
) -> CliResult<ClassifyInput> {
    if let Some(text) = poly {
        return Ok(ClassifyInput::Poly(poly_parse(text)?));
    }
    let path = input.ok_or_else(|| contract("provide a polynomial or --input"))?;
    let body = fs::read_to_string(path)?;
    if let Ok(parsed) = serde_json::from_str::<MatrixJson>(&body) {
        let m = IntMatrix::from_rows(&parsed.matrix)?;
        return Ok(ClassifyInput::Matrix(m));
    }
    let parsed: PolyJson = serde_json::from_str(&body).map_err(|e| {
        contract(format!(
            "{} holds neither {{\"matrix\": …}} nor {{\"coeffs\": …}}: {e}",
            path.display()
        ))
    })?;
    Ok(ClassifyInput::Poly(IntPolynomial::from_i64(&parsed.coeffs)))
}

pub enum ClassifyInput {
    Poly(IntPolynomial),
    Matrix(IntMatrix),
}

/// Measure from a JSON file; omitted weights mean the uniform measure.
pub fn read_measure(path: &Path) -> CliResult<WeightedPointMeasure> {
    let body = fs::read_to_string(path)?;
    let parsed: MeasureJson = serde_json::from_str(&body)
        .map_err(|e| contract(format!("bad measure file {}: {e}", path.display())))?;
    let m = match parsed.weights {
        Some(w) => WeightedPointMeasure::new(parsed.support, w)?,
        None => WeightedPointMeasure::uniform(parsed.support)?,
    };
    Ok(m)
}

pub fn parse_point(s: &str, dim: usize) -> CliResult<TorusPoint> {
    let coords: Result<Vec<f64>, _> = s.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let coords = coords.map_err(|e| contract(format!("bad point '{s}': {e}")))?;
    if coords.len() != dim {
        return Err(contract(format!("point has {} coordinates, need {dim}", coords.len())));
    }
    Ok(TorusPoint::new(coords))
}

pub fn parse_complex_list(s: &str, places: usize) -> CliResult<Vec<Complex>> {
    let parts: Vec<&str> = s.split(';').collect();
    if parts.len() != places {
        return Err(contract(format!("need {places} complex place coordinates, got {}", parts.len())));
    }
    parts
        .iter()
        .map(|p| {
            let nums: Result<Vec<f64>, _> =
                p.split(',').map(|t| t.trim().parse::<f64>()).collect();
            let nums = nums.map_err(|e| contract(format!("bad complex '{p}': {e}")))?;
            if nums.len() != 2 {
                return Err(contract(format!("complex coordinate '{p}' needs re,im")));
            }
            Ok(Complex::new(nums[0], nums[1]))
        })
        .collect()
}

pub fn parse_character(s: &str, dim: usize) -> CliResult<Character> {
    let nums: Result<Vec<i64>, _> = s.split(',').map(|t| t.trim().parse::<i64>()).collect();
    let nums = nums.map_err(|e| contract(format!("bad character '{s}': {e}")))?;
    if nums.len() != dim {
        return Err(contract(format!("character has {} entries, need {dim}", nums.len())));
    }
    Ok(Character::new(nums))
}

fn poly_value(f: &IntPolynomial) -> Value {
    let coeffs = f.coeffs_i64().expect("desk-scale coefficients fit i64");
    json!({ "text": f.to_string(), "coeffs": coeffs })
}

pub fn write_points_csv(path: &Path, points: &[TorusPoint]) -> CliResult<()> {
    let mut out = String::new();
    for p in points {
        let row: Vec<String> = p.coords().iter().map(|c| format!("{c:.17}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

// ---- fitted-constant sidecar cache -----------------------------------------

/// JSON sidecar cache for fitted constants keyed by (f, a, seed, samples).
pub fn ca_cache_key(f: &IntPolynomial, a: &Character, seed: u64, samples: usize) -> String {
    format!("f={f}|a={:?}|seed={seed}|samples={samples}", a.exponents)
}

pub fn load_ca_cache(path: &Path) -> BTreeMap<String, f64> {
    fs::read_to_string(path)
        .ok()
        .and_then(|body| serde_json::from_str(&body).ok())
        .unwrap_or_default()
}

pub fn store_ca_cache(path: &Path, cache: &BTreeMap<String, f64>) -> CliResult<()> {
    let mut body = serde_json::to_string_pretty(cache)?;
    body.push('\n');
    fs::write(path, body)?;
    Ok(())
}

// ---- command runners --------------------------------------------------------

pub fn run_classify(input: ClassifyInput, config: Value) -> CliResult<Report> {
    let report: ClassificationReport = match input {
        ClassifyInput::Poly(f) => classify(&f)?,
        ClassifyInput::Matrix(m) => classify_matrix(&m)?,
    };
    let mut prov = BTreeMap::new();
    for key in [
        "s0_count",
        "central_real_dim",
        "real_place_count",
        "complex_place_count",
        "finite_place_primes",
    ] {
        prov.insert(key.into(), prov_exact());
    }
    let data = json!({
        "input": poly_value(&report.input),
        "irreducible": report.irreducible,
        "ergodic": report.ergodic,
        "expansive": report.expansive,
        "totally_irreducible": report.totally_irreducible,
        "algebraic_unit": report.algebraic_unit,
        "s0_count": report.s0_count,
        "central_real_dim": report.central_real_dim,
        "real_place_count": report.real_place_count,
        "complex_place_count": report.complex_place_count,
        "finite_place_primes": report.finite_place_primes,
        "notes": report.notes,
    });
    Ok(Report {
        command: "classify".into(),
        version: leafdyn::VERSION.into(),
        config,
        provenance: prov,
        data,
    })
}

pub fn run_frame(cfg: &RunConfig, f: &IntPolynomial, config: Value) -> CliResult<Report> {
    let frame = build_frame(f, cfg.precision_bits)?;
    let places: Vec<Value> = frame
        .places
        .iter()
        .map(|p| match p {
            Place::Real { root } => json!({ "kind": "real", "root": root }),
            Place::Complex { root, unit_circle } => json!({
                "kind": "complex",
                "root": [root.re, root.im],
                "unit_circle": unit_circle,
            }),
        })
        .collect();
    let mut prov = BTreeMap::new();
    prov.insert("s".into(), prov_exact());
    prov.insert("dim".into(), prov_exact());
    prov.insert("matrix".into(), prov_exact());
    prov.insert("angles".into(), prov_quadrature(2f64.powi(-52)));
    let basis_err = prov_quadrature(2f64.powi(-(frame.precision_bits as i32) / 2));
    prov.insert("basis_w0".into(), basis_err.clone());
    prov.insert("basis_complement".into(), basis_err.clone());
    prov.insert("proj_w0".into(), basis_err.clone());
    prov.insert("places".into(), basis_err);
    prov.insert("certificate".into(), prov_exact());
    let data = json!({
        "f": poly_value(&frame.f),
        "matrix": frame.companion.to_f64_rows().iter().map(|r| r.iter().map(|&x| x as i64).collect::<Vec<i64>>()).collect::<Vec<_>>(),
        "dim": frame.dim,
        "s": frame.s,
        "independent": frame.independent,
        "angles": frame.angles.iter().map(|a| format!("{a:.17}")).collect::<Vec<String>>(),
        "angle_precision": "f64 (roots isolated to precision_bits; printed at 53-bit precision)",
        "places": places,
        "basis_w0": frame.basis_w0,
        "basis_complement": frame.basis_complement,
        "proj_w0": frame.proj_w0,
        "precision_bits": frame.precision_bits,
        "certificate": {
            "invariance_log2": frame.certificate.invariance_log2,
            "projection_log2": frame.certificate.projection_log2,
            "round_trip_log2": frame.certificate.round_trip_log2,
        },
    });
    Ok(Report {
        command: "frame".into(),
        version: leafdyn::VERSION.into(),
        config,
        provenance: prov,
        data,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn run_density(
    cfg: &RunConfig,
    f: &IntPolynomial,
    eps: f64,
    mode: DensityMode,
    n_max: u64,
    x0: Option<&str>,
    points_csv: Option<&Path>,
    gaps_csv: Option<&Path>,
    config: Value,
) -> CliResult<Emission> {
    let frame = build_frame(f, cfg.precision_bits)?;
    let x0 = match x0 {
        Some(s) => parse_point(s, frame.dim)?,
        None => TorusPoint::zero(frame.dim),
    };
    let report = density_experiment(
        &frame,
        eps,
        n_max,
        &x0,
        cfg.seed,
        mode,
        cfg.points_budget,
        PROBE_CAP,
    )?;
    if let Some(path) = gaps_csv {
        fs::write(path, gaps_csv_string(&report))?;
    }
    if let Some(path) = points_csv {
        let set = make_separated(
            &frame,
            report.r,
            report.k as usize,
            SeparationStrategy::GreedyRandom,
            cfg.seed,
        )?;
        let pts = leafdyn::density::experiment_points(
            &frame,
            &set,
            &x0,
            report.n_used as usize,
            cfg.points_budget,
        )?;
        write_points_csv(path, &pts)?;
    }
    if cfg.format == ReportFormat::Csv {
        return Ok(Emission::Csv(gaps_csv_string(&report)));
    }
    Ok(Emission::Report(density_report_to_report(&report, mode, cfg, config)))
}

pub fn gaps_csv_string(report: &DensityReport) -> String {
    let mut out = String::from("n,worst_gap\n");
    for (n, gap) in &report.gap_trace {
        out.push_str(&format!("{n},{gap:.17e}\n"));
    }
    out
}

fn density_report_to_report(
    report: &DensityReport,
    mode: DensityMode,
    cfg: &RunConfig,
    config: Value,
) -> Report {
    let mut prov = BTreeMap::new();
    prov.insert("worst_gap".into(), prov_exact());
    prov.insert("gap_trace".into(), prov_exact());
    prov.insert("epsilon".into(), prov_exact());
    prov.insert("s".into(), prov_exact());
    prov.insert("N_used".into(), prov_exact());
    prov.insert("first_dense_N".into(), prov_exact());
    prov.insert("points_used".into(), prov_exact());
    match mode {
        DensityMode::Practical { .. } => {
            prov.insert("R".into(), prov_exact());
            prov.insert("K".into(), prov_exact());
        }
        DensityMode::Coupled => {
            prov.insert("R".into(), prov_fitted(cfg.seed, RkCaps::default().ca_samples));
            prov.insert("K".into(), prov_fitted(cfg.seed, RkCaps::default().ca_samples));
            prov.insert("Xi".into(), prov_fitted(cfg.seed, RkCaps::default().ca_samples));
        }
    }
    let ca_values: Vec<Value> = report
        .ca_values
        .iter()
        .map(|(a, c)| json!({ "a": a, "c_a": c }))
        .collect();
    let data = json!({
        "epsilon": report.eps,
        "s": report.s,
        "R": report.r,
        "K": report.k,
        "Xi": { "count": report.xi_count, "c_a_values": ca_values },
        "N_used": report.n_used,
        "dense": report.dense,
        "worst_gap": report.worst_gap,
        "gap_trace": report.gap_trace,
        "first_dense_N": report.first_dense_n,
        "points_used": report.points_used,
        "mode": match mode {
            DensityMode::Practical { r, k } => json!({ "practical": { "R": r, "K": k } }),
            DensityMode::Coupled => json!("coupled"),
        },
    });
    Report {
        command: "density".into(),
        version: leafdyn::VERSION.into(),
        config,
        provenance: prov,
        data,
    }
}

pub struct OscillatoryArgs<'a> {
    pub s: usize,
    pub max_freq: u32,
    pub character: Option<&'a str>,
    pub poly: Option<IntPolynomial>,
    pub sweep_csv: Option<&'a Path>,
    pub ca_cache: Option<&'a Path>,
}

pub fn sweep_csv_string(fit: &FitReport, bound_exp: f64) -> String {
    let mut out = String::from("norm,value,bound\n");
    for (norm, value) in &fit.sweep {
        let bound = fit.constant * norm.powf(bound_exp);
        out.push_str(&format!("{norm:.17e},{value:.17e},{bound:.17e}\n"));
    }
    out
}

/// Fits the oscillatory constant c₂ (default) or, with `--character`, the
/// character constant c_a on the frame of the supplied polynomial.
pub fn run_oscillatory(
    cfg: &RunConfig,
    args: OscillatoryArgs,
    config: Value,
) -> CliResult<Emission> {
    let (fit, label, bound_exp): (FitReport, String, f64) = match args.character {
        None => {
            let fit = fit_c2(args.s, args.max_freq, cfg.trials, cfg.seed)?;
            let e = -1.0 / (2.0 * args.s as f64);
            (fit, "c2".into(), e)
        }
        Some(spec) => {
            let f = args
                .poly
                .ok_or_else(|| contract("--character needs a polynomial for the frame"))?;
            let frame = build_frame(&f, cfg.precision_bits)?;
            let a = parse_character(spec, frame.dim)?;
            let key = ca_cache_key(&f, &a, cfg.seed, cfg.trials);
            let cached = args.ca_cache.map(load_ca_cache);
            if let Some(cache) = &cached {
                if let Some(&value) = cache.get(&key) {
                    let fit = FitReport {
                        constant: value,
                        seed: cfg.seed,
                        samples: cfg.trials,
                        sweep: Vec::new(),
                    };
                    let e = -1.0 / (2.0 * frame.s as f64);
                    let report = fit_report(cfg, &fit, "c_a (cached)", e, args.sweep_csv, config)?;
                    return Ok(report);
                }
            }
            let fit = fit_ca(&frame, &a, cfg.trials, cfg.seed)?;
            if let Some(path) = args.ca_cache {
                let mut cache = cached.unwrap_or_default();
                cache.insert(key, fit.constant);
                store_ca_cache(path, &cache)?;
            }
            let e = -1.0 / (2.0 * frame.s as f64);
            (fit, "c_a".into(), e)
        }
    };
    fit_report(cfg, &fit, &label, bound_exp, args.sweep_csv, config)
}

fn fit_report(
    cfg: &RunConfig,
    fit: &FitReport,
    label: &str,
    bound_exp: f64,
    sweep_csv: Option<&Path>,
    config: Value,
) -> CliResult<Emission> {
    if let Some(path) = sweep_csv {
        fs::write(path, sweep_csv_string(fit, bound_exp))?;
    }
    if cfg.format == ReportFormat::Csv {
        return Ok(Emission::Csv(sweep_csv_string(fit, bound_exp)));
    }
    let mut prov = BTreeMap::new();
    prov.insert("constant".into(), prov_fitted(fit.seed, fit.samples));
    let data = json!({
        "label": label,
        "constant": fit.constant,
        "samples": fit.samples,
        "seed": fit.seed,
        "sweep_len": fit.sweep.len(),
    });
    Ok(Emission::Report(Report {
        command: "oscillatory".into(),
        version: leafdyn::VERSION.into(),
        config,
        provenance: prov,
        data,
    }))
}

pub struct EnergyArgs<'a> {
    pub measure: Option<&'a Path>,
    pub poly: Option<IntPolynomial>,
    pub r: Option<f64>,
    pub k: Option<usize>,
}

/// Energy integral of a supplied measure, or of the uniform measure on a
/// synthetic R-separated set built on the frame of a polynomial.
pub fn run_energy(cfg: &RunConfig, args: EnergyArgs, config: Value) -> CliResult<Report> {
    let (tau, s, bound) = match (args.measure, args.poly) {
        (Some(path), None) => {
            let tau = read_measure(path)?;
            if tau.dim() % 2 != 0 || tau.dim() == 0 {
                return Err(contract("measure support must have 2s coordinates"));
            }
            let s = tau.dim() / 2;
            (tau, s, None)
        }
        (None, Some(f)) => {
            let frame = build_frame(&f, cfg.precision_bits)?;
            let r = args.r.ok_or_else(|| contract("synthetic energy needs --r"))?;
            let k = args.k.ok_or_else(|| contract("synthetic energy needs --k"))?;
            let set = make_separated(&frame, r, k, SeparationStrategy::GreedyRandom, cfg.seed)?;
            let pts: Vec<Vec<f64>> = set
                .points
                .iter()
                .map(|w| w.iter().flat_map(|z| [z.re, z.im]).collect())
                .collect();
            let tau = WeightedPointMeasure::uniform(pts)?;
            let bound =
                1.0 / k as f64 + r.max(1.0).powf(-1.0 / (2.0 * frame.s as f64));
            (tau, frame.s, Some(bound))
        }
        _ => return Err(contract("provide exactly one of --input or a polynomial with --r/--k")),
    };
    let energy = energy_integral(&tau, s)?;
    let mut prov = BTreeMap::new();
    prov.insert("energy".into(), prov_exact());
    prov.insert("separated_bound".into(), prov_exact());
    prov.insert("support_size".into(), prov_exact());
    let data = json!({
        "s": s,
        "support_size": tau.len(),
        "energy": energy,
        "separated_bound": bound,
    });
    Ok(Report {
        command: "energy".into(),
        version: leafdyn::VERSION.into(),
        config,
        provenance: prov,
        data,
    })
}

pub struct LeafsimArgs<'a> {
    pub kind: &'a str,
    pub count: usize,
    pub w0: Option<&'a str>,
    pub numerators: Option<&'a str>,
    pub denominator: Option<u64>,
    pub x: Option<&'a str>,
    pub r_min: f64,
    pub r_max: f64,
    pub r_count: usize,
    pub tube_eps: f64,
    pub profile_csv: Option<&'a Path>,
}

/// Samples an invariant family, estimates the leaf-mass profile at a base
/// point, and runs the finiteness diagnostic.
pub fn profile_csv_string(radii: &[f64], masses: &[f64]) -> String {
    let mut out = String::from("r,mass\n");
    for (r, m) in radii.iter().zip(masses) {
        out.push_str(&format!("{r:.17e},{m:.17e}\n"));
    }
    out
}

pub fn run_leafsim(
    cfg: &RunConfig,
    f: &IntPolynomial,
    args: LeafsimArgs,
    config: Value,
) -> CliResult<Emission> {
    let frame = build_frame(f, cfg.precision_bits)?;
    let kind = match args.kind {
        "haar" => InvariantKind::Haar,
        "orbit" => {
            let w0 = parse_complex_list(
                args.w0.ok_or_else(|| contract("orbit sampling needs --w0"))?,
                frame.s,
            )?;
            InvariantKind::CentralOrbitClosure { w0 }
        }
        "periodic" => {
            let nums_raw = args
                .numerators
                .ok_or_else(|| contract("periodic sampling needs --numerators"))?;
            let numerators: Result<Vec<i64>, _> =
                nums_raw.split(',').map(|t| t.trim().parse::<i64>()).collect();
            let numerators =
                numerators.map_err(|e| contract(format!("bad numerators: {e}")))?;
            let denominator = args
                .denominator
                .ok_or_else(|| contract("periodic sampling needs --denominator"))?;
            InvariantKind::PeriodicOrbit { numerators, denominator }
        }
        other => return Err(contract(format!("unknown sampling kind '{other}'"))),
    };
    if (args.count as u64) > cfg.points_budget {
        return Err(CoreError::BudgetExceeded {
            budget: cfg.points_budget,
            requested: args.count as u64,
        }
        .into());
    }
    let sample = sample_invariant(&frame, &kind, args.count, cfg.seed)?;
    let x = match args.x {
        Some(s) => parse_point(s, frame.dim)?,
        None => TorusPoint::zero(frame.dim),
    };
    if args.r_count < 2 || !(args.r_max > args.r_min) || !(args.r_min > 0.0) {
        return Err(contract("need 0 < r_min < r_max and at least 2 radii"));
    }
    let ratio = (args.r_max / args.r_min).powf(1.0 / (args.r_count - 1) as f64);
    let radii: Vec<f64> = (0..args.r_count)
        .map(|i| args.r_min * ratio.powi(i as i32))
        .collect();
    let profile = estimate_leaf_profile(&frame, &sample, &x, &radii, args.tube_eps)?;
    let diagnostic = finiteness_diagnostic(&profile)?;
    if let Some(path) = args.profile_csv {
        fs::write(path, profile_csv_string(&profile.radii, &profile.masses))?;
    }
    if cfg.format == ReportFormat::Csv {
        return Ok(Emission::Csv(profile_csv_string(&profile.radii, &profile.masses)));
    }
    let mut prov = BTreeMap::new();
    prov.insert("masses".into(), prov_exact());
    prov.insert("radii".into(), prov_exact());
    prov.insert("r0".into(), prov_exact());
    prov.insert("exponent".into(), prov_exact());
    prov.insert("fit_residual".into(), prov_exact());
    prov.insert("sample_size".into(), prov_exact());
    let data = json!({
        "kind": args.kind,
        "sample_size": profile.sample_size,
        "tube_eps": args.tube_eps,
        "r0": profile.r0,
        "radii": profile.radii,
        "masses": profile.masses,
        "diagnostic": {
            "verdict": match diagnostic.verdict {
                FinitenessVerdict::Finite => "finite",
                FinitenessVerdict::InfiniteGrowth => "infinite-growth",
                FinitenessVerdict::Inconclusive => "inconclusive",
            },
            "exponent": diagnostic.exponent,
            "fit_residual": diagnostic.fit_residual,
        },
    });
    Ok(Emission::Report(Report {
        command: "leafsim".into(),
        version: leafdyn::VERSION.into(),
        config,
        provenance: prov,
        data,
    }))
}

/// τ(x) = x + π(c_m(ρ_x)) for a leaf measure supplied as a JSON file.
pub fn run_tau(
    cfg: &RunConfig,
    f: &IntPolynomial,
    measure: &Path,
    x: Option<&str>,
    r: f64,
    config: Value,
) -> CliResult<Report> {
    let frame = build_frame(f, cfg.precision_bits)?;
    let rho = read_measure(measure)?;
    let x = match x {
        Some(s) => parse_point(s, frame.dim)?,
        None => TorusPoint::zero(frame.dim),
    };
    let t = tau_point(&frame, &rho, &x, r)?;
    let mut prov = BTreeMap::new();
    prov.insert("tau".into(), prov_exact());
    prov.insert("x".into(), prov_exact());
    prov.insert("support_size".into(), prov_exact());
    let data = json!({
        "x": x.coords(),
        "tau": t.coords(),
        "ball_radius": r,
        "support_size": rho.len(),
    });
    Ok(Report {
        command: "tau".into(),
        version: leafdyn::VERSION.into(),
        config,
        provenance: prov,
        data,
    })
}

// Re-exports used by the binary and the acceptance suite.
pub use leafdyn::density::DensityMode as Mode;

/// Helpers shared with the acceptance suite.
pub mod suite {
    pub use leafdyn::classify::{
        self, is_degenerate, is_degenerate_graeffe, self_inversive_unit_pairs,
        unit_circle_root_pairs,
    };
    pub use leafdyn::cyclotomic;
    pub use leafdyn::density;
    pub use leafdyn::embedding;
    pub use leafdyn::harmonic;
    pub use leafdyn::math;
    pub use leafdyn::measures;
    pub use leafdyn::poly;
    pub use leafdyn::rng::Rng;
    pub use leafdyn::roots;
    pub use leafdyn::sturm;
    pub use leafdyn::torus;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_inputs() {
        let f = read_polynomial(Some("u^2 - u - 1"), None).unwrap();
        assert_eq!(f.to_string(), "u^2 - u - 1");
        assert!(read_polynomial(None, None).is_err());
        let dir = std::env::temp_dir().join("leafdyn-cli-test-poly");
        fs::write(&dir, r#"{"coeffs": [-1, -1, 1]}"#).unwrap();
        let g = read_polynomial(None, Some(&dir)).unwrap();
        assert_eq!(f, g);
        let _ = fs::remove_file(dir);
    }

    #[test]
    fn matrix_input() {
        let dir = std::env::temp_dir().join("leafdyn-cli-test-matrix");
        fs::write(&dir, r#"{"matrix": [[0,1],[1,1]]}"#).unwrap();
        match read_classify_input(None, Some(&dir)).unwrap() {
            ClassifyInput::Matrix(m) => assert_eq!(m.dim(), 2),
            _ => panic!("expected matrix"),
        }
        let _ = fs::remove_file(dir);
    }

    #[test]
    fn classify_report_shape() {
        let input = ClassifyInput::Poly(poly_parse("u^4 - u^3 - u^2 - u + 1").unwrap());
        let report = run_classify(input, json!({})).unwrap();
        let body: Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(body["data"]["s0_count"], 1);
        assert_eq!(body["data"]["irreducible"], true);
        assert_eq!(body["provenance"]["s0_count"], "exact");
        for key in [
            "input",
            "irreducible",
            "ergodic",
            "expansive",
            "totally_irreducible",
            "algebraic_unit",
            "s0_count",
            "central_real_dim",
            "real_place_count",
            "complex_place_count",
            "finite_place_primes",
            "notes",
        ] {
            assert!(body["data"].get(key).is_some(), "missing field {key}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = RunConfig::default();
        let a = run_frame(&cfg, &poly_parse("u^4 - u^3 - u^2 - u + 1").unwrap(), json!({"seed": 0}))
            .unwrap()
            .to_json();
        let b = run_frame(&cfg, &poly_parse("u^4 - u^3 - u^2 - u + 1").unwrap(), json!({"seed": 0}))
            .unwrap()
            .to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn exit_code_mapping() {
        let e: CliError = CoreError::ZeroConstantTerm.into();
        assert_eq!(e.exit_code, 2);
        let e: CliError = CoreError::Internal { message: "x".into() }.into();
        assert_eq!(e.exit_code, 1);
    }
}
