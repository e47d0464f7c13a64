use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use leafdyn_cli::*;

/// Classification and desk-scale experiments for nonhyperbolic toral
/// automorphisms.
#[derive(Parser, Debug)]
#[command(name = "leafdyn", version, about)]
struct Cli {
    /// Seed for every random stream in the run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Working precision for root isolation and frame certificates.
    #[arg(long, global = true, default_value_t = 128)]
    precision_bits: u32,
    /// Point budget for orbit accumulation and sampling.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    points_budget: u64,
    /// Baseline quadrature nodes (adaptive doubling may exceed this).
    #[arg(long, global = true, default_value_t = 4096)]
    quadrature_points: usize,
    /// Trials for fitted constants.
    #[arg(long, global = true, default_value_t = 500)]
    trials: usize,
    /// Report destination (stdout when omitted).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Report body format: json, or csv where the command has a table.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a polynomial (or a matrix file) as a dynamical system.
    Classify {
        /// Polynomial text, e.g. "u^4 - u^3 - u^2 - u + 1".
        poly: Option<String>,
        /// JSON file with {"coeffs": […]} or {"matrix": [[…], …]}.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Build the central frame of a unit polynomial and export it.
    Frame {
        poly: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Inverse-orbit ε-density experiment.
    Density {
        #[arg(long)]
        poly: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        eps: f64,
        /// "practical" or "coupled".
        #[arg(long, default_value = "practical")]
        mode: String,
        /// Separation radius for practical mode.
        #[arg(long, default_value_t = 5.0)]
        r: f64,
        /// Set cardinality for practical mode.
        #[arg(long, default_value_t = 100)]
        k: usize,
        /// Worst-gap trace CSV destination (n,worst_gap).
        #[arg(long)]
        gaps_csv: Option<PathBuf>,
        #[arg(long, default_value_t = 1 << 17)]
        n_max: u64,
        /// Base point x0, comma-separated coordinates (default 0).
        #[arg(long)]
        x0: Option<String>,
        /// Dump the accumulated point cloud as CSV.
        #[arg(long)]
        points_csv: Option<PathBuf>,
    },
    /// Fit oscillatory constants: c₂ by default, c_a with --character.
    Oscillatory {
        /// Term count s (for c₂).
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Max frequency M (for c₂).
        #[arg(long, default_value_t = 10)]
        max_freq: u32,
        /// Character exponents "a1,a2,…" — switches to c_a fitting.
        #[arg(long)]
        character: Option<String>,
        /// Polynomial for the frame (required with --character).
        #[arg(long)]
        poly: Option<String>,
        /// Sweep CSV destination (norm,value,bound).
        #[arg(long)]
        sweep_csv: Option<PathBuf>,
        /// JSON sidecar cache for fitted constants.
        #[arg(long)]
        ca_cache: Option<PathBuf>,
    },
    /// Energy integral of a measure (or a synthetic separated set).
    Energy {
        /// Measure JSON {"support": [[…]], "weights": […]} on W⁽⁰⁾.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Polynomial for a synthetic uniform separated-set measure.
        #[arg(long)]
        poly: Option<String>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Sample an invariant family and diagnose the leaf-mass profile.
    Leafsim {
        #[arg(long)]
        poly: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// haar | orbit | periodic.
        #[arg(long, default_value = "haar")]
        kind: String,
        #[arg(long, default_value_t = 100_000)]
        count: usize,
        /// Central point for orbit sampling: "re,im[;re,im…]".
        #[arg(long)]
        w0: Option<String>,
        /// Numerators for periodic sampling: "1,0,0,0".
        #[arg(long)]
        numerators: Option<String>,
        #[arg(long)]
        denominator: Option<u64>,
        /// Base point of the profile (default 0).
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value_t = 0.05)]
        r_min: f64,
        #[arg(long, default_value_t = 0.5)]
        r_max: f64,
        #[arg(long, default_value_t = 8)]
        r_count: usize,
        #[arg(long, default_value_t = 0.02)]
        tube_eps: f64,
        /// Profile CSV destination (r,mass).
        #[arg(long)]
        profile_csv: Option<PathBuf>,
    },
    /// τ map: translate x by the lifted center of mass of a leaf measure.
    Tau {
        #[arg(long)]
        poly: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Leaf measure JSON on W⁽⁰⁾ coordinates.
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        x: Option<String>,
        /// Ball radius of the center-of-mass rule.
        #[arg(long, default_value_t = 1.0)]
        ball_radius: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format.as_str() {
        "json" => ReportFormat::Json,
        "csv" => ReportFormat::Csv,
        other => {
            eprintln!("leafdyn: unknown format '{other}' (expected json or csv)");
            return ExitCode::from(2);
        }
    };
    let cfg = RunConfig {
        seed: cli.seed,
        precision_bits: cli.precision_bits,
        points_budget: cli.points_budget,
        quadrature_points: cli.quadrature_points,
        trials: cli.trials,
        format,
        output: cli.output.clone(),
    };
    match dispatch(&cli, &cfg) {
        Ok(report) => match report.emit(cfg.output.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("leafdyn: {e}");
                ExitCode::from(e.exit_code)
            }
        },
        Err(e) => {
            eprintln!("leafdyn: {e}");
            ExitCode::from(e.exit_code)
        }
    }
}

fn base_config(cfg: &RunConfig) -> serde_json::Value {
    json!({
        "seed": cfg.seed,
        "precision_bits": cfg.precision_bits,
        "points_budget": cfg.points_budget,
        "quadrature_points": cfg.quadrature_points,
        "trials": cfg.trials,
        "format": cfg.format,
    })
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> CliResult<Emission> {
    match &cli.command {
        Command::Classify { poly, input } => {
            let mut config = base_config(cfg);
            config["command"] = json!("classify");
            config["poly"] = json!(poly);
            config["input"] = json!(input.as_ref().map(|p| p.display().to_string()));
            require_json(cfg, "classify")?;
            let parsed = read_classify_input(poly.as_deref(), input.as_deref())?;
            Ok(Emission::Report(run_classify(parsed, config)?))
        }
        Command::Frame { poly, input } => {
            let mut config = base_config(cfg);
            config["command"] = json!("frame");
            config["poly"] = json!(poly);
            require_json(cfg, "frame")?;
            let f = read_polynomial(poly.as_deref(), input.as_deref())?;
            Ok(Emission::Report(run_frame(cfg, &f, config)?))
        }
        Command::Density { poly, input, eps, mode, r, k, n_max, x0, points_csv, gaps_csv } => {
            let f = read_polynomial(poly.as_deref(), input.as_deref())?;
            let mode = match mode.as_str() {
                "practical" => Mode::Practical { r: *r, k: *k },
                "coupled" => Mode::Coupled,
                other => {
                    return Err(CliError {
                        message: format!("unknown density mode '{other}'"),
                        exit_code: 2,
                    })
                }
            };
            let mut config = base_config(cfg);
            config["command"] = json!("density");
            config["poly"] = json!(poly);
            config["eps"] = json!(eps);
            config["mode"] = json!(match mode {
                Mode::Practical { r, k } => format!("practical(r={r},k={k})"),
                Mode::Coupled => "coupled".to_string(),
            });
            config["n_max"] = json!(n_max);
            config["x0"] = json!(x0);
            run_density(
                cfg,
                &f,
                *eps,
                mode,
                *n_max,
                x0.as_deref(),
                points_csv.as_deref(),
                gaps_csv.as_deref(),
                config,
            )
        }
        Command::Oscillatory { s, max_freq, character, poly, sweep_csv, ca_cache } => {
            let mut config = base_config(cfg);
            config["command"] = json!("oscillatory");
            config["s"] = json!(s);
            config["max_freq"] = json!(max_freq);
            config["character"] = json!(character);
            config["poly"] = json!(poly);
            let parsed_poly = match poly {
                Some(text) => Some(read_polynomial(Some(text), None)?),
                None => None,
            };
            run_oscillatory(
                cfg,
                OscillatoryArgs {
                    s: *s,
                    max_freq: *max_freq,
                    character: character.as_deref(),
                    poly: parsed_poly,
                    sweep_csv: sweep_csv.as_deref(),
                    ca_cache: ca_cache.as_deref(),
                },
                config,
            )
        }
        Command::Energy { input, poly, r, k } => {
            let mut config = base_config(cfg);
            config["command"] = json!("energy");
            config["input"] = json!(input.as_ref().map(|p| p.display().to_string()));
            config["poly"] = json!(poly);
            config["r"] = json!(r);
            config["k"] = json!(k);
            let parsed_poly = match poly {
                Some(text) => Some(read_polynomial(Some(text), None)?),
                None => None,
            };
            require_json(cfg, "energy")?;
            Ok(Emission::Report(run_energy(
                cfg,
                EnergyArgs { measure: input.as_deref(), poly: parsed_poly, r: *r, k: *k },
                config,
            )?))
        }
        Command::Leafsim {
            poly,
            input,
            kind,
            count,
            w0,
            numerators,
            denominator,
            x,
            r_min,
            r_max,
            r_count,
            tube_eps,
            profile_csv,
        } => {
            let f = read_polynomial(poly.as_deref(), input.as_deref())?;
            let mut config = base_config(cfg);
            config["command"] = json!("leafsim");
            config["poly"] = json!(poly);
            config["kind"] = json!(kind);
            config["count"] = json!(count);
            config["w0"] = json!(w0);
            config["numerators"] = json!(numerators);
            config["denominator"] = json!(denominator);
            config["x"] = json!(x);
            config["r_min"] = json!(r_min);
            config["r_max"] = json!(r_max);
            config["r_count"] = json!(r_count);
            config["tube_eps"] = json!(tube_eps);
            run_leafsim(
                cfg,
                &f,
                LeafsimArgs {
                    kind,
                    count: *count,
                    w0: w0.as_deref(),
                    numerators: numerators.as_deref(),
                    denominator: *denominator,
                    x: x.as_deref(),
                    r_min: *r_min,
                    r_max: *r_max,
                    r_count: *r_count,
                    tube_eps: *tube_eps,
                    profile_csv: profile_csv.as_deref(),
                },
                config,
            )
        }
        Command::Tau { poly, input, measure, x, ball_radius } => {
            let f = read_polynomial(poly.as_deref(), input.as_deref())?;
            let mut config = base_config(cfg);
            config["command"] = json!("tau");
            config["poly"] = json!(poly);
            config["measure"] = json!(measure.display().to_string());
            config["x"] = json!(x);
            config["ball_radius"] = json!(ball_radius);
            require_json(cfg, "tau")?;
            Ok(Emission::Report(run_tau(cfg, &f, measure, x.as_deref(), *ball_radius, config)?))
        }
    }
}
