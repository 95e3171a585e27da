//! Command-line front end for half-line NLS multi-soliton construction.
//!
//! Subcommands:
//!
//! * `solve`     — sample the dressed field on a grid and write CSV/JSON rows,
//! * `verify`    — run the full verification suite and emit a JSON report,
//! * `relations` — print predicted vs extracted mirror relations per soliton,
//! * `figures`   — shorthand: `solve` for a named preset configuration.
//!
//! Exit codes: 0 success, 1 I/O error, 2 configuration error,
//! 3 verification failure, 4 numeric-domain error.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use halfline_nls::boundary::build_boundary_chain_detuned;
use halfline_nls::grid::{evaluate_on_grid, GridSample};
use halfline_nls::presets::{figure_preset, PRESET_NAMES};
use halfline_nls::scattering::{extracted_mirror_relations, mirror_relations, wrap_angle};
use halfline_nls::verify::full_report_detuned;
use halfline_nls::{BoundaryCondition, Grid, SolitonParameters};
use serde::{Deserialize, Serialize};

const EXIT_IO: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

/// Pairing detune factor applied by `--break-pairing` (negative control).
const BREAK_PAIRING_SCALE: f64 = 1.01;

#[derive(Parser)]
#[command(
    name = "halfline-nls",
    version,
    about = "Exact multi-soliton solutions of focusing NLS on the half-line \
             with Dirichlet, Robin, or two-parameter integrable boundary \
             conditions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the dressed solution on a grid and write it as CSV or JSON.
    Solve(JobArgs),
    /// Run the verification suite and emit a JSON report (exit 0 iff all
    /// checks pass).
    Verify(JobArgs),
    /// Print the mirror relations (predicted vs chain-extracted) per soliton.
    Relations(JobArgs),
    /// Write the data file for a named preset (see --list for names).
    Figures {
        /// Preset name: fig-dir2, fig-new2, fig-new4, fig-new6.
        #[arg(id = "figure", value_name = "PRESET", required_unless_present = "list")]
        preset: Option<String>,
        /// List the available preset names and exit.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        args: JobArgs,
    },
}

#[derive(Args, Debug, Clone, Default)]
struct JobArgs {
    /// JSON job-configuration file (flags override its fields).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Start from a named preset configuration.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,

    /// Boundary kind: dirichlet | robin | new.
    #[arg(long, value_name = "KIND")]
    boundary: Option<String>,

    /// Robin/new boundary parameter alpha.
    #[arg(long, value_name = "REAL", allow_hyphen_values = true)]
    alpha: Option<f64>,

    /// New-boundary parameter beta (nonzero).
    #[arg(long, value_name = "REAL", allow_hyphen_values = true)]
    beta: Option<f64>,

    /// Soliton as "xi,eta,x1,phi1" (repeat per soliton; replaces any list
    /// from --preset/--config).
    #[arg(long = "soliton", value_name = "XI,ETA,X1,PHI1", allow_hyphen_values = true)]
    solitons: Vec<String>,

    #[arg(long, value_name = "REAL", allow_hyphen_values = true)]
    t_min: Option<f64>,
    #[arg(long, value_name = "REAL", allow_hyphen_values = true)]
    t_max: Option<f64>,
    /// Number of t samples (>= 2).
    #[arg(long, value_name = "N")]
    nt: Option<usize>,
    #[arg(long, value_name = "REAL", allow_hyphen_values = true)]
    x_min: Option<f64>,
    #[arg(long, value_name = "REAL", allow_hyphen_values = true)]
    x_max: Option<f64>,
    /// Number of x samples (>= 2).
    #[arg(long, value_name = "N")]
    nx: Option<usize>,

    /// Output file (stdout when omitted).
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Output format for solve/figures: csv | json.
    #[arg(long, value_name = "FMT")]
    format: Option<String>,

    /// Allow x_min < 0 (visualise the mirror soliton left of the boundary).
    #[arg(long)]
    full_line: bool,

    /// Seed for the randomized verification samples.
    #[arg(long, value_name = "N", default_value_t = 7)]
    seed: u64,

    /// Negative control: scale the mirror pairing ratio by 1.01 so boundary
    /// checks must fail.
    #[arg(long)]
    break_pairing: bool,
}

// ---------------------------------------------------------------------------
// JSON job configuration (schema-validated: unknown fields are rejected)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobConfig {
    boundary: BoundaryConfig,
    #[serde(default)]
    solitons: Vec<SolitonConfig>,
    grid: GridConfig,
    #[serde(default)]
    output: Option<OutputConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundaryConfig {
    kind: String,
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    beta: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolitonConfig {
    xi: f64,
    eta: f64,
    x1: f64,
    phi1: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridConfig {
    t_min: f64,
    t_max: f64,
    nt: usize,
    x_min: f64,
    x_max: f64,
    nx: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputConfig {
    #[serde(default)]
    format: Option<String>,
    #[serde(default)]
    path: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// Error-to-exit-code plumbing
// ---------------------------------------------------------------------------

#[derive(Debug)]
enum CliError {
    Io(std::io::Error),
    Config(String),
    Numeric(halfline_nls::Error),
    Verification,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => EXIT_IO,
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Verification => EXIT_VERIFICATION,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(e) => write!(f, "i/o: {e}"),
            CliError::Config(m) => write!(f, "configuration: {m}"),
            CliError::Numeric(e) => write!(f, "numeric domain: {e}"),
            CliError::Verification => write!(f, "verification checks failed"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Library errors that occur while constructing chains or evaluating fields
/// are numeric-domain failures (exit 4), distinct from config and I/O.
impl From<halfline_nls::Error> for CliError {
    fn from(e: halfline_nls::Error) -> Self {
        CliError::Numeric(e)
    }
}

fn config_err<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(msg.into()))
}

// ---------------------------------------------------------------------------
// Resolved job
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => config_err(format!("unknown output format {other:?} (use csv or json)")),
        }
    }
}

#[derive(Debug, Clone)]
struct Job {
    boundary: BoundaryCondition,
    solitons: Vec<SolitonParameters>,
    grid: Grid,
    format: OutputFormat,
    output: Option<PathBuf>,
    seed: u64,
    break_pairing: bool,
}

/// Merge preset -> config file -> flags (later layers win) and validate.
fn resolve_job(args: &JobArgs, forced_preset: Option<&str>) -> Result<Job, CliError> {
    let mut boundary: Option<BoundaryConfig> = None;
    let mut solitons: Vec<SolitonConfig> = Vec::new();
    let mut grid: Option<GridConfig> = None;
    let mut format: Option<String> = None;
    let mut output: Option<PathBuf> = None;

    if let Some(name) = forced_preset.or(args.preset.as_deref()) {
        let preset = figure_preset(name).ok_or_else(|| {
            CliError::Config(format!(
                "unknown preset {name:?}; available: {}",
                PRESET_NAMES.join(", ")
            ))
        })?;
        boundary = Some(boundary_to_config(&preset.boundary));
        solitons = preset
            .solitons
            .iter()
            .map(|s| SolitonConfig { xi: s.xi, eta: s.eta, x1: s.x1, phi1: s.phi1 })
            .collect();
        grid = Some(GridConfig {
            t_min: preset.grid.t_min,
            t_max: preset.grid.t_max,
            nt: preset.grid.nt,
            x_min: preset.grid.x_min,
            x_max: preset.grid.x_max,
            nx: preset.grid.nx,
        });
    }

    if let Some(path) = &args.config {
        let text = fs::read_to_string(path)?;
        let cfg: JobConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        boundary = Some(cfg.boundary);
        solitons = cfg.solitons;
        grid = Some(cfg.grid);
        if let Some(out) = cfg.output {
            format = out.format;
            output = out.path;
        }
    }

    // flag overlay
    let mut boundary = boundary.unwrap_or(BoundaryConfig {
        kind: String::new(),
        alpha: None,
        beta: None,
    });
    if let Some(kind) = &args.boundary {
        boundary.kind = kind.clone();
    }
    if let Some(a) = args.alpha {
        boundary.alpha = Some(a);
    }
    if let Some(b) = args.beta {
        boundary.beta = Some(b);
    }
    if !args.solitons.is_empty() {
        solitons = args
            .solitons
            .iter()
            .map(|s| parse_soliton_flag(s))
            .collect::<Result<_, _>>()?;
    }
    let mut grid = grid.unwrap_or(GridConfig {
        t_min: 0.0,
        t_max: 5.0,
        nt: 50,
        x_min: 0.0,
        x_max: 15.0,
        nx: 50,
    });
    if let Some(v) = args.t_min {
        grid.t_min = v;
    }
    if let Some(v) = args.t_max {
        grid.t_max = v;
    }
    if let Some(v) = args.nt {
        grid.nt = v;
    }
    if let Some(v) = args.x_min {
        grid.x_min = v;
    }
    if let Some(v) = args.x_max {
        grid.x_max = v;
    }
    if let Some(v) = args.nx {
        grid.nx = v;
    }
    if let Some(f) = &args.format {
        format = Some(f.clone());
    }
    if let Some(o) = &args.output {
        output = Some(o.clone());
    }

    // validate
    let bc = match boundary.kind.as_str() {
        "dirichlet" => BoundaryCondition::Dirichlet,
        "robin" => BoundaryCondition::Robin {
            alpha: boundary
                .alpha
                .ok_or_else(|| CliError::Config("robin boundary needs alpha".into()))?,
        },
        "new" => BoundaryCondition::New {
            alpha: boundary
                .alpha
                .ok_or_else(|| CliError::Config("new boundary needs alpha".into()))?,
            beta: boundary
                .beta
                .ok_or_else(|| CliError::Config("new boundary needs beta".into()))?,
        },
        "" => return config_err("no boundary given (use --preset, --config, or --boundary)"),
        other => {
            return config_err(format!(
                "unknown boundary kind {other:?} (use dirichlet, robin, or new)"
            ))
        }
    };
    bc.validate().map_err(|e| CliError::Config(e.to_string()))?;

    let solitons = solitons
        .iter()
        .map(|s| {
            SolitonParameters::new(s.xi, s.eta, s.x1, s.phi1)
                .map_err(|e| CliError::Config(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;

    if grid.x_min < 0.0 && !args.full_line {
        return config_err(format!(
            "x_min = {} is negative; pass --full-line to sample left of the boundary",
            grid.x_min
        ));
    }
    let grid = Grid::new(grid.t_min, grid.t_max, grid.nt, grid.x_min, grid.x_max, grid.nx)
        .map_err(|e| CliError::Config(e.to_string()))?;

    let format = match format {
        Some(f) => OutputFormat::parse(&f)?,
        None => OutputFormat::Csv,
    };

    Ok(Job {
        boundary: bc,
        solitons,
        grid,
        format,
        output,
        seed: args.seed,
        break_pairing: args.break_pairing,
    })
}

fn parse_soliton_flag(s: &str) -> Result<SolitonConfig, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return config_err(format!(
            "soliton {s:?} must be four comma-separated numbers: xi,eta,x1,phi1"
        ));
    }
    let mut vals = [0.0_f64; 4];
    for (v, p) in vals.iter_mut().zip(&parts) {
        *v = p
            .parse()
            .map_err(|_| CliError::Config(format!("soliton {s:?}: {p:?} is not a number")))?;
    }
    Ok(SolitonConfig { xi: vals[0], eta: vals[1], x1: vals[2], phi1: vals[3] })
}

fn boundary_to_config(bc: &BoundaryCondition) -> BoundaryConfig {
    match *bc {
        BoundaryCondition::Dirichlet => BoundaryConfig {
            kind: "dirichlet".into(),
            alpha: None,
            beta: None,
        },
        BoundaryCondition::Robin { alpha } => BoundaryConfig {
            kind: "robin".into(),
            alpha: Some(alpha),
            beta: None,
        },
        BoundaryCondition::New { alpha, beta } => BoundaryConfig {
            kind: "new".into(),
            alpha: Some(alpha),
            beta: Some(beta),
        },
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

/// Twelve significant digits, scientific notation.
fn fmt12(v: f64) -> String {
    format!("{v:.11e}")
}

fn write_output(path: Option<&PathBuf>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, contents)?,
        None => std::io::stdout().write_all(contents.as_bytes())?,
    }
    Ok(())
}

fn sample_rows(job: &Job) -> Result<Vec<GridSample>, CliError> {
    if job.solitons.is_empty() {
        // zero seed with no poles: the field is identically zero
        let mut rows = Vec::with_capacity(job.grid.nt * job.grid.nx);
        for p in job.grid.points() {
            rows.push(GridSample { t: p.t, x: p.x, u: halfline_nls::complex2::ZERO });
        }
        return Ok(rows);
    }
    let scale = if job.break_pairing { BREAK_PAIRING_SCALE } else { 1.0 };
    let chain = build_boundary_chain_detuned(&job.boundary, &job.solitons, scale)?;
    Ok(evaluate_on_grid(&chain, &job.grid)?)
}

fn cmd_solve(job: &Job) -> Result<(), CliError> {
    let rows = sample_rows(job)?;
    let text = match job.format {
        OutputFormat::Csv => {
            let mut out = String::with_capacity(rows.len() * 80 + 32);
            out.push_str("t,x,re_u,im_u,abs_u\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    fmt12(r.t),
                    fmt12(r.x),
                    fmt12(r.u.re),
                    fmt12(r.u.im),
                    fmt12(r.u.norm())
                );
            }
            out
        }
        OutputFormat::Json => {
            let doc = serde_json::json!({
                "boundary": boundary_to_config(&job.boundary),
                "solitons": job.solitons.iter().map(|s| serde_json::json!({
                    "xi": s.xi, "eta": s.eta, "x1": s.x1, "phi1": s.phi1,
                })).collect::<Vec<_>>(),
                "grid": {
                    "t_min": job.grid.t_min, "t_max": job.grid.t_max, "nt": job.grid.nt,
                    "x_min": job.grid.x_min, "x_max": job.grid.x_max, "nx": job.grid.nx,
                },
                "rows": rows.iter().map(|r| serde_json::json!({
                    "t": r.t, "x": r.x,
                    "re_u": r.u.re, "im_u": r.u.im, "abs_u": r.u.norm(),
                })).collect::<Vec<_>>(),
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("valid json");
            s.push('\n');
            s
        }
    };
    write_output(job.output.as_ref(), &text)
}

fn cmd_verify(job: &Job) -> Result<(), CliError> {
    if job.solitons.is_empty() {
        return config_err("verify needs at least one soliton");
    }
    let scale = if job.break_pairing { BREAK_PAIRING_SCALE } else { 1.0 };
    let report =
        full_report_detuned(&job.boundary, &job.solitons, &job.grid, job.seed, scale)?;
    let mut text = serde_json::to_string_pretty(&report.to_json()).expect("valid json");
    text.push('\n');
    write_output(job.output.as_ref(), &text)?;
    if report.all_pass() {
        Ok(())
    } else {
        Err(CliError::Verification)
    }
}

fn cmd_relations(job: &Job) -> Result<(), CliError> {
    if job.solitons.is_empty() {
        return config_err("relations needs at least one soliton");
    }
    let predicted = mirror_relations(&job.boundary, &job.solitons)?;
    let extracted = extracted_mirror_relations(&job.boundary, &job.solitons)?;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>3}  {:>22}  {:>22}  {:>10}",
        "j", "predicted", "extracted", "difference"
    );
    for (j, (s, (p, e))) in job
        .solitons
        .iter()
        .zip(predicted.iter().zip(extracted.iter()))
        .enumerate()
    {
        let xhat_p = p.x_sum - s.x1;
        let xhat_e = e.x_sum - s.x1;
        let phihat_p = wrap_angle(s.phi1 - p.phi_diff);
        let phihat_e = wrap_angle(s.phi1 - e.phi_diff);
        let dw = (p.weight_product - e.weight_product).norm();
        let _ = writeln!(
            out,
            "{j:>3}  soliton xi={} eta={} x1={} phi1={}",
            s.xi, s.eta, s.x1, s.phi1
        );
        let _ = writeln!(
            out,
            "     mirror centre x^_{j}    {:>22.15}  {:>22.15}  {:>10.3e}",
            xhat_p,
            xhat_e,
            (xhat_p - xhat_e).abs()
        );
        let _ = writeln!(
            out,
            "     mirror phase  phi^_{j}  {:>22.15}  {:>22.15}  {:>10.3e}",
            phihat_p,
            phihat_e,
            wrap_angle(phihat_p - phihat_e).abs()
        );
        let _ = writeln!(
            out,
            "     weight product C*C^  {:>+.15e}{:+.15e}i  {:>+.15e}{:+.15e}i  {:>10.3e}",
            p.weight_product.re,
            p.weight_product.im,
            e.weight_product.re,
            e.weight_product.im,
            dw
        );
    }
    write_output(job.output.as_ref(), &out)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Solve(args) => cmd_solve(&resolve_job(args, None)?),
        Command::Verify(args) => cmd_verify(&resolve_job(args, None)?),
        Command::Relations(args) => cmd_relations(&resolve_job(args, None)?),
        Command::Figures { preset, list, args } => {
            if *list {
                for name in halfline_nls::presets::PRESET_NAMES {
                    println!("{name}");
                }
                return Ok(());
            }
            let preset = preset.as_deref().expect("required unless --list");
            let mut job = resolve_job(args, Some(preset))?;
            if job.output.is_none() {
                let ext = match job.format {
                    OutputFormat::Csv => "csv",
                    OutputFormat::Json => "json",
                };
                job.output = Some(PathBuf::from(format!("{preset}.{ext}")));
            }
            cmd_solve(&job)?;
            eprintln!(
                "wrote {}",
                job.output.as_ref().expect("set above").display()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
