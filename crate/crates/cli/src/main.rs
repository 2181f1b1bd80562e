//! Command-line front end: spectrum queries, the level-crossing phase
//! diagram, the superradiant-QPT sweep, the analytic crossing lines and
//! the acceptance-check suite.
//!
//! Convention: scan subcommands fix γ = 1 as the energy unit and expose
//! only dimensionless ratios (Ω/γ, x = λ²/γω, ω/γ, g = λ/√(ωγ)); the
//! `spectrum` subcommand works with raw parameter values. Data (CSV) goes
//! to stdout or `--output`; diagnostics go to stderr. Exit codes:
//! 0 success, 1 failed validation, 2 configuration error, 3 numerical
//! failure or too many failed scan points.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qutrit_rabi::error::Error;
use qutrit_rabi::model::{self, ModelParams};
use qutrit_rabi::ops::Truncation;
use qutrit_rabi::scan::{self, GridAxis, TruncationPolicy};
use qutrit_rabi::spectra;
use qutrit_rabi::symmetry::{self, SectorLabel};
use qutrit_rabi::validate;

#[derive(Parser)]
#[command(name = "qutrit-rabi", version, about = "Two-qutrit quantum Rabi model: spectra, phase diagram, superradiant QPT scans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lowest eigenvalues of the full Hamiltonian or one symmetry sector.
    Spectrum(SpectrumArgs),
    /// Ground-state scan over (Omega/gamma, x = lambda^2/(gamma*omega)).
    PhaseDiagram(PhaseArgs),
    /// Ground-state sweep over the control parameter g = lambda/sqrt(omega*gamma).
    QptScan(QptArgs),
    /// Closed-form phase-boundary polylines (or the tri-critical points).
    CrossingLines(CrossingArgs),
    /// Run the acceptance-check suite and print a pass/fail table.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct WorkerOpt {
    /// Worker threads for grid points (default: logical cores).
    #[arg(long, env = "QUTRIT_RABI_WORKERS")]
    workers: Option<usize>,
}

impl WorkerOpt {
    fn resolve(&self) -> usize {
        self.workers.unwrap_or_else(|| {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(2)
        })
    }
}

#[derive(Args)]
struct SpectrumArgs {
    /// JSON parameter file (keys: omega1, omega2, gamma_x, gamma_y,
    /// gamma_z, omega_mode, lambda1, lambda2, n_max).
    #[arg(long, conflicts_with_all = ["preset", "omega", "gamma", "lambda", "omega_mode"])]
    params: Option<PathBuf>,

    /// Parameter preset: "level-crossing" or "qpt".
    #[arg(long, requires_all = ["omega", "gamma", "lambda", "omega_mode"])]
    preset: Option<String>,

    /// Qutrit frequency Omega (preset mode).
    #[arg(long)]
    omega: Option<f64>,
    /// Qutrit-qutrit coupling gamma (preset mode).
    #[arg(long)]
    gamma: Option<f64>,
    /// Qutrit-mode coupling lambda (preset mode).
    #[arg(long)]
    lambda: Option<f64>,
    /// Mode frequency omega (preset mode).
    #[arg(long)]
    omega_mode: Option<f64>,

    /// Fock cutoff override.
    #[arg(long)]
    n_max: Option<usize>,

    /// Sector: "full", "K=+1", "K=-1", or "m=-2".."m=+2".
    #[arg(long, default_value = "full")]
    sector: String,

    /// Number of lowest levels to print.
    #[arg(long, default_value_t = 10)]
    levels: usize,

    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PhaseArgs {
    /// Grid as "omega:min:max:count,x:min:max:count".
    #[arg(long, default_value = "omega:-1.2:1.2:61,x:0.001:0.5:61")]
    grid: String,

    /// Mode-to-coupling frequency ratio omega/gamma.
    #[arg(long, default_value_t = 1.0)]
    omega_over_gamma: f64,

    /// Fock cutoff.
    #[arg(long, default_value_t = 48)]
    n_max: usize,

    /// Energy-unit note recorded in the JSON sidecar.
    #[arg(long, default_value = "gamma")]
    unit: String,

    #[command(flatten)]
    workers: WorkerOpt,

    /// Output CSV path (stdout when omitted; the JSON sidecar is written
    /// next to it when given).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct QptArgs {
    /// g grid as "min:max:count".
    #[arg(long, default_value = "0.1:2.0:39")]
    g: String,

    /// Mode-to-coupling frequency ratio omega/gamma.
    #[arg(long, default_value_t = 1e-3)]
    omega_over_gamma: f64,

    /// Qutrit frequency ratio Omega/gamma.
    #[arg(long = "Omega-over-gamma", default_value_t = 1.0)]
    omega_q_over_gamma: f64,

    /// Symmetry-breaking bias on the fictitious qubit, units of gamma.
    #[arg(long, default_value_t = 1e-8)]
    bias: f64,

    /// Fock cutoff policy: "adaptive" or "fixed:N".
    #[arg(long, default_value = "adaptive")]
    truncation: String,

    /// Energy-unit note recorded in the JSON sidecar.
    #[arg(long, default_value = "gamma")]
    unit: String,

    #[command(flatten)]
    workers: WorkerOpt,

    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CrossingArgs {
    /// Lower end of the x range.
    #[arg(long, default_value_t = 0.0)]
    x_min: f64,
    /// Upper end of the x range.
    #[arg(long, default_value_t = 0.5)]
    x_max: f64,
    /// Samples per line.
    #[arg(long, default_value_t = 201)]
    samples: usize,
    /// Emit the tri-critical points instead of the polylines.
    #[arg(long)]
    triple_points: bool,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    workers: WorkerOpt,

    /// Run only these criteria (comma-separated ids, e.g. "1,2,5").
    #[arg(long)]
    criteria: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::PhaseDiagram(a) => cmd_phase_diagram(a),
        Command::QptScan(a) => cmd_qpt_scan(a),
        Command::CrossingLines(a) => cmd_crossing_lines(a),
        Command::Validate(a) => cmd_validate(a),
    };
    match code {
        Ok(c) => c,
        Err(CliError { exit, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(exit)
        }
    }
}

struct CliError {
    exit: u8,
    message: String,
}

fn config_err(message: impl Into<String>) -> CliError {
    CliError { exit: 2, message: message.into() }
}

fn numeric_err(e: Error) -> CliError {
    match e {
        Error::InvalidParam(_) | Error::UnknownLabel(_) | Error::ParamFile(_) | Error::Io(_) => {
            CliError { exit: 2, message: e.to_string() }
        }
        other => CliError { exit: 3, message: other.to_string() },
    }
}

fn emit(output: Option<&PathBuf>, csv: &str) -> Result<(), CliError> {
    match output {
        Some(path) => scan::write_atomic(path, csv).map_err(numeric_err),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------

fn load_spectrum_params(a: &SpectrumArgs) -> Result<(ModelParams, Truncation), CliError> {
    let (p, t) = match (&a.params, &a.preset) {
        (Some(path), None) => model::load_params_file(path).map_err(numeric_err)?,
        (None, Some(preset)) => {
            let (omega, gamma, lambda, omega_mode) = (
                a.omega.unwrap(),
                a.gamma.unwrap(),
                a.lambda.unwrap(),
                a.omega_mode.unwrap(),
            );
            let p = match preset.as_str() {
                "level-crossing" => model::preset_level_crossing(omega, gamma, lambda, omega_mode),
                "qpt" => model::preset_qpt(omega, gamma, lambda, omega_mode),
                other => return Err(config_err(format!("unknown preset `{other}`"))),
            }
            .map_err(numeric_err)?;
            let t = Truncation::new(a.n_max.unwrap_or(40)).map_err(numeric_err)?;
            (p, t)
        }
        _ => {
            return Err(config_err(
                "exactly one parameter source required: --params FILE or --preset NAME with --omega/--gamma/--lambda/--omega-mode",
            ))
        }
    };
    let t = match a.n_max {
        Some(n) => Truncation::new(n).map_err(numeric_err)?,
        None => t,
    };
    Ok((p, t))
}

fn cmd_spectrum(a: SpectrumArgs) -> Result<ExitCode, CliError> {
    let (p, t) = load_spectrum_params(&a)?;
    let h = model::build_full(&p, t).map_err(numeric_err)?;
    let block = match a.sector.as_str() {
        "full" => h,
        label => {
            let label: SectorLabel = label.parse().map_err(|e: Error| config_err(e.to_string()))?;
            if matches!(label, SectorLabel::M(_)) {
                symmetry::require_m_partition(&p).map_err(|e| config_err(e.to_string()))?;
            }
            let basis = symmetry::sector_basis(label, t).map_err(numeric_err)?;
            symmetry::project(&h, &basis).map_err(numeric_err)?
        }
    };
    let es = spectra::eigh(&block).map_err(numeric_err)?;
    let k = a.levels.min(es.len());
    let mut csv = String::from("index,energy,residual\n");
    for i in 0..k {
        csv.push_str(&format!(
            "{},{},{}\n",
            i,
            scan::fmt_g12(es.values[i]),
            scan::fmt_g12(es.residuals[i])
        ));
    }
    emit(a.output.as_ref(), &csv)?;
    eprintln!(
        "spectrum: dim {}, sector {}, lowest {} of {} levels",
        9 * (t.n_max + 1),
        a.sector,
        k,
        es.len()
    );
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------

fn parse_axis(part: &str) -> Result<GridAxis, CliError> {
    let fields: Vec<&str> = part.split(':').collect();
    if fields.len() != 4 {
        return Err(config_err(format!(
            "grid axis `{part}` must be name:min:max:count"
        )));
    }
    let min: f64 = fields[1].parse().map_err(|_| config_err("bad axis min"))?;
    let max: f64 = fields[2].parse().map_err(|_| config_err("bad axis max"))?;
    let count: usize = fields[3].parse().map_err(|_| config_err("bad axis count"))?;
    GridAxis::new(fields[0], min, max, count).map_err(|e| config_err(e.to_string()))
}

fn cmd_phase_diagram(a: PhaseArgs) -> Result<ExitCode, CliError> {
    let parts: Vec<&str> = a.grid.split(',').collect();
    if parts.len() != 2 {
        return Err(config_err("grid must be two axes: omega:..,x:.."));
    }
    let w_axis = parse_axis(parts[0])?;
    let x_axis = parse_axis(parts[1])?;
    let t = Truncation::new(a.n_max).map_err(numeric_err)?;
    let workers = a.workers.resolve();
    let mut scan = scan::scan_phase_diagram(&w_axis, &x_axis, a.omega_over_gamma, t, workers)
        .map_err(numeric_err)?;
    scan.provenance.unit = format!("energies in units of {}", a.unit);

    match &a.output {
        Some(path) => scan.write_output(path).map_err(numeric_err)?,
        None => print!("{}", scan.to_csv()),
    }

    let mut counts = std::collections::BTreeMap::new();
    for p in &scan.points {
        if let Some(m) = p.m_label {
            *counts.entry(m).or_insert(0usize) += 1;
        }
    }
    eprintln!(
        "phase-diagram: {} points in {:.1} s with {workers} workers; label counts {:?}",
        scan.points.len(),
        scan.provenance.wall_time_s,
        counts
    );
    let failed = scan.failed_fraction();
    if failed > 0.05 {
        return Err(CliError {
            exit: 3,
            message: format!("{:.1}% of grid points failed", 100.0 * failed),
        });
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_qpt_scan(a: QptArgs) -> Result<ExitCode, CliError> {
    let g_axis = parse_axis(&format!("g:{}", a.g))?;
    let policy = match a.truncation.as_str() {
        "adaptive" => TruncationPolicy::default(),
        other => match other.strip_prefix("fixed:") {
            Some(n) => TruncationPolicy::Fixed(
                n.parse().map_err(|_| config_err("bad fixed truncation"))?,
            ),
            None => return Err(config_err("truncation must be `adaptive` or `fixed:N`")),
        },
    };
    let workers = a.workers.resolve();
    let mut scan = scan::scan_qpt(
        &g_axis,
        a.omega_over_gamma,
        a.omega_q_over_gamma,
        policy,
        a.bias,
        workers,
    )
    .map_err(numeric_err)?;
    scan.provenance.unit = format!("energies in units of {}", a.unit);

    match &a.output {
        Some(path) => scan.write_output(path).map_err(numeric_err)?,
        None => print!("{}", scan.to_csv()),
    }

    let curve = scan.n_rescaled_curve();
    match scan::estimate_critical_point(&curve) {
        Ok(est) => eprintln!(
            "qpt-scan: {} points in {:.1} s with {workers} workers; estimated g* = {:.3}",
            scan.points.len(),
            scan.provenance.wall_time_s,
            est.g_star
        ),
        Err(e) => eprintln!(
            "qpt-scan: {} points in {:.1} s with {workers} workers; no g* estimate ({e})",
            scan.points.len(),
            scan.provenance.wall_time_s
        ),
    }
    let hm0_hosted = scan
        .points
        .iter()
        .filter(|p| p.host_block == scan::HostBlock::HM0)
        .count();
    if hm0_hosted > 0 {
        eprintln!(
            "qpt-scan: note: the m=0 block hosts the global ground at {hm0_hosted} points"
        );
    }
    let failed = scan.failed_fraction();
    if failed > 0.05 {
        return Err(CliError {
            exit: 3,
            message: format!("{:.1}% of scan points failed", 100.0 * failed),
        });
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_crossing_lines(a: CrossingArgs) -> Result<ExitCode, CliError> {
    if a.triple_points {
        let mut csv = String::from("omega_over_gamma,x,families\n");
        for tp in qutrit_rabi::analytic::triple_points() {
            csv.push_str(&format!(
                "{},{},{}\n",
                scan::fmt_g12(tp.omega_over_gamma),
                scan::fmt_g12(tp.x),
                tp.families.map(|f| f.name()).join("/")
            ));
        }
        emit(a.output.as_ref(), &csv)?;
        return Ok(ExitCode::SUCCESS);
    }
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // negated form rejects NaN
    if !(a.x_min < a.x_max) || a.samples < 2 {
        return Err(config_err("need x_min < x_max and samples >= 2"));
    }
    let mut csv = String::from("pair,x,omega_over_gamma\n");
    let step = (a.x_max - a.x_min) / (a.samples - 1) as f64;
    for line in qutrit_rabi::analytic::crossing_lines() {
        let name = format!("{}/{}", line.pair.0.name(), line.pair.1.name());
        for k in 0..a.samples {
            let x = a.x_min + step * k as f64;
            csv.push_str(&format!(
                "{},{},{}\n",
                name,
                scan::fmt_g12(x),
                scan::fmt_g12(line.omega_over_gamma(x))
            ));
        }
    }
    emit(a.output.as_ref(), &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(a: ValidateArgs) -> Result<ExitCode, CliError> {
    let workers = a.workers.resolve();
    let wanted: Option<Vec<usize>> = match &a.criteria {
        Some(list) => Some(
            list.split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| config_err("criteria must be comma-separated ids"))?,
        ),
        None => None,
    };

    let reports = run_criteria(workers, wanted.as_deref()).map_err(numeric_err)?;
    let mut all_pass = true;
    for r in &reports {
        println!("{}", r.summary_line());
        for d in &r.details {
            println!("{d}");
        }
        all_pass &= r.passed;
    }
    let n = reports.len();
    if all_pass {
        println!("all {n} criteria passed");
        Ok(ExitCode::SUCCESS)
    } else {
        let failed: Vec<String> = reports
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.id.to_string())
            .collect();
        println!("{} of {n} criteria failed: {}", failed.len(), failed.join(", "));
        Ok(ExitCode::from(1))
    }
}

fn run_criteria(
    workers: usize,
    wanted: Option<&[usize]>,
) -> Result<Vec<validate::CriterionReport>, Error> {
    let want = |id: usize| wanted.map(|w| w.contains(&id)).unwrap_or(true);
    let mut reports = Vec::new();
    if want(1) {
        reports.push(validate::criterion_1(workers));
    }
    if want(2) {
        reports.push(validate::criterion_2(workers));
    }
    if want(3) {
        reports.push(validate::criterion_3(workers));
    }
    if want(4) {
        reports.push(validate::criterion_4(workers));
    }
    if want(5) || want(6) {
        let phase = validate::default_phase_scan(workers)?;
        if want(5) {
            reports.push(validate::criterion_5(&phase));
        }
        if want(6) {
            reports.push(validate::criterion_6(&phase));
        }
    }
    if want(7) || want(8) || want(10) {
        let qpt = validate::default_qpt_scan(workers)?;
        if want(7) {
            reports.push(validate::criterion_7(&qpt));
        }
        if want(8) {
            reports.push(validate::criterion_8(&qpt));
        }
        if want(10) {
            reports.push(validate::criterion_10(&qpt));
        }
    }
    if want(9) {
        reports.push(validate::criterion_9(workers));
    }
    if want(11) {
        reports.push(validate::criterion_11());
    }
    reports.sort_by_key(|r| r.id);
    Ok(reports)
}
