//! The `qutrit-dsd` command-line front end.
//!
//! Subcommands write CSV files (one header row, `t` first for time series,
//! 12 significant digits, `none` for missing times) and print a
//! `key = value` summary on standard output. Warnings go to standard error.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::dsd::{classify, sample_trajectory_with_tol, DsdReport, Trajectory, TrajectoryType};
use crate::dynamics::DecayParams;
use crate::error::Error;
use crate::measures::criteria_sample;
use crate::states::{horodecki_state, horodecki_state_rotated, isotropic_state, parse_density_matrix, DensityMatrix};

/// Reference decay-rate ratio `gamma_u / gamma_e`.
pub const REFERENCE_GAMMA_RATIO: f64 = 0.5;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;
pub const EXIT_IO: i32 = 5;
pub const EXIT_NO_CONVERGENCE: i32 = 6;
pub const EXIT_NUMERIC: i32 = 7;

#[derive(Debug, Parser)]
#[command(name = "qutrit-dsd", version, about = "Entanglement dynamics of two qutrits under amplitude damping")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Negativity and CCNR score for the Horodecki state at alpha = 4.2.
    Figure3(FigureArgs),
    /// Negativity and CCNR score for the Horodecki state at alpha = 4.5.
    Figure4(FigureArgs),
    /// Three smallest partial-transpose eigenvalues for the rotated state at alpha = 4.2.
    Figure5(FigureArgs),
    /// Death times and trajectory type for a list of family parameters.
    ScanAlpha(ScanArgs),
    /// Static criteria and trajectory report for a density matrix read from a file.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DynamicsArgs {
    /// gamma_u / gamma_e.
    #[arg(long)]
    pub gamma_ratio: Option<f64>,
    /// Horizon in units of 1/gamma_e.
    #[arg(long, default_value_t = 20.0)]
    pub t_max: f64,
    /// Number of CSV rows (uniform grid including both ends).
    #[arg(long, default_value_t = 2001)]
    pub n_points: usize,
    /// Zero threshold for partial-transpose eigenvalues.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    /// Family parameter; defaults to the figure's reference value.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Use the locally rotated family.
    #[arg(long)]
    pub rotated: bool,
    /// CSV path [default: <command>.csv]
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Horodecki,
    Isotropic,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// Comma-separated family parameters (alpha, or p for the isotropic family).
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub alphas: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Family::Horodecki)]
    pub family: Family,
    /// Use the locally rotated family.
    #[arg(long)]
    pub rotated: bool,
    /// CSV path [default: <command>.csv]
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Density matrix in the text format (`dim 9` then one row per line).
    #[arg(long)]
    pub input: PathBuf,
    /// Optional trajectory CSV.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Figure3,
    Figure4,
    Figure5,
    ScanAlpha,
    Analyze,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Figure3 => "figure3",
            CommandKind::Figure4 => "figure4",
            CommandKind::Figure5 => "figure5",
            CommandKind::ScanAlpha => "scan-alpha",
            CommandKind::Analyze => "analyze",
        }
    }
}

/// Validated settings shared by all subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub alpha: Option<f64>,
    pub gamma_ratio: f64,
    pub t_max: f64,
    pub n_points: usize,
    pub tol: f64,
    pub input_path: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    pub rotated: bool,
    pub family: Family,
}

impl RunConfig {
    fn from_parts(
        command: CommandKind,
        alpha: Option<f64>,
        rotated: bool,
        family: Family,
        input_path: Option<PathBuf>,
        output_path: Option<PathBuf>,
        dynamics: &DynamicsArgs,
    ) -> Result<Self, CliError> {
        let cfg = RunConfig {
            command,
            alpha,
            gamma_ratio: dynamics.gamma_ratio.unwrap_or(REFERENCE_GAMMA_RATIO),
            t_max: dynamics.t_max,
            n_points: dynamics.n_points,
            tol: dynamics.tol,
            input_path,
            output_path,
            rotated,
            family,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Core(Error::InvalidArgument(msg)));
        if !(self.gamma_ratio >= 0.0 && self.gamma_ratio.is_finite()) {
            return bad(format!("--gamma-ratio must be >= 0, got {}", self.gamma_ratio));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return bad(format!("--t-max must be positive, got {}", self.t_max));
        }
        if self.n_points < 2 {
            return bad(format!("--n-points must be at least 2, got {}", self.n_points));
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return bad(format!("--tol must be >= 0, got {}", self.tol));
        }
        if self.rotated && self.family == Family::Isotropic {
            return bad("--rotated applies to the horodecki family only".into());
        }
        Ok(())
    }

    pub fn params(&self) -> DecayParams {
        DecayParams::from_ratio(self.gamma_ratio).expect("ratio validated")
    }

    fn output_or_default(&self) -> PathBuf {
        self.output_path
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("{}.csv", self.command.name())))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot {action} {path}: {source}")]
    Io {
        action: &'static str,
        path: PathBuf,
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Core(e) => match e {
                Error::Parse { .. } => EXIT_PARSE,
                Error::InvalidState { .. }
                | Error::NotHermitian { .. }
                | Error::NotSquare { .. }
                | Error::DimensionMismatch { .. }
                | Error::NonFinite { .. }
                | Error::AlphaOutOfRange(_)
                | Error::POutOfRange(_)
                | Error::InvalidRates(_)
                | Error::InvalidArgument(_) => EXIT_VALIDATION,
                Error::NoConvergence { .. } => EXIT_NO_CONVERGENCE,
                Error::NotUnitary { .. } | Error::DegenerateRates | Error::AccuracyLoss(_) => EXIT_NUMERIC,
            },
        }
    }
}

fn fmt_num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

fn fmt_time(t: Option<f64>) -> String {
    t.map_or_else(|| "none".to_string(), fmt_num)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        action: "write",
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: &mut dyn Write, key: &str, value: impl std::fmt::Display) -> Result<(), CliError> {
    writeln!(out, "{key} = {value}").map_err(|source| CliError::Io {
        action: "write to",
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn emit_report(out: &mut dyn Write, report: &DsdReport) -> Result<(), CliError> {
    emit(out, "horizon", fmt_num(report.horizon))?;
    emit(out, "t_N", fmt_time(report.t_n))?;
    emit(out, "t_R", fmt_time(report.t_r))?;
    let window = report
        .window
        .map_or_else(|| "none".to_string(), |(a, b)| format!("{},{}", fmt_num(a), fmt_num(b)));
    emit(out, "window", window)?;
    emit(out, "trajectory_type", report.trajectory_type)?;
    emit(out, "initially_ppt", report.initially_ppt)?;
    emit(out, "entanglement_after_tN_unknown", report.entanglement_after_tn_unknown)?;
    emit(out, "non_monotone", report.non_monotone)
}

/// CSV of `t, negativity, ccnr_score`.
pub fn criteria_csv(traj: &Trajectory) -> String {
    let mut s = String::from("t,negativity,ccnr_score\n");
    for (t, sample) in traj.times.iter().zip(&traj.samples) {
        let _ = writeln!(s, "{},{},{}", fmt_num(*t), fmt_num(sample.negativity), fmt_num(sample.ccnr_score));
    }
    s
}

/// CSV of `t, eig1, eig2, eig3`: the three smallest partial-transpose
/// eigenvalues, ascending.
pub fn eigenvalue_csv(traj: &Trajectory) -> String {
    let mut s = String::from("t,eig1,eig2,eig3\n");
    for (t, sample) in traj.times.iter().zip(&traj.samples) {
        let e = &sample.pt_eigenvalues;
        let _ = writeln!(s, "{},{},{},{}", fmt_num(*t), fmt_num(e[0]), fmt_num(e[1]), fmt_num(e[2]));
    }
    s
}

fn horodecki(alpha: f64, rotated: bool) -> Result<DensityMatrix, Error> {
    if rotated {
        horodecki_state_rotated(alpha)
    } else {
        horodecki_state(alpha)
    }
}

/// Reproduces one of the three reference figures.
pub fn run_figure(which: u8, cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let (default_alpha, default_rotated) = match which {
        3 => (4.2, false),
        4 => (4.5, false),
        5 => (4.2, true),
        _ => return Err(Error::InvalidArgument(format!("no figure {which}")).into()),
    };
    let alpha = cfg.alpha.unwrap_or(default_alpha);
    let rotated = cfg.rotated || default_rotated;

    let mut deviations = Vec::new();
    if alpha != default_alpha {
        deviations.push(format!("alpha = {alpha} (reference {default_alpha})"));
    }
    if cfg.gamma_ratio != REFERENCE_GAMMA_RATIO {
        deviations.push(format!("gamma_ratio = {} (reference {REFERENCE_GAMMA_RATIO})", cfg.gamma_ratio));
    }
    if rotated != default_rotated {
        deviations.push("rotated family (reference: unrotated)".to_string());
    }
    if !deviations.is_empty() {
        let _ = writeln!(err, "warning: non-reference setup: {}", deviations.join(", "));
    }

    let rho0 = horodecki(alpha, rotated)?;
    let params = cfg.params();
    let traj = sample_trajectory_with_tol(&rho0, &params, cfg.t_max, cfg.n_points, cfg.tol)?;
    let report = classify(&rho0, &params, cfg.t_max)?;
    let csv = if which == 5 {
        eigenvalue_csv(&traj)
    } else {
        criteria_csv(&traj)
    };
    let path = cfg.output_or_default();
    write_file(&path, &csv)?;

    emit(out, "command", cfg.command.name())?;
    emit(out, "family", if rotated { "horodecki-rotated" } else { "horodecki" })?;
    emit(out, "alpha", alpha)?;
    emit(out, "gamma_ratio", cfg.gamma_ratio)?;
    emit(out, "n_points", cfg.n_points)?;
    emit_report(out, &report)?;
    if which == 5 {
        let negative = traj.samples.iter().filter(|s| s.pt_eigenvalues[0] < 0.0).count();
        emit(out, "eig1_negative_rows", format!("{negative}/{}", traj.len()))?;
    }
    if let (Some(tn), Some(tr)) = (report.t_n, report.t_r) {
        if tr < tn {
            emit(out, "note", "t_R < t_N: realignment stops detecting entanglement while the state is still NPT")?;
        }
    }
    emit(out, "output", path.display())
}

/// One row per family parameter: death times and trajectory type.
pub fn run_scan_alpha(cfg: &RunConfig, alphas: &[f64], out: &mut dyn Write) -> Result<(), CliError> {
    let params = cfg.params();
    let rows = alphas
        .par_iter()
        .map(|&a| {
            let rho0 = match cfg.family {
                Family::Horodecki => horodecki(a, cfg.rotated)?,
                Family::Isotropic => isotropic_state(a)?,
            };
            classify(&rho0, &params, cfg.t_max)
        })
        .collect::<Result<Vec<_>, Error>>()?;

    let column = match cfg.family {
        Family::Horodecki => "alpha",
        Family::Isotropic => "p",
    };
    let mut csv = format!("{column},t_N,t_R,trajectory_type,note\n");
    for (a, report) in alphas.iter().zip(&rows) {
        let note = if report.initially_ppt { "initially PPT" } else { "" };
        let _ = writeln!(
            csv,
            "{},{},{},{},{note}",
            fmt_num(*a),
            fmt_time(report.t_n),
            fmt_time(report.t_r),
            report.trajectory_type
        );
    }
    let path = cfg.output_or_default();
    write_file(&path, &csv)?;

    emit(out, "command", cfg.command.name())?;
    let family = match (cfg.family, cfg.rotated) {
        (Family::Isotropic, _) => "isotropic",
        (Family::Horodecki, true) => "horodecki-rotated",
        (Family::Horodecki, false) => "horodecki",
    };
    emit(out, "family", family)?;
    emit(out, "gamma_ratio", cfg.gamma_ratio)?;
    emit(out, "horizon", fmt_num(cfg.t_max))?;
    emit(out, "rows", rows.len())?;
    for ty in [TrajectoryType::NptForever, TrajectoryType::EsdNoDsd, TrajectoryType::DsdThenUndetected] {
        let n = rows.iter().filter(|r| r.trajectory_type == ty).count();
        emit(out, &format!("count_{ty}"), n)?;
    }
    emit(out, "output", path.display())
}

/// Static criteria plus the trajectory report for a state read from disk.
pub fn run_analyze(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let path = cfg
        .input_path
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("--input is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        action: "read",
        path: path.clone(),
        source,
    })?;
    let rho0 = parse_density_matrix(&text)?;
    let sample = criteria_sample(&rho0, cfg.tol)?;
    let params = cfg.params();
    let report = classify(&rho0, &params, cfg.t_max)?;

    emit(out, "command", cfg.command.name())?;
    emit(out, "input", path.display())?;
    emit(out, "negativity", fmt_num(sample.negativity))?;
    emit(out, "ccnr_score", fmt_num(sample.ccnr_score))?;
    emit(out, "pt_min_eigenvalue", fmt_num(sample.pt_min_eigenvalue))?;
    emit(out, "ppt", sample.is_ppt())?;
    emit(out, "verdict", sample.verdict())?;
    emit(out, "gamma_ratio", cfg.gamma_ratio)?;
    emit_report(out, &report)?;

    if let Some(csv_path) = &cfg.output_path {
        let traj = sample_trajectory_with_tol(&rho0, &params, cfg.t_max, cfg.n_points, cfg.tol)?;
        write_file(csv_path, &criteria_csv(&traj))?;
        emit(out, "output", csv_path.display())?;
    }
    Ok(())
}

/// Dispatches a parsed command line.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Figure3(a) => figure(3, CommandKind::Figure3, a, out, err),
        Command::Figure4(a) => figure(4, CommandKind::Figure4, a, out, err),
        Command::Figure5(a) => figure(5, CommandKind::Figure5, a, out, err),
        Command::ScanAlpha(a) => {
            let cfg = RunConfig::from_parts(CommandKind::ScanAlpha, None, a.rotated, a.family, None, a.output, &a.dynamics)?;
            run_scan_alpha(&cfg, &a.alphas, out)
        }
        Command::Analyze(a) => {
            let cfg = RunConfig::from_parts(
                CommandKind::Analyze,
                None,
                false,
                Family::Horodecki,
                Some(a.input),
                a.output,
                &a.dynamics,
            )?;
            run_analyze(&cfg, out)
        }
    }
}

fn figure(which: u8, kind: CommandKind, a: FigureArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let cfg = RunConfig::from_parts(kind, a.alpha, a.rotated, Family::Horodecki, None, a.output, &a.dynamics)?;
    run_figure(which, &cfg, out, err)
}

/// Parses `args`, runs, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = io::stdout();
    let stderr = io::stderr();
    match run(cli, &mut stdout.lock(), &mut stderr.lock()) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(io::stderr(), "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting_is_fixed() {
        assert_eq!(fmt_num(0.182561741410), "1.82561741410e-1");
        assert_eq!(fmt_num(-0.0), "0.00000000000e0");
        assert_eq!(fmt_num(20.0), "2.00000000000e1");
        assert_eq!(fmt_time(None), "none");
    }

    #[test]
    fn exit_codes_are_distinct() {
        let parse = CliError::Core(Error::Parse {
            line: 1,
            column: 1,
            message: String::new(),
        });
        let invalid = CliError::Core(Error::InvalidState {
            invariant: "trace",
            value: 0.9,
        });
        let io = CliError::Io {
            action: "read",
            path: PathBuf::from("x"),
            source: io::Error::from(io::ErrorKind::NotFound),
        };
        let conv = CliError::Core(Error::NoConvergence { sweeps: 100 });
        let codes = [parse.exit_code(), invalid.exit_code(), io.exit_code(), conv.exit_code()];
        assert_eq!(codes, [EXIT_PARSE, EXIT_VALIDATION, EXIT_IO, EXIT_NO_CONVERGENCE]);
    }

    #[test]
    fn config_validation() {
        let dynamics = DynamicsArgs {
            gamma_ratio: Some(-1.0),
            t_max: 20.0,
            n_points: 2001,
            tol: 1e-10,
        };
        let r = RunConfig::from_parts(CommandKind::Figure3, None, false, Family::Horodecki, None, None, &dynamics);
        assert!(matches!(r, Err(CliError::Core(Error::InvalidArgument(_)))));
        let dynamics = DynamicsArgs {
            gamma_ratio: None,
            n_points: 1,
            ..dynamics
        };
        let r = RunConfig::from_parts(CommandKind::Figure3, None, false, Family::Horodecki, None, None, &dynamics);
        assert!(r.is_err());
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
