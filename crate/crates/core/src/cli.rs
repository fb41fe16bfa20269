//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a physics invariant check fails, 2 on
//! invalid arguments.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{
    bipartite_entanglement, ebit_accounting, mutual_information, ppt_min_eigenvalue, report_for,
    EbitAccounting, LogBase, PairClass,
};
use crate::linalg::{haar_random_qubit, partial_trace, Label, C64};
use crate::protocol::{
    build_telecloning_state, reconstruct_secret, run_with_port, BellOutcome, OutcomePolicy,
};
use crate::{m_cap, Error};

/// Largest allowed `|a|^2 + |b|^2 - 1` before an input is rejected rather than renormalized.
pub const INPUT_RENORM_TOL: f64 = 1e-6;
/// Clone fidelities further than this from the optimum fail the run.
pub const FIDELITY_CHECK_TOL: f64 = 1e-8;
/// Pair matrices further than this from their closed forms fail the analysis.
pub const MATRIX_CHECK_TOL: f64 = 1e-10;
/// Secret-sharing round trips below `1 - tol` fail.
pub const ROUND_TRIP_TOL: f64 = 1e-9;

/// Mixed into the seed for outcome sampling so it does not reuse the input draw.
const OUTCOME_STREAM: u64 = 0x9E37_79B9_7F4A_7C15;

pub const SWEEP_HEADER: &str = "m,gamma_theory,gamma_max_abs_err,entropy_bits,min_pt_eig_opposite,mi_same_side_bits,ebits_teleclone,ebits_clone_teleport,ebits_port_flexible";

#[derive(Debug, Parser)]
#[command(name = "teleclone", version, about = "Simulate 1 -> M quantum telecloning")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one telecloning instance and report the clone fidelities.
    Run(RunConfig),
    /// Entanglement structure of the telecloning state.
    Analyze(RunConfig),
    /// One CSV row of diagnostics per copy count 1..=m-max.
    Sweep(SweepConfig),
    /// Telecloning followed by reconstruction from ancillas and clones.
    SecretShare(RunConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Number of copies.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// `re_a,im_a,re_b,im_b`, or one of zero, one, plus, random.
    #[arg(long, default_value = "random")]
    pub input: String,
    /// Forced Bell outcome (phi+, phi-, psi+, psi-) or `sample`.
    #[arg(long, default_value = "sample")]
    pub outcome: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Whether ancilla holders apply the Pauli correction too.
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    pub correct_ancilla: bool,
    /// Qubit measured together with the input (P, A1.., C1..).
    #[arg(long, default_value = "P")]
    pub port: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepConfig {
    #[arg(long, default_value_t = 6)]
    pub m_max: usize,
    /// Seed of the random input used for the fidelity column.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Physics(#[from] Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Invariant(_) => 1,
            CliError::Physics(Error::CopiesOutOfRange { .. })
            | CliError::Physics(Error::UnknownLabel(_))
            | CliError::Physics(Error::NotNormalized(_)) => 2,
            CliError::Physics(_) | CliError::Io(_) => 1,
        }
    }
}

/// Parses `re,im,re,im` or a preset. Inputs within [`INPUT_RENORM_TOL`] of
/// unit norm are renormalized.
pub fn parse_input(text: &str, seed: u64) -> Result<(C64, C64), CliError> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match text.trim() {
        "zero" => return Ok((C64::new(1.0, 0.0), C64::new(0.0, 0.0))),
        "one" => return Ok((C64::new(0.0, 0.0), C64::new(1.0, 0.0))),
        "plus" => return Ok((C64::new(h, 0.0), C64::new(h, 0.0))),
        "random" => {
            let s = haar_random_qubit(seed);
            return Ok((s.amplitudes()[0], s.amplitudes()[1]));
        }
        _ => {}
    }
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("input `{text}`: {e}")))?;
    let [ar, ai, br, bi] = parts[..] else {
        return Err(CliError::Usage(format!(
            "input `{text}` needs four comma-separated reals or a preset"
        )));
    };
    let (a, b) = (C64::new(ar, ai), C64::new(br, bi));
    let norm2 = a.norm_sqr() + b.norm_sqr();
    if !norm2.is_finite() || (norm2 - 1.0).abs() > INPUT_RENORM_TOL {
        return Err(CliError::Usage(format!(
            "input `{text}` has |a|^2 + |b|^2 = {norm2}, not 1"
        )));
    }
    let norm = norm2.sqrt();
    Ok((a / norm, b / norm))
}

pub fn parse_policy(outcome: &str, seed: u64) -> Result<OutcomePolicy, CliError> {
    if outcome.trim().eq_ignore_ascii_case("sample") {
        return Ok(OutcomePolicy::Sampled(seed ^ OUTCOME_STREAM));
    }
    outcome
        .parse::<BellOutcome>()
        .map(OutcomePolicy::Forced)
        .map_err(CliError::Usage)
}

fn check_m(m: usize, min: usize) -> Result<(), CliError> {
    let cap = m_cap();
    if m < min || m > cap {
        return Err(CliError::Usage(format!("m = {m} outside [{min}, {cap}]")));
    }
    Ok(())
}

fn require_json(format: Format, command: &str) -> Result<(), CliError> {
    if format != Format::Json {
        return Err(CliError::Usage(format!("{command} only supports --format json")));
    }
    Ok(())
}

fn amplitude_list(a: C64, b: C64) -> [f64; 4] {
    [a.re, a.im, b.re, b.im]
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub m: usize,
    pub input: [f64; 4],
    pub outcome: BellOutcome,
    pub probability: f64,
    pub clone_fidelity_theory: f64,
    pub clone_fidelities: Vec<f64>,
    pub max_abs_error: f64,
    pub seed: u64,
}

pub fn cmd_run(cfg: &RunConfig) -> Result<RunReport, CliError> {
    require_json(cfg.format, "run")?;
    check_m(cfg.m, 1)?;
    let (a, b) = parse_input(&cfg.input, cfg.seed)?;
    let policy = parse_policy(&cfg.outcome, cfg.seed)?;
    let port: Label = cfg.port.parse().map_err(CliError::Usage)?;
    let resource = build_telecloning_state(cfg.m)?;
    let t = run_with_port(&resource, port, a, b, policy, cfg.correct_ancilla)?;
    let report = RunReport {
        m: cfg.m,
        input: amplitude_list(a, b),
        outcome: t.outcome,
        probability: t.outcome_probability,
        clone_fidelity_theory: t.theory_fidelity(),
        clone_fidelities: t.clone_fidelities.clone(),
        max_abs_error: t.max_fidelity_error(),
        seed: cfg.seed,
    };
    if report.max_abs_error > FIDELITY_CHECK_TOL {
        return Err(CliError::Invariant(format!(
            "clone fidelity deviates from {} by {:e}",
            report.clone_fidelity_theory, report.max_abs_error
        )));
    }
    Ok(report)
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub m: usize,
    pub total_entanglement_bits: f64,
    pub schmidt_coefficients: Vec<f64>,
    pub min_pt_eigenvalue_opposite: f64,
    pub min_pt_eigenvalue_same: f64,
    pub mi_same_side_bits: f64,
    pub pair_class_opposite: PairClass,
    pub pair_class_same: PairClass,
    pub ebits: EbitAccounting,
    pub max_deviation: f64,
}

pub fn cmd_analyze(cfg: &RunConfig) -> Result<AnalyzeReport, CliError> {
    require_json(cfg.format, "analyze")?;
    check_m(cfg.m, 2)?;
    let report = report_for(&build_telecloning_state(cfg.m)?)?;
    if report.max_deviation > MATRIX_CHECK_TOL {
        return Err(CliError::Invariant(format!(
            "pair matrices deviate from closed forms by {:e}",
            report.max_deviation
        )));
    }
    Ok(AnalyzeReport {
        m: report.m,
        total_entanglement_bits: report.total_entanglement_bits,
        schmidt_coefficients: report.schmidt_coefficients,
        min_pt_eigenvalue_opposite: report.pair_class_opposite.min_pt_eigenvalue,
        min_pt_eigenvalue_same: report.pair_class_same.min_pt_eigenvalue,
        mi_same_side_bits: report.pair_class_same.mutual_information_bits,
        pair_class_opposite: report.pair_class_opposite,
        pair_class_same: report.pair_class_same,
        ebits: report.ebits,
        max_deviation: report.max_deviation,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub m: usize,
    pub gamma_theory: f64,
    pub gamma_max_abs_err: f64,
    pub entropy_bits: f64,
    pub min_pt_eig_opposite: f64,
    /// Undefined (NaN) for a single copy, which has no same-side pair.
    pub mi_same_side_bits: f64,
    pub ebits_teleclone: f64,
    pub ebits_clone_teleport: f64,
    pub ebits_port_flexible: f64,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        let cols = [
            self.gamma_theory,
            self.gamma_max_abs_err,
            self.entropy_bits,
            self.min_pt_eig_opposite,
            self.mi_same_side_bits,
            self.ebits_teleclone,
            self.ebits_clone_teleport,
            self.ebits_port_flexible,
        ];
        let mut line = self.m.to_string();
        for v in cols {
            let _ = write!(line, ",{}", format_significant(v, 12));
        }
        line
    }
}

/// Sweep row for `m` copies. The fidelity column covers every forced outcome
/// with and without ancilla corrections.
pub fn sweep_row(m: usize, seed: u64) -> Result<SweepRow, CliError> {
    let resource = build_telecloning_state(m)?;
    let input = haar_random_qubit(seed);
    let (a, b) = (input.amplitudes()[0], input.amplitudes()[1]);
    let mut gamma_theory = 0.0;
    let mut worst = 0.0f64;
    for outcome in BellOutcome::ALL {
        for correct_ancilla in [true, false] {
            let t = run_with_port(&resource, Label::P, a, b, OutcomePolicy::Forced(outcome), correct_ancilla)?;
            gamma_theory = t.theory_fidelity();
            worst = worst.max(t.max_fidelity_error());
        }
    }
    let state = resource.state();
    let opposite = partial_trace(state, &[Label::P, Label::C(1)])?;
    let mi_same = if m >= 2 {
        mutual_information(state, Label::C(1), Label::C(2), LogBase::Bits)?
    } else {
        f64::NAN
    };
    let ebits = ebit_accounting(m)?;
    Ok(SweepRow {
        m,
        gamma_theory,
        gamma_max_abs_err: worst,
        entropy_bits: bipartite_entanglement(state, &resource.sender_side())?,
        min_pt_eig_opposite: ppt_min_eigenvalue(opposite.matrix())?,
        mi_same_side_bits: mi_same,
        ebits_teleclone: ebits.telecloning,
        ebits_clone_teleport: ebits.clone_then_teleport,
        ebits_port_flexible: ebits.port_flexible,
    })
}

pub fn cmd_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    check_m(cfg.m_max, 1)?;
    let rows = (1..=cfg.m_max)
        .into_par_iter()
        .map(|m| sweep_row(m, cfg.seed))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(bad) = rows.iter().find(|r| r.gamma_max_abs_err > FIDELITY_CHECK_TOL) {
        return Err(CliError::Invariant(format!(
            "m = {}: clone fidelity error {:e}",
            bad.m, bad.gamma_max_abs_err
        )));
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize)]
pub struct SecretShareReport {
    pub m: usize,
    pub input: [f64; 4],
    pub outcome: BellOutcome,
    pub seed: u64,
    pub reconstructed: [f64; 4],
    pub fidelity: f64,
}

pub fn cmd_secret_share(cfg: &RunConfig) -> Result<SecretShareReport, CliError> {
    require_json(cfg.format, "secret-share")?;
    check_m(cfg.m, 1)?;
    let (a, b) = parse_input(&cfg.input, cfg.seed)?;
    let policy = parse_policy(&cfg.outcome, cfg.seed)?;
    let port: Label = cfg.port.parse().map_err(CliError::Usage)?;
    let resource = build_telecloning_state(cfg.m)?;
    let t = run_with_port(&resource, port, a, b, policy, cfg.correct_ancilla)?;
    let (ra, rb) = reconstruct_secret(&t.shared_secret()?)?;
    let fidelity = (a.conj() * ra + b.conj() * rb).norm_sqr().min(1.0);
    if fidelity < 1.0 - ROUND_TRIP_TOL {
        return Err(CliError::Invariant(format!("round-trip fidelity {fidelity}")));
    }
    Ok(SecretShareReport {
        m: cfg.m,
        input: amplitude_list(a, b),
        outcome: t.outcome,
        seed: cfg.seed,
        reconstructed: amplitude_list(ra, rb),
        fidelity,
    })
}

/// `%.{digits}g`-style formatting: `digits` significant digits, trailing
/// zeros trimmed, scientific notation outside `1e-5 <= |x| < 10^digits`.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn emit(text: &str, output: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Dispatches a parsed command, writing its document to `stdout` or `--output`.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Run(cfg) => emit(&to_json(&cmd_run(cfg)?), cfg.output.as_ref(), stdout),
        Command::Analyze(cfg) => emit(&to_json(&cmd_analyze(cfg)?), cfg.output.as_ref(), stdout),
        Command::SecretShare(cfg) => {
            emit(&to_json(&cmd_secret_share(cfg)?), cfg.output.as_ref(), stdout)
        }
        Command::Sweep(cfg) => {
            let rows = cmd_sweep(cfg)?;
            let text = match cfg.format {
                Format::Csv => sweep_csv(&rows),
                Format::Json => to_json(&rows),
            };
            emit(&text, cfg.output.as_ref(), stdout)
        }
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
