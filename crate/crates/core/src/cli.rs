//! Batch front end: argument handling, verification reports and dumps.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fermion::{
    bariev_limit_check, chain_hamiltonian, fermionize_residual, global_hamiltonian, local_hamiltonian_closed,
    local_hamiltonian_from_r, model_local_hamiltonian, fermionic_parameters, model_transfer_matrix,
    rational_limit_hamiltonian, rational_r_hamiltonian, rframe_local_hamiltonian, spectrum, to_model_frame,
    transfer_matrix, translation_operator, MAX_DENSE_SITES, MAX_SITES,
};
use crate::intertwine::{gram_residual, orthogonality_residual, rank_defect};
use crate::qdeform::{QParams, ReprLabel, UnitarityClass};
use crate::rmatrix::{
    build_r, check_invariance, check_qybe, check_regularity_unitarity_with, r_closed_form, r_rational,
    sample_draws, vertex_census, weight_violation, Construction, SpectralPair, GENERATOR, RATIONAL_PROBE_Q,
};
use crate::superlinalg::{commutator_norm, max_abs_diff, CMatrix};
use crate::{Error, Result};

pub const SCHEMA: u32 = 1;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_SEED: u64 = 20_240_101;
pub const DEFAULT_DRAWS: usize = 100;
pub const TOLERANCE_ENV: &str = "SUPERQYBE_TOLERANCE";

/// Tolerances that `--tolerance` does not move.
pub const TIGHT_TOLERANCE: f64 = 1e-12;
pub const DERIVATIVE_TOLERANCE: f64 = 1e-8;
pub const HERMITICITY_TOLERANCE: f64 = 1e-8;
pub const TRANSFER_COMMUTE_TOLERANCE: f64 = 1e-9;
pub const TRANSFER_HAMILTONIAN_TOLERANCE: f64 = 1e-8;
pub const RATIONAL_INVARIANCE_TOLERANCE: f64 = 1e-8;
pub const RATIONAL_HAMILTONIAN_TOLERANCE: f64 = 1e-8;
pub const LIMIT_TOLERANCE: f64 = 1e-4;
pub const BARIEV_TOLERANCE: f64 = 1e-3;
/// Used for structural zeros: only an exact zero passes.
pub const EXACT: f64 = f64::MIN_POSITIVE;
/// Used for integer counts: the residual is `|count - expected|`.
pub const COUNT_TOLERANCE: f64 = 0.5;
pub const BARIEV_ALPHA: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Rmatrix,
    Verify,
    Hamiltonian,
    Spectrum,
    Transfer,
    Limits,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Rmatrix => "rmatrix",
            Command::Verify => "verify",
            Command::Hamiltonian => "hamiltonian",
            Command::Spectrum => "spectrum",
            Command::Transfer => "transfer",
            Command::Limits => "limits",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    Type1,
    Type2,
    Both,
}

impl Window {
    fn classes(self) -> Vec<UnitarityClass> {
        match self {
            Window::Type1 => vec![UnitarityClass::TypeI],
            Window::Type2 => vec![UnitarityClass::TypeII],
            Window::Both => vec![UnitarityClass::TypeI, UnitarityClass::TypeII],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstructionChoice {
    Closed,
    Projector,
    Both,
}

impl ConstructionChoice {
    fn constructions(self) -> Vec<Construction> {
        match self {
            ConstructionChoice::Closed => vec![Construction::ClosedForm],
            ConstructionChoice::Projector => vec![Construction::ProjectorSum],
            ConstructionChoice::Both => vec![Construction::ClosedForm, Construction::ProjectorSum],
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "superqybe", version, about = "R-matrices, Hamiltonians and verification suites for U_q(gl(2|1)) chains")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long, default_value_t = 1.3, allow_hyphen_values = true)]
    pub q: f64,
    #[arg(long, default_value_t = 0.7, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.9, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.4, allow_hyphen_values = true)]
    pub gamma: f64,
    /// Chain length L.
    #[arg(long, default_value_t = 3)]
    pub sites: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Random draws per window for `verify`.
    #[arg(long, default_value_t = DEFAULT_DRAWS)]
    pub draws: usize,
    /// Threshold for the 1e-10 class of checks; falls back to SUPERQYBE_TOLERANCE.
    #[arg(long, allow_hyphen_values = true)]
    pub tolerance: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t = Window::Both)]
    pub window: Window,
    #[arg(long, value_enum, default_value_t = ConstructionChoice::Both)]
    pub construction: ConstructionChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub sites: usize,
    pub seed: u64,
    pub draws: usize,
    pub tolerance: f64,
    pub format: Format,
    pub window: Window,
    pub construction: ConstructionChoice,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            q: 1.3,
            alpha: 0.7,
            beta: 1.9,
            gamma: 0.4,
            sites: 3,
            seed: DEFAULT_SEED,
            draws: DEFAULT_DRAWS,
            tolerance: DEFAULT_TOLERANCE,
            format: Format::Json,
            window: Window::Both,
            construction: ConstructionChoice::Both,
        }
    }

    /// Flag value first, then the environment value, then the default.
    pub fn from_args(args: Args, env_tolerance: Option<&str>) -> Result<Self> {
        let tolerance = match (args.tolerance, env_tolerance) {
            (Some(t), _) => t,
            (None, Some(s)) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("{TOLERANCE_ENV} = {s:?} is not a number")))?,
            (None, None) => DEFAULT_TOLERANCE,
        };
        Ok(RunConfig {
            command: args.command,
            q: args.q,
            alpha: args.alpha,
            beta: args.beta,
            gamma: args.gamma,
            sites: args.sites,
            seed: args.seed,
            draws: args.draws,
            tolerance,
            format: args.format,
            window: args.window,
            construction: args.construction,
        })
    }

    /// Checks every parameter the command reads.
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Domain(format!("tolerance must be positive and finite, got {}", self.tolerance)));
        }
        let params = QParams::new(self.q)?;
        ReprLabel::new(self.alpha)?;
        match self.command {
            Command::Rmatrix => {
                SpectralPair::new(self.alpha, self.beta, params)?;
            }
            Command::Verify | Command::Transfer => {
                SpectralPair::new(self.alpha, self.beta, params)?;
                SpectralPair::new(self.beta, self.gamma, params)?;
            }
            _ => {}
        }
        if self.command == Command::Verify && self.draws < 1 {
            return Err(Error::Domain("draws must be at least 1".into()));
        }
        let max = match self.command {
            Command::Spectrum => MAX_SITES,
            Command::Hamiltonian | Command::Transfer | Command::Limits => MAX_DENSE_SITES,
            _ => return Ok(()),
        };
        if !(2..=max).contains(&self.sites) {
            return Err(Error::Size { len: self.sites, min: 2, max });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub params: BTreeMap<String, f64>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    /// Non-finite residuals are stored as `f64::MAX` and fail.
    pub fn new(check: impl Into<String>, params: &[(&str, f64)], residual: f64, tolerance: f64) -> Self {
        let residual = if residual.is_finite() { residual } else { f64::MAX };
        CheckRecord {
            check: check.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            residual,
            tolerance,
            pass: residual < tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub command: String,
    pub generator: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    /// Sorts the checks by name, then parameters, and fills in the summary.
    pub fn new(command: &str, seed: u64, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| {
            a.check.cmp(&b.check).then_with(|| {
                let ka = a.params.iter().map(|(k, v)| (k, v.to_bits()));
                let kb = b.params.iter().map(|(k, v)| (k, v.to_bits()));
                ka.cmp(kb)
            })
        });
        let summary = Summary {
            total: checks.len(),
            passed: checks.iter().filter(|c| c.pass).count(),
            max_residual: checks.iter().map(|c| c.residual).fold(0.0, f64::max),
        };
        VerificationReport { schema: SCHEMA, command: command.into(), generator: GENERATOR.into(), seed, checks, summary }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.passed == self.summary.total
    }
}

fn params_text(params: &BTreeMap<String, f64>) -> String {
    params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

pub fn emit_report(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Csv => {
            let mut out = String::from("check,params,residual,tolerance,pass\n");
            for c in &report.checks {
                let _ = writeln!(out, "{},{},{},{},{}", c.check, params_text(&c.params), c.residual, c.tolerance, c.pass);
            }
            out
        }
        Format::Pretty => {
            let mut out = format!("{} (generator {}, seed {})\n", report.command, report.generator, report.seed);
            for c in &report.checks {
                let _ = writeln!(
                    out,
                    "{}  {:<40} residual {:>10.3e}  tol {:>8.1e}  {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.check,
                    c.residual,
                    c.tolerance,
                    params_text(&c.params)
                );
            }
            let s = report.summary;
            let _ = writeln!(out, "{}/{} passed, max residual {:.3e}", s.passed, s.total, s.max_residual);
            out
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Row-major, each entry `[re, im]`.
pub fn matrix_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub label: String,
    pub dim: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl MatrixDump {
    pub fn new(label: &str, m: &CMatrix) -> Self {
        MatrixDump { label: label.into(), dim: m.nrows(), matrix: matrix_rows(m) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpOutput {
    pub schema: u32,
    pub command: String,
    pub params: BTreeMap<String, f64>,
    pub matrices: Vec<MatrixDump>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOutput {
    pub schema: u32,
    pub command: String,
    pub params: BTreeMap<String, f64>,
    pub eigenvalues: Vec<f64>,
}

fn emit_dump(out: &DumpOutput, format: Format) -> String {
    match format {
        Format::Json => to_json(out),
        Format::Csv => {
            let mut s = String::from("label,row,col,re,im\n");
            for m in &out.matrices {
                for (i, row) in m.matrix.iter().enumerate() {
                    for (j, [re, im]) in row.iter().enumerate() {
                        let _ = writeln!(s, "{},{i},{j},{re},{im}", m.label);
                    }
                }
            }
            s
        }
        Format::Pretty => {
            let mut s = format!("{} {}\n", out.command, params_text(&out.params));
            for m in &out.matrices {
                let _ = writeln!(s, "{} ({}x{})", m.label, m.dim, m.dim);
                for row in &m.matrix {
                    let cells: Vec<String> = row.iter().map(|[re, im]| format!("{re:>9.5}{im:+9.5}i")).collect();
                    let _ = writeln!(s, "{}", cells.join(" "));
                }
            }
            s
        }
    }
}

fn emit_spectrum(out: &SpectrumOutput, format: Format) -> String {
    match format {
        Format::Json => to_json(out),
        Format::Csv => {
            let mut s = String::from("index,eigenvalue\n");
            for (i, e) in out.eigenvalues.iter().enumerate() {
                let _ = writeln!(s, "{i},{e}");
            }
            s
        }
        Format::Pretty => {
            let mut s = format!("{} {}\n", out.command, params_text(&out.params));
            for (i, e) in out.eigenvalues.iter().enumerate() {
                let _ = writeln!(s, "{i:>5}  {e:>22.15}");
            }
            s
        }
    }
}

/// Exit code and the text destined for the two output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn invalid(e: &Error) -> Self {
        Outcome { code: 2, stdout: String::new(), stderr: format!("error: invalid parameters: {e}\n") }
    }
}

/// Parses the arguments (program name first) and runs the command.
pub fn run_from_args<I, T>(args: I, env_tolerance: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match RunConfig::from_args(args, env_tolerance) {
        Ok(config) => run(&config),
        Err(e) => Outcome::invalid(&e),
    }
}

/// Runs one command. Output is produced only after every computation has
/// succeeded, so a failure never leaves partial text on stdout.
pub fn run(config: &RunConfig) -> Outcome {
    if let Err(e) = config.validate() {
        return Outcome::invalid(&e);
    }
    let result = match config.command {
        Command::Rmatrix => rmatrix_output(config).map(|d| (0, emit_dump(&d, config.format))),
        Command::Hamiltonian => hamiltonian_output(config).map(|d| (0, emit_dump(&d, config.format))),
        Command::Spectrum => spectrum_output(config).map(|s| (0, emit_spectrum(&s, config.format))),
        Command::Verify | Command::Transfer | Command::Limits => {
            let checks = match config.command {
                Command::Verify => verify_checks(config),
                Command::Transfer => transfer_checks(config),
                _ => limit_checks(config),
            };
            checks.map(|c| {
                let report = VerificationReport::new(config.command.name(), config.seed, c);
                (if report.all_pass() { 0 } else { 1 }, emit_report(&report, config.format))
            })
        }
    };
    match result {
        Ok((code, stdout)) => {
            let stderr = if code == 1 { "error: one or more checks failed\n".to_string() } else { String::new() };
            Outcome { code, stdout, stderr }
        }
        Err(e) => Outcome::invalid(&e),
    }
}

fn point_params(config: &RunConfig, keys: &[&str]) -> BTreeMap<String, f64> {
    keys.iter()
        .map(|&k| {
            let v = match k {
                "q" => config.q,
                "alpha" => config.alpha,
                "beta" => config.beta,
                "gamma" => config.gamma,
                "sites" => config.sites as f64,
                _ => unreachable!("unknown parameter {k}"),
            };
            (k.to_string(), v)
        })
        .collect()
}

pub fn rmatrix_output(config: &RunConfig) -> Result<DumpOutput> {
    let params = QParams::new(config.q)?;
    let (a, b) = (ReprLabel::new(config.alpha)?, ReprLabel::new(config.beta)?);
    let matrices = config
        .construction
        .constructions()
        .into_iter()
        .map(|c| Ok(MatrixDump::new(c.name(), build_r(c, a, b, params)?.op().matrix())))
        .collect::<Result<Vec<_>>>()?;
    Ok(DumpOutput {
        schema: SCHEMA,
        command: "rmatrix".into(),
        params: point_params(config, &["q", "alpha", "beta"]),
        matrices,
    })
}

/// Periodic global Hamiltonian in the model frame.
pub fn hamiltonian_output(config: &RunConfig) -> Result<DumpOutput> {
    let h = global_hamiltonian(config.alpha, QParams::new(config.q)?, config.sites, true)?;
    Ok(DumpOutput {
        schema: SCHEMA,
        command: "hamiltonian".into(),
        params: point_params(config, &["q", "alpha", "sites"]),
        matrices: vec![MatrixDump::new("global", &h.to_dense())],
    })
}

pub fn spectrum_output(config: &RunConfig) -> Result<SpectrumOutput> {
    let h = global_hamiltonian(config.alpha, QParams::new(config.q)?, config.sites, true)?;
    Ok(SpectrumOutput {
        schema: SCHEMA,
        command: "spectrum".into(),
        params: point_params(config, &["q", "alpha", "sites"]),
        eigenvalues: spectrum(&h, config.sites)?,
    })
}

/// Named residuals of the R-matrix and intertwiner suites at one point.
fn r_suite(
    constructions: &[Construction],
    q: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    tol: f64,
) -> Result<Vec<(String, f64, f64)>> {
    let params = QParams::new(q)?;
    let pair = SpectralPair::new(alpha, beta, params)?;
    let mut out = Vec::new();
    for &c in constructions {
        let n = c.name();
        let r = build_r(c, pair.alpha(), pair.beta(), params)?;
        let (reg, unit) = check_regularity_unitarity_with(c, pair)?;
        out.push((format!("qybe.{n}"), check_qybe(c, alpha, beta, gamma, params)?, tol));
        out.push((format!("regularity.{n}"), reg, TIGHT_TOLERANCE));
        out.push((format!("unitarity.{n}"), unit, tol));
        out.push((format!("invariance.{n}"), check_invariance(&r)?, tol));
        out.push((format!("weight_conservation.{n}"), weight_violation(r.op()), EXACT));
        out.push((format!("realness.{n}"), r.op().max_imag(), TIGHT_TOLERANCE));
    }
    if constructions.len() > 1 {
        let closed = build_r(Construction::ClosedForm, pair.alpha(), pair.beta(), params)?;
        let proj = build_r(Construction::ProjectorSum, pair.alpha(), pair.beta(), params)?;
        out.push(("equivalence".into(), closed.op().max_abs_diff(proj.op()), tol));
    }
    out.push(("gram".into(), gram_residual(pair.alpha(), pair.beta(), params)?, TIGHT_TOLERANCE));
    out.push(("orthogonality".into(), orthogonality_residual(pair.alpha(), pair.beta(), params)?, tol));
    out.push(("intertwiner_ranks".into(), rank_defect(pair.alpha(), pair.beta(), params)? as f64, COUNT_TOLERANCE));
    Ok(out)
}

/// Named residuals of the local Hamiltonian suite at one point.
fn hamiltonian_suite(q: f64, alpha: f64, tol: f64) -> Result<Vec<(String, f64, f64)>> {
    let params = QParams::new(q)?;
    let closed = local_hamiltonian_closed(alpha, params)?;
    let rframe = rframe_local_hamiltonian(alpha, params)?;
    let model = model_local_hamiltonian(fermionic_parameters(alpha, params)?);
    Ok(vec![
        ("hamiltonian.derivative".into(), local_hamiltonian_from_r(alpha, params)?.max_abs_diff(&rframe), DERIVATIVE_TOLERANCE),
        ("hamiltonian.fermionic".into(), fermionize_residual(&closed, alpha, params)?, tol),
        ("hamiltonian.model_frame".into(), to_model_frame(&rframe, 2)?.max_abs_diff(&model), tol),
        ("hamiltonian.hermiticity".into(), closed.hermiticity_residual(), HERMITICITY_TOLERANCE),
    ])
}

pub fn verify_checks(config: &RunConfig) -> Result<Vec<CheckRecord>> {
    let tol = config.tolerance;
    let constructions = config.construction.constructions();
    let (q, a, b, g) = (config.q, config.alpha, config.beta, config.gamma);
    let mut checks = Vec::new();
    for (name, residual, t) in r_suite(&constructions, q, a, b, g, tol)? {
        let keys: &[(&str, f64)] = if name.starts_with("qybe") {
            &[("q", q), ("alpha", a), ("beta", b), ("gamma", g)]
        } else {
            &[("q", q), ("alpha", a), ("beta", b)]
        };
        checks.push(CheckRecord::new(name, keys, residual, t));
    }
    let params = QParams::new(q)?;
    let expected = if a == b { 16.0 } else { 36.0 };
    for &c in &constructions {
        let r = build_r(c, ReprLabel::new(a)?, ReprLabel::new(b)?, params)?;
        let count = vertex_census(&r) as f64;
        checks.push(CheckRecord::new(
            format!("vertex_census.{}", c.name()),
            &[("q", q), ("alpha", a), ("beta", b)],
            (count - expected).abs(),
            COUNT_TOLERANCE,
        ));
    }
    for (name, residual, t) in hamiltonian_suite(q, a, tol)? {
        checks.push(CheckRecord::new(name, &[("q", q), ("alpha", a)], residual, t));
    }
    for class in config.window.classes() {
        let window = match class {
            UnitarityClass::TypeI => "type1",
            UnitarityClass::TypeII => "type2",
        };
        let per_draw = sample_draws(config.seed, config.draws, class)
            .par_iter()
            .map(|d| {
                let mut v = r_suite(&constructions, d.q, d.alpha, d.beta, d.gamma, tol)?;
                v.extend(hamiltonian_suite(d.q, d.alpha, tol)?);
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut worst: BTreeMap<String, (f64, f64)> = BTreeMap::new();
        for (name, residual, t) in per_draw.into_iter().flatten() {
            let e = worst.entry(name).or_insert((0.0, t));
            e.0 = e.0.max(residual);
        }
        for (name, (residual, t)) in worst {
            checks.push(CheckRecord::new(
                format!("random.{window}.{name}"),
                &[("draws", config.draws as f64)],
                residual,
                t,
            ));
        }
    }
    Ok(checks)
}

pub fn transfer_checks(config: &RunConfig) -> Result<Vec<CheckRecord>> {
    let params = QParams::new(config.q)?;
    let (a, b, g, len) = (config.alpha, config.beta, config.gamma, config.sites);
    let l = len as f64;
    let t1 = transfer_matrix(b, a, params, len)?;
    let t2 = transfer_matrix(g, a, params, len)?;
    let chain = chain_hamiltonian(a, params, len, true)?;
    let model_t = model_transfer_matrix(b, a, params, len)?;
    let global = global_hamiltonian(a, params, len, true)?.to_dense();
    let t0 = transfer_matrix(a, a, params, len)?;
    let shift = translation_operator(len).to_matrix();
    let base = [("q", config.q), ("alpha", a), ("sites", l)];
    let with_b = [("q", config.q), ("alpha", a), ("beta", b), ("sites", l)];
    Ok(vec![
        CheckRecord::new(
            "transfer.commute",
            &[("q", config.q), ("alpha", a), ("beta", b), ("gamma", g), ("sites", l)],
            commutator_norm(t1.matrix(), t2.matrix()),
            TRANSFER_COMMUTE_TOLERANCE,
        ),
        CheckRecord::new("transfer.hamiltonian", &with_b, commutator_norm(t1.matrix(), chain.matrix()), TRANSFER_HAMILTONIAN_TOLERANCE),
        CheckRecord::new("transfer.model_hamiltonian", &with_b, commutator_norm(model_t.matrix(), &global), TRANSFER_HAMILTONIAN_TOLERANCE),
        CheckRecord::new("transfer.translation", &base, max_abs_diff(t0.matrix(), &shift), config.tolerance),
    ])
}

pub fn limit_checks(config: &RunConfig) -> Result<Vec<CheckRecord>> {
    let (a, b, len) = (config.alpha, config.beta, config.sites);
    let l = len as f64;
    let near = QParams::new(RATIONAL_PROBE_Q)?;
    let mut checks = Vec::new();
    let same_class = ReprLabel::new(b).ok().map(|lb| lb.class()) == Some(ReprLabel::new(a)?.class());
    if same_class {
        let closed = r_closed_form(SpectralPair::new(a, b, near)?)?;
        let rational = r_rational(a, b)?;
        checks.push(CheckRecord::new(
            "limits.rational_r",
            &[("alpha", a), ("beta", b)],
            closed.op().max_abs_diff(rational.op()),
            LIMIT_TOLERANCE,
        ));
        checks.push(CheckRecord::new(
            "limits.rational_invariance",
            &[("alpha", a), ("beta", b)],
            check_invariance(&rational)?,
            RATIONAL_INVARIANCE_TOLERANCE,
        ));
    }
    let limit = rational_limit_hamiltonian(a, len)?;
    checks.push(CheckRecord::new(
        "limits.rational_hamiltonian",
        &[("alpha", a), ("sites", l)],
        limit.max_abs_diff(&global_hamiltonian(a, near, len, true)?),
        LIMIT_TOLERANCE,
    ));
    checks.push(CheckRecord::new(
        "limits.rational_r_hamiltonian",
        &[("alpha", a), ("sites", l)],
        limit.max_abs_diff(&rational_r_hamiltonian(a, len)?),
        RATIONAL_HAMILTONIAN_TOLERANCE,
    ));
    let bariev = bariev_limit_check(config.q.ln(), BARIEV_ALPHA, len)?;
    let bp = [("q", config.q), ("alpha", BARIEV_ALPHA), ("sites", l)];
    checks.push(CheckRecord::new("limits.bariev", &bp, bariev.deviation, BARIEV_TOLERANCE));
    checks.push(CheckRecord::new("limits.bariev_u", &bp, bariev.u, LIMIT_TOLERANCE));
    Ok(checks)
}
