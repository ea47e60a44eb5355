//! Command-line front end.
//!
//! Settings are merged as flags > config file > defaults. Batch rows are
//! computed on a rayon pool (size from `WKB0_THREADS`, 0 = auto) and always
//! emitted in (n, l) order.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::analytic::{exact_energy, formula_for};
use crate::error::{Error, Result};
use crate::model::{build_system, System};
use crate::quantize::quantize_state;
use crate::refsolver::{audit_exactness, reference_eigenvalue, Centrifugal, ReferenceProblem};
use crate::regge::{fit_parameters, read_states_csv, table1_report, table1_states, FitObjective};
use crate::report::{Cell, Format, Table};
use crate::wavefn::build_wavefunction;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

pub const DEFAULT_ANALYTIC_TOL: f64 = 1e-8;
pub const DEFAULT_REFERENCE_TOL: f64 = 1e-6;
pub const DEFAULT_GRID_POINTS: usize = 2001;

pub const SOLVE_COLUMNS: &[&str] =
    &["n", "l", "energy", "residual", "iterations", "cuts", "cut_mismatch", "status", "reason"];
pub const SPECTRUM_COLUMNS: &[&str] = &["n", "l", "formula", "energy", "status", "reason"];
pub const WAVEFUNCTION_COLUMNS: &[&str] = &["x", "psi", "region"];
pub const COMPARE_COLUMNS: &[&str] =
    &["n", "l", "against", "e_wkb0", "e_oracle", "rel_diff", "threshold", "status", "reason"];
pub const AUDIT_COLUMNS: &[&str] = &["n", "l", "e_wkb0", "e_reference", "abs_diff", "rel_diff", "status", "reason"];
pub const REGGE_TABLE_COLUMNS: &[&str] =
    &["label", "n_r", "l", "e_theory", "e_linear", "e_tabulated", "e_exp", "pinned", "diff", "status", "reason"];
pub const REGGE_FIT_COLUMNS: &[&str] =
    &["label", "n_r", "l", "e_exp", "e_fit", "residual", "alpha_s", "kappa", "rms_residual", "status", "reason"];

/// Semiclassical bound-state spectra from exact phase-integral quantization.
#[derive(Parser, Debug)]
#[command(name = "wkb0", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quantized energies for a range of (n, l).
    Solve(BatchArgs),
    /// Closed-form energies for a range of (n, l).
    Spectrum(BatchArgs),
    /// Piecewise wavefunction on a grid.
    Wavefunction(WaveArgs),
    /// Quantized energies against closed forms and/or the reference solver.
    Compare(CompareArgs),
    /// Quantized energies against the reference solver.
    Audit(BatchArgs),
    /// Light-meson Regge reports.
    Regge {
        #[command(subcommand)]
        command: ReggeCommand,
    },
}

#[derive(Subcommand, Debug)]
enum ReggeCommand {
    /// Nine-row theory vs experiment table.
    Table(ReggeTableArgs),
    /// Fit (alpha_s, kappa) to experimental masses.
    Fit(ReggeFitArgs),
}

#[derive(Args, Debug, Clone, Default)]
struct SystemArgs {
    /// System kind (harmonic, coulomb, isotropic, hulthen, morse, morse-reduced, cornell, tabulated).
    #[arg(long)]
    system: Option<String>,
    /// System parameter, repeatable.
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    hbar: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
struct OutputArgs {
    /// csv, json or pretty.
    #[arg(long)]
    format: Option<String>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct BatchArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Radial (or 1D) quantum numbers, `a` or inclusive `a..b`.
    #[arg(long)]
    n: Option<String>,
    /// Orbital quantum numbers, `a` or inclusive `a..b`.
    #[arg(long)]
    l: Option<String>,
    /// Pass threshold on the relative difference.
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
struct WaveArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    l: Option<String>,
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    points: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
struct CompareArgs {
    #[command(flatten)]
    batch: BatchArgs,
    /// analytic, reference or both.
    #[arg(long, default_value = "analytic")]
    against: String,
}

#[derive(Args, Debug, Clone)]
struct ReggeTableArgs {
    #[arg(long = "alpha-s", default_value_t = 0.75)]
    alpha_s: f64,
    #[arg(long, default_value_t = 0.14)]
    kappa: f64,
    /// Constant C in M² = E² − C².
    #[arg(long = "mass-shift")]
    mass_shift: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
struct ReggeFitArgs {
    /// CSV with columns label, exp_mass_gev, pinned (built-in table when absent).
    #[arg(long)]
    states: Option<PathBuf>,
    /// Fit every state with a mass, not only the pinned ones.
    #[arg(long)]
    all: bool,
    /// mass or mass2.
    #[arg(long, default_value = "mass")]
    objective: String,
    #[command(flatten)]
    output: OutputArgs,
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code. Never panics; a panic inside a worker maps to a numeric failure.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match catch_unwind(AssertUnwindSafe(|| dispatch(cli, out, err))) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::Config { .. } | Error::Parse { .. }) {
                EXIT_CONFIG
            } else {
                EXIT_NUMERIC
            }
        }
        Err(_) => {
            let _ = writeln!(err, "error: internal failure");
            EXIT_NUMERIC
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let pool = thread_pool()?;
    match cli.command {
        Command::Solve(a) => {
            let cfg = RunConfig::resolve(&a.system, &a.output, a.n.as_deref(), a.l.as_deref(), a.tol)?;
            let table = pool.install(|| solve_table(&cfg));
            emit(&cfg.output, &table, out, err)
        }
        Command::Spectrum(a) => {
            let cfg = RunConfig::resolve(&a.system, &a.output, a.n.as_deref(), a.l.as_deref(), a.tol)?;
            let table = pool.install(|| spectrum_table(&cfg));
            emit(&cfg.output, &table, out, err)
        }
        Command::Compare(a) => {
            let b = &a.batch;
            let cfg = RunConfig::resolve(&b.system, &b.output, b.n.as_deref(), b.l.as_deref(), b.tol)?;
            let against = Against::parse(&a.against)?;
            let table = pool.install(|| compare_table(&cfg, against));
            emit(&cfg.output, &table, out, err)
        }
        Command::Audit(a) => {
            let cfg = RunConfig::resolve(&a.system, &a.output, a.n.as_deref(), a.l.as_deref(), a.tol)?;
            let table = pool.install(|| audit_table(&cfg));
            emit(&cfg.output, &table, out, err)
        }
        Command::Wavefunction(a) => {
            let cfg = RunConfig::resolve(&a.system, &a.output, a.n.as_deref(), a.l.as_deref(), None)?;
            if cfg.ns.len() != 1 || cfg.ls.len() != 1 {
                return Err(Error::config("n", "wavefunction takes a single (n, l)"));
            }
            if a.points < 2 {
                return Err(Error::config("points", "at least 2 grid points"));
            }
            let table = wavefunction_table(&cfg, a.points)?;
            emit(&cfg.output, &table, out, err)
        }
        Command::Regge { command: ReggeCommand::Table(a) } => {
            let output = OutputConfig::resolve(&a.output, &BTreeMap::new())?;
            if !(a.alpha_s.is_finite() && a.kappa.is_finite() && a.kappa > 0.0) {
                return Err(Error::config("kappa", "alpha_s must be finite and kappa positive"));
            }
            emit(&output, &regge_table(a.alpha_s, a.kappa, a.mass_shift), out, err)
        }
        Command::Regge { command: ReggeCommand::Fit(a) } => {
            let output = OutputConfig::resolve(&a.output, &BTreeMap::new())?;
            let objective = match a.objective.to_ascii_lowercase().as_str() {
                "mass" => FitObjective::Mass,
                "mass2" | "mass-squared" => FitObjective::MassSquared,
                other => return Err(Error::config("objective", format!("expected mass or mass2, got {other:?}"))),
            };
            let states = match &a.states {
                Some(path) => read_states_csv(path).map_err(|e| match e {
                    Error::Io(reason) => Error::config("states", reason),
                    other => other,
                })?,
                None => table1_states(),
            };
            let table = pool.install(|| regge_fit_table(&states, !a.all, objective));
            emit(&output, &table, out, err)
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var("WKB0_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::config("WKB0_THREADS", format!("expected a non-negative integer, got {v:?}")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::config("WKB0_THREADS", e.to_string()))
}

#[derive(Debug, Clone)]
struct OutputConfig {
    format: Format,
    path: Option<PathBuf>,
}

impl OutputConfig {
    fn resolve(flags: &OutputArgs, file: &BTreeMap<String, String>) -> Result<Self> {
        let format = match flags.format.as_deref().or(file.get("format").map(String::as_str)) {
            Some(f) => f.parse()?,
            None => Format::Csv,
        };
        let path = flags.out.clone().or_else(|| file.get("out").map(PathBuf::from));
        Ok(OutputConfig { format, path })
    }
}

/// Resolved settings of a batch command.
#[derive(Debug, Clone)]
struct RunConfig {
    system: System,
    ns: Vec<u32>,
    ls: Vec<u32>,
    tol: Option<f64>,
    output: OutputConfig,
}

impl RunConfig {
    fn resolve(
        sys: &SystemArgs,
        output: &OutputArgs,
        n: Option<&str>,
        l: Option<&str>,
        tol: Option<f64>,
    ) -> Result<Self> {
        let mut map = match &sys.config {
            Some(path) => read_config_file(path)?,
            None => BTreeMap::new(),
        };
        if let Some(kind) = map.remove("system") {
            map.entry("kind".into()).or_insert(kind);
        }
        for p in &sys.params {
            let (k, v) = p.split_once('=').ok_or_else(|| Error::config("param", format!("expected k=v, got {p:?}")))?;
            map.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
        }
        if let Some(kind) = &sys.system {
            map.insert("kind".into(), kind.clone());
        }
        if let Some(h) = sys.hbar {
            map.insert("hbar".into(), h.to_string());
        }
        let output = OutputConfig::resolve(output, &map)?;
        let ns = parse_range("n", n.or(map.get("n").map(String::as_str)).unwrap_or("0"))?;
        let ls = parse_range("l", l.or(map.get("l").map(String::as_str)).unwrap_or("0"))?;
        let tol = match tol {
            Some(t) => Some(t),
            None => map.get("tol").map(|t| parse_number("tol", t)).transpose()?,
        };
        if let Some(t) = tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::config("tol", "must be positive"));
            }
        }
        for key in ["n", "l", "format", "out", "tol"] {
            map.remove(key);
        }
        map.insert("l".into(), ls[0].to_string());
        let system = build_system(&map)?;
        if system.l().is_none() && ls != [0] {
            return Err(Error::config("l", format!("{} has no orbital quantum number", system.name())));
        }
        Ok(RunConfig { system, ns, ls, tol, output })
    }

    fn pairs(&self) -> Vec<(u32, u32)> {
        self.ns.iter().flat_map(|&n| self.ls.iter().map(move |&l| (n, l))).collect()
    }

    fn system_for(&self, l: u32) -> Result<System> {
        if self.system.l().is_some() {
            self.system.with_l(l)
        } else {
            Ok(self.system.clone())
        }
    }

    fn l_cell(&self, l: u32) -> Cell {
        if self.system.l().is_some() {
            l.into()
        } else {
            Cell::Null
        }
    }
}

fn parse_number(key: &str, v: &str) -> Result<f64> {
    v.trim().parse::<f64>().map_err(|_| Error::config(key, format!("expected a number, got {v:?}")))
}

/// `a` or inclusive `a..b`.
pub fn parse_range(key: &str, s: &str) -> Result<Vec<u32>> {
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| Error::config(key, format!("expected a non-negative integer or a..b, got {s:?}")))
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let a = num(s)?;
            (a, a)
        }
    };
    if a > b {
        return Err(Error::config(key, format!("empty range {s:?}")));
    }
    Ok((a..=b).collect())
}

/// Flat `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::config("config", format!("line {}: expected key = value", i + 1)))?;
        map.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
    }
    Ok(map)
}

fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::config("config", format!("{}: {e}", path.display())))?;
    parse_config_text(&text)
}

/// `unbound` rows record an expected absence of a bound state and do not fail
/// the run.
fn status_for(e: &Error) -> &'static str {
    match e {
        Error::NoBoundState(_) | Error::Unbound { .. } => "unbound",
        _ => "fail",
    }
}

fn emit(output: &OutputConfig, table: &Table, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match &output.path {
        Some(path) => {
            let file = File::create(path).map_err(|e| Error::config("out", format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            table.write(output.format, &mut w)?;
            w.flush()?;
        }
        None => table.write(output.format, out)?,
    }
    let status_col = table.columns.iter().position(|c| *c == "status");
    let failed =
        status_col.map_or(0, |j| table.rows.iter().filter(|r| matches!(&r[j], Cell::Text(s) if s == "fail")).count());
    if failed > 0 {
        writeln!(err, "{failed} of {} rows failed", table.rows.len())?;
        Ok(EXIT_NUMERIC)
    } else {
        Ok(EXIT_OK)
    }
}

fn solve_table(cfg: &RunConfig) -> Table {
    let rows: Vec<Vec<Cell>> = cfg
        .pairs()
        .par_iter()
        .map(|&(n, l)| {
            let result = cfg.system_for(l).and_then(|s| quantize_state(&s, n));
            match result {
                Ok(r) => vec![
                    n.into(),
                    cfg.l_cell(l),
                    r.energy.into(),
                    r.residual.into(),
                    r.iterations.into(),
                    r.cuts_at_solution.nu().into(),
                    r.cut_mismatch.into(),
                    "ok".into(),
                    "".into(),
                ],
                Err(e) => vec![
                    n.into(),
                    cfg.l_cell(l),
                    Cell::Null,
                    Cell::Null,
                    Cell::Null,
                    Cell::Null,
                    Cell::Null,
                    status_for(&e).into(),
                    e.code().into(),
                ],
            }
        })
        .collect();
    Table { columns: SOLVE_COLUMNS.to_vec(), rows }
}

fn spectrum_table(cfg: &RunConfig) -> Table {
    let formula = formula_for(&cfg.system).map_or("", |f| f.name());
    let rows: Vec<Vec<Cell>> = cfg
        .pairs()
        .par_iter()
        .map(|&(n, l)| {
            let mut row = vec![n.into(), cfg.l_cell(l), formula.into()];
            match cfg.system_for(l).and_then(|s| exact_energy(&s, n)) {
                Ok(e) => row.extend([e.into(), "ok".into(), "".into()]),
                Err(Error::Unbound { energy }) => row.extend([energy.into(), "unbound".into(), "unbound".into()]),
                Err(e) => row.extend([Cell::Null, status_for(&e).into(), e.code().into()]),
            }
            row
        })
        .collect();
    Table { columns: SPECTRUM_COLUMNS.to_vec(), rows }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Against {
    Analytic,
    Reference,
    Both,
}

impl Against {
    fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "analytic" => Ok(Against::Analytic),
            "reference" => Ok(Against::Reference),
            "both" => Ok(Against::Both),
            other => Err(Error::config("against", format!("expected analytic, reference or both, got {other:?}"))),
        }
    }

    fn oracles(self) -> &'static [&'static str] {
        match self {
            Against::Analytic => &["analytic"],
            Against::Reference => &["reference"],
            Against::Both => &["analytic", "reference"],
        }
    }
}

fn compare_row(cfg: &RunConfig, n: u32, l: u32, oracle: &'static str) -> Vec<Cell> {
    let threshold = cfg.tol.unwrap_or(if oracle == "analytic" { DEFAULT_ANALYTIC_TOL } else { DEFAULT_REFERENCE_TOL });
    let head = vec![n.into(), cfg.l_cell(l), oracle.into()];
    let system = match cfg.system_for(l) {
        Ok(s) => s,
        Err(e) => {
            let mut row = head;
            row.extend([Cell::Null, Cell::Null, Cell::Null, threshold.into(), status_for(&e).into(), e.code().into()]);
            return row;
        }
    };
    let wkb = quantize_state(&system, n).map(|r| r.energy);
    let exact = if oracle == "analytic" {
        exact_energy(&system, n)
    } else {
        ReferenceProblem::new(system, Centrifugal::TrueL).and_then(|p| reference_eigenvalue(&p, n as usize))
    };
    let unbound = |r: &Result<f64>| matches!(r, Err(Error::NoBoundState(_) | Error::Unbound { .. }));
    let (rel, status, reason) = match (&wkb, &exact) {
        (Ok(a), Ok(b)) => {
            let rel = (a - b).abs() / b.abs();
            if rel <= threshold {
                (Some(rel), "pass", "")
            } else {
                (Some(rel), "fail", "tolerance")
            }
        }
        _ if unbound(&wkb) && unbound(&exact) => (None, "unbound", "unbound"),
        (Err(e), _) => (None, "fail", e.code()),
        (_, Err(e)) => (None, "fail", e.code()),
    };
    let oracle_value = match &exact {
        Ok(v) => Some(*v),
        Err(Error::Unbound { energy }) => Some(*energy),
        Err(_) => None,
    };
    let mut row = head;
    row.extend([wkb.ok().into(), oracle_value.into(), rel.into(), threshold.into(), status.into(), reason.into()]);
    row
}

fn compare_table(cfg: &RunConfig, against: Against) -> Table {
    let jobs: Vec<(u32, u32, &'static str)> =
        cfg.pairs().into_iter().flat_map(|(n, l)| against.oracles().iter().map(move |&o| (n, l, o))).collect();
    let rows = jobs.par_iter().map(|&(n, l, o)| compare_row(cfg, n, l, o)).collect();
    Table { columns: COMPARE_COLUMNS.to_vec(), rows }
}

fn audit_table(cfg: &RunConfig) -> Table {
    let rows = audit_exactness(&cfg.system, &cfg.ns, &cfg.ls)
        .into_iter()
        .map(|r| {
            let (status, reason) = match (&r.error, r.rel_diff, cfg.tol) {
                (Some(e), _, _) => (status_for(e), e.code()),
                (None, Some(rel), Some(tol)) if rel > tol => ("fail", "tolerance"),
                _ => ("ok", ""),
            };
            vec![
                r.n.into(),
                cfg.l_cell(r.l),
                r.e_wkb0.into(),
                r.e_reference.into(),
                r.abs_diff.into(),
                r.rel_diff.into(),
                status.into(),
                reason.into(),
            ]
        })
        .collect();
    Table { columns: AUDIT_COLUMNS.to_vec(), rows }
}

fn wavefunction_table(cfg: &RunConfig, points: usize) -> Result<Table> {
    let system = cfg.system_for(cfg.ls[0])?;
    let eigen = quantize_state(&system, cfg.ns[0])?;
    let wf = build_wavefunction(&system, &eigen)?;
    let rows = wf
        .grid(points)
        .into_iter()
        .map(|(x, psi, region)| vec![x.into(), psi.into(), region.as_str().into()])
        .collect();
    Ok(Table { columns: WAVEFUNCTION_COLUMNS.to_vec(), rows })
}

fn regge_table(alpha_s: f64, kappa: f64, mass_shift: Option<f64>) -> Table {
    let rows = table1_report(alpha_s, kappa, mass_shift)
        .into_iter()
        .map(|r| {
            let (status, reason) = if r.e_theory.is_finite() { ("ok", "") } else { ("fail", "numeric") };
            vec![
                r.label.into(),
                r.n_r.into(),
                r.l.into(),
                r.e_theory.into(),
                r.e_linear.into(),
                r.e_tabulated.into(),
                r.e_exp.into(),
                r.pinned.into(),
                r.diff.into(),
                status.into(),
                reason.into(),
            ]
        })
        .collect();
    Table { columns: REGGE_TABLE_COLUMNS.to_vec(), rows }
}

fn regge_fit_table(states: &[crate::regge::MesonState], pinned_only: bool, objective: FitObjective) -> Table {
    let mut table = Table::new(REGGE_FIT_COLUMNS);
    match fit_parameters(states, pinned_only, objective) {
        Ok(fit) => {
            for (label, residual) in &fit.residuals {
                let Some(state) = states.iter().find(|s| &s.label == label) else { continue };
                let e_exp = state.exp_mass;
                table.push(vec![
                    label.clone().into(),
                    state.n_r.into(),
                    state.l.into(),
                    e_exp.into(),
                    e_exp.map(|e| e + residual).into(),
                    (*residual).into(),
                    fit.alpha_s.into(),
                    fit.kappa.into(),
                    fit.rms_residual.into(),
                    "ok".into(),
                    "".into(),
                ]);
            }
        }
        Err(e) => {
            let mut row = vec![Cell::Null; REGGE_FIT_COLUMNS.len() - 2];
            row.extend([status_for(&e).into(), e.code().into()]);
            table.push(row);
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["wkb0"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ranges_are_inclusive() {
        assert_eq!(parse_range("n", "0..4").unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(parse_range("n", "3").unwrap(), vec![3]);
        assert!(parse_range("n", "4..1").is_err());
        assert!(parse_range("n", "x").is_err());
    }

    #[test]
    fn config_text() {
        let m = parse_config_text("# c\nkind = coulomb\n m=1 # mass\n\nalpha = 1\n").unwrap();
        assert_eq!(m["kind"], "coulomb");
        assert_eq!(m["m"], "1");
        assert!(parse_config_text("oops").is_err());
    }

    #[test]
    fn harmonic_solve() {
        let (code, out, _) =
            run_str(&["solve", "--system", "harmonic", "--param", "m=1", "--param", "omega=1", "--n", "0..4"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[0], SOLVE_COLUMNS.join(","));
        for (n, line) in lines[1..].iter().enumerate() {
            let e: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
            assert!((e - (n as f64 + 0.5)).abs() < 1e-9, "{line}");
        }
    }

    #[test]
    fn negative_mass_is_config_error() {
        let (code, _, err) = run_str(&["solve", "--system", "harmonic", "--param", "m=-1", "--param", "omega=1"]);
        assert_eq!(code, EXIT_CONFIG);
        assert!(err.contains("`m`"), "{err}");
    }

    #[test]
    fn unknown_flag_is_config_error() {
        let (code, _, _) = run_str(&["solve", "--bogus"]);
        assert_eq!(code, EXIT_CONFIG);
        let (code, _, _) =
            run_str(&["solve", "--system", "coulomb", "--param", "m=1", "--param", "alpha=1", "--format", "xml"]);
        assert_eq!(code, EXIT_CONFIG);
    }

    #[test]
    fn regge_table_has_nine_rows() {
        let (code, out, _) = run_str(&["regge", "table", "--alpha-s", "0.75", "--kappa", "0.14"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 10);
    }
}
