//! Command-line frontend. Every run produces one JSON report.

mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::closed_form::partition;
use crate::combinatorics::{ClassTable, Perm};
use crate::groups::{j_diagonal, Form, GroupFamily, GroupSpectrum};
use crate::linalg::I;
use crate::oracles::{
    correlator_eval, mc_group_correlators, mc_group_partition, mc_triangular_expectation, McConfig, McEstimate,
    DEFAULT_SHARDS,
};
use crate::recursion::{correlator_vector, correlator_vector_rescaled, triangular_expectation, BasisVector, SpectralPoints};

pub use report::{to_json_string, Record, Report};

/// Seed used when neither `--seed` nor the environment provides one.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Absolute tolerance for records that compare two deterministic evaluations.
const EXACT_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Compute(#[from] crate::Error),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot serialize report: {0}")]
    Json(#[from] serde_json::Error),
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "hcorr", version, about = "Angular integrals and resolvent correlators over O(n) and Sp(2m)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partition function, closed form and optional Haar Monte Carlo.
    Partition(RunArgs),
    /// Normalized correlation vector over the tetrad basis.
    Correlator(RunArgs),
    /// Expectation over the Gaussian triangular ensemble.
    Triangular(RunArgs),
    /// Tetrad / permutation table for a given R.
    Bijection(RunArgs),
    /// Closed forms against every applicable oracle; fails when a z-score exceeds the threshold.
    Crosscheck(RunArgs),
}

impl Command {
    fn args(&self) -> &RunArgs {
        match self {
            Command::Partition(a)
            | Command::Correlator(a)
            | Command::Triangular(a)
            | Command::Bijection(a)
            | Command::Crosscheck(a) => a,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Partition(_) => "partition",
            Command::Correlator(_) => "correlator",
            Command::Triangular(_) => "triangular",
            Command::Bijection(_) => "bijection",
            Command::Crosscheck(_) => "crosscheck",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    OEven,
    OOdd,
    Sp,
    U,
}

/// Flags shared by every subcommand; the report echoes them under their flag names.
#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// Rank of the group.
    #[arg(long)]
    pub m: Option<usize>,
    /// Matrix size; `2m` or `2m+1` for O, `2m` for Sp.
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated eigenvalues of X.
    #[arg(long, allow_hyphen_values = true)]
    pub x_eigs: Option<String>,
    /// Comma-separated eigenvalues of Y.
    #[arg(long, allow_hyphen_values = true)]
    pub y_eigs: Option<String>,
    /// Coupling `γ` in `exp(-γ tr(X Ω Y Ω⁻¹))`.
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    /// Comma-separated complex spectral points such as `2,3+1i`.
    #[arg(long, allow_hyphen_values = true)]
    pub x_pts: Option<String>,
    /// Points paired with `--x-pts`, same count.
    #[arg(long, allow_hyphen_values = true)]
    pub y_pts: Option<String>,
    /// A class as a one-line permutation of `1..2R` (`2,1`), or `all`.
    #[arg(long, default_value = "all")]
    pub class: String,
    /// Points per side for the bijection table when no spectral points are given.
    #[arg(long)]
    pub r: Option<usize>,
    /// Monte Carlo sample count; 0 skips sampling outside `crosscheck`.
    #[arg(long, default_value_t = 0)]
    pub samples: u64,
    /// Base seed; shard `k` draws from stream `k` of ChaCha8.
    #[arg(long, env = "HCORR_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Independent RNG streams, run in parallel and merged in order.
    #[arg(long, default_value_t = DEFAULT_SHARDS)]
    pub shards: usize,
    /// Largest z-score a crosscheck accepts.
    #[arg(long, default_value_t = 4.0)]
    pub z_threshold: f64,
    /// Record wall-clock time in the report (which then differs between runs).
    #[arg(long)]
    pub timing: bool,
    /// Report path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses the process arguments, runs the command and writes the report.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok((report, ok)) => match emit(&report, cli.command.args().out.as_ref()) {
            Ok(()) if ok => ExitCode::SUCCESS,
            Ok(()) => ExitCode::from(1),
            Err(e) => {
                eprintln!("hcorr: {e}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("hcorr: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(report: &Report, out: Option<&PathBuf>) -> CliResult<()> {
    let text = to_json_string(report)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
        }
    }
    Ok(())
}

/// Runs one command. The flag is false when a crosscheck disagrees.
pub fn run(command: &Command) -> CliResult<(Report, bool)> {
    let args = command.args();
    let start = Instant::now();
    let mut report = Report::new(command.name(), args);
    match command {
        Command::Partition(a) => cmd_partition(a, &mut report)?,
        Command::Correlator(a) => cmd_correlator(a, &mut report)?,
        Command::Triangular(a) => cmd_triangular(a, &mut report)?,
        Command::Bijection(a) => cmd_bijection(a, &mut report)?,
        Command::Crosscheck(a) => cmd_crosscheck(a, &mut report)?,
    }
    if args.timing {
        report.timing_seconds = Some(start.elapsed().as_secs_f64());
    }
    let ok = match command {
        Command::Crosscheck(a) => {
            let ok = report.records.iter().all(|r| r.agrees(a.z_threshold, EXACT_TOL));
            report.passed = Some(ok);
            ok
        }
        _ => true,
    };
    Ok((report, ok))
}

fn parse_reals(flag: &str, text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::Config(format!("--{flag}: cannot parse {s:?}"))))
        .collect()
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (also with `j`).
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s.parse().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let cut = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match cut {
        Some(k) => (body[..k].parse().ok()?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse().ok()?,
    };
    Some(Complex64::new(re, im))
}

fn parse_points(flag: &str, text: &str) -> CliResult<Vec<Complex64>> {
    text.split(',')
        .map(|s| parse_complex(s).ok_or_else(|| CliError::Config(format!("--{flag}: cannot parse {s:?}"))))
        .collect()
}

impl RunArgs {
    fn mc(&self) -> McConfig {
        McConfig::new(self.samples, self.seed).with_shards(self.shards)
    }

    fn family_arg(&self) -> CliResult<FamilyArg> {
        self.family.ok_or_else(|| CliError::Config("--family is required".into()))
    }

    fn eigs(&self) -> CliResult<(Vec<f64>, Vec<f64>)> {
        let x = self.x_eigs.as_deref().ok_or_else(|| CliError::Config("--x-eigs is required".into()))?;
        let y = self.y_eigs.as_deref().ok_or_else(|| CliError::Config("--y-eigs is required".into()))?;
        Ok((parse_reals("x-eigs", x)?, parse_reals("y-eigs", y)?))
    }

    /// Family with its rank, reconciled across `--m`, `--n` and the eigenvalue count.
    fn family(&self, count: Option<usize>) -> CliResult<GroupFamily> {
        let fam = self.family_arg()?;
        let from_n = self.n.map(|n| match fam {
            FamilyArg::OEven | FamilyArg::Sp if n % 2 == 0 => Ok(n / 2),
            FamilyArg::OOdd if n % 2 == 1 => Ok(n / 2),
            FamilyArg::U => Ok(n),
            _ => Err(CliError::Config(format!("--n {n} does not fit family {fam:?}"))),
        });
        let from_n = from_n.transpose()?;
        let candidates = [self.m, from_n, count];
        let m = candidates
            .iter()
            .flatten()
            .copied()
            .reduce(|a, b| if a == b { a } else { usize::MAX })
            .ok_or_else(|| CliError::Config("give --m, --n or eigenvalues".into()))?;
        if m == usize::MAX {
            return Err(CliError::Config(format!("inconsistent sizes: --m {:?}, --n {:?}, {:?} eigenvalues", self.m, self.n, count)));
        }
        Ok(match fam {
            FamilyArg::OEven => GroupFamily::OEven(m),
            FamilyArg::OOdd => GroupFamily::OOdd(m),
            FamilyArg::Sp => GroupFamily::Sp(m),
            FamilyArg::U => GroupFamily::U(m),
        })
    }

    fn spectra(&self) -> CliResult<(GroupSpectrum, GroupSpectrum)> {
        let (x, y) = self.eigs()?;
        if x.len() != y.len() {
            return Err(CliError::Config(format!("{} x eigenvalues but {} y eigenvalues", x.len(), y.len())));
        }
        let family = self.family(Some(x.len()))?;
        Ok((GroupSpectrum::new(family, x)?, GroupSpectrum::new(family, y)?))
    }

    fn points(&self) -> CliResult<Option<SpectralPoints>> {
        match (self.x_pts.as_deref(), self.y_pts.as_deref()) {
            (None, None) => Ok(None),
            (Some(x), Some(y)) => Ok(Some(SpectralPoints::new(parse_points("x-pts", x)?, parse_points("y-pts", y)?)?)),
            _ => Err(CliError::Config("--x-pts and --y-pts go together".into())),
        }
    }

    fn require_points(&self) -> CliResult<SpectralPoints> {
        self.points()?.ok_or_else(|| CliError::Config("--x-pts and --y-pts are required".into()))
    }

    /// Class indices selected by `--class`.
    fn classes(&self, table: &ClassTable) -> CliResult<Vec<usize>> {
        if self.class.trim() == "all" {
            return Ok((0..table.len()).collect());
        }
        let images = self
            .class
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| CliError::Config(format!("--class: cannot parse {:?}", self.class)))?;
        Ok(vec![table.index_of_perm(&Perm::from_one_line(&images)?)?])
    }

    fn check_positive_gamma(&self) -> CliResult<()> {
        if self.gamma.is_finite() && self.gamma > 0.0 {
            Ok(())
        } else {
            Err(CliError::Config(format!("--gamma must be positive, got {}", self.gamma)))
        }
    }

    /// Form and size for the triangular ensemble: `J` for O, `J̃` for Sp.
    fn triangular_shape(&self) -> CliResult<(Form, usize, Vec<f64>, Vec<f64>)> {
        let (x, y) = self.eigs()?;
        if x.len() != y.len() {
            return Err(CliError::Config(format!("{} x eigenvalues but {} y eigenvalues", x.len(), y.len())));
        }
        let family = self.family(Some(x.len()))?;
        let form = family.form()?;
        Ok((form, self.n.unwrap_or(family.matrix_size()), x, y))
    }
}

fn class_label(table: &ClassTable, k: usize) -> String {
    let pi = table.get(k).perm2r.one_line().iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    format!("class[{pi}] {}", table.get(k))
}

fn push_mc(report: &mut Report, quantity: String, closed: Complex64, est: Option<&McEstimate>) {
    report.records.push(Record::with_mc(quantity, closed, est));
}

fn cmd_partition(a: &RunArgs, report: &mut Report) -> CliResult<()> {
    a.check_positive_gamma()?;
    let (x, y) = a.spectra()?;
    let cf = partition(&x, &y, a.gamma)?.value;
    let mc = if a.samples > 0 { Some(mc_group_partition(&x, &y, a.gamma, &a.mc())?) } else { None };
    push_mc(report, "partition".into(), cf.into(), mc.as_ref());
    Ok(())
}

fn closed_correlator(x: &GroupSpectrum, y: &GroupSpectrum, pts: &SpectralPoints, gamma: f64, table: &ClassTable) -> CliResult<BasisVector> {
    let v = if gamma == 0.5 {
        correlator_vector(x, y, pts, gamma, table)?
    } else {
        correlator_vector_rescaled(x, y, pts, gamma, table)?
    };
    Ok(v)
}

fn cmd_correlator(a: &RunArgs, report: &mut Report) -> CliResult<()> {
    a.check_positive_gamma()?;
    let (x, y) = a.spectra()?;
    let pts = a.require_points()?;
    let table = ClassTable::new(pts.rank())?;
    let selected = a.classes(&table)?;
    let cf = closed_correlator(&x, &y, &pts, a.gamma, &table)?;
    let mc = if a.samples > 0 {
        Some(mc_group_correlators(&x, &y, std::slice::from_ref(&pts), a.gamma, &table, &a.mc())?.remove(0))
    } else {
        None
    };
    for k in selected {
        push_mc(report, class_label(&table, k), cf.entries()[k], mc.as_ref().map(|v| &v[k]));
    }
    Ok(())
}

fn cmd_triangular(a: &RunArgs, report: &mut Report) -> CliResult<()> {
    let (form, n, x, y) = a.triangular_shape()?;
    let pts = a.require_points()?;
    let table = ClassTable::new(pts.rank())?;
    let selected = a.classes(&table)?;
    let cf = triangular_expectation(form, n, &x, &y, &pts, &table)?;
    let mc = if a.samples > 0 { Some(mc_triangular_expectation(form, n, &x, &y, &pts, &table, &a.mc())?) } else { None };
    for k in selected {
        push_mc(report, format!("triangular {form} n={n} {}", class_label(&table, k)), cf.entries()[k], mc.as_ref().map(|v| &v[k]));
    }
    Ok(())
}

fn cmd_bijection(a: &RunArgs, report: &mut Report) -> CliResult<()> {
    let r = match (a.r, a.points()?) {
        (Some(r), _) => r,
        (None, Some(p)) => p.rank(),
        (None, None) => return Err(CliError::Config("--r is required".into())),
    };
    let table = ClassTable::new(r)?;
    report.table = Some(table.to_json());
    Ok(())
}

/// Every check the inputs allow: partition and group correlators against Haar sampling,
/// the triangular recursion against triangular sampling, and at size two for `J` the
/// recursion against direct evaluation at `T = 0`.
fn cmd_crosscheck(a: &RunArgs, report: &mut Report) -> CliResult<()> {
    let samples = if a.samples == 0 { 100_000 } else { a.samples };
    let cfg = McConfig::new(samples, a.seed).with_shards(a.shards);
    let pts = a.points()?;
    let (form, n, xe, ye) = a.triangular_shape()?;
    let family = a.family(Some(xe.len()))?;
    let triangular_only = a.n.is_some_and(|n| n != family.matrix_size());
    if !triangular_only {
        a.check_positive_gamma()?;
        let (x, y) = a.spectra()?;
        let cf = partition(&x, &y, a.gamma)?.value;
        let mc = mc_group_partition(&x, &y, a.gamma, &cfg)?;
        push_mc(report, "partition".into(), cf.into(), Some(&mc));
        if let Some(pts) = &pts {
            let table = ClassTable::new(pts.rank())?;
            let cf = closed_correlator(&x, &y, pts, a.gamma, &table)?;
            let mc = mc_group_correlators(&x, &y, std::slice::from_ref(pts), a.gamma, &table, &cfg)?.remove(0);
            for k in a.classes(&table)? {
                push_mc(report, format!("correlator {}", class_label(&table, k)), cf.entries()[k], Some(&mc[k]));
            }
        }
    }
    if let Some(pts) = &pts {
        let table = ClassTable::new(pts.rank())?;
        let cf = triangular_expectation(form, n, &xe, &ye, pts, &table)?;
        let mc = mc_triangular_expectation(form, n, &xe, &ye, pts, &table, &cfg)?;
        let selected = a.classes(&table)?;
        for &k in &selected {
            push_mc(report, format!("triangular {form} n={n} {}", class_label(&table, k)), cf.entries()[k], Some(&mc[k]));
        }
        if form == Form::J && n == 2 {
            let da = j_diagonal(&[I * xe[0]], 2)?;
            let db = j_diagonal(&[I * ye[0]], 2)?;
            for &k in &selected {
                let direct = correlator_eval(&table.get(k).canonical, pts, &da, &db, form)?;
                report.records.push(Record::exact(
                    format!("triangular J n=2 at T=0 {}", class_label(&table, k)),
                    cf.entries()[k],
                    direct,
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        let c = |re, im| Some(Complex64::new(re, im));
        assert_eq!(parse_complex("3"), c(3.0, 0.0));
        assert_eq!(parse_complex("3+1i"), c(3.0, 1.0));
        assert_eq!(parse_complex("2-i"), c(2.0, -1.0));
        assert_eq!(parse_complex("-2.5e-1-4i"), c(-0.25, -4.0));
        assert_eq!(parse_complex("1e+2+1e-3j"), c(100.0, 1e-3));
        assert_eq!(parse_complex("i"), c(0.0, 1.0));
        assert_eq!(parse_complex("-2i"), c(0.0, -2.0));
        assert_eq!(parse_complex("x+1i"), None);
    }

    fn args(extra: &[&str]) -> Command {
        let mut argv = vec!["hcorr"];
        argv.extend_from_slice(extra);
        Cli::try_parse_from(argv).unwrap().command
    }

    #[test]
    fn partition_report_matches_cosh() {
        let cmd = args(&["partition", "--family", "o-even", "--x-eigs", "1", "--y-eigs", "1", "--gamma", "0.3"]);
        let (report, ok) = run(&cmd).unwrap();
        assert!(ok);
        let v = report.records[0].closed_form.unwrap().re;
        assert!((v - 0.6f64.cosh()).abs() < 1e-12);
    }

    #[test]
    fn bijection_table_size() {
        let (report, _) = run(&args(&["bijection", "--r", "2"])).unwrap();
        assert_eq!(report.table.unwrap().as_array().unwrap().len(), 24);
    }

    #[test]
    fn inconsistent_sizes_rejected() {
        let cmd = args(&["partition", "--family", "sp", "--m", "2", "--x-eigs", "1", "--y-eigs", "2"]);
        assert!(matches!(run(&cmd), Err(CliError::Config(_))));
        let cmd = args(&["partition", "--family", "o-odd", "--n", "4", "--x-eigs", "1,2", "--y-eigs", "2,3"]);
        assert!(matches!(run(&cmd), Err(CliError::Config(_))));
    }

    #[test]
    fn class_selector() {
        let cmd = args(&[
            "correlator", "--family", "o-even", "--x-eigs", "1", "--y-eigs", "0.5", "--x-pts", "2", "--y-pts", "3",
            "--class", "2,1",
        ]);
        let (report, _) = run(&cmd).unwrap();
        assert_eq!(report.records.len(), 1);
        assert!(report.records[0].quantity.starts_with("class[2,1]"));
    }

    #[test]
    fn size_two_crosscheck_is_exact() {
        let cmd = args(&[
            "crosscheck", "--family", "o-even", "--n", "2", "--x-eigs", "0.7", "--y-eigs", "-1.1", "--x-pts", "2+0.5i",
            "--y-pts", "3-1i", "--samples", "20000",
        ]);
        let (report, ok) = run(&cmd).unwrap();
        assert!(ok);
        let exact: Vec<&Record> = report.records.iter().filter(|r| r.abs_err.is_some()).collect();
        assert_eq!(exact.len(), 4);
        assert!(exact.iter().all(|r| r.abs_err.unwrap() < 1e-13));
    }
}
