mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::{Map, Value};

use xs_core::bessel_inverse_laguerre::{h_nu_estimate, psi_n, xi_n, BesselParams, PSI_N_MAX};
use xs_core::diff::DiffConfig;
use xs_core::ensembles_mc::{
    empirical_charfn, empirical_charfn_imag, empirical_laplace, estimate_mean, sample, trace_statistic, EnsembleKind,
    EnsembleSpec, Estimate, McmcParams,
};
use xs_core::hua_charfn::{phi_exact, phi_finite_N, phi_finite_N_laguerre, tau, PhiEvaluator, PHI_FINITE_N_MAX};
use xs_core::painleve_residuals::{
    default_grid, report_bessel_finite, report_bessel_inf, report_hankel, report_p5_finite, report_sigma_p3,
    ResidualReport,
};
use xs_core::verify::{run_suite, Suite};
use xs_core::xs_distribution::{abs_moment, moment_r, rho};
use xs_core::SeriesConfig;

use error::CliError;
use output::{emit, json_f64, Cell, Format, Report, Table};

#[derive(Parser, Debug)]
#[command(
    name = "xs",
    version,
    about = "Moments, densities, characteristic functions and Painleve checks for the X(s) and Y(nu) laws",
    args_override_self = true
)]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    output: Format,
    /// Output file; defaults to stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for <command>.<ext> when --out is absent
    #[arg(long, env = "XS_OUTPUT_DIR", global = true)]
    out_dir: Option<PathBuf>,
    /// JSON run configuration; keys mirror the long flags plus "command"
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// R(s,h) and E|X(s)|^{2h}
    #[command(allow_negative_numbers = true)]
    Moment(MomentArgs),
    /// Density of X(s)
    #[command(allow_negative_numbers = true)]
    Density(DensityArgs),
    /// Characteristic function of X(s), or of trace/N at finite N
    #[command(allow_negative_numbers = true)]
    Charfn(CharfnArgs),
    /// Sigma-form Painleve residuals on a t grid
    #[command(allow_negative_numbers = true)]
    Residual(ResidualArgs),
    /// Inverse-Laguerre Laplace transforms psi_N, xi_N and the extrapolated h
    #[command(allow_negative_numbers = true)]
    Bessel(BesselArgs),
    /// Monte Carlo estimates from the matrix ensembles
    #[command(allow_negative_numbers = true)]
    Simulate(SimulateArgs),
    /// Run the numbered verification criteria
    Verify(VerifyArgs),
}

/// Grid points: a number or start:stop:count.
#[derive(Debug, Clone)]
struct Points(Vec<f64>);

fn parse_points(s: &str) -> Result<Points, String> {
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(Points(vec![num(v)?])),
        [a, b, n] => {
            let (a, b) = (num(a)?, num(b)?);
            let n: usize = n.trim().parse().map_err(|e| format!("{n:?}: {e}"))?;
            if n < 2 {
                return Err("a range needs at least 2 points".into());
            }
            Ok(Points((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()))
        }
        _ => Err(format!("{s:?}: expected a number or start:stop:count")),
    }
}

fn flat(p: &[Points]) -> Vec<f64> {
    p.iter().flat_map(|x| x.0.iter().copied()).collect()
}

fn ser_points<S: Serializer>(p: &[Points], s: S) -> Result<S::Ok, S::Error> {
    flat(p).serialize(s)
}

#[derive(Args, Debug, Serialize)]
struct MomentArgs {
    /// Integer s >= 0
    #[arg(long)]
    s: u32,
    /// Real h values, inside -1/2 < h < s + 1/2
    #[arg(long, required = true, value_delimiter = ',', value_parser = parse_points)]
    #[serde(serialize_with = "ser_points")]
    h: Vec<Points>,
}

#[derive(Args, Debug, Serialize)]
struct DensityArgs {
    #[arg(long)]
    s: u32,
    #[arg(long, required = true, value_delimiter = ',', value_parser = parse_points)]
    #[serde(serialize_with = "ser_points")]
    x: Vec<Points>,
}

#[derive(Args, Debug, Serialize)]
struct CharfnArgs {
    /// s; must be an integer for the N = infinity law
    #[arg(long)]
    s: f64,
    #[arg(long, required = true, value_delimiter = ',', value_parser = parse_points)]
    #[serde(serialize_with = "ser_points")]
    t: Vec<Points>,
    /// Finite matrix size N instead of the limit law
    #[arg(long = "finite-N", alias = "finite-n")]
    finite_n: Option<usize>,
    /// With --finite-N and integer s, use the s x s Laguerre determinant
    #[arg(long)]
    laguerre: bool,
    /// Also report t d/dt log phi and its two derivatives
    #[arg(long)]
    tau: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum EquationArg {
    /// sigma-PIII' for tau^(s), N = infinity
    P3,
    /// sigma-PV for finite-N Hua-Pickrell
    P5,
    /// sigma form for the deformed Laguerre Hankel determinant
    Hankel,
    /// finite-N inverse-Laguerre xi_N
    BesselFinite,
    /// N = infinity h^(nu), extrapolated over --n-list
    BesselInf,
}

#[derive(Args, Debug, Serialize)]
struct ResidualArgs {
    #[arg(long, value_enum)]
    equation: EquationArg,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long = "N", alias = "n")]
    n: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [4usize, 8, 16])]
    n_list: Vec<usize>,
    /// Defaults to 16 geometric points in [0.05, 8]
    #[arg(long, value_delimiter = ',', value_parser = parse_points)]
    #[serde(serialize_with = "ser_points")]
    t: Vec<Points>,
}

#[derive(Args, Debug, Serialize)]
struct BesselArgs {
    #[arg(long)]
    nu: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [4usize, 8, 16])]
    n_list: Vec<usize>,
    #[arg(long, required = true, value_delimiter = ',', value_parser = parse_points)]
    #[serde(serialize_with = "ser_points")]
    t: Vec<Points>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum EnsembleArg {
    #[value(alias = "hua_pickrell")]
    HuaPickrell,
    Lue,
    #[value(alias = "inverse_laguerre")]
    InverseLaguerre,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Stat {
    /// mean of cos(t S / 2), S = trace / N
    Charfn,
    /// mean of exp(-t S / 2)
    Laplace,
    /// mean of S
    Mean,
    /// raw eigenvalue samples, one row each
    Samples,
}

#[derive(Args, Debug, Serialize)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    ensemble: EnsembleArg,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long = "N", alias = "n")]
    n: usize,
    #[arg(long, value_enum, default_value_t = Stat::Charfn)]
    stat: Stat,
    #[arg(long, value_delimiter = ',', value_parser = parse_points)]
    #[serde(serialize_with = "ser_points")]
    t: Vec<Points>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    n_samples: usize,
    #[arg(long, default_value_t = McmcParams::default().proposal_scale)]
    proposal_scale: f64,
    #[arg(long, default_value_t = McmcParams::default().burn_in)]
    burn_in: usize,
    #[arg(long, default_value_t = McmcParams::default().thinning)]
    thinning: usize,
    #[arg(long, default_value_t = McmcParams::default().chains)]
    chains: usize,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    /// One of all, golden, half_integer, quarter_integer, s0, painleve,
    /// boundary, identities, density, vanishing, monte_carlo, coefficients
    #[arg(long, default_value = "all", value_parser = |s: &str| s.parse::<Suite>().map_err(|e| e.to_string()))]
    suite: Suite,
}

fn need<T>(v: Option<T>, flag: &str, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::usage(format!("{what} needs --{flag}")))
}

fn integer_s(s: f64, what: &str) -> Result<u32, CliError> {
    if s >= 0.0 && s.fract() == 0.0 && s <= u32::MAX as f64 {
        Ok(s as u32)
    } else {
        Err(CliError::usage(format!("{what} needs a nonnegative integer --s, got {s}")))
    }
}

fn params<T: Serialize>(a: &T) -> Value {
    fn digits(v: Value) -> Value {
        match v {
            Value::Number(n) if n.is_f64() => n.as_f64().map_or(Value::Null, json_f64),
            Value::Array(a) => Value::Array(a.into_iter().map(digits).collect()),
            Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, digits(v))).collect()),
            other => other,
        }
    }
    digits(serde_json::to_value(a).unwrap_or(Value::Null))
}

/// Lowercase tag of a serde enum value.
fn tag<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        _ => String::new(),
    }
}

fn rows<F>(grid: &[f64], f: F) -> Result<Vec<Vec<Cell>>, CliError>
where
    F: Fn(f64) -> Result<Vec<Cell>, CliError> + Sync,
{
    grid.par_iter().map(|&x| f(x)).collect()
}

fn cmd_moment(a: &MomentArgs) -> Result<Report, CliError> {
    let cfg = SeriesConfig::default();
    let mut table = Table::new(&["h", "R", "abs_moment", "method", "err_est"]);
    table.rows = rows(&flat(&a.h), |h| {
        let m = moment_r(a.s, Complex64::new(h, 0.0), &cfg)?;
        let e = abs_moment(a.s, h, &cfg)?;
        Ok(vec![h.into(), m.value.re.into(), e.value.into(), tag(&m.method).into(), m.err_est.into()])
    })?;
    Ok(Report { command: "moment", params: params(a), table, meta: Map::new() })
}

fn cmd_density(a: &DensityArgs) -> Result<Report, CliError> {
    let cfg = SeriesConfig::default();
    let mut table = Table::new(&["x", "rho", "method", "err_est"]);
    table.rows = rows(&flat(&a.x), |x| {
        let d = rho(a.s, x, &cfg)?;
        Ok(vec![x.into(), d.rho.into(), tag(&d.method).into(), d.err_est.into()])
    })?;
    Ok(Report { command: "density", params: params(a), table, meta: Map::new() })
}

fn cmd_charfn(a: &CharfnArgs) -> Result<Report, CliError> {
    let cfg = SeriesConfig::default();
    let diff = DiffConfig::default();
    let eval = match a.finite_n {
        None => PhiEvaluator::Exact { s: integer_s(a.s, "the N = infinity characteristic function")?, cfg },
        Some(n) if a.laguerre => PhiEvaluator::FiniteNLaguerre { s: integer_s(a.s, "--laguerre")?, n },
        Some(n) => {
            if n > PHI_FINITE_N_MAX {
                return Err(CliError::usage(format!("--finite-N {n} exceeds {PHI_FINITE_N_MAX}")));
            }
            PhiEvaluator::FiniteN { s: a.s, n }
        }
    };
    if a.laguerre && a.finite_n.is_none() {
        return Err(CliError::usage("--laguerre needs --finite-N"));
    }
    let mut cols = vec!["t", "phi", "method", "err_est"];
    if a.tau {
        cols.extend(["tau", "dtau", "d2tau"]);
    }
    let mut table = Table::new(&cols);
    table.rows = rows(&flat(&a.t), |t| {
        let v = match eval {
            PhiEvaluator::Exact { s, cfg } => phi_exact(s, t, &cfg)?,
            PhiEvaluator::FiniteN { s, n } => phi_finite_N(s, n, t)?,
            PhiEvaluator::FiniteNLaguerre { s, n } => phi_finite_N_laguerre(s, n, t)?,
        };
        let mut row = vec![t.into(), v.value.into(), tag(&v.method).into(), v.err_est.into()];
        if a.tau {
            if t == 0.0 {
                row.extend([Cell::Null, Cell::Null, Cell::Null]);
            } else {
                let d = tau(t, &eval, &diff)?;
                row.extend([d.tau.into(), d.dtau.into(), d.d2tau.into()]);
            }
        }
        Ok(row)
    })?;
    Ok(Report { command: "charfn", params: params(a), table, meta: Map::new() })
}

fn cmd_residual(a: &ResidualArgs) -> Result<Report, CliError> {
    let grid = if a.t.is_empty() { default_grid() } else { flat(&a.t) };
    let diff = DiffConfig::default();
    let what = format!("equation {}", tag(&a.equation));
    let rep: ResidualReport = match a.equation {
        EquationArg::P3 => {
            let s = integer_s(need(a.s, "s", &what)?, &what)?;
            report_sigma_p3(s, &grid, &SeriesConfig::default(), &diff)?
        }
        EquationArg::P5 => report_p5_finite(need(a.s, "s", &what)?, need(a.n, "N", &what)?, &grid, &diff)?,
        EquationArg::Hankel => report_hankel(
            need(a.n, "N", &what)?,
            need(a.alpha, "alpha", &what)?,
            need(a.lambda, "lambda", &what)?,
            &grid,
            &diff,
        )?,
        EquationArg::BesselFinite => report_bessel_finite(need(a.nu, "nu", &what)?, need(a.n, "N", &what)?, &grid, &diff)?,
        EquationArg::BesselInf => report_bessel_inf(need(a.nu, "nu", &what)?, &a.n_list, &grid, &diff)?,
    };
    let mut table = Table::new(&["t", "residual", "raw", "err_est"]);
    for i in 0..rep.grid.len() {
        table.rows.push(vec![rep.grid[i].into(), rep.residuals[i].into(), rep.raw[i].into(), rep.err_est[i].into()]);
    }
    let mut meta = Map::new();
    meta.insert("equation".into(), tag(&rep.equation).into());
    meta.insert("max_abs".into(), json_f64(rep.max_abs));
    meta.insert("diff_step".into(), json_f64(rep.diff_step));
    Ok(Report { command: "residual", params: params(a), table, meta })
}

fn cmd_bessel(a: &BesselArgs) -> Result<Report, CliError> {
    if let Some(&n) = a.n_list.iter().find(|&&n| n > PSI_N_MAX) {
        return Err(CliError::usage(format!("--n-list entry {n} exceeds {PSI_N_MAX}")));
    }
    let diff = DiffConfig::default();
    let quarter = 0.25 * a.nu * a.nu;
    let mut table = Table::new(&["t", "N", "psi", "xi", "h"]);
    let blocks = rows(&flat(&a.t), |t| {
        let mut out = Vec::new();
        for &n in &a.n_list {
            let p = BesselParams::new(a.nu, n, t)?;
            let psi = psi_n(&p)?.value;
            let xi = if t > 0.0 { Some(xi_n(&p, &diff)?.tau) } else { None };
            out.extend([t.into(), n.into(), psi.into(), xi.into(), xi.map(|x| quarter + x).into()]);
        }
        let h = if t > 0.0 && a.n_list.len() >= 2 { Some(h_nu_estimate(a.nu, t, &a.n_list, &diff)?.h) } else { None };
        out.extend([t.into(), "inf".into(), Cell::Null, Cell::Null, h.into()]);
        Ok(out)
    })?;
    for block in blocks {
        for row in block.chunks(5) {
            table.rows.push(row.to_vec());
        }
    }
    Ok(Report { command: "bessel", params: params(a), table, meta: Map::new() })
}

fn cmd_simulate(a: &SimulateArgs) -> Result<Report, CliError> {
    let kind = match a.ensemble {
        EnsembleArg::HuaPickrell => EnsembleKind::HuaPickrell { s: need(a.s, "s", "hua_pickrell")?, n: a.n },
        EnsembleArg::Lue => EnsembleKind::Lue { nu: need(a.nu, "nu", "lue")?, n: a.n },
        EnsembleArg::InverseLaguerre => EnsembleKind::InverseLaguerre { nu: need(a.nu, "nu", "inverse_laguerre")?, n: a.n },
    };
    let spec = EnsembleSpec {
        kind,
        seed: a.seed,
        n_samples: a.n_samples,
        mcmc: McmcParams {
            proposal_scale: a.proposal_scale,
            burn_in: a.burn_in,
            thinning: a.thinning,
            chains: a.chains,
            ..McmcParams::default()
        },
    };
    let grid = flat(&a.t);
    if matches!(a.stat, Stat::Charfn | Stat::Laplace) && grid.is_empty() {
        return Err(CliError::usage(format!("--stat {} needs --t", tag(&a.stat))));
    }
    let b = sample(&spec)?;
    let mut meta = Map::new();
    if let Some(d) = &b.diagnostics {
        meta.insert("diagnostics".into(), serde_json::to_value(d)?);
    }
    let est_cells = |e: &Estimate| -> Vec<Cell> { vec![e.value.into(), e.stderr.into(), e.n.into()] };
    let table = match a.stat {
        Stat::Samples => {
            let cols: Vec<String> = (1..=b.n).map(|j| format!("x{j}")).collect();
            Table { columns: cols, rows: b.rows().map(|r| r.iter().map(|&v| v.into()).collect()).collect() }
        }
        Stat::Mean => {
            let e = estimate_mean(&b, trace_statistic);
            let reference = match kind {
                EnsembleKind::Lue { nu, n } => Some(n as f64 + nu),
                EnsembleKind::InverseLaguerre { nu, .. } if nu > 0.0 => Some(2.0 / nu),
                _ => None,
            };
            let mut t = Table::new(&["value", "stderr", "n", "reference"]);
            let mut row = est_cells(&e);
            row.push(reference.into());
            t.rows.push(row);
            t
        }
        Stat::Charfn | Stat::Laplace => {
            let mut t = Table::new(&["t", "value", "stderr", "n", "reference", "imag", "imag_stderr"]);
            t.rows = rows(&grid, |x| {
                let (e, reference, imag) = if a.stat == Stat::Charfn {
                    let r = match kind {
                        EnsembleKind::HuaPickrell { s, n } if n <= PHI_FINITE_N_MAX => Some(phi_finite_N(s, n, x)?.value),
                        _ => None,
                    };
                    (empirical_charfn(&b, x), r, Some(empirical_charfn_imag(&b, x)))
                } else {
                    let r = match kind {
                        EnsembleKind::InverseLaguerre { nu, n } if n <= PSI_N_MAX && x >= 0.0 => {
                            Some(psi_n(&BesselParams::new(nu, n, x)?)?.value)
                        }
                        _ => None,
                    };
                    (empirical_laplace(&b, x), r, None)
                };
                let mut row = vec![x.into()];
                row.extend(est_cells(&e));
                row.push(reference.into());
                row.push(imag.map(|i| i.value).into());
                row.push(imag.map(|i| i.stderr).into());
                Ok(row)
            })?;
            t
        }
    };
    Ok(Report { command: "simulate", params: params(a), table, meta })
}

/// Returns the report and whether every criterion passed.
fn cmd_verify(a: &VerifyArgs) -> Result<(Report, bool), CliError> {
    let reports = run_suite(a.suite);
    let mut table = Table::new(&["criterion", "title", "check", "value", "target", "tol", "margin", "pass"]);
    for r in &reports {
        eprintln!("{r}");
        for c in &r.checks {
            table.rows.push(vec![
                (r.id as usize).into(),
                r.title.as_str().into(),
                c.name.as_str().into(),
                c.value.into(),
                c.target.into(),
                c.tol.into(),
                c.margin.into(),
                c.pass.into(),
            ]);
        }
    }
    let all = reports.iter().all(|r| r.pass);
    let mut meta = Map::new();
    meta.insert(
        "criteria".into(),
        Value::Array(
            reports
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "id": r.id, "title": r.title, "pass": r.pass, "error": r.error,
                        "elapsed_secs": json_f64(r.elapsed_secs), "budget_secs": json_f64(r.budget_secs),
                    })
                })
                .collect(),
        ),
    );
    meta.insert("pass".into(), all.into());
    Ok((Report { command: "verify", params: params(a), table, meta }, all))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Moment(_) => "moment",
        Command::Density(_) => "density",
        Command::Charfn(_) => "charfn",
        Command::Residual(_) => "residual",
        Command::Bessel(_) => "bessel",
        Command::Simulate(_) => "simulate",
        Command::Verify(_) => "verify",
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let (report, ok) = match &cli.command {
        Command::Moment(a) => (cmd_moment(a)?, true),
        Command::Density(a) => (cmd_density(a)?, true),
        Command::Charfn(a) => (cmd_charfn(a)?, true),
        Command::Residual(a) => (cmd_residual(a)?, true),
        Command::Bessel(a) => (cmd_bessel(a)?, true),
        Command::Simulate(a) => (cmd_simulate(a)?, true),
        Command::Verify(a) => cmd_verify(a)?,
    };
    emit(&report, cli.output, cli.out.as_deref(), cli.out_dir.as_deref())?;
    Ok(ok)
}

fn fail(e: &CliError, command: Option<&str>) -> ExitCode {
    eprintln!("{}", e.record(command));
    ExitCode::from(e.exit_code)
}

/// Command-line arguments with any `--config` file spliced in front.
fn resolve_args() -> Result<Vec<String>, CliError> {
    let mut args: Vec<String> = std::env::args().collect();
    let Some(path) = config::take_config(&mut args)? else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(format!("config {path}: {e}")))?;
    let expanded = config::expand(&text)?;
    let mut rest = args.split_off(1);
    if rest.first() == expanded.first() {
        rest.remove(0);
    }
    args.extend(expanded);
    args.extend(rest);
    Ok(args)
}

fn main() -> ExitCode {
    let args = match resolve_args() {
        Ok(a) => a,
        Err(e) => return fail(&e, None),
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::usage(e.render().to_string().trim_end()), None),
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => fail(&e, Some(command_name(&cli.command))),
    }
}
