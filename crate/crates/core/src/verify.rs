//! Numbered verification criteria shared by the command line and the test suite.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::bessel_inverse_laguerre::{psi_n, BesselParams};
use crate::diff::DiffConfig;
use crate::ensembles_mc::{
    empirical_charfn, empirical_laplace, estimate_mean, ks_critical_1pct, ks_statistic, sample_hua_pickrell,
    sample_inverse_laguerre, trace_statistic, EnsembleKind, EnsembleSpec, Estimate, McmcParams,
};
use crate::error::{Error, Result};
use crate::hua_charfn::{phi_finite_N, phi_finite_N_laguerre};
use crate::oracles::{
    adaptive_quad_try, aomoto, aomoto_by_quadrature, density_by_inversion, selberg_norm, selberg_norm_by_quadrature,
    winn_identity_check_n1, QuadConfig,
};
use crate::painleve_residuals::{
    boundary_report, default_grid, report_bessel_finite, report_hankel, report_p5_finite, report_sigma_p3,
    residual_bessel_inf, residual_bessel_inf_at_n, BoundaryKind, ResidualReport,
};
use crate::specfun::{bessel_i, hyp_pfq, SeriesConfig};
use crate::xs_distribution::{
    coeff_a, coeff_a_by_compositions, moment_r, moment_r_halfint, rho, rho_closed_form, rho_general_series,
    series_vanishing_check,
};

/// One comparison. `margin` is tol minus the observed deviation, so it is
/// nonnegative exactly when the check passes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub tol: f64,
    pub margin: f64,
    pub pass: bool,
}

impl CheckResult {
    fn with_deviation(name: String, value: f64, target: f64, tol: f64, dev: f64) -> Self {
        let pass = dev.is_finite() && dev <= tol;
        CheckResult {
            name,
            value,
            target,
            tol,
            margin: tol - dev,
            pass,
        }
    }

    pub fn abs(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Self::with_deviation(name.into(), value, target, tol, (value - target).abs())
    }

    pub fn rel(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        let dev = ((value - target) / target).abs();
        Self::with_deviation(name.into(), value, target, tol, dev)
    }

    /// |value| <= tol.
    pub fn bound(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self::with_deviation(name.into(), value, 0.0, tol, value.abs())
    }

    /// Estimate within k standard errors of the target.
    pub fn sigma(name: impl Into<String>, est: &Estimate, target: f64, k: f64) -> Self {
        Self::with_deviation(name.into(), est.value, target, k * est.stderr, (est.value - target).abs())
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        CheckResult {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            target: 1.0,
            tol: 0.0,
            margin: if ok { 0.0 } else { -1.0 },
            pass: ok,
        }
    }

    fn failed(name: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            value: f64::NAN,
            target: f64::NAN,
            tol: f64::NAN,
            margin: f64::NAN,
            pass: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: String,
    pub checks: Vec<CheckResult>,
    pub elapsed_secs: f64,
    pub budget_secs: f64,
    /// set when a routine failed outright instead of returning a value
    pub error: Option<String>,
    pub pass: bool,
}

impl CriterionReport {
    /// Worst margin among the checks, NaN if none ran.
    pub fn worst_margin(&self) -> f64 {
        self.checks.iter().map(|c| c.margin).reduce(f64::min).unwrap_or(f64::NAN)
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        write!(
            f,
            "criterion {:>2} {} {:<28} checks {:>3} failed {:>2} worst margin {:+.3e} time {:.2}s/{:.0}s",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.title,
            self.checks.len(),
            failed,
            self.worst_margin(),
            self.elapsed_secs,
            self.budget_secs,
        )?;
        if let Some(e) = &self.error {
            write!(f, " error: {e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Golden,
    HalfInteger,
    QuarterInteger,
    S0,
    Painleve,
    Boundary,
    Identities,
    Density,
    Vanishing,
    MonteCarlo,
    Coefficients,
}

impl Suite {
    pub const NAMES: [&'static str; 12] = [
        "all",
        "golden",
        "half_integer",
        "quarter_integer",
        "s0",
        "painleve",
        "boundary",
        "identities",
        "density",
        "vanishing",
        "monte_carlo",
        "coefficients",
    ];

    pub fn criteria(self) -> Vec<u8> {
        match self {
            Suite::All => (1..=11).collect(),
            Suite::Golden => vec![1],
            Suite::HalfInteger => vec![2],
            Suite::QuarterInteger => vec![3],
            Suite::S0 => vec![4],
            Suite::Painleve => vec![5],
            Suite::Boundary => vec![6],
            Suite::Identities => vec![7],
            Suite::Density => vec![8],
            Suite::Vanishing => vec![9],
            Suite::MonteCarlo => vec![10],
            Suite::Coefficients => vec![11],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        let all = [
            Suite::All,
            Suite::Golden,
            Suite::HalfInteger,
            Suite::QuarterInteger,
            Suite::S0,
            Suite::Painleve,
            Suite::Boundary,
            Suite::Identities,
            Suite::Density,
            Suite::Vanishing,
            Suite::MonteCarlo,
            Suite::Coefficients,
        ];
        Suite::NAMES
            .iter()
            .position(|n| *n == key)
            .map(|i| all[i])
            .ok_or_else(|| Error::domain("suite", format!("unknown suite {s:?}; expected one of {}", Suite::NAMES.join(", "))))
    }
}

const TITLES: [(&str, f64); 11] = [
    ("golden moment values", 1.0),
    ("half-integer moments", 1.0),
    ("quarter-integer moments", 1.0),
    ("s = 0 exactness", 30.0),
    ("Painleve residuals", 300.0),
    ("boundary conditions", 60.0),
    ("identity suite", 120.0),
    ("density suite", 120.0),
    ("vanishing property", 30.0),
    ("Monte Carlo closure", 180.0),
    ("coefficient expansion", 10.0),
];

/// Runs criterion `id` in 1..=11.
pub fn run_criterion(id: u8) -> Result<CriterionReport> {
    let body: fn() -> Result<Vec<CheckResult>> = match id {
        1 => golden,
        2 => half_integer,
        3 => quarter_integer,
        4 => s0_exactness,
        5 => painleve,
        6 => boundary,
        7 => identities,
        8 => density,
        9 => vanishing,
        10 => monte_carlo,
        11 => coefficients,
        _ => return Err(Error::domain("run_criterion", format!("criterion {id} outside 1..=11"))),
    };
    let (title, budget) = TITLES[id as usize - 1];
    let start = Instant::now();
    let (checks, error) = match body() {
        Ok(c) => (c, None),
        Err(e) => (vec![CheckResult::failed("evaluation")], Some(e.to_string())),
    };
    let elapsed = start.elapsed().as_secs_f64();
    let pass = error.is_none() && !checks.is_empty() && checks.iter().all(|c| c.pass);
    Ok(CriterionReport {
        id,
        title: title.to_string(),
        checks,
        elapsed_secs: elapsed,
        budget_secs: budget,
        error,
        pass,
    })
}

pub fn run_suite(suite: Suite) -> Vec<CriterionReport> {
    suite
        .criteria()
        .into_iter()
        .map(|id| run_criterion(id).expect("criterion ids come from the suite table"))
        .collect()
}

fn cfg() -> SeriesConfig {
    SeriesConfig::default()
}

fn r(s: u32, h: f64) -> Result<f64> {
    Ok(moment_r(s, Complex64::new(h, 0.0), &cfg())?.value.re)
}

fn golden() -> Result<Vec<CheckResult>> {
    Ok(vec![
        CheckResult::rel("R(1,1)", r(1, 1.0)?, 1.0 / 12.0, 1e-10),
        CheckResult::rel("R(2,1)", r(2, 1.0)?, 1.0 / 720.0, 1e-10),
        CheckResult::rel("R(2,2)", r(2, 2.0)?, 1.0 / 6720.0, 1e-10),
    ])
}

fn half_integer() -> Result<Vec<CheckResult>> {
    let c = cfg();
    let r1 = moment_r_halfint(1, 0, &c)?.value.re;
    let r21 = moment_r_halfint(2, 0, &c)?.value.re;
    let r23 = moment_r_halfint(2, 1, &c)?.value.re;
    let f1 = hyp_pfq(&[4.5, 1.0, 1.0], &[3.0, 6.0, 7.0], 8.0, &c)?.value;
    let f3 = hyp_pfq(&[6.5, 1.0, 1.0], &[5.0, 8.0, 9.0], 8.0, &c)?.value;
    let e2 = 2f64.exp();
    Ok(vec![
        CheckResult::abs("R(1,1/2)", r1, (e2 - 5.0) / (4.0 * PI), 1e-10),
        CheckResult::abs("R(2,1/2)", r21, 7.0 / (180.0 * PI) * (15.0 / 7.0 - f1), 1e-9),
        CheckResult::abs("R(2,3/2)", r23, 11.0 / (3360.0 * PI) * (-28.0 / 33.0 + f3), 1e-9),
    ])
}

fn quarter_integer() -> Result<Vec<CheckResult>> {
    let (i0, i1) = (bessel_i(0, 1.0), bessel_i(1, 1.0));
    let e = 1f64.exp();
    Ok(vec![
        CheckResult::abs("R(1,-1/4)", r(1, -0.25)?, 2.0 * e * (i0 - i1), 1e-9),
        CheckResult::abs("R(1,1/4)", r(1, 0.25)?, e / 3.0 * (3.0 * i1 - i0), 1e-9),
        CheckResult::abs("R(1,3/4)", r(1, 0.75)?, e / 30.0 * (5.0 * i0 - 9.0 * i1), 1e-9),
        CheckResult::abs("R(1,5/4)", r(1, 1.25)?, e / 140.0 * (5.0 * i0 - 3.0 * i1), 1e-9),
    ])
}

fn s0_exactness() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for n in [1usize, 2, 4, 8] {
        for t in [0.5, 1.0, 5.0] {
            let v = phi_finite_N(0.0, n, t)?.value;
            out.push(CheckResult::abs(format!("phi_{n}^(0)({t})"), v, (-0.5 * t).exp(), 1e-10));
        }
    }
    let spec = EnsembleSpec {
        kind: EnsembleKind::HuaPickrell { s: 0.0, n: 1 },
        seed: 20_240_601,
        n_samples: 100_000,
        mcmc: McmcParams::default(),
    };
    let b = sample_hua_pickrell(&spec)?;
    let ks = ks_statistic(&b.data, |x| 0.5 + x.atan() / PI);
    out.push(CheckResult::bound("KS N=1 vs Cauchy", ks, ks_critical_1pct(b.len())));
    Ok(out)
}

fn report_checks(label: &str, rep: &ResidualReport, tol: f64, out: &mut Vec<CheckResult>) {
    let worst = rep.residuals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let worst = if rep.residuals.iter().any(|v| !v.is_finite()) { f64::NAN } else { worst };
    out.push(CheckResult::bound(label, worst, tol));
}

fn painleve() -> Result<Vec<CheckResult>> {
    let grid = default_grid();
    let d = DiffConfig::default();
    let mut out = Vec::new();
    for s in [1u32, 2, 3] {
        let rep = report_sigma_p3(s, &grid, &cfg(), &d)?;
        report_checks(&format!("sigma-PIII s={s}"), &rep, 1e-6, &mut out);
    }
    for s in [0.5, 1.0, 2.0] {
        for n in [4usize, 8] {
            let rep = report_p5_finite(s, n, &grid, &d)?;
            report_checks(&format!("sigma-PV s={s} N={n}"), &rep, 1e-6, &mut out);
        }
    }
    for (n, alpha, lambda) in [(2usize, 0.5, 0.7), (3, -0.4, 1.3), (4, 1.0, 2.5)] {
        let rep = report_hankel(n, alpha, lambda, &grid, &d)?;
        report_checks(&format!("Hankel N={n} alpha={alpha} lambda={lambda}"), &rep, 1e-6, &mut out);
    }
    for nu in [0.5, 1.5, 2.0] {
        for n in [2usize, 4, 8] {
            let rep = report_bessel_finite(nu, n, &grid, &d)?;
            report_checks(&format!("xi_N nu={nu} N={n}"), &rep, 1e-6, &mut out);
        }
    }
    let n_list = [4usize, 8, 16];
    for nu in [1.5, 2.0] {
        for t in [0.5, 1.0] {
            let ext = residual_bessel_inf(nu, t, &n_list, &d)?;
            out.push(CheckResult::bound(format!("h^(nu) nu={nu} t={t} extrapolated"), ext.normalized, 1e-4));
            let per: Vec<f64> = n_list
                .iter()
                .map(|&n| residual_bessel_inf_at_n(nu, n, t, &d).map(|r| r.normalized.abs()))
                .collect::<Result<_>>()?;
            let decreasing = per.windows(2).all(|w| w[1] < w[0]) && ext.normalized.abs() < per[per.len() - 1];
            out.push(CheckResult::flag(format!("h^(nu) nu={nu} t={t} decreasing in N"), decreasing));
        }
    }
    Ok(out)
}

fn boundary() -> Result<Vec<CheckResult>> {
    let d = DiffConfig::default();
    let mut out = Vec::new();
    for kind in [BoundaryKind::Tau { s: 1 }, BoundaryKind::Tau { s: 2 }, BoundaryKind::Bessel { nu: 2.0 }] {
        let rep = boundary_report(kind, &d)?;
        let label = match kind {
            BoundaryKind::Tau { s } => format!("s={s}"),
            BoundaryKind::Bessel { nu } => format!("nu={nu}"),
        };
        for c in rep.checks.iter().filter(|c| c.pass.is_some()) {
            out.push(CheckResult::abs(format!("{} {label}", c.name), c.estimate, c.target, c.tol));
        }
    }
    Ok(out)
}

fn identities() -> Result<Vec<CheckResult>> {
    let q = QuadConfig::default();
    let mut out = Vec::new();
    for s in [-0.25, 0.5, 1.0, 2.0, 3.0] {
        for t in [0.5, 1.0, 5.0] {
            let w = winn_identity_check_n1(s, t, &q)?;
            out.push(CheckResult::bound(format!("Winn s={s} t={t}"), w.rel_gap, 1e-8));
        }
    }
    for n in 1..=2usize {
        for s in [0.0, 0.5, 1.0, 2.0] {
            out.push(CheckResult::rel(
                format!("Selberg N={n} s={s}"),
                selberg_norm_by_quadrature(n, s, &q)?,
                selberg_norm(n, s)?,
                1e-6,
            ));
        }
        for k in 0..=n {
            for alpha in [1.0, 2.5] {
                out.push(CheckResult::rel(
                    format!("Aomoto N={n} k={k} alpha={alpha}"),
                    aomoto_by_quadrature(n, k, alpha, &q)?,
                    aomoto(n, k, alpha)?,
                    1e-6,
                ));
            }
        }
    }
    for s in [1u32, 2] {
        for n in [2usize, 4, 8] {
            for t in [0.5, 1.0, 5.0] {
                let a = phi_finite_N(s as f64, n, t)?.value;
                let b = phi_finite_N_laguerre(s, n, t)?.value;
                out.push(CheckResult::abs(format!("phi routes s={s} N={n} t={t}"), a, b, 1e-9));
            }
        }
    }
    Ok(out)
}

fn density() -> Result<Vec<CheckResult>> {
    let q = QuadConfig::default();
    let c = cfg();
    let mut out = Vec::new();
    for s in 1..=3u32 {
        let half = adaptive_quad_try(|x| Ok(rho(s, x, &c)?.rho), 0.0, f64::INFINITY, &q.tightened(1e-2))?;
        out.push(CheckResult::abs(format!("int rho s={s}"), 2.0 * half.value, 1.0, 1e-6));
        for x in [0.0, 0.5, 1.0, 2.0, 5.0] {
            out.push(CheckResult::abs(
                format!("rho vs inversion s={s} x={x}"),
                rho(s, x, &c)?.rho,
                density_by_inversion(s, x, &q)?,
                1e-7,
            ));
        }
    }
    for x in [0.0, 0.5, 1.0, 1.5, 2.0] {
        out.push(CheckResult::rel(
            format!("series vs 2F2 s=2 x={x}"),
            rho_general_series(2, x)?.rho,
            rho_closed_form(2, x, &c)?.rho,
            1e-9,
        ));
    }
    Ok(out)
}

fn vanishing() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for s in 1..=3u32 {
        for m in 0..s as usize {
            out.push(CheckResult::bound(format!("s={s} h={m}+1/2"), series_vanishing_check(s, m)?, 1e-9));
        }
    }
    Ok(out)
}

fn monte_carlo() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let spec = EnsembleSpec {
        kind: EnsembleKind::HuaPickrell { s: 1.0, n: 8 },
        seed: 20_240_602,
        n_samples: 100_000,
        mcmc: McmcParams::default(),
    };
    let hp = sample_hua_pickrell(&spec)?;
    let est = empirical_charfn(&hp, 1.0);
    out.push(CheckResult::sigma("HP s=1 N=8 charfn t=1", &est, phi_finite_N(1.0, 8, 1.0)?.value, 3.0));
    let (nu, n) = (1.5, 8usize);
    let il = sample_inverse_laguerre(nu, n, 20_240_603, 100_000)?;
    for t in [0.5, 1.0, 2.0] {
        let est = empirical_laplace(&il, t);
        let target = psi_n(&BesselParams::new(nu, n, t)?)?.value;
        out.push(CheckResult::sigma(format!("IL nu={nu} N={n} Laplace t={t}"), &est, target, 3.0));
    }
    let mean = estimate_mean(&il, trace_statistic);
    out.push(CheckResult::sigma(format!("IL nu={nu} N={n} mean"), &mean, 2.0 / nu, 3.0));
    Ok(out)
}

fn coefficients() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for s in [2u32, 3, 5] {
        for k in 0..=4usize {
            out.push(CheckResult::abs(
                format!("a_{k}({s})"),
                coeff_a(s, k)?,
                coeff_a_by_compositions(s, k)?,
                1e-12,
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            let s: Suite = name.parse().unwrap();
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{name}\""));
        }
        assert!("nope".parse::<Suite>().is_err());
        assert!(run_criterion(12).is_err());
    }

    #[test]
    fn check_margins() {
        assert!(CheckResult::abs("a", 1.0, 1.0 + 1e-12, 1e-10).pass);
        assert!(!CheckResult::rel("b", 1.1, 1.0, 1e-3).pass);
        assert!(!CheckResult::bound("c", f64::NAN, 1.0).pass);
        let c = CheckResult::bound("d", 0.25, 1.0);
        assert_eq!(c.margin, 0.75);
    }

    #[test]
    fn fast_criteria_pass() {
        for id in [1u8, 2, 3, 9, 11] {
            let r = run_criterion(id).unwrap();
            assert!(r.pass, "{r}\n{:#?}", r.checks);
        }
    }
}
