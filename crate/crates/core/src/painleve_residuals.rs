//! Residuals of the sigma-form Painleve equations satisfied by tau, H_N, xi_N and h.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bessel_inverse_laguerre::{h_nu_estimate, xi_n, BesselParams};
use crate::diff::{extrapolate_to_zero, DiffConfig};
use crate::error::{Error, Result};
use crate::gram;
use crate::hua_charfn::{tau, LogTransform, PhiEvaluator};
use crate::specfun::SeriesConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equation {
    SigmaP3Inf,
    P5FiniteN,
    HankelSigma,
    BesselInf,
    BesselFiniteN,
}

/// One residual LHS - RHS at a point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub t: f64,
    pub raw: f64,
    /// raw / max(1, largest |term|)
    pub normalized: f64,
    /// propagated from the derivative error estimates, on the normalized scale
    pub err_est: f64,
    pub step: f64,
    pub terms: Vec<f64>,
}

/// Builds a residual from its additive terms and propagates derivative errors
/// by re-evaluating with each input perturbed.
fn assemble<F>(t: f64, x: [f64; 3], err: [f64; 3], step: f64, terms_of: F) -> Residual
where
    F: Fn([f64; 3]) -> Vec<f64>,
{
    let terms = terms_of(x);
    let raw: f64 = terms.iter().sum();
    let scale = terms.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut prop = f64::EPSILON * terms.iter().map(|v| v.abs()).sum::<f64>();
    for i in 0..3 {
        if err[i] > 0.0 {
            let mut y = x;
            y[i] += err[i];
            prop += (terms_of(y).iter().sum::<f64>() - raw).abs();
        }
    }
    Residual {
        t,
        raw,
        normalized: raw / scale,
        err_est: prop / scale,
        step,
        terms,
    }
}

/// (t tau'')^2 + 4t tau'^3 - (4s^2 + 4tau) tau'^2 - t tau' + tau.
pub fn residual_sigma_p3<E: LogTransform + ?Sized>(s: f64, eval: &E, t: f64, diff: &DiffConfig) -> Result<Residual> {
    let v = tau(t, eval, diff)?;
    Ok(assemble(t, [v.tau, v.dtau, v.d2tau], v.err, v.step, |[f, d1, d2]| {
        vec![
            (t * d2).powi(2),
            4.0 * t * d1.powi(3),
            -(4.0 * s * s + 4.0 * f) * d1 * d1,
            -t * d1,
            f,
        ]
    }))
}

/// The finite-N sigma-Painleve V residual for tau_N built from any phi_N evaluator.
pub fn residual_p5_finite_with<E: LogTransform + ?Sized>(
    s: f64,
    n: usize,
    eval: &E,
    t: f64,
    diff: &DiffConfig,
) -> Result<Residual> {
    let v = tau(t, eval, diff)?;
    let nf = n as f64;
    Ok(assemble(t, [v.tau, v.dtau, v.d2tau], v.err, v.step, |[f, d1, d2]| {
        vec![
            (t * d2).powi(2),
            4.0 * t * d1.powi(3),
            -(4.0 * s * s + 4.0 * f + t * t / (nf * nf)) * d1 * d1,
            -t * (1.0 + 2.0 * s / nf - 2.0 * f / (nf * nf)) * d1,
            (1.0 + 2.0 * s / nf - f / (nf * nf)) * f,
        ]
    }))
}

/// Finite-N residual with phi_N from the Hankel determinant.
pub fn residual_p5_finite(s: f64, n: usize, t: f64, diff: &DiffConfig) -> Result<Residual> {
    residual_p5_finite_with(s, n, &PhiEvaluator::FiniteN { s, n }, t, diff)
}

/// ln F_N(t) for the weight (y+t)^lambda y^alpha e^{-y}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HankelEvaluator {
    pub n: usize,
    pub alpha: f64,
    pub lambda: f64,
}

impl LogTransform for HankelEvaluator {
    fn log_value(&self, t: f64, _center: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::domain("residual_hankel", "differentiation stencil left (0, inf)"));
        }
        Ok(gram::log_hankel_det(self.n, self.alpha, self.lambda, t)?.value)
    }
}

/// (tH'')^2 - (tH' - H + H'(2N+a+l) + N l)^2 + 4H'(tH' - H + N(N+a+l))(H' + l).
pub fn residual_hankel(n: usize, alpha: f64, lambda: f64, t: f64, diff: &DiffConfig) -> Result<Residual> {
    if !(t > 0.0) {
        return Err(Error::domain("residual_hankel", "t must be positive"));
    }
    let v = tau(t, &HankelEvaluator { n, alpha, lambda }, diff)?;
    let nf = n as f64;
    Ok(assemble(t, [v.tau, v.dtau, v.d2tau], v.err, v.step, |[h, d1, d2]| {
        let a = t * d1 - h + d1 * (2.0 * nf + alpha + lambda) + nf * lambda;
        let b = t * d1 - h + nf * (nf + alpha + lambda);
        vec![(t * d2).powi(2), -a * a, 4.0 * d1 * b * (d1 + lambda)]
    }))
}

/// (t xi'')^2 + 4t xi'^3 - (nu^2 + 4xi + 4t/N) xi'^2 - (2nu - 4xi/N) xi' - 1.
pub fn residual_bessel_finite(nu: f64, n: usize, t: f64, diff: &DiffConfig) -> Result<Residual> {
    let v = xi_n(&BesselParams::new(nu, n, t)?, diff)?;
    let nf = n as f64;
    Ok(assemble(t, [v.tau, v.dtau, v.d2tau], v.err, v.step, |[x, d1, d2]| {
        vec![
            (t * d2).powi(2),
            4.0 * t * d1.powi(3),
            -(nu * nu + 4.0 * x + 4.0 * t / nf) * d1 * d1,
            -(2.0 * nu - 4.0 * x / nf) * d1,
            -1.0,
        ]
    }))
}

/// (t h'')^2 - 4h'^2 (h - t h') - 2 nu h' - 1 with h extrapolated over `n_list`.
pub fn residual_bessel_inf(nu: f64, t: f64, n_list: &[usize], diff: &DiffConfig) -> Result<Residual> {
    let e = h_nu_estimate(nu, t, n_list, diff)?;
    let step = e.per_n.iter().map(|v| v.step).fold(0.0, f64::max);
    // derivative noise from the largest N plus the extrapolation increment
    let last = e.per_n.last().expect("two or more N");
    let err = [
        e.err[0].abs() + last.err[0],
        e.err[1].abs() + last.err[1],
        e.err[2].abs() + last.err[2],
    ];
    Ok(assemble(t, [e.h, e.dh, e.d2h], err, step, |[h, d1, d2]| {
        vec![(t * d2).powi(2), -4.0 * d1 * d1 * (h - t * d1), -2.0 * nu * d1, -1.0]
    }))
}

/// The same residual with h replaced by nu^2/4 + xi_N at a single N, without extrapolation.
pub fn residual_bessel_inf_at_n(nu: f64, n: usize, t: f64, diff: &DiffConfig) -> Result<Residual> {
    let v = xi_n(&BesselParams::new(nu, n, t)?, diff)?;
    let h = 0.25 * nu * nu + v.tau;
    Ok(assemble(t, [h, v.dtau, v.d2tau], v.err, v.step, |[h, d1, d2]| {
        vec![(t * d2).powi(2), -4.0 * d1 * d1 * (h - t * d1), -2.0 * nu * d1, -1.0]
    }))
}

// ---------------------------------------------------------------------------
// reports

/// Parameters recorded with a report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ResidualParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub equation: Equation,
    pub grid: Vec<f64>,
    /// normalized residuals, in grid order
    pub residuals: Vec<f64>,
    pub raw: Vec<f64>,
    pub err_est: Vec<f64>,
    pub max_abs: f64,
    pub diff_step: f64,
    pub params: ResidualParams,
}

/// 16 geometric points in [0.05, 8].
pub fn default_grid() -> Vec<f64> {
    let (a, b) = (0.05f64, 8.0f64);
    (0..16).map(|i| a * (b / a).powf(i as f64 / 15.0)).collect()
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::domain("residual grid", "grid points must be positive and finite"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("residual grid", "grid must be strictly increasing"));
    }
    Ok(())
}

/// Runs one residual over a grid in parallel; the order of results follows the grid.
pub fn build_report<F>(equation: Equation, params: ResidualParams, grid: &[f64], f: F) -> Result<ResidualReport>
where
    F: Fn(f64) -> Result<Residual> + Sync,
{
    check_grid(grid)?;
    let rows = grid.par_iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport {
        equation,
        grid: grid.to_vec(),
        residuals: rows.iter().map(|r| r.normalized).collect(),
        raw: rows.iter().map(|r| r.raw).collect(),
        err_est: rows.iter().map(|r| r.err_est).collect(),
        max_abs: rows.iter().map(|r| r.normalized.abs()).fold(0.0, f64::max),
        diff_step: rows.iter().map(|r| r.step).fold(0.0, f64::max),
        params,
    })
}

pub fn report_sigma_p3(s: u32, grid: &[f64], cfg: &SeriesConfig, diff: &DiffConfig) -> Result<ResidualReport> {
    let eval = PhiEvaluator::Exact { s, cfg: *cfg };
    let params = ResidualParams { s: Some(s as f64), ..Default::default() };
    build_report(Equation::SigmaP3Inf, params, grid, |t| residual_sigma_p3(s as f64, &eval, t, diff))
}

pub fn report_p5_finite(s: f64, n: usize, grid: &[f64], diff: &DiffConfig) -> Result<ResidualReport> {
    let params = ResidualParams { s: Some(s), n: Some(n), ..Default::default() };
    build_report(Equation::P5FiniteN, params, grid, |t| residual_p5_finite(s, n, t, diff))
}

pub fn report_hankel(n: usize, alpha: f64, lambda: f64, grid: &[f64], diff: &DiffConfig) -> Result<ResidualReport> {
    let params = ResidualParams {
        n: Some(n),
        alpha: Some(alpha),
        lambda: Some(lambda),
        ..Default::default()
    };
    build_report(Equation::HankelSigma, params, grid, |t| residual_hankel(n, alpha, lambda, t, diff))
}

pub fn report_bessel_finite(nu: f64, n: usize, grid: &[f64], diff: &DiffConfig) -> Result<ResidualReport> {
    let params = ResidualParams { nu: Some(nu), n: Some(n), ..Default::default() };
    build_report(Equation::BesselFiniteN, params, grid, |t| residual_bessel_finite(nu, n, t, diff))
}

pub fn report_bessel_inf(nu: f64, n_list: &[usize], grid: &[f64], diff: &DiffConfig) -> Result<ResidualReport> {
    let params = ResidualParams { nu: Some(nu), n_list: Some(n_list.to_vec()), ..Default::default() };
    build_report(Equation::BesselInf, params, grid, |t| residual_bessel_inf(nu, t, n_list, diff))
}

// ---------------------------------------------------------------------------
// boundary behaviour at t = 0+

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum BoundaryKind {
    /// tau^(s)(0+) and tau^(s)'(0+)
    Tau { s: u32 },
    /// h^(nu)(0+) and h^(nu)'(0+), with h extrapolated over N
    Bessel { nu: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCheck {
    pub name: String,
    pub estimate: f64,
    pub target: f64,
    pub tol: f64,
    pub err_est: f64,
    /// None where no boundary value is known for the parameter
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryReport {
    pub kind: BoundaryKind,
    pub t_grid: Vec<f64>,
    pub checks: Vec<BoundaryCheck>,
}

/// N values used to extrapolate h^(nu) at small t.
pub const BOUNDARY_N_LIST: [usize; 3] = [4, 8, 16];

pub fn boundary_report(kind: BoundaryKind, diff: &DiffConfig) -> Result<BoundaryReport> {
    let t_grid = vec![0.01, 0.02, 0.04, 0.08];
    let mut vals = Vec::new();
    let mut ders = Vec::new();
    for &t in &t_grid {
        let (v, d) = match kind {
            BoundaryKind::Tau { s } => {
                let r = tau(t, &PhiEvaluator::Exact { s, cfg: SeriesConfig::default() }, diff)?;
                (r.tau, r.dtau)
            }
            BoundaryKind::Bessel { nu } => {
                let r = h_nu_estimate(nu, t, &BOUNDARY_N_LIST, diff)?;
                (r.h, r.dh)
            }
        };
        vals.push(v);
        ders.push(d);
    }
    let (v0, ev) = extrapolate_to_zero(&t_grid, &vals)?;
    let (d0, ed) = extrapolate_to_zero(&t_grid, &ders)?;
    let check = |name: &str, est: f64, target: f64, tol: f64, err: f64, known: bool| BoundaryCheck {
        name: name.to_string(),
        estimate: est,
        target,
        tol,
        err_est: err.abs(),
        pass: known.then(|| (est - target).abs() <= tol),
    };
    let checks = match kind {
        BoundaryKind::Tau { s } => {
            let sf = s as f64;
            vec![
                check("tau(0+)", v0, 0.0, 1e-5, ev, sf > 0.0),
                check("tau'(0+)", d0, 0.0, 1e-4, ed, sf > 0.5),
            ]
        }
        BoundaryKind::Bessel { nu } => vec![
            check("h(0+)", v0, 0.25 * nu * nu, 1e-5, ev, nu > 0.0),
            check("h'(0+)", d0, -1.0 / nu, 1e-4, ed, nu > 1.0),
        ],
    };
    Ok(BoundaryReport { kind, t_grid, checks })
}
