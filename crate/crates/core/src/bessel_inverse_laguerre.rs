//! Laplace transform of the inverse-point sum of the Laguerre ensemble and its hard-edge limit.

use serde::{Deserialize, Serialize};

use crate::diff::{extrapolate_to_zero, DiffConfig};
use crate::error::{Error, Result};
use crate::gram;
use crate::hua_charfn::{tau, LogTransform, TauValue};
use crate::oracles::{adaptive_quad, bessel_k_by_integral, QuadConfig};
use crate::specfun::{bessel_j, det_logspace, ln_gamma, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselParams {
    pub nu: f64,
    pub n: usize,
    pub t: f64,
}

impl BesselParams {
    pub fn new(nu: f64, n: usize, t: f64) -> Result<Self> {
        let p = BesselParams { nu, n, t };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > -1.0) {
            return Err(Error::domain("BesselParams", format!("nu = {} must exceed -1", self.nu)));
        }
        if self.n == 0 {
            return Err(Error::domain("BesselParams", "N must be positive"));
        }
        if !(self.t >= 0.0) || !self.t.is_finite() {
            return Err(Error::domain("BesselParams", format!("t = {} must be nonnegative", self.t)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaplaceMethod {
    HankelQuadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceValue {
    pub t: f64,
    pub value: f64,
    pub err_est: f64,
    pub method: LaplaceMethod,
}

/// Largest N accepted by [`psi_n`].
pub const PSI_N_MAX: usize = 32;

/// psi_N(t) = E exp(-t sum_j 1/(N x_j)) under the Laguerre ensemble with weight x^nu e^{-x}.
pub fn psi_n(p: &BesselParams) -> Result<LaplaceValue> {
    p.validate()?;
    if p.n > PSI_N_MAX {
        return Err(Error::domain("psi_N", format!("N = {} exceeds {PSI_N_MAX}", p.n)));
    }
    let r = gram::log_hard_edge_ratio(p.n, p.nu, p.t / p.n as f64)?;
    let value = r.value.exp();
    Ok(LaplaceValue {
        t: p.t,
        value,
        err_est: value * r.err_est,
        method: LaplaceMethod::HankelQuadrature,
    })
}

/// psi_N from adaptive quadrature of the moments m_jk(t) = int x^{j+k+nu} e^{-x-t/(Nx)} dx.
pub fn psi_n_by_quadrature(p: &BesselParams, cfg: &QuadConfig) -> Result<f64> {
    p.validate()?;
    if p.t == 0.0 {
        return Ok(1.0);
    }
    let c = p.t / p.n as f64;
    let inner = cfg.tightened(1e-4);
    let n = p.n;
    let mut ratio = Vec::with_capacity(2 * n - 1);
    for m in 0..2 * n - 1 {
        let a = m as f64 + p.nu;
        // x = e^u; scaled by Gamma(a+1) so every entry is O(1)
        let lg = ln_gamma(a + 1.0);
        let hi = (a + 1.0).max(1.0) + 40.0 + 6.0 * (a + 1.0).sqrt();
        let v = adaptive_quad(
            |u| {
                let x = u.exp();
                ((a + 1.0) * u - x - c / x - lg).exp()
            },
            (c / 60.0).ln().min(-1.0),
            hi.ln(),
            &inner,
        )?;
        ratio.push(v.value);
    }
    // det[m_{j+k}] / det[Gamma(j+k+nu+1)]; entries are rescaled row and column-wise
    let scale = |j: usize, k: usize| (ln_gamma((j + k) as f64 + p.nu + 1.0)).exp();
    let mt = Matrix::from_fn(n, |j, k| ratio[j + k] * scale(j, k));
    let m0 = Matrix::from_fn(n, scale);
    let (s1, l1) = det_logspace(&mt)?;
    let (s0, l0) = det_logspace(&m0)?;
    if s1 * s0 <= 0.0 {
        return Err(Error::consistency("psi_N", "non-positive moment determinant"));
    }
    Ok((l1 - l0).exp())
}

/// psi_1(t) = 2 t^{(nu+1)/2} K_{nu+1}(2 sqrt t) / Gamma(nu+1), with K from its integral representation.
pub fn psi_1_closed_form(nu: f64, t: f64, cfg: &QuadConfig) -> Result<f64> {
    if t == 0.0 {
        return Ok(1.0);
    }
    let k = bessel_k_by_integral(nu + 1.0, 2.0 * t.sqrt(), cfg)?;
    Ok(2.0 * k * (0.5 * (nu + 1.0) * t.ln() - ln_gamma(nu + 1.0)).exp())
}

/// ln psi_N as a differentiable transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiEvaluator {
    pub nu: f64,
    pub n: usize,
}

impl LogTransform for PsiEvaluator {
    fn log_value(&self, t: f64, _center: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::domain("psi_N", "differentiation stencil left (0, inf)"));
        }
        Ok(gram::log_hard_edge_ratio(self.n, self.nu, t / self.n as f64)?.value)
    }
}

/// xi_N(t) = t d/dt ln psi_N(t) with its first two derivatives.
pub fn xi_n(p: &BesselParams, diff: &DiffConfig) -> Result<TauValue> {
    p.validate()?;
    if !(p.t > 0.0) {
        return Err(Error::domain("xi_N", "t must be positive"));
    }
    if p.n > PSI_N_MAX {
        return Err(Error::domain("xi_N", format!("N = {} exceeds {PSI_N_MAX}", p.n)));
    }
    tau(p.t, &PsiEvaluator { nu: p.nu, n: p.n }, diff)
}

/// h^(nu)(t) = nu^2/4 + lim_N xi_N(t), with derivatives, extrapolated in 1/N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HNuEstimate {
    pub nu: f64,
    pub t: f64,
    pub h: f64,
    pub dh: f64,
    pub d2h: f64,
    /// last extrapolation increments for (h, dh, d2h)
    pub err: [f64; 3],
    /// whether |xi_N - xi_{N'}| shrinks along N_list
    pub monotone: bool,
    pub n_list: Vec<usize>,
    pub per_n: Vec<TauValue>,
}

pub fn h_nu_estimate(nu: f64, t: f64, n_list: &[usize], diff: &DiffConfig) -> Result<HNuEstimate> {
    if n_list.len() < 2 || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("h_nu_estimate", "N_list must be strictly ascending with at least 2 entries"));
    }
    let per_n = n_list
        .iter()
        .map(|&n| xi_n(&BesselParams::new(nu, n, t)?, diff))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = n_list.iter().map(|&n| 1.0 / n as f64).collect();
    let pick = |f: fn(&TauValue) -> f64| per_n.iter().map(f).collect::<Vec<f64>>();
    let (x0, e0) = extrapolate_to_zero(&xs, &pick(|v| v.tau))?;
    let (x1, e1) = extrapolate_to_zero(&xs, &pick(|v| v.dtau))?;
    let (x2, e2) = extrapolate_to_zero(&xs, &pick(|v| v.d2tau))?;
    let gaps: Vec<f64> = per_n.windows(2).map(|w| (w[1].tau - w[0].tau).abs()).collect();
    let monotone = gaps.windows(2).all(|g| g[1] <= g[0]);
    Ok(HNuEstimate {
        nu,
        t,
        h: 0.25 * nu * nu + x0,
        dh: x1,
        d2h: x2,
        err: [e0, e1, e2],
        monotone,
        n_list: n_list.to_vec(),
        per_n,
    })
}

/// E[e^k] for the inverse-gamma law 2^{nu+1}/Gamma(nu+1) x^{-nu-2} e^{-2/x}.
pub fn inverse_gamma_moment(nu: f64, k: u32) -> Result<f64> {
    if !(nu > -1.0) {
        return Err(Error::domain("inverse_gamma_moment", format!("nu = {nu} must exceed -1")));
    }
    let kf = k as f64;
    if kf >= nu + 1.0 {
        return Err(Error::domain(
            "inverse_gamma_moment",
            format!("moment of order {k} diverges; need k < nu + 1 = {}", nu + 1.0),
        ));
    }
    Ok((kf * 2f64.ln() + ln_gamma(nu + 1.0 - kf) - ln_gamma(nu + 1.0)).exp())
}

/// Bessel kernel (sqrt x J_{nu+1}(sqrt x) J_nu(sqrt y) - sqrt y J_{nu+1}(sqrt y) J_nu(sqrt x)) / (2(x-y)).
/// Points are limited to (0, 400] by the J series.
pub fn bessel_kernel(nu: f64, x: f64, y: f64) -> Result<f64> {
    if !(nu > -1.0) {
        return Err(Error::domain("bessel_kernel", format!("nu = {nu} must exceed -1")));
    }
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::domain("bessel_kernel", "points must be positive"));
    }
    if (x - y).abs() < 1e-6 {
        // A(x) = sqrt x J_{nu+1}(sqrt x), B(x) = J_nu(sqrt x); K = (A'B - AB')/2
        let m = 0.5 * (x + y);
        let z = m.sqrt();
        let j0 = bessel_j(nu, z)?;
        let j1 = bessel_j(nu + 1.0, z)?;
        let j2 = bessel_j(nu + 2.0, z)?;
        let da = ((nu + 2.0) * j1 - z * j2) / (2.0 * z);
        let db = ((nu / z) * j0 - j1) / (2.0 * z);
        return Ok(0.5 * (da * j0 - z * j1 * db));
    }
    let (sx, sy) = (x.sqrt(), y.sqrt());
    let num = sx * bessel_j(nu + 1.0, sx)? * bessel_j(nu, sy)? - sy * bessel_j(nu + 1.0, sy)? * bessel_j(nu, sx)?;
    Ok(num / (2.0 * (x - y)))
}
