//! Richardson-extrapolated central differences and polynomial extrapolation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Step policy for numerical differentiation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffConfig {
    /// initial step as a fraction of |x|
    pub h0_rel: f64,
    /// cap on the initial step
    pub h_max: f64,
    /// ratio between successive steps
    pub shrink: f64,
    /// number of tableau rows
    pub levels: usize,
}

impl Default for DiffConfig {
    fn default() -> Self {
        DiffConfig {
            h0_rel: 0.2,
            h_max: 1.0,
            shrink: 1.4,
            levels: 10,
        }
    }
}

impl DiffConfig {
    /// Initial step at x; the 2h stencil stays inside (0, 2x) for h0_rel < 1/2.
    pub fn initial_step(&self, x: f64) -> f64 {
        (self.h0_rel * x.abs()).min(self.h_max)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h0_rel > 0.0 && self.h0_rel < 0.5) {
            return Err(Error::domain("DiffConfig", "h0_rel must lie in (0, 1/2)"));
        }
        if !(self.h_max > 0.0) || !(self.shrink > 1.0) || self.levels < 2 {
            return Err(Error::domain("DiffConfig", "need h_max > 0, shrink > 1 and at least 2 levels"));
        }
        Ok(())
    }
}

/// f(x) and its first three derivatives with per-order error estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub value: f64,
    pub d: [f64; 3],
    pub err: [f64; 3],
    pub step: f64,
}

struct Tableau {
    prev: Vec<f64>,
    best: f64,
    best_err: f64,
    stalled: bool,
}

impl Tableau {
    fn new() -> Self {
        Tableau {
            prev: Vec::new(),
            best: f64::NAN,
            best_err: f64::INFINITY,
            stalled: false,
        }
    }

    fn push(&mut self, raw: f64, shrink2: f64) {
        let mut row = vec![raw];
        let mut fac = 1.0;
        let mut diag_err = f64::INFINITY;
        for j in 1..=self.prev.len() {
            fac *= shrink2;
            let v = row[j - 1] + (row[j - 1] - self.prev[j - 1]) / (fac - 1.0);
            let e = (v - row[j - 1]).abs().max((v - self.prev[j - 1]).abs());
            if e <= self.best_err {
                self.best_err = e;
                self.best = v;
            }
            diag_err = e;
            row.push(v);
        }
        if self.prev.is_empty() {
            self.best = raw;
        } else {
            let last = row.len() - 1;
            if (row[last] - self.prev[last - 1]).abs() >= 2.0 * self.best_err && diag_err > self.best_err {
                self.stalled = true;
            }
        }
        self.prev = row;
    }
}

/// First three derivatives of f at x by Ridders-style extrapolation.
pub fn derivatives3<F>(f: F, x: f64, h0: f64, cfg: &DiffConfig) -> Result<Derivatives>
where
    F: Fn(f64) -> Result<f64>,
{
    cfg.validate()?;
    if !(h0 > 0.0) || !h0.is_finite() {
        return Err(Error::accuracy("derivatives3", "initial step underflow", f64::NAN));
    }
    let f0 = f(x)?;
    let shrink2 = cfg.shrink * cfg.shrink;
    let mut tabs = [Tableau::new(), Tableau::new(), Tableau::new()];
    let mut h = h0;
    let mut used = h0;
    for _ in 0..cfg.levels {
        if h < 1e-300 {
            return Err(Error::accuracy("derivatives3", "step underflow", f64::NAN));
        }
        let fp1 = f(x + h)?;
        let fm1 = f(x - h)?;
        let fp2 = f(x + 2.0 * h)?;
        let fm2 = f(x - 2.0 * h)?;
        let d1 = (fp1 - fm1) / (2.0 * h);
        let d2 = ((fp1 - f0) + (fm1 - f0)) / (h * h);
        let d3 = ((fp2 - fm2) - 2.0 * (fp1 - fm1)) / (2.0 * h * h * h);
        tabs[0].push(d1, shrink2);
        tabs[1].push(d2, shrink2);
        tabs[2].push(d3, shrink2);
        used = h;
        if tabs.iter().all(|t| t.stalled) {
            break;
        }
        h /= cfg.shrink;
    }
    Ok(Derivatives {
        value: f0,
        d: [tabs[0].best, tabs[1].best, tabs[2].best],
        err: [tabs[0].best_err, tabs[1].best_err, tabs[2].best_err],
        step: used,
    })
}

/// Value at 0 of the interpolating polynomial through (xs, ys) (Neville), plus the last correction.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(Error::domain("extrapolate_to_zero", "need matching nonempty abscissae and values"));
    }
    let n = xs.len();
    let mut p = ys.to_vec();
    let mut last_inc = if n == 1 { f64::INFINITY } else { 0.0 };
    for lev in 1..n {
        for i in 0..n - lev {
            let (a, b) = (xs[i], xs[i + lev]);
            if a == b {
                return Err(Error::domain("extrapolate_to_zero", "repeated abscissa"));
            }
            let v = (b * p[i] - a * p[i + 1]) / (b - a);
            if i == n - lev - 1 {
                last_inc = (v - p[i + 1]).abs();
            }
            p[i] = v;
        }
    }
    Ok((p[0], last_inc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_derivatives() {
        let cfg = DiffConfig::default();
        let x = 0.7;
        let d = derivatives3(|t| Ok(t.exp()), x, cfg.initial_step(x), &cfg).unwrap();
        for k in 0..3 {
            assert!((d.d[k] - x.exp()).abs() < 1e-10 * x.exp(), "order {}", k + 1);
        }
        assert_eq!(d.value, x.exp());
    }

    #[test]
    fn log_derivatives_near_origin() {
        // f = ln t at small t, stencil must stay in t > 0
        let cfg = DiffConfig::default();
        let x = 0.05;
        let d = derivatives3(|t| if t > 0.0 { Ok(t.ln()) } else { Err(Error::domain("ln", "t <= 0")) }, x, cfg.initial_step(x), &cfg)
            .unwrap();
        assert!((d.d[0] - 1.0 / x).abs() < 1e-9 / x);
        assert!((d.d[1] + 1.0 / (x * x)).abs() < 1e-8 / (x * x));
        assert!((d.d[2] - 2.0 / (x * x * x)).abs() < 1e-7 / (x * x * x));
    }

    #[test]
    fn cubic_is_exact() {
        let cfg = DiffConfig::default();
        let d = derivatives3(|t| Ok(t * t * t - 2.0 * t), 1.5, 0.3, &cfg).unwrap();
        assert!((d.d[0] - (3.0 * 2.25 - 2.0)).abs() < 1e-12);
        assert!((d.d[1] - 9.0).abs() < 1e-11);
        assert!((d.d[2] - 6.0).abs() < 1e-10);
    }

    #[test]
    fn neville_recovers_polynomial() {
        let xs = [0.5, 0.25, 0.125, 0.0625];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 2.0 * x + 5.0 * x * x - x * x * x).collect();
        let (v, _) = extrapolate_to_zero(&xs, &ys).unwrap();
        assert!((v - 3.0).abs() < 1e-13);
        assert!(extrapolate_to_zero(&[1.0, 1.0], &[2.0, 3.0]).is_err());
    }
}
