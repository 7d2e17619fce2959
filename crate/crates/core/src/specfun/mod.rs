//! Special functions and small dense linear algebra.

mod bessel;
mod combinat;
mod gamma;
mod hyper;
mod linalg;

pub use bessel::{bessel_i, bessel_j, BESSEL_J_MAX_ARG};
pub use combinat::{binomial, compositions, Compositions};
pub use gamma::{
    barnes_g, gamma, ln_gamma, log_barnes_g, log_gamma, pochhammer, pochhammer_c,
    pochhammer_neg2h_deriv, EULER_GAMMA,
};
pub use hyper::{hyp_pfq, hyp_pfq_complex};
pub use linalg::{det_logspace, symmetric_tridiagonal_eigenvalues, Matrix};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Truncation policy for infinite series and the series/determinant switch for phi.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesConfig {
    pub eps_rel: f64,
    pub k_max: usize,
    pub t_switch: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            eps_rel: 1e-12,
            k_max: 400,
            t_switch: 1.0,
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_rel > 0.0 && self.eps_rel <= 1e-3) {
            return Err(Error::domain("SeriesConfig", format!("eps_rel = {} not in (0, 1e-3]", self.eps_rel)));
        }
        if self.k_max < 20 {
            return Err(Error::domain("SeriesConfig", format!("k_max = {} < 20", self.k_max)));
        }
        if !(self.t_switch > 0.0 && self.t_switch.is_finite()) {
            return Err(Error::domain("SeriesConfig", "t_switch must be positive"));
        }
        Ok(())
    }
}

/// A value together with an error estimate and the number of series terms used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult<T = f64> {
    pub value: T,
    pub err_est: f64,
    pub terms_used: usize,
}

/// Stop rule shared by all series: |term| < eps*|sum| three times in a row, and k >= 10.
#[derive(Debug, Clone)]
pub(crate) struct StopRule {
    eps: f64,
    run: usize,
}

impl StopRule {
    pub(crate) fn new(eps: f64) -> Self {
        StopRule { eps, run: 0 }
    }

    pub(crate) fn done(&mut self, k: usize, term_abs: f64, sum_abs: f64) -> bool {
        if term_abs < self.eps * sum_abs || term_abs == 0.0 {
            self.run += 1;
        } else {
            self.run = 0;
        }
        self.run >= 3 && k >= 10
    }
}

/// Generalized Laguerre polynomial by the three-term recurrence in n.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_low_orders() {
        assert_eq!(laguerre(0, 0.7, 3.0), 1.0);
        assert!((laguerre(1, 0.7, 3.0) - (1.0 + 0.7 - 3.0)).abs() < 1e-15);
        assert!((laguerre(2, 1.0, 0.0) - 3.0).abs() < 1e-15);
        // L_n^a(0) = C(n+a, n)
        assert!((laguerre(5, 2.0, 0.0) - 21.0).abs() < 1e-12);
        // explicit L_2^a(x) = ((a+1)(a+2) - 2(a+2)x + x^2)/2
        let (a, x) = (0.3, -1.7);
        let exact = ((a + 1.0) * (a + 2.0) - 2.0 * (a + 2.0) * x + x * x) / 2.0;
        assert!((laguerre(2, a, x) - exact).abs() < 1e-14);
    }

    #[test]
    fn series_config_validation() {
        assert!(SeriesConfig::default().validate().is_ok());
        let bad = SeriesConfig { eps_rel: 0.1, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = SeriesConfig { k_max: 5, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
