//! Hankel determinants of deformed Laguerre weights.
//!
//! For a weight w(y) = y^beta e^{-y} r(y) on (0, inf) the Hankel determinant
//! det[int y^{j+k} w] equals prod_n n! Gamma(n+beta+1) times det Q, where
//! Q_{jk} = int q_j q_k y^beta e^{-y} r(y) dy and q_n are the orthonormal
//! Laguerre polynomials of parameter beta. Q is well conditioned, unlike the
//! raw moment matrix. Its entries are computed with the trapezoid rule in
//! u = ln y, which converges geometrically for these analytic integrands.

use crate::error::{Error, Result};
use crate::specfun::{det_logspace, ln_gamma, EvalResult, Matrix};

/// Magnitude, in nats, below which integrand tails are dropped.
const TAIL_NATS: f64 = 48.0;

struct Grid {
    u_lo: f64,
    u_hi: f64,
    h: f64,
}

fn grid(n: usize, beta: f64, lower_exponent: f64, lower_anchor: f64) -> Grid {
    let sigma = 1.0 / (2.0 * n as f64 + beta.abs() + 1.0).sqrt();
    let h = (0.35 * sigma).min(0.1);
    let u_lo = lower_anchor.min(0.0) - TAIL_NATS / lower_exponent;
    let y_hi = 4.0 * n as f64 + 2.0 * beta.abs() + 70.0;
    Grid {
        u_lo,
        u_hi: y_hi.ln(),
        h,
    }
}

/// log det Q and the gap to the rule with twice the step.
fn log_det_q<R: Fn(f64) -> f64>(n: usize, beta: f64, g: &Grid, ratio: R) -> Result<EvalResult> {
    let m = ((g.u_hi - g.u_lo) / g.h).ceil() as usize + 1;
    let mut fine = Matrix::zeros(n);
    let mut coarse = Matrix::zeros(n);
    let mut v = vec![0.0; n];
    let p0 = (-0.5 * ln_gamma(beta + 1.0)).exp();
    for i in 0..m {
        let u = g.u_lo + i as f64 * g.h;
        let y = u.exp();
        let r = ratio(y);
        if r == 0.0 {
            continue;
        }
        let sw = (0.5 * ((beta + 1.0) * u - y)).exp();
        if sw == 0.0 {
            continue;
        }
        // orthonormal Laguerre recurrence, carrying the square-root weight
        v[0] = p0 * sw;
        if n > 1 {
            v[1] = (beta + 1.0 - y) * v[0] / (beta + 1.0).sqrt();
        }
        for k in 1..n.saturating_sub(1) {
            let kf = k as f64;
            v[k + 1] = ((2.0 * kf + beta + 1.0 - y) * v[k] - (kf * (kf + beta)).sqrt() * v[k - 1])
                / ((kf + 1.0) * (kf + 1.0 + beta)).sqrt();
        }
        let even = i % 2 == 0;
        for j in 0..n {
            let a = r * v[j];
            for k in j..n {
                let val = a * v[k];
                fine[(j, k)] += val;
                if even {
                    coarse[(j, k)] += val;
                }
            }
        }
    }
    for j in 0..n {
        for k in j..n {
            fine[(j, k)] *= g.h;
            coarse[(j, k)] *= 2.0 * g.h;
            fine[(k, j)] = fine[(j, k)];
            coarse[(k, j)] = coarse[(j, k)];
        }
    }
    let (sign, ld) = det_logspace(&fine)?;
    let (csign, cld) = det_logspace(&coarse)?;
    if sign <= 0.0 || csign <= 0.0 {
        return Err(Error::consistency("hankel determinant", "Gram matrix of a positive weight is not positive"));
    }
    Ok(EvalResult {
        value: ld,
        err_est: (ld - cld).abs() + 1e-15 * n as f64,
        terms_used: m,
    })
}

/// sum_{j<n} ln(j! Gamma(j+beta+1)): log Hankel determinant of y^beta e^{-y}.
pub fn log_laguerre_hankel(n: usize, beta: f64) -> f64 {
    (0..n).map(|j| ln_gamma(j as f64 + 1.0) + ln_gamma(j as f64 + beta + 1.0)).sum()
}

/// ln det[int_0^inf y^{j+k} (y+tau)^lambda y^alpha e^{-y} dy]_{j,k<n}.
pub fn log_hankel_det(n: usize, alpha: f64, lambda: f64, tau: f64) -> Result<EvalResult> {
    check_common(n, alpha)?;
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::domain("hankel determinant", format!("tau must be nonnegative, got {tau}")));
    }
    let beta = alpha + lambda;
    if tau == 0.0 {
        if beta <= -1.0 {
            return Err(Error::domain("hankel determinant", "alpha + lambda must exceed -1 at tau = 0"));
        }
        return Ok(EvalResult {
            value: log_laguerre_hankel(n, beta),
            err_est: 0.0,
            terms_used: 0,
        });
    }
    let r = if beta > -1.0 {
        let g = grid(n, beta, alpha + 1.0, tau.ln() - lambda.max(0.0) * tau.ln_1p() / (alpha + 1.0));
        log_det_q(n, beta, &g, |y| (tau / y).ln_1p().mul_add(lambda, 0.0).exp())?
            .shift(log_laguerre_hankel(n, beta))
    } else {
        let g = grid(n, alpha, alpha + 1.0, tau.ln() - lambda.abs() * tau.ln_1p() / (alpha + 1.0));
        log_det_q(n, alpha, &g, |y| ((y + tau).ln() * lambda).exp())?.shift(log_laguerre_hankel(n, alpha))
    };
    Ok(r)
}

/// ln of det[int x^{j+k+nu} e^{-x-c/x}] / det[Gamma(j+k+nu+1)].
pub fn log_hard_edge_ratio(n: usize, nu: f64, c: f64) -> Result<EvalResult> {
    check_common(n, nu)?;
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::domain("hard-edge determinant", format!("c must be nonnegative, got {c}")));
    }
    if c == 0.0 {
        return Ok(EvalResult {
            value: 0.0,
            err_est: 0.0,
            terms_used: 0,
        });
    }
    // e^{-c/y} is below e^{-50} for y < c/50
    let mut g = grid(n, nu, nu + 1.0, 0.0);
    g.u_lo = g.u_lo.max((c / 50.0).ln());
    log_det_q(n, nu, &g, |y| (-c / y).exp())
}

fn check_common(n: usize, alpha: f64) -> Result<()> {
    if n == 0 || n > 64 {
        return Err(Error::domain("hankel determinant", format!("size {n} outside 1..=64")));
    }
    if !(alpha > -1.0) {
        return Err(Error::domain("hankel determinant", format!("alpha = {alpha} must exceed -1")));
    }
    Ok(())
}

impl EvalResult {
    fn shift(self, by: f64) -> EvalResult {
        EvalResult {
            value: self.value + by,
            ..self
        }
    }
}
