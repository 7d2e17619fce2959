//! Characteristic functions of X(s) and of the finite-N Hua-Pickrell trace.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::diff::{derivatives3, DiffConfig};
use crate::error::{Error, Result};
use crate::gram;
use crate::specfun::{
    bessel_i, bessel_j, compositions, det_logspace, laguerre, ln_gamma, log_barnes_g, Matrix,
    SeriesConfig, StopRule,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CharFnMethod {
    ClosedFormS0,
    BesselDet,
    SmallTSeries,
    HankelDet,
    LaguerreDet,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharFnValue {
    pub t: f64,
    pub value: f64,
    pub method: CharFnMethod,
    pub err_est: f64,
}

/// t d/dt log of a transform, with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauValue {
    pub t: f64,
    pub tau: f64,
    pub dtau: f64,
    pub d2tau: f64,
    pub step: f64,
    /// error estimates for (tau, dtau, d2tau)
    pub err: [f64; 3],
}

// ---------------------------------------------------------------------------
// series coefficients b_k(s)

/// Exact and rounded values of b_k(s), the Taylor coefficients of e^{|t|/2} phi(t) / V(s).
#[derive(Debug)]
pub struct BCoefficients {
    pub exact: Vec<BigRational>,
    pub approx: Vec<f64>,
}

struct Binomials {
    rows: Vec<Vec<BigInt>>,
}

impl Binomials {
    fn new(n: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut row = vec![BigInt::one(); i + 1];
            for j in 1..i {
                row[j] = &rows[i - 1][j - 1] + &rows[i - 1][j];
            }
            rows.push(row);
        }
        Binomials { rows }
    }

    fn get(&self, n: usize, k: usize) -> &BigInt {
        &self.rows[n][k]
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// b_0..b_{len-1} for the s x s determinant of power series
/// E_{ij}(t) = sum_m t^m / (m! (m+i+j+1)!), i, j = 0..s-1.
///
/// Each partial minor over rows 0..r-1 and column set S is stored with
/// coefficients scaled by k! (k + N_S)!, N_S = r(r+1)/2 + sum(S), which
/// makes every stored value an integer.
fn b_series_exact(s: usize, len: usize) -> Vec<BigRational> {
    assert!((1..=16).contains(&s));
    let binom = Binomials::new(2 * len + s * s + 2 * s);
    let full = (1usize << s) - 1;
    let mut minors: HashMap<usize, Vec<BigInt>> = HashMap::new();
    // empty minor: det = 1, scale k! (k+0)! only matters at k = 0
    let mut empty = vec![BigInt::zero(); len];
    empty[0] = BigInt::one();
    minors.insert(0, empty);
    for r in 1..=s {
        let row = r - 1;
        let mut next: HashMap<usize, Vec<BigInt>> = HashMap::new();
        for mask in 0..=full {
            if (mask as u32).count_ones() as usize != r {
                continue;
            }
            let mut acc = vec![BigInt::zero(); len];
            let mut pos = 0usize;
            for j in 0..s {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let sub = mask & !(1 << j);
                let prev = &minors[&sub];
                let n_prev = (r - 1) * r / 2 + (0..s).filter(|&c| sub & (1 << c) != 0).sum::<usize>();
                let n_entry = row + j + 1;
                let negative = (row + pos) % 2 == 1;
                // c_k = sum_{a+b=k} C(k,a) C(k+N'+n, a+n) F'_b
                for k in 0..len {
                    let mut ck = BigInt::zero();
                    for a in 0..=k {
                        let b = k - a;
                        if prev[b].is_zero() {
                            continue;
                        }
                        ck += binom.get(k, a) * binom.get(k + n_prev + n_entry, a + n_entry) * &prev[b];
                    }
                    if negative {
                        acc[k] -= ck;
                    } else {
                        acc[k] += ck;
                    }
                }
                pos += 1;
            }
            next.insert(mask, acc);
        }
        minors = next;
    }
    let top = &minors[&full];
    let ss = s * s;
    (0..len)
        .map(|k| BigRational::new(top[k].clone(), factorial(k) * factorial(k + ss)))
        .collect()
}

/// b_k(s) from its definition as a sum over compositions k_1 + ... + k_s = k.
pub fn b_coefficient_by_compositions(s: usize, k: usize) -> BigRational {
    let mut total = BigRational::zero();
    for comp in compositions(k, s) {
        let mut m: Vec<Vec<BigRational>> = (0..s)
            .map(|i| {
                (0..s)
                    .map(|j| BigRational::new(BigInt::one(), factorial(comp[i] + i + j + 1)))
                    .collect()
            })
            .collect();
        let mut weight = BigRational::one();
        for &kj in &comp {
            weight /= BigRational::from_integer(factorial(kj));
        }
        total += rational_det(&mut m) * weight;
    }
    total
}

fn rational_det(m: &mut [Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pv = m[c][c].clone();
        det *= pv.clone();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &pv;
            for j in c..n {
                let v = &f * &m[c][j];
                m[r][j] -= v;
            }
        }
    }
    det
}

type BCache = Mutex<HashMap<usize, Arc<BCoefficients>>>;

fn b_cache() -> &'static BCache {
    static CACHE: OnceLock<BCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// At least `len` coefficients b_k(s), computed exactly once and cached.
pub fn b_coefficients(s: usize, len: usize) -> Arc<BCoefficients> {
    let mut guard = b_cache().lock().unwrap_or_else(|e| e.into_inner());
    if let Some(c) = guard.get(&s) {
        if c.exact.len() >= len {
            return c.clone();
        }
    }
    let have = guard.get(&s).map_or(0, |c| c.exact.len());
    let target = len.max(64).max(2 * have).next_power_of_two();
    let exact = b_series_exact(s, target);
    let approx = exact.iter().map(|r| r.to_f64().unwrap_or(0.0)).collect();
    let c = Arc::new(BCoefficients { exact, approx });
    guard.insert(s, c.clone());
    c
}

/// V(s) = (-1)^{s(s-1)/2} G(2s+1) / G(s+1)^2.
pub fn v_prefactor(s: u32) -> f64 {
    let sign = if (s * s.saturating_sub(1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let sf = s as f64;
    let lg = log_barnes_g(2.0 * sf + 1.0).unwrap_or(0.0) - 2.0 * log_barnes_g(sf + 1.0).unwrap_or(0.0);
    sign * lg.exp()
}

// ---------------------------------------------------------------------------
// limiting characteristic function

/// phi^(s)(t) for integer s >= 0.
pub fn phi_exact(s: u32, t: f64, cfg: &SeriesConfig) -> Result<CharFnValue> {
    cfg.validate()?;
    let a = t.abs();
    if s == 0 {
        return Ok(CharFnValue {
            t,
            value: (-0.5 * a).exp(),
            method: CharFnMethod::ClosedFormS0,
            err_est: 0.0,
        });
    }
    if a == 0.0 {
        return Ok(CharFnValue {
            t,
            value: 1.0,
            method: CharFnMethod::SmallTSeries,
            err_est: 0.0,
        });
    }
    if a < cfg.t_switch {
        phi_series(s, t, cfg)
    } else {
        phi_bessel_det(s, t)
    }
}

/// phi^(s)(t) from the determinant of I_{j+k+1}(2 sqrt|t|), valid for t != 0.
pub fn phi_bessel_det(s: u32, t: f64) -> Result<CharFnValue> {
    let a = t.abs();
    if a == 0.0 {
        return Err(Error::domain("phi_bessel_det", "t = 0 is a removable singularity; use the series"));
    }
    let n = s as usize;
    let z = 2.0 * a.sqrt();
    let m = Matrix::from_fn(n, |j, k| bessel_i((j + k + 1) as u32, z));
    let (sign, ld) = det_logspace(&m)?;
    let v = v_prefactor(s);
    if sign * v.signum() <= 0.0 {
        return Err(Error::consistency("phi_exact", format!("non-positive determinant at t = {t}")));
    }
    let sf = s as f64;
    let value = (v.abs().ln() + ld - 0.5 * a - 0.5 * sf * sf * a.ln()).exp();
    // cancellation: product of row norms over |det|
    let mut rows = 0.0;
    for j in 0..n {
        rows += (0..n).map(|k| m[(j, k)].abs()).sum::<f64>().ln();
    }
    let cond = (rows - ld).exp();
    Ok(CharFnValue {
        t,
        value,
        method: CharFnMethod::BesselDet,
        err_est: value * 4.0 * f64::EPSILON * cond * n as f64,
    })
}

/// phi^(s)(t) = e^{-|t|/2} V(s) sum_k b_k(s) |t|^k.
pub fn phi_series(s: u32, t: f64, cfg: &SeriesConfig) -> Result<CharFnValue> {
    cfg.validate()?;
    if s == 0 {
        return Err(Error::domain("phi_series", "s must be a positive integer"));
    }
    let a = t.abs();
    let v = v_prefactor(s);
    let mut len = 64;
    loop {
        let b = b_coefficients(s as usize, len);
        let mut sum = 0.0;
        let mut pow = 1.0;
        let mut stop = StopRule::new(cfg.eps_rel);
        let mut last = 0.0;
        for k in 0..b.approx.len().min(cfg.k_max + 1) {
            let term = v * b.approx[k] * pow;
            sum += term;
            last = term.abs();
            if stop.done(k, last, sum.abs()) {
                let value = (-0.5 * a).exp() * sum;
                return Ok(CharFnValue {
                    t,
                    value,
                    method: CharFnMethod::SmallTSeries,
                    err_est: (-0.5 * a).exp() * (2.0 * last + 4.0 * f64::EPSILON * sum.abs() * (k + 1) as f64),
                });
            }
            pow *= a;
        }
        if b.approx.len() > cfg.k_max {
            return Err(Error::accuracy(
                "phi_series",
                format!("no convergence within {} terms", cfg.k_max),
                (-0.5 * a).exp() * (sum + last),
            ));
        }
        len = b.approx.len() * 2;
    }
}

// ---------------------------------------------------------------------------
// finite N

/// ln C_N^(s) = ln N! + sum_{j=1}^N [ln Gamma(j) + ln Gamma(2s+j)].
pub fn c_n_constant(n: usize, s: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("c_n_constant", "N must be positive"));
    }
    if !(s > -0.5) {
        return Err(Error::domain("c_n_constant", format!("s = {s} must exceed -1/2")));
    }
    let body: f64 = (1..=n)
        .map(|j| ln_gamma(j as f64) + ln_gamma(2.0 * s + j as f64))
        .sum();
    Ok(ln_gamma(n as f64 + 1.0) + body)
}

/// Largest N accepted by [`phi_finite_N`].
pub const PHI_FINITE_N_MAX: usize = 24;

/// phi_N^(s)(t), the characteristic function of trace/N under the Hua-Pickrell
/// measure, at argument t (so E cos(t trace / (2N))), via the Hankel determinant.
#[allow(non_snake_case)]
pub fn phi_finite_N(s: f64, n: usize, t: f64) -> Result<CharFnValue> {
    if !(s > -0.5) {
        return Err(Error::domain("phi_finite_N", format!("s = {s} must exceed -1/2")));
    }
    if n == 0 || n > PHI_FINITE_N_MAX {
        return Err(Error::domain("phi_finite_N", format!("N = {n} outside 1..={PHI_FINITE_N_MAX}")));
    }
    let a = t.abs();
    if a == 0.0 {
        return Ok(CharFnValue {
            t,
            value: 1.0,
            method: CharFnMethod::HankelDet,
            err_est: 0.0,
        });
    }
    let det = gram::log_hankel_det(n, s, s, a / n as f64)?;
    let log_value = -0.5 * a + det.value - gram::log_laguerre_hankel(n, 2.0 * s);
    let value = log_value.exp();
    Ok(CharFnValue {
        t,
        value,
        method: CharFnMethod::HankelDet,
        err_est: value * det.err_est,
    })
}

/// phi_N^(s)(t) for integer s <= N from the s x s Laguerre determinant.
#[allow(non_snake_case)]
pub fn phi_finite_N_laguerre(s: u32, n: usize, t: f64) -> Result<CharFnValue> {
    let su = s as usize;
    if s == 0 || n < su {
        return Err(Error::domain("phi_finite_N_laguerre", format!("need 1 <= s <= N, got s = {s}, N = {n}")));
    }
    let a = t.abs();
    let sf = s as f64;
    let x = -a / n as f64;
    let m = Matrix::from_fn(su, |i, j| laguerre(n + su - 1 - i - j, 2.0 * sf - 1.0, x));
    let (sign, ld) = det_logspace(&m)?;
    let mut log_pref = 0.0;
    for j in 0..n {
        let r = (n - j) as f64;
        log_pref += 2.0 * ln_gamma(sf + r) - ln_gamma(j as f64 + 1.0) - ln_gamma(2.0 * sf + r);
    }
    let pref_sign = if (s * (s - 1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    if sign * pref_sign <= 0.0 {
        return Err(Error::consistency("phi_finite_N_laguerre", format!("non-positive value at t = {t}")));
    }
    let value = (log_pref + ld - 0.5 * a).exp();
    Ok(CharFnValue {
        t,
        value,
        method: CharFnMethod::LaguerreDet,
        err_est: value * 1e-14 * n as f64,
    })
}

// ---------------------------------------------------------------------------
// log-derivatives

/// Even positive transform whose logarithm can be differentiated numerically.
pub trait LogTransform: Sync {
    /// ln f(t) for t > 0. `center` is the point being differentiated, so that
    /// piecewise evaluators use one formula across the whole stencil.
    fn log_value(&self, t: f64, center: f64) -> Result<f64>;

    /// Closed-form (tau, tau', tau'') at t > 0 when one exists.
    fn exact_tau(&self, _t: f64) -> Option<(f64, f64, f64)> {
        None
    }
}

/// Which characteristic function to differentiate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PhiEvaluator {
    Exact { s: u32, cfg: SeriesConfig },
    FiniteN { s: f64, n: usize },
    FiniteNLaguerre { s: u32, n: usize },
}

impl LogTransform for PhiEvaluator {
    fn log_value(&self, t: f64, center: f64) -> Result<f64> {
        let v = match *self {
            PhiEvaluator::Exact { s, cfg } => {
                if s == 0 {
                    return Ok(-0.5 * t.abs());
                }
                if center.abs() < cfg.t_switch {
                    phi_series(s, t, &cfg)?
                } else {
                    phi_bessel_det(s, t)?
                }
            }
            PhiEvaluator::FiniteN { s, n } => phi_finite_N(s, n, t)?,
            PhiEvaluator::FiniteNLaguerre { s, n } => phi_finite_N_laguerre(s, n, t)?,
        };
        Ok(v.value.ln())
    }

    fn exact_tau(&self, t: f64) -> Option<(f64, f64, f64)> {
        match *self {
            PhiEvaluator::Exact { s: 0, .. } => Some((-0.5 * t, -0.5, 0.0)),
            _ => None,
        }
    }
}

/// tau(t) = t d/dt ln f(t) and its derivatives, by Richardson-extrapolated differences.
pub fn tau<E: LogTransform + ?Sized>(t: f64, eval: &E, diff: &DiffConfig) -> Result<TauValue> {
    if t == 0.0 || !t.is_finite() {
        return Err(Error::domain("tau", "t must be finite and nonzero"));
    }
    let a = t.abs();
    let (tau, d1, d2, step, err) = if let Some((v, dv, d2v)) = eval.exact_tau(a) {
        (v, dv, d2v, 0.0, [0.0; 3])
    } else {
        let h0 = diff.initial_step(a);
        let d = derivatives3(|u| eval.log_value(u, a), a, h0, diff)?;
        let [l1, l2, l3] = d.d;
        let [e1, e2, e3] = d.err;
        (
            a * l1,
            l1 + a * l2,
            2.0 * l2 + a * l3,
            d.step,
            [a * e1, e1 + a * e2, 2.0 * e2 + a * e3],
        )
    };
    let sign = if t < 0.0 { -1.0 } else { 1.0 };
    Ok(TauValue {
        t,
        tau,
        dtau: sign * d1,
        d2tau: d2,
        step,
        err,
    })
}

// ---------------------------------------------------------------------------
// correlation kernel of C^(s)

fn kernel_parts(s: f64, x: f64) -> Result<(f64, f64, f64, f64)> {
    // T(x) = c_T |x|^{-1/2} J_{s-1/2}(1/|x|), R(x) = c_R sgn(x) |x|^{-1/2} J_{s+1/2}(1/|x|)
    // returns (T, T', R, R')
    let ax = x.abs();
    let z = 1.0 / ax;
    let nu_t = s - 0.5;
    let nu_r = s + 0.5;
    let c_t = ((2.0 * s - 0.5) * 2f64.ln() + ln_gamma(s + 0.5)).exp();
    let c_r = ((2.0 * s + 0.5) * 2f64.ln() + ln_gamma(s + 1.5)).exp();
    let jt = bessel_j(nu_t, z)?;
    let jt1 = bessel_j(nu_t + 1.0, z)?;
    let jr = bessel_j(nu_r, z)?;
    let jr1 = bessel_j(nu_r + 1.0, z)?;
    // d/da [a^{-1/2} J_nu(1/a)] = -a^{-3/2}/2 J_nu - a^{-5/2} J_nu'(1/a), J_nu' = (nu/z) J_nu - J_{nu+1}
    let deriv = |nu: f64, j: f64, j1: f64| -0.5 * ax.powf(-1.5) * j - ax.powf(-2.5) * (nu * ax * j - j1);
    let t_val = c_t * ax.powf(-0.5) * jt;
    let t_der_abs = c_t * deriv(nu_t, jt, jt1);
    let r_val_abs = c_r * ax.powf(-0.5) * jr;
    let r_der_abs = c_r * deriv(nu_r, jr, jr1);
    let sg = x.signum();
    // T is even, so T'(x) = sgn(x) T'(|x|); R is odd, so R'(x) = R'(|x|)
    Ok((t_val, sg * t_der_abs, sg * r_val_abs, r_der_abs))
}

/// Correlation kernel K^(s)(x, y) of the point process C^(s).
///
/// The J-Bessel series limits |x|, |y| to at least 1/20.
pub fn kernel_cs(s: f64, x: f64, y: f64) -> Result<f64> {
    if !(s > -0.5) {
        return Err(Error::domain("kernel_Cs", format!("s = {s} must exceed -1/2")));
    }
    if x == 0.0 || y == 0.0 {
        return Err(Error::domain("kernel_Cs", "points must be nonzero"));
    }
    let pref = (2.0 * ln_gamma(s + 1.0) - ln_gamma(2.0 * s + 1.0) - ln_gamma(2.0 * s + 2.0)).exp()
        / (2.0 * std::f64::consts::PI);
    if (x - y).abs() < 1e-6 && x.signum() == y.signum() {
        let m = 0.5 * (x + y);
        let (t, dt, r, dr) = kernel_parts(s, m)?;
        return Ok(pref * (dt * r - t * dr));
    }
    let (tx, _, rx, _) = kernel_parts(s, x)?;
    let (ty, _, ry, _) = kernel_parts(s, y)?;
    Ok(pref * (tx * ry - ty * rx) / (x - y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    #[test]
    fn b_coefficients_small_cases() {
        // s = 1: b_k = 1/(k!(k+1)!)
        let b = b_coefficients(1, 20);
        for k in 0..20 {
            let exact = BigRational::new(BigInt::one(), factorial(k) * factorial(k + 1));
            assert_eq!(b.exact[k], exact);
        }
        // s = 2, k = 0: -1/12 since V(2) = -12
        let b2 = b_coefficients(2, 8);
        assert_eq!(b2.exact[0], BigRational::new(BigInt::from(-1), BigInt::from(12)));
        for s in 1..=4usize {
            let b = b_coefficients(s, 10);
            for k in 0..8 {
                assert_eq!(b.exact[k], b_coefficient_by_compositions(s, k), "s={s} k={k}");
            }
        }
    }

    #[test]
    fn prefactor_values() {
        assert_eq!(v_prefactor(0), 1.0);
        assert_eq!(v_prefactor(1), 1.0);
        assert!((v_prefactor(2) + 12.0).abs() < 1e-12);
        assert!((v_prefactor(3) + 8640.0).abs() < 1e-8);
        for s in 1..=5u32 {
            let b0 = b_coefficients(s as usize, 1).approx[0];
            assert!((v_prefactor(s) * b0 - 1.0).abs() < 1e-13, "s={s}");
        }
    }

    #[test]
    fn phi_closed_forms() {
        let v = phi_exact(0, 3.0, &cfg()).unwrap();
        assert_eq!(v.value, (-1.5f64).exp());
        for s in 0..4 {
            assert_eq!(phi_exact(s, 0.0, &cfg()).unwrap().value, 1.0);
        }
        for &t in &[0.3f64, 1.0, 4.0, 30.0] {
            let exact = (-0.5 * t).exp() * bessel_i(1, 2.0 * f64::sqrt(t)) / f64::sqrt(t);
            let v = phi_exact(1, t, &cfg()).unwrap();
            assert!((v.value - exact).abs() < 1e-13 * exact, "t = {t}");
            let vn = phi_exact(1, -t, &cfg()).unwrap();
            assert_eq!(v.value, vn.value);
        }
    }

    #[test]
    fn series_agrees_with_bessel_determinant() {
        for s in 1..=3u32 {
            for i in 0..=12 {
                let t = 0.5 + 1.5 * i as f64 / 12.0;
                let a = phi_series(s, t, &cfg()).unwrap().value;
                let b = phi_bessel_det(s, t).unwrap().value;
                assert!(((a - b) / b).abs() < 1e-9, "s={s} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn finite_n_examples() {
        for n in [1usize, 2, 4, 8] {
            for &t in &[0.5, 1.0, 5.0] {
                let v = phi_finite_N(0.0, n, t).unwrap().value;
                assert!((v - (-0.5 * t).exp()).abs() < 1e-12);
            }
        }
        let v = phi_finite_N(1.0, 1, 1.0).unwrap().value;
        assert!((v - 1.5 * (-0.5f64).exp()).abs() < 1e-14);
        let v = phi_finite_N_laguerre(1, 1, 1.0).unwrap().value;
        assert!((v - 1.5 * (-0.5f64).exp()).abs() < 1e-14);
        assert_eq!(phi_finite_N(2.5, 3, 0.0).unwrap().value, 1.0);
        assert!((phi_finite_N_laguerre(2, 3, 0.0).unwrap().value - 1.0).abs() < 1e-13);
        assert!(phi_finite_N(-0.5, 3, 1.0).is_err());
        assert!(phi_finite_N_laguerre(3, 2, 1.0).is_err());
    }

    #[test]
    fn two_finite_n_routes_agree() {
        for s in 1..=2u32 {
            for n in [2usize, 4, 8] {
                for &t in &[0.5, 1.0, 5.0] {
                    let a = phi_finite_N(s as f64, n, t).unwrap().value;
                    let b = phi_finite_N_laguerre(s, n, t).unwrap().value;
                    assert!(((a - b) / b).abs() < 1e-9, "s={s} n={n} t={t}");
                }
            }
        }
    }

    #[test]
    fn c_n_examples() {
        assert!(c_n_constant(1, 0.0).unwrap().abs() < 1e-15);
        assert!((c_n_constant(2, 0.0).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!((c_n_constant(1, 1.0).unwrap() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn tau_examples() {
        let d = DiffConfig::default();
        let e0 = PhiEvaluator::Exact { s: 0, cfg: cfg() };
        let v = tau(2.0, &e0, &d).unwrap();
        assert_eq!((v.tau, v.dtau, v.d2tau), (-1.0, -0.5, 0.0));
        // s = 1: tau = -t/2 + sqrt(t) I_1'(2 sqrt t)/I_1(2 sqrt t) - 1/2
        let t: f64 = 1.0;
        let z = 2.0 * t.sqrt();
        let i1 = bessel_i(1, z);
        let i1p = 0.5 * (bessel_i(0, z) + bessel_i(2, z));
        let exact = -0.5 * t + t.sqrt() * i1p / i1 - 0.5;
        let e1 = PhiEvaluator::Exact { s: 1, cfg: cfg() };
        let v = tau(t, &e1, &d).unwrap();
        assert!((v.tau - exact).abs() < 1e-10, "{} vs {exact}", v.tau);
        let w = tau(-t, &e1, &d).unwrap();
        assert_eq!(w.tau, v.tau);
        assert_eq!(w.dtau, -v.dtau);
        // tau -> 0 as t -> 0+
        let v = tau(1e-3, &e1, &d).unwrap();
        assert!(v.tau.abs() < 1e-6);
    }

    #[test]
    fn kernel_properties() {
        for &s in &[0.0, 0.5, 1.0, 2.3] {
            for &(x, y) in &[(0.3, 1.7), (-0.4, 0.9), (2.0, -5.0), (-1.2, -0.2)] {
                let a = kernel_cs(s, x, y).unwrap();
                let b = kernel_cs(s, y, x).unwrap();
                assert!((a - b).abs() <= 1e-14 * a.abs().max(1e-300));
            }
            let mut x: f64 = -6.0;
            while x < 6.0 {
                if x.abs() > 0.06 {
                    assert!(kernel_cs(s, x, x).unwrap() > 0.0, "s={s} x={x}");
                }
                x += 0.1;
            }
        }
        // one-sided limits at x = y = 1, s = 1
        let d = kernel_cs(1.0, 1.0, 1.0).unwrap();
        let l = kernel_cs(1.0, 1.0 - 1e-4, 1.0 + 1e-4).unwrap();
        let r = kernel_cs(1.0, 1.0 + 3e-5, 1.0 - 3e-5).unwrap();
        assert!((d - l).abs() < 1e-6 && (d - r).abs() < 1e-6, "{d} {l} {r}");
        // s = 0 is the sine kernel pushed forward by x -> 1/x
        let (x, y): (f64, f64) = (0.7, -1.9);
        let expect = (1.0 / y - 1.0 / x).sin() / (2.0 * std::f64::consts::PI * (x - y));
        assert!((kernel_cs(0.0, x, y).unwrap() - expect).abs() < 1e-13);
    }
}
