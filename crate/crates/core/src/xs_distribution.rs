//! Density, absolute moments and joint-moment constants of X(s).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::dd::{two_over_one_minus_ix, CDd, Dd};
use crate::error::{Error, Result};
use crate::hua_charfn::{b_coefficient_by_compositions, b_coefficients};
use crate::specfun::{
    hyp_pfq, hyp_pfq_complex, log_barnes_g, pochhammer_neg2h_deriv, EvalResult, SeriesConfig,
    StopRule,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    ClosedS0,
    HypS1,
    HypS2,
    GeneralSeries,
    Lhopital,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentResult {
    pub s: u32,
    pub h: Complex64,
    pub value: Complex64,
    pub method: MomentMethod,
    pub err_est: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMethod {
    CauchyS0,
    ClosedS1,
    HypS2,
    GeneralSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityValue {
    pub x: f64,
    pub rho: f64,
    pub method: DensityMethod,
    pub err_est: f64,
}

/// Beyond this |x| the closed forms for s = 1, 2 lose digits to cancellation.
const CLOSED_FORM_MAX_X: f64 = 2.0;

fn sign_s(s: u32) -> f64 {
    if (s * s.saturating_sub(1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// G(n) = prod_{k=0}^{n-2} k! for integer n >= 1.
fn barnes_g_int(n: u32) -> BigInt {
    let mut g = BigInt::one();
    let mut f = BigInt::one();
    for k in 1..n.saturating_sub(1) {
        f *= BigInt::from(k);
        g *= &f;
    }
    g
}

fn v_exact(s: u32) -> BigRational {
    let v = BigRational::new(barnes_g_int(2 * s + 1), barnes_g_int(s + 1).pow(2));
    if sign_s(s) < 0.0 {
        -v
    } else {
        v
    }
}

/// ln[G(2s+1)/G(s+1)^2], the factor linking E|X|^{2h} to R(s, h).
pub fn log_g_ratio(s: u32) -> f64 {
    let sf = s as f64;
    log_barnes_g(2.0 * sf + 1.0).unwrap_or(0.0) - 2.0 * log_barnes_g(sf + 1.0).unwrap_or(0.0)
}

// ---------------------------------------------------------------------------
// density

type CCache = Mutex<HashMap<u32, Arc<Vec<Dd>>>>;

/// c_k = V b_k k! in double-double; rho = (1/2pi) Re sum_k c_k w^{k+1}.
fn density_coefficients(s: u32, len: usize) -> Arc<Vec<Dd>> {
    static CACHE: OnceLock<CCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(c) = guard.get(&s) {
        if c.len() >= len {
            return c.clone();
        }
    }
    let v = v_exact(s);
    let c: Vec<Dd> = if s == 0 {
        let mut c = vec![Dd::default(); len.max(64)];
        c[0] = Dd::from_f64(1.0);
        c
    } else {
        let b = b_coefficients(s as usize, len);
        let mut fact = BigInt::one();
        b.exact
            .iter()
            .enumerate()
            .map(|(k, bk)| {
                if k > 0 {
                    fact *= BigInt::from(k);
                }
                Dd::from_rational(&(bk * &v * BigRational::from_integer(fact.clone())))
            })
            .collect()
    };
    let c = Arc::new(c);
    guard.insert(s, c.clone());
    c
}

/// rho^(s)(x) from the general series in powers of 2/(1 - i x), in double-double.
pub fn rho_general_series(s: u32, x: f64) -> Result<DensityValue> {
    if !x.is_finite() {
        return Err(Error::domain("rho", "x must be finite"));
    }
    let w = two_over_one_minus_ix(x.abs());
    let mut len = 128;
    loop {
        let c = density_coefficients(s, len);
        let mut pow = w;
        let mut sum = CDd::default();
        let mut abs_sum = 0.0;
        let mut stop = StopRule::new(1e-33);
        for (k, ck) in c.iter().enumerate() {
            let term = pow * *ck;
            let mag = ck.abs() * pow.norm();
            sum = sum + term;
            abs_sum += mag;
            if stop.done(k, mag, abs_sum) {
                let rho = sum.re.to_f64() / (2.0 * PI);
                return Ok(DensityValue {
                    x,
                    rho,
                    method: DensityMethod::GeneralSeries,
                    err_est: 1e-31 * abs_sum * (k + 1) as f64 / (2.0 * PI) + f64::EPSILON * rho.abs(),
                });
            }
            pow = pow * w;
        }
        if c.len() >= 4096 {
            return Err(Error::accuracy("rho", "density series did not converge", sum.re.to_f64() / (2.0 * PI)));
        }
        len = 2 * c.len();
    }
}

/// The closed forms for s in {0, 1, 2}.
pub fn rho_closed_form(s: u32, x: f64, cfg: &SeriesConfig) -> Result<DensityValue> {
    let d = 1.0 + x * x;
    match s {
        0 => Ok(DensityValue { x, rho: 1.0 / (PI * d), method: DensityMethod::CauchyS0, err_est: 0.0 }),
        1 => {
            let a = 2.0 / d;
            let b = 2.0 * x / d;
            // e^a cos b - 1 without the leading cancellation
            let num = a.exp_m1() * b.cos() - 2.0 * (0.5 * b).sin().powi(2);
            Ok(DensityValue {
                x,
                rho: num / (2.0 * PI),
                method: DensityMethod::ClosedS1,
                err_est: 4.0 * f64::EPSILON * (a.exp() + 1.0) / (2.0 * PI),
            })
        }
        2 => {
            let inv = Complex64::new(1.0, -x).inv();
            let z = inv * 8.0;
            let f = hyp_pfq_complex(
                &[Complex64::new(2.5, 0.0), Complex64::new(1.0, 0.0)],
                &[Complex64::new(5.0, 0.0), Complex64::new(4.0, 0.0)],
                z,
                cfg,
            )?;
            let v = inv * f.value;
            Ok(DensityValue {
                x,
                rho: v.re / PI,
                method: DensityMethod::HypS2,
                err_est: (f.err_est * inv.norm() + 4.0 * f64::EPSILON * v.norm()) / PI,
            })
        }
        _ => Err(Error::domain("rho_closed_form", format!("no closed form coded for s = {s}"))),
    }
}

/// Density of X(s) for integer s >= 0.
pub fn rho(s: u32, x: f64, cfg: &SeriesConfig) -> Result<DensityValue> {
    cfg.validate()?;
    if !x.is_finite() {
        return Err(Error::domain("rho", "x must be finite"));
    }
    let ax = x.abs();
    let mut v = match s {
        0 => rho_closed_form(0, ax, cfg)?,
        1 | 2 if ax <= CLOSED_FORM_MAX_X => rho_closed_form(s, ax, cfg)?,
        _ => rho_general_series(s, ax)?,
    };
    v.x = x;
    Ok(v)
}

// ---------------------------------------------------------------------------
// moments

fn strip_check(op: &'static str, s: u32, h: Complex64) -> Result<()> {
    let top = s as f64 + 0.5;
    if !(h.re > -0.5 && h.re < top) || !h.im.is_finite() {
        return Err(Error::domain(op, format!("Re h = {} outside (-1/2, {top})", h.re)));
    }
    Ok(())
}

/// The bracketed series S(h) = sum_k b_k 2^k (-2h)_k.
fn bracket_series(s: u32, h: Complex64, cfg: &SeriesConfig) -> Result<EvalResult<Complex64>> {
    let a = -2.0 * h;
    let mut len = 64;
    loop {
        let b = b_coefficients(s as usize, len);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut abs_sum = 0.0;
        let mut stop = StopRule::new(cfg.eps_rel);
        let mut pow2 = 1.0;
        let mut poch = Complex64::new(1.0, 0.0);
        for k in 0..b.approx.len().min(cfg.k_max + 1) {
            let term = poch * (b.approx[k] * pow2);
            sum += term;
            abs_sum += term.norm();
            if poch == Complex64::new(0.0, 0.0) || stop.done(k, term.norm(), sum.norm().max(1e-300)) {
                return Ok(EvalResult {
                    value: sum,
                    err_est: 2.0 * term.norm() + 8.0 * f64::EPSILON * abs_sum,
                    terms_used: k + 1,
                });
            }
            poch *= a + k as f64;
            pow2 *= 2.0;
        }
        if b.approx.len() > cfg.k_max {
            return Err(Error::accuracy("moment_R", "bracketed series did not converge", sum.re));
        }
        len = 2 * b.approx.len();
    }
}

fn half_integer_index(h: Complex64) -> Option<usize> {
    if h.im != 0.0 {
        return None;
    }
    let m = (h.re - 0.5).round();
    if m >= 0.0 && (h.re - (m + 0.5)).abs() < 1e-6 {
        Some(m as usize)
    } else {
        None
    }
}

/// R(s, h) = G(s+1)^2/G(2s+1) 2^{-2h} E|X(s)|^{2h}.
pub fn moment_r(s: u32, h: Complex64, cfg: &SeriesConfig) -> Result<MomentResult> {
    cfg.validate()?;
    strip_check("moment_R", s, h)?;
    if let Some(m) = half_integer_index(h) {
        let mut r = moment_r_halfint(s, m, cfg)?;
        r.h = h;
        return Ok(r);
    }
    let pre = (-2.0 * h * 2f64.ln()).exp() / (h * PI).cos();
    let (value, err, method) = match s {
        0 => (pre, 4.0 * f64::EPSILON * pre.norm(), MomentMethod::ClosedS0),
        1 => {
            let f = hyp_pfq_complex(&[-2.0 * h], &[Complex64::new(2.0, 0.0)], Complex64::new(2.0, 0.0), cfg)?;
            (pre * f.value, pre.norm() * f.err_est, MomentMethod::HypS1)
        }
        2 => {
            let f = hyp_pfq_complex(
                &[Complex64::new(2.5, 0.0), -2.0 * h],
                &[Complex64::new(5.0, 0.0), Complex64::new(4.0, 0.0)],
                Complex64::new(8.0, 0.0),
                cfg,
            )?;
            (pre * f.value / 12.0, pre.norm() * f.err_est / 12.0, MomentMethod::HypS2)
        }
        _ => return moment_r_general(s, h, cfg),
    };
    Ok(MomentResult { s, h, value, method, err_est: err })
}

/// R(s, h) from the general bracketed series, for any s >= 1.
pub fn moment_r_general(s: u32, h: Complex64, cfg: &SeriesConfig) -> Result<MomentResult> {
    cfg.validate()?;
    strip_check("moment_R", s, h)?;
    if s == 0 {
        return Err(Error::domain("moment_R_general", "s must be positive"));
    }
    if let Some(m) = half_integer_index(h) {
        if h.re == m as f64 + 0.5 {
            return Err(Error::Indeterminate {
                op: "moment_R",
                msg: format!("0/0 at h = {}; use moment_R_halfint", h.re),
            });
        }
    }
    let pre = sign_s(s) * (-2.0 * h * 2f64.ln()).exp() / (h * PI).cos();
    let sres = bracket_series(s, h, cfg)?;
    Ok(MomentResult {
        s,
        h,
        value: pre * sres.value,
        method: MomentMethod::GeneralSeries,
        err_est: pre.norm() * sres.err_est,
    })
}

/// R(s, m + 1/2) as the limit of the 0/0 form.
pub fn moment_r_halfint(s: u32, m: usize, cfg: &SeriesConfig) -> Result<MomentResult> {
    cfg.validate()?;
    let h0 = m as f64 + 0.5;
    if s == 0 || h0 >= s as f64 + 0.5 {
        return Err(Error::domain("moment_R_halfint", format!("need 1 <= s and m < s, got s = {s}, m = {m}")));
    }
    let mut len = 64;
    let (deriv, err) = loop {
        let b = b_coefficients(s as usize, len);
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        let mut stop = StopRule::new(cfg.eps_rel);
        let mut pow2 = 1.0;
        let mut found = None;
        for k in 0..b.approx.len().min(cfg.k_max + 1) {
            let term = b.approx[k] * pow2 * pochhammer_neg2h_deriv(m, k);
            sum += term;
            abs_sum += term.abs();
            if k > 2 * m + 1 && stop.done(k, term.abs(), sum.abs()) {
                found = Some((sum, 2.0 * term.abs() + 8.0 * f64::EPSILON * abs_sum));
                break;
            }
            pow2 *= 2.0;
        }
        if let Some(f) = found {
            break f;
        }
        if b.approx.len() > cfg.k_max {
            return Err(Error::accuracy("moment_R_halfint", "derivative series did not converge", sum));
        }
        len = 2 * b.approx.len();
    };
    // d/dh cos(pi h) at m + 1/2 is -pi (-1)^m
    let msign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let pre = sign_s(s) * 2f64.powf(-2.0 * h0) / (-PI * msign);
    Ok(MomentResult {
        s,
        h: Complex64::new(h0, 0.0),
        value: Complex64::new(pre * deriv, 0.0),
        method: MomentMethod::Lhopital,
        err_est: pre.abs() * err,
    })
}

/// E|X(s)|^{2h} = R(s, h) 2^{2h} G(2s+1)/G(s+1)^2 for real h in the strip.
pub fn abs_moment(s: u32, h: f64, cfg: &SeriesConfig) -> Result<EvalResult> {
    let r = moment_r(s, Complex64::new(h, 0.0), cfg)?;
    let f = (2.0 * h * 2f64.ln() + log_g_ratio(s)).exp();
    Ok(EvalResult { value: r.value.re * f, err_est: r.err_est * f, terms_used: 0 })
}

/// The bracketed series at h = m + 1/2, which terminates and should vanish.
pub fn series_vanishing_check(s: u32, m: usize) -> Result<f64> {
    if s == 0 || m as f64 + 0.5 >= s as f64 + 0.5 {
        return Err(Error::domain("series_vanishing_check", format!("need m < s, got s = {s}, m = {m}")));
    }
    let b = b_coefficients(s as usize, 2 * m + 2);
    let a = -(2.0 * m as f64 + 1.0);
    let mut sum = 0.0;
    let mut poch = 1.0;
    let mut pow2 = 1.0;
    for k in 0..=2 * m + 1 {
        sum += b.approx[k] * pow2 * poch;
        poch *= a + k as f64;
        pow2 *= 2.0;
    }
    // scale by V so the leading term is 1
    Ok(sum * sign_s(s) * log_g_ratio(s).exp())
}

// ---------------------------------------------------------------------------
// rational coefficients a_k(s) of the expansion in (-2h)_k

/// a_k(s) = k! 2^k V(s) b_k(s) for k <= 4, from the rational closed forms.
pub fn coeff_a(s: u32, k: usize) -> Result<f64> {
    let q = 4.0 * (s as f64).powi(2);
    let need = if k >= 3 { 2 } else { 1 };
    if s < need {
        return Err(Error::domain("coeff_a", format!("k = {k} needs s >= {need}")));
    }
    match k {
        0 | 1 => Ok(1.0),
        2 => Ok((q - 2.0) / (q - 1.0)),
        3 => Ok((q - 4.0) / (q - 1.0)),
        4 => Ok(((q - 8.0).powi(2) + 2.0) / ((q - 1.0) * (q - 9.0))),
        _ => Err(Error::domain("coeff_a", format!("k = {k} outside 0..=4"))),
    }
}

/// a_k(s) extracted exactly from the composition sum for b_k(s).
pub fn coeff_a_by_compositions(s: u32, k: usize) -> Result<f64> {
    if s == 0 {
        return Err(Error::domain("coeff_a_by_compositions", "s must be positive"));
    }
    let b = b_coefficient_by_compositions(s as usize, k);
    let mut scale = v_exact(s);
    for j in 1..=k {
        scale *= BigRational::from_integer(BigInt::from(2 * j));
    }
    (b * scale)
        .to_f64()
        .ok_or_else(|| Error::range("coeff_a_by_compositions", "value not representable"))
}

// ---------------------------------------------------------------------------
// arithmetic factor

fn primes_up_to(n: usize) -> Vec<usize> {
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if sieve[p] {
            out.push(p);
            let mut q = p * p;
            while q <= n {
                sieve[q] = false;
                q += p;
            }
        }
    }
    out
}

/// ln of the local factor (1 - 1/p)^{s^2} sum_k p^{-k} binom(k+s-1, k)^2.
fn log_local_factor(s: u32, p: f64, eps: f64) -> f64 {
    let sf = s as f64;
    let mut coef = 1.0;
    let mut pk = 1.0;
    let mut rest = 0.0;
    for k in 1..10_000 {
        let kf = k as f64;
        coef *= (kf + sf - 1.0) / kf;
        pk /= p;
        let term = coef * coef * pk;
        rest += term;
        if term < eps * (1.0 + rest) {
            break;
        }
    }
    sf * sf * (-1.0 / p).ln_1p() + rest.ln_1p()
}

/// Truncated Euler product for a(s) over primes <= prime_cutoff.
pub fn arithmetic_factor(s: u32, prime_cutoff: usize, cfg: &SeriesConfig) -> Result<EvalResult> {
    cfg.validate()?;
    if prime_cutoff < 2 {
        return Err(Error::domain("arithmetic_factor", "prime_cutoff must be at least 2"));
    }
    if s <= 1 {
        // every local factor is 1
        return Ok(EvalResult { value: 1.0, err_est: 0.0, terms_used: 0 });
    }
    let primes = primes_up_to(prime_cutoff);
    let mut total = 0.0;
    let mut last = 0.0;
    for &p in &primes {
        last = log_local_factor(s, p as f64, 0.1 * f64::EPSILON);
        total += last;
    }
    let value = total.exp();
    // ln F_p ~ c/p^2, so the remaining primes add about |ln F_P| P / ln P
    let pl = *primes.last().expect("at least one prime") as f64;
    let tail = last.abs() * pl / pl.ln();
    Ok(EvalResult { value, err_est: value * tail, terms_used: primes.len() })
}

/// a(s) R(s, h) (log x)^{s^2 + 2h}.
pub fn conjecture_rhs(s: u32, h: f64, x: f64, prime_cutoff: usize, cfg: &SeriesConfig) -> Result<f64> {
    if !(h >= 0.0 && h < s as f64 + 0.5) {
        return Err(Error::domain("conjecture_rhs", format!("h = {h} outside [0, {})", s as f64 + 0.5)));
    }
    if !(x >= std::f64::consts::E) {
        return Err(Error::domain("conjecture_rhs", "x must be at least e"));
    }
    let a = if s == 0 { 1.0 } else { arithmetic_factor(s, prime_cutoff, cfg)?.value };
    let r = moment_r(s, Complex64::new(h, 0.0), cfg)?.value.re;
    Ok(a * r * x.ln().powf((s * s) as f64 + 2.0 * h))
}

/// Real-argument wrapper of hyp_pfq for callers wanting the s = 2 moment form directly.
pub fn hyp_2f2_moment_form(h: f64, cfg: &SeriesConfig) -> Result<f64> {
    Ok(hyp_pfq(&[2.5, -2.0 * h], &[5.0, 4.0], 8.0, cfg)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_i;

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    fn r(s: u32, h: f64) -> f64 {
        moment_r(s, Complex64::new(h, 0.0), &cfg()).unwrap().value.re
    }

    #[test]
    fn density_examples() {
        assert!((rho(0, 0.0, &cfg()).unwrap().rho - 1.0 / PI).abs() < 1e-15);
        let e = (2f64.exp() - 1.0) / (2.0 * PI);
        assert!((rho(1, 0.0, &cfg()).unwrap().rho - e).abs() < 1e-14);
        for s in 0..=3u32 {
            for &x in &[0.0, 0.3, 1.0, 2.5, 10.0, 1e3] {
                assert_eq!(rho(s, x, &cfg()).unwrap().rho, rho(s, -x, &cfg()).unwrap().rho);
            }
        }
    }

    #[test]
    fn general_series_matches_closed_forms() {
        for s in 0..=2u32 {
            for &x in &[0.0, 0.5, 1.0, 2.0, 5.0] {
                let a = rho_general_series(s, x).unwrap().rho;
                let b = rho_closed_form(s, x, &cfg()).unwrap().rho;
                assert!((a - b).abs() < 1e-13 * b.abs().max(1e-3), "s={s} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn density_tail_decay() {
        // rho ~ A x^{-2s-2}: the scaled tail must settle
        for s in 1..=3u32 {
            let g = |x: f64| rho(s, x, &cfg()).unwrap().rho * x.powi(2 * s as i32 + 2);
            let (a, b) = (g(1e3), g(2e3));
            assert!(((a - b) / b).abs() < 1e-5, "s={s}: {a} {b}");
            assert!(a > 0.0);
        }
    }

    #[test]
    fn golden_values() {
        assert!((r(1, 1.0) - 1.0 / 12.0).abs() < 1e-15);
        assert!((r(2, 1.0) - 1.0 / 720.0).abs() < 1e-16);
        assert!((r(2, 2.0) - 1.0 / 6720.0).abs() < 1e-17);
        assert!((r(0, 0.25) - 1.0).abs() < 1e-15);
        for s in 1..=4u32 {
            for &h in &[-0.3, 0.2, 1.1] {
                let a = moment_r(s, Complex64::new(h, 0.0), &cfg()).unwrap().value.re;
                let b = moment_r_general(s, Complex64::new(h, 0.0), &cfg()).unwrap().value.re;
                assert!(((a - b) / a).abs() < 1e-12, "s={s} h={h}");
            }
            // E|X|^0 = 1
            assert!((abs_moment(s, 0.0, &cfg()).unwrap().value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn quarter_and_half_integers() {
        let (i0, i1) = (bessel_i(0, 1.0), bessel_i(1, 1.0));
        let e = 1f64.exp();
        assert!((r(1, -0.25) - 2.0 * e * (i0 - i1)).abs() < 1e-12);
        let v = moment_r_halfint(1, 0, &cfg()).unwrap().value.re;
        let want = (e * e - 5.0) / (4.0 * PI);
        assert!(((v - want) / want).abs() < 1e-12);
        // reroute from moment_R
        assert_eq!(r(1, 0.5), v);
        // continuity across the removable singularity
        for (s, m) in [(1u32, 0usize), (2, 0), (2, 1), (3, 2)] {
            let c = moment_r_halfint(s, m, &cfg()).unwrap().value.re;
            let h = m as f64 + 0.5;
            let lo = r(s, h - 1e-4);
            let hi = r(s, h + 1e-4);
            assert!(((lo - c) / c).abs() < 1e-2 && ((hi - c) / c).abs() < 1e-2, "s={s} m={m}");
        }
    }

    #[test]
    fn complex_h() {
        let h = Complex64::new(0.7, 0.3);
        let a = moment_r(2, h, &cfg()).unwrap().value;
        let b = moment_r_general(2, h, &cfg()).unwrap().value;
        assert!((a - b).norm() < 1e-12 * a.norm());
        let c = moment_r(2, h.conj(), &cfg()).unwrap().value;
        assert!((c - a.conj()).norm() < 1e-14 * a.norm());
    }

    #[test]
    fn strip_is_enforced() {
        assert!(moment_r(1, Complex64::new(1.5, 0.0), &cfg()).is_err());
        assert!(moment_r(1, Complex64::new(-0.5, 0.0), &cfg()).is_err());
        assert!(matches!(
            moment_r_general(2, Complex64::new(0.5, 0.0), &cfg()),
            Err(Error::Indeterminate { .. })
        ));
    }

    #[test]
    fn vanishing() {
        for s in 1..=4u32 {
            for m in 0..s as usize {
                assert!(series_vanishing_check(s, m).unwrap().abs() < 1e-12, "s={s} m={m}");
            }
        }
    }

    #[test]
    fn rational_coefficients() {
        assert!((coeff_a(2, 2).unwrap() - 14.0 / 15.0).abs() < 1e-15);
        for s in [2u32, 3, 5] {
            for k in 0..=4 {
                let a = coeff_a(s, k).unwrap();
                let b = coeff_a_by_compositions(s, k).unwrap();
                assert!((a - b).abs() < 1e-12, "s={s} k={k}: {a} vs {b}");
            }
        }
        assert!(coeff_a(1, 3).is_err());
        assert!(coeff_a(2, 5).is_err());
    }

    #[test]
    fn arithmetic_factor_values() {
        assert_eq!(arithmetic_factor(1, 1000, &cfg()).unwrap().value, 1.0);
        let a = arithmetic_factor(2, 100_000, &cfg()).unwrap();
        assert!((a.value - 6.0 / (PI * PI)).abs() < 1e-5, "{}", a.value);
        assert!(a.err_est > 0.0 && a.err_est < 1e-4);
    }

    #[test]
    fn conjecture_examples() {
        let h = 0.3;
        let x: f64 = 50.0;
        let v = conjecture_rhs(0, h, x, 100, &cfg()).unwrap();
        let want = 2f64.powf(-2.0 * h) / (PI * h).cos() * x.ln().powf(2.0 * h);
        assert!((v - want).abs() < 1e-13 * want);
        let v = conjecture_rhs(1, 1.0, std::f64::consts::E.powi(2), 100, &cfg()).unwrap();
        assert!((v - 8.0 / 12.0).abs() < 1e-12);
    }
}
