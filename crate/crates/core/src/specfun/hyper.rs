use num_complex::Complex64;

use super::{EvalResult, SeriesConfig, StopRule};
use crate::error::{Error, Result};

fn nonpositive_integer(z: Complex64) -> Option<usize> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        Some((-z.re) as usize)
    } else {
        None
    }
}

/// Real generalized hypergeometric series pFq(a; b; z).
pub fn hyp_pfq(a: &[f64], b: &[f64], z: f64, cfg: &SeriesConfig) -> Result<EvalResult> {
    let ac: Vec<Complex64> = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let bc: Vec<Complex64> = b.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let r = hyp_pfq_complex(&ac, &bc, Complex64::new(z, 0.0), cfg)?;
    Ok(EvalResult {
        value: r.value.re,
        err_est: r.err_est,
        terms_used: r.terms_used,
    })
}

/// pFq(a; b; z) with complex parameters and argument.
///
/// A nonpositive integer upper parameter makes the series a polynomial, which is
/// summed exactly. Otherwise terms are added until the shared stop rule fires.
pub fn hyp_pfq_complex(
    a: &[Complex64],
    b: &[Complex64],
    z: Complex64,
    cfg: &SeriesConfig,
) -> Result<EvalResult<Complex64>> {
    cfg.validate()?;
    let terminate_at = a.iter().filter_map(|&x| nonpositive_integer(x)).min();
    if let Some(n) = terminate_at {
        // (b)_k vanishes once k exceeds -b; only an issue if that happens before k = n
        if let Some(m) = b.iter().filter_map(|&x| nonpositive_integer(x)).min() {
            if m < n {
                return Err(Error::domain(
                    "hyp_pfq",
                    format!("denominator parameter -{m} is reached before the series terminates at k = {n}"),
                ));
            }
        }
    } else {
        if let Some(m) = b.iter().filter_map(|&x| nonpositive_integer(x)).min() {
            return Err(Error::domain("hyp_pfq", format!("denominator parameter -{m} is a pole")));
        }
        if a.len() > b.len() + 1 && z != Complex64::new(0.0, 0.0) {
            return Err(Error::domain("hyp_pfq", "series with p > q + 1 diverges"));
        }
        if a.len() == b.len() + 1 && z.norm() >= 1.0 {
            return Err(Error::domain("hyp_pfq", format!("|z| = {} outside the unit disk", z.norm())));
        }
    }

    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut abs_total = 1.0;
    let mut stop = StopRule::new(cfg.eps_rel);
    let mut k = 0usize;
    loop {
        if let Some(n) = terminate_at {
            if k == n {
                return Ok(EvalResult {
                    value: sum,
                    err_est: 4.0 * f64::EPSILON * abs_total,
                    terms_used: k + 1,
                });
            }
        }
        if k + 1 > cfg.k_max {
            return Err(Error::accuracy("hyp_pfq", format!("no convergence in {} terms", cfg.k_max), sum.re));
        }
        let kf = k as f64;
        let mut ratio = z / (kf + 1.0);
        for &ai in a {
            ratio *= ai + kf;
        }
        for &bj in b {
            ratio /= bj + kf;
        }
        term *= ratio;
        sum += term;
        abs_total += term.norm();
        k += 1;
        if terminate_at.is_none() && stop.done(k, term.norm(), sum.norm()) {
            return Ok(EvalResult {
                value: sum,
                err_est: term.norm() + 4.0 * f64::EPSILON * abs_total,
                terms_used: k + 1,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive, Zero};

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    #[test]
    fn trivial_and_terminating() {
        let r = hyp_pfq(&[0.7], &[1.3], 0.0, &cfg()).unwrap();
        assert_eq!(r.value, 1.0);
        let r = hyp_pfq(&[-2.0], &[2.0], 2.0, &cfg()).unwrap();
        assert!((r.value + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.terms_used, 3);
    }

    #[test]
    fn exponential_and_bessel() {
        // 0F0(;;z) = e^z
        let r = hyp_pfq(&[], &[], 3.0, &cfg()).unwrap();
        assert!((r.value - 3f64.exp()).abs() < 1e-12 * 3f64.exp());
        // 1F1(1;2;z) = (e^z - 1)/z
        let z = 8.0;
        let r = hyp_pfq(&[1.0], &[2.0], z, &cfg()).unwrap();
        assert!((r.value - z.exp_m1() / z).abs() < 1e-11 * r.value);
        // 2F1(1,1;2;z) = -ln(1-z)/z
        let z = 0.5;
        let r = hyp_pfq(&[1.0, 1.0], &[2.0], z, &cfg()).unwrap();
        assert!((r.value + (1.0f64 - z).ln() / z).abs() < 1e-11);
    }

    #[test]
    fn complex_argument() {
        // 1F1(1;2;z) = (e^z - 1)/z for complex z too
        let z = Complex64::new(1.5, -2.0);
        let one = Complex64::new(1.0, 0.0);
        let two = Complex64::new(2.0, 0.0);
        let r = hyp_pfq_complex(&[one], &[two], z, &cfg()).unwrap();
        let exact = (z.exp() - 1.0) / z;
        assert!((r.value - exact).norm() < 1e-12);
    }

    #[test]
    fn pole_errors() {
        assert!(hyp_pfq(&[1.0], &[-2.0], 0.5, &cfg()).is_err());
        // terminates at k=3 before reaching the pole at (-4)_5
        assert!(hyp_pfq(&[-3.0], &[-4.0], 0.5, &cfg()).is_ok());
        assert!(hyp_pfq(&[-5.0], &[-4.0], 0.5, &cfg()).is_err());
        assert!(hyp_pfq(&[1.0, 1.0, 1.0], &[2.0], 0.5, &cfg()).is_err());
    }

    fn exact_terminating(n: i64, b: i64, z: i64) -> f64 {
        // 1F1(-n; b; z) with rational arithmetic
        let mut sum = BigRational::zero();
        let mut term = BigRational::one();
        for k in 0..=n {
            sum += term.clone();
            let num = BigRational::from_integer(((k - n) * z).into());
            let den = BigRational::from_integer(((b + k) * (k + 1)).into());
            term = term * num / den;
        }
        sum.to_f64().unwrap()
    }

    #[test]
    fn terminating_matches_rational_sum() {
        for n in 0..=10i64 {
            for b in 1..=4i64 {
                for z in [-3i64, 1, 2, 5] {
                    let r = hyp_pfq(&[-(n as f64)], &[b as f64], z as f64, &cfg()).unwrap();
                    let exact = exact_terminating(n, b, z);
                    assert!((r.value - exact).abs() <= 1e-12 * exact.abs().max(1.0), "n={n} b={b} z={z}");
                }
            }
        }
    }
}
