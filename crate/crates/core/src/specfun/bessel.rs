use super::gamma::ln_gamma;
use crate::error::{Error, Result};

/// Largest argument accepted by [`bessel_j`]; beyond it the alternating series loses too many digits.
pub const BESSEL_J_MAX_ARG: f64 = 20.0;

/// Modified Bessel function I_n(x) of integer order by its power series.
pub fn bessel_i(order: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    let n = order as f64;
    let half = 0.5 * x.abs();
    let q = half * half;
    let mut term = (n * half.ln() - ln_gamma(n + 1.0)).exp();
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + n));
        sum += term;
        if term < 1e-17 * sum && k > half {
            break;
        }
    }
    if x < 0.0 && order % 2 == 1 {
        -sum
    } else {
        sum
    }
}

/// Bessel J_nu(x) for real order nu > -1 and 0 < x <= 20, by its power series.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(nu > -1.0) {
        return Err(Error::domain("bessel_j", format!("order must exceed -1, got {nu}")));
    }
    if !(x > 0.0) {
        return Err(Error::domain("bessel_j", format!("argument must be positive, got {x}")));
    }
    if x > BESSEL_J_MAX_ARG {
        return Err(Error::range(
            "bessel_j",
            format!("argument {x} exceeds series bound {BESSEL_J_MAX_ARG}"),
        ));
    }
    let half = 0.5 * x;
    let q = half * half;
    let mut term = (nu * half.ln() - ln_gamma(nu + 1.0)).exp();
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -q / (k * (k + nu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() && k > half {
            break;
        }
        if k > 200.0 {
            break;
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn i_small_values() {
        assert_eq!(bessel_i(0, 0.0), 1.0);
        assert_eq!(bessel_i(1, 0.0), 0.0);
        let direct: f64 = (0..30)
            .map(|k| {
                let kf: f64 = (1..=k).map(|i| i as f64).product();
                let kf1: f64 = (1..=k + 1).map(|i| i as f64).product();
                1.0 / (kf * kf1)
            })
            .sum();
        assert!((bessel_i(1, 2.0) - direct).abs() < 1e-15 * direct);
        // I_0(1), I_1(1)
        assert!((bessel_i(0, 1.0) - 1.266_065_877_752_008_3).abs() < 1e-15);
        assert!((bessel_i(1, 1.0) - 0.565_159_103_992_485_0).abs() < 1e-15);
    }

    #[test]
    fn i_large_argument_recurrence() {
        // I_{n-1}(x) - I_{n+1}(x) = (2n/x) I_n(x)
        for &x in &[5.0, 20.0, 50.0] {
            for n in 1..10u32 {
                let lhs = bessel_i(n - 1, x) - bessel_i(n + 1, x);
                let rhs = 2.0 * n as f64 / x * bessel_i(n, x);
                assert!(((lhs - rhs) / rhs).abs() < 1e-12, "x={x} n={n}");
            }
        }
        // I_0(50) = 2.93255378384933e20
        assert!((bessel_i(0, 50.0) / 2.932_553_783_849_336_3e20 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn i_satisfies_exponential_bound() {
        for n in 0..=10u32 {
            for i in 1..=40 {
                let t = i as f64 * 0.5;
                let nf: f64 = (1..=n).map(|k| k as f64).product();
                let bound = t.powi(n as i32) * t.exp() / (2f64.powi(n as i32) * nf);
                assert!(bessel_i(n, t) <= bound * (1.0 + 1e-14));
            }
        }
    }

    #[test]
    fn j_half_order_closed_form() {
        let f = |x: f64| (2.0 / (PI * x)).sqrt() * x.sin();
        assert!(bessel_j(0.5, PI).unwrap().abs() < 1e-15);
        assert!((bessel_j(0.5, PI / 2.0).unwrap() - 2.0 / PI).abs() < 1e-15);
        for &x in &[0.01, 0.7, 3.3, 9.0, 15.0] {
            assert!((bessel_j(0.5, x).unwrap() - f(x)).abs() < 1e-12, "x = {x}");
        }
        // J_{-1/2}(x) = sqrt(2/(pi x)) cos x
        let x = 2.2;
        let g = (2.0 / (PI * x)).sqrt() * x.cos();
        assert!((bessel_j(-0.5, x).unwrap() - g).abs() < 1e-14);
    }

    #[test]
    fn j_small_argument_and_errors() {
        let nu = 1.7;
        let x: f64 = 1e-6;
        let lead = ((x / 2.0).ln() * nu - ln_gamma(nu + 1.0)).exp();
        assert!((bessel_j(nu, x).unwrap() / lead - 1.0).abs() < 1e-10);
        assert!(bessel_j(0.0, 25.0).is_err());
        assert!(bessel_j(-1.5, 1.0).is_err());
        assert!(bessel_j(0.0, 0.0).is_err());
        // J_0(2.404825557695773) = 0
        assert!(bessel_j(0.0, 2.404_825_557_695_773).unwrap().abs() < 1e-14);
    }
}
