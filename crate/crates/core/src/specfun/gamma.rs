use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const GLAISHER_LN: f64 = 0.248_754_477_033_784_26;

// Lanczos, g = 7, n = 9
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

// zeta(k) for k = 2..=8; larger k are summed directly
const ZETA_SMALL: [f64; 7] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_3,
    1.082_323_233_711_138_2,
    1.036_927_755_143_369_9,
    1.017_343_061_984_449_1,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
];

fn zeta_int(k: usize) -> f64 {
    if k <= 8 {
        return ZETA_SMALL[k - 2];
    }
    let mut s = 0.0;
    for n in (2..=40).rev() {
        s += (n as f64).powi(-(k as i32));
    }
    1.0 + s
}

/// ln Gamma(1+e) for |e| <= 1/2 by its Taylor series.
fn ln_gamma_1p(e: f64) -> f64 {
    let mut sum = -EULER_GAMMA * e;
    let mut pow = -e;
    for k in 2..80 {
        pow *= -e;
        let term = zeta_int(k) * pow / k as f64;
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn lanczos_ln_gamma(x: f64) -> f64 {
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + a.ln()
}

/// ln Gamma(x) for real x > 0. Returns NaN for x <= 0.
pub fn ln_gamma(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    if x < 0.5 {
        return ln_gamma(x + 1.0) - x.ln();
    }
    if x <= 1.5 {
        return ln_gamma_1p(x - 1.0);
    }
    if x <= 2.5 {
        let e = x - 2.0;
        return e.ln_1p() + ln_gamma_1p(e);
    }
    lanczos_ln_gamma(x)
}

/// Gamma(x) for real x > 0.
pub fn gamma(x: f64) -> f64 {
    if x > 0.0 && x <= 20.0 && x.fract() == 0.0 {
        let mut p = 1.0;
        for k in 2..(x as u64) {
            p *= k as f64;
        }
        return p;
    }
    ln_gamma(x).exp()
}

const BERNOULLI_STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Principal branch of ln Gamma(z) for Re z > 0.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) || !z.im.is_finite() {
        return Err(Error::domain("log_gamma", format!("Re z must be positive, got {z}")));
    }
    if z.im == 0.0 {
        return Ok(Complex64::new(ln_gamma(z.re), 0.0));
    }
    // shift to Re z >= 15 and use the Stirling series
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in BERNOULLI_STIRLING {
        corr += p * c;
        p *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + LN_SQRT_2PI + corr - shift)
}

/// (a)_k as an explicit product.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    let mut p = 1.0;
    for i in 0..k {
        p *= a + i as f64;
    }
    p
}

pub fn pochhammer_c(a: Complex64, k: usize) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    for i in 0..k {
        p *= a + i as f64;
    }
    p
}

/// d/dh (-2h)_k evaluated at h = m + 1/2.
pub fn pochhammer_neg2h_deriv(m: usize, k: usize) -> f64 {
    let shift = 2.0 * m as f64 + 1.0;
    let mut total = 0.0;
    for j in 0..k {
        let mut p = 1.0;
        for i in (0..k).filter(|&i| i != j) {
            p *= i as f64 - shift;
        }
        total += p;
    }
    -2.0 * total
}

/// ln G(1+z) for z in (0, 1] from the Weierstrass product, with an Euler-Maclaurin tail.
fn log_barnes_g_1p_unit(z: f64) -> f64 {
    const K: usize = 200;
    let mut s = 0.5 * z * (2.0 * PI).ln() - 0.5 * (z + z * z * (1.0 + EULER_GAMMA));
    for k in 1..=K {
        let kf = k as f64;
        s += kf * (z / kf).ln_1p() + z * z / (2.0 * kf) - z;
    }
    // sum_{k>K} of the remaining log terms, expanded in powers of z/k
    let kf = K as f64;
    let zeta_tail = |p: f64| {
        kf.powf(1.0 - p) / (p - 1.0) - 0.5 * kf.powf(-p) + p * kf.powf(-p - 1.0) / 12.0
            - p * (p + 1.0) * (p + 2.0) * kf.powf(-p - 3.0) / 720.0
    };
    let mut tail = 0.0;
    let mut zm = z * z;
    for m in 3..20 {
        zm *= z;
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        tail += sign * zm / m as f64 * zeta_tail((m - 1) as f64);
    }
    s + tail
}

/// ln G(z) for z > 0.
pub fn log_barnes_g(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain("barnes_g", format!("argument must be positive, got {z}")));
    }
    let twice = 2.0 * z;
    if twice.fract() == 0.0 && z <= 1e6 {
        // recurrence from G(1) = 1 or G(1/2)
        let (mut w, mut acc) = if z.fract() == 0.0 {
            (1.0, 0.0)
        } else {
            (0.5, 2f64.ln() / 24.0 + 0.125 - 0.25 * PI.ln() - 1.5 * GLAISHER_LN)
        };
        while w < z {
            acc += ln_gamma(w);
            w += 1.0;
        }
        return Ok(acc);
    }
    let mut w = z;
    let mut acc = 0.0;
    while w > 2.0 {
        w -= 1.0;
        acc += ln_gamma(w);
    }
    if w <= 1.0 {
        acc -= ln_gamma(w);
        w += 1.0;
    }
    Ok(acc + log_barnes_g_1p_unit(w - 1.0))
}

/// Barnes G(z) for z > 0; overflows to infinity past z ~ 28.
pub fn barnes_g(z: f64) -> Result<f64> {
    if z > 0.0 && z.fract() == 0.0 && z <= 20.0 {
        let mut p = 1.0;
        for k in 1..(z as u64).saturating_sub(1) {
            p *= gamma(k as f64 + 1.0);
        }
        return Ok(p);
    }
    Ok(log_barnes_g(z)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn ln_gamma_values() {
        assert_eq!(ln_gamma(1.0), 0.0);
        assert!(rel(ln_gamma(5.0), 24f64.ln()) < 1e-14);
        assert!(rel(ln_gamma(0.5), 0.5 * PI.ln()) < 1e-14);
        // ln Gamma(1.5) = ln(sqrt(pi)/2)
        assert!(rel(ln_gamma(1.5), (PI.sqrt() / 2.0).ln()) < 1e-13);
        // ln Gamma(2.5) = ln(3 sqrt(pi)/4)
        assert!(rel(ln_gamma(2.5), (3.0 * PI.sqrt() / 4.0).ln()) < 1e-13);
        // ln 170! by summation
        let s: f64 = (2..=170).map(|k| (k as f64).ln()).sum();
        assert!(rel(ln_gamma(171.0), s) < 1e-13);
        // near the root at 2: ln Gamma(2 + e) ~ (1 - gamma) e
        let e = 1e-7;
        assert!(rel(ln_gamma(2.0 + e), (1.0 - EULER_GAMMA) * e) < 1e-6);
    }

    #[test]
    fn recurrence_on_dense_grid() {
        let mut x = 0.5;
        while x < 199.0 {
            let lhs = ln_gamma(x + 1.0);
            let rhs = ln_gamma(x) + x.ln();
            assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1.0), "x = {x}");
            x += 0.37;
        }
    }

    #[test]
    fn complex_log_gamma() {
        let z = Complex64::new(1.0, 0.0);
        assert_eq!(log_gamma(z).unwrap(), Complex64::new(0.0, 0.0));
        // Gamma(1+i) Gamma(1-i) = pi / sinh(pi)
        let a = log_gamma(Complex64::new(1.0, 1.0)).unwrap();
        assert!((2.0 * a.re - (PI / PI.sinh()).ln()).abs() < 1e-13);
        // recurrence in the complex plane
        let w = Complex64::new(0.3, 2.7);
        let d = log_gamma(w + 1.0).unwrap() - log_gamma(w).unwrap() - w.ln();
        assert!(d.norm() < 1e-13);
        // arg Gamma(1/2 + i y) is continuous in y
        let prev = log_gamma(Complex64::new(0.5, 10.0)).unwrap();
        let next = log_gamma(Complex64::new(0.5, 10.01)).unwrap();
        assert!((prev.im - next.im).abs() < 0.1);
        assert!(log_gamma(Complex64::new(0.0, 1.0)).is_err());
        assert!(log_gamma(Complex64::new(-1.0, 0.0)).is_err());
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(3.0, 2), 12.0);
        assert_eq!(pochhammer(0.3, 0), 1.0);
        assert_eq!(pochhammer(-1.0, 3), 0.0);
        for k in 0..15 {
            let a = -2.35;
            let lhs = pochhammer(a, k + 1);
            let rhs = pochhammer(a, k) * (a + k as f64);
            assert!((lhs - rhs).abs() <= 1e-15 * lhs.abs());
        }
    }

    #[test]
    fn pochhammer_derivative_table() {
        assert_eq!(pochhammer_neg2h_deriv(0, 0), 0.0);
        assert_eq!(pochhammer_neg2h_deriv(0, 1), -2.0);
        assert_eq!(pochhammer_neg2h_deriv(0, 4), 4.0);
        for k in 2..12 {
            let fact: f64 = (1..=k - 2).map(|i| i as f64).product();
            assert_eq!(pochhammer_neg2h_deriv(0, k), 2.0 * fact);
        }
    }

    #[test]
    fn pochhammer_derivative_matches_differences() {
        let step = 1e-5;
        for m in 0..=4 {
            for k in 0..=12 {
                let h0 = m as f64 + 0.5;
                let f = |h: f64| pochhammer(-2.0 * h, k);
                let fd = (f(h0 + step) - f(h0 - step)) / (2.0 * step);
                let exact = pochhammer_neg2h_deriv(m, k);
                let scale = exact.abs().max(1.0);
                assert!((fd - exact).abs() <= 1e-6 * scale, "m={m} k={k}: {fd} vs {exact}");
            }
        }
    }

    #[test]
    fn barnes_g_values() {
        assert_eq!(barnes_g(1.0).unwrap(), 1.0);
        assert_eq!(barnes_g(4.0).unwrap(), 2.0);
        assert_eq!(barnes_g(5.0).unwrap(), 12.0);
        assert!(barnes_g(0.0).is_err());
        assert!(barnes_g(-1.5).is_err());
        // G(1/2) = 0.603244281209446...
        assert!(rel(barnes_g(0.5).unwrap(), 0.603_244_281_209_446_1) < 1e-12);
        // G(n) = prod_{k=1}^{n-2} k!
        for n in 2..=30u32 {
            let lf: f64 = (1..=n.saturating_sub(2)).map(|k| ln_gamma(k as f64 + 1.0)).sum();
            let lg = log_barnes_g(n as f64).unwrap();
            assert!((lg - lf).abs() <= 1e-10 * lf.abs().max(1.0), "n = {n}");
        }
    }

    #[test]
    fn barnes_g_product_matches_recurrence() {
        // the product path must agree with the recurrence G(z+1) = Gamma(z) G(z)
        for &z in &[0.3, 0.77, 1.25, 2.6, 7.9, 13.1] {
            let lhs = log_barnes_g(z + 1.0).unwrap();
            let rhs = log_barnes_g(z).unwrap() + ln_gamma(z);
            assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0), "z = {z}");
        }
        // and meet the half-integer anchor continuously
        let a = log_barnes_g(1.5).unwrap();
        let b = log_barnes_g(1.5 + 1e-9).unwrap();
        assert!((a - b).abs() < 1e-8);
        let c = log_barnes_g(2.0 - 1e-9).unwrap();
        assert!(c.abs() < 1e-8);
    }
}
