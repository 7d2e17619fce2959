use std::f64::consts::PI;

use xs_core::bessel_inverse_laguerre::inverse_gamma_moment;
use xs_core::ensembles_mc::*;
use xs_core::oracles::{adaptive_quad_try, aomoto, QuadConfig};
use xs_core::Error;

/// Upper 1% point of chi-square with `df` degrees of freedom (Wilson-Hilferty).
fn chi2_crit_1pct(df: f64) -> f64 {
    let c = 2.0 / (9.0 * df);
    df * (1.0 - c + 2.326_348 * c.sqrt()).powi(3)
}

#[test]
fn lue_trace_mean() {
    let (nu, n) = (0.5, 6usize);
    let b = sample_lue(nu, n, 11, 40_000).unwrap();
    let e = estimate_mean(&b, trace_statistic);
    // E trace / N = a_{N,1} / a_{N,0} = N + nu
    assert!((e.value - (n as f64 + nu)).abs() < 3.0 * e.stderr, "{e:?}");
}

#[test]
fn lue_n2_joint_histogram() {
    let nu = 0.5;
    let b = sample_lue(nu, 2, 17, 100_000).unwrap();
    let z = aomoto(2, 0, nu + 1.0).unwrap();
    let edges = [0.0, 0.6, 1.2, 2.0, 3.0, 4.5, 7.0, f64::INFINITY];
    let k = edges.len() - 1;
    let mut counts = vec![0usize; k * k];
    let bin = |x: f64| edges.iter().rposition(|&e| x >= e).unwrap().min(k - 1);
    for r in b.rows() {
        let (lo, hi) = if r[0] <= r[1] { (r[0], r[1]) } else { (r[1], r[0]) };
        counts[bin(lo) * k + bin(hi)] += 1;
    }
    let q = QuadConfig::default();
    let dens = |x: f64, y: f64| 2.0 * (y - x).powi(2) * (x * y).powf(nu) * (-x - y).exp() / z;
    let (mut chi2, mut cells, mut total) = (0.0, 0, 0.0);
    for i in 0..k {
        for j in i..k {
            let p = adaptive_quad_try(
                |x| {
                    let lo = edges[j].max(x);
                    if lo >= edges[j + 1] {
                        return Ok(0.0);
                    }
                    Ok(adaptive_quad_try(|y| Ok(dens(x, y)), lo, edges[j + 1], &q)?.value)
                },
                edges[i],
                edges[i + 1],
                &q,
            )
            .unwrap()
            .value;
            total += p;
            let expected = p * b.len() as f64;
            if expected >= 5.0 {
                chi2 += (counts[i * k + j] as f64 - expected).powi(2) / expected;
                cells += 1;
            }
        }
    }
    assert!((total - 1.0).abs() < 1e-6, "cell probabilities sum to {total}");
    let crit = chi2_crit_1pct((cells - 1) as f64);
    assert!(chi2 < crit, "chi2 {chi2} over {cells} cells, critical {crit}");
}

#[test]
fn inverse_laguerre_n1_moments() {
    let nu = 3.5;
    let b = sample_inverse_laguerre(nu, 1, 5, 100_000).unwrap();
    assert!(b.data.iter().all(|&y| y > 0.0));
    for k in 1..=2u32 {
        let e = estimate_mean(&b, |r| r[0].powi(k as i32));
        let want = inverse_gamma_moment(nu, k).unwrap();
        assert!((e.value - want).abs() < 3.0 * e.stderr, "k={k}: {e:?} vs {want}");
    }
}

#[test]
fn inverse_laguerre_mean_any_n() {
    let nu = 2.0;
    let b = sample_inverse_laguerre(nu, 4, 8, 50_000).unwrap();
    let e = estimate_mean(&b, trace_statistic);
    assert!((e.value - 2.0 / nu).abs() < 3.0 * e.stderr, "{e:?}");
}

#[test]
fn hua_pickrell_s0_trace_is_cauchy() {
    let spec = EnsembleSpec {
        kind: EnsembleKind::HuaPickrell { s: 0.0, n: 4 },
        seed: 7,
        n_samples: 20_000,
        mcmc: McmcParams::default(),
    };
    let b = sample(&spec).unwrap();
    let tr: Vec<f64> = b.rows().map(trace_statistic).collect();
    let ks = ks_statistic(&tr, |x| 0.5 + x.atan() / PI);
    assert!(ks < ks_critical_1pct(tr.len()), "{ks}");
    let cf = empirical_charfn(&b, 1.0);
    assert!((cf.value - (-0.5f64).exp()).abs() < 3.0 * cf.stderr, "{cf:?}");
    let sn = empirical_charfn_imag(&b, 1.0);
    assert!(sn.value.abs() < 3.0 * sn.stderr, "{sn:?}");
}

#[test]
fn hua_pickrell_diagnostics() {
    let spec = EnsembleSpec {
        kind: EnsembleKind::HuaPickrell { s: 1.0, n: 8 },
        seed: 3,
        n_samples: 4_000,
        mcmc: McmcParams::default(),
    };
    let b = sample(&spec).unwrap();
    let d = b.diagnostics.clone().unwrap();
    assert!(d.r_hat < 1.05 && (0.1..=0.6).contains(&d.acceptance), "{d:?}");
    assert_eq!(b.len(), 4_000);
    assert_eq!(b, sample(&spec).unwrap());

    // without burn-in a tiny step stays frozen and accepts almost everything
    let bad = EnsembleSpec {
        mcmc: McmcParams { proposal_scale: 1e-4, burn_in: 0, ..Default::default() },
        seed: 4,
        ..spec
    };
    assert!(matches!(sample(&bad), Err(Error::Diagnostics { .. })));
}

#[test]
fn spec_validation() {
    let base = EnsembleSpec {
        kind: EnsembleKind::Lue { nu: 0.0, n: 2 },
        seed: 0,
        n_samples: 100,
        mcmc: McmcParams::default(),
    };
    assert!(base.validate().is_ok());
    assert!(EnsembleSpec { n_samples: 99, ..base }.validate().is_err());
    assert!(EnsembleSpec { kind: EnsembleKind::Lue { nu: -1.0, n: 2 }, ..base }.validate().is_err());
    assert!(EnsembleSpec { kind: EnsembleKind::HuaPickrell { s: -0.5, n: 2 }, ..base }.validate().is_err());
    assert!(EnsembleSpec { kind: EnsembleKind::InverseLaguerre { nu: 1.0, n: 0 }, ..base }.validate().is_err());
}

#[test]
fn fractional_moment_guard() {
    let spec = EnsembleSpec {
        kind: EnsembleKind::HuaPickrell { s: 1.0, n: 1 },
        seed: 2,
        n_samples: 1_000,
        mcmc: McmcParams::default(),
    };
    let b = sample(&spec).unwrap();
    assert!(!empirical_abs_moment(&b, 0.25, 1.0).1);
    assert!(empirical_abs_moment(&b, 0.75, 1.0).1);
}
