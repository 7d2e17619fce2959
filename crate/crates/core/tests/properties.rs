use num_complex::Complex64;
use proptest::prelude::*;

use xs_core::bessel_inverse_laguerre::{psi_n, BesselParams};
use xs_core::ensembles_mc::sample_lue;
use xs_core::hua_charfn::{phi_exact, phi_finite_N};
use xs_core::xs_distribution::{moment_r, rho};
use xs_core::SeriesConfig;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_even_and_positive(s in 0u32..=4, x in -60.0f64..60.0) {
        let c = SeriesConfig::default();
        let a = rho(s, x, &c).unwrap().rho;
        prop_assert!(a > 0.0);
        prop_assert_eq!(a, rho(s, -x, &c).unwrap().rho);
    }

    #[test]
    fn moment_conjugate_symmetry(s in 1u32..=3, re in -0.45f64..1.4, im in -2.0f64..2.0) {
        let c = SeriesConfig::default();
        let h = Complex64::new(re, im);
        prop_assume!((re - 0.5).abs() > 1e-3 && (re - 1.5).abs() > 1e-3 || im.abs() > 1e-3);
        let a = moment_r(s, h, &c).unwrap().value;
        let b = moment_r(s, h.conj(), &c).unwrap().value;
        prop_assert!((a - b.conj()).norm() <= 1e-10 * a.norm().max(1e-300));
    }

    #[test]
    fn charfn_bounded_and_even(s in 0u32..=3, t in -20.0f64..20.0) {
        let c = SeriesConfig::default();
        let v = phi_exact(s, t, &c).unwrap().value;
        prop_assert!(v > 0.0 && v <= 1.0);
        prop_assert_eq!(v, phi_exact(s, -t, &c).unwrap().value);
        let f = phi_finite_N(s as f64 + 0.25, 5, t).unwrap().value;
        prop_assert!(f > 0.0 && f <= 1.0 + 1e-12);
    }

    #[test]
    fn laplace_decreasing(nu in 0.0f64..3.0, n in 1usize..=8, t in 0.05f64..5.0) {
        let a = psi_n(&BesselParams::new(nu, n, t).unwrap()).unwrap().value;
        let b = psi_n(&BesselParams::new(nu, n, 1.1 * t).unwrap()).unwrap().value;
        prop_assert!(0.0 < b && b < a && a < 1.0);
    }

    #[test]
    fn sampler_reproducible(seed in any::<u64>(), n in 1usize..=5) {
        let a = sample_lue(0.5, n, seed, 100).unwrap();
        prop_assert_eq!(&a, &sample_lue(0.5, n, seed, 100).unwrap());
        prop_assert!(a.data.iter().all(|&x| x > 0.0));
    }
}
