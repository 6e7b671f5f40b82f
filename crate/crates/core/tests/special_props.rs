use bgb_core::quadrature::{integrate_1d, Axis};
use bgb_core::special::{mv_beta3_log, mv_beta_log, mv_gamma_log};
use proptest::prelude::*;
use statrs::function::gamma::ln_gamma;

const LN_PI: f64 = 1.144_729_885_849_400_2;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gamma_recursion(m in 2usize..=6, offset in 0.01f64..8.0) {
        let a = (m as f64 - 1.0) / 2.0 + offset;
        let step = mv_gamma_log(m, a).unwrap() - mv_gamma_log(m - 1, a).unwrap();
        let expected = (m as f64 - 1.0) / 2.0 * LN_PI + ln_gamma(a - (m as f64 - 1.0) / 2.0);
        prop_assert!((step - expected).abs() <= 1e-12 * expected.abs().max(1.0), "{step} {expected}");
    }

    #[test]
    fn gamma_rejects_the_boundary(m in 1usize..=6, below in 0.0f64..3.0) {
        prop_assert!(mv_gamma_log(m, (m as f64 - 1.0) / 2.0 - below).is_err());
    }

    #[test]
    fn beta_is_symmetric(m in 1usize..=6, x in 0.01f64..6.0, y in 0.01f64..6.0) {
        let (a, b) = ((m as f64 - 1.0) / 2.0 + x, (m as f64 - 1.0) / 2.0 + y);
        prop_assert_eq!(mv_beta_log(m, a, b).unwrap(), mv_beta_log(m, b, a).unwrap());
    }

    #[test]
    fn three_way_beta_factorises(m in 1usize..=4, x in 0.1f64..5.0, y in 0.1f64..5.0, z in 0.1f64..5.0) {
        let h = (m as f64 - 1.0) / 2.0;
        let (a, b, c) = (h + x, h + y, h + z);
        let lhs = mv_beta3_log(m, a, b, c).unwrap();
        let rhs = mv_beta_log(m, a, b).unwrap() + mv_beta_log(m, a + b, c).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-11 * lhs.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn scalar_beta_matches_its_integral(a in 0.6f64..5.0, b in 0.6f64..5.0) {
        let axis = Axis::Graded { lo: 0.0, hi: 1.0, power: 3.0 };
        let q = integrate_1d(|y| ((a - 1.0) * y.ln() + (b - 1.0) * (1.0 - y).ln()).exp(), axis, 128).unwrap();
        let exact = mv_beta_log(1, a, b).unwrap().exp();
        prop_assert!((q.value - exact).abs() <= 1e-8 * exact, "{} {}", q.value, exact);
    }
}
