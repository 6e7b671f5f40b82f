use bgb_core::distributions::{bgb1_scalar_pdf, BimatrixParams, PairFamily};
use bgb_core::quadrature::Axis;
use bgb_core::verify::{mc_det_moment, mc_product_det, quad_density_mass, QuadratureSpec};
use proptest::prelude::*;

fn unit_square(nodes: usize) -> QuadratureSpec {
    let axis = Axis::Graded { lo: 0.0, hi: 1.0, power: 3.0 };
    QuadratureSpec::new(nodes, [axis, axis]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The reported bound covers what a finer rule would change.
    #[test]
    fn refining_the_rule_stays_within_the_bound(a in 0.7f64..4.0, b in 0.7f64..4.0, c in 0.7f64..4.0) {
        let pdf = |x: f64, y: f64| bgb1_scalar_pdf(x, y, a, b, c);
        let coarse = quad_density_mass(pdf, &unit_square(48)).unwrap();
        let fine = quad_density_mass(pdf, &unit_square(96)).unwrap();
        prop_assert!((fine.value - coarse.value).abs() <= coarse.error_bound.max(1e-14),
            "{} {} bound {}", coarse.value, fine.value, coarse.error_bound);
        prop_assert!((fine.value - 1.0).abs() <= fine.error_bound.max(1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn reports_depend_only_on_seed_and_n(seed in any::<u64>(), n in 1000usize..12_000, m in 1usize..=3) {
        let p = BimatrixParams::new(m, 2.0, 2.5, 1.5).unwrap();
        let one = mc_det_moment(PairFamily::Bgb1, &p, 1.0, 0.5, n, seed, 1).unwrap();
        let again = mc_det_moment(PairFamily::Bgb1, &p, 1.0, 0.5, n, seed, 1).unwrap();
        let wide = mc_det_moment(PairFamily::Bgb1, &p, 1.0, 0.5, n, seed, 3).unwrap();
        prop_assert_eq!(one, again);
        prop_assert_eq!(one, wide);
        let z1 = mc_product_det(&p, 1.0, n, seed, 1).unwrap();
        let z4 = mc_product_det(&p, 1.0, n, seed, 4).unwrap();
        prop_assert_eq!(z1, z4);
    }
}

#[test]
fn standard_error_shrinks_like_root_n() {
    let p = BimatrixParams::new(2, 3.0, 2.5, 2.0).unwrap();
    let small = mc_det_moment(PairFamily::Bgb1, &p, 1.0, 1.0, 40_000, 5, 1).unwrap();
    let large = mc_det_moment(PairFamily::Bgb1, &p, 1.0, 1.0, 160_000, 5, 1).unwrap();
    let ratio = small.std_error / large.std_error;
    assert!((ratio - 2.0).abs() < 0.2, "ratio {ratio}");
}

#[test]
fn too_few_samples_are_rejected() {
    let p = BimatrixParams::new(1, 2.0, 2.0, 2.0).unwrap();
    assert!(mc_det_moment(PairFamily::Bgb2, &p, 1.0, 0.0, 999, 1, 1).is_err());
}
