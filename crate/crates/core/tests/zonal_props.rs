use bgb_core::partition::{gen_pochhammer, partitions_of, Partition};
use bgb_core::zonal::{zonal_at_identity, zonal_eval, ZonalTable};
use proptest::prelude::*;

const MAX_T: usize = 10;

fn table(m: usize) -> ZonalTable {
    ZonalTable::cached(m, MAX_T, MAX_T).unwrap()
}

fn point(max_m: usize) -> impl Strategy<Value = Vec<f64>> {
    (1..=max_m).prop_flat_map(|m| prop::collection::vec(-1.0f64..1.0, m))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn sum_rule(x in point(5), t in 0..=MAX_T) {
        let tab = table(x.len());
        let total: f64 = partitions_of(t, x.len()).iter().map(|tau| zonal_eval(&tab, tau, &x).unwrap()).sum();
        let s: f64 = x.iter().sum();
        prop_assert!((total - s.powi(t as i32)).abs() <= 1e-10 * s.abs().powi(t as i32).max(1.0));
    }

    #[test]
    fn permutation_invariance(x in point(5), t in 1..=MAX_T, shift in 0usize..5) {
        let tab = table(x.len());
        let mut y = x.clone();
        y.rotate_left(shift % x.len());
        y.reverse();
        for tau in partitions_of(t, x.len()) {
            let (a, b) = (zonal_eval(&tab, &tau, &x).unwrap(), zonal_eval(&tab, &tau, &y).unwrap());
            // Terms of both signs can cancel, so compare against the scale of |x|.
            let scale = zonal_eval(&tab, &tau, &x.iter().map(|v| v.abs()).collect::<Vec<_>>()).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE), "{tau}: {a} {b}");
        }
    }

    #[test]
    fn homogeneity(x in point(5), t in 1..=MAX_T, s in 0.01f64..2.0) {
        let tab = table(x.len());
        let sx: Vec<f64> = x.iter().map(|v| s * v).collect();
        for tau in partitions_of(t, x.len()) {
            let a = zonal_eval(&tab, &tau, &sx).unwrap();
            let b = s.powi(t as i32) * zonal_eval(&tab, &tau, &x).unwrap();
            let scale = s.powi(t as i32) * zonal_eval(&tab, &tau, &x.iter().map(|v| v.abs()).collect::<Vec<_>>()).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE), "{tau}: {a} {b}");
        }
    }

    #[test]
    fn single_row_pochhammer_is_rising_factorial(a in -5.0f64..5.0, t in 0u32..30) {
        let direct = (0..t).fold(1.0, |acc, j| acc * (a + j as f64));
        prop_assert_eq!(gen_pochhammer(a, &Partition::new(vec![t])).value, direct);
    }
}

#[test]
fn identity_closed_form_matches_table() {
    for m in 1..=5 {
        let tab = table(m);
        let ones = vec![1.0; m];
        for t in 0..=MAX_T {
            for tau in partitions_of(t, m) {
                let closed = zonal_at_identity(&tau, m).unwrap().exp();
                let table = zonal_eval(&tab, &tau, &ones).unwrap();
                assert!(rel(closed, table) <= 1e-10, "m={m} {tau}: {closed} {table}");
            }
        }
    }
}
