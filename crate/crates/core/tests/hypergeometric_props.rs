use bgb_core::hypergeometric::{mhg, mhg_matrix, one_f_zero_closed, HypergeometricSpec, SeriesOptions};
use bgb_core::linalg::SymMatrix;
use proptest::prelude::*;

fn point(max_m: usize, lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    (1..=max_m).prop_flat_map(move |m| prop::collection::vec(lo..hi, m))
}

/// Scalar `pFq` partial sum through degree `k`, plus the sum of absolute terms.
fn scalar_partial(upper: &[f64], lower: &[f64], x: f64, k: usize) -> (f64, f64) {
    let (mut term, mut sum, mut abs) = (1.0, 1.0, 1.0);
    for j in 0..k {
        let j = j as f64;
        let num: f64 = upper.iter().map(|a| a + j).product();
        let den: f64 = lower.iter().map(|b| b + j).product();
        term *= num / den * x / (j + 1.0);
        sum += term;
        abs += term.abs();
    }
    (sum, abs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn zero_f_zero_is_exp_trace(x in point(3, -1.0, 1.0)) {
        let opts = SeriesOptions { rel_tol: 1e-13, max_degree: 40 };
        let r = mhg(&HypergeometricSpec::new(vec![], vec![]), &x, &opts).unwrap();
        let exact = x.iter().sum::<f64>().exp();
        prop_assert!(r.converged);
        prop_assert!((r.value - exact).abs() <= 1e-10 * exact, "{} {}", r.value, exact);
    }

    #[test]
    fn one_f_zero_matches_closed_form(x in point(3, -0.4, 0.4), a in 0.2f64..3.0) {
        let opts = SeriesOptions { rel_tol: 1e-13, max_degree: 60 };
        let r = mhg(&HypergeometricSpec::new(vec![a], vec![]), &x, &opts).unwrap();
        let exact = one_f_zero_closed(a, &SymMatrix::diag(&x)).unwrap();
        prop_assert!(r.converged);
        prop_assert!((r.value - exact).abs() <= 1e-10 * exact, "{} {}", r.value, exact);
    }

    #[test]
    fn converged_results_meet_the_stopping_rule(
        x in point(3, -0.6, 0.6),
        a in 0.2f64..3.0,
        b in 0.2f64..3.0,
        c in 1.0f64..4.0,
        tol_exp in 4i32..12,
    ) {
        let opts = SeriesOptions { rel_tol: 10f64.powi(-tol_exp), max_degree: 40 };
        let r = mhg(&HypergeometricSpec::new(vec![a, b], vec![c]), &x, &opts).unwrap();
        if r.converged {
            prop_assert!(r.last_degree_contribution.abs() <= opts.rel_tol * r.value.abs());
            prop_assert!(r.error_estimate <= opts.rel_tol * r.value.abs());
        }
        prop_assert!(r.degree_used <= opts.max_degree);
    }

    #[test]
    fn scalar_argument_reduces_to_scalar_series(
        x in -0.8f64..0.8,
        upper in prop::collection::vec(0.1f64..3.0, 0..3),
        lower in prop::collection::vec(0.5f64..4.0, 0..3),
    ) {
        let opts = SeriesOptions { rel_tol: 1e-12, max_degree: 200 };
        let spec = HypergeometricSpec::new(upper.clone(), lower.clone());
        let Ok(r) = mhg(&spec, &[x], &opts) else { return Ok(()) };
        let (sum, abs) = scalar_partial(&upper, &lower, x, r.degree_used);
        prop_assert!((r.value - sum).abs() <= 1e-12 * abs, "{} {}", r.value, sum);
    }

    #[test]
    fn depends_on_eigenvalues_only(d in prop::collection::vec(-0.4f64..0.4, 2), angle in 0.0f64..6.3, a in 0.2f64..3.0) {
        let (c, s) = (angle.cos(), angle.sin());
        let x = SymMatrix::from_rows(&[
            vec![c * c * d[0] + s * s * d[1], c * s * (d[0] - d[1])],
            vec![c * s * (d[0] - d[1]), s * s * d[0] + c * c * d[1]],
        ])
        .unwrap();
        let spec = HypergeometricSpec::new(vec![a, 1.5], vec![2.5]);
        let opts = SeriesOptions { rel_tol: 1e-13, max_degree: 60 };
        let rotated = mhg_matrix(&spec, &x, &opts).unwrap().value;
        let diagonal = mhg(&spec, &d, &opts).unwrap().value;
        prop_assert!((rotated - diagonal).abs() <= 1e-11 * diagonal.abs());
    }
}
