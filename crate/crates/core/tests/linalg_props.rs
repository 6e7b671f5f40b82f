use bgb_core::linalg::{eigenvalues, factor_pd, inverse_pd, sqrt_pd, Matrix, PDMatrix, SymMatrix};
use proptest::prelude::*;

/// `L·Lᵀ` for a random lower-triangular `L` with positive diagonal.
fn spd(max_m: usize) -> impl Strategy<Value = SymMatrix> {
    (1..=max_m).prop_flat_map(|m| {
        (prop::collection::vec(0.3f64..2.0, m), prop::collection::vec(-1.0f64..1.0, m * m)).prop_map(move |(d, off)| {
            let l = Matrix::from_fn(m, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => d[i],
                std::cmp::Ordering::Greater => off[i * m + j],
                std::cmp::Ordering::Less => 0.0,
            });
            l.mul(&l.transpose()).unwrap().symmetric_part()
        })
    })
}

fn commutator(a: &SymMatrix, b: &SymMatrix) -> f64 {
    let (a, b) = (a.to_matrix(), b.to_matrix());
    a.mul(&b).unwrap().max_abs_diff(&b.mul(&a).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cholesky_round_trips(m in spd(6)) {
        let f = factor_pd(m.clone()).unwrap();
        let l = f.lower_factor();
        let back = l.mul(&l.transpose()).unwrap();
        prop_assert!(back.max_abs_diff(&m.to_matrix()) <= 1e-12 * (1.0 + m.max_abs()));
    }

    #[test]
    fn logdet_matches_eigenvalues(m in spd(6)) {
        let ld = factor_pd(m.clone()).unwrap().logdet();
        let by_eig: f64 = eigenvalues(&m).unwrap().iter().map(|l| l.ln()).sum();
        prop_assert!((ld - by_eig).abs() <= 1e-9 * ld.abs().max(1.0), "{ld} {by_eig}");
    }

    #[test]
    fn square_root_commutes(m in spd(6)) {
        let pd = PDMatrix::new(m.clone()).unwrap();
        let r = sqrt_pd(&pd).unwrap();
        prop_assert!(commutator(r.sym(), &m) <= 1e-9 * (1.0 + m.max_abs()));
    }

    #[test]
    fn inverse_and_root_commute(m in spd(6)) {
        let pd = PDMatrix::new(m).unwrap();
        let a = inverse_pd(&sqrt_pd(&pd).unwrap()).unwrap();
        let b = sqrt_pd(&inverse_pd(&pd).unwrap()).unwrap();
        prop_assert!(a.sym().max_abs_diff(b.sym()) <= 1e-8 * (1.0 + a.sym().max_abs()));
    }
}
