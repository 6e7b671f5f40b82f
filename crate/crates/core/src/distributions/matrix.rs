use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use super::{check_dim, GammaParams, LogDensity};
use crate::error::{Error, Result};
use crate::linalg::{factor_pd, Matrix, PDMatrix, SymMatrix};
use crate::special::{mv_beta_log, mv_gamma_log, DomainBound};

/// Log-density of `𝒢_m(a, Θ)` at `A`:
/// `−log Γ_m[a] − a·log|Θ| + (a − (m+1)/2)·log|A| − tr(Θ⁻¹A)`.
pub fn matrix_gamma_logpdf(a_mat: &SymMatrix, p: &GammaParams) -> Result<LogDensity> {
    check_dim(p.m, a_mat.dim())?;
    let Ok(a_pd) = factor_pd(a_mat.clone()) else {
        return Ok(LogDensity::outside());
    };
    let m = p.m;
    let theta_inv = p.theta.inverse()?;
    let mut tr = 0.0;
    for i in 0..m {
        for j in 0..m {
            tr += theta_inv.sym().get(i, j) * a_mat.get(j, i);
        }
    }
    let k = (m as f64 + 1.0) / 2.0;
    let v = -mv_gamma_log(m, p.a)? - p.a * p.theta.logdet() + (p.a - k) * a_pd.logdet() - tr;
    Ok(LogDensity::inside(v))
}

/// `𝒢_m(a, I)` by the triangular construction: `W = T·Tᵀ` with
/// `T_ii² ~ Gamma(a − (i−1)/2, 1)` and `T_ij ~ N(0, 1/2)` below the diagonal.
pub fn standard_gamma_sample<R: Rng + ?Sized>(m: usize, a: f64, rng: &mut R) -> Result<PDMatrix> {
    DomainBound::new(m).check("a", a)?;
    let mut t = Matrix::zeros(m);
    for i in 0..m {
        let shape = a - i as f64 / 2.0;
        let g = Gamma::new(shape, 1.0).map_err(|e| Error::domain(e.to_string()))?;
        // Shapes near zero can underflow to exactly 0; keep the factor valid.
        t.set(i, i, g.sample(rng).max(f64::MIN_POSITIVE).sqrt());
        for j in 0..i {
            let z: f64 = rng.sample(StandardNormal);
            t.set(i, j, z * std::f64::consts::FRAC_1_SQRT_2);
        }
    }
    PDMatrix::from_cholesky(t)
}

/// `A = Θ^{1/2} W Θ^{1/2}` with `W ~ 𝒢_m(a, I)`.
pub fn matrix_gamma_sample<R: Rng + ?Sized>(p: &GammaParams, rng: &mut R) -> Result<PDMatrix> {
    let w = standard_gamma_sample(p.m, p.a, rng)?;
    if p.theta.sym() == &SymMatrix::identity(p.m) {
        return Ok(w);
    }
    let root = p.theta.sqrt()?;
    factor_pd(w.congruence(&root.sym().to_matrix())?)
}

/// Log-density of `𝓑I_m(a, b)` on `0 < U < I`.
pub fn beta1_logpdf(u: &SymMatrix, a: f64, b: f64) -> Result<LogDensity> {
    let m = u.dim();
    let norm = mv_beta_log(m, a, b)?;
    let (Ok(u_pd), Ok(v_pd)) = (factor_pd(u.clone()), factor_pd(u.identity_minus())) else {
        return Ok(LogDensity::outside());
    };
    let k = (m as f64 + 1.0) / 2.0;
    Ok(LogDensity::inside(-norm + (a - k) * u_pd.logdet() + (b - k) * v_pd.logdet()))
}

/// Log-density of `𝓑II_m(a, b)` on `F > 0`.
pub fn beta2_logpdf(f: &SymMatrix, a: f64, b: f64) -> Result<LogDensity> {
    let m = f.dim();
    let norm = mv_beta_log(m, a, b)?;
    let Ok(f_pd) = factor_pd(f.clone()) else {
        return Ok(LogDensity::outside());
    };
    let k = (m as f64 + 1.0) / 2.0;
    let ld_plus = factor_pd(f.identity_plus())?.logdet();
    Ok(LogDensity::inside(-norm + (a - k) * f_pd.logdet() - (a + b) * ld_plus))
}

/// `U = (A+B)^{−1/2} A (A+B)^{−1/2}` with independent `A ~ 𝒢(a, I)`, `B ~ 𝒢(b, I)`.
pub fn beta1_sample<R: Rng + ?Sized>(m: usize, a: f64, b: f64, rng: &mut R) -> Result<PDMatrix> {
    let x = standard_gamma_sample(m, a, rng)?;
    let y = standard_gamma_sample(m, b, rng)?;
    let s = factor_pd(x.sym().add(y.sym())?)?;
    let w = s.sqrt()?.inverse()?;
    factor_pd(x.congruence(&w.sym().to_matrix())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use statrs::function::gamma::ln_gamma;

    #[test]
    fn gamma_density_scalar_examples() {
        let p = GammaParams::standard(1, 1.0).unwrap();
        let d = matrix_gamma_logpdf(&SymMatrix::scalar(0.7), &p).unwrap();
        assert!((d.log_value + 0.7).abs() < 1e-14);
        let p = GammaParams::standard(1, 2.0).unwrap();
        assert!((matrix_gamma_logpdf(&SymMatrix::scalar(1.0), &p).unwrap().log_value + 1.0).abs() < 1e-14);
        assert!(!matrix_gamma_logpdf(&SymMatrix::scalar(-1.0), &p).unwrap().in_support);
        assert!(matrix_gamma_logpdf(&SymMatrix::identity(2), &p).is_err());
    }

    #[test]
    fn gamma_density_with_scale() {
        // m = 1, Θ = 2: x^{a−1} e^{−x/2} / (Γ(a) 2^a).
        let p = GammaParams::new(2.5, PDMatrix::new(SymMatrix::scalar(2.0)).unwrap()).unwrap();
        let x: f64 = 1.3;
        let expect = 1.5 * x.ln() - x / 2.0 - ln_gamma(2.5) - 2.5 * 2f64.ln();
        assert!((matrix_gamma_logpdf(&SymMatrix::scalar(x), &p).unwrap().log_value - expect).abs() < 1e-13);
    }

    #[test]
    fn beta_scalar_reductions() {
        let (a, b, u): (f64, f64, f64) = (2.0, 3.5, 0.3);
        let lb = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
        let d = beta1_logpdf(&SymMatrix::scalar(u), a, b).unwrap();
        assert!((d.log_value - ((a - 1.0) * u.ln() + (b - 1.0) * (1.0 - u).ln() - lb)).abs() < 1e-13);
        assert!(!beta1_logpdf(&SymMatrix::scalar(1.0), a, b).unwrap().in_support);
        let f: f64 = 1.7;
        let d = beta2_logpdf(&SymMatrix::scalar(f), a, b).unwrap();
        assert!((d.log_value - ((a - 1.0) * f.ln() - (a + b) * (1.0 + f).ln() - lb)).abs() < 1e-13);
        let outside = SymMatrix::diag(&[0.5, 1.2]);
        assert!(!beta1_logpdf(&outside, 2.0, 2.0).unwrap().in_support);
    }

    #[test]
    fn samplers_are_seed_deterministic_and_in_support() {
        for m in 1..=3 {
            let x = standard_gamma_sample(m, 1.7, &mut substream(3, 0)).unwrap();
            let y = standard_gamma_sample(m, 1.7, &mut substream(3, 0)).unwrap();
            assert_eq!(x, y);
            let u = beta1_sample(m, 1.5, 2.0, &mut substream(4, 1)).unwrap();
            assert!(factor_pd(u.sym().identity_minus()).is_ok());
        }
        let theta = PDMatrix::new(SymMatrix::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap()).unwrap();
        let p = GammaParams::new(2.0, theta).unwrap();
        assert!(matrix_gamma_sample(&p, &mut substream(1, 1)).is_ok());
    }
}
