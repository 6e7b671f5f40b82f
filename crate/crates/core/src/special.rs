//! Multivariate gamma and beta functions, log scale.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

const LN_PI: f64 = 1.144_729_885_849_400_2;

/// The domain `a > (m − 1)/2` on which `Γ_m[a]` converges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainBound {
    pub m: usize,
    pub threshold: f64,
}

impl DomainBound {
    pub fn new(m: usize) -> Self {
        DomainBound { m, threshold: (m as f64 - 1.0) / 2.0 }
    }

    /// Checks `value > (m − 1)/2`, naming the parameter in the error.
    pub fn check(&self, name: &str, value: f64) -> Result<()> {
        if value.is_finite() && value > self.threshold {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "requires {name} > (m-1)/2 = {} (m = {}), got {name} = {value}",
                self.threshold, self.m
            )))
        }
    }
}

/// `log Γ_m[a] = m(m−1)/4 · log π + Σ_{i=1}^{m} log Γ(a − (i−1)/2)`.
pub fn mv_gamma_log(m: usize, a: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain("requires m >= 1"));
    }
    DomainBound::new(m).check("a", a)?;
    let mut acc = (m * (m - 1)) as f64 / 4.0 * LN_PI;
    for i in 0..m {
        acc += ln_gamma(a - i as f64 / 2.0);
    }
    Ok(acc)
}

/// `log β_m[a, b] = log Γ_m[a] + log Γ_m[b] − log Γ_m[a + b]`.
pub fn mv_beta_log(m: usize, a: f64, b: f64) -> Result<f64> {
    let ga = mv_gamma_log(m, a)?;
    let gb = mv_gamma_log(m, b)?;
    Ok((ga + gb) - mv_gamma_log(m, a + b)?)
}

/// `log β*_m[a, b, c] = log Γ_m[a] + log Γ_m[b] + log Γ_m[c] − log Γ_m[a + b + c]`.
pub fn mv_beta3_log(m: usize, a: f64, b: f64, c: f64) -> Result<f64> {
    let ga = mv_gamma_log(m, a)?;
    let gb = mv_gamma_log(m, b)?;
    let gc = mv_gamma_log(m, c)?;
    Ok(((ga + gb) + gc) - mv_gamma_log(m, (a + b) + c)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_reduction() {
        assert!((mv_gamma_log(1, 4.0).unwrap() - 6f64.ln()).abs() < 1e-13);
        assert!((mv_beta_log(1, 2.0, 3.0).unwrap() - (1.0f64 / 12.0).ln()).abs() < 1e-13);
        assert!((mv_beta3_log(1, 1.0, 1.0, 1.0).unwrap() - 0.5f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn two_by_two_value() {
        // π^{1/2} Γ(2.5) Γ(2)
        let expect = 0.5 * LN_PI + (0.75 * std::f64::consts::PI.sqrt()).ln();
        assert!((mv_gamma_log(2, 2.5).unwrap() - expect).abs() < 1e-13);
    }

    #[test]
    fn domain_errors() {
        let e = mv_gamma_log(3, 1.0).unwrap_err();
        assert!(e.to_string().contains("requires a > (m-1)/2"));
        assert!(mv_beta_log(2, 0.5, 3.0).is_err());
        assert!(mv_beta3_log(2, 1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn recursion_identity() {
        for m in 2..=6usize {
            for &a in &[3.1, 4.75, 10.2] {
                let lhs = mv_gamma_log(m, a).unwrap() - mv_gamma_log(m - 1, a).unwrap();
                let rhs = (m as f64 - 1.0) / 2.0 * LN_PI + ln_gamma(a - (m as f64 - 1.0) / 2.0);
                assert!((lhs - rhs).abs() <= 1e-12, "m={m} a={a}");
            }
        }
    }

    #[test]
    fn symmetry() {
        assert_eq!(mv_beta_log(3, 2.2, 5.1).unwrap(), mv_beta_log(3, 5.1, 2.2).unwrap());
        let base = mv_beta3_log(2, 1.3, 2.7, 4.1).unwrap();
        for (a, b, c) in [(2.7, 1.3, 4.1), (4.1, 2.7, 1.3), (1.3, 4.1, 2.7)] {
            assert!((mv_beta3_log(2, a, b, c).unwrap() - base).abs() < 1e-13);
        }
        // β*₂[2,2,2] = β₂[2,2] β₂[4,2]
        let lhs = mv_beta3_log(2, 2.0, 2.0, 2.0).unwrap();
        let rhs = mv_beta_log(2, 2.0, 2.0).unwrap() + mv_beta_log(2, 4.0, 2.0).unwrap();
        assert!((lhs - rhs).abs() < 1e-13);
    }
}
