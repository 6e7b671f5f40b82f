//! Bivariate scalar densities, written directly from the scalar formulas and
//! used as references for the `m = 1` matrix paths.

use statrs::function::gamma::ln_gamma;

fn ln_beta3(a: f64, b: f64, c: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) + ln_gamma(c) - ln_gamma(a + b + c)
}

/// `u₁^{a−1} u₂^{b−1} (1−u₁)^{b+c−1} (1−u₂)^{a+c−1} / (B*(a,b,c) (1−u₁u₂)^{a+b+c})`
/// on `[0,1]²`, zero elsewhere.
pub fn bgb1_scalar_pdf(u1: f64, u2: f64, a: f64, b: f64, c: f64) -> f64 {
    if !(0.0..=1.0).contains(&u1) || !(0.0..=1.0).contains(&u2) {
        return 0.0;
    }
    let num = u1.powf(a - 1.0) * u2.powf(b - 1.0) * (1.0 - u1).powf(b + c - 1.0) * (1.0 - u2).powf(a + c - 1.0);
    num / ((1.0 - u1 * u2).powf(a + b + c) * ln_beta3(a, b, c).exp())
}

/// `f₁^{a−1} f₂^{b−1} / (B*(a,b,c) (1+f₁+f₂)^{a+b+c})` on `f₁, f₂ ≥ 0`.
pub fn bgb2_scalar_pdf(f1: f64, f2: f64, a: f64, b: f64, c: f64) -> f64 {
    if f1 < 0.0 || f2 < 0.0 {
        return 0.0;
    }
    f1.powf(a - 1.0) * f2.powf(b - 1.0) / ((1.0 + f1 + f2).powf(a + b + c) * ln_beta3(a, b, c).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_values() {
        assert!((bgb1_scalar_pdf(0.5, 0.5, 1.0, 1.0, 1.0) - 32.0 / 27.0).abs() < 1e-14);
        assert_eq!(bgb1_scalar_pdf(0.3, 0.0, 1.0, 2.0, 1.0), 0.0);
        assert_eq!(bgb1_scalar_pdf(1.3, 0.5, 1.0, 2.0, 1.0), 0.0);
        assert!((bgb2_scalar_pdf(1.0, 1.0, 1.0, 1.0, 1.0) - 2.0 / 27.0).abs() < 1e-15);
        assert_eq!(bgb2_scalar_pdf(-1.0, 1.0, 1.0, 1.0, 1.0), 0.0);
    }
}
