//! Matrix variate gamma and beta laws, the bimatrix generalised beta families
//! built from them, and the laws derived from a type I pair.

mod bimatrix;
mod derived;
mod matrix;
mod scalar;

pub use bimatrix::{
    bgb1_construct, bgb1_logpdf, bgb1_logpdf_series, bgb1_sample, bgb2_construct, bgb2_logpdf, bgb2_sample,
    logdet_identity_minus_product,
};
pub use derived::{det_moment_u, det_moment_z, inverse_pair_logpdf, product_z_logpdf, MomentResult};
pub use matrix::{
    beta1_logpdf, beta1_sample, beta2_logpdf, matrix_gamma_logpdf, matrix_gamma_sample, standard_gamma_sample,
};
pub use scalar::{bgb1_scalar_pdf, bgb2_scalar_pdf};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{factor_pd, PDMatrix, SymMatrix};
use crate::special::DomainBound;

/// Shape `a` and scale `Θ` of a matrix gamma law.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaParams {
    pub m: usize,
    pub a: f64,
    pub theta: PDMatrix,
}

impl GammaParams {
    pub fn new(a: f64, theta: PDMatrix) -> Result<Self> {
        let m = theta.dim();
        DomainBound::new(m).check("a", a)?;
        Ok(GammaParams { m, a, theta })
    }

    /// `Θ = I_m`.
    pub fn standard(m: usize, a: f64) -> Result<Self> {
        Self::new(a, PDMatrix::identity(m))
    }
}

/// Shapes `(a, b, c)` shared by both bimatrix families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BimatrixParams {
    pub m: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl BimatrixParams {
    pub fn new(m: usize, a: f64, b: f64, c: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("requires m >= 1"));
        }
        let bound = DomainBound::new(m);
        bound.check("a", a)?;
        bound.check("b", b)?;
        bound.check("c", c)?;
        Ok(BimatrixParams { m, a, b, c })
    }

    /// `(m + 1)/2`, the exponent offset used throughout.
    pub(crate) fn k(&self) -> f64 {
        (self.m as f64 + 1.0) / 2.0
    }
}

impl<'de> Deserialize<'de> for BimatrixParams {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            m: usize,
            a: f64,
            b: f64,
            c: f64,
        }
        let r = Raw::deserialize(d)?;
        BimatrixParams::new(r.m, r.a, r.b, r.c).map_err(serde::de::Error::custom)
    }
}

/// Which support a [`MatrixPair`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairKind {
    /// `0 < first < I`, `0 < second < I`.
    BetaI,
    /// `first > 0`, `second > 0`.
    BetaII,
    /// `first > I`, `second > I`.
    Inverse,
}

/// Two symmetric matrices of equal size tagged with the support they are
/// meant to live on. Membership is checked by [`MatrixPair::in_support`]
/// rather than at construction so densities can return the sentinel.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPair {
    pub first: SymMatrix,
    pub second: SymMatrix,
    pub kind: PairKind,
}

impl MatrixPair {
    pub fn new(first: SymMatrix, second: SymMatrix, kind: PairKind) -> Result<Self> {
        if first.dim() != second.dim() {
            return Err(Error::DimensionMismatch { expected: first.dim(), found: second.dim() });
        }
        Ok(MatrixPair { first, second, kind })
    }

    pub fn dim(&self) -> usize {
        self.first.dim()
    }

    pub fn in_support(&self) -> bool {
        let inside = |x: &SymMatrix| match self.kind {
            PairKind::BetaI => is_pd(x) && is_pd(&x.identity_minus()),
            PairKind::BetaII => is_pd(x),
            PairKind::Inverse => is_pd(&x.identity_minus().scale(-1.0)),
        };
        inside(&self.first) && inside(&self.second)
    }
}

pub(crate) fn is_pd(x: &SymMatrix) -> bool {
    factor_pd(x.clone()).is_ok()
}

/// Which bimatrix family to draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairFamily {
    Bgb1,
    Bgb2,
}

impl PairFamily {
    pub fn sample<R: rand::Rng + ?Sized>(self, p: &BimatrixParams, rng: &mut R) -> Result<MatrixPair> {
        match self {
            PairFamily::Bgb1 => bgb1_sample(p, rng),
            PairFamily::Bgb2 => bgb2_sample(p, rng),
        }
    }
}

/// Log-density with an explicit support flag; outside the support the value is
/// `−∞` (serialised as `null`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogDensity {
    #[serde(serialize_with = "ser_log", deserialize_with = "de_log")]
    pub log_value: f64,
    pub in_support: bool,
}

impl LogDensity {
    pub fn inside(log_value: f64) -> Self {
        LogDensity { log_value, in_support: true }
    }

    pub fn outside() -> Self {
        LogDensity { log_value: f64::NEG_INFINITY, in_support: false }
    }

    pub fn density(&self) -> f64 {
        self.log_value.exp()
    }
}

fn ser_log<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

fn de_log<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NEG_INFINITY))
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_domain() {
        assert!(BimatrixParams::new(2, 0.6, 1.0, 1.0).is_ok());
        let e = BimatrixParams::new(3, 1.0, 2.0, 2.0).unwrap_err();
        assert!(e.to_string().contains("requires a > (m-1)/2"));
        assert!(serde_json::from_str::<BimatrixParams>(r#"{"m":2,"a":0.2,"b":1,"c":1}"#).is_err());
    }

    #[test]
    fn log_density_json() {
        let s = serde_json::to_string(&LogDensity::outside()).unwrap();
        assert_eq!(s, r#"{"log_value":null,"in_support":false}"#);
        let back: LogDensity = serde_json::from_str(&s).unwrap();
        assert_eq!(back, LogDensity::outside());
        let v = LogDensity::inside(-0.25);
        assert_eq!(serde_json::from_str::<LogDensity>(&serde_json::to_string(&v).unwrap()).unwrap(), v);
    }

    #[test]
    fn pair_support() {
        let half = SymMatrix::identity(2).scale(0.5);
        let p = MatrixPair::new(half.clone(), half.clone(), PairKind::BetaI).unwrap();
        assert!(p.in_support());
        let p = MatrixPair::new(half.clone(), SymMatrix::identity(2), PairKind::BetaI).unwrap();
        assert!(!p.in_support());
        let two = SymMatrix::identity(2).scale(2.0);
        assert!(MatrixPair::new(two.clone(), two.clone(), PairKind::Inverse).unwrap().in_support());
        assert!(!MatrixPair::new(two, half, PairKind::Inverse).unwrap().in_support());
        assert!(MatrixPair::new(SymMatrix::identity(1), SymMatrix::identity(2), PairKind::BetaII).is_err());
    }
}
