use serde::{Deserialize, Serialize};

use super::{bgb1_logpdf, check_dim, BimatrixParams, LogDensity, MatrixPair, PairKind};
use crate::error::{Error, Result};
use crate::hypergeometric::{mhg, mhg_at_identity, HypergeometricSpec, SeriesOptions, SeriesResult};
use crate::linalg::{eigenvalues, factor_pd, SymMatrix};
use crate::special::{mv_beta3_log, mv_beta_log, DomainBound};

/// A moment value together with the diagnostics of the series behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentResult {
    pub value: f64,
    /// `log` of the beta-function prefactor.
    pub log_prefactor: f64,
    pub series: SeriesResult,
}

fn assemble(log_prefactor: f64, series: SeriesResult) -> Result<MomentResult> {
    let value = log_prefactor.exp() * series.value;
    if !series.converged {
        return Err(Error::NotConverged { value, degree_used: series.degree_used });
    }
    Ok(MomentResult { value, log_prefactor, series })
}

/// `E(|U₁|ʳ|U₂|ˢ) = β_m[a+r, b+c] β_m[b+s, a+c] / β*_m[a,b,c]
///   · ₃F₂(a+r, b+s, a+b+c; a+b+c+r, a+b+c+s; I_m)`.
///
/// Requires `a + r > (m−1)/2` and `b + s > (m−1)/2`.
pub fn det_moment_u(p: &BimatrixParams, r: f64, s: f64, opts: &SeriesOptions) -> Result<MomentResult> {
    let (m, a, b, c) = (p.m, p.a, p.b, p.c);
    let bound = DomainBound::new(m);
    bound.check("a+r", a + r)?;
    bound.check("b+s", b + s)?;
    let abc = (a + b) + c;
    let log_prefactor = mv_beta_log(m, a + r, b + c)? + mv_beta_log(m, b + s, a + c)? - mv_beta3_log(m, a, b, c)?;
    let spec = HypergeometricSpec::new(vec![a + r, b + s, abc], vec![abc + r, abc + s]);
    assemble(log_prefactor, mhg_at_identity(&spec, m, opts)?)
}

/// `E(|Z|ʳ) = β_m[a+c, b+c] β_m[a+r, c] / β*_m[a,b,c]
///   · ₃F₂(c, a+c, a+c; a+c+r, a+b+2c; I_m)` for `Z = U₂^{1/2} U₁ U₂^{1/2}`.
///
/// Requires `a + r > (m−1)/2`.
pub fn det_moment_z(p: &BimatrixParams, r: f64, opts: &SeriesOptions) -> Result<MomentResult> {
    let (m, a, b, c) = (p.m, p.a, p.b, p.c);
    DomainBound::new(m).check("a+r", a + r)?;
    let log_prefactor = mv_beta_log(m, a + c, b + c)? + mv_beta_log(m, a + r, c)? - mv_beta3_log(m, a, b, c)?;
    let spec = HypergeometricSpec::new(vec![c, a + c, a + c], vec![a + c + r, a + b + 2.0 * c]);
    assemble(log_prefactor, mhg_at_identity(&spec, m, opts)?)
}

/// Log-density of `Z = U₂^{1/2} U₁ U₂^{1/2}` on `0 < Z < I`:
/// `β_m[a+c,b+c]/β*_m[a,b,c] · |Z|^{a−(m+1)/2} |I−Z|^{c−(m+1)/2}
///   · ₂F₁(a+c, a+c; a+b+2c; I−Z)`.
pub fn product_z_logpdf(z: &SymMatrix, p: &BimatrixParams, opts: &SeriesOptions) -> Result<LogDensity> {
    check_dim(p.m, z.dim())?;
    let (m, a, b, c) = (p.m, p.a, p.b, p.c);
    let log_prefactor = mv_beta_log(m, a + c, b + c)? - mv_beta3_log(m, a, b, c)?;
    let comp = z.identity_minus();
    let (Ok(z_pd), Ok(comp_pd)) = (factor_pd(z.clone()), factor_pd(comp.clone())) else {
        return Ok(LogDensity::outside());
    };
    let spec = HypergeometricSpec::new(vec![a + c, a + c], vec![a + b + 2.0 * c]);
    let series = mhg(&spec, &eigenvalues(&comp)?, opts)?;
    if !series.converged {
        return Err(Error::NotConverged { value: series.value, degree_used: series.degree_used });
    }
    let k = p.k();
    let v = log_prefactor + (a - k) * z_pd.logdet() + (c - k) * comp_pd.logdet() + series.log_abs;
    Ok(LogDensity::inside(v))
}

/// Joint log-density of `(V₁, V₂) = (U₁⁻¹, U₂⁻¹)` on `V₁ > I`, `V₂ > I`: the
/// type I density at the inverses times the Jacobian `|V₁|^{−(m+1)}|V₂|^{−(m+1)}`.
pub fn inverse_pair_logpdf(pair: &MatrixPair, p: &BimatrixParams) -> Result<LogDensity> {
    check_dim(p.m, pair.dim())?;
    let minus_i = |v: &SymMatrix| v.identity_minus().scale(-1.0);
    if factor_pd(minus_i(&pair.first)).is_err() || factor_pd(minus_i(&pair.second)).is_err() {
        return Ok(LogDensity::outside());
    }
    let v1 = factor_pd(pair.first.clone())?;
    let v2 = factor_pd(pair.second.clone())?;
    let u = MatrixPair::new(v1.inverse()?.into_sym(), v2.inverse()?.into_sym(), PairKind::BetaI)?;
    let d = bgb1_logpdf(&u, p)?;
    if !d.in_support {
        return Ok(LogDensity::outside());
    }
    let jac = (p.m as f64 + 1.0) * (v1.logdet() + v2.logdet());
    Ok(LogDensity::inside(d.log_value - jac))
}
