use rand::Rng;

use super::{check_dim, standard_gamma_sample, BimatrixParams, LogDensity, MatrixPair, PairKind};
use crate::error::{Error, Result};
use crate::hypergeometric::{mhg, HypergeometricSpec, SeriesOptions};
use crate::linalg::{eigenvalues, factor_pd, PDMatrix, SymMatrix};
use crate::special::mv_beta3_log;

/// `W·X·W` for symmetric `W`.
fn sandwich(x: &PDMatrix, w: &PDMatrix) -> Result<SymMatrix> {
    x.congruence(&w.sym().to_matrix())
}

/// `U₁ = (A+C)^{−1/2} A (A+C)^{−1/2}`, `U₂ = (B+C)^{−1/2} B (B+C)^{−1/2}`.
pub fn bgb1_construct(a: &PDMatrix, b: &PDMatrix, c: &PDMatrix) -> Result<MatrixPair> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), c.dim())?;
    let part = |x: &PDMatrix| -> Result<SymMatrix> {
        let w = factor_pd(x.sym().add(c.sym())?)?.sqrt()?.inverse()?;
        sandwich(x, &w)
    };
    MatrixPair::new(part(a)?, part(b)?, PairKind::BetaI)
}

/// `F₁ = C^{−1/2} A C^{−1/2}`, `F₂ = C^{−1/2} B C^{−1/2}`.
pub fn bgb2_construct(a: &PDMatrix, b: &PDMatrix, c: &PDMatrix) -> Result<MatrixPair> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), c.dim())?;
    let w = c.sqrt()?.inverse()?;
    MatrixPair::new(sandwich(a, &w)?, sandwich(b, &w)?, PairKind::BetaII)
}

fn gamma_triple<R: Rng + ?Sized>(p: &BimatrixParams, rng: &mut R) -> Result<(PDMatrix, PDMatrix, PDMatrix)> {
    let a = standard_gamma_sample(p.m, p.a, rng)?;
    let b = standard_gamma_sample(p.m, p.b, rng)?;
    let c = standard_gamma_sample(p.m, p.c, rng)?;
    Ok((a, b, c))
}

pub fn bgb1_sample<R: Rng + ?Sized>(p: &BimatrixParams, rng: &mut R) -> Result<MatrixPair> {
    let (a, b, c) = gamma_triple(p, rng)?;
    bgb1_construct(&a, &b, &c)
}

pub fn bgb2_sample<R: Rng + ?Sized>(p: &BimatrixParams, rng: &mut R) -> Result<MatrixPair> {
    let (a, b, c) = gamma_triple(p, rng)?;
    bgb2_construct(&a, &b, &c)
}

/// `log|I − U₁U₂|` for `0 < U₁, U₂ < I`, averaged over the two congruent
/// symmetric forms so that swapping the arguments is exact.
pub fn logdet_identity_minus_product(u1: &PDMatrix, u2: &PDMatrix) -> Result<f64> {
    let one = factor_pd(sandwich(u1, &u2.sqrt()?)?.identity_minus())?.logdet();
    let two = factor_pd(sandwich(u2, &u1.sqrt()?)?.identity_minus())?.logdet();
    Ok((one + two) / 2.0)
}

struct BetaIParts {
    u1: PDMatrix,
    u2: PDMatrix,
    /// Everything except the `|I − U₁U₂|^{−(a+b+c)}` factor.
    base: f64,
}

fn beta1_parts(pair: &MatrixPair, p: &BimatrixParams) -> Result<Option<BetaIParts>> {
    check_dim(p.m, pair.dim())?;
    let norm = mv_beta3_log(p.m, p.a, p.b, p.c)?;
    let pds = (
        factor_pd(pair.first.clone()),
        factor_pd(pair.second.clone()),
        factor_pd(pair.first.identity_minus()),
        factor_pd(pair.second.identity_minus()),
    );
    let (Ok(u1), Ok(u2), Ok(v1), Ok(v2)) = pds else {
        return Ok(None);
    };
    let k = p.k();
    // Pairwise sums keep the (U₁, a) ↔ (U₂, b) swap bit-exact.
    let dets = (p.a - k) * u1.logdet() + (p.b - k) * u2.logdet();
    let comps = (p.c + p.b - k) * v1.logdet() + (p.c + p.a - k) * v2.logdet();
    Ok(Some(BetaIParts { u1, u2, base: (-norm + dets) + comps }))
}

/// Joint log-density of the bimatrix generalised beta type I pair.
pub fn bgb1_logpdf(pair: &MatrixPair, p: &BimatrixParams) -> Result<LogDensity> {
    let Some(parts) = beta1_parts(pair, p)? else {
        return Ok(LogDensity::outside());
    };
    let ld = logdet_identity_minus_product(&parts.u1, &parts.u2)?;
    Ok(LogDensity::inside(parts.base - ((p.a + p.b) + p.c) * ld))
}

/// Type I density with `|I − U₁U₂|^{−(a+b+c)}` expanded as the zonal series
/// `₁F₀(a+b+c; U₁U₂)`, i.e. as a mixture over partitions.
pub fn bgb1_logpdf_series(pair: &MatrixPair, p: &BimatrixParams, opts: &SeriesOptions) -> Result<LogDensity> {
    let Some(parts) = beta1_parts(pair, p)? else {
        return Ok(LogDensity::outside());
    };
    let x = eigenvalues(&sandwich(&parts.u1, &parts.u2.sqrt()?)?)?;
    let spec = HypergeometricSpec::new(vec![(p.a + p.b) + p.c], vec![]);
    let r = mhg(&spec, &x, opts)?;
    if !r.converged {
        return Err(Error::NotConverged { value: r.value, degree_used: r.degree_used });
    }
    Ok(LogDensity::inside(parts.base + r.log_abs))
}

/// Joint log-density of the bimatrix generalised beta type II pair.
pub fn bgb2_logpdf(pair: &MatrixPair, p: &BimatrixParams) -> Result<LogDensity> {
    check_dim(p.m, pair.dim())?;
    let norm = mv_beta3_log(p.m, p.a, p.b, p.c)?;
    let (Ok(f1), Ok(f2)) = (factor_pd(pair.first.clone()), factor_pd(pair.second.clone())) else {
        return Ok(LogDensity::outside());
    };
    let k = p.k();
    let dets = (p.a - k) * f1.logdet() + (p.b - k) * f2.logdet();
    let total = factor_pd(pair.first.add(&pair.second)?.identity_plus())?.logdet();
    Ok(LogDensity::inside((-norm + dets) - ((p.a + p.b) + p.c) * total))
}
