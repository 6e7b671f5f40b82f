//! Independent oracles for the closed forms: Monte Carlo estimators with
//! honest standard errors, low-dimensional quadrature and the Euler-integral
//! identities behind the hypergeometric results.
//!
//! An oracle never calls the closed-form path it checks. Monte Carlo draws come
//! from the counter-based streams of [`crate::rng`], so every report is a pure
//! function of `(seed, n)` regardless of the thread count.

pub mod suite;

pub use suite::{run_suite, CheckOutcome, Evidence, Status, Suite, SuiteReport};

use serde::{Deserialize, Serialize};
use statrs::function::beta::ln_beta;
use statrs::function::gamma::ln_gamma;

use crate::distributions::{
    beta1_sample, beta2_logpdf, bgb1_sample, bgb2_sample, inverse_pair_logpdf, standard_gamma_sample,
    BimatrixParams, MatrixPair, PairFamily, PairKind,
};
use crate::error::{Error, Result};
use crate::hypergeometric::{mhg, HypergeometricSpec, SeriesOptions};
use crate::linalg::{eigenvalues, factor_pd, SymMatrix};
use crate::quadrature::{integrate_1d, Axis, QuadResult};
use crate::rng::{map_chunks, merge_all, RunningStats, StreamRng};
use crate::special::DomainBound;

pub use crate::quadrature::{quad_density_mass, QuadratureSpec};

/// Smallest sample size accepted by the Monte Carlo oracles.
pub const MIN_SAMPLES: usize = 1000;

/// A Monte Carlo estimate with its standard error and, optionally, the value
/// it is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCReport {
    pub estimate: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_score: Option<f64>,
}

impl MCReport {
    pub fn from_stats(stats: &RunningStats, seed: u64) -> Self {
        MCReport {
            estimate: stats.mean(),
            std_error: stats.std_error(),
            n_samples: stats.count(),
            seed,
            target: None,
            z_score: None,
        }
    }

    /// Attaches `target` and the z-score `(estimate − target)/std_error`.
    pub fn with_target(mut self, target: f64) -> Self {
        let diff = self.estimate - target;
        let z = if self.std_error > 0.0 {
            diff / self.std_error
        } else if diff == 0.0 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        };
        self.target = Some(target);
        self.z_score = Some(z);
        self
    }
}

/// Two independent estimates of the same quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSampleReport {
    pub first: MCReport,
    pub second: MCReport,
    /// `(first − second)/√(se₁² + se₂²)`.
    pub z_score: f64,
}

impl TwoSampleReport {
    fn new(first: MCReport, second: MCReport) -> Self {
        let se = first.std_error.hypot(second.std_error);
        let diff = first.estimate - second.estimate;
        let z_score = if se > 0.0 { diff / se } else if diff == 0.0 { 0.0 } else { f64::INFINITY };
        TwoSampleReport { first, second, z_score }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < MIN_SAMPLES {
        return Err(Error::InvalidParameters(format!("need at least {MIN_SAMPLES} samples, got {n}")));
    }
    Ok(())
}

/// Mean of `f` over `n` draws, reduced in chunk order.
pub fn mc_mean<F>(n: usize, seed: u64, threads: usize, f: F) -> Result<MCReport>
where
    F: Fn(&mut StreamRng) -> Result<f64> + Sync,
{
    let parts = map_chunks(n, seed, threads, |_, range, rng| -> Result<RunningStats> {
        let mut stats = RunningStats::default();
        for _ in range {
            stats.push(f(rng)?);
        }
        Ok(stats)
    });
    let parts = parts.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(MCReport::from_stats(&merge_all(&parts), seed))
}

fn logdet(x: &SymMatrix) -> Result<f64> {
    Ok(factor_pd(x.clone())?.logdet())
}

/// `E(|first|ʳ |second|ˢ)` over draws of `family`.
pub fn mc_det_moment(
    family: PairFamily,
    p: &BimatrixParams,
    r: f64,
    s: f64,
    n: usize,
    seed: u64,
    threads: usize,
) -> Result<MCReport> {
    check_n(n)?;
    mc_mean(n, seed, threads, |rng| {
        let pair = family.sample(p, rng)?;
        let mut e = 0.0;
        if r != 0.0 {
            e += r * logdet(&pair.first)?;
        }
        if s != 0.0 {
            e += s * logdet(&pair.second)?;
        }
        Ok(e.exp())
    })
}

/// `E|Z|ʳ` where `Z = U₂^{1/2} U₁ U₂^{1/2}` is formed from type I draws.
pub fn mc_product_det(p: &BimatrixParams, r: f64, n: usize, seed: u64, threads: usize) -> Result<MCReport> {
    check_n(n)?;
    mc_mean(n, seed, threads, |rng| {
        let pair = bgb1_sample(p, rng)?;
        let root = factor_pd(pair.second)?.sqrt()?;
        let z = factor_pd(pair.first)?.congruence(&root.sym().to_matrix())?;
        Ok((r * logdet(&z)?).exp())
    })
}

/// Right-hand side of the Euler-integral induction: the average of
/// `pFq(X·Y)` over `Y ~ 𝓑I_m(a, c−a)` should equal `p+1Fq+1(a, …; c, …; X)`.
///
/// At `m = 1` the integral is evaluated by quadrature with `n_or_nodes` nodes
/// (`std_error` then holds the quadrature error bound); for `m ≥ 2` it is a
/// Monte Carlo average over `n_or_nodes` beta-matrix draws.
pub fn lemma1_check(
    inner: &HypergeometricSpec,
    a: f64,
    c: f64,
    x: &SymMatrix,
    n_or_nodes: usize,
    seed: u64,
    threads: usize,
) -> Result<MCReport> {
    let m = x.dim();
    let bound = DomainBound::new(m);
    bound.check("a", a)?;
    bound.check("c-a", c - a)?;
    if factor_pd(x.identity_minus()).is_err() {
        return Err(Error::domain("X < I is required"));
    }
    let outer = HypergeometricSpec::new(
        std::iter::once(a).chain(inner.upper.iter().copied()).collect(),
        std::iter::once(c).chain(inner.lower.iter().copied()).collect(),
    );
    let eig = eigenvalues(x)?;
    let opts = SeriesOptions { rel_tol: 1e-13, max_degree: if m == 1 { 1 << 16 } else { 80 } };
    let target = series_value(&outer, &eig, &opts)?;

    if m == 1 {
        let x0 = x.get(0, 0);
        let ln_b = ln_beta(a, c - a);
        let kernel = |y: f64| -> f64 {
            let weight = ((a - 1.0) * y.ln() + (c - a - 1.0) * (1.0 - y).ln() - ln_b).exp();
            weight * series_value(inner, &[x0 * y], &opts).unwrap_or(f64::NAN)
        };
        let q = integrate_1d(kernel, Axis::Graded { lo: 0.0, hi: 1.0, power: 3.0 }, n_or_nodes)?;
        if !q.value.is_finite() {
            return Err(Error::NonFinite);
        }
        return Ok(quadrature_report(q, seed).with_target(target));
    }

    check_n(n_or_nodes)?;
    let xm = x.to_matrix();
    let report = mc_mean(n_or_nodes, seed, threads, |rng| {
        // XY has the eigenvalues of Y^{1/2} X Y^{1/2}.
        let w = beta1_sample(m, a, c - a, rng)?.sqrt()?.into_sym().to_matrix();
        let xy = w.mul(&xm)?.mul(&w)?.symmetric_part();
        series_value(inner, &eigenvalues(&xy)?, &opts)
    })?;
    Ok(report.with_target(target))
}

fn series_value(spec: &HypergeometricSpec, x: &[f64], opts: &SeriesOptions) -> Result<f64> {
    let r = mhg(spec, x, opts)?;
    if !r.converged {
        return Err(Error::NotConverged { value: r.value, degree_used: r.degree_used });
    }
    Ok(r.value)
}

fn quadrature_report(q: QuadResult, seed: u64) -> MCReport {
    MCReport {
        estimate: q.value,
        std_error: q.error_bound,
        n_samples: q.nodes_per_axis as u64,
        seed,
        target: None,
        z_score: None,
    }
}

/// Shape offset of the importance proposal in [`gamma_integral_check`]; kept
/// below `a − (m−1)/2` so the weights have finite variance.
fn gamma_proposal_offset(m: usize, a: f64) -> f64 {
    (0.5f64).min((a - (m as f64 - 1.0) / 2.0) / 2.0)
}

/// Importance-sampled `∫_{V>0} etr(−V)|V|^{a−(m+1)/2}(dV)`, targeted at
/// `Γ_m[a]` from the product formula.
///
/// In triangular coordinates `V = TTᵀ` the integrand is
/// `2^m ∏ t_ii^{2a−i} e^{−Σt_ij²}`. The proposal is the triangular construction
/// with shape `a+δ`, whose density is a product of scalar gamma and normal
/// densities, so the weight `π^{m(m−1)/4} ∏ Γ(a+δ−(i−1)/2) ∏ t_ii^{−2δ}` needs
/// only the scalar gamma function.
pub fn gamma_integral_check(m: usize, a: f64, n: usize, seed: u64, threads: usize) -> Result<MCReport> {
    check_n(n)?;
    if !(1..=3).contains(&m) {
        return Err(Error::InvalidParameters(format!("gamma_integral_check supports 1 <= m <= 3, got {m}")));
    }
    DomainBound::new(m).check("a", a)?;
    let delta = gamma_proposal_offset(m, a);
    let shape = a + delta;
    let log_const = (m * (m - 1)) as f64 / 4.0 * std::f64::consts::PI.ln()
        + (0..m).map(|i| ln_gamma(shape - i as f64 / 2.0)).sum::<f64>();
    let report = mc_mean(n, seed, threads, |rng| {
        let w = standard_gamma_sample(m, shape, rng)?;
        let t = w.lower_factor();
        let log_diag: f64 = (0..m).map(|i| t.get(i, i).ln()).sum();
        Ok((log_const - 2.0 * delta * log_diag).exp())
    })?;
    let target = crate::special::mv_gamma_log(m, a)?.exp();
    Ok(report.with_target(target))
}

/// Both sides of the reflected Euler representation at a scalar argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EczReport {
    /// `₃F₂(a, a₁, a₂; c, b₁; x)` by series.
    pub series: f64,
    /// Quadrature of the integral over `W = 1 − Y`.
    pub reflected: QuadResult,
    /// Quadrature of the same integral over `Y`.
    pub direct: QuadResult,
}

impl EczReport {
    pub fn max_rel_error(&self) -> f64 {
        let rel = |v: f64| ((v - self.series) / self.series).abs();
        rel(self.reflected.value).max(rel(self.direct.value))
    }
}

/// `₃F₂(a,a₁,a₂;c,b₁;x) = ∫₀¹ ₂F₁(a₁,a₂;b₁;x(1−w)) (1−w)^{a−1} w^{c−a−1} dw / B(a, c−a)`.
pub fn ecz_identity_check(params: [f64; 5], x: f64, nodes: usize) -> Result<EczReport> {
    let [a, a1, a2, c, b1] = params;
    let bound = DomainBound::new(1);
    bound.check("a", a)?;
    bound.check("c-a", c - a)?;
    if x >= 1.0 {
        return Err(Error::domain("x < 1 is required"));
    }
    let opts = SeriesOptions { rel_tol: 1e-13, max_degree: 1 << 16 };
    let series = series_value(&HypergeometricSpec::new(vec![a, a1, a2], vec![c, b1]), &[x], &opts)?;
    let inner = HypergeometricSpec::new(vec![a1, a2], vec![b1]);
    let ln_b = ln_beta(a, c - a);
    let f = |arg: f64| series_value(&inner, &[arg], &opts).unwrap_or(f64::NAN);
    let axis = Axis::Graded { lo: 0.0, hi: 1.0, power: 3.0 };
    let reflected = integrate_1d(
        |w| f(x * (1.0 - w)) * ((a - 1.0) * (1.0 - w).ln() + (c - a - 1.0) * w.ln() - ln_b).exp(),
        axis,
        nodes,
    )?;
    let direct = integrate_1d(
        |y| f(x * y) * ((a - 1.0) * y.ln() + (c - a - 1.0) * (1.0 - y).ln() - ln_b).exp(),
        axis,
        nodes,
    )?;
    if !(reflected.value.is_finite() && direct.value.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(EczReport { series, reflected, direct })
}

/// `E|V₁|⁻¹|V₂|⁻¹` under the inverse-pair density, by importance sampling
/// with `Vᵢ = I + Fᵢ`, `Fᵢ ~ 𝓑II_m(αᵢ, βᵢ)` drawn independently of the type I
/// sampler. Under the inverse pair this equals `E|U₁||U₂|`.
pub fn inverse_pair_check(p: &BimatrixParams, n: usize, seed: u64, threads: usize) -> Result<MCReport> {
    check_n(n)?;
    let m = p.m;
    let floor = (m as f64 - 1.0) / 2.0 + 0.5;
    // Near V₁ = V₂ = I the weight has finite variance only if the two shapes
    // there sum to less than 2c; in the tails density × functional decays
    // like |Fᵢ|^{−(a+1)−k} and |Fᵢ|^{−(b+1)−k}.
    let near = (0.75 * p.c).max(floor);
    let shapes = [near, p.a + 1.0, near, p.b + 1.0];
    let proposal = [BimatrixParams::new(m, shapes[0], floor, shapes[1])?, BimatrixParams::new(m, shapes[2], floor, shapes[3])?];
    mc_mean(n, seed, threads, |rng| {
        let f1 = bgb2_sample(&proposal[0], rng)?.first;
        let f2 = bgb2_sample(&proposal[1], rng)?.first;
        let log_q = beta2_logpdf(&f1, shapes[0], shapes[1])?.log_value + beta2_logpdf(&f2, shapes[2], shapes[3])?.log_value;
        let pair = MatrixPair::new(f1.identity_plus(), f2.identity_plus(), PairKind::Inverse)?;
        let log_f = inverse_pair_logpdf(&pair, p)?.log_value;
        let log_g = -(logdet(&pair.first)? + logdet(&pair.second)?);
        Ok((log_f + log_g - log_q).exp())
    })
}

/// `E|F₁|` and `E|F₂|` from type I draws pushed through `U ↦ (I−U)⁻¹ − I`,
/// each compared with direct type II draws.
pub fn transform_coherence_check(p: &BimatrixParams, n: usize, seed: u64, threads: usize) -> Result<[TwoSampleReport; 2]> {
    check_n(n)?;
    let push = |u: &SymMatrix| -> Result<f64> {
        let v = factor_pd(u.identity_minus())?.inverse()?.into_sym();
        logdet(&v.sub(&SymMatrix::identity(u.dim()))?)
    };
    let pushed = |second: bool| {
        mc_mean(n, seed, threads, move |rng| {
            let pair = bgb1_sample(p, rng)?;
            Ok(push(if second { &pair.second } else { &pair.first })?.exp())
        })
    };
    let direct = |r, s| mc_det_moment(PairFamily::Bgb2, p, r, s, n, seed.wrapping_add(1), threads);
    Ok([
        TwoSampleReport::new(pushed(false)?, direct(1.0, 0.0)?),
        TwoSampleReport::new(pushed(true)?, direct(0.0, 1.0)?),
    ])
}
