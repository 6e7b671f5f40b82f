//! Hypergeometric functions of a matrix argument.
//!
//! `pFq(a; b; X) = Σ_t Σ_{τ⊢t} [∏(aᵢ)_τ / ∏(bⱼ)_τ] C_τ(X) / t!`
//!
//! The series is summed degree by degree (ascending `t`, reverse-lex `τ`
//! inside a degree), with every Pochhammer ratio carried in log-magnitude and
//! sign. At `X = I_m` a closed form for `C_τ(I_m)` replaces the zonal table,
//! which makes degrees in the thousands affordable; when the series only
//! converges algebraically there (`p = q + 1`) the partial sums are
//! extrapolated in the degree.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{factor_pd, SymMatrix};
use crate::partition::{partitions_of, NeumaierSum, PochhammerTable};
use crate::zonal::{power_table, ZonalTable, DEFAULT_DEGREE_CAP};

/// Tolerance for detecting lower parameters on the Pochhammer pole lattice.
pub const POLE_TOL: f64 = 1e-12;

/// Upper parameters `a₁…a_p` and lower parameters `b₁…b_q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypergeometricSpec {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

impl HypergeometricSpec {
    pub fn new(upper: Vec<f64>, lower: Vec<f64>) -> Self {
        HypergeometricSpec { upper, lower }
    }

    pub fn p(&self) -> usize {
        self.upper.len()
    }

    pub fn q(&self) -> usize {
        self.lower.len()
    }

    /// Rejects non-finite parameters and lower parameters with
    /// `b − (k−1)/2 ∈ {0, −1, −2, …}` for some `k ≤ m`.
    pub fn validate(&self, m: usize) -> Result<()> {
        if m == 0 {
            return Err(Error::InvalidParameters("m must be at least 1".into()));
        }
        if self.upper.iter().chain(&self.lower).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameters("parameters must be finite".into()));
        }
        for &b in &self.lower {
            for k in 0..m {
                let shifted = b - k as f64 / 2.0;
                let nearest = shifted.round();
                if nearest <= 0.0 && (shifted - nearest).abs() <= POLE_TOL {
                    return Err(Error::InvalidParameters(format!(
                        "lower parameter {b} hits a Pochhammer pole (b - {k}/2 = {nearest})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Degree beyond which every term vanishes, if an upper parameter is a
    /// non-positive integer `−n` (then `(a)_τ = 0` once `t₁ > n`).
    pub fn terminating_degree(&self, m: usize) -> Option<usize> {
        self.upper
            .iter()
            .filter(|a| **a <= 0.0 && a.fract() == 0.0)
            .map(|a| (-a) as usize * m)
            .min()
    }

    /// `Σb − Σa − (m−1)/2`: the algebraic decay exponent of the partial-sum
    /// error at `X = I_m` when `p = q + 1`.
    pub fn identity_exponent(&self, m: usize) -> f64 {
        self.lower.iter().sum::<f64>() - self.upper.iter().sum::<f64>() - (m as f64 - 1.0) / 2.0
    }

    /// The leading `count` terms of the partial-sum error expansion at
    /// `X = I_m` when `p = q + 1`. Partitions with `j` parts growing with the
    /// degree contribute the exponents `j·D − j(m−j)/2 + k`, `D = Σb − Σa`
    /// (`j = 1` is [`Self::identity_exponent`]); an exponent reached by
    /// several families also carries powers of `ln T`.
    pub fn identity_error_terms(&self, m: usize, count: usize) -> Vec<ErrorTerm> {
        let d = self.lower.iter().sum::<f64>() - self.upper.iter().sum::<f64>();
        let mut all: Vec<f64> = (1..=m)
            .flat_map(|j| {
                let base = j as f64 * d - (j * (m - j)) as f64 / 2.0;
                (0..count).map(move |k| base + k as f64)
            })
            .collect();
        all.sort_by(f64::total_cmp);
        let mut terms: Vec<ErrorTerm> = Vec::with_capacity(all.len());
        for e in all {
            let log_power = match terms.last() {
                Some(t) if (t.exponent - e).abs() < 1e-9 => t.log_power + 1,
                _ => 0,
            };
            terms.push(ErrorTerm { exponent: e, log_power });
        }
        terms.truncate(count);
        terms
    }
}

/// Truncation controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesOptions {
    pub rel_tol: f64,
    pub max_degree: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions { rel_tol: 1e-10, max_degree: DEFAULT_DEGREE_CAP }
    }
}

impl SeriesOptions {
    /// Degree budget for identity-argument series, sized so that a full
    /// evaluation stays well under a second.
    pub fn identity_budget(m: usize) -> usize {
        match m {
            0 | 1 => 1 << 16,
            2 => 1 << 12,
            3 => 1 << 9,
            4 => 1 << 8,
            _ => 96,
        }
    }

    /// Default tolerance with the identity-argument degree budget for `m`.
    pub fn for_identity(m: usize) -> Self {
        SeriesOptions { rel_tol: 1e-10, max_degree: Self::identity_budget(m) }
    }

    fn check(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(Error::InvalidParameters(format!(
                "rel_tol must lie in (0, 1e-2], got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

/// Truncated series value with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub value: f64,
    pub log_abs: f64,
    pub sign: f64,
    pub degree_used: usize,
    /// Sum of all terms of degree `degree_used`.
    pub last_degree_contribution: f64,
    /// Estimated absolute truncation error.
    pub error_estimate: f64,
    pub converged: bool,
}

impl SeriesResult {
    fn new(value: f64, degree_used: usize, last: f64, error_estimate: f64, converged: bool) -> Self {
        SeriesResult {
            value,
            log_abs: value.abs().ln(),
            sign: if value > 0.0 {
                1.0
            } else if value < 0.0 {
                -1.0
            } else {
                0.0
            },
            degree_used,
            last_degree_contribution: last,
            error_estimate,
            converged,
        }
    }
}

/// Running log-factorials `ln n!`, exact for `n < 2`.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = NeumaierSum::default();
    out.push(0.0);
    for k in 1..=n {
        if k > 1 {
            acc.add((k as f64).ln());
        }
        out.push(acc.sum());
    }
    out
}

struct Pochhammers {
    upper: Vec<PochhammerTable>,
    lower: Vec<PochhammerTable>,
}

impl Pochhammers {
    fn new(spec: &HypergeometricSpec, m: usize, max_len: usize) -> Self {
        Pochhammers {
            upper: spec.upper.iter().map(|&a| PochhammerTable::new(a, m, max_len)).collect(),
            lower: spec.lower.iter().map(|&b| PochhammerTable::new(b, m, max_len)).collect(),
        }
    }

    /// `(log|ratio|, sign)` of `∏(aᵢ)_τ / ∏(bⱼ)_τ`.
    #[inline]
    fn ratio(&self, parts: &[u32]) -> (f64, f64) {
        let mut la = 0.0;
        let mut s = 1.0;
        for t in &self.upper {
            let (l, sg) = t.lookup(parts);
            la += l;
            s *= sg;
        }
        for t in &self.lower {
            let (l, sg) = t.lookup(parts);
            la -= l;
            s *= sg;
        }
        (la, s)
    }
}

/// Degree-level stopping rule shared by both summation paths. Holds the
/// last three degree contributions.
#[derive(Default)]
struct TailMonitor {
    recent: [f64; 3],
    seen: usize,
}

impl TailMonitor {
    fn push(&mut self, d: f64) {
        self.recent = [self.recent[1], self.recent[2], d.abs()];
        self.seen += 1;
    }

    /// Geometric tail estimate from pairwise-summed contributions, which is
    /// robust to series whose odd or even degrees vanish.
    fn tail(&self) -> f64 {
        if self.seen < 3 {
            return f64::INFINITY;
        }
        let [d0, d1, d2] = self.recent;
        let now = d1 + d2;
        let before = d0 + d1;
        if now == 0.0 {
            return 0.0;
        }
        if before == 0.0 {
            return f64::INFINITY;
        }
        let rho = now / before;
        if rho >= 1.0 {
            f64::INFINITY
        } else {
            rho / (1.0 - rho) * now
        }
    }

    /// Two consecutive degrees below `tol·|sum|` and a geometric tail below it too.
    fn settled(&self, sum: f64, rel_tol: f64) -> bool {
        let bound = rel_tol * sum.abs();
        self.seen >= 3 && self.recent[1] <= bound && self.recent[2] <= bound && self.tail() <= bound
    }
}

/// Truncated `pFq(a; b; diag(x))`.
///
/// Stops after degree `t` once degrees `t−1` and `t` both contribute at most
/// `rel_tol·|partial sum|` and the geometric tail estimate is below the same
/// bound. A result with `converged == false` is returned when `max_degree` is
/// reached first, except for `p > q + 1`, where [`Error::DivergentSeries`] is
/// raised instead.
pub fn mhg(spec: &HypergeometricSpec, x: &[f64], opts: &SeriesOptions) -> Result<SeriesResult> {
    let m = x.len();
    spec.validate(m)?;
    opts.check()?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    if x.iter().all(|&v| v == 0.0) {
        return Ok(SeriesResult::new(1.0, 0, 1.0, 0.0, true));
    }

    let terminating = spec.terminating_degree(m);
    let max_degree = terminating.map_or(opts.max_degree, |d| d.min(opts.max_degree));
    let mut run = SeriesRun::default();
    if m == 1 {
        // C_(t)(x) = xᵗ, so consecutive terms differ by a rational factor.
        let mut term = 1.0;
        for t in 0..=max_degree {
            if t > 0 {
                let k = (t - 1) as f64;
                let up: f64 = spec.upper.iter().map(|a| a + k).product();
                let down: f64 = spec.lower.iter().map(|b| b + k).product();
                term *= up / down * x[0] / t as f64;
            }
            if run.push(t, term, opts.rel_tol) {
                break;
            }
        }
    } else {
        let cap = max_degree.max(DEFAULT_DEGREE_CAP);
        // Grown on demand: high-degree blocks are costly and often not needed.
        let mut table = ZonalTable::cached(m, max_degree.min(DEFAULT_DEGREE_CAP), cap)?;
        let poch = Pochhammers::new(spec, m, max_degree);
        let ln_fact = ln_factorials(max_degree);
        let mut powers = power_table(x, 1);
        for t in 0..=max_degree {
            if powers[0].len() <= t {
                powers = power_table(x, (2 * t).min(max_degree).max(t));
            }
            if t > table.max_degree() {
                table = ZonalTable::cached(m, (t + 4).min(max_degree), cap)?;
            }
            let block = table.block(t).expect("table covers degree t");
            let zonals = block.eval_all(&powers);
            let mut degree_sum = NeumaierSum::default();
            for (tau, c) in block.partitions().iter().zip(zonals) {
                if c == 0.0 {
                    continue;
                }
                let (la, s) = poch.ratio(tau.parts());
                if s == 0.0 {
                    continue;
                }
                degree_sum.add(s * (la - ln_fact[t]).exp() * c);
            }
            if run.push(t, degree_sum.sum(), opts.rel_tol) {
                break;
            }
        }
    }

    let value = run.sum.sum();
    if terminating.is_some_and(|d| d <= opts.max_degree) {
        return Ok(SeriesResult::new(value, run.degree_used, run.last, 0.0, true));
    }
    if !run.converged && spec.p() > spec.q() + 1 {
        return Err(Error::DivergentSeries);
    }
    let err = if run.converged { run.monitor.tail().max(run.last.abs()) } else { f64::INFINITY };
    Ok(SeriesResult::new(value, run.degree_used, run.last, err, run.converged))
}

/// Running state of a degree-wise summation.
#[derive(Default)]
struct SeriesRun {
    sum: NeumaierSum,
    monitor: TailMonitor,
    last: f64,
    degree_used: usize,
    converged: bool,
}

impl SeriesRun {
    /// Adds the degree-`t` contribution; true once the stopping rule holds.
    fn push(&mut self, t: usize, d: f64, rel_tol: f64) -> bool {
        self.last = d;
        self.sum.add(d);
        self.monitor.push(d);
        self.degree_used = t;
        self.converged = self.monitor.settled(self.sum.sum(), rel_tol);
        self.converged
    }
}

/// `pFq` of a symmetric matrix argument through its eigenvalues.
pub fn mhg_matrix(spec: &HypergeometricSpec, x: &SymMatrix, opts: &SeriesOptions) -> Result<SeriesResult> {
    let eig = crate::linalg::eigenvalues(x)?;
    mhg(spec, &eig, opts)
}

/// `₁F₀(a; X) = |I − X|^{−a}` for spectral radius below one.
pub fn one_f_zero_closed(a: f64, x: &SymMatrix) -> Result<f64> {
    let eig = crate::linalg::eigenvalues(x)?;
    let radius = eig.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if radius >= 1.0 {
        return Err(Error::SpectralRadiusTooLarge { radius });
    }
    let ld = factor_pd(x.identity_minus())?.logdet();
    Ok((-a * ld).exp())
}

/// Identity-argument sum with per-degree contributions recorded at the
/// checkpoint degrees.
struct IdentitySums {
    /// Partial sums at each requested checkpoint.
    at: Vec<f64>,
    last: f64,
    degree_used: usize,
    converged_early: bool,
}

fn sum_at_identity(
    spec: &HypergeometricSpec,
    m: usize,
    max_degree: usize,
    checkpoints: &[usize],
    early_stop: Option<f64>,
) -> IdentitySums {
    let poch = Pochhammers::new(spec, m, max_degree);
    let half_m = PochhammerTable::new(m as f64 / 2.0, m, max_degree);
    let ln_fact = ln_factorials(2 * max_degree + m);
    let ln2 = std::f64::consts::LN_2;

    let mut sum = NeumaierSum::default();
    let mut monitor = TailMonitor::default();
    let mut at = Vec::with_capacity(checkpoints.len());
    let mut next_cp = 0;
    let mut last = 0.0;
    let mut degree_used = 0;
    let mut converged_early = false;

    for t in 0..=max_degree {
        let mut degree_sum = NeumaierSum::default();
        for tau in partitions_of(t, m) {
            let parts = tau.parts();
            let (la, s) = poch.ratio(parts);
            if s == 0.0 {
                continue;
            }
            // log C_τ(I_m) − log t!, from the closed form with t! cancelled.
            let p = parts.len();
            let (lh, _) = half_m.lookup(parts);
            let mut lc = 2.0 * t as f64 * ln2 + lh;
            for i in 0..p {
                let ki = parts[i] as i64;
                lc -= ln_fact[(2 * ki) as usize + p - (i + 1)];
                for (j, &kj) in parts.iter().enumerate().skip(i + 1) {
                    lc += ((2 * ki - 2 * kj as i64 + (j - i) as i64) as f64).ln();
                }
            }
            degree_sum.add(s * (la + lc).exp());
        }
        last = degree_sum.sum();
        sum.add(last);
        monitor.push(last);
        degree_used = t;
        while next_cp < checkpoints.len() && checkpoints[next_cp] == t {
            at.push(sum.sum());
            next_cp += 1;
        }
        if let Some(tol) = early_stop {
            if monitor.settled(sum.sum(), tol) {
                converged_early = true;
                break;
            }
        }
    }
    if at.is_empty() {
        at.push(sum.sum());
    }
    IdentitySums { at, last, degree_used, converged_early }
}

/// One term `c · T^{−e} (ln T)^k` of a partial-sum error expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorTerm {
    pub exponent: f64,
    pub log_power: u32,
}

impl ErrorTerm {
    fn eval(&self, t: f64) -> f64 {
        t.powf(-self.exponent) * t.ln().powi(self.log_power as i32)
    }
}

/// Limit `S` of `S(T) = S + Σ_k c_k φ_k(T)` from partial sums at the given
/// degrees, fitting one error term per partial sum beyond the first.
fn extrapolate(degrees: &[usize], sums: &[f64], terms: &[ErrorTerm]) -> f64 {
    let n = sums.len();
    let k = n - 1;
    // Columns: the limit, then each error term scaled to unit size at the
    // top degree.
    let top = *degrees.last().expect("non-empty") as f64;
    let mut a: Vec<Vec<f64>> = degrees
        .iter()
        .zip(sums)
        .map(|(&d, &s)| {
            let mut row = vec![1.0];
            row.extend(terms[..k].iter().map(|term| term.eval(d as f64) / term.eval(top)));
            row.push(s);
            row
        })
        .collect();
    // Gaussian elimination with partial pivoting.
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).expect("rows");
        a.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..=n {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let tail: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (a[r][n] - tail) / a[r][r];
    }
    x[0]
}

/// Number of error terms fitted for identity-argument series; checkpoints
/// are spaced by a factor `√2` below the top degree.
const EXTRAPOLATION_LEVELS: usize = 10;
/// Relative rounding floor of long identity-argument sums.
const ROUNDING_FLOOR: f64 = 1e-12;
/// Smallest checkpoint degree used for extrapolation.
const EXTRAPOLATION_MIN_DEGREE: usize = 16;

/// Truncated `pFq(a; b; I_m)` using the closed form of `C_τ(I_m)`.
///
/// For `p ≤ q`, or when the series terminates, the ordinary degree-wise
/// stopping rule applies. For `p = q + 1` the terms decay only like a power of
/// the degree; partial sums at `max_degree/√2^j` are extrapolated with the
/// terms from [`HypergeometricSpec::identity_error_terms`], and `converged` reports whether
/// the extrapolation error estimate is below `rel_tol·|value|`. A series with
/// `σ ≤ 0` diverges at the identity and is reported unconverged.
pub fn mhg_at_identity(spec: &HypergeometricSpec, m: usize, opts: &SeriesOptions) -> Result<SeriesResult> {
    spec.validate(m)?;
    opts.check()?;
    let (p, q) = (spec.p(), spec.q());

    if let Some(d) = spec.terminating_degree(m) {
        if d <= opts.max_degree {
            let s = sum_at_identity(spec, m, d, &[], None);
            return Ok(SeriesResult::new(s.at[0], s.degree_used, s.last, 0.0, true));
        }
    }
    if p > q + 1 {
        return Err(Error::DivergentSeries);
    }

    let sigma = spec.identity_exponent(m);
    if p <= q || sigma <= 0.0 {
        let s = sum_at_identity(spec, m, opts.max_degree, &[], Some(opts.rel_tol));
        let value = s.at[0];
        let converged = s.converged_early;
        let err = if converged { s.last.abs() } else { f64::INFINITY };
        return Ok(SeriesResult::new(value, s.degree_used, s.last, err, converged));
    }

    // p = q + 1 with σ > 0: algebraic convergence.
    let top = opts.max_degree;
    let mut checkpoints: Vec<usize> = Vec::new();
    let mut d = top as f64;
    while checkpoints.len() <= EXTRAPOLATION_LEVELS && d.round() as usize >= EXTRAPOLATION_MIN_DEGREE {
        let di = d.round() as usize;
        if checkpoints.last() != Some(&di) {
            checkpoints.push(di);
        }
        d /= std::f64::consts::SQRT_2;
    }
    checkpoints.reverse();
    let s = sum_at_identity(spec, m, top, &checkpoints, None);
    // The error estimate is the drift between the same extrapolation on the
    // top window and on the window one checkpoint lower, which exposes any
    // unmodelled decay.
    let n = s.at.len();
    if n < 3 {
        let value = s.at[n - 1];
        return Ok(SeriesResult::new(value, s.degree_used, s.last, f64::INFINITY, false));
    }
    let terms = spec.identity_error_terms(m, n - 2);
    let value = extrapolate(&checkpoints[1..], &s.at[1..], &terms);
    let lower = extrapolate(&checkpoints[..n - 1], &s.at[..n - 1], &terms);
    let err = (value - lower).abs().max(ROUNDING_FLOOR * value.abs());
    let converged = err.is_finite() && err <= opts.rel_tol * value.abs();
    Ok(SeriesResult::new(value, s.degree_used, s.last, err, converged))
}
