//! Zonal polynomials in the monomial symmetric function basis.
//!
//! For each degree `t` the coefficients `c_{τλ}` of
//! `C_τ = Σ_λ c_{τλ} m_λ` are computed exactly with rational arithmetic from
//! the eigenfunction recurrence of the zonal differential operator
//!
//! ```text
//! c_{κλ} = Σ_μ [(l_i + s) − (l_j − s)] c_{κμ} / (ρ_κ − ρ_λ)
//! ```
//!
//! where `μ` runs over the re-sorted `(…, l_i + s, …, l_j − s, …)`, `i < j`,
//! `1 ≤ s ≤ l_j`. Each row is fixed up to a scalar; the scalars follow from
//! the sum rule `Σ_κ C_κ = (tr X)^t`, whose `m_λ` coefficient is the
//! multinomial `t!/∏ l_i!`. Both steps are triangular in reverse
//! lexicographic order, and both stay inside the set of partitions with at
//! most `m` parts, so the table for `m` variables never touches longer
//! partitions.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::partition::{partitions_of, Partition};

/// Default upper bound on the degree of a table.
pub const DEFAULT_DEGREE_CAP: usize = 40;

const DUMP_VERSION: u32 = 1;

/// Coefficients of every `C_τ` of one degree.
#[derive(Debug, Clone)]
pub struct DegreeBlock {
    degree: usize,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    // Row τ is `scale[τ] · raw[τ]`; entries are zero below the diagonal
    // (reverse-lex order).
    raw: Vec<Vec<BigInt>>,
    scale: Vec<BigRational>,
    float: Vec<Vec<f64>>,
}

impl DegreeBlock {
    fn build(m: usize, degree: usize) -> DegreeBlock {
        let partitions = partitions_of(degree, m);
        let n = partitions.len();
        let index: HashMap<Partition, usize> =
            partitions.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let rho: Vec<i64> = partitions.iter().map(Partition::rho).collect();

        // The μ feeding each λ in the recurrence, with their weights.
        let feeders: Vec<Vec<(usize, i64)>> = partitions
            .iter()
            .map(|lambda| {
                let parts = lambda.parts();
                let mut out = Vec::new();
                for i in 0..parts.len() {
                    for j in (i + 1)..parts.len() {
                        let (li, lj) = (parts[i], parts[j]);
                        for s in 1..=lj {
                            let mut mu = parts.to_vec();
                            mu[i] += s;
                            mu[j] -= s;
                            let w = (li + s) as i64 - (lj - s) as i64;
                            out.push((index[&Partition::new(mu)], w));
                        }
                    }
                }
                out
            })
            .collect();

        // Rows are only defined up to scale, so they are kept integral: the
        // leading coefficient of the integral Jack form makes every division
        // exact, and should one not be, the row is rescaled instead (`lift`).
        let (raw, lifts): (Vec<Vec<BigInt>>, Vec<BigInt>) = (0..n)
            .map(|k| {
                let kappa = &partitions[k];
                let mut row = vec![BigInt::zero(); n];
                let mut lift = BigInt::one();
                row[k] = jack_leading(kappa.parts());
                for l in (k + 1)..n {
                    if !partitions[l].dominated_by(kappa) {
                        continue;
                    }
                    let mut acc = BigInt::zero();
                    for &(idx, w) in &feeders[l] {
                        if idx >= k && !row[idx].is_zero() {
                            acc += &row[idx] * w;
                        }
                    }
                    if acc.is_zero() {
                        continue;
                    }
                    let denom = BigInt::from(rho[k] - rho[l]);
                    let (q, r) = acc.div_rem(&denom);
                    if r.is_zero() {
                        row[l] = q;
                    } else {
                        let g = acc.gcd(&denom);
                        let factor = &denom / &g;
                        for c in row.iter_mut().take(l) {
                            *c *= &factor;
                        }
                        lift *= factor;
                        row[l] = acc / g;
                    }
                }
                (row, lift)
            })
            .unzip();

        let scale = jack_scales(&partitions, degree, &lifts)
            .filter(|d| satisfies_sum_rule(d, &raw, &partitions))
            .unwrap_or_else(|| solve_sum_rule(&raw, &partitions));
        Self::assemble(degree, partitions, index, raw, scale)
    }

    fn assemble(
        degree: usize,
        partitions: Vec<Partition>,
        index: HashMap<Partition, usize>,
        raw: Vec<Vec<BigInt>>,
        scale: Vec<BigRational>,
    ) -> DegreeBlock {
        // Correctly rounded, so it depends only on the value of each coefficient.
        let float = raw
            .iter()
            .zip(&scale)
            .map(|(row, d)| {
                row.iter()
                    .map(|c| {
                        if c.is_zero() {
                            0.0
                        } else {
                            BigRational::new_raw(d.numer() * c, d.denom().clone()).to_f64().unwrap_or(f64::NAN)
                        }
                    })
                    .collect()
            })
            .collect();
        DegreeBlock { degree, partitions, index, raw, scale, float }
    }

    fn from_exact(degree: usize, partitions: Vec<Partition>, exact: Vec<Vec<BigRational>>) -> Self {
        let index = partitions.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut raw = Vec::with_capacity(exact.len());
        let mut scale = Vec::with_capacity(exact.len());
        for row in exact {
            let common = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            raw.push(row.iter().map(|c| c.numer() * (&common / c.denom())).collect());
            scale.push(BigRational::new(BigInt::one(), common));
        }
        Self::assemble(degree, partitions, index, raw, scale)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Partitions of this degree in reverse lexicographic order.
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn position(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn exact_coefficient(&self, tau: usize, lambda: usize) -> BigRational {
        &self.scale[tau] * &self.raw[tau][lambda]
    }

    fn exact_row(&self, tau: usize) -> Vec<BigRational> {
        (0..self.partitions.len()).map(|l| self.exact_coefficient(tau, l)).collect()
    }

    pub fn coefficient(&self, tau: usize, lambda: usize) -> f64 {
        self.float[tau][lambda]
    }

    /// `C_τ(x)` for every `τ` of this degree, given `powers[i][k] = x_i^k`.
    pub fn eval_all(&self, powers: &[Vec<f64>]) -> Vec<f64> {
        let monomials: Vec<f64> =
            self.partitions.iter().map(|l| monomial_symmetric(l, powers)).collect();
        self.float
            .iter()
            .enumerate()
            .map(|(k, row)| (k..row.len()).map(|l| row[l] * monomials[l]).sum())
            .collect()
    }
}

fn multinomial(p: &Partition) -> BigUint {
    let mut acc = BigUint::one();
    let mut total = 0u64;
    for &k in p.parts() {
        total += k as u64;
        acc *= binomial(total, k as u64);
    }
    acc
}

fn binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `m_λ(x) = Σ x_{i₁}^{λ₁} ⋯` over distinct permutations of `λ` padded with
/// zeros to the number of variables.
pub fn monomial_symmetric(lambda: &Partition, powers: &[Vec<f64>]) -> f64 {
    let m = powers.len();
    if lambda.len() > m {
        return 0.0;
    }
    let mut exps: Vec<u32> = (0..m).map(|i| lambda.part(i)).collect();
    exps.sort_unstable();
    let mut total = 0.0;
    loop {
        let mut term = 1.0;
        for (i, &e) in exps.iter().enumerate() {
            if e != 0 {
                term *= powers[i][e as usize];
            }
        }
        total += term;
        if !next_permutation(&mut exps) {
            break;
        }
    }
    total
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `powers[i][k] = x_i^k` for `k ≤ degree`.
pub fn power_table(x: &[f64], degree: usize) -> Vec<Vec<f64>> {
    x.iter()
        .map(|&xi| {
            let mut row = Vec::with_capacity(degree + 1);
            let mut p = 1.0;
            row.push(p);
            for _ in 0..degree {
                p *= xi;
                row.push(p);
            }
            row
        })
        .collect()
}

/// Zonal polynomials `C_τ` for all partitions of weight at most `max_degree`
/// with at most `m` parts.
#[derive(Debug, Clone)]
pub struct ZonalTable {
    m: usize,
    blocks: Vec<Arc<DegreeBlock>>,
}

impl ZonalTable {
    /// Shared table from the process-wide cache.
    pub fn cached(m: usize, max_degree: usize, cap: usize) -> Result<ZonalTable> {
        check_degree(max_degree, cap)?;
        Ok(ZonalTable { m, blocks: cached_blocks(m, max_degree) })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn max_degree(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn block(&self, degree: usize) -> Option<&DegreeBlock> {
        self.blocks.get(degree).map(|b| b.as_ref())
    }

    /// Exact coefficient of `m_λ` in `C_τ` (zero when `λ` is not dominated by
    /// `τ` or the partitions are out of range).
    pub fn coefficient(&self, tau: &Partition, lambda: &Partition) -> BigRational {
        if tau.weight() != lambda.weight() {
            return BigRational::zero();
        }
        let Some(block) = self.block(tau.weight()) else {
            return BigRational::zero();
        };
        match (block.position(tau), block.position(lambda)) {
            (Some(k), Some(l)) => block.exact_coefficient(k, l),
            _ => BigRational::zero(),
        }
    }

    pub fn to_json(&self) -> String {
        let dump = TableDump {
            version: DUMP_VERSION,
            m: self.m,
            max_degree: self.max_degree(),
            degrees: self
                .blocks
                .iter()
                .map(|b| DegreeDump {
                    degree: b.degree,
                    partitions: b.partitions.clone(),
                    coefficients: (0..b.partitions.len())
                        .map(|k| b.exact_row(k).iter().map(|c| c.to_string()).collect())
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string(&dump).expect("table dump serializes")
    }

    pub fn from_json(s: &str) -> Result<ZonalTable> {
        let dump: TableDump = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if dump.version != DUMP_VERSION {
            return Err(Error::Parse(format!("unsupported table version {}", dump.version)));
        }
        if dump.degrees.len() != dump.max_degree + 1 {
            return Err(Error::Parse("degree count does not match max_degree".into()));
        }
        let mut blocks = Vec::with_capacity(dump.degrees.len());
        for (t, d) in dump.degrees.into_iter().enumerate() {
            if d.degree != t || d.coefficients.len() != d.partitions.len() {
                return Err(Error::Parse(format!("malformed block for degree {t}")));
            }
            let exact = d
                .coefficients
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|c| c.parse::<BigRational>().map_err(|e| Error::Parse(e.to_string())))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(Arc::new(DegreeBlock::from_exact(t, d.partitions, exact)));
        }
        Ok(ZonalTable { m: dump.m, blocks })
    }
}

#[derive(Serialize, Deserialize)]
struct TableDump {
    version: u32,
    m: usize,
    max_degree: usize,
    degrees: Vec<DegreeDump>,
}

#[derive(Serialize, Deserialize)]
struct DegreeDump {
    degree: usize,
    partitions: Vec<Partition>,
    coefficients: Vec<Vec<String>>,
}

/// `∏_{s∈κ} (2·arm(s) + leg(s) + offset)`; offset 1 gives the leading
/// coefficient of the integral Jack form `J_κ`, offsets 1 and 2 together its
/// norm `j_κ`.
fn hook_product(parts: &[u32], offset: usize) -> BigInt {
    let mut out = BigInt::one();
    for (i, &row) in parts.iter().enumerate() {
        for j in 0..row as usize {
            let arm = row as usize - j - 1;
            let leg = parts[i + 1..].iter().filter(|&&r| r as usize > j).count();
            out *= BigInt::from(2 * arm + leg + offset);
        }
    }
    out
}

fn jack_leading(parts: &[u32]) -> BigInt {
    hook_product(parts, 1)
}

/// Candidate scales `2ᵗ t! / (j_κ · lift_κ)` from `C_κ = 2ᵗ t! J_κ / j_κ`.
fn jack_scales(partitions: &[Partition], degree: usize, lifts: &[BigInt]) -> Option<Vec<BigRational>> {
    let top: BigInt = (1..=degree).fold(BigInt::one(), |acc, k| acc * BigInt::from(2 * k));
    partitions
        .iter()
        .zip(lifts)
        .map(|(p, lift)| {
            let j = hook_product(p.parts(), 1) * hook_product(p.parts(), 2) * lift;
            (!j.is_zero()).then(|| BigRational::new(top.clone(), j))
        })
        .collect()
}

/// Checks `Σ_κ d_κ raw[κ][λ] = t!/∏ l_i!` for every `λ` in integer arithmetic
/// over a common denominator.
fn satisfies_sum_rule(scale: &[BigRational], raw: &[Vec<BigInt>], partitions: &[Partition]) -> bool {
    let common = scale.iter().fold(BigInt::one(), |acc, d| acc.lcm(d.denom()));
    let weights: Vec<BigInt> = scale.iter().map(|d| d.numer() * (&common / d.denom())).collect();
    (0..partitions.len()).all(|l| {
        let mut lhs = BigInt::zero();
        for (k, w) in weights.iter().enumerate().take(l + 1) {
            if !raw[k][l].is_zero() {
                lhs += w * &raw[k][l];
            }
        }
        lhs == BigInt::from(multinomial(&partitions[l])) * &common
    })
}

/// Sum rule `Σ_κ d_κ raw[κ][λ] = t!/∏ l_i!`, solved in order for the `d_κ`.
fn solve_sum_rule(raw: &[Vec<BigInt>], partitions: &[Partition]) -> Vec<BigRational> {
    let mut scale: Vec<BigRational> = Vec::with_capacity(raw.len());
    for l in 0..raw.len() {
        let mut d = BigRational::from_integer(BigInt::from(multinomial(&partitions[l])));
        for (k, dk) in scale.iter().enumerate() {
            if !raw[k][l].is_zero() {
                d -= dk * &raw[k][l];
            }
        }
        scale.push(d / &raw[l][l]);
    }
    scale
}

fn check_degree(requested: usize, cap: usize) -> Result<()> {
    if requested > cap {
        return Err(Error::DegreeTooLarge { requested, cap });
    }
    Ok(())
}

/// Fresh (uncached) table, subject to [`DEFAULT_DEGREE_CAP`].
pub fn build_zonal_table(m: usize, max_degree: usize) -> Result<ZonalTable> {
    build_zonal_table_with_cap(m, max_degree, DEFAULT_DEGREE_CAP)
}

pub fn build_zonal_table_with_cap(m: usize, max_degree: usize, cap: usize) -> Result<ZonalTable> {
    if m == 0 {
        return Err(Error::domain("zonal table requires m >= 1"));
    }
    check_degree(max_degree, cap)?;
    let blocks = (0..=max_degree).map(|t| Arc::new(DegreeBlock::build(m, t))).collect();
    Ok(ZonalTable { m, blocks })
}

type BlockList = Arc<Mutex<Vec<Arc<DegreeBlock>>>>;

static CACHE: Lazy<Mutex<HashMap<usize, BlockList>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Blocks `0..=max_degree` for `m` variables, building missing degrees at
/// most once per process. Different `m` never contend on the same lock.
pub(crate) fn cached_blocks(m: usize, max_degree: usize) -> Vec<Arc<DegreeBlock>> {
    let entry = {
        let mut cache = CACHE.lock().unwrap_or_else(|e| e.into_inner());
        cache.entry(m).or_default().clone()
    };
    let mut blocks = entry.lock().unwrap_or_else(|e| e.into_inner());
    while blocks.len() <= max_degree {
        let t = blocks.len();
        blocks.push(Arc::new(DegreeBlock::build(m, t)));
    }
    blocks[..=max_degree].to_vec()
}

/// `C_τ(x)` for a vector of `m` eigenvalues.
pub fn zonal_eval(table: &ZonalTable, tau: &Partition, x: &[f64]) -> Result<f64> {
    if x.len() != table.m {
        return Err(Error::DimensionMismatch { expected: table.m, found: x.len() });
    }
    if tau.len() > table.m {
        return Err(out_of_range(tau, format!("more than m = {} parts", table.m)));
    }
    let t = tau.weight();
    let block = table
        .block(t)
        .ok_or_else(|| out_of_range(tau, format!("weight exceeds table degree {}", table.max_degree())))?;
    let k = block.position(tau).expect("partition of the right weight is indexed");
    let powers = power_table(x, t);
    Ok((k..block.partitions.len())
        .map(|l| block.float[k][l] * monomial_symmetric(&block.partitions[l], &powers))
        .sum())
}

fn out_of_range(tau: &Partition, reason: String) -> Error {
    Error::PartitionOutOfRange { partition: tau.to_string(), reason }
}

/// `log C_τ(I_m)` from the closed form
/// `2^{2k} k! (m/2)_τ ∏_{i<j≤p}(2k_i − 2k_j − i + j) / ∏_{i≤p}(2k_i + p − i)!`.
pub fn zonal_at_identity(tau: &Partition, m: usize) -> Result<f64> {
    if tau.len() > m {
        return Err(out_of_range(tau, format!("more than m = {m} parts")));
    }
    Ok(log_zonal_identity(tau.parts(), m, &|n| if n < 2 { 0.0 } else { ln_gamma(n as f64 + 1.0) }))
}

/// Closed form with a caller supplied `ln n!`.
pub(crate) fn log_zonal_identity(parts: &[u32], m: usize, ln_fact: &dyn Fn(usize) -> f64) -> f64 {
    let p = parts.len();
    let k: usize = parts.iter().map(|&x| x as usize).sum();
    let mut acc = 2.0 * k as f64 * std::f64::consts::LN_2 + ln_fact(k);
    let half_m = m as f64 / 2.0;
    for (i, &ki) in parts.iter().enumerate() {
        let a = half_m - i as f64 / 2.0;
        acc += ln_gamma(a + ki as f64) - ln_gamma(a);
        acc -= ln_fact(2 * ki as usize + p - (i + 1));
        for (j, &kj) in parts.iter().enumerate().skip(i + 1) {
            let f = 2 * ki as i64 - 2 * kj as i64 - (i as i64 + 1) + (j as i64 + 1);
            acc += (f as f64).ln();
        }
    }
    acc
}
