//! Integer partitions and generalised Pochhammer symbols.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A partition `t₁ ≥ t₂ ≥ … ≥ t_k > 0`, stored without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the parts descending and strips zeros.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of non-zero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    /// Part `i` (0-based), zero beyond the length.
    #[inline]
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// `ρ(κ) = Σ kᵢ (kᵢ − i)` with 1-based `i`, the quantity that orders the
    /// eigenvalues of the zonal differential operator.
    pub fn rho(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &k)| k as i64 * (k as i64 - (i as i64 + 1)))
            .sum()
    }

    /// `self ≤ other` in dominance order (same weight assumed).
    pub fn dominated_by(&self, other: &Partition) -> bool {
        let n = self.len().max(other.len());
        let (mut a, mut b) = (0u64, 0u64);
        for i in 0..n {
            a += self.part(i) as u64;
            b += other.part(i) as u64;
            if a > b {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl From<&[u32]> for Partition {
    fn from(parts: &[u32]) -> Self {
        Partition::new(parts.to_vec())
    }
}

/// All partitions of `t` with at most `max_parts` parts, in reverse
/// lexicographic order (`(t)` first).
pub fn partitions_of(t: usize, max_parts: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    if t == 0 {
        return vec![Partition::empty()];
    }
    if max_parts == 0 {
        return out;
    }
    fill(t as u32, t as u32, max_parts, &mut cur, &mut out);
    out
}

fn fill(rem: u32, max_part: u32, parts_left: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rem == 0 {
        out.push(Partition(cur.clone()));
        return;
    }
    if parts_left == 0 {
        return;
    }
    // The remaining parts_left parts can absorb at most parts_left * p.
    let hi = rem.min(max_part);
    let lo = rem.div_ceil(parts_left as u32);
    for p in (lo..=hi).rev() {
        cur.push(p);
        fill(rem - p, p, parts_left - 1, cur, out);
        cur.pop();
    }
}

/// Signed value held both directly and as `sign · exp(log_abs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub value: f64,
    pub log_abs: f64,
    pub sign: f64,
}

impl SignedLog {
    pub fn from_log(log_abs: f64, sign: f64) -> Self {
        let value = if sign == 0.0 { 0.0 } else { sign * log_abs.exp() };
        SignedLog { value, log_abs, sign }
    }
}

/// Scalar rising factorial `(a)_n`.
pub fn rising(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, j| acc * (a + j as f64))
}

/// Generalised Pochhammer symbol `(a)_τ = ∏ᵢ (a − (i−1)/2)_{tᵢ}`.
pub fn gen_pochhammer(a: f64, tau: &Partition) -> SignedLog {
    let mut value = 1.0;
    let mut log_abs = 0.0;
    let mut sign = 1.0;
    for (i, &t) in tau.parts().iter().enumerate() {
        let shift = a - i as f64 / 2.0;
        for j in 0..t {
            let f = shift + j as f64;
            value *= f;
            if f == 0.0 {
                sign = 0.0;
                log_abs = f64::NEG_INFINITY;
            } else if sign != 0.0 {
                log_abs += f.abs().ln();
                if f < 0.0 {
                    sign = -sign;
                }
            }
        }
    }
    SignedLog { value, log_abs, sign }
}

/// Row-wise log tables of `(a − i/2)_k` for `i < rows`, `k ≤ max_len`, so a
/// generalised Pochhammer symbol costs one lookup per row.
#[derive(Debug, Clone)]
pub struct PochhammerTable {
    // rows × (max_len + 1)
    log_abs: Vec<Vec<f64>>,
    sign: Vec<Vec<f64>>,
}

impl PochhammerTable {
    pub fn new(a: f64, rows: usize, max_len: usize) -> Self {
        let mut log_abs = Vec::with_capacity(rows);
        let mut sign = Vec::with_capacity(rows);
        for i in 0..rows {
            let shift = a - i as f64 / 2.0;
            let mut la = Vec::with_capacity(max_len + 1);
            let mut sg = Vec::with_capacity(max_len + 1);
            let mut acc = NeumaierSum::default();
            let mut s = 1.0;
            la.push(0.0);
            sg.push(1.0);
            for j in 0..max_len {
                let f = shift + j as f64;
                if s != 0.0 {
                    if f == 0.0 {
                        s = 0.0;
                    } else {
                        acc.add(f.abs().ln());
                        if f < 0.0 {
                            s = -s;
                        }
                    }
                }
                la.push(if s == 0.0 { f64::NEG_INFINITY } else { acc.sum() });
                sg.push(s);
            }
            log_abs.push(la);
            sign.push(sg);
        }
        PochhammerTable { log_abs, sign }
    }

    pub fn max_len(&self) -> usize {
        self.log_abs.first().map_or(0, |r| r.len() - 1)
    }

    /// `(log|(a)_τ|, sign)`; panics if `τ` exceeds the table.
    #[inline]
    pub fn lookup(&self, parts: &[u32]) -> (f64, f64) {
        let mut la = 0.0;
        let mut s = 1.0;
        for (i, &t) in parts.iter().enumerate() {
            let t = t as usize;
            la += self.log_abs[i][t];
            s *= self.sign[i][t];
        }
        (la, s)
    }
}

/// Compensated (Neumaier) summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn sum(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_partitions(t: u32, max_parts: usize) -> Vec<Partition> {
        // Enumerate all non-increasing tuples of length max_parts.
        fn rec(t: u32, cap: u32, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if left == 0 {
                if t == 0 {
                    out.push(Partition::new(cur.clone()));
                }
                return;
            }
            for p in 0..=cap.min(t) {
                cur.push(p);
                rec(t - p, p, left - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(t, t, max_parts, &mut Vec::new(), &mut out);
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn small_partition_lists() {
        assert_eq!(partitions_of(0, 3), vec![Partition::empty()]);
        assert_eq!(
            partitions_of(3, 2),
            vec![Partition::new(vec![3]), Partition::new(vec![2, 1])]
        );
        assert_eq!(partitions_of(8, 8).len(), 22);
    }

    #[test]
    fn partition_lists_match_brute_force_and_are_reverse_lex() {
        for t in 0..=12u32 {
            for mp in 1..=5usize {
                let got = partitions_of(t as usize, mp);
                let mut sorted = got.clone();
                sorted.sort();
                assert_eq!(sorted, brute_partitions(t, mp), "t={t} mp={mp}");
                assert!(got.windows(2).all(|w| w[0] > w[1]), "reverse-lex t={t}");
            }
        }
    }

    #[test]
    fn pochhammer_examples() {
        let e = gen_pochhammer(1.7, &Partition::empty());
        assert_eq!(e.value, 1.0);
        let p = gen_pochhammer(3.0, &Partition::new(vec![2, 1]));
        assert_eq!(p.value, 30.0);
        assert!((p.log_abs - 30f64.ln()).abs() < 1e-14);
        assert_eq!(gen_pochhammer(0.5, &Partition::new(vec![2])).value, 0.75);
        let z = gen_pochhammer(0.5, &Partition::new(vec![1, 1, 1, 1]));
        // second row starts at 0.5 - 0.5 = 0
        assert_eq!(z.value, 0.0);
        assert_eq!(z.sign, 0.0);
        let neg = gen_pochhammer(-1.5, &Partition::new(vec![3]));
        assert_eq!(neg.value, -1.5 * -0.5 * 0.5);
        assert_eq!(neg.sign, 1.0);
    }

    #[test]
    fn single_row_equals_rising_factorial() {
        for &a in &[0.3, 1.0, 2.5, -0.7] {
            for t in 0..12 {
                assert_eq!(gen_pochhammer(a, &Partition::new(vec![t])).value, rising(a, t));
            }
        }
    }

    #[test]
    fn table_matches_direct_pochhammer() {
        let table = PochhammerTable::new(-1.25, 4, 9);
        for t in 0..=9 {
            for p in partitions_of(t, 4) {
                let (la, s) = table.lookup(p.parts());
                let d = gen_pochhammer(-1.25, &p);
                assert_eq!(s, d.sign);
                if s != 0.0 {
                    assert!((la - d.log_abs).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn dominance_and_rho() {
        let a = Partition::new(vec![2, 1, 1]);
        let b = Partition::new(vec![2, 2]);
        let c = Partition::new(vec![3, 1]);
        assert!(a.dominated_by(&b) && b.dominated_by(&c) && !c.dominated_by(&b));
        assert!(a.rho() < b.rho() && b.rho() < c.rho());
    }
}
