//! Dense real symmetric linear algebra.
//!
//! Everything here works on small matrices (m up to a few dozen). Storage is
//! full and row-major; symmetry of [`SymMatrix`] is maintained by every
//! constructor, so `get(i, j) == get(j, i)` always holds bit-for-bit.

use crate::error::{Error, Result};

/// Symmetry tolerance used when validating user supplied matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Relative pivot tolerance of the Cholesky factorization.
pub const PIVOT_TOL: f64 = 1e-13;

/// Relative off-diagonal tolerance of the Jacobi eigensolver.
const JACOBI_TOL: f64 = 1e-14;

/// Square dense matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix { dim, data: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Matrix { dim, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { dim, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.dim, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.dim, other.dim)?;
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += aik * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }

    /// Symmetric part `(M + Mᵀ)/2`.
    pub fn symmetric_part(&self) -> SymMatrix {
        SymMatrix::from_fn(self.dim, |i, j| 0.5 * (self.get(i, j) + self.get(j, i)))
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }
}

/// Real symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymMatrix { dim, data: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diag(&vec![1.0; dim])
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = SymMatrix::zeros(n);
        for (i, v) in values.iter().enumerate() {
            m.data[i * n + i] = *v;
        }
        m
    }

    /// Builds a symmetric matrix from `f(i, j)` evaluated on the upper triangle
    /// (`i <= j`) and mirrored.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SymMatrix::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                m.data[i * dim + j] = v;
                m.data[j * dim + i] = v;
            }
        }
        m
    }

    /// Parses an array of rows. Entries must be finite and symmetric within
    /// [`SYMMETRY_TOL`] relative to the largest entry; the result is the
    /// averaged symmetric part.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = Matrix::from_rows(rows)?;
        if m.data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = 1.0 + m.max_abs();
        for i in 0..m.dim {
            for j in (i + 1)..m.dim {
                let diff = (m.get(i, j) - m.get(j, i)).abs();
                if diff > SYMMETRY_TOL * scale {
                    return Err(Error::NotSymmetric { i, j, diff });
                }
            }
        }
        Ok(m.symmetric_part())
    }

    pub fn scalar(v: f64) -> Self {
        SymMatrix { dim: 1, data: vec![v] }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.to_matrix().rows()
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix { dim: self.dim, data: self.data.clone() }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        check_dim(self.dim, other.dim)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        check_dim(self.dim, other.dim)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn scale(&self, s: f64) -> SymMatrix {
        SymMatrix { dim: self.dim, data: self.data.iter().map(|v| v * s).collect() }
    }

    /// `I - self`.
    pub fn identity_minus(&self) -> SymMatrix {
        SymMatrix::from_fn(self.dim, |i, j| if i == j { 1.0 - self.get(i, j) } else { -self.get(i, j) })
    }

    /// `I + self`.
    pub fn identity_plus(&self) -> SymMatrix {
        SymMatrix::from_fn(self.dim, |i, j| if i == j { 1.0 + self.get(i, j) } else { self.get(i, j) })
    }

    fn zip_with(&self, other: &SymMatrix, f: impl Fn(f64, f64) -> f64) -> SymMatrix {
        SymMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    /// Cyclic Jacobi eigendecomposition, eigenvalues sorted descending.
    pub fn eigen(&self) -> Result<EigenDecomp> {
        sym_eigen(self)
    }
}

/// Symmetric positive-definite matrix with its Cholesky factor.
#[derive(Debug, Clone, PartialEq)]
pub struct PDMatrix {
    base: SymMatrix,
    lower: Matrix,
}

impl PDMatrix {
    /// Cholesky factorization; fails with [`Error::NotPositiveDefinite`] when a
    /// pivot drops to `PIVOT_TOL * max diagonal` or below.
    pub fn new(base: SymMatrix) -> Result<Self> {
        factor_pd(base)
    }

    pub fn identity(dim: usize) -> Self {
        PDMatrix { base: SymMatrix::identity(dim), lower: Matrix::identity(dim) }
    }

    /// `L·Lᵀ` from a lower-triangular `L` with positive diagonal.
    pub fn from_cholesky(lower: Matrix) -> Result<Self> {
        let n = lower.dim();
        for i in 0..n {
            let d = lower.get(i, i);
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::NotPositiveDefinite { index: i, pivot: d });
            }
            if (i + 1..n).any(|j| lower.get(i, j) != 0.0) {
                return Err(Error::domain("cholesky factor must be lower triangular"));
            }
        }
        let base = SymMatrix::from_fn(n, |i, j| (0..=i.min(j)).map(|k| lower.get(i, k) * lower.get(j, k)).sum());
        Ok(PDMatrix { base, lower })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.base.dim
    }

    pub fn sym(&self) -> &SymMatrix {
        &self.base
    }

    pub fn into_sym(self) -> SymMatrix {
        self.base
    }

    pub fn lower_factor(&self) -> &Matrix {
        &self.lower
    }

    /// `2 Σ log L_ii`.
    pub fn logdet(&self) -> f64 {
        2.0 * (0..self.dim()).map(|i| self.lower.get(i, i).ln()).sum::<f64>()
    }

    /// Symmetric positive-definite square root via the eigendecomposition.
    pub fn sqrt(&self) -> Result<PDMatrix> {
        sqrt_pd(self)
    }

    pub fn inverse(&self) -> Result<PDMatrix> {
        inverse_pd(self)
    }

    /// `Wᵀ · self · W`.
    pub fn congruence(&self, w: &Matrix) -> Result<SymMatrix> {
        congruence(self, w)
    }
}

/// Eigenvalues in non-increasing order with matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomp {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl EigenDecomp {
    /// `Q · diag(f(λ)) · Qᵀ`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.values.len();
        let fl: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        SymMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| self.vectors.get(i, k) * fl[k] * self.vectors.get(j, k)).sum()
        })
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub fn factor_pd(m: SymMatrix) -> Result<PDMatrix> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = m.dim;
    let max_diag = (0..n).map(|i| m.get(i, i)).fold(f64::NEG_INFINITY, f64::max);
    let tol = PIVOT_TOL * max_diag.max(0.0);
    let mut l = Matrix::zeros(n);
    for j in 0..n {
        let mut d = m.get(j, j);
        for k in 0..j {
            d -= l.get(j, k) * l.get(j, k);
        }
        if !(d > tol) || max_diag <= 0.0 {
            return Err(Error::NotPositiveDefinite { index: j, pivot: d });
        }
        let ljj = d.sqrt();
        l.set(j, j, ljj);
        for i in (j + 1)..n {
            let mut s = m.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, s / ljj);
        }
    }
    Ok(PDMatrix { base: m, lower: l })
}

pub fn logdet(m: &PDMatrix) -> f64 {
    m.logdet()
}

/// Cyclic Jacobi rotations. Stops once the off-diagonal Frobenius norm is at
/// most `1e-14 · ‖M‖_F`; at most `100·m` sweeps.
pub fn sym_eigen(m: &SymMatrix) -> Result<EigenDecomp> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = m.dim;
    let mut a = m.to_matrix();
    let mut v = Matrix::identity(n);
    let norm = a.data.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = JACOBI_TOL * norm;
    let max_sweeps = 100 * n.max(1);

    let off = |a: &Matrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a.get(i, j) * a.get(i, j);
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&a) > target {
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A <- Jᵀ A J on rows/columns p and q.
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(j, j).total_cmp(&a.get(i, i)).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a.get(i, i)).collect();
    let vectors = Matrix::from_fn(n, |i, k| v.get(i, order[k]));
    Ok(EigenDecomp { values, vectors })
}

/// Eigenvalues only, non-increasing.
pub fn eigenvalues(m: &SymMatrix) -> Result<Vec<f64>> {
    Ok(sym_eigen(m)?.values)
}

pub fn sqrt_pd(m: &PDMatrix) -> Result<PDMatrix> {
    let eig = sym_eigen(&m.base)?;
    let root = eig.map_values(|l| l.max(0.0).sqrt());
    factor_pd(root)
}

pub fn inverse_pd(m: &PDMatrix) -> Result<PDMatrix> {
    let n = m.dim();
    let l = &m.lower;
    // L⁻¹ by forward substitution.
    let mut linv = Matrix::zeros(n);
    for j in 0..n {
        linv.set(j, j, 1.0 / l.get(j, j));
        for i in (j + 1)..n {
            let mut s = 0.0;
            for k in j..i {
                s -= l.get(i, k) * linv.get(k, j);
            }
            linv.set(i, j, s / l.get(i, i));
        }
    }
    // M⁻¹ = L⁻ᵀ L⁻¹
    let inv = SymMatrix::from_fn(n, |i, j| {
        (i.max(j)..n).map(|k| linv.get(k, i) * linv.get(k, j)).sum()
    });
    factor_pd(inv)
}

pub fn congruence(m: &PDMatrix, w: &Matrix) -> Result<SymMatrix> {
    check_dim(m.dim(), w.dim())?;
    let mw = m.base.to_matrix().mul(w)?;
    let out = w.transpose().mul(&mw)?;
    Ok(out.symmetric_part())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rand_lower(n: usize, seed: u64) -> Matrix {
        // Small LCG; enough for deterministic fixtures.
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64) / ((1u64 << 53) as f64)
        };
        Matrix::from_fn(n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => 2.0 * next() - 1.0,
            std::cmp::Ordering::Equal => 0.5 + next(),
            std::cmp::Ordering::Less => 0.0,
        })
    }

    fn rand_pd(n: usize, seed: u64) -> SymMatrix {
        let l = rand_lower(n, seed);
        l.mul(&l.transpose()).unwrap().symmetric_part()
    }

    #[test]
    fn factor_identity_and_hand_example() {
        let pd = factor_pd(SymMatrix::identity(2)).unwrap();
        assert_eq!(pd.lower_factor(), &Matrix::identity(2));

        let m = SymMatrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 5.0]]).unwrap();
        let pd = factor_pd(m).unwrap();
        let l = pd.lower_factor();
        assert_eq!(l.rows(), vec![vec![2.0, 0.0], vec![1.0, 2.0]]);
        assert!((pd.logdet() - 16f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn indefinite_is_rejected() {
        let m = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(factor_pd(m), Err(Error::NotPositiveDefinite { .. })));
        assert!(matches!(factor_pd(SymMatrix::zeros(2)), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn logdet_examples() {
        assert_eq!(PDMatrix::new(SymMatrix::identity(3)).unwrap().logdet(), 0.0);
        let d = PDMatrix::new(SymMatrix::diag(&[2.0, 0.5])).unwrap();
        assert!(d.logdet().abs() < 1e-15);
    }

    #[test]
    fn rejects_asymmetric_rows() {
        let r = SymMatrix::from_rows(&[vec![1.0, 0.5], vec![0.4, 1.0]]);
        assert!(matches!(r, Err(Error::NotSymmetric { .. })));
        let r = SymMatrix::from_rows(&[vec![1.0, 0.5]]);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn eigen_examples() {
        let e = SymMatrix::diag(&[1.0, 3.0]).eigen().unwrap();
        assert_eq!(e.values, vec![3.0, 1.0]);
        let e = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap().eigen().unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15 && (e.values[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigen_reconstructs_random_symmetric() {
        for seed in 0..20 {
            let l = rand_lower(4, seed);
            let m = Matrix::from_fn(4, |i, j| l.get(i, j) + l.get(j, i)).symmetric_part();
            let e = m.eigen().unwrap();
            let q = &e.vectors;
            let qtq = q.transpose().mul(q).unwrap();
            assert!(qtq.max_abs_diff(&Matrix::identity(4)) <= 1e-10);
            let rec = e.map_values(|x| x);
            assert!(rec.max_abs_diff(&m) <= 1e-9 * (1.0 + m.max_abs()));
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
            assert_eq!(e, m.eigen().unwrap());
        }
    }

    #[test]
    fn sqrt_examples() {
        let r = PDMatrix::new(SymMatrix::diag(&[4.0, 9.0])).unwrap().sqrt().unwrap();
        assert!(r.sym().max_abs_diff(&SymMatrix::diag(&[2.0, 3.0])) < 1e-14);
        let id = PDMatrix::identity(2).sqrt().unwrap();
        assert_eq!(id.sym(), &SymMatrix::identity(2));
        let m = PDMatrix::new(SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap()).unwrap();
        let r = m.sqrt().unwrap();
        let rr = r.sym().to_matrix().mul(&r.sym().to_matrix()).unwrap();
        assert!(rr.max_abs_diff(&m.sym().to_matrix()) <= 1e-10 * 3.0);
    }

    #[test]
    fn inverse_examples() {
        let inv = PDMatrix::new(SymMatrix::diag(&[2.0, 4.0])).unwrap().inverse().unwrap();
        assert!(inv.sym().max_abs_diff(&SymMatrix::diag(&[0.5, 0.25])) < 1e-15);
        assert_eq!(PDMatrix::identity(3).inverse().unwrap().sym(), &SymMatrix::identity(3));
        for seed in 0..10 {
            let m = PDMatrix::new(rand_pd(3, seed)).unwrap();
            let prod = m.sym().to_matrix().mul(&m.inverse().unwrap().sym().to_matrix()).unwrap();
            assert!(prod.max_abs_diff(&Matrix::identity(3)) <= 1e-10);
        }
    }

    #[test]
    fn congruence_examples() {
        let i2 = PDMatrix::identity(2);
        assert_eq!(i2.congruence(&Matrix::identity(2)).unwrap(), SymMatrix::identity(2));
        let d = PDMatrix::new(SymMatrix::diag(&[1.0, 2.0])).unwrap();
        let w = SymMatrix::diag(&[2.0, 1.0]).to_matrix();
        assert_eq!(d.congruence(&w).unwrap(), SymMatrix::diag(&[4.0, 2.0]));
        assert!(matches!(d.congruence(&Matrix::identity(3)), Err(Error::DimensionMismatch { .. })));

        let m = PDMatrix::new(rand_pd(3, 7)).unwrap();
        let w = rand_lower(3, 8).transpose();
        let direct = w.transpose().mul(&m.sym().to_matrix()).unwrap().mul(&w).unwrap();
        assert!(m.congruence(&w).unwrap().to_matrix().max_abs_diff(&direct) < 1e-13);
    }
}
