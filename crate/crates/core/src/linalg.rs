//! Dense symmetric linear algebra for small matrices.
//!
//! Everything here is sized for dimensions up to about a hundred: a cyclic
//! Jacobi eigensolver, a pivoted Cholesky factorisation and a few products.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not positive definite (pivot {pivot} at step {step})")]
    NotPositiveDefinite { step: usize, pivot: f64 },
    #[error("row {row} has length {len}, expected {dim}")]
    Ragged { row: usize, len: usize, dim: usize },
}

/// Dense symmetric matrix with full row-major storage.
///
/// Constructors symmetrise their input, so `m[(i, j)] == m[(j, i)]` holds
/// bit for bit.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
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

    /// All-ones matrix `J`.
    pub fn ones(dim: usize) -> Self {
        SymMatrix { dim, data: vec![1.0; dim * dim] }
    }

    pub fn diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.data[i * d.len() + i] = v;
        }
        m
    }

    /// Builds from `f(i, j)` evaluated on the upper triangle `i <= j`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds from rows, replacing the matrix by `(M + Mᵀ)/2`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let dim = rows.len();
        for (row, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(LinalgError::Ragged { row, len: r.len(), dim });
            }
        }
        Ok(Self::from_fn(dim, |i, j| 0.5 * (rows[i][j] + rows[j][i])))
    }

    /// Symmetric part of a general square row-major matrix.
    pub(crate) fn symmetric_part(m: &Dense) -> Self {
        Self::from_fn(m.dim, |i, j| 0.5 * (m.get(i, j) + m.get(j, i)))
    }

    /// `x xᵀ`.
    pub fn outer(x: &[f64]) -> Self {
        Self::from_fn(x.len(), |i, j| x[i] * x[j])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Sets entries `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn scale(&self, k: f64) -> SymMatrix {
        SymMatrix { dim: self.dim, data: self.data.iter().map(|v| v * k).collect() }
    }

    /// `self += k * other`.
    pub fn axpy(&mut self, k: f64, other: &SymMatrix) {
        assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += k * b;
        }
    }

    /// `xᵀ M x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim);
        let mut s = 0.0;
        for i in 0..self.dim {
            let row = &self.data[i * self.dim..(i + 1) * self.dim];
            s += x[i] * row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        }
        s
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.data[i * self.dim..(i + 1) * self.dim].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Principal submatrix on `idx`, in the given order.
    pub fn submatrix(&self, idx: &[usize]) -> SymMatrix {
        SymMatrix::from_fn(idx.len(), |i, j| self.get(idx[i], idx[j]))
    }

    /// Scatters `self` into an `n x n` zero matrix at rows/columns `idx`.
    pub fn embed(&self, n: usize, idx: &[usize]) -> SymMatrix {
        assert_eq!(idx.len(), self.dim);
        let mut out = SymMatrix::zeros(n);
        for i in 0..self.dim {
            for j in i..self.dim {
                out.set(idx[i], idx[j], self.get(i, j));
            }
        }
        out
    }

    pub(crate) fn to_dense(&self) -> Dense {
        Dense { dim: self.dim, data: self.data.clone() }
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| format!("{:>10.6}", self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl Add for &SymMatrix {
    type Output = SymMatrix;
    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        assert_eq!(self.dim, rhs.dim);
        SymMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &SymMatrix {
    type Output = SymMatrix;
    fn sub(self, rhs: &SymMatrix) -> SymMatrix {
        assert_eq!(self.dim, rhs.dim);
        SymMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &SymMatrix {
    type Output = SymMatrix;
    fn neg(self) -> SymMatrix {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &SymMatrix {
    type Output = SymMatrix;
    fn mul(self, k: f64) -> SymMatrix {
        self.scale(k)
    }
}

impl AddAssign<&SymMatrix> for SymMatrix {
    fn add_assign(&mut self, rhs: &SymMatrix) {
        self.axpy(1.0, rhs);
    }
}

/// `⟨M, N⟩ = tr MᵀN = Σ_ij M_ij N_ij`.
pub fn trace_inner(m: &SymMatrix, n: &SymMatrix) -> Result<f64, LinalgError> {
    if m.dim != n.dim {
        return Err(LinalgError::DimMismatch(m.dim, n.dim));
    }
    Ok(m.data.iter().zip(&n.data).map(|(a, b)| a * b).sum())
}

/// Entrywise product `M ∘ N`.
pub fn hadamard(m: &SymMatrix, n: &SymMatrix) -> Result<SymMatrix, LinalgError> {
    if m.dim != n.dim {
        return Err(LinalgError::DimMismatch(m.dim, n.dim));
    }
    Ok(SymMatrix { dim: m.dim, data: m.data.iter().zip(&n.data).map(|(a, b)| a * b).collect() })
}

/// Eigendecomposition with eigenvalues in ascending order.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Column-major: eigenvector `k` is `vectors[k * dim .. (k + 1) * dim]`.
    vectors: Vec<f64>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Unit eigenvector for `eigenvalues[k]`.
    pub fn vector(&self, k: usize) -> &[f64] {
        let n = self.dim();
        &self.vectors[k * n..(k + 1) * n]
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::INFINITY)
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::NEG_INFINITY)
    }

    /// `V diag(λ) Vᵀ`.
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.dim();
        SymMatrix::from_fn(n, |i, j| (0..n).map(|k| self.eigenvalues[k] * self.vector(k)[i] * self.vector(k)[j]).sum())
    }

    /// `‖VᵀV − I‖_F`.
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for a in 0..n {
            for b in 0..n {
                let dot: f64 = self.vector(a).iter().zip(self.vector(b)).map(|(x, y)| x * y).sum();
                let e = dot - if a == b { 1.0 } else { 0.0 };
                s += e * e;
            }
        }
        s.sqrt()
    }
}

/// Symmetric eigendecomposition by the cyclic Jacobi method.
pub fn sym_eig(m: &SymMatrix) -> Result<Spectrum, LinalgError> {
    if !m.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = m.dim;
    let mut a = m.data.clone();
    // v is row-major with eigenvectors in columns
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = m.frobenius_norm();
    if scale > 0.0 {
        for sweep in 0..100 {
            let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[i * n + j] * a[i * n + j])
                .sum::<f64>()
                .sqrt();
            if off <= 1e-15 * scale {
                break;
            }
            // tiny entries are skipped after the first few sweeps
            let thresh = if sweep < 3 { 0.0 } else { 1e-18 * scale };
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    if apq.abs() <= thresh {
                        continue;
                    }
                    let app = a[p * n + p];
                    let aqq = a[q * n + q];
                    let theta = (aqq - app) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = c * akp - s * akq;
                        a[k * n + q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = c * apk - s * aqk;
                        a[q * n + k] = s * apk + c * aqk;
                    }
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&k| a[k * n + k]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &order {
        vectors.extend((0..n).map(|i| v[i * n + k]));
    }
    Ok(Spectrum { eigenvalues, vectors })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsdCheck {
    pub is_psd: bool,
    pub lambda_min: f64,
}

/// Tests `λ_min(m) >= -tol · max(1, ‖m‖_F)`.
pub fn psd_check(m: &SymMatrix, tol: f64) -> Result<PsdCheck, LinalgError> {
    let lambda_min = sym_eig(m)?.lambda_min();
    let lambda_min = if m.dim == 0 { 0.0 } else { lambda_min };
    Ok(PsdCheck { is_psd: lambda_min >= -tol * m.frobenius_norm().max(1.0), lambda_min })
}

/// General dense square matrix, row-major. Used for the non-symmetric
/// intermediate products in the interior-point solver.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Dense {
    pub dim: usize,
    pub data: Vec<f64>,
}

impl Dense {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn matmul(&self, rhs: &Dense) -> Dense {
        let n = self.dim;
        assert_eq!(n, rhs.dim);
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in out[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Dense { dim: n, data: out }
    }

    /// `Σ_ij self_ij · m_ij`.
    pub fn inner_sym(&self, m: &SymMatrix) -> f64 {
        self.data.iter().zip(&m.data).map(|(a, b)| a * b).sum()
    }
}

/// Cholesky factorisation with symmetric (diagonal) pivoting:
/// `P M Pᵀ = L Lᵀ`, stopping once the largest remaining pivot drops below
/// the tolerance.
#[derive(Debug, Clone)]
pub struct Cholesky {
    dim: usize,
    /// `perm[k]` is the original index placed at position `k`.
    perm: Vec<usize>,
    /// Lower-triangular factor in permuted order, row-major.
    l: Vec<f64>,
    rank: usize,
}

impl Cholesky {
    /// Factorises `m`, treating pivots `<= tol · max diag` as zero.
    pub fn pivoted(m: &SymMatrix, tol: f64) -> Result<Self, LinalgError> {
        if !m.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        let n = m.dim;
        let mut a = m.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let max_diag = (0..n).map(|i| a[i * n + i]).fold(0.0f64, f64::max);
        let cutoff = tol * max_diag.max(f64::MIN_POSITIVE);
        let mut rank = n;
        for k in 0..n {
            let (p, &best) = (k..n)
                .map(|i| (i, &a[i * n + i]))
                .max_by(|x, y| x.1.total_cmp(y.1).then(y.0.cmp(&x.0)))
                .unwrap();
            if best <= cutoff {
                rank = k;
                break;
            }
            if p != k {
                perm.swap(k, p);
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                for i in 0..n {
                    a.swap(i * n + k, i * n + p);
                }
            }
            let d = a[k * n + k].sqrt();
            a[k * n + k] = d;
            for i in k + 1..n {
                a[i * n + k] /= d;
                a[k * n + i] = a[i * n + k];
            }
            // full trailing update keeps both triangles valid for later swaps
            for j in k + 1..n {
                let ljk = a[j * n + k];
                for i in k + 1..n {
                    a[i * n + j] -= a[i * n + k] * ljk;
                }
            }
        }
        let mut l = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i.min(rank.saturating_sub(1)) {
                l[i * n + j] = a[i * n + j];
            }
        }
        Ok(Cholesky { dim: n, perm, l, rank })
    }

    /// Full-rank factorisation; fails once a pivot falls to rounding level
    /// (`n · eps` relative to the largest diagonal entry).
    pub fn new(m: &SymMatrix) -> Result<Self, LinalgError> {
        let c = Self::pivoted(m, m.dim as f64 * f64::EPSILON)?;
        if c.rank < c.dim {
            return Err(LinalgError::NotPositiveDefinite { step: c.rank, pivot: 0.0 });
        }
        Ok(c)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Original indices of the pivot rows, in pivot order. The first
    /// `rank()` of these index a maximal well-conditioned subset.
    pub fn pivots(&self) -> &[usize] {
        &self.perm
    }

    /// Solves `L y = b` in place (permuted coordinates).
    fn forward(&self, y: &mut [f64]) {
        let n = self.dim;
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.l[i * n + j] * y[j]).sum();
            y[i] = (y[i] - s) / self.l[i * n + i];
        }
    }

    fn backward(&self, y: &mut [f64]) {
        let n = self.dim;
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.l[j * n + i] * y[j]).sum();
            y[i] = (y[i] - s) / self.l[i * n + i];
        }
    }

    /// Solves `M x = b`. Requires full rank.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(self.rank, self.dim, "solve needs a full-rank factorisation");
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        self.forward(&mut y);
        self.backward(&mut y);
        let mut x = vec![0.0; self.dim];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        x
    }

    pub fn inverse(&self) -> SymMatrix {
        let n = self.dim;
        let mut inv = SymMatrix::zeros(n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            let col = self.solve(&e);
            for i in j..n {
                inv.set(i, j, col[i]);
            }
        }
        inv
    }

    /// `L⁻¹ P N Pᵀ L⁻ᵀ`, whose eigenvalues are those of the pencil `(N, M)`.
    pub fn congruence_inverse(&self, nmat: &SymMatrix) -> SymMatrix {
        assert_eq!(self.rank, self.dim);
        let n = self.dim;
        // W = L⁻¹ P N Pᵀ, column by column of (P N Pᵀ)
        let mut w = vec![0.0; n * n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            for i in 0..n {
                col[i] = nmat.get(self.perm[i], self.perm[j]);
            }
            self.forward(&mut col);
            for i in 0..n {
                w[i * n + j] = col[i];
            }
        }
        // row i of R = W L⁻ᵀ is L⁻¹ applied to row i of W
        let mut r = vec![0.0; n * n];
        for i in 0..n {
            col.copy_from_slice(&w[i * n..(i + 1) * n]);
            self.forward(&mut col);
            r[i * n..(i + 1) * n].copy_from_slice(&col);
        }
        let mut out = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                out.set(i, j, 0.5 * (r[i * n + j] + r[j * n + i]));
            }
        }
        out
    }
}
