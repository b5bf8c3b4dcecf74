//! Dense symmetric linear algebra: Cholesky factorization, SPD solves and the
//! generalized symmetric-definite eigenproblem `F psi = lambda G psi`.

use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major matrix. Serializes as a list of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(rows * cols, data.len()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::shape(format!("row length {cols}"), bad.len()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols.max(1)).map(<[f64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::shape(
                format!("{} rows", self.cols),
                format!("{} rows", rhs.rows),
            ));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in orow.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::shape(self.cols, v.len()));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// `v^T A v`.
    pub fn quad_form(&self, v: &[f64]) -> f64 {
        debug_assert!(self.is_square() && v.len() == self.rows);
        (0..self.rows).map(|i| v[i] * dot(self.row(i), v)).sum()
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `max |a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Replaces `A` by `(A + A^T) / 2`.
    pub fn symmetrize(&mut self) {
        assert!(self.is_square());
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                let v = 0.5 * (self[(i, j)] + self[(j, i)]);
                self[(i, j)] = v;
                self[(j, i)] = v;
            }
        }
    }

    pub fn is_symmetric(&self, rtol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let tol = rtol * self.max_abs();
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let (r, c) = (rhs.rows, rhs.cols);
        Matrix::from_fn(self.rows * r, self.cols * c, |i, j| {
            self[(i / r, j / c)] * rhs[(i % r, j % c)]
        })
    }

    fn check_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::shape("square matrix", format!("{}x{}", self.rows, self.cols)))
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        Matrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Pivots below this fraction of the original diagonal entry are treated as
/// zero: they only arise from exact rank deficiency plus rounding.
const PIVOT_RTOL: f64 = 1e-13;

/// Lower-triangular Cholesky factor `L` with `G = L L^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdFactor {
    l: Matrix,
}

impl SpdFactor {
    pub fn dim(&self) -> usize {
        self.l.rows
    }

    pub fn lower(&self) -> &Matrix {
        &self.l
    }

    /// Solves `L y = b` in place.
    pub fn forward_in_place(&self, b: &mut [f64]) {
        let l = &self.l;
        for i in 0..l.rows {
            let s = b[i] - dot(&l.row(i)[..i], &b[..i]);
            b[i] = s / l[(i, i)];
        }
    }

    /// Solves `L^T x = y` in place.
    pub fn backward_in_place(&self, y: &mut [f64]) {
        let l = &self.l;
        let n = l.rows;
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= l[(k, i)] * y[k];
            }
            y[i] = s / l[(i, i)];
        }
    }

    /// `G^{-1} b`.
    pub fn solve_vec(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.dim() {
            return Err(Error::shape(self.dim(), b.len()));
        }
        let mut x = b.to_vec();
        self.forward_in_place(&mut x);
        self.backward_in_place(&mut x);
        Ok(x)
    }

    /// `G^{-1} B`, column by column.
    pub fn solve_mat(&self, b: &Matrix) -> Result<Matrix> {
        if b.rows != self.dim() {
            return Err(Error::shape(format!("{} rows", self.dim()), format!("{} rows", b.rows)));
        }
        let cols = crate::par::map_range(b.cols, |j| {
            let mut c = b.column(j);
            self.forward_in_place(&mut c);
            self.backward_in_place(&mut c);
            c
        });
        Ok(Matrix::from_fn(b.rows, b.cols, |i, j| cols[j][i]))
    }

    /// `b^T G^{-1} b = |L^{-1} b|^2`.
    pub fn inverse_quad_form(&self, b: &[f64]) -> f64 {
        let mut y = b.to_vec();
        self.forward_in_place(&mut y);
        dot(&y, &y)
    }

    /// Explicit symmetric `G^{-1}`.
    pub fn inverse(&self) -> Matrix {
        let mut inv = self
            .solve_mat(&Matrix::identity(self.dim()))
            .expect("identity conforms");
        inv.symmetrize();
        inv
    }
}

pub fn cholesky(g: &Matrix) -> Result<SpdFactor> {
    g.check_square()?;
    let n = g.rows;
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let d = g[(j, j)] - dot(&l.row(j)[..j], &l.row(j)[..j]);
        if !d.is_finite() || d <= PIVOT_RTOL * g[(j, j)].abs() {
            return Err(Error::NotPositiveDefinite { pivot: j });
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in j + 1..n {
            let s = g[(i, j)] - dot(&l.row(i)[..j], &l.row(j)[..j]);
            l[(i, j)] = s / ljj;
        }
    }
    Ok(SpdFactor { l })
}

/// Solution of `F psi = lambda G psi`: eigenvalues ascending, eigenvectors as
/// the columns of `vectors`, each normalized to `psi^T G psi = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedEig {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl GeneralizedEig {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, s: usize) -> Vec<f64> {
        self.vectors.column(s)
    }

    /// `(max|Psi^T G Psi - I|, max|Psi^T F Psi - diag(lambda)|)`.
    pub fn residuals(&self, f: &Matrix, g: &Matrix) -> Result<(f64, f64)> {
        let psi_t = self.vectors.transpose();
        let gram = psi_t.matmul(&g.matmul(&self.vectors)?)?;
        let fpsi = psi_t.matmul(&f.matmul(&self.vectors)?)?;
        Ok((
            gram.max_abs_diff(&Matrix::identity(self.dim())),
            fpsi.max_abs_diff(&Matrix::from_diag(&self.values)),
        ))
    }
}

pub const MAX_SWEEPS: usize = 30;
const JACOBI_TOL: f64 = 1e-12;

/// Cyclic Jacobi on a symmetric matrix. Returns eigenvalues (unsorted) and the
/// orthogonal matrix of eigenvectors stored by columns.
pub fn jacobi_eigen(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    a.check_square()?;
    let n = a.rows;
    let mut a = a.clone();
    let mut v = Matrix::identity(n);
    let target = JACOBI_TOL * a.frobenius();

    let off = |a: &Matrix| {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += 2.0 * a[(i, j)] * a[(i, j)];
            }
        }
        s.sqrt()
    };

    for _ in 0..MAX_SWEEPS {
        if off(&a) <= target {
            return Ok(((0..n).map(|i| a[(i, i)]).collect(), v));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if off(&a) <= target {
        return Ok(((0..n).map(|i| a[(i, i)]).collect(), v));
    }
    Err(Error::NoConvergence { sweeps: MAX_SWEEPS })
}

/// Solves `F psi = lambda G psi` through `C = L^{-1} F L^{-T}`.
pub fn generalized_sym_eig(f: &Matrix, g_fac: &SpdFactor) -> Result<GeneralizedEig> {
    f.check_square()?;
    let n = g_fac.dim();
    if f.rows != n {
        return Err(Error::shape(format!("{n}x{n}"), format!("{}x{}", f.rows, f.cols)));
    }

    // X = L^{-1} F, then C = L^{-1} X^T.
    let mut x = f.transpose();
    for j in 0..n {
        let mut col = x.column(j);
        g_fac.forward_in_place(&mut col);
        for i in 0..n {
            x[(i, j)] = col[i];
        }
    }
    let mut c = x.transpose();
    for j in 0..n {
        let mut col = c.column(j);
        g_fac.forward_in_place(&mut col);
        for i in 0..n {
            c[(i, j)] = col[i];
        }
    }
    c.symmetrize();

    let (values, u) = jacobi_eigen(&c)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let mut vectors = Matrix::zeros(n, n);
    let mut sorted = Vec::with_capacity(n);
    for (s, &idx) in order.iter().enumerate() {
        let mut psi = u.column(idx);
        g_fac.backward_in_place(&mut psi);
        let norm = psi_g_norm(g_fac, &psi);
        let pivot = psi.iter().fold(0.0f64, |m, &v| if v.abs() > m.abs() { v } else { m });
        let scale = pivot.signum() / norm;
        for i in 0..n {
            vectors[(i, s)] = psi[i] * scale;
        }
        sorted.push(values[idx]);
    }
    Ok(GeneralizedEig {
        values: sorted,
        vectors,
    })
}

// sqrt(psi^T G psi) = |L^T psi|.
fn psi_g_norm(g_fac: &SpdFactor, psi: &[f64]) -> f64 {
    let l = g_fac.lower();
    let n = psi.len();
    (0..n)
        .map(|i| {
            let v: f64 = (i..n).map(|k| l[(k, i)] * psi[k]).sum();
            v * v
        })
        .sum::<f64>()
        .sqrt()
}
