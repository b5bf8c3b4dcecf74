//! Measures, vector moments `<f Q_m>`, and assembly of the matrix moments
//! `<f Q_j Q_k>` and Gramm matrix `<Q_j Q_k>` by product linearization.
//!
//! Only `2N - 1` vector moments per axis are accumulated over the measure;
//! everything quadratic in the basis is derived from them.

use serde::{Deserialize, Serialize};

use crate::basis::BasisKind;
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::linalg::Matrix;
use crate::par;

/// Default Gauss-Legendre node count used to discretize integrals on `[-1, 1]`.
pub const DEFAULT_QUAD_NODES: usize = 1000;

/// A discrete positive measure `sum_i w_i delta(x - x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure1D {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    support: (f64, f64),
}

impl Measure1D {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>, support: (f64, f64)) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::EmptyRequest("measure needs at least one node"));
        }
        if nodes.len() != weights.len() {
            return Err(Error::shape(nodes.len(), weights.len()));
        }
        if weights.iter().any(|w| w.is_nan() || *w <= 0.0) {
            return Err(Error::EmptyRequest("measure weights must be strictly positive"));
        }
        Ok(Self {
            nodes,
            weights,
            support,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Gauss-Legendre rule on `[-1, 1]`, exact for polynomials of degree `2n - 1`.
pub fn gauss_legendre_measure(node_count: usize) -> Result<Measure1D> {
    if node_count == 0 {
        return Err(Error::EmptyRequest("quadrature needs at least one node"));
    }
    let n = node_count;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess for the i-th largest root, then Newton.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            let dz = p / d;
            z -= dz;
            if dz.abs() <= 1e-16 * z.abs().max(1.0) {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, z);
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Measure1D::new(nodes, weights, (-1.0, 1.0))
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let (p, pm1) = if n == 0 { (1.0, 0.0) } else { (p1, p0) };
    let d = n as f64 * (x * p - pm1) / (x * x - 1.0);
    (p, d)
}

// Node count per partial sum. Partial sums are combined in index order, so
// the result does not depend on the number of worker threads.
const NODE_CHUNK: usize = 256;

/// `[<f Q_0>, ..., <f Q_{count-1}>] = sum_i w_i f(x_i) Q_m(x_i)`.
pub fn vector_moments_1d<F>(f: F, mu: &Measure1D, basis: BasisKind, count: usize) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    if count == 0 {
        return Err(Error::EmptyRequest("moment count must be at least 1"));
    }
    let chunks = mu.len().div_ceil(NODE_CHUNK);
    let partials = par::map_range(chunks, |c| -> Result<Vec<f64>> {
        let lo = c * NODE_CHUNK;
        let hi = (lo + NODE_CHUNK).min(mu.len());
        let mut acc = vec![0.0; count];
        let mut q = vec![0.0; count];
        for i in lo..hi {
            let x = mu.nodes[i];
            let fx = f(x);
            if !fx.is_finite() {
                return Err(Error::NonFiniteSample { at: x });
            }
            basis.evaluate_into(x, &mut q);
            let wf = mu.weights[i] * fx;
            for (a, qm) in acc.iter_mut().zip(&q) {
                *a += wf * qm;
            }
        }
        Ok(acc)
    });
    let mut out = vec![0.0; count];
    for p in partials {
        for (o, v) in out.iter_mut().zip(p?) {
            *o += v;
        }
    }
    Ok(out)
}

/// Vector moments of a supplied derivative `df/dx`. Derivative approximations
/// must be built from these rather than by differentiating an approximant.
pub fn derivative_moments_1d<F>(df: F, mu: &Measure1D, basis: BasisKind, count: usize) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    vector_moments_1d(df, mu, basis, count)
}

/// Unit-weight measure on a full `width x height` pixel grid, with pixel
/// `(tx, ty)` at `(tx / (width - 1), ty / (height - 1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PixelMeasure2D {
    pub width: usize,
    pub height: usize,
}

impl PixelMeasure2D {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(Error::DegenerateGrid { width, height });
        }
        Ok(Self { width, height })
    }

    pub fn x(&self, tx: usize) -> f64 {
        tx as f64 / (self.width - 1) as f64
    }

    pub fn y(&self, ty: usize) -> f64 {
        ty as f64 / (self.height - 1) as f64
    }

    /// `table[t * count + m] = Q_m(coordinate t)` along one axis.
    fn axis_table(basis: BasisKind, pixels: usize, count: usize) -> Vec<f64> {
        let mut table = vec![0.0; pixels * count];
        let denom = (pixels - 1) as f64;
        for (t, row) in table.chunks_mut(count).enumerate() {
            basis.evaluate_into(t as f64 / denom, row);
        }
        table
    }

    /// 1D moments `<Q_m>` of the axis measure along x (`axis = 0`) or y.
    pub fn axis_moments(&self, basis: BasisKind, count: usize, axis: usize) -> Vec<f64> {
        let pixels = if axis == 0 { self.width } else { self.height };
        let table = Self::axis_table(basis, pixels, count);
        let mut out = vec![0.0; count];
        for row in table.chunks(count) {
            for (o, q) in out.iter_mut().zip(row) {
                *o += q;
            }
        }
        out
    }
}

/// `(mx_max x my_max)` matrix of pixel moments
/// `sum_{tx,ty} f(tx,ty) Q_mx(x) Q_my(y)`, accumulated separably row by row.
pub fn vector_moments_2d(img: &GrayImage, basis: BasisKind, mx_max: usize, my_max: usize) -> Result<Matrix> {
    if mx_max == 0 || my_max == 0 {
        return Err(Error::EmptyRequest("moment counts must be at least 1"));
    }
    let grid = PixelMeasure2D::new(img.width(), img.height())?;
    let qx = PixelMeasure2D::axis_table(basis, grid.width, mx_max);
    let qy = PixelMeasure2D::axis_table(basis, grid.height, my_max);

    // r_ty[mx] = sum_tx f(tx, ty) Q_mx(x_tx)
    let row_sums = par::map_range(grid.height, |ty| {
        let mut r = vec![0.0; mx_max];
        for (tx, &f) in img.row(ty).iter().enumerate() {
            if f == 0.0 {
                continue;
            }
            for (a, q) in r.iter_mut().zip(&qx[tx * mx_max..(tx + 1) * mx_max]) {
                *a += f * q;
            }
        }
        r
    });

    let mut out = Matrix::zeros(mx_max, my_max);
    for (ty, r) in row_sums.iter().enumerate() {
        let qyt = &qy[ty * my_max..(ty + 1) * my_max];
        for (mx, &rv) in r.iter().enumerate() {
            for (my, &q) in qyt.iter().enumerate() {
                out[(mx, my)] += rv * q;
            }
        }
    }
    Ok(out)
}

/// Sparse product-expansion coefficients `a^{jk}_m` for `j, k < n`.
#[derive(Debug, Clone)]
struct ProductTable {
    n: usize,
    terms: Vec<Vec<(usize, f64)>>,
}

impl ProductTable {
    fn new(basis: BasisKind, n: usize) -> Self {
        let mut terms = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                terms.push(basis.product_terms(j, k));
            }
        }
        Self { n, terms }
    }

    #[inline]
    fn get(&self, j: usize, k: usize) -> &[(usize, f64)] {
        &self.terms[j * self.n + k]
    }
}

/// Per-axis basis sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Dims {
    One(usize),
    Two([usize; 2]),
}

impl Dims {
    /// Dimension of the (tensor) basis.
    pub fn total(&self) -> usize {
        match *self {
            Dims::One(n) => n,
            Dims::Two([nx, ny]) => nx * ny,
        }
    }
}

/// Vector moments: a list in 1D, an `(2Nx-1) x (2Ny-1)` matrix in 2D.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VectorMoments {
    One(Vec<f64>),
    Two(Matrix),
}

/// `F[j][k] = sum_m a^{jk}_m vec[m]`, `j, k < n`.
pub fn matrix_moments_from_vector(vec: &[f64], basis: BasisKind, n: usize) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::EmptyRequest("basis size must be at least 1"));
    }
    if vec.len() < 2 * n - 1 {
        return Err(Error::InsufficientMoments {
            needed: 2 * n - 1,
            got: vec.len(),
        });
    }
    let table = ProductTable::new(basis, n);
    let mut out = Matrix::zeros(n, n);
    for j in 0..n {
        for k in j..n {
            let v: f64 = table.get(j, k).iter().map(|&(m, a)| a * vec[m]).sum();
            out[(j, k)] = v;
            out[(k, j)] = v;
        }
    }
    Ok(out)
}

/// 2D version over tensor indices `j = jx * ny + jy`; the linearization
/// factorizes across the axes.
pub fn matrix_moments_from_vector_2d(vec: &Matrix, basis: BasisKind, nx: usize, ny: usize) -> Result<Matrix> {
    if nx == 0 || ny == 0 {
        return Err(Error::EmptyRequest("basis size must be at least 1"));
    }
    for (need, got) in [(2 * nx - 1, vec.rows()), (2 * ny - 1, vec.cols())] {
        if got < need {
            return Err(Error::InsufficientMoments { needed: need, got });
        }
    }
    let tx = ProductTable::new(basis, nx);
    let ty = ProductTable::new(basis, ny);
    let mxs = 2 * nx - 1;

    // Contract the y axis first: partial[(mx, jy, ky)] = sum_my a^{jy ky}_my vec[mx][my].
    let mut partial = vec![0.0; mxs * ny * ny];
    par::for_each_chunk_mut(&mut partial, ny * ny, |mx, block| {
        let row = vec.row(mx);
        for jy in 0..ny {
            for ky in jy..ny {
                let v: f64 = ty.get(jy, ky).iter().map(|&(m, a)| a * row[m]).sum();
                block[jy * ny + ky] = v;
                block[ky * ny + jy] = v;
            }
        }
    });

    let dim = nx * ny;
    let mut out = Matrix::zeros(dim, dim);
    par::for_each_chunk_mut(out.as_mut_slice(), dim, |j, row| {
        let (jx, jy) = (j / ny, j % ny);
        for kx in 0..nx {
            let terms = tx.get(jx, kx);
            for ky in 0..ny {
                row[kx * ny + ky] = terms.iter().map(|&(m, a)| a * partial[(m * ny + jy) * ny + ky]).sum();
            }
        }
    });
    out.symmetrize();
    Ok(out)
}

/// Gramm matrix `<Q_j Q_k>` from the moments `<Q_m>`.
pub fn gramm_from_vector(vec1: &[f64], basis: BasisKind, n: usize) -> Result<Matrix> {
    matrix_moments_from_vector(vec1, basis, n)
}

pub fn gramm_from_vector_2d(vec1: &Matrix, basis: BasisKind, nx: usize, ny: usize) -> Result<Matrix> {
    matrix_moments_from_vector_2d(vec1, basis, nx, ny)
}

/// Everything the estimators need: vector moments, matrix moments `F` and
/// Gramm matrix `G` over one measure and basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub basis: BasisKind,
    pub n: Dims,
    pub vec: VectorMoments,
    pub vec1: VectorMoments,
    #[serde(rename = "F")]
    pub f: Matrix,
    #[serde(rename = "G")]
    pub g: Matrix,
}

impl MomentSet {
    /// Moments of `f` on `mu` with `n` basis functions.
    pub fn from_function_1d<F>(f: F, mu: &Measure1D, basis: BasisKind, n: usize) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Sync + Send,
    {
        if n == 0 {
            return Err(Error::EmptyRequest("basis size must be at least 1"));
        }
        let count = 2 * n - 1;
        let vec = vector_moments_1d(f, mu, basis, count)?;
        let vec1 = vector_moments_1d(|_| 1.0, mu, basis, count)?;
        Self::from_vectors_1d(vec, vec1, basis, n)
    }

    /// Same as [`MomentSet::from_function_1d`], fed with the derivative.
    pub fn from_derivative_1d<F>(df: F, mu: &Measure1D, basis: BasisKind, n: usize) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Sync + Send,
    {
        Self::from_function_1d(df, mu, basis, n)
    }

    pub fn from_vectors_1d(vec: Vec<f64>, vec1: Vec<f64>, basis: BasisKind, n: usize) -> Result<Self> {
        let f = matrix_moments_from_vector(&vec, basis, n)?;
        let g = gramm_from_vector(&vec1, basis, n)?;
        Ok(Self {
            basis,
            n: Dims::One(n),
            vec: VectorMoments::One(vec),
            vec1: VectorMoments::One(vec1),
            f,
            g,
        })
    }

    /// Pixel-sum moments of an image with `nx x ny` tensor basis functions.
    /// `G` is assembled as the Kronecker product of the two axis Gramm matrices.
    pub fn from_image(img: &GrayImage, basis: BasisKind, nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::EmptyRequest("basis size must be at least 1"));
        }
        let grid = PixelMeasure2D::new(img.width(), img.height())?;
        let (cx, cy) = (2 * nx - 1, 2 * ny - 1);
        let vec = vector_moments_2d(img, basis, cx, cy)?;
        let f = matrix_moments_from_vector_2d(&vec, basis, nx, ny)?;

        let ux = grid.axis_moments(basis, cx, 0);
        let uy = grid.axis_moments(basis, cy, 1);
        let vec1 = Matrix::from_fn(cx, cy, |i, j| ux[i] * uy[j]);
        let g = gramm_from_vector(&ux, basis, nx)?.kron(&gramm_from_vector(&uy, basis, ny)?);

        Ok(Self {
            basis,
            n: Dims::Two([nx, ny]),
            vec: VectorMoments::Two(vec),
            vec1: VectorMoments::Two(vec1),
            f,
            g,
        })
    }

    pub fn dim(&self) -> usize {
        self.n.total()
    }

    /// `<f Q_j>` for `j < N` per axis, flattened in tensor order.
    pub fn leading_moments(&self) -> Vec<f64> {
        match (&self.vec, self.n) {
            (VectorMoments::One(v), Dims::One(n)) => v[..n].to_vec(),
            (VectorMoments::Two(m), Dims::Two([nx, ny])) => (0..nx * ny).map(|j| m[(j / ny, j % ny)]).collect(),
            _ => unreachable!("moment layout always matches dims"),
        }
    }

    /// True when `other` shares basis, dims and Gramm matrix to `1e-14`
    /// relative.
    pub fn same_measure(&self, other: &MomentSet) -> bool {
        self.basis == other.basis
            && self.n == other.n
            && self.g.rows() == other.g.rows()
            && self.g.max_abs_diff(&other.g) <= 1e-14 * self.g.max_abs().max(f64::MIN_POSITIVE)
    }
}
