//! Independent reference computations for the integration tests.
//!
//! Matrices are accumulated directly as `sum w Q_j Q_k` over the measure (no
//! product linearization) and solved with nalgebra, so none of the library's
//! moment algebra, Cholesky or Jacobi code is on this path.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rnapprox::GrayImage;

/// `T_0..T_{n-1}` at `x`; trigonometric form inside `[-1, 1]`.
pub fn chebyshev(n: usize, x: f64) -> Vec<f64> {
    if x.abs() <= 1.0 {
        let t = x.acos();
        (0..n).map(|k| (k as f64 * t).cos()).collect()
    } else {
        let mut out = vec![1.0, x];
        while out.len() < n {
            let k = out.len();
            out.push(2.0 * x * out[k - 1] - out[k - 2]);
        }
        out.truncate(n);
        out
    }
}

/// `P_0..P_{n-1}` at `x` from Bonnet's recursion.
pub fn legendre(n: usize, x: f64) -> Vec<f64> {
    let mut out = vec![1.0, x];
    while out.len() < n {
        let k = out.len() as f64;
        let next = ((2.0 * k - 1.0) * x * out[out.len() - 1] - (k - 1.0) * out[out.len() - 2]) / k;
        out.push(next);
    }
    out.truncate(n);
    out
}

pub type Poly = fn(usize, f64) -> Vec<f64>;

/// Dense `G`, `F` and `b = <f Q>` for one feature.
pub struct Dense {
    pub g: DMatrix<f64>,
    pub f: DMatrix<f64>,
    pub b: DVector<f64>,
}

impl Dense {
    fn accumulate(dim: usize, samples: impl Iterator<Item = (f64, f64, Vec<f64>)>) -> Self {
        let mut g = DMatrix::zeros(dim, dim);
        let mut f = DMatrix::zeros(dim, dim);
        let mut b = DVector::zeros(dim);
        for (w, v, q) in samples {
            for j in 0..dim {
                b[j] += w * v * q[j];
                for k in 0..dim {
                    g[(j, k)] += w * q[j] * q[k];
                    f[(j, k)] += w * v * q[j] * q[k];
                }
            }
        }
        Self { g, f, b }
    }

    pub fn one_d(f: impl Fn(f64) -> f64, nodes: &[f64], weights: &[f64], n: usize, poly: Poly) -> Self {
        Self::accumulate(n, nodes.iter().zip(weights).map(|(&x, &w)| (w, f(x), poly(n, x))))
    }

    /// Unit-weight pixel sums over `x = tx/(w-1)`, `y = ty/(h-1)` with the
    /// basis shifted to `[0, 1]` and tensor index `jx * ny + jy`.
    pub fn image(img: &GrayImage, nx: usize, ny: usize, poly: Poly) -> Self {
        let (w, h) = (img.width(), img.height());
        let samples = (0..h).flat_map(move |ty| {
            (0..w).map(move |tx| {
                let x = tx as f64 / (w - 1) as f64;
                let y = ty as f64 / (h - 1) as f64;
                (1.0, img.get(tx, ty), tensor(nx, ny, x, y, poly))
            })
        });
        Self::accumulate(nx * ny, samples)
    }

    fn solve(&self, rhs: &DVector<f64>) -> DVector<f64> {
        self.g.clone().lu().solve(rhs).expect("Gramm matrix is invertible")
    }

    pub fn ls_coeffs(&self) -> DVector<f64> {
        self.solve(&self.b)
    }

    pub fn ls(&self, q: &[f64]) -> f64 {
        DVector::from_column_slice(q).dot(&self.ls_coeffs())
    }

    pub fn rn(&self, q: &[f64]) -> f64 {
        let q = DVector::from_column_slice(q);
        let y = self.solve(&q);
        (y.transpose() * &self.f * &y)[(0, 0)] / q.dot(&y)
    }

    /// `Spur(G^-1 F) / dim`.
    pub fn spur(&self) -> f64 {
        self.solve_mat(&self.f).trace() / self.g.nrows() as f64
    }

    fn solve_mat(&self, rhs: &DMatrix<f64>) -> DMatrix<f64> {
        self.g.clone().lu().solve(rhs).expect("Gramm matrix is invertible")
    }
}

pub fn tensor(nx: usize, ny: usize, x: f64, y: f64, poly: Poly) -> Vec<f64> {
    let qx = poly(nx, 2.0 * x - 1.0);
    let qy = poly(ny, 2.0 * y - 1.0);
    qx.iter().flat_map(|a| qy.iter().map(move |b| a * b)).collect()
}

/// `F psi = lambda G psi` through nalgebra's Cholesky and symmetric eigensolver.
/// Returns ascending eigenvalues and G-orthonormal eigenvectors as columns.
pub fn generalized_eig(f: &DMatrix<f64>, g: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let l = g.clone().cholesky().expect("G is positive definite").l();
    let l_inv = l.clone().try_inverse().expect("triangular factor is invertible");
    let c = &l_inv * f * l_inv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let eig = c.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = f.nrows();
    let u = DMatrix::from_fn(n, n, |r, s| eig.eigenvectors[(r, order[s])]);
    (values, l_inv.transpose() * u)
}

pub fn to_dmatrix(m: &rnapprox::Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

pub fn random_image(rng: &mut impl Rng, width: usize, height: usize) -> GrayImage {
    let bytes: Vec<u8> = (0..width * height).map(|_| rng.gen()).collect();
    GrayImage::from_bytes(width, height, &bytes).unwrap()
}

/// Linear ramp plus a bright disk.
pub fn gradient_disk(side: usize) -> GrayImage {
    GrayImage::from_fn(side, side, |tx, ty| {
        let (x, y) = (tx as f64 / (side - 1) as f64, ty as f64 / (side - 1) as f64);
        let disk = if (x - 0.4).powi(2) + (y - 0.55).powi(2) < 0.08 {
            0.6
        } else {
            0.0
        };
        0.3 * x + 0.1 * y + disk
    })
}

/// Radial `1 / (1 + 25 r^2)` centred in the frame.
pub fn radial_runge(side: usize) -> GrayImage {
    GrayImage::from_fn(side, side, |tx, ty| {
        let x = 2.0 * tx as f64 / (side - 1) as f64 - 1.0;
        let y = 2.0 * ty as f64 / (side - 1) as f64 - 1.0;
        1.0 / (1.0 + 25.0 * (x * x + y * y))
    })
}

pub fn runge(x: f64) -> f64 {
    1.0 / (1.0 + 25.0 * x * x)
}

pub fn runge_prime(x: f64) -> f64 {
    -50.0 * x / (1.0 + 25.0 * x * x).powi(2)
}

/// `n` equally spaced points covering `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}
