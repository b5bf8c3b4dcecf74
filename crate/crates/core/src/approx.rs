//! Estimators built from a [`MomentSet`]:
//!
//! * least squares, `A_LS(x) = q(x)^T G^{-1} <f Q>`;
//! * the Radon-Nikodym (Nevai) ratio
//!   `A_RN(x) = q^T G^{-1} F G^{-1} q / q^T G^{-1} q`, a positive-weight
//!   average of `f` that cannot leave `[min f, max f]`;
//! * localized states, Spur averages, the natural basis of `F psi = lambda G psi`
//!   and eigenvalue-counting Lebesgue measures.

use serde::{Deserialize, Serialize};

use crate::basis::{BasisKind, CoeffVector};
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::linalg::{cholesky, dot, generalized_sym_eig, GeneralizedEig, Matrix, SpdFactor};
use crate::moments::{Dims, MomentSet, PixelMeasure2D};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ls,
    Rn,
}

/// An evaluation point: `x` for 1D moment sets, `(x, y)` for images.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    X(f64),
    XY(f64, f64),
}

impl From<f64> for Point {
    fn from(x: f64) -> Self {
        Point::X(x)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::XY(x, y)
    }
}

/// Precomputed `G^{-1}`, `G^{-1} <f Q>` and `M = G^{-1} F G^{-1}`.
#[derive(Debug, Clone)]
pub struct Reconstructor {
    basis: BasisKind,
    dims: Dims,
    factor: SpdFactor,
    g_inv: Matrix,
    ls_coeffs: Vec<f64>,
    rn_core: Matrix,
}

impl Reconstructor {
    pub fn new(ms: &MomentSet) -> Result<Self> {
        let factor = cholesky(&ms.g)?;
        let ls_coeffs = factor.solve_vec(&ms.leading_moments())?;
        // M = G^{-1} (G^{-1} F)^T, symmetrized.
        let half = factor.solve_mat(&ms.f)?;
        let mut rn_core = factor.solve_mat(&half.transpose())?;
        rn_core.symmetrize();
        let g_inv = factor.inverse();
        Ok(Self {
            basis: ms.basis,
            dims: ms.n,
            factor,
            g_inv,
            ls_coeffs,
            rn_core,
        })
    }

    pub fn basis(&self) -> BasisKind {
        self.basis
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn ls_coeffs(&self) -> &[f64] {
        &self.ls_coeffs
    }

    pub fn rn_core(&self) -> &Matrix {
        &self.rn_core
    }

    pub fn gram_inverse(&self) -> &Matrix {
        &self.g_inv
    }

    /// Least-squares expansion as a [`CoeffVector`] (1D only).
    pub fn ls_expansion(&self) -> Option<CoeffVector> {
        matches!(self.dims, Dims::One(_)).then(|| CoeffVector::new(self.basis, self.ls_coeffs.clone()))
    }

    /// `q(p)`, the tensor basis vector at `p`.
    ///
    /// Panics if the point dimension does not match the moment set.
    pub fn basis_vector(&self, p: impl Into<Point>) -> Vec<f64> {
        match (self.dims, p.into()) {
            (Dims::One(n), Point::X(x)) => {
                let mut q = vec![0.0; n];
                self.basis.evaluate_into(x, &mut q);
                q
            }
            (Dims::Two([nx, ny]), Point::XY(x, y)) => {
                let mut qx = vec![0.0; nx];
                let mut qy = vec![0.0; ny];
                self.basis.evaluate_into(x, &mut qx);
                self.basis.evaluate_into(y, &mut qy);
                kron_vec(&qx, &qy)
            }
            (dims, p) => panic!("point {p:?} does not match basis dims {dims:?}"),
        }
    }

    pub fn eval_ls(&self, p: impl Into<Point>) -> f64 {
        dot(&self.basis_vector(p), &self.ls_coeffs)
    }

    pub fn eval_rn(&self, p: impl Into<Point>) -> f64 {
        let q = self.basis_vector(p);
        self.rn_core.quad_form(&q) / self.factor.inverse_quad_form(&q)
    }

    pub fn eval(&self, method: Method, p: impl Into<Point>) -> f64 {
        match method {
            Method::Ls => self.eval_ls(p),
            Method::Rn => self.eval_rn(p),
        }
    }

    /// Christoffel-function reciprocal `K(p, p) = q^T G^{-1} q`.
    pub fn kernel_diagonal(&self, p: impl Into<Point>) -> f64 {
        self.factor.inverse_quad_form(&self.basis_vector(p))
    }

    /// Normalized localized state
    /// `psi_{x0}(x) = q(x)^T G^{-1} q(x0) / sqrt(q(x0)^T G^{-1} q(x0))`.
    pub fn eval_psi_x0(&self, x0: impl Into<Point>, x: impl Into<Point>) -> f64 {
        let q0 = self.basis_vector(x0);
        let g_q0 = self.factor.solve_vec(&q0).expect("dimension matches");
        let q = self.basis_vector(x);
        dot(&q, &g_q0) / dot(&q0, &g_q0).sqrt()
    }

    /// Central difference of the chosen estimator. Differentiating an
    /// approximant is not a valid derivative estimate; use moments of the
    /// derivative instead (see [`reconstruct_derivative_1d`]).
    pub fn differentiate(&self, method: Method, x: f64, step: f64) -> f64 {
        assert!(step > 0.0, "finite-difference step must be positive");
        (self.eval(method, x + step) - self.eval(method, x - step)) / (2.0 * step)
    }

    /// Evaluates the estimator at every pixel of a `width x height` grid.
    ///
    /// For each row the tensor quadratic forms are contracted over the y axis
    /// once, leaving an `Nx x Nx` form per pixel.
    pub fn reconstruct_image(&self, width: usize, height: usize, method: Method) -> Result<Reconstruction> {
        let Dims::Two([nx, ny]) = self.dims else {
            return Err(Error::shape("2D moment set", "1D moment set"));
        };
        let grid = PixelMeasure2D::new(width, height)?;
        let qx: Vec<Vec<f64>> = (0..width)
            .map(|tx| self.basis.evaluate_all(nx, grid.x(tx)).expect("nx >= 1"))
            .collect();

        let mut values = vec![0.0; width * height];
        par::for_each_chunk_mut(&mut values, width, |ty, row| {
            let qy = self.basis.evaluate_all(ny, grid.y(ty)).expect("ny >= 1");
            match method {
                Method::Ls => {
                    // c[jx] = sum_jy ls[jx, jy] qy[jy]
                    let c: Vec<f64> = (0..nx)
                        .map(|jx| dot(&self.ls_coeffs[jx * ny..(jx + 1) * ny], &qy))
                        .collect();
                    for (v, q) in row.iter_mut().zip(&qx) {
                        *v = dot(q, &c);
                    }
                }
                Method::Rn => {
                    let num = contract_y(&self.rn_core, &qy, nx, ny);
                    let den = contract_y(&self.g_inv, &qy, nx, ny);
                    for (v, q) in row.iter_mut().zip(&qx) {
                        *v = num.quad_form(q) / den.quad_form(q);
                    }
                }
            }
        });
        Ok(Reconstruction { width, height, values })
    }
}

fn kron_vec(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

// R[jx][kx] = sum_{jy,ky} qy[jy] A[(jx,jy),(kx,ky)] qy[ky]
fn contract_y(a: &Matrix, qy: &[f64], nx: usize, ny: usize) -> Matrix {
    let mut r = Matrix::zeros(nx, nx);
    for jx in 0..nx {
        for kx in jx..nx {
            let mut s = 0.0;
            for jy in 0..ny {
                let row = &a.row(jx * ny + jy)[kx * ny..(kx + 1) * ny];
                s += qy[jy] * dot(row, qy);
            }
            r[(jx, kx)] = s;
            r[(kx, jx)] = s;
        }
    }
    r
}

/// Estimator values on a pixel grid before byte quantization.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
}

impl Reconstruction {
    pub fn pre_clamp_min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn pre_clamp_max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Clamps into `[0, 1]` for output.
    pub fn to_image(&self) -> GrayImage {
        GrayImage::from_fn(self.width, self.height, |tx, ty| self.values[ty * self.width + tx])
    }
}

pub fn build_reconstructor(ms: &MomentSet) -> Result<Reconstructor> {
    Reconstructor::new(ms)
}

/// Evaluates an estimator built from derivative moments, i.e. an
/// approximation of `df/dx` rather than of `f`.
pub fn reconstruct_derivative_1d(dms: &MomentSet, method: Method, x: f64) -> Result<f64> {
    if !matches!(dms.n, Dims::One(_)) {
        return Err(Error::shape("1D moment set", "2D moment set"));
    }
    Ok(Reconstructor::new(dms)?.eval(method, x))
}

pub fn differentiate_reconstruction(r: &Reconstructor, method: Method, x: f64, step: f64) -> f64 {
    r.differentiate(method, x, step)
}

/// `Spur(G^{-1} F) / dim G`.
pub fn spur_average(ms: &MomentSet) -> Result<f64> {
    let fac = cholesky(&ms.g)?;
    Ok(fac.solve_mat(&ms.f)?.trace() / ms.dim() as f64)
}

/// `Spur(G^{-1} F G^{-1} H) / dim G` for two moment sets over one measure.
pub fn spur_product_average(ms_f: &MomentSet, ms_g: &MomentSet) -> Result<f64> {
    if !ms_f.same_measure(ms_g) {
        return Err(Error::MismatchedMeasure);
    }
    let fac = cholesky(&ms_f.g)?;
    let a = fac.solve_mat(&ms_f.f)?;
    let b = fac.solve_mat(&ms_g.f)?;
    let n = ms_f.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    Ok(s / n as f64)
}

/// Eigenpairs of `F psi = lambda G psi` together with the basis they expand in.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalBasis {
    pub basis: BasisKind,
    pub dims: Dims,
    pub eig: GeneralizedEig,
}

impl NaturalBasis {
    pub fn values(&self) -> &[f64] {
        &self.eig.values
    }

    /// `psi^(s)` as an expansion in the original basis (1D only).
    pub fn state(&self, s: usize) -> Option<CoeffVector> {
        matches!(self.dims, Dims::One(_)).then(|| CoeffVector::new(self.basis, self.eig.vector(s)))
    }

    /// `psi^(s)(p) = sum_m psi_m Q_m(p)`.
    pub fn eval_state(&self, s: usize, p: impl Into<Point>) -> f64 {
        let q = match (self.dims, p.into()) {
            (Dims::One(n), Point::X(x)) => self.basis.evaluate_all(n, x).expect("n >= 1"),
            (Dims::Two([nx, ny]), Point::XY(x, y)) => kron_vec(
                &self.basis.evaluate_all(nx, x).expect("nx >= 1"),
                &self.basis.evaluate_all(ny, y).expect("ny >= 1"),
            ),
            (dims, p) => panic!("point {p:?} does not match basis dims {dims:?}"),
        };
        (0..q.len()).map(|m| q[m] * self.eig.vectors[(m, s)]).sum()
    }
}

pub fn natural_basis(ms: &MomentSet) -> Result<NaturalBasis> {
    let fac = cholesky(&ms.g)?;
    let eig = generalized_sym_eig(&ms.f, &fac)?;
    Ok(NaturalBasis {
        basis: ms.basis,
        dims: ms.n,
        eig,
    })
}

/// Value-space histogram of eigenvalue counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LebesgueHistogram {
    /// `bins + 1` increasing edges `f_0 < f_1 < ...`.
    pub bins: Vec<f64>,
    /// Number of eigenvalues in `[f_i, f_{i+1})`; the last bin is closed.
    pub mu: Vec<usize>,
}

/// Width added to the top edge so the largest eigenvalue is interior.
pub const TOP_EDGE_PAD: f64 = 1e-12;

/// Uniform bins over `[min lambda, max lambda + 1e-12]`.
pub fn lebesgue_measure(eigenvalues: &[f64], bin_count: usize) -> Result<LebesgueHistogram> {
    if eigenvalues.is_empty() {
        return Err(Error::EmptyRequest("spectrum is empty"));
    }
    if bin_count == 0 {
        return Err(Error::EmptyRequest("bin count must be at least 1"));
    }
    let lo = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max) + TOP_EDGE_PAD;
    let width = (hi - lo) / bin_count as f64;
    let mut edges: Vec<f64> = (0..bin_count).map(|i| lo + i as f64 * width).collect();
    edges.push(hi);
    LebesgueHistogram::with_edges(eigenvalues, edges)
}

impl LebesgueHistogram {
    /// Counts eigenvalues into explicit, strictly increasing edges.
    pub fn with_edges(eigenvalues: &[f64], edges: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::EmptyRequest("spectrum is empty"));
        }
        if edges.len() < 2 {
            return Err(Error::InvalidEdges("need at least two edges"));
        }
        if !edges.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidEdges("edges must be strictly increasing"));
        }
        let bins = edges.len() - 1;
        let (lo, hi) = (edges[0], edges[bins]);
        let mut mu = vec![0usize; bins];
        for &v in eigenvalues {
            if !(lo..=hi).contains(&v) {
                return Err(Error::OutOfRange { value: v });
            }
            let i = (edges.partition_point(|&e| e <= v) - 1).min(bins - 1);
            mu[i] += 1;
        }
        Ok(Self { bins: edges, mu })
    }

    pub fn total(&self) -> usize {
        self.mu.iter().sum()
    }

    pub fn lower_edges(&self) -> &[f64] {
        &self.bins[..self.mu.len()]
    }
}

/// `sum_i g(f_i) mu_i` with `f_i` the lower edge of bin `i`.
pub fn lebesgue_integral(h: &LebesgueHistogram, g: impl Fn(f64) -> f64) -> f64 {
    h.lower_edges()
        .iter()
        .zip(&h.mu)
        .map(|(&f, &m)| if m == 0 { 0.0 } else { g(f) * m as f64 })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::gauss_legendre_measure;

    fn runge(x: f64) -> f64 {
        1.0 / (1.0 + 25.0 * x * x)
    }

    #[test]
    fn constant_function_is_reproduced() {
        let mu = gauss_legendre_measure(64).unwrap();
        let c = 0.37;
        for b in [BasisKind::chebyshev(), BasisKind::legendre()] {
            let ms = MomentSet::from_function_1d(|_| c, &mu, b, 5).unwrap();
            let r = Reconstructor::new(&ms).unwrap();
            assert!((r.ls_coeffs()[0] - c).abs() < 1e-14);
            assert!(r.ls_coeffs()[1..].iter().all(|v| v.abs() < 1e-14));
            let cg = Matrix::from_fn(5, 5, |i, j| c * r.gram_inverse()[(i, j)]);
            assert!(r.rn_core().max_abs_diff(&cg) < 1e-12);
            for x in [-10.0, -1.0, 0.0, 0.3, 4.0, 10.0] {
                assert!((r.eval_rn(x) - c).abs() < 1e-10, "x={x}");
                assert!((r.eval_ls(x) - c).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn orthogonal_projection_of_basis_element() {
        let mu = gauss_legendre_measure(64).unwrap();
        let b = BasisKind::legendre();
        let ms = MomentSet::from_function_1d(|x| 0.5 * (3.0 * x * x - 1.0), &mu, b, 4).unwrap();
        let r = Reconstructor::new(&ms).unwrap();
        for (i, v) in r.ls_coeffs().iter().enumerate() {
            assert!((v - if i == 2 { 1.0 } else { 0.0 }).abs() < 1e-13);
        }
        let ms = MomentSet::from_function_1d(|x| x, &mu, b, 4).unwrap();
        let r = Reconstructor::new(&ms).unwrap();
        assert!((r.eval_ls(0.3) - 0.3).abs() < 1e-14);
        assert!(r.rn_core().is_symmetric(1e-10));
    }

    #[test]
    fn rn_is_nonnegative_and_bounded_for_runge() {
        let mu = gauss_legendre_measure(1000).unwrap();
        let ms = MomentSet::from_function_1d(runge, &mu, BasisKind::chebyshev(), 7).unwrap();
        let r = Reconstructor::new(&ms).unwrap();
        for i in 0..=600 {
            let x = -3.0 + i as f64 * 0.01;
            let v = r.eval_rn(x);
            assert!((1.0 / 26.0 - 1e-9..=1.0 + 1e-9).contains(&v), "x={x} v={v}");
        }
    }

    #[test]
    fn psi_x0_properties() {
        let mu = gauss_legendre_measure(200).unwrap();
        let ms = MomentSet::from_function_1d(runge, &mu, BasisKind::legendre(), 6).unwrap();
        let r = Reconstructor::new(&ms).unwrap();
        for x0 in [-0.9, 0.0, 0.45] {
            let diag = r.eval_psi_x0(x0, x0);
            assert!((diag - r.kernel_diagonal(x0).sqrt()).abs() < 1e-12 && diag > 0.0);
            // Quadrature oracle: <psi_{x0}^2> = 1.
            let norm: f64 = mu
                .nodes()
                .iter()
                .zip(mu.weights())
                .map(|(&x, w)| w * r.eval_psi_x0(x0, x).powi(2))
                .sum();
            assert!((norm - 1.0).abs() < 1e-9, "x0={x0} norm={norm}");
        }

        let ms = MomentSet::from_function_1d(runge, &mu, BasisKind::legendre(), 1).unwrap();
        let r = Reconstructor::new(&ms).unwrap();
        // N = 1: psi = Q_0 / sqrt(<Q_0 Q_0>) = 1 / sqrt(2).
        assert!((r.eval_psi_x0(0.2, -0.7) - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn image_fast_path_matches_pointwise() {
        let img = GrayImage::from_fn(11, 9, |tx, ty| ((tx * 7 + ty * 3) % 10) as f64 / 9.0);
        let ms = MomentSet::from_image(&img, BasisKind::chebyshev().shifted(), 4, 3).unwrap();
        let r = Reconstructor::new(&ms).unwrap();
        for method in [Method::Ls, Method::Rn] {
            let rec = r.reconstruct_image(11, 9, method).unwrap();
            for ty in 0..9 {
                for tx in 0..11 {
                    let p = (tx as f64 / 10.0, ty as f64 / 8.0);
                    let v = r.eval(method, p);
                    assert!((rec.values[ty * 11 + tx] - v).abs() < 1e-12 * v.abs().max(1.0));
                }
            }
        }
        let one_d = MomentSet::from_function_1d(runge, &gauss_legendre_measure(16).unwrap(), BasisKind::chebyshev(), 3)
            .unwrap();
        assert!(Reconstructor::new(&one_d)
            .unwrap()
            .reconstruct_image(4, 4, Method::Rn)
            .is_err());
    }

    #[test]
    fn constant_image_reconstructs_exactly() {
        let img = GrayImage::from_fn(12, 10, |_, _| 0.6);
        let ms = MomentSet::from_image(&img, BasisKind::legendre().shifted(), 4, 4).unwrap();
        let r = Reconstructor::new(&ms).unwrap();
        for method in [Method::Ls, Method::Rn] {
            let rec = r.reconstruct_image(12, 10, method).unwrap();
            assert!(rec.values.iter().all(|v| (v - 0.6).abs() < 1e-9));
            assert_eq!(rec.to_image().to_bytes(), img.to_bytes());
        }
    }

    #[test]
    fn derivative_reconstruction_examples() {
        let mu = gauss_legendre_measure(64).unwrap();
        let b = BasisKind::legendre();
        let dms = MomentSet::from_derivative_1d(|_| 0.0, &mu, b, 4).unwrap();
        for m in [Method::Ls, Method::Rn] {
            assert!(reconstruct_derivative_1d(&dms, m, 0.3).unwrap().abs() < 1e-14);
        }
        let dms = MomentSet::from_derivative_1d(|x| 2.0 * x, &mu, b, 3).unwrap();
        assert!((reconstruct_derivative_1d(&dms, Method::Ls, 0.4).unwrap() - 0.8).abs() < 1e-13);
    }

    #[test]
    fn finite_difference_examples() {
        let mu = gauss_legendre_measure(64).unwrap();
        let b = BasisKind::chebyshev();
        let ms = MomentSet::from_function_1d(|_| 0.2, &mu, b, 5).unwrap();
        let r = Reconstructor::new(&ms).unwrap();
        for m in [Method::Ls, Method::Rn] {
            assert!(differentiate_reconstruction(&r, m, 0.1, 1e-4).abs() < 1e-8);
        }
        let ms = MomentSet::from_function_1d(|x| x, &mu, b, 5).unwrap();
        let r = Reconstructor::new(&ms).unwrap();
        assert!((differentiate_reconstruction(&r, Method::Ls, 0.3, 1e-4) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn spur_of_constant() {
        let mu = gauss_legendre_measure(64).unwrap();
        let ms = MomentSet::from_function_1d(|_| 0.8, &mu, BasisKind::legendre(), 6).unwrap();
        assert!((spur_average(&ms).unwrap() - 0.8).abs() < 1e-13);
        let ms2 = MomentSet::from_function_1d(|_| -1.5, &mu, BasisKind::legendre(), 6).unwrap();
        assert!((spur_product_average(&ms, &ms2).unwrap() + 1.2).abs() < 1e-12);
        let other = MomentSet::from_function_1d(|_| 1.0, &mu, BasisKind::chebyshev(), 6).unwrap();
        assert_eq!(spur_product_average(&ms, &other), Err(Error::MismatchedMeasure));
    }

    #[test]
    fn natural_basis_of_constant() {
        let img = GrayImage::from_fn(8, 8, |_, _| 0.25);
        let ms = MomentSet::from_image(&img, BasisKind::chebyshev().shifted(), 3, 3).unwrap();
        let nb = natural_basis(&ms).unwrap();
        assert!(nb.values().iter().all(|l| (l - 0.25).abs() < 1e-12));
        assert!(nb.state(0).is_none());
        let (rg, rf) = nb.eig.residuals(&ms.f, &ms.g).unwrap();
        assert!(rg < 1e-8 && rf < 1e-8);
    }

    #[test]
    fn natural_states_are_g_orthonormal_under_quadrature() {
        let mu = gauss_legendre_measure(100).unwrap();
        let ms = MomentSet::from_function_1d(runge, &mu, BasisKind::chebyshev(), 5).unwrap();
        let nb = natural_basis(&ms).unwrap();
        for r in 0..5 {
            for s in 0..5 {
                let (pr, ps) = (nb.state(r).unwrap(), nb.state(s).unwrap());
                let ip: f64 = mu
                    .nodes()
                    .iter()
                    .zip(mu.weights())
                    .map(|(&x, w)| w * pr.evaluate(x) * ps.evaluate(x))
                    .sum();
                let fip: f64 = mu
                    .nodes()
                    .iter()
                    .zip(mu.weights())
                    .map(|(&x, w)| w * runge(x) * pr.evaluate(x) * ps.evaluate(x))
                    .sum();
                let delta = if r == s { 1.0 } else { 0.0 };
                assert!((ip - delta).abs() < 1e-10);
                assert!((fip - delta * nb.values()[s]).abs() < 1e-10);
                assert!((nb.eval_state(s, 0.3) - ps.evaluate(0.3)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lebesgue_examples() {
        let h = lebesgue_measure(&[0.4; 6], 5).unwrap();
        assert_eq!(h.mu, vec![6, 0, 0, 0, 0]);
        assert!((lebesgue_integral(&h, |v| v) - 0.4 * 6.0).abs() < 1e-12);

        let h = lebesgue_measure(&[1.0, 2.0, 3.0], 3).unwrap();
        assert_eq!(h.mu, vec![1, 1, 1]);
        assert_eq!(lebesgue_integral(&h, |_| 1.0), 3.0);

        let h = LebesgueHistogram::with_edges(&[1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(h.mu, vec![1, 1, 1]);
        assert_eq!(lebesgue_integral(&h, |v| v * v), 14.0);

        assert!(lebesgue_measure(&[], 3).is_err());
        assert!(lebesgue_measure(&[1.0], 0).is_err());
        assert!(LebesgueHistogram::with_edges(&[5.0], vec![1.0, 2.0]).is_err());
        assert!(LebesgueHistogram::with_edges(&[1.5], vec![2.0, 1.0]).is_err());
    }

    #[test]
    fn lebesgue_json_fields() {
        let h = lebesgue_measure(&[1.0, 2.0], 2).unwrap();
        let v = serde_json::to_value(&h).unwrap();
        assert!(v["bins"].is_array() && v["mu"].is_array());
    }
}
