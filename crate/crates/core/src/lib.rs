//! Function and image reconstruction from polynomial moments.
//!
//! Vector moments `<f Q_m>` of a feature `f` are accumulated over a measure
//! (Gauss-Legendre nodes in 1D, a pixel grid in 2D). Product linearization
//! turns them into the matrix moments `F = <f Q_j Q_k>` and the Gramm matrix
//! `G = <Q_j Q_k>`, from which [`approx`] builds the least-squares and
//! Radon-Nikodym estimators, Spur averages and the natural basis.
//!
//! ```
//! use rnapprox::{gauss_legendre_measure, BasisKind, MomentSet, Reconstructor};
//!
//! let mu = gauss_legendre_measure(200).unwrap();
//! let runge = |x: f64| 1.0 / (1.0 + 25.0 * x * x);
//! let ms = MomentSet::from_function_1d(runge, &mu, BasisKind::chebyshev(), 7).unwrap();
//! let r = Reconstructor::new(&ms).unwrap();
//! // The ratio estimator stays within the range of f, even far outside [-1, 1].
//! assert!(r.eval_rn(3.0) <= 1.0 && r.eval_rn(3.0) >= 1.0 / 26.0);
//! ```

pub mod approx;
pub mod basis;
pub mod error;
pub mod image;
pub mod linalg;
pub mod moments;
pub mod par;

#[cfg(feature = "parallel")]
pub use rayon;

pub use approx::{
    build_reconstructor, differentiate_reconstruction, lebesgue_integral, lebesgue_measure, natural_basis,
    reconstruct_derivative_1d, spur_average, spur_product_average, LebesgueHistogram, Method, NaturalBasis, Point,
    Reconstruction, Reconstructor,
};
pub use basis::{BasisKind, CoeffVector, Domain, Family};
pub use error::{Error, Result};
pub use image::{image_metrics, read_pgm, write_pgm, GrayImage, ImageMetrics};
pub use linalg::{cholesky, generalized_sym_eig, GeneralizedEig, Matrix, SpdFactor};
pub use moments::{
    derivative_moments_1d, gauss_legendre_measure, gramm_from_vector, matrix_moments_from_vector, vector_moments_1d,
    vector_moments_2d, Dims, Measure1D, MomentSet, PixelMeasure2D, VectorMoments, DEFAULT_QUAD_NODES,
};
