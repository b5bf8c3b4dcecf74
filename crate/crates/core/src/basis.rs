//! Orthogonal polynomial families, point evaluation and product linearization.
//!
//! Products `Q_j Q_k` are expanded back into the same family so that matrix
//! moments `<f Q_j Q_k>` can be assembled from the vector moments `<f Q_m>`
//! without ever leaving the basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Chebyshev,
    Legendre,
}

/// Argument mapping applied before the recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    /// `Q_k(x) = P_k(x)`, orthogonality interval `[-1, 1]`.
    Native,
    /// `Q_k(x) = P_k(2x - 1)`, orthogonality interval `[0, 1]`.
    Shifted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisKind {
    pub family: Family,
    pub domain: Domain,
}

impl BasisKind {
    pub const fn new(family: Family, domain: Domain) -> Self {
        Self { family, domain }
    }

    pub const fn chebyshev() -> Self {
        Self::new(Family::Chebyshev, Domain::Native)
    }

    pub const fn legendre() -> Self {
        Self::new(Family::Legendre, Domain::Native)
    }

    pub const fn shifted(self) -> Self {
        Self::new(self.family, Domain::Shifted)
    }

    /// Maps a user coordinate onto the recurrence argument.
    #[inline]
    pub fn map_arg(&self, x: f64) -> f64 {
        match self.domain {
            Domain::Native => x,
            Domain::Shifted => 2.0 * x - 1.0,
        }
    }

    /// `[Q_0(x), ..., Q_{n-1}(x)]`.
    pub fn evaluate_all(&self, n: usize, x: f64) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::EmptyRequest("basis size must be at least 1"));
        }
        let mut out = vec![0.0; n];
        self.evaluate_into(x, &mut out);
        Ok(out)
    }

    /// Writes `Q_0(x)..Q_{out.len()-1}(x)` into `out`.
    pub fn evaluate_into(&self, x: f64, out: &mut [f64]) {
        let n = out.len();
        if n == 0 {
            return;
        }
        let t = self.map_arg(x);
        out[0] = 1.0;
        if n == 1 {
            return;
        }
        out[1] = t;
        match self.family {
            Family::Chebyshev => {
                for k in 1..n - 1 {
                    out[k + 1] = 2.0 * t * out[k] - out[k - 1];
                }
            }
            Family::Legendre => {
                for k in 1..n - 1 {
                    let kf = k as f64;
                    out[k + 1] = ((2.0 * kf + 1.0) * t * out[k] - kf * out[k - 1]) / (kf + 1.0);
                }
            }
        }
    }

    /// Coefficients `a_m` with `Q_j Q_k = sum_m a_m Q_m`, dense of length `j + k + 1`.
    pub fn linearize_product(&self, j: usize, k: usize) -> CoeffVector {
        let mut coeffs = vec![0.0; j + k + 1];
        for (m, a) in self.product_terms(j, k) {
            coeffs[m] += a;
        }
        CoeffVector { basis: *self, coeffs }
    }

    /// Nonzero terms `(m, a_m)` of the product expansion of `Q_j Q_k`.
    pub fn product_terms(&self, j: usize, k: usize) -> Vec<(usize, f64)> {
        match self.family {
            Family::Chebyshev => {
                if j == 0 || k == 0 {
                    vec![(j + k, 1.0)]
                } else {
                    vec![(j.abs_diff(k), 0.5), (j + k, 0.5)]
                }
            }
            Family::Legendre => legendre_product_terms(j, k),
        }
    }
}

// Adams-Neumann linearization, with A(n) = (2n-1)!! / n!:
// P_j P_k = sum_{r=0}^{min(j,k)} A(r) A(j-r) A(k-r) / A(j+k-r)
//           * (2j + 2k - 4r + 1) / (2j + 2k - 2r + 1) * P_{j+k-2r}
fn legendre_product_terms(j: usize, k: usize) -> Vec<(usize, f64)> {
    let lo = j.min(k);
    // Ratio recurrence keeps A(n) ~ 1/sqrt(pi n) in range at any order.
    let lambda: Vec<f64> = (0..=j + k)
        .scan(1.0, |acc, i| {
            if i > 0 {
                *acc *= (2 * i - 1) as f64 / i as f64;
            }
            Some(*acc)
        })
        .collect();

    let mut terms = Vec::with_capacity(lo + 1);
    for r in (0..=lo).rev() {
        let s = (j + k) as f64;
        let rf = r as f64;
        let a = lambda[r] * lambda[j - r] * lambda[k - r] / lambda[j + k - r] * (2.0 * s - 4.0 * rf + 1.0)
            / (2.0 * s - 2.0 * rf + 1.0);
        terms.push((j + k - 2 * r, a));
    }
    terms
}

/// Clenshaw coefficients `(alpha_k(t), beta_k)`.
type Recurrence = (fn(usize, f64) -> f64, fn(usize) -> f64);

/// A finite expansion `sum_k c_k Q_k(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffVector {
    pub basis: BasisKind,
    pub coeffs: Vec<f64>,
}

impl CoeffVector {
    pub fn new(basis: BasisKind, coeffs: Vec<f64>) -> Self {
        Self { basis, coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Clenshaw summation of the expansion at `x`.
    pub fn evaluate(&self, x: f64) -> f64 {
        let c = &self.coeffs;
        let n = c.len();
        if n == 0 {
            return 0.0;
        }
        let t = self.basis.map_arg(x);
        // Q_{k+1} = alpha_k Q_k + beta_k Q_{k-1}, k >= 1; Q_1 = t.
        let (alpha, beta): Recurrence = match self.basis.family {
            Family::Chebyshev => (|_, t| 2.0 * t, |_| -1.0),
            Family::Legendre => (
                |k, t| (2 * k + 1) as f64 * t / (k + 1) as f64,
                |k| -(k as f64) / (k + 1) as f64,
            ),
        };
        let (mut b1, mut b2) = (0.0, 0.0);
        for k in (1..n).rev() {
            let b = c[k] + alpha(k, t) * b1 + beta(k + 1) * b2;
            b2 = b1;
            b1 = b;
        }
        c[0] + t * b1 + beta(1) * b2
    }
}
