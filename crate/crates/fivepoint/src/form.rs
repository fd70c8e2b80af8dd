//! The quadratic form associated with a finite metric.
//!
//! Fix points x_1..x_n and model them on the standard simplex: v_1..v_{n-1}
//! are the basis vectors of R^{n-1} and v_n = 0. The associated form W is
//! the unique quadratic form with W(v_i - v_j) = d(x_i, x_j)^2; explicitly
//! M[i][j] = (d(x_i,x_n)^2 + d(x_j,x_n)^2 - d(x_i,x_j)^2) / 2.
//! W is positive semidefinite exactly when the metric embeds in a Euclidean
//! space, and nonnegativity of W on the cone K_n (lines joining a facet
//! point of the simplex to the opposite vertex) is equivalent to the full
//! family of comparison inequalities checked in [`crate::comparison`].

use crate::metric::{FiniteMetric, Permutation};
use crate::tolerances::Tolerances;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Symmetric form on R^n, stored as the packed upper triangle (row major).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForm {
    n: usize,
    upper: Vec<f64>,
}

#[derive(Debug, Error, PartialEq)]
pub enum FormError {
    #[error("vector length {found} does not match form dimension {expected}")]
    DimensionMismatch { found: usize, expected: usize },
    #[error("simplex vector coefficients sum to {0:e}, not zero")]
    NotZeroSum(f64),
}

impl QuadraticForm {
    pub fn from_matrix(mat: &DMatrix<f64>) -> Self {
        assert_eq!(mat.nrows(), mat.ncols());
        let n = mat.nrows();
        let mut upper = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                // symmetrize exactly so round-trips cannot drift
                upper.push(0.5 * (mat[(i, j)] + mat[(j, i)]));
            }
        }
        QuadraticForm { n, upper }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[self.idx(i, j)]
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    /// v^T M v.
    pub fn evaluate(&self, v: &[f64]) -> Result<f64, FormError> {
        if v.len() != self.n {
            return Err(FormError::DimensionMismatch {
                found: v.len(),
                expected: self.n,
            });
        }
        let mut acc = 0.0;
        for i in 0..self.n {
            acc += self.get(i, i) * v[i] * v[i];
            for j in (i + 1)..self.n {
                acc += 2.0 * self.get(i, j) * v[i] * v[j];
            }
        }
        Ok(acc)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = self.to_matrix().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals
    }

    /// Positive semidefinite up to the relative eigenvalue floor.
    pub fn is_psd(&self, tol: &Tolerances) -> bool {
        let scale = self.upper.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        let floor = -tol.psd * scale.max(1e-300);
        self.eigenvalues().first().is_none_or(|&lo| lo >= floor)
    }
}

/// Direction in the affine hull of simplex vertices: coefficients beta_i of
/// sum beta_i v_i with sum beta_i = 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexVector {
    coeffs: Vec<f64>,
}

impl SimplexVector {
    pub fn new(coeffs: Vec<f64>, tol: &Tolerances) -> Result<Self, FormError> {
        let sum: f64 = coeffs.iter().sum();
        let scale = coeffs.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        if sum.abs() > tol.form * scale.max(1.0) {
            return Err(FormError::NotZeroSum(sum));
        }
        Ok(SimplexVector { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coordinates in the v-basis of R^{n-1}: drop the last coefficient
    /// (v_n = 0 carries no weight).
    pub fn to_basis_vector(&self) -> Vec<f64> {
        self.coeffs[..self.coeffs.len() - 1].to_vec()
    }
}

/// Membership in K_n: the union of lines joining a point of a facet of the
/// simplex with the opposite vertex. In coefficients, at most one beta_i is
/// strictly positive or at most one is strictly negative.
pub fn in_cone_kn(v: &SimplexVector, tol: &Tolerances) -> bool {
    let scale = v.coeffs.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let thr = tol.form * scale.max(1.0);
    let pos = v.coeffs.iter().filter(|&&x| x > thr).count();
    let neg = v.coeffs.iter().filter(|&&x| x < -thr).count();
    pos <= 1 || neg <= 1
}

/// Associated form of `m` under the given point ordering: position k of the
/// ordering names the point playing v_{k+1}; the last one sits at the
/// origin. Output dimension is n-1.
pub fn associated_form(m: &FiniteMetric, ordering: &Permutation) -> QuadraticForm {
    assert_eq!(ordering.n(), m.n());
    let n = m.n();
    let last = ordering.apply(n - 1);
    let sq = |i: usize, j: usize| {
        let d = m.d(i, j);
        d * d
    };
    let mut mat = DMatrix::zeros(n - 1, n - 1);
    for i in 0..n - 1 {
        let pi = ordering.apply(i);
        for j in i..n - 1 {
            let pj = ordering.apply(j);
            mat[(i, j)] = 0.5 * (sq(pi, last) + sq(pj, last) - sq(pi, pj));
            mat[(j, i)] = mat[(i, j)];
        }
    }
    QuadraticForm::from_matrix(&mat)
}
