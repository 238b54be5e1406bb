//! Dense complex square matrices: the representation of group and algebra
//! elements, plus the norms and linear solves every other module leans on.

use std::ops::{Add, Mul, Neg, Sub};

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// A dense n-by-n complex matrix.
///
/// Squareness and finiteness are enforced at construction; arithmetic on
/// already-validated values does not re-check.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    data: Array2<Complex64>,
}

impl ComplexMatrix {
    /// Wraps an `ndarray` matrix, rejecting non-square shapes and
    /// non-finite entries.
    pub fn new(data: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = data.dim();
        if rows != cols {
            return Err(CoreError::NotSquare { rows, cols });
        }
        let m = Self { data };
        if !m.is_finite() {
            return Err(CoreError::NotFinite);
        }
        Ok(m)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            data: Array2::zeros((n, n)),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: Array2::eye(n),
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        Self {
            data: Array2::from_shape_fn((n, n), |(i, j)| f(i, j)),
        }
    }

    /// Real matrix embedded into the complex type.
    pub fn from_real(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        Self::from_fn(n, |i, j| Complex64::new(f(i, j), 0.0))
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[[i, j]]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[[i, j]] = v;
    }

    pub fn as_array(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.t().mapv(|z| z.conj()),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.data.diag().sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            data: &self.data * Complex64::new(s, 0.0),
        }
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self {
            data: &self.data * s,
        }
    }

    /// Frobenius norm sqrt(sum |a_ij|^2).
    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm scaled by 1/sqrt(2), i.e. sqrt(tr(A A*)/2).
    ///
    /// On su(n) with the default normalization this agrees with the
    /// Killing inner-product norm, and it extends that norm to matrices
    /// outside the algebra (squares of algebra elements in particular).
    pub fn scaled_fro_norm(&self) -> f64 {
        self.fro_norm() / std::f64::consts::SQRT_2
    }

    /// Maximum column sum of entry moduli (operator 1-norm).
    pub fn one_norm(&self) -> f64 {
        let n = self.n();
        (0..n)
            .map(|j| (0..n).map(|i| self.data[[i, j]].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of the difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm of the difference.
    pub fn fro_dist(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ||A* A - I||_F; zero exactly when the matrix is unitary.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.adjoint().matmul(self);
        gram.fro_dist(&Self::identity(self.n()))
    }

    /// ||A* - (-A)||_F, the distance from the anti-Hermitian matrices.
    pub fn anti_hermitian_defect(&self) -> f64 {
        self.adjoint().fro_dist(&-self)
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        Self {
            data: self.data.dot(&rhs.data),
        }
    }

    /// Solves `self * X = rhs` by Gaussian elimination with partial
    /// pivoting. Small systems only; that is all this crate needs.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        let n = self.n();
        if rhs.n() != n {
            return Err(CoreError::DimensionMismatch {
                expected: n,
                got: rhs.n(),
            });
        }
        let mut a = self.data.clone();
        let mut x = rhs.data.clone();
        for col in 0..n {
            let mut piv_row = col;
            let mut piv_val = a[[col, col]].norm();
            for row in (col + 1)..n {
                let v = a[[row, col]].norm();
                if v > piv_val {
                    piv_val = v;
                    piv_row = row;
                }
            }
            if piv_val < 1e-300 {
                return Err(CoreError::Singular {
                    col,
                    pivot: piv_val,
                });
            }
            if piv_row != col {
                for j in 0..n {
                    a.swap([col, j], [piv_row, j]);
                    x.swap([col, j], [piv_row, j]);
                }
            }
            let pivot = a[[col, col]];
            for row in (col + 1)..n {
                let factor = a[[row, col]] / pivot;
                if factor.norm() == 0.0 {
                    continue;
                }
                for j in col..n {
                    let v = a[[col, j]];
                    a[[row, j]] -= factor * v;
                }
                for j in 0..n {
                    let v = x[[col, j]];
                    x[[row, j]] -= factor * v;
                }
            }
        }
        for col in (0..n).rev() {
            let pivot = a[[col, col]];
            for j in 0..n {
                let mut sum = x[[col, j]];
                for k in (col + 1)..n {
                    sum -= a[[col, k]] * x[[k, j]];
                }
                x[[col, j]] = sum / pivot;
            }
        }
        Ok(Self { data: x })
    }

    pub fn inverse(&self) -> Result<Self> {
        self.solve(&Self::identity(self.n()))
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data + &rhs.data,
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data - &rhs.data,
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix {
            data: self.data.mapv(|z| -z),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_square() {
        let a = Array2::<Complex64>::zeros((2, 3));
        assert!(matches!(
            ComplexMatrix::new(a),
            Err(CoreError::NotSquare { .. })
        ));
    }

    #[test]
    fn rejects_non_finite() {
        let mut a = Array2::<Complex64>::zeros((2, 2));
        a[[0, 1]] = c(f64::NAN, 0.0);
        assert!(matches!(
            ComplexMatrix::new(a),
            Err(CoreError::NotFinite)
        ));
    }

    #[test]
    fn unitarity_defect_of_identity_is_zero() {
        assert_eq!(ComplexMatrix::identity(3).unitarity_defect(), 0.0);
    }

    #[test]
    fn unitarity_defect_of_twice_identity() {
        // ||4I - I||_F = 3 sqrt(2) on 2x2.
        let m = ComplexMatrix::identity(2).scale(2.0);
        let d = m.unitarity_defect();
        assert!((d - 4.242640687119286).abs() < 1e-14, "defect {d}");
    }

    #[test]
    fn solve_recovers_inverse() {
        let a = ComplexMatrix::from_fn(3, |i, j| {
            c((1 + i * 3 + j) as f64, ((i + 2 * j) as f64) * 0.5)
        });
        // Shift the diagonal away from singularity.
        let a = &a + &ComplexMatrix::identity(3).scale(10.0);
        let inv = a.inverse().unwrap();
        let eye = a.matmul(&inv);
        assert!(eye.fro_dist(&ComplexMatrix::identity(3)) < 1e-13);
    }

    #[test]
    fn solve_reports_singular() {
        let a = ComplexMatrix::from_real(2, |i, _| if i == 0 { 1.0 } else { 0.0 });
        assert!(matches!(
            a.solve(&ComplexMatrix::identity(2)),
            Err(CoreError::Singular { .. })
        ));
    }

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let a = ComplexMatrix::from_fn(2, |i, j| c(i as f64, j as f64));
        let ad = a.adjoint();
        assert_eq!(ad.get(0, 1), c(1.0, -0.0));
        assert_eq!(ad.get(1, 0), c(0.0, -1.0));
    }
}
