//! Matrix exponential via scaling-and-squaring with a fixed Padé(13)
//! approximant, after Higham (2005). Fixed order keeps the kernel
//! branch-free and backward stable for the small dense matrices used here.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::matrix::ComplexMatrix;

/// Scaling threshold for the order-13 approximant (Higham 2005, Table 10.2).
const THETA_13: f64 = 5.371920351148152;

/// Padé(13,13) numerator coefficients b_0..b_13.
const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Computes exp(A).
///
/// For anti-Hermitian input the result is unitary to roundoff: the
/// diagonal Padé approximant maps the imaginary axis to the unit circle.
pub fn mat_exp(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_finite() {
        return Err(CoreError::NotFinite);
    }
    let n = a.n();
    if n == 0 {
        return Ok(ComplexMatrix::zeros(0));
    }

    let norm = a.one_norm();
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };

    let a_scaled = a.scale(0.5_f64.powi(s as i32));
    let mut r = pade13(&a_scaled)?;
    for _ in 0..s {
        r = r.matmul(&r);
    }
    if !r.is_finite() {
        return Err(CoreError::NotFinite);
    }
    Ok(r)
}

fn pade13(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.n();
    let eye = ComplexMatrix::identity(n);
    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a2.matmul(&a4);

    // U = A (A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    let w1 = &(&a6.scale_complex(c(PADE_13[13])) + &a4.scale_complex(c(PADE_13[11])))
        + &a2.scale_complex(c(PADE_13[9]));
    let w = &(&(&a6.matmul(&w1) + &a6.scale_complex(c(PADE_13[7])))
        + &a4.scale_complex(c(PADE_13[5])))
        + &(&a2.scale_complex(c(PADE_13[3])) + &eye.scale_complex(c(PADE_13[1])));
    let u = a.matmul(&w);

    // V = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    let z1 = &(&a6.scale_complex(c(PADE_13[12])) + &a4.scale_complex(c(PADE_13[10])))
        + &a2.scale_complex(c(PADE_13[8]));
    let v = &(&(&a6.matmul(&z1) + &a6.scale_complex(c(PADE_13[6])))
        + &a4.scale_complex(c(PADE_13[4])))
        + &(&a2.scale_complex(c(PADE_13[2])) + &eye.scale_complex(c(PADE_13[0])));

    // exp(A) ~= (V - U)^{-1} (V + U)
    let denom = &v - &u;
    let numer = &v + &u;
    denom.solve(&numer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn exp_of_zero_is_identity() {
        let e = mat_exp(&ComplexMatrix::zeros(2)).unwrap();
        assert_eq!(e.fro_dist(&ComplexMatrix::identity(2)), 0.0);
    }

    #[test]
    fn exp_of_i_pi_diagonal_is_minus_identity() {
        let a = ComplexMatrix::from_fn(2, |i, j| {
            if i != j {
                Complex64::new(0.0, 0.0)
            } else if i == 0 {
                Complex64::new(0.0, PI)
            } else {
                Complex64::new(0.0, -PI)
            }
        });
        let e = mat_exp(&a).unwrap();
        let minus_eye = ComplexMatrix::identity(2).scale(-1.0);
        assert!(e.fro_dist(&minus_eye) < 1e-13);
    }

    #[test]
    fn exp_of_nilpotent_terminates() {
        let a = ComplexMatrix::from_real(2, |i, j| if i == 0 && j == 1 { 1.0 } else { 0.0 });
        let e = mat_exp(&a).unwrap();
        let want = ComplexMatrix::from_real(2, |i, j| if i <= j { 1.0 } else { 0.0 });
        assert!(e.fro_dist(&want) < 1e-15);
    }

    #[test]
    fn exp_inverse_identity_at_large_norm() {
        // diag(4i, -4i, 2i) scaled so the Frobenius norm reaches 10.
        let d = [4.0, -4.0, 2.0];
        let a = ComplexMatrix::from_fn(3, |i, j| {
            if i == j {
                Complex64::new(0.0, d[i])
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let a = a.scale(10.0 / a.fro_norm());
        let fwd = mat_exp(&a).unwrap();
        let bwd = mat_exp(&a.scale(-1.0)).unwrap();
        assert!(fwd.matmul(&bwd).fro_dist(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn exp_of_anti_hermitian_is_unitary() {
        let a = ComplexMatrix::from_fn(3, |i, j| {
            let re = 0.3 * (i as f64 - j as f64);
            let im = 0.2 * (i + j) as f64 + if i == j { 0.5 } else { 0.0 };
            Complex64::new(re, im)
        });
        let skew = &a - &a.adjoint();
        let skew = skew.scale(0.5);
        let g = mat_exp(&skew).unwrap();
        assert!(g.unitarity_defect() < 1e-12);
    }

    #[test]
    fn rejects_non_finite_input() {
        let mut a = ComplexMatrix::zeros(2);
        a.set(0, 0, Complex64::new(f64::INFINITY, 0.0));
        assert!(matches!(mat_exp(&a), Err(CoreError::NotFinite)));
    }
}
