//! Generalized Gell-Mann construction of an su(n) basis.
//!
//! The Hermitian generalized Gell-Mann matrices come in three groups:
//! symmetric off-diagonal pairs, antisymmetric off-diagonal pairs, and
//! normalized traceless diagonals, all satisfying tr(l_j l_k) = 2 d_jk.
//! su(n) consists of anti-Hermitian matrices, so the returned basis is
//! i*l_k; the diagonal group comes last and spans the Cartan subalgebra
//! of the diagonal maximal torus.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::matrix::ComplexMatrix;

/// Returns the n^2 - 1 anti-Hermitian basis matrices i*l_k of su(n),
/// ordered as symmetric pairs, antisymmetric pairs, then diagonals.
pub fn gell_mann_basis(n: usize) -> Result<Vec<ComplexMatrix>> {
    if n < 2 {
        return Err(CoreError::InvalidSuRank(n));
    }
    let mut basis = Vec::with_capacity(n * n - 1);

    // i * (E_jk + E_kj): entry i at (j,k) and (k,j).
    for j in 0..n {
        for k in (j + 1)..n {
            let mut m = ComplexMatrix::zeros(n);
            m.set(j, k, Complex64::new(0.0, 1.0));
            m.set(k, j, Complex64::new(0.0, 1.0));
            basis.push(m);
        }
    }

    // i * (-i)(E_jk - E_kj) = E_jk - E_kj: entries +1 at (j,k), -1 at (k,j).
    for j in 0..n {
        for k in (j + 1)..n {
            let mut m = ComplexMatrix::zeros(n);
            m.set(j, k, Complex64::new(1.0, 0.0));
            m.set(k, j, Complex64::new(-1.0, 0.0));
            basis.push(m);
        }
    }

    // i * sqrt(2/(l(l+1))) diag(1,..,1,-l,0,..,0) with l leading ones.
    for l in 1..n {
        let scale = (2.0 / (l as f64 * (l + 1) as f64)).sqrt();
        let mut m = ComplexMatrix::zeros(n);
        for j in 0..l {
            m.set(j, j, Complex64::new(0.0, scale));
        }
        m.set(l, l, Complex64::new(0.0, -scale * l as f64));
        basis.push(m);
    }

    Ok(basis)
}

/// Indices of the Cartan (diagonal) elements within [`gell_mann_basis`].
pub fn gell_mann_cartan_indices(n: usize) -> Vec<usize> {
    let dim = n * n - 1;
    ((dim - (n - 1))..dim).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_is_i_times_pauli() {
        let basis = gell_mann_basis(2).unwrap();
        assert_eq!(basis.len(), 3);
        let i = Complex64::new(0.0, 1.0);
        let zero = Complex64::new(0.0, 0.0);
        // i*sigma_1
        assert_eq!(basis[0].get(0, 1), i);
        assert_eq!(basis[0].get(1, 0), i);
        assert_eq!(basis[0].get(0, 0), zero);
        // i*sigma_2 = [[0,1],[-1,0]]
        assert_eq!(basis[1].get(0, 1), Complex64::new(1.0, 0.0));
        assert_eq!(basis[1].get(1, 0), Complex64::new(-1.0, 0.0));
        // i*sigma_3
        assert_eq!(basis[2].get(0, 0), i);
        assert_eq!(basis[2].get(1, 1), -i);
        assert_eq!(gell_mann_cartan_indices(2), vec![2]);
    }

    #[test]
    fn rejects_rank_below_two() {
        assert!(matches!(
            gell_mann_basis(1),
            Err(CoreError::InvalidSuRank(1))
        ));
    }

    #[test]
    fn count_tracelessness_and_trace_orthogonality() {
        for n in 2..=6 {
            let basis = gell_mann_basis(n).unwrap();
            assert_eq!(basis.len(), n * n - 1);
            for (k, b) in basis.iter().enumerate() {
                assert!(b.trace().norm() < 1e-14, "n={n} k={k} not traceless");
                assert!(b.anti_hermitian_defect() < 1e-14);
            }
            // For B = i*l: tr(B_j B_k) = -tr(l_j l_k) = -2 d_jk.
            for j in 0..basis.len() {
                for k in 0..basis.len() {
                    let t = basis[j].matmul(&basis[k]).trace();
                    let want = if j == k { -2.0 } else { 0.0 };
                    assert!(
                        (t.re - want).abs() < 1e-13 && t.im.abs() < 1e-13,
                        "n={n} ({j},{k}): {t}"
                    );
                }
            }
        }
    }

    #[test]
    fn cartan_block_is_diagonal_and_commutes() {
        let basis = gell_mann_basis(4).unwrap();
        for &i in &gell_mann_cartan_indices(4) {
            for &j in &gell_mann_cartan_indices(4) {
                let bi = &basis[i];
                let bj = &basis[j];
                let comm = &bi.matmul(bj) - &bj.matmul(bi);
                assert_eq!(comm.fro_norm(), 0.0);
            }
        }
    }
}
