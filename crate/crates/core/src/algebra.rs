//! Concrete compact Lie algebras: basis and coordinates, bracket, the two
//! adjoint representations, the Killing-form inner product, and the
//! orthogonal split into Cartan and horizontal parts.

use std::ops::{Add, Neg, Sub};

use ndarray::{Array1, Array2};

use crate::config::ToleranceConfig;
use crate::error::{CoreError, Result};
use crate::gell_mann::{gell_mann_basis, gell_mann_cartan_indices};
use crate::matrix::ComplexMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraFamily {
    /// su(n): traceless anti-Hermitian matrices.
    SpecialUnitary,
    /// User-supplied basis, validated numerically.
    Custom,
}

/// A concrete compact Lie algebra with a fixed basis, a Killing-form inner
/// product scaled by `rho`, and a marked Cartan subalgebra.
///
/// Immutable after construction; every derived quantity (Gram matrices,
/// adjoint matrices of the basis, Cholesky factors) is precomputed here.
#[derive(Clone, Debug)]
pub struct LieAlgebraSpec {
    family: AlgebraFamily,
    n: usize,
    dim: usize,
    basis: Vec<ComplexMatrix>,
    rho: f64,
    cartan_indices: Vec<usize>,
    /// Cholesky factor of the Frobenius Gram matrix; coordinates are
    /// recovered through this, independently of the algebra inner product.
    frob_chol: Array2<f64>,
    /// ad(B_i) as dim-by-dim real matrices.
    basis_ad: Vec<Array2<f64>>,
    /// Gram matrix of the inner product <X,Y> = -rho K(X,Y).
    ip_gram: Array2<f64>,
    /// Cholesky factor of the Cartan block of `ip_gram`.
    cartan_chol: Array2<f64>,
}

/// An algebra element carried in both representations: as a matrix and as
/// coordinates in the owning spec's basis.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    matrix: ComplexMatrix,
    coords: Vec<f64>,
}

impl AlgebraElement {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            matrix: self.matrix.scale(s),
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            matrix: &self.matrix + &rhs.matrix,
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            matrix: &self.matrix - &rhs.matrix,
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(-1.0)
    }
}

/// An element split as X = H + T with H orthogonal to the Cartan part T.
#[derive(Clone, Debug)]
pub struct CartanSplit {
    pub horizontal: AlgebraElement,
    pub cartan: AlgebraElement,
}

/// Cholesky with a relative pivot floor: a pivot below `1e-12` times the
/// matching diagonal entry counts as rank deficiency. Returns the
/// offending pivot on failure.
fn cholesky(a: &Array2<f64>) -> std::result::Result<Array2<f64>, f64> {
    let n = a.nrows();
    let mut l = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[[i, j]];
            for k in 0..j {
                sum -= l[[i, k]] * l[[j, k]];
            }
            if i == j {
                let floor = 1e-12 * a[[i, i]].abs().max(f64::MIN_POSITIVE);
                if sum <= floor {
                    return Err(sum);
                }
                l[[i, j]] = sum.sqrt();
            } else {
                l[[i, j]] = sum / l[[j, j]];
            }
        }
    }
    Ok(l)
}

fn chol_solve(l: &Array2<f64>, b: &[f64]) -> Vec<f64> {
    let n = l.nrows();
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[[i, k]] * y[k];
        }
        y[i] = sum / l[[i, i]];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = y[i];
        for k in (i + 1)..n {
            sum -= l[[k, i]] * x[k];
        }
        x[i] = sum / l[[i, i]];
    }
    x
}

/// Re tr(A* B), the real Frobenius pairing.
fn frob_pairing(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.as_array()
        .iter()
        .zip(b.as_array().iter())
        .map(|(x, y)| (x.conj() * y).re)
        .sum()
}

impl LieAlgebraSpec {
    /// su(n) with the default normalization rho = 1/(4n), which gives
    /// <X,Y> = -tr(XY)/2 and makes the Gell-Mann-derived basis orthonormal.
    pub fn su(n: usize) -> Result<Self> {
        Self::su_with_rho(n, 1.0 / (4.0 * n as f64))
    }

    pub fn su_with_rho(n: usize, rho: f64) -> Result<Self> {
        let basis = gell_mann_basis(n)?;
        let cartan = gell_mann_cartan_indices(n);
        Self::build(
            AlgebraFamily::SpecialUnitary,
            n,
            basis,
            cartan,
            rho,
            &ToleranceConfig::default(),
        )
    }

    /// A user-supplied algebra. The basis must be anti-Hermitian and
    /// linearly independent, the marked Cartan subset commutative and
    /// maximal among the basis elements, and the Killing form definite.
    pub fn custom(
        basis: Vec<ComplexMatrix>,
        cartan_indices: Vec<usize>,
        rho: f64,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        let n = basis.first().map(|b| b.n()).unwrap_or(0);
        Self::build(AlgebraFamily::Custom, n, basis, cartan_indices, rho, cfg)
    }

    fn build(
        family: AlgebraFamily,
        n: usize,
        basis: Vec<ComplexMatrix>,
        cartan_indices: Vec<usize>,
        rho: f64,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        if rho.is_nan() || rho <= 0.0 {
            return Err(CoreError::InvalidConfig(format!(
                "rho must be > 0, got {rho}"
            )));
        }
        let dim = basis.len();
        if dim == 0 {
            return Err(CoreError::InvalidConfig("empty basis".into()));
        }
        for (index, b) in basis.iter().enumerate() {
            if b.n() != n {
                return Err(CoreError::DimensionMismatch {
                    expected: n,
                    got: b.n(),
                });
            }
            let tol = cfg.abs_tol.max(1e-12) * b.fro_norm().max(1.0);
            let skew = b.anti_hermitian_defect();
            if skew > tol {
                return Err(CoreError::InvalidBasisElement {
                    index,
                    property: "anti-Hermitian",
                    defect: skew,
                });
            }
            if family == AlgebraFamily::SpecialUnitary {
                let tr = b.trace().norm();
                if tr > tol {
                    return Err(CoreError::InvalidBasisElement {
                        index,
                        property: "traceless",
                        defect: tr,
                    });
                }
            }
        }

        // Frobenius Gram matrix; nonsingularity is linear independence.
        let mut frob = Array2::<f64>::zeros((dim, dim));
        for i in 0..dim {
            for j in 0..dim {
                frob[[i, j]] = frob_pairing(&basis[i], &basis[j]);
            }
        }
        let frob_chol = cholesky(&frob).map_err(|pivot| CoreError::DependentBasis { pivot })?;

        // ad(B_i): column j holds the coordinates of [B_i, B_j].
        let coords_of = |m: &ComplexMatrix| -> Vec<f64> {
            let rhs: Vec<f64> = basis.iter().map(|b| frob_pairing(b, m)).collect();
            chol_solve(&frob_chol, &rhs)
        };
        let mut basis_ad = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut ad = Array2::<f64>::zeros((dim, dim));
            for j in 0..dim {
                let comm = &basis[i].matmul(&basis[j]) - &basis[j].matmul(&basis[i]);
                for (row, v) in coords_of(&comm).into_iter().enumerate() {
                    ad[[row, j]] = v;
                }
            }
            basis_ad.push(ad);
        }

        // Inner-product Gram: -rho tr(ad B_i . ad B_j).
        let mut ip_gram = Array2::<f64>::zeros((dim, dim));
        for i in 0..dim {
            for j in 0..=i {
                let mut k = 0.0;
                for p in 0..dim {
                    for q in 0..dim {
                        k += basis_ad[i][[p, q]] * basis_ad[j][[q, p]];
                    }
                }
                ip_gram[[i, j]] = -rho * k;
                ip_gram[[j, i]] = -rho * k;
            }
        }
        cholesky(&ip_gram).map_err(|_| CoreError::DegenerateKillingForm)?;

        // Cartan subset: in range, commutative, maximal among the basis.
        if cartan_indices.is_empty() {
            return Err(CoreError::EmptyCartanSet);
        }
        for &i in &cartan_indices {
            if i >= dim {
                return Err(CoreError::CartanIndexOutOfRange(i));
            }
        }
        let comm_tol = |a: &ComplexMatrix, b: &ComplexMatrix| {
            cfg.abs_tol.max(1e-12) * (a.fro_norm() * b.fro_norm()).max(1.0)
        };
        for (pos, &i) in cartan_indices.iter().enumerate() {
            for &j in &cartan_indices[(pos + 1)..] {
                let comm = &basis[i].matmul(&basis[j]) - &basis[j].matmul(&basis[i]);
                let defect = comm.fro_norm();
                if defect > comm_tol(&basis[i], &basis[j]) {
                    return Err(CoreError::CartanNotCommutative { i, j, defect });
                }
            }
        }
        for j in 0..dim {
            if cartan_indices.contains(&j) {
                continue;
            }
            let commutes_with_all = cartan_indices.iter().all(|&i| {
                let comm = &basis[j].matmul(&basis[i]) - &basis[i].matmul(&basis[j]);
                comm.fro_norm() <= comm_tol(&basis[j], &basis[i])
            });
            if commutes_with_all {
                return Err(CoreError::CartanNotMaximal { index: j });
            }
        }

        let mut cartan_gram = Array2::<f64>::zeros((cartan_indices.len(), cartan_indices.len()));
        for (a, &i) in cartan_indices.iter().enumerate() {
            for (b, &j) in cartan_indices.iter().enumerate() {
                cartan_gram[[a, b]] = ip_gram[[i, j]];
            }
        }
        let cartan_chol = cholesky(&cartan_gram).map_err(|_| CoreError::DegenerateCartanGram)?;

        Ok(Self {
            family,
            n,
            dim,
            basis,
            rho,
            cartan_indices,
            frob_chol,
            basis_ad,
            ip_gram,
            cartan_chol,
        })
    }

    pub fn family(&self) -> AlgebraFamily {
        self.family
    }

    /// Matrix side length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Algebra dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    pub fn cartan_indices(&self) -> &[usize] {
        &self.cartan_indices
    }

    pub fn basis_element(&self, i: usize) -> Result<AlgebraElement> {
        if i >= self.dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.dim,
                got: i,
            });
        }
        let mut coords = vec![0.0; self.dim];
        coords[i] = 1.0;
        self.element_from_coords(&coords)
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            matrix: ComplexMatrix::zeros(self.n),
            coords: vec![0.0; self.dim],
        }
    }

    /// Builds an element from basis coordinates; the matrix is the
    /// coordinate sum in fixed index order.
    pub fn element_from_coords(&self, coords: &[f64]) -> Result<AlgebraElement> {
        if coords.len() != self.dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.dim,
                got: coords.len(),
            });
        }
        let mut m = ComplexMatrix::zeros(self.n);
        for (c, b) in coords.iter().zip(&self.basis) {
            if *c != 0.0 {
                m = &m + &b.scale(*c);
            }
        }
        Ok(AlgebraElement {
            matrix: m,
            coords: coords.to_vec(),
        })
    }

    /// Coordinates of an arbitrary matrix against the basis (least-squares
    /// through the Frobenius Gram system; exact for matrices in the span).
    pub fn coords_of(&self, m: &ComplexMatrix) -> Result<Vec<f64>> {
        if m.n() != self.n {
            return Err(CoreError::DimensionMismatch {
                expected: self.n,
                got: m.n(),
            });
        }
        let rhs: Vec<f64> = self.basis.iter().map(|b| frob_pairing(b, m)).collect();
        Ok(chol_solve(&self.frob_chol, &rhs))
    }

    /// Interprets a matrix as an algebra element, rejecting it when its
    /// distance from the span exceeds `abs_tol` (relative to its size).
    pub fn element_from_matrix(
        &self,
        m: &ComplexMatrix,
        cfg: &ToleranceConfig,
    ) -> Result<AlgebraElement> {
        let coords = self.coords_of(m)?;
        let rebuilt = self.element_from_coords(&coords)?;
        let residual = rebuilt.matrix.fro_dist(m);
        if residual > cfg.abs_tol * m.fro_norm().max(1.0) {
            return Err(CoreError::NotInAlgebra { residual });
        }
        Ok(AlgebraElement {
            matrix: m.clone(),
            coords,
        })
    }

    /// Wraps a matrix known to lie in the span (bracket and Ad images);
    /// coordinates are projected, the matrix is kept as computed.
    fn element_unchecked(&self, m: ComplexMatrix) -> Result<AlgebraElement> {
        let coords = self.coords_of(&m)?;
        Ok(AlgebraElement { matrix: m, coords })
    }

    pub(crate) fn element_projected(&self, m: ComplexMatrix) -> Result<AlgebraElement> {
        self.element_unchecked(m)
    }

    fn check_member(&self, x: &AlgebraElement) -> Result<()> {
        if x.coords.len() != self.dim || x.matrix.n() != self.n {
            return Err(CoreError::DimensionMismatch {
                expected: self.dim,
                got: x.coords.len(),
            });
        }
        Ok(())
    }

    /// [X, Y] = XY - YX.
    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_member(x)?;
        self.check_member(y)?;
        let m = &x.matrix.matmul(&y.matrix) - &y.matrix.matmul(&x.matrix);
        self.element_unchecked(m)
    }

    /// The matrix of ad X = [X, .] in this basis.
    pub fn ad_matrix(&self, x: &AlgebraElement) -> Result<Array2<f64>> {
        self.check_member(x)?;
        let mut ad = Array2::<f64>::zeros((self.dim, self.dim));
        for (c, ad_i) in x.coords.iter().zip(&self.basis_ad) {
            if *c != 0.0 {
                ad.scaled_add(*c, ad_i);
            }
        }
        Ok(ad)
    }

    /// Ad(g)(X) = g X g^{-1}.
    pub fn adjoint_action(&self, g: &ComplexMatrix, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_member(x)?;
        if g.n() != self.n {
            return Err(CoreError::DimensionMismatch {
                expected: self.n,
                got: g.n(),
            });
        }
        let g_inv = g.inverse()?;
        let m = g.matmul(&x.matrix).matmul(&g_inv);
        self.element_unchecked(m)
    }

    /// K(X,Y) = tr(ad X . ad Y).
    pub fn killing_form(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
        let ad_x = self.ad_matrix(x)?;
        let ad_y = self.ad_matrix(y)?;
        let mut k = 0.0;
        for p in 0..self.dim {
            for q in 0..self.dim {
                k += ad_x[[p, q]] * ad_y[[q, p]];
            }
        }
        Ok(k)
    }

    /// <X,Y> = -rho K(X,Y).
    pub fn inner_product(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
        Ok(-self.rho * self.killing_form(x, y)?)
    }

    /// The induced norm; clamped at zero against roundoff on tiny elements.
    pub fn norm(&self, x: &AlgebraElement) -> Result<f64> {
        Ok(self.inner_product(x, x)?.max(0.0).sqrt())
    }

    /// Splits X = H + T with T the inner-product-orthogonal projection
    /// onto the Cartan span. Works in coordinates, so the two parts
    /// reassemble to the input coordinates exactly.
    pub fn cartan_split(&self, x: &AlgebraElement) -> Result<CartanSplit> {
        self.check_member(x)?;
        let c = Array1::from(x.coords.clone());
        let gc = self.ip_gram.dot(&c);
        let rhs: Vec<f64> = self.cartan_indices.iter().map(|&i| gc[i]).collect();
        let t_sub = chol_solve(&self.cartan_chol, &rhs);
        let mut t_coords = vec![0.0; self.dim];
        for (slot, &i) in self.cartan_indices.iter().enumerate() {
            t_coords[i] = t_sub[slot];
        }
        let h_coords: Vec<f64> = x
            .coords
            .iter()
            .zip(&t_coords)
            .map(|(c, t)| c - t)
            .collect();
        Ok(CartanSplit {
            horizontal: self.element_from_coords(&h_coords)?,
            cartan: self.element_from_coords(&t_coords)?,
        })
    }
}
