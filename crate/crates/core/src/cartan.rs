//! The Cartan exponential map and flow, the sub-Riemannian geodesics they
//! parametrize, their constant speed and curvature, and the differential
//! at zero; plus the Riemannian comparison geodesics.
//!
//! Everything factors through the orthogonal split X = H + T: the same
//! split always produces the same outputs, whichever representative of
//! X was supplied.

use crate::algebra::{AlgebraElement, CartanSplit, LieAlgebraSpec};
use crate::config::ToleranceConfig;
use crate::error::{CoreError, Result};
use crate::expm::mat_exp;
use crate::flow::{flow_ode_on_grid, FlowTrace, TimeDependentField};
use crate::matrix::ComplexMatrix;

/// Central-difference step for the curvature oracle: O(h^2) truncation
/// against 1e-16/h roundoff lands near 1e-8 accuracy at h = 1e-4.
const CURVATURE_FD_STEP: f64 = 1e-4;

/// Interior samples receiving a finite-difference curvature estimate.
const CURVATURE_FD_POINTS: usize = 5;

/// A sampled geodesic through the identity with per-sample diagnostics.
#[derive(Clone, Debug)]
pub struct GeodesicTrace {
    pub times: Vec<f64>,
    pub elements: Vec<ComplexMatrix>,
    /// Left-translated velocities sigma^{-1} sigma' as algebra elements.
    pub body_tangents: Vec<AlgebraElement>,
    pub speeds: Vec<f64>,
    /// Norm of the Cartan component of each body tangent.
    pub horizontality_defects: Vec<f64>,
    /// Closed-form constant curvature; `None` for degenerate geodesics.
    pub curvature: Option<f64>,
    /// Finite-difference curvature estimates at selected interior samples.
    pub curvature_fd: Vec<Option<f64>>,
}

impl GeodesicTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_horizontality_defect(&self) -> f64 {
        self.horizontality_defects
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }

    /// Largest relative deviation between sampled speeds.
    pub fn speed_spread(&self) -> f64 {
        let max = self.speeds.iter().cloned().fold(f64::MIN, f64::max);
        let min = self.speeds.iter().cloned().fold(f64::MAX, f64::min);
        if max <= 0.0 {
            0.0
        } else {
            (max - min) / max.max(1e-300)
        }
    }
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || !grid.iter().all(|t| t.is_finite()) {
        return Err(CoreError::InvalidGrid);
    }
    if grid[0] != 0.0 {
        return Err(CoreError::GridNotAtZero(grid[0]));
    }
    let increasing = grid.windows(2).all(|w| w[1] > w[0]);
    let decreasing = grid.windows(2).all(|w| w[1] < w[0]);
    if grid.len() > 1 && !increasing && !decreasing {
        return Err(CoreError::InvalidGrid);
    }
    Ok(())
}

/// The Cartan exponential: split X = H + T and return e^X e^{-T},
/// with X reassembled from the split so the result depends on X only
/// through (H, T).
pub fn hexp(spec: &LieAlgebraSpec, x: &AlgebraElement) -> Result<ComplexMatrix> {
    let split = spec.cartan_split(x)?;
    hexp_from_split(&split)
}

fn hexp_from_split(split: &CartanSplit) -> Result<ComplexMatrix> {
    let xm = split.horizontal.matrix() + split.cartan.matrix();
    let tm = split.cartan.matrix();
    Ok(mat_exp(&xm)?.matmul(&mat_exp(&tm.scale(-1.0))?))
}

/// The Cartan exponential flow: the right chronological exponential of
/// s -> Ad(e^{sT})(H), traced on `grid`. Pointwise equal to e^{tX} e^{-tT}.
pub fn hexp_flow_on_grid(
    spec: &LieAlgebraSpec,
    x: &AlgebraElement,
    grid: &[f64],
    cfg: &ToleranceConfig,
) -> Result<FlowTrace> {
    let split = spec.cartan_split(x)?;
    let h_norm = split.horizontal.matrix().fro_norm();
    let field = TimeDependentField::conjugated(split.cartan.matrix(), split.horizontal.matrix());
    // Conjugation by a unitary preserves the Frobenius norm.
    let field = field.with_norm_bound(move |_| h_norm);
    flow_ode_on_grid(&field, grid, cfg)
}

/// [`hexp_flow_on_grid`] on a default 33-point grid over [0, t_end].
pub fn hexp_flow(
    spec: &LieAlgebraSpec,
    x: &AlgebraElement,
    t_end: f64,
    cfg: &ToleranceConfig,
) -> Result<FlowTrace> {
    let grid: Vec<f64> = if t_end == 0.0 {
        vec![0.0]
    } else {
        (0..33).map(|i| t_end * i as f64 / 32.0).collect()
    };
    hexp_flow_on_grid(spec, x, &grid, cfg)
}

/// Speed of the geodesic through X: the inner-product norm of the
/// horizontal part.
pub fn geodesic_speed(spec: &LieAlgebraSpec, x: &AlgebraElement) -> Result<f64> {
    let split = spec.cartan_split(x)?;
    spec.norm(&split.horizontal)
}

/// Constant curvature ||H^2 - [H,T]|| / ||H||^2. The numerator leaves the
/// algebra, so it is measured in the scaled Frobenius extension of the
/// inner-product norm; the denominator is the algebra norm.
pub fn geodesic_curvature(
    spec: &LieAlgebraSpec,
    x: &AlgebraElement,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    let split = spec.cartan_split(x)?;
    let h_norm = spec.norm(&split.horizontal)?;
    if h_norm <= cfg.abs_tol {
        return Err(CoreError::DegenerateGeodesic { norm: h_norm });
    }
    Ok(curvature_from_split(&split, h_norm))
}

fn curvature_from_split(split: &CartanSplit, h_norm: f64) -> f64 {
    let hm = split.horizontal.matrix();
    let tm = split.cartan.matrix();
    let h_sq = hm.matmul(hm);
    let comm = &hm.matmul(tm) - &tm.matmul(hm);
    (&h_sq - &comm).scaled_fro_norm() / (h_norm * h_norm)
}

/// The differential of the Cartan exponential at 0: the orthogonal
/// projection onto the horizontal subspace.
pub fn d_hexp_at_zero(spec: &LieAlgebraSpec, x: &AlgebraElement) -> Result<AlgebraElement> {
    Ok(spec.cartan_split(x)?.horizontal)
}

/// Samples the sub-Riemannian geodesic sigma(t) = e^{tX} e^{-tT} on
/// `grid`, with analytic body tangents e^{tT} H e^{-tT}, speeds,
/// horizontality diagnostics, and both curvature routes.
pub fn geodesic(
    spec: &LieAlgebraSpec,
    x: &AlgebraElement,
    grid: &[f64],
    cfg: &ToleranceConfig,
) -> Result<GeodesicTrace> {
    cfg.validate()?;
    validate_grid(grid)?;
    let split = spec.cartan_split(x)?;
    let xm = split.horizontal.matrix() + split.cartan.matrix();
    let tm = split.cartan.matrix().clone();
    let hm = split.horizontal.matrix().clone();
    let h_norm = spec.norm(&split.horizontal)?;
    let degenerate = h_norm <= cfg.abs_tol;

    let mut elements = Vec::with_capacity(grid.len());
    let mut body_tangents = Vec::with_capacity(grid.len());
    let mut speeds = Vec::with_capacity(grid.len());
    let mut defects = Vec::with_capacity(grid.len());
    for &t in grid {
        let sigma = mat_exp(&xm.scale(t))?.matmul(&mat_exp(&tm.scale(-t))?);
        let body_m = mat_exp(&tm.scale(t))?
            .matmul(&hm)
            .matmul(&mat_exp(&tm.scale(-t))?);
        let body = spec.element_projected(body_m)?;
        speeds.push(spec.norm(&body)?);
        defects.push(spec.norm(&spec.cartan_split(&body)?.cartan)?);
        elements.push(sigma);
        body_tangents.push(body);
    }

    let curvature = if degenerate {
        None
    } else {
        Some(curvature_from_split(&split, h_norm))
    };

    let mut curvature_fd = vec![None; grid.len()];
    if !degenerate {
        for idx in fd_sample_indices(grid.len()) {
            let sigma = &elements[idx];
            curvature_fd[idx] = Some(fd_curvature(&xm, &tm, &hm, h_norm, grid[idx], sigma)?);
        }
    }

    Ok(GeodesicTrace {
        times: grid.to_vec(),
        elements,
        body_tangents,
        speeds,
        horizontality_defects: defects,
        curvature,
        curvature_fd,
    })
}

/// The Riemannian geodesic e^{tX} on the same trace type: constant body
/// tangent X, speed ||X||, curvature ||X^2|| / ||X||^2.
pub fn riemannian_geodesic(
    spec: &LieAlgebraSpec,
    x: &AlgebraElement,
    grid: &[f64],
    cfg: &ToleranceConfig,
) -> Result<GeodesicTrace> {
    cfg.validate()?;
    validate_grid(grid)?;
    let norm = spec.norm(x)?;
    let degenerate = norm <= cfg.abs_tol;
    let t_part = spec.cartan_split(x)?.cartan;
    let defect = spec.norm(&t_part)?;

    let mut elements = Vec::with_capacity(grid.len());
    for &t in grid {
        elements.push(mat_exp(&x.matrix().scale(t))?);
    }
    let curvature = if degenerate {
        None
    } else {
        let x_sq = x.matrix().matmul(x.matrix());
        Some(x_sq.scaled_fro_norm() / (norm * norm))
    };

    let mut curvature_fd = vec![None; grid.len()];
    if !degenerate {
        let zero_t = ComplexMatrix::zeros(spec.n());
        for idx in fd_sample_indices(grid.len()) {
            let sigma = &elements[idx];
            curvature_fd[idx] =
                Some(fd_curvature(x.matrix(), &zero_t, x.matrix(), norm, grid[idx], sigma)?);
        }
    }

    Ok(GeodesicTrace {
        times: grid.to_vec(),
        elements,
        body_tangents: vec![x.clone(); grid.len()],
        speeds: vec![norm; grid.len()],
        horizontality_defects: vec![defect; grid.len()],
        curvature,
        curvature_fd,
    })
}

fn fd_sample_indices(len: usize) -> Vec<usize> {
    if len < 3 {
        return Vec::new();
    }
    let interior = len - 2;
    let count = CURVATURE_FD_POINTS.min(interior);
    (0..count)
        .map(|j| 1 + j * interior / count)
        .collect()
}

/// Finite-difference curvature at one sample: differentiate the unit
/// tangent V(u) = e^{uX} H e^{-uT} / ||H|| centrally, left-translate by
/// sigma(t)^{-1}, and divide the extended norm by the speed.
fn fd_curvature(
    xm: &ComplexMatrix,
    tm: &ComplexMatrix,
    hm: &ComplexMatrix,
    h_norm: f64,
    t: f64,
    sigma: &ComplexMatrix,
) -> Result<f64> {
    let delta = CURVATURE_FD_STEP;
    let v_at = |u: f64| -> Result<ComplexMatrix> {
        Ok(mat_exp(&xm.scale(u))?
            .matmul(hm)
            .matmul(&mat_exp(&tm.scale(-u))?)
            .scale(1.0 / h_norm))
    };
    let v_prime = (&v_at(t + delta)? - &v_at(t - delta)?).scale(0.5 / delta);
    let body = sigma.solve(&v_prime)?;
    Ok(body.scaled_fro_norm() / h_norm)
}
