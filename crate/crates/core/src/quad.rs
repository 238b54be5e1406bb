//! Composite Gauss-Legendre quadrature with a 5-point rule per panel.
//! Integrands here are entire in the parameter, so fixed panels converge
//! at O(width^10) and stay predictable under refinement.

use crate::error::{CoreError, Result};
use crate::matrix::ComplexMatrix;

/// 5-point Gauss-Legendre nodes on [-1, 1] and their weights.
fn gl5() -> ([f64; 5], [f64; 5]) {
    let a = (5.0 - 2.0 * (10.0_f64 / 7.0).sqrt()).sqrt() / 3.0;
    let b = (5.0 + 2.0 * (10.0_f64 / 7.0).sqrt()).sqrt() / 3.0;
    let wa = (322.0 + 13.0 * 70.0_f64.sqrt()) / 900.0;
    let wb = (322.0 - 13.0 * 70.0_f64.sqrt()) / 900.0;
    ([-b, -a, 0.0, a, b], [wb, wa, 128.0 / 225.0, wa, wb])
}

/// Integrates a matrix-valued function over [a, b] with `panels` equal
/// panels. Orientation is signed: swapping the endpoints negates the
/// result.
pub fn quad_integrate(
    f: impl Fn(f64) -> ComplexMatrix,
    a: f64,
    b: f64,
    panels: usize,
) -> Result<ComplexMatrix> {
    if panels < 2 {
        return Err(CoreError::InvalidQuadNodes(panels));
    }
    let (nodes, weights) = gl5();
    let width = (b - a) / panels as f64;
    let mut acc: Option<ComplexMatrix> = None;
    for p in 0..panels {
        let left = a + p as f64 * width;
        let mid = left + width / 2.0;
        let half = width / 2.0;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            let val = f(mid + half * x).scale(w * half);
            acc = Some(match acc {
                Some(s) => &s + &val,
                None => val,
            });
        }
    }
    Ok(acc.expect("panels >= 2"))
}

/// Scalar counterpart of [`quad_integrate`], with the same rule.
pub fn quad_scalar(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> Result<f64> {
    if panels < 2 {
        return Err(CoreError::InvalidQuadNodes(panels));
    }
    let (nodes, weights) = gl5();
    let width = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let left = a + p as f64 * width;
        let mid = left + width / 2.0;
        let half = width / 2.0;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            acc += w * half * f(mid + half * x);
        }
    }
    Ok(acc)
}
