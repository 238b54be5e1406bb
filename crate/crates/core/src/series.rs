//! The truncated chronological series by Picard iteration, and the
//! factorial tail bound that certifies its truncation error.
//!
//! Each Picard iterate is a cumulative integral of the previous one on a
//! shared fixed grid, so iterate k agrees with the order-k simplex-integral
//! truncation in exact arithmetic. The cumulative rule fits a quadratic
//! through three neighbouring samples; plain trapezoid would cap the
//! reachable accuracy well above the certified tail bound.

use crate::config::ToleranceConfig;
use crate::error::{CoreError, Result};
use crate::flow::TimeDependentField;
use crate::matrix::ComplexMatrix;
use crate::quad::quad_scalar;

/// Intervals of the fixed Picard grid.
const PICARD_GRID: usize = 4096;

/// Prefix integrals of uniformly spaced samples with signed spacing `h`,
/// by quadratic interpolation through neighbouring triples. Exact on
/// quadratics; cumulative error O(h^3) on smooth data.
fn cumulative_integral(samples: &[ComplexMatrix], h: f64) -> Vec<ComplexMatrix> {
    let n = samples[0].n();
    let len = samples.len();
    let mut acc = Vec::with_capacity(len);
    acc.push(ComplexMatrix::zeros(n));
    if len == 1 {
        return acc;
    }
    if len == 2 {
        let step = &(&samples[0] + &samples[1]).scale(h / 2.0);
        acc.push(&acc[0] + step);
        return acc;
    }
    // First interval uses the forward-facing quadratic.
    let first = &(&samples[0].scale(5.0) + &samples[1].scale(8.0)) - &samples[2];
    acc.push(&acc[0] + &first.scale(h / 12.0));
    for i in 1..(len - 1) {
        let step = &(&samples[i].scale(8.0) + &samples[i + 1].scale(5.0)) - &samples[i - 1];
        let next = &acc[i] + &step.scale(h / 12.0);
        acc.push(next);
    }
    acc
}

/// Evaluates the order-`kmax` truncation of the right chronological
/// exponential at `t` by Picard iteration on the fixed grid.
pub fn flow_series(
    field: &TimeDependentField,
    t: f64,
    kmax: usize,
    cfg: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    cfg.validate()?;
    if kmax < 1 {
        return Err(CoreError::InvalidConfig(format!(
            "series order must be >= 1, got {kmax}"
        )));
    }
    let n = field.dim();
    if t == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }
    let h = t / PICARD_GRID as f64;
    let xs: Vec<ComplexMatrix> = (0..=PICARD_GRID)
        .map(|i| field.eval(i as f64 * h))
        .collect();
    let eye = ComplexMatrix::identity(n);
    let mut gamma: Vec<ComplexMatrix> = vec![eye.clone(); PICARD_GRID + 1];
    for _ in 0..kmax {
        let integrand: Vec<ComplexMatrix> = gamma
            .iter()
            .zip(&xs)
            .map(|(g, x)| g.matmul(x))
            .collect();
        let prefix = cumulative_integral(&integrand, h);
        gamma = prefix.into_iter().map(|p| &eye + &p).collect();
    }
    Ok(gamma.pop().expect("grid is non-empty"))
}

/// Picks the smallest truncation order whose tail bound meets `target`,
/// up to `cfg.series_kmax`, and evaluates the series there.
pub fn flow_series_to_tolerance(
    field: &TimeDependentField,
    t: f64,
    target: f64,
    cfg: &ToleranceConfig,
) -> Result<(ComplexMatrix, usize)> {
    cfg.validate()?;
    for k in 1..=cfg.series_kmax {
        if series_error_bound(field, t, k, cfg)? <= target {
            return Ok((flow_series(field, t, k, cfg)?, k));
        }
    }
    Err(CoreError::SeriesTruncation {
        kmax: cfg.series_kmax,
        target,
        bound: series_error_bound(field, t, cfg.series_kmax, cfg)?,
    })
}

/// Upper bound on the truncation error of the order-`kmax` series:
/// the tail sum over k > kmax of m^k / k! with m the integral of ||X||
/// over [0, t]. Summed directly term-by-term, which agrees with
/// e^m minus the degree-kmax Taylor polynomial without the cancellation.
pub fn series_error_bound(
    field: &TimeDependentField,
    t: f64,
    kmax: usize,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    cfg.validate()?;
    let (lo, hi) = (t.min(0.0), t.max(0.0));
    let m = if lo == hi {
        0.0
    } else {
        quad_scalar(|s| field.eval(s).fro_norm(), lo, hi, cfg.quad_nodes)?
    };
    Ok(factorial_tail(m, kmax))
}

fn factorial_tail(m: f64, kmax: usize) -> f64 {
    if m == 0.0 {
        return 0.0;
    }
    // term = m^(kmax+1) / (kmax+1)!
    let mut term = 1.0;
    for k in 1..=(kmax + 1) {
        term *= m / k as f64;
    }
    let mut total = term;
    let mut k = kmax + 2;
    while k < kmax + 500 {
        term *= m / k as f64;
        total += term;
        if term < total * 1e-18 {
            break;
        }
        k += 1;
    }
    total
}
