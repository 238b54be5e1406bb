//! Right and left chronological exponentials of time-dependent algebra
//! fields, the flow identities built on them (variations formula, BCH
//! form, differential of exp), and the trace type they report into.
//!
//! The integrator is classical fixed-step RK4. The right-hand side is
//! linear in the group variable and smooth in time, so the step is chosen
//! once from the field's supremum norm, with a step-halving Richardson
//! check guarding the estimate.

use crate::config::ToleranceConfig;
use crate::error::{CoreError, Result};
use crate::expm::mat_exp;
use crate::matrix::ComplexMatrix;
use crate::quad::quad_integrate;

/// Total RK4 step budget per integration.
const STEP_BUDGET: usize = 10_000_000;

/// Sample count for the default trace grid of [`flow_ode`].
const DEFAULT_TRACE_SAMPLES: usize = 33;

/// Points used to estimate the supremum norm of a field.
const SUP_NORM_SAMPLES: usize = 65;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothness {
    Continuous,
    Smooth,
}

/// A map t -> X(t) into the matrix Lie algebra: the right-hand side of
/// chronological flows. Evaluation must be re-entrant.
pub struct TimeDependentField<'a> {
    eval: Box<dyn Fn(f64) -> ComplexMatrix + Send + Sync + 'a>,
    n: usize,
    smoothness: Smoothness,
    norm_bound: Option<Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>>,
    /// Bound on the field's time-variation rate ||X'|| / ||X||; the step
    /// controller resolves the faster of magnitude and oscillation.
    rate_hint: Option<f64>,
}

impl<'a> TimeDependentField<'a> {
    pub fn new(n: usize, eval: impl Fn(f64) -> ComplexMatrix + Send + Sync + 'a) -> Self {
        Self {
            eval: Box::new(eval),
            n,
            smoothness: Smoothness::Smooth,
            norm_bound: None,
            rate_hint: None,
        }
    }

    /// X(t) = X, the constant field.
    pub fn constant(m: &ComplexMatrix) -> TimeDependentField<'static> {
        let norm = m.fro_norm();
        let m = m.clone();
        TimeDependentField {
            n: m.n(),
            eval: Box::new(move |_| m.clone()),
            smoothness: Smoothness::Smooth,
            norm_bound: Some(Box::new(move |_| norm)),
            rate_hint: Some(0.0),
        }
    }

    /// X(t) = sum_k t^k A_k, evaluated by Horner's rule.
    pub fn polynomial(coeffs: Vec<ComplexMatrix>) -> TimeDependentField<'static> {
        assert!(!coeffs.is_empty(), "polynomial field needs coefficients");
        let n = coeffs[0].n();
        TimeDependentField {
            n,
            eval: Box::new(move |t| {
                let mut acc = coeffs[coeffs.len() - 1].clone();
                for c in coeffs.iter().rev().skip(1) {
                    acc = &acc.scale(t) + c;
                }
                acc
            }),
            smoothness: Smoothness::Smooth,
            norm_bound: None,
            rate_hint: None,
        }
    }

    /// X(t) = f(t) X0: all values commute, so the flow collapses to
    /// exp(integral of f times X0).
    pub fn scalar_times(
        f: impl Fn(f64) -> f64 + Send + Sync + 'a,
        m: &ComplexMatrix,
    ) -> TimeDependentField<'a> {
        let m = m.clone();
        TimeDependentField {
            n: m.n(),
            eval: Box::new(move |t| m.scale(f(t))),
            smoothness: Smoothness::Smooth,
            norm_bound: None,
            rate_hint: None,
        }
    }

    /// X(s) = e^{sA} B e^{-sA}, the conjugated constant field. The value
    /// derivative is [A, X(s)], so the oscillation rate is set to 2||A||.
    pub fn conjugated(a: &ComplexMatrix, b: &ComplexMatrix) -> TimeDependentField<'static> {
        let rate = 2.0 * a.fro_norm();
        let a = a.clone();
        let b = b.clone();
        TimeDependentField {
            n: a.n(),
            eval: Box::new(move |s| {
                let fwd = mat_exp(&a.scale(s)).expect("finite conjugator");
                let bwd = mat_exp(&a.scale(-s)).expect("finite conjugator");
                fwd.matmul(&b).matmul(&bwd)
            }),
            smoothness: Smoothness::Smooth,
            norm_bound: None,
            rate_hint: Some(rate),
        }
    }

    pub fn with_smoothness(mut self, s: Smoothness) -> Self {
        self.smoothness = s;
        self
    }

    /// Attaches an upper bound t -> ||X(t)||, used for step-size selection
    /// instead of sampling.
    pub fn with_norm_bound(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        self.norm_bound = Some(Box::new(f));
        self
    }

    pub fn with_rate_hint(mut self, rate: f64) -> Self {
        self.rate_hint = Some(rate);
        self
    }

    pub fn rate_hint(&self) -> Option<f64> {
        self.rate_hint
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn eval(&self, t: f64) -> ComplexMatrix {
        (self.eval)(t)
    }

    /// Supremum of ||X|| over [a, b]: the declared bound when present,
    /// otherwise a sampled estimate with a safety margin.
    pub fn sup_norm(&self, a: f64, b: f64) -> f64 {
        let lo = a.min(b);
        let hi = a.max(b);
        let at = |t: f64| match &self.norm_bound {
            Some(f) => f(t),
            None => self.eval(t).fro_norm(),
        };
        if hi == lo {
            return at(lo);
        }
        let mut sup: f64 = 0.0;
        for i in 0..SUP_NORM_SAMPLES {
            let t = lo + (hi - lo) * i as f64 / (SUP_NORM_SAMPLES - 1) as f64;
            sup = sup.max(at(t));
        }
        if self.norm_bound.is_some() {
            sup
        } else {
            sup * 1.2
        }
    }
}

/// A time-gridded flow: group elements gamma(t_i) with their unitarity
/// defects and the Richardson estimate of the local step error.
#[derive(Clone, Debug)]
pub struct FlowTrace {
    pub times: Vec<f64>,
    pub elements: Vec<ComplexMatrix>,
    pub defects: Vec<f64>,
    pub step_residual: f64,
}

impl FlowTrace {
    pub fn end(&self) -> &ComplexMatrix {
        self.elements.last().expect("trace is never empty")
    }

    pub fn max_defect(&self) -> f64 {
        self.defects.iter().cloned().fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    /// gamma' = gamma X(t): the right chronological exponential.
    Right,
    /// eta' = -X(t) eta: the left chronological exponential of -X,
    /// which is the inverse flow.
    Left,
}

fn rk4_step(field: &TimeDependentField, side: Side, g: &ComplexMatrix, t: f64, h: f64) -> ComplexMatrix {
    let slope = |state: &ComplexMatrix, x: &ComplexMatrix| -> ComplexMatrix {
        match side {
            Side::Right => state.matmul(x),
            Side::Left => x.matmul(state).scale(-1.0),
        }
    };
    let x0 = field.eval(t);
    let x_mid = field.eval(t + 0.5 * h);
    let x1 = field.eval(t + h);
    let k1 = slope(g, &x0);
    let k2 = slope(&(g + &k1.scale(0.5 * h)), &x_mid);
    let k3 = slope(&(g + &k2.scale(0.5 * h)), &x_mid);
    let k4 = slope(&(g + &k3.scale(h)), &x1);
    let incr = &(&k1 + &k4) + &(&k2 + &k3).scale(2.0);
    g + &incr.scale(h / 6.0)
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

/// Integrates from 0 along `grid`, recording each grid point. The grid
/// must start at 0 and be strictly monotone; a decreasing grid integrates
/// backward in time.
fn integrate(
    field: &TimeDependentField,
    grid: &[f64],
    cfg: &ToleranceConfig,
    side: Side,
) -> Result<FlowTrace> {
    cfg.validate()?;
    validate_grid(grid)?;
    let n = field.dim();
    let span_end = grid[grid.len() - 1];
    let sup = field.sup_norm(0.0, span_end).max(1e-14);
    // A fast-rotating field needs the rotation resolved even when its
    // magnitude is small.
    let rate = field.rate_hint().unwrap_or(0.0);

    // Local RK4 error scales like (h max(sup, rate))^5; the 1/5! headroom
    // absorbs the constant.
    let mut h_max = cfg.ode_tol.powf(0.2) / sup.max(rate);
    let total_span = span_end.abs();

    'attempt: for _ in 0..8 {
        let est_steps = (total_span / h_max).ceil();
        if !est_steps.is_finite() || est_steps as usize > STEP_BUDGET {
            return Err(CoreError::StepSizeUnderflow {
                budget: STEP_BUDGET,
            });
        }

        let mut times = Vec::with_capacity(grid.len());
        let mut elements = Vec::with_capacity(grid.len());
        let mut defects = Vec::with_capacity(grid.len());
        let mut g = ComplexMatrix::identity(n);
        let mut step_residual = 0.0_f64;
        let mut checked = false;

        times.push(grid[0]);
        defects.push(g.unitarity_defect());
        elements.push(g.clone());

        for w in grid.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            let dt = t1 - t0;
            let nsteps = ((dt.abs() / h_max).ceil() as usize).max(1);
            let h = dt / nsteps as f64;
            for k in 0..nsteps {
                let t = t0 + k as f64 * h;
                let next = rk4_step(field, side, &g, t, h);
                if !checked {
                    // One step-halving Richardson check per run: two half
                    // steps against the full step, error ~ diff / 15.
                    let half = rk4_step(field, side, &g, t, 0.5 * h);
                    let fine = rk4_step(field, side, &half, t + 0.5 * h, 0.5 * h);
                    let est = fine.fro_dist(&next) / 15.0;
                    step_residual = est;
                    checked = true;
                    if est > 50.0 * cfg.ode_tol {
                        h_max *= 0.5;
                        continue 'attempt;
                    }
                }
                g = next;
            }
            times.push(t1);
            defects.push(g.unitarity_defect());
            elements.push(g.clone());
        }

        if !elements.iter().all(|m| m.is_finite()) {
            return Err(CoreError::NotFinite);
        }
        return Ok(FlowTrace {
            times,
            elements,
            defects,
            step_residual,
        });
    }
    Err(CoreError::StepSizeUnderflow {
        budget: STEP_BUDGET,
    })
}

fn default_grid(t_end: f64) -> Vec<f64> {
    if t_end == 0.0 {
        return vec![0.0];
    }
    (0..DEFAULT_TRACE_SAMPLES)
        .map(|i| t_end * i as f64 / (DEFAULT_TRACE_SAMPLES - 1) as f64)
        .collect()
}

/// The flow gamma(t) of gamma' = gamma X(t), gamma(0) = I, traced on a
/// default grid over [0, t_end]. Negative `t_end` integrates backward.
pub fn flow_ode(
    field: &TimeDependentField,
    t_end: f64,
    cfg: &ToleranceConfig,
) -> Result<FlowTrace> {
    integrate(field, &default_grid(t_end), cfg, Side::Right)
}

/// Same flow recorded on a caller-supplied grid starting at 0.
pub fn flow_ode_on_grid(
    field: &TimeDependentField,
    grid: &[f64],
    cfg: &ToleranceConfig,
) -> Result<FlowTrace> {
    integrate(field, grid, cfg, Side::Right)
}

/// The inverse flow gamma^{-1}, solving (gamma^{-1})' = -X(t) gamma^{-1}:
/// the left chronological exponential of -X.
pub fn inverse_flow(
    field: &TimeDependentField,
    t_end: f64,
    cfg: &ToleranceConfig,
) -> Result<FlowTrace> {
    integrate(field, &default_grid(t_end), cfg, Side::Left)
}

/// Inverse flow on a caller-supplied grid.
pub fn inverse_flow_on_grid(
    field: &TimeDependentField,
    grid: &[f64],
    cfg: &ToleranceConfig,
) -> Result<FlowTrace> {
    integrate(field, grid, cfg, Side::Left)
}

/// The flow from t0 to t1: the left exponential of -X up to t0 composed
/// with the right exponential up to t1. Satisfies the two-point
/// composition law.
pub fn flow_between(
    field: &TimeDependentField,
    t0: f64,
    t1: f64,
    cfg: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    let back = inverse_flow(field, t0, cfg)?;
    let fwd = flow_ode(field, t1, cfg)?;
    Ok(back.end().matmul(fwd.end()))
}

/// Right-hand side of the variations formula: the flow of
/// s -> Ad(Phi(s))(Y(s)) times Phi(t), where Phi is the flow of X.
///
/// Phi is advanced alongside the outer flow in one coupled RK4 system, so
/// no nested solves are needed; the product equals the flow of X + Y
/// within solver tolerance.
pub fn variations_rhs(
    x: &TimeDependentField,
    y: &TimeDependentField,
    t: f64,
    cfg: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    cfg.validate()?;
    if x.dim() != y.dim() {
        return Err(CoreError::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    let n = x.dim();
    if t == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }
    let sup = (x.sup_norm(0.0, t) + y.sup_norm(0.0, t))
        .max(x.rate_hint().unwrap_or(0.0))
        .max(y.rate_hint().unwrap_or(0.0))
        .max(1e-14);
    let h_max = cfg.ode_tol.powf(0.2) / sup;
    let nsteps = ((t.abs() / h_max).ceil() as usize).max(1);
    if nsteps > STEP_BUDGET {
        return Err(CoreError::StepSizeUnderflow {
            budget: STEP_BUDGET,
        });
    }
    let h = t / nsteps as f64;

    let rhs = |time: f64,
               phi: &ComplexMatrix,
               psi: &ComplexMatrix|
     -> Result<(ComplexMatrix, ComplexMatrix)> {
        let d_phi = phi.matmul(&x.eval(time));
        let conjugated = phi.matmul(&y.eval(time)).matmul(&phi.inverse()?);
        let d_psi = psi.matmul(&conjugated);
        Ok((d_phi, d_psi))
    };

    let mut phi = ComplexMatrix::identity(n);
    let mut psi = ComplexMatrix::identity(n);
    for k in 0..nsteps {
        let t0 = k as f64 * h;
        let (k1p, k1s) = rhs(t0, &phi, &psi)?;
        let (k2p, k2s) = rhs(
            t0 + 0.5 * h,
            &(&phi + &k1p.scale(0.5 * h)),
            &(&psi + &k1s.scale(0.5 * h)),
        )?;
        let (k3p, k3s) = rhs(
            t0 + 0.5 * h,
            &(&phi + &k2p.scale(0.5 * h)),
            &(&psi + &k2s.scale(0.5 * h)),
        )?;
        let (k4p, k4s) = rhs(t0 + h, &(&phi + &k3p.scale(h)), &(&psi + &k3s.scale(h)))?;
        phi = &phi + &(&(&k1p + &k4p) + &(&k2p + &k3p).scale(2.0)).scale(h / 6.0);
        psi = &psi + &(&(&k1s + &k4s) + &(&k2s + &k3s).scale(2.0)).scale(h / 6.0);
    }
    Ok(psi.matmul(&phi))
}

/// The conjugated flow of two constant fields:
/// the right exponential of s -> e^{sX} Y e^{-sX} up to t, which equals
/// e^{t(X+Y)} e^{-tX}.
pub fn conjugated_flow(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    t: f64,
    cfg: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    if x.n() != y.n() {
        return Err(CoreError::DimensionMismatch {
            expected: x.n(),
            got: y.n(),
        });
    }
    let field = TimeDependentField::conjugated(x, y);
    Ok(flow_ode(&field, t, cfg)?.end().clone())
}

/// The chronological form of the Baker-Campbell-Hausdorff product:
/// the right exponential of s -> e^{-sW} (Z+W) e^{sW} over [0, 1],
/// which equals e^Z e^W.
pub fn bch_product(
    z: &ComplexMatrix,
    w: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    if z.n() != w.n() {
        return Err(CoreError::DimensionMismatch {
            expected: z.n(),
            got: w.n(),
        });
    }
    let field = TimeDependentField::conjugated(&-w, &(z + w));
    Ok(flow_ode(&field, 1.0, cfg)?.end().clone())
}

/// The differential of exp at X in the direction Y:
/// (integral over [0,1] of Ad(e^{sX})(Y) ds) e^X, by Gauss-Legendre
/// quadrature.
pub fn d_exp(x: &ComplexMatrix, y: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    cfg.validate()?;
    if x.n() != y.n() {
        return Err(CoreError::DimensionMismatch {
            expected: x.n(),
            got: y.n(),
        });
    }
    let field = TimeDependentField::conjugated(x, y);
    let integral = quad_integrate(|s| field.eval(s), 0.0, 1.0, cfg.quad_nodes)?;
    Ok(integral.matmul(&mat_exp(x)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieAlgebraSpec;
    use crate::sample::{random_element, random_unit_element};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn su2_element(seed: u64, norm: f64) -> ComplexMatrix {
        let spec = LieAlgebraSpec::su(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_element(&spec, &mut rng, norm)
            .unwrap()
            .matrix()
            .clone()
    }

    fn su3_unit(seed: u64) -> ComplexMatrix {
        let spec = LieAlgebraSpec::su(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_unit_element(&spec, &mut rng)
            .unwrap()
            .matrix()
            .clone()
    }

    #[test]
    fn constant_field_flow_is_matrix_exponential() {
        let x = su2_element(1, 1.3);
        let field = TimeDependentField::constant(&x);
        let trace = flow_ode(&field, 1.0, &cfg()).unwrap();
        for (t, g) in trace.times.iter().zip(&trace.elements) {
            let want = mat_exp(&x.scale(*t)).unwrap();
            assert!(g.fro_dist(&want) < 1e-9, "t={t}");
        }
        assert!(trace.max_defect() < 1e-9);
    }

    #[test]
    fn backward_flow_of_constant_field() {
        let x = su2_element(2, 0.9);
        let field = TimeDependentField::constant(&x);
        let trace = flow_ode(&field, -0.7, &cfg()).unwrap();
        let want = mat_exp(&x.scale(-0.7)).unwrap();
        assert!(trace.end().fro_dist(&want) < 1e-9);
        assert_eq!(trace.times[0], 0.0);
        assert!(trace.times.last().unwrap() - (-0.7) == 0.0);
    }

    #[test]
    fn commuting_field_collapses_to_exponential() {
        // X(t) = cos(t) X0: integral is sin(t) X0.
        let x0 = su2_element(3, 1.1);
        let field = TimeDependentField::scalar_times(|t: f64| t.cos(), &x0);
        let trace = flow_ode(&field, 1.0, &cfg()).unwrap();
        for (t, g) in trace.times.iter().zip(&trace.elements) {
            let want = mat_exp(&x0.scale(t.sin())).unwrap();
            assert!(g.fro_dist(&want) < 1e-9, "t={t}");
        }
    }

    #[test]
    fn inverse_flow_of_constant_field() {
        let x = su2_element(4, 0.8);
        let field = TimeDependentField::constant(&x);
        let trace = inverse_flow(&field, 1.0, &cfg()).unwrap();
        let want = mat_exp(&x.scale(-1.0)).unwrap();
        assert!(trace.end().fro_dist(&want) < 1e-9);
    }

    #[test]
    fn inverse_flow_times_flow_is_identity() {
        let a = su3_unit(5);
        let b = su3_unit(6);
        let field = TimeDependentField::polynomial(vec![a, b]);
        let fwd = flow_ode(&field, 1.0, &cfg()).unwrap();
        let bwd = inverse_flow(&field, 1.0, &cfg()).unwrap();
        let eye = ComplexMatrix::identity(3);
        for (g, gi) in fwd.elements.iter().zip(&bwd.elements) {
            assert!(gi.matmul(g).fro_dist(&eye) < 1e-9);
        }
    }

    #[test]
    fn inverse_flow_matches_linear_solve_inverse() {
        let a = su2_element(7, 1.0);
        let b = su2_element(8, 1.0);
        let field = TimeDependentField::polynomial(vec![a, b]);
        let fwd = flow_ode(&field, 1.0, &cfg()).unwrap();
        let bwd = inverse_flow(&field, 1.0, &cfg()).unwrap();
        let solved = fwd.end().inverse().unwrap();
        assert!(bwd.end().fro_dist(&solved) < 1e-9);
    }

    #[test]
    fn flow_between_degenerate_and_zero_start() {
        let x = su2_element(9, 1.0);
        let field = TimeDependentField::constant(&x);
        let same = flow_between(&field, 0.5, 0.5, &cfg()).unwrap();
        assert!(same.fro_dist(&ComplexMatrix::identity(2)) < 1e-9);
        let from_zero = flow_between(&field, 0.0, 0.8, &cfg()).unwrap();
        let direct = flow_ode(&field, 0.8, &cfg()).unwrap();
        assert!(from_zero.fro_dist(direct.end()) < 1e-10);
    }

    #[test]
    fn flow_between_composition_law() {
        let a = su3_unit(10);
        let b = su3_unit(11);
        let field = TimeDependentField::polynomial(vec![a, b]);
        let seg1 = flow_between(&field, 0.0, 0.4, &cfg()).unwrap();
        let seg2 = flow_between(&field, 0.4, 1.0, &cfg()).unwrap();
        let whole = flow_between(&field, 0.0, 1.0, &cfg()).unwrap();
        assert!(seg1.matmul(&seg2).fro_dist(&whole) < 1e-9);
    }

    #[test]
    fn variations_with_zero_perturbation_is_plain_flow() {
        let x = su2_element(12, 1.0);
        let xf = TimeDependentField::constant(&x);
        let yf = TimeDependentField::constant(&ComplexMatrix::zeros(2));
        let got = variations_rhs(&xf, &yf, 1.0, &cfg()).unwrap();
        let want = flow_ode(&xf, 1.0, &cfg()).unwrap();
        assert!(got.fro_dist(want.end()) < 1e-9);
    }

    #[test]
    fn variations_with_zero_base_is_flow_of_perturbation() {
        let y = su2_element(13, 1.0);
        let xf = TimeDependentField::constant(&ComplexMatrix::zeros(2));
        let yf = TimeDependentField::constant(&y);
        let got = variations_rhs(&xf, &yf, 1.0, &cfg()).unwrap();
        let want = mat_exp(&y).unwrap();
        assert!(got.fro_dist(&want) < 1e-9);
    }

    #[test]
    fn variations_formula_matches_flow_of_sum() {
        let x = su3_unit(14);
        let y = su3_unit(15);
        let xf = TimeDependentField::constant(&x);
        let yf = TimeDependentField::constant(&y);
        let got = variations_rhs(&xf, &yf, 1.0, &cfg()).unwrap();
        let sum_field = TimeDependentField::constant(&(&x + &y));
        let want = flow_ode(&sum_field, 1.0, &cfg()).unwrap();
        assert!(got.fro_dist(want.end()) < 1e-8);
    }

    #[test]
    fn conjugated_flow_trivial_cases() {
        let x = su2_element(16, 1.0);
        let zero = ComplexMatrix::zeros(2);
        let got = conjugated_flow(&x, &zero, 1.0, &cfg()).unwrap();
        assert!(got.fro_dist(&ComplexMatrix::identity(2)) < 1e-12);

        // Commuting pair: conjugation fixes Y, flow is e^{tY}.
        let spec = LieAlgebraSpec::su(2).unwrap();
        let t3 = spec.basis_element(2).unwrap().matrix().clone();
        let y = t3.scale(0.6);
        let got = conjugated_flow(&t3, &y, 1.0, &cfg()).unwrap();
        let want = mat_exp(&y).unwrap();
        assert!(got.fro_dist(&want) < 1e-9);
    }

    #[test]
    fn conjugated_flow_equals_exponential_product() {
        let x = su3_unit(17);
        let y = su3_unit(18);
        let got = conjugated_flow(&x, &y, 1.0, &cfg()).unwrap();
        let want = mat_exp(&(&x + &y)).unwrap().matmul(&mat_exp(&-&x).unwrap());
        assert!(got.fro_dist(&want) < 1e-8);
    }

    #[test]
    fn bch_product_trivial_cases() {
        let w = su2_element(19, 1.0);
        let zero = ComplexMatrix::zeros(2);
        let got = bch_product(&zero, &w, &cfg()).unwrap();
        assert!(got.fro_dist(&mat_exp(&w).unwrap()) < 1e-9);
        let z = su2_element(20, 1.0);
        let got = bch_product(&z, &zero, &cfg()).unwrap();
        assert!(got.fro_dist(&mat_exp(&z).unwrap()) < 1e-9);
    }

    #[test]
    fn bch_product_equals_exponential_product() {
        let z = su2_element(21, 1.0);
        let w = su2_element(22, 1.0);
        let got = bch_product(&z, &w, &cfg()).unwrap();
        let want = mat_exp(&z).unwrap().matmul(&mat_exp(&w).unwrap());
        assert!(got.fro_dist(&want) < 1e-8);
    }

    #[test]
    fn d_exp_at_zero_is_identity_map() {
        let y = su2_element(23, 1.0);
        let got = d_exp(&ComplexMatrix::zeros(2), &y, &cfg()).unwrap();
        assert!(got.fro_dist(&y) < 1e-13);
    }

    #[test]
    fn d_exp_commuting_case() {
        let spec = LieAlgebraSpec::su(2).unwrap();
        let x = spec.basis_element(2).unwrap().matrix().scale(0.7);
        let y = spec.basis_element(2).unwrap().matrix().scale(-0.4);
        let got = d_exp(&x, &y, &cfg()).unwrap();
        let want = y.matmul(&mat_exp(&x).unwrap());
        assert!(got.fro_dist(&want) < 1e-12);
    }

    #[test]
    fn d_exp_matches_central_finite_difference() {
        let x = su3_unit(24);
        let y = su3_unit(25);
        let got = d_exp(&x, &y, &cfg()).unwrap();
        let h = 1e-5;
        let plus = mat_exp(&(&x + &y.scale(h))).unwrap();
        let minus = mat_exp(&(&x - &y.scale(h))).unwrap();
        let fd = (&plus - &minus).scale(0.5 / h);
        let rel = got.fro_dist(&fd) / got.fro_norm();
        assert!(rel < 1e-6, "relative error {rel}");
    }

    #[test]
    fn stiff_field_exhausts_step_budget() {
        let x = su2_element(26, 1.0).scale(1e12);
        let field = TimeDependentField::constant(&x);
        assert!(matches!(
            flow_ode(&field, 1.0, &cfg()),
            Err(CoreError::StepSizeUnderflow { .. })
        ));
    }

    #[test]
    fn grid_validation() {
        let x = su2_element(27, 1.0);
        let field = TimeDependentField::constant(&x);
        assert!(matches!(
            flow_ode_on_grid(&field, &[0.1, 0.2], &cfg()),
            Err(CoreError::GridNotAtZero(_))
        ));
        assert!(matches!(
            flow_ode_on_grid(&field, &[0.0, 0.2, 0.1], &cfg()),
            Err(CoreError::InvalidGrid)
        ));
    }
}
