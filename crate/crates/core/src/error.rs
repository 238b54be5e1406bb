use thiserror::Error;

/// Errors produced by the numerical kernels and algebra layer.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NotFinite,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is singular (pivot {pivot:.3e} at column {col})")]
    Singular { col: usize, pivot: f64 },

    #[error("quadrature needs at least 2 panels, got {0}")]
    InvalidQuadNodes(usize),

    #[error("invalid tolerance configuration: {0}")]
    InvalidConfig(String),

    #[error("su(n) basis requires n >= 2, got {0}")]
    InvalidSuRank(usize),

    #[error("basis is not linearly independent (Gram pivot {pivot:.3e})")]
    DependentBasis { pivot: f64 },

    #[error("basis element {index} violates {property} by {defect:.3e}")]
    InvalidBasisElement {
        index: usize,
        property: &'static str,
        defect: f64,
    },

    #[error("Killing form is degenerate on this basis; the algebra is not compact semi-simple")]
    DegenerateKillingForm,

    #[error("Cartan set is empty")]
    EmptyCartanSet,

    #[error("cartan_indices entry {0} is out of range")]
    CartanIndexOutOfRange(usize),

    #[error("Cartan elements {i} and {j} do not commute (defect {defect:.3e})")]
    CartanNotCommutative { i: usize, j: usize, defect: f64 },

    #[error("Cartan set is not maximal: basis element {index} commutes with every Cartan element")]
    CartanNotMaximal { index: usize },

    #[error("degenerate Cartan Gram matrix")]
    DegenerateCartanGram,

    #[error("matrix is not in the algebra span (residual {residual:.3e})")]
    NotInAlgebra { residual: f64 },

    #[error("ODE step size underflow: field needs more than {budget} steps")]
    StepSizeUnderflow { budget: usize },

    #[error("series truncation at kmax={kmax} cannot reach tolerance {target:.3e} (bound {bound:.3e})")]
    SeriesTruncation { kmax: usize, target: f64, bound: f64 },

    #[error("flow grid must start at 0, got {0}")]
    GridNotAtZero(f64),

    #[error("flow grid must be monotone and finite")]
    InvalidGrid,

    #[error("degenerate geodesic: horizontal part has norm {norm:.3e}; curvature is undefined")]
    DegenerateGeodesic { norm: f64 },

    #[error("malformed JSON: {0}")]
    MalformedJson(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
