//! Numerical engine for group exponentials, chronological (time-ordered)
//! exponentials and the Cartan exponential on compact matrix Lie groups,
//! together with a verification suite that certifies the identities these
//! maps satisfy.

pub mod algebra;
pub mod cartan;
pub mod config;
pub mod error;
pub mod expm;
pub mod flow;
pub mod gell_mann;
pub mod io;
pub mod matrix;
pub mod quad;
pub mod sample;
pub mod series;
pub mod verify;

pub use algebra::{AlgebraElement, AlgebraFamily, CartanSplit, LieAlgebraSpec};
pub use cartan::GeodesicTrace;
pub use config::ToleranceConfig;
pub use error::{CoreError, Result};
pub use expm::mat_exp;
pub use flow::{FlowTrace, TimeDependentField};
pub use matrix::ComplexMatrix;
pub use verify::{CheckRecord, VerifyReport};
