//! psi-Hilfer fractional operators on an interval and the sub/supersolution
//! machinery for the singular fractional Kirchhoff problem
//!
//! ```text
//! M(∫|D_{0+} u|²) D_T(D_{0+} u) = λ (h(u) - u^{-ν}),   u(0) = u(T) = 0.
//! ```
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*64` aliases
//! below fix the usual choice.

pub mod analysis;
pub mod assembly;
pub mod error;
pub mod linalg;
pub mod problem;
pub mod psi_calculus;
pub mod quadrature;
pub mod scalar;
pub mod solver;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Grid64 = problem::Grid<f64>;
pub type Field64 = problem::Field<f64>;
pub type ProblemSpec64 = problem::ProblemSpec<f64>;
pub type OperatorMatrix64 = psi_calculus::OperatorMatrix<f64>;

pub type Grid32 = problem::Grid<f32>;
pub type Field32 = problem::Field<f32>;
pub type ProblemSpec32 = problem::ProblemSpec<f32>;
pub type OperatorMatrix32 = psi_calculus::OperatorMatrix<f32>;
pub type EigenPair64 = assembly::EigenPair<f64>;
pub type ComposedOperator64 = assembly::ComposedOperator<f64>;
pub type SubSuperPair64 = analysis::SubSuperPair<f64>;
pub type SolveReport64 = solver::SolveReport<f64>;
