//! Discrete psi-Riemann-Liouville integrals and psi-Hilfer derivatives.

mod derivative;
mod integral;

pub use derivative::{d1_matrix, hilfer_derivative_matrix, hilfer_derivative_matrix_with, HilferScheme};
pub use integral::frac_integral_matrix;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::problem::{Field, FractionalOrder, Grid};
use crate::scalar::Scalar;
use crate::special::gamma_ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorTag {
    IntLeft,
    IntRight,
    D1Psi,
    HilferLeft,
    HilferRight,
    Composed,
}

/// Dense square operator on the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix<S> {
    entries: DenseMatrix<S>,
    tag: OperatorTag,
}

impl<S: Scalar> OperatorMatrix<S> {
    pub fn new(entries: DenseMatrix<S>, tag: OperatorTag) -> Self {
        debug_assert!(entries.is_square());
        Self { entries, tag }
    }

    pub fn entries(&self) -> &DenseMatrix<S> {
        &self.entries
    }

    pub fn into_entries(self) -> DenseMatrix<S> {
        self.entries
    }

    pub fn tag(&self) -> OperatorTag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn apply(&self, f: &Field<S>) -> Result<Field<S>> {
        Ok(Field(self.entries.matvec(f)?))
    }

    /// `self · rhs`, tagged as `tag`.
    pub fn compose(&self, rhs: &Self, tag: OperatorTag) -> Result<Self> {
        Ok(Self::new(self.entries.matmul(&rhs.entries)?, tag))
    }
}

pub fn apply<S: Scalar>(matrix: &OperatorMatrix<S>, f: &Field<S>) -> Result<Field<S>> {
    matrix.apply(f)
}

/// `Γ(delta)/Γ(delta-alpha) (psi(x)-psi(0))^{delta-1-alpha}`, the left Hilfer image of
/// `(psi(x)-psi(0))^{delta-1}`.
pub fn hilfer_power_oracle<S: Scalar>(order: FractionalOrder<S>, delta: S, grid: &Grid<S>) -> Result<Field<S>> {
    if !(delta > S::one()) || !(delta - order.alpha > S::zero()) {
        return Err(Error::InvalidArgument(format!(
            "power oracle needs delta > 1 and delta > alpha, got delta = {delta}"
        )));
    }
    let c = gamma_ratio(delta, delta - order.alpha)?;
    Ok(shifted_power(grid, delta - S::one() - order.alpha, c))
}

/// `Γ(delta)/Γ(delta+order) (psi(x)-psi(0))^{delta-1+order}`, the left integral image of
/// `(psi(x)-psi(0))^{delta-1}`.
pub fn integral_power_oracle<S: Scalar>(order: S, delta: S, grid: &Grid<S>) -> Result<Field<S>> {
    if !(delta >= S::one()) {
        return Err(Error::InvalidArgument(format!("power oracle needs delta >= 1, got {delta}")));
    }
    let c = gamma_ratio(delta, delta + order)?;
    Ok(shifted_power(grid, delta - S::one() + order, c))
}

/// `(psi(x)-psi(0))^{p}` on the nodes.
pub fn psi_power<S: Scalar>(grid: &Grid<S>, p: S) -> Field<S> {
    shifted_power(grid, p, S::one())
}

fn shifted_power<S: Scalar>(grid: &Grid<S>, p: S, c: S) -> Field<S> {
    let u = grid.psi_nodes();
    Field(u.iter().map(|&ui| c * (ui - u[0]).powf(p)).collect())
}
