//! Problem data: catalogs, grid, configuration, and validation.

mod config;
mod grid;
mod kirchhoff;
mod nonlinearity;
mod order;
mod psi;

pub use config::{parse_config, parse_pairs, ConfigError, ConfigKey, RunSettings, CONFIG_KEYS};
pub use grid::{Field, Grid, MIN_NODES};
pub use kirchhoff::KirchhoffFn;
pub use nonlinearity::{Nonlinearity, NonlinearityKind};
pub use order::FractionalOrder;
pub use psi::PsiFunction;

use crate::error::Result;
use crate::scalar::Scalar;

/// One violated bound, naming the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl Violation {
    pub fn new(field: &'static str, message: impl Into<String>) -> Self {
        Self { field, message: message.into() }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// All data of the boundary-value problem on `(0, T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec<S> {
    pub order: FractionalOrder<S>,
    pub psi: PsiFunction<S>,
    pub t_end: S,
    pub grid_n: usize,
    pub m: KirchhoffFn<S>,
    pub h: Nonlinearity<S>,
    pub nu: S,
    pub lambda: S,
}

impl<S: Scalar> ProblemSpec<S> {
    pub fn grid(&self) -> Result<Grid<S>> {
        Grid::new(self.t_end, self.grid_n, self.psi)
    }

    pub fn with_lambda(&self, lambda: S) -> Self {
        Self { lambda, ..self.clone() }
    }

    /// Right-hand side `lambda (h(s) - s^-nu)`.
    pub fn forcing(&self, s: S) -> S {
        self.lambda * (self.h.eval(s) - s.powf(-self.nu))
    }
}

/// Every violated invariant of `spec`; empty iff the spec is valid.
pub fn validate_spec<S: Scalar>(spec: &ProblemSpec<S>) -> Vec<Violation> {
    let mut out = spec.order.violations();
    out.extend(spec.psi.violations());
    if !(spec.t_end > S::zero() && spec.t_end.is_finite()) {
        out.push(Violation::new("T", format!("T must be positive, got {}", spec.t_end)));
    }
    if spec.grid_n < MIN_NODES {
        out.push(Violation::new("grid_n", format!("grid_n must be at least {MIN_NODES}, got {}", spec.grid_n)));
    }
    out.extend(spec.m.violations());
    if !(spec.nu > S::zero() && spec.nu < S::one()) {
        out.push(Violation::new("nu", format!("nu must lie in (0,1), got {}", spec.nu)));
    }
    if !(spec.lambda > S::zero() && spec.lambda.is_finite()) {
        out.push(Violation::new("lambda", format!("lambda must be positive, got {}", spec.lambda)));
    }
    if !(spec.h.shift >= S::zero()) {
        out.push(Violation::new("h", format!("shift must be nonnegative, got {}", spec.h.shift)));
    }
    if let NonlinearityKind::SaturatingLinear { c } = spec.h.kind {
        if !(c >= S::zero()) {
            out.push(Violation::new("h", format!("saturating_linear coefficient must be nonnegative, got {c}")));
        }
    }
    out
}

#[cfg(test)]
pub(crate) fn classical_spec(n: usize, lambda: f64) -> ProblemSpec<f64> {
    ProblemSpec {
        order: FractionalOrder::new(1.0, 0.5),
        psi: PsiFunction::Identity,
        t_end: 1.0,
        grid_n: n,
        m: KirchhoffFn::Constant { c: 1.0 },
        h: Nonlinearity::sqrt(),
        nu: 0.5,
        lambda,
    }
}
