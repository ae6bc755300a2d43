//! Constructive objects of the existence argument: the linear majorant, the
//! threshold `zeta(lambda)`, the explicit sub/supersolution pair, weak-form
//! verification, and the existence/nonexistence thresholds.

mod majorant;
mod pair;
mod weak;

pub use majorant::{linear_majorant, Majorant, SCAN_POINTS};
pub use pair::{
    build_subsolution, build_supersolution, exponent_window_lower, nonexistence_threshold, raise_zeta,
    strip_constants, zeta_lambda, StripConstants, SubSuperPair, ZETA_CAP, ZETA_FLOOR,
};
pub use weak::{verify_weak_inequality, WeakForm, WeakReport, WeakSide};

use crate::assembly::{ComposedOperator, EigenPair};
use crate::error::Result;
use crate::problem::{Field, ProblemSpec};
use crate::scalar::Scalar;

/// Grid `start, start + step, ...` up to `cap` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaGrid<S> {
    pub start: S,
    pub step: S,
    pub cap: S,
}

impl<S: Scalar> LambdaGrid<S> {
    pub fn values(&self) -> Vec<S> {
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let v = self.start + self.step * S::from_usize_lossy(k);
            if v > self.cap * (S::one() + S::lit(1e-12)) {
                break;
            }
            out.push(v);
            k += 1;
        }
        out
    }
}

impl<S: Scalar> Default for LambdaGrid<S> {
    fn default() -> Self {
        Self { start: S::one(), step: S::lit(0.25), cap: S::lit(200.0) }
    }
}

/// Both weak-form verdicts for the constructed pair at one `lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCheck<S> {
    pub lambda: S,
    pub pair: SubSuperPair<S>,
    pub sub: WeakReport<S>,
    pub sup: WeakReport<S>,
}

impl<S: Scalar> PairCheck<S> {
    pub fn passed(&self) -> bool {
        self.sub.passed && self.sup.passed
    }
}

/// Constructs the pair at `lambda` and verifies both sides.
pub fn check_pair_at<S: Scalar>(
    lambda: S,
    r: S,
    spec: &ProblemSpec<S>,
    op: &ComposedOperator<S>,
    form: &WeakForm<S>,
    eig: &EigenPair<S>,
    e: &Field<S>,
) -> Result<PairCheck<S>> {
    let spec = spec.with_lambda(lambda);
    let pair = SubSuperPair::construct(lambda, r, spec.nu, &spec.h, spec.m.zeta0(), eig, e)?;
    let sub = form.verify(&pair.phi, &spec, op, WeakSide::Sub)?;
    let sup = form.verify(&pair.xi, &spec, op, WeakSide::Super)?;
    Ok(PairCheck { lambda, pair, sub, sup })
}

/// Smallest `lambda` on `grid` at which the constructed pair passes both
/// verifications, or `None` if none does up to the cap.
pub fn empirical_mu2<S: Scalar>(
    r: S,
    spec: &ProblemSpec<S>,
    op: &ComposedOperator<S>,
    eig: &EigenPair<S>,
    e: &Field<S>,
    grid: LambdaGrid<S>,
) -> Result<Option<S>> {
    let form = WeakForm::new(op, spec.order.alpha)?;
    for lambda in grid.values() {
        if check_pair_at(lambda, r, spec, op, &form, eig, e)?.passed() {
            return Ok(Some(lambda));
        }
    }
    Ok(None)
}
