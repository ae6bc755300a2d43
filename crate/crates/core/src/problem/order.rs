use crate::problem::Violation;
use crate::scalar::Scalar;

/// Order `alpha` and type `beta` of a psi-Hilfer derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalOrder<S> {
    pub alpha: S,
    pub beta: S,
}

impl<S: Scalar> FractionalOrder<S> {
    pub fn new(alpha: S, beta: S) -> Self {
        Self { alpha, beta }
    }

    /// Order of the outer integral, `beta (1 - alpha)`.
    pub fn outer_integral_order(&self) -> S {
        self.beta * (S::one() - self.alpha)
    }

    /// Order of the inner integral, `(1 - beta)(1 - alpha)`.
    pub fn inner_integral_order(&self) -> S {
        (S::one() - self.beta) * (S::one() - self.alpha)
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let half = S::lit(0.5);
        if !(self.alpha > half) {
            out.push(Violation::new("alpha", format!("alpha must exceed 1/2, got {}", self.alpha)));
        } else if !(self.alpha <= S::one()) {
            out.push(Violation::new("alpha", format!("alpha must be at most 1, got {}", self.alpha)));
        }
        if !(self.beta >= S::zero() && self.beta <= S::one()) {
            out.push(Violation::new("beta", format!("beta must lie in [0, 1], got {}", self.beta)));
        }
        out
    }
}
