use crate::problem::Violation;
use crate::scalar::Scalar;

/// The kernel-generating map psi, drawn from a fixed catalog.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsiFunction<S> {
    Identity,
    /// `exp(k x) - 1`
    ExpMinusOne { k: S },
    /// `x^2`
    Square,
    /// `ln(1 + x)`
    Log1p,
}

impl<S: Scalar> PsiFunction<S> {
    pub fn eval(&self, x: S) -> S {
        match *self {
            PsiFunction::Identity => x,
            PsiFunction::ExpMinusOne { k } => (k * x).exp_m1(),
            PsiFunction::Square => x * x,
            PsiFunction::Log1p => x.ln_1p(),
        }
    }

    pub fn derivative(&self, x: S) -> S {
        match *self {
            PsiFunction::Identity => S::one(),
            PsiFunction::ExpMinusOne { k } => k * (k * x).exp(),
            PsiFunction::Square => S::lit(2.0) * x,
            PsiFunction::Log1p => S::one() / (S::one() + x),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PsiFunction::Identity => "identity",
            PsiFunction::ExpMinusOne { .. } => "exp_minus_one",
            PsiFunction::Square => "square",
            PsiFunction::Log1p => "log1p",
        }
    }

    pub fn violations(&self) -> Vec<Violation> {
        match *self {
            PsiFunction::ExpMinusOne { k } if !(k > S::zero() && k.is_finite()) => {
                vec![Violation::new("psi_k", format!("psi_k must be positive, got {k}"))]
            }
            _ => Vec::new(),
        }
    }

    pub fn catalog() -> [PsiFunction<S>; 4] {
        [
            PsiFunction::Identity,
            PsiFunction::ExpMinusOne { k: S::one() },
            PsiFunction::Square,
            PsiFunction::Log1p,
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn catalog_strictly_increasing(x in 1e-6f64..3.0, dx in 1e-6f64..1.0) {
            for psi in PsiFunction::<f64>::catalog() {
                prop_assert!(psi.eval(x + dx) > psi.eval(x), "{}", psi.name());
                prop_assert!(psi.derivative(x) > 0.0);
            }
        }
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let h = 1e-6;
        for psi in PsiFunction::<f64>::catalog() {
            for &x in &[0.1, 0.5, 1.7] {
                let fd = (psi.eval(x + h) - psi.eval(x - h)) / (2.0 * h);
                assert!((fd - psi.derivative(x)).abs() < 1e-8, "{}", psi.name());
            }
            assert!(psi.eval(0.0).is_finite());
        }
    }

    #[test]
    fn nonpositive_rate_rejected() {
        assert_eq!(PsiFunction::ExpMinusOne { k: 0.0 }.violations()[0].field, "psi_k");
    }
}
