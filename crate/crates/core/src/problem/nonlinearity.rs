use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NonlinearityKind<S> {
    Sqrt,
    Log1p,
    /// `c s / (1 + s)`
    SaturatingLinear { c: S },
    Zero,
}

/// Catalog nonlinearity `h(s) - shift`. Every catalog member is continuous,
/// nondecreasing, and sublinear at infinity; `shift > 0` gives `h(0) < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nonlinearity<S> {
    pub kind: NonlinearityKind<S>,
    pub shift: S,
}

impl<S: Scalar> Nonlinearity<S> {
    pub fn new(kind: NonlinearityKind<S>) -> Self {
        Self { kind, shift: S::zero() }
    }

    pub fn shifted(kind: NonlinearityKind<S>, shift: S) -> Self {
        Self { kind, shift }
    }

    pub fn sqrt() -> Self {
        Self::new(NonlinearityKind::Sqrt)
    }

    pub fn zero() -> Self {
        Self::new(NonlinearityKind::Zero)
    }

    /// Evaluates at `s >= 0`; negative arguments are clamped to zero.
    pub fn eval(&self, s: S) -> S {
        let s = s.max(S::zero());
        let base = match self.kind {
            NonlinearityKind::Sqrt => s.sqrt(),
            NonlinearityKind::Log1p => s.ln_1p(),
            NonlinearityKind::SaturatingLinear { c } => {
                if s.is_infinite() {
                    c
                } else {
                    c * s / (S::one() + s)
                }
            }
            NonlinearityKind::Zero => S::zero(),
        };
        base - self.shift
    }

    /// True when `h` is strictly increasing, which makes threshold searches sharp.
    pub fn is_strictly_increasing(&self) -> bool {
        match self.kind {
            NonlinearityKind::Zero => false,
            NonlinearityKind::SaturatingLinear { c } => c > S::zero(),
            _ => true,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            NonlinearityKind::Sqrt => "sqrt",
            NonlinearityKind::Log1p => "log1p",
            NonlinearityKind::SaturatingLinear { .. } => "saturating_linear",
            NonlinearityKind::Zero => "zero",
        }
    }

    pub fn catalog() -> [Nonlinearity<S>; 4] {
        [
            Self::new(NonlinearityKind::Sqrt),
            Self::new(NonlinearityKind::Log1p),
            Self::new(NonlinearityKind::SaturatingLinear { c: S::lit(2.0) }),
            Self::new(NonlinearityKind::Zero),
        ]
    }
}
