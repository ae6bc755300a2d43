use crate::problem::Violation;
use crate::scalar::Scalar;

/// The nonlocal coefficient `M(t)`, bounded in `[zeta0, zeta_inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KirchhoffFn<S> {
    Constant { c: S },
    /// `min(a0 + b0 t, cap)`; the cap keeps the upper bound finite.
    Affine { a0: S, b0: S, cap: S },
    /// `zeta0 + (zeta_inf - zeta0) t / (t + scale)`
    Saturating { zeta0: S, zeta_inf: S, scale: S },
}

impl<S: Scalar> KirchhoffFn<S> {
    pub fn eval(&self, t: S) -> S {
        let t = t.max(S::zero());
        match *self {
            KirchhoffFn::Constant { c } => c,
            KirchhoffFn::Affine { a0, b0, cap } => (a0 + b0 * t).min(cap),
            KirchhoffFn::Saturating { zeta0, zeta_inf, scale } => {
                if t.is_infinite() {
                    zeta_inf
                } else {
                    zeta0 + (zeta_inf - zeta0) * t / (t + scale)
                }
            }
        }
    }

    pub fn zeta0(&self) -> S {
        match *self {
            KirchhoffFn::Constant { c } => c,
            KirchhoffFn::Affine { a0, .. } => a0,
            KirchhoffFn::Saturating { zeta0, .. } => zeta0,
        }
    }

    pub fn zeta_inf(&self) -> S {
        match *self {
            KirchhoffFn::Constant { c } => c,
            KirchhoffFn::Affine { cap, .. } => cap,
            KirchhoffFn::Saturating { zeta_inf, .. } => zeta_inf,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KirchhoffFn::Constant { .. } => "constant",
            KirchhoffFn::Affine { .. } => "affine",
            KirchhoffFn::Saturating { .. } => "saturating",
        }
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let (z0, zinf) = (self.zeta0(), self.zeta_inf());
        if !(z0 > S::zero()) {
            out.push(Violation::new("zeta0", format!("zeta0 must be positive, got {z0}")));
        }
        if !(zinf >= z0) || !zinf.is_finite() {
            out.push(Violation::new(
                "zeta_inf",
                format!("zeta_inf must be finite and at least zeta0, got {zinf}"),
            ));
        }
        match *self {
            KirchhoffFn::Affine { b0, .. } if !(b0 >= S::zero()) => {
                out.push(Violation::new("m", format!("affine slope must be nonnegative, got {b0}")));
            }
            KirchhoffFn::Saturating { scale, .. } if !(scale > S::zero()) => {
                out.push(Violation::new("m", format!("saturation scale must be positive, got {scale}")));
            }
            _ => {}
        }
        out
    }
}
