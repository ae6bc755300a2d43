use crate::assembly::{ComposedOperator, EigenPair};
use crate::error::{Error, Result};
use crate::problem::{Field, Nonlinearity};
use crate::scalar::Scalar;

pub const ZETA_FLOOR: f64 = 1e-12;
pub const ZETA_CAP: f64 = 1e12;

/// Smallest `zeta` with `zeta0 zeta >= lambda h(zeta e_sup)`: doubling from
/// [`ZETA_FLOOR`], then bisection. The returned value always satisfies the
/// inequality.
pub fn zeta_lambda<S: Scalar>(h: &Nonlinearity<S>, lambda: S, zeta0: S, e_sup: S) -> Result<S> {
    if !(lambda > S::zero() && zeta0 > S::zero() && e_sup > S::zero()) {
        return Err(Error::InvalidArgument("zeta_lambda needs positive lambda, zeta0 and e_sup".into()));
    }
    let ok = |z: S| zeta0 * z >= lambda * h.eval(z * e_sup);
    let (floor, cap) = (S::lit(ZETA_FLOOR), S::lit(ZETA_CAP));
    if ok(floor) {
        return Ok(floor);
    }
    let mut lo = floor;
    let mut hi = floor;
    while !ok(hi) {
        lo = hi;
        hi = hi + hi;
        if hi > cap {
            return Err(Error::NotSublinearNumerically { cap: ZETA_CAP });
        }
    }
    let tight = S::lit(4.0) * S::epsilon();
    for _ in 0..200 {
        if hi - lo <= tight * hi {
            break;
        }
        let mid = lo + (hi - lo) / S::lit(2.0);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Lower end of the admissible window for the sub-solution exponent.
pub fn exponent_window_lower<S: Scalar>(nu: S) -> S {
    S::one() / (S::one() + nu)
}

/// `phi = lambda^r psi1^{2/(1+nu)}`.
pub fn build_subsolution<S: Scalar>(lambda: S, r: S, nu: S, eig: &EigenPair<S>) -> Result<Field<S>> {
    let lower = exponent_window_lower(nu);
    if !(r > lower && r < S::one()) {
        return Err(Error::ExponentOutsideWindow { r: r.to_f64_lossy(), lower: lower.to_f64_lossy() });
    }
    let n = eig.psi1.len();
    if let Some(node) = (1..n - 1).find(|&i| !(eig.psi1[i] > S::zero())) {
        return Err(Error::NonPositiveInterior { node });
    }
    let p = S::lit(2.0) / (S::one() + nu);
    let scale = lambda.powf(r);
    let mut phi: Field<S> = eig.psi1.iter().map(|&v| scale * v.max(S::zero()).powf(p)).collect::<Vec<_>>().into();
    phi[0] = S::zero();
    phi[n - 1] = S::zero();
    Ok(phi)
}

pub fn build_supersolution<S: Scalar>(zeta: S, e: &Field<S>) -> Field<S> {
    e.scaled(zeta)
}

/// `max(zeta, max_i phi_i / e_i)` nudged up by a few ulps so that `zeta e >= phi`
/// survives rounding.
pub fn raise_zeta<S: Scalar>(zeta: S, phi: &Field<S>, e: &Field<S>) -> Result<S> {
    let mut z = zeta;
    for (i, (&p, &ev)) in phi.iter().zip(e.iter()).enumerate() {
        if p > S::zero() {
            if !(ev > S::zero()) {
                return Err(Error::CannotOrderPair { node: i });
            }
            z = z.max(p / ev);
        }
    }
    Ok(z * (S::one() + S::lit(4.0) * S::epsilon()))
}

/// An ordered sub/supersolution candidate pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SubSuperPair<S> {
    pub phi: Field<S>,
    pub xi: Field<S>,
    pub r: S,
    pub zeta: S,
}

impl<S: Scalar> SubSuperPair<S> {
    /// Checks `phi <= xi`, zero boundary values and `phi > 0` inside.
    pub fn new(phi: Field<S>, xi: Field<S>, r: S, zeta: S) -> Result<Self> {
        let n = phi.len();
        if xi.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: xi.len() });
        }
        for b in [0, n - 1] {
            if phi[b] != S::zero() || xi[b] != S::zero() {
                return Err(Error::BoundaryNotZero { node: b });
            }
        }
        if let Some(node) = (0..n).find(|&i| !(phi[i] <= xi[i])) {
            return Err(Error::CannotOrderPair { node });
        }
        if let Some(node) = (1..n - 1).find(|&i| !(phi[i] > S::zero())) {
            return Err(Error::NonPositiveInterior { node });
        }
        Ok(Self { phi, xi, r, zeta })
    }

    /// The full construction at `lambda`: `phi` from the eigenpair,
    /// `zeta` from [`zeta_lambda`] raised until `zeta e >= phi`.
    pub fn construct(
        lambda: S,
        r: S,
        nu: S,
        h: &Nonlinearity<S>,
        zeta0: S,
        eig: &EigenPair<S>,
        e: &Field<S>,
    ) -> Result<Self> {
        let phi = build_subsolution(lambda, r, nu, eig)?;
        let zeta = zeta_lambda(h, lambda, zeta0, e.sup_norm())?;
        let zeta = raise_zeta(zeta, &phi, e)?;
        let xi = build_supersolution(zeta, e);
        Self::new(phi, xi, r, zeta)
    }
}

/// `mu1 = lambda1 / (zeta_inf a)`; no positive solution exists below it.
pub fn nonexistence_threshold<S: Scalar>(lambda1: S, zeta_inf: S, a: S) -> S {
    lambda1 / (zeta_inf * a)
}

/// Boundary-strip constants of the eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripConstants<S> {
    /// Lower bound of `|D_{0+} psi1|²` on the strip.
    pub zeta: S,
    /// Strip half-width in `x`.
    pub delta: S,
    /// Minimum of `psi1^{2/(1+nu)}` off the strip.
    pub mu: S,
}

/// `zeta` is half the smaller of the two boundary-adjacent values of
/// `|D_{0+} psi1|²`; `delta` is the widest strip on which that bound holds.
pub fn strip_constants<S: Scalar>(eig: &EigenPair<S>, op: &ComposedOperator<S>, nu: S) -> Result<StripConstants<S>> {
    let d = op.d_left().apply(&eig.psi1)?;
    let sq: Vec<S> = d.iter().map(|&v| v * v).collect();
    let n = sq.len();
    let zeta = sq[1].min(sq[n - 2]) / S::lit(2.0);
    let mut k = 1;
    while k + 1 < n - 1 - k && sq[k + 1] >= zeta && sq[n - 2 - k] >= zeta {
        k += 1;
    }
    let x = op.grid().nodes();
    let delta = x[k];
    let p = S::lit(2.0) / (S::one() + nu);
    let mu = (k + 1..n - 1 - k).map(|i| eig.psi1[i].max(S::zero()).powf(p)).fold(S::infinity(), S::min);
    Ok(StripConstants { zeta, delta, mu })
}
