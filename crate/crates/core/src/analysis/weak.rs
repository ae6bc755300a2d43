use crate::assembly::ComposedOperator;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::problem::{Field, ProblemSpec};
use crate::quadrature::gauss_legendre;
use crate::scalar::Scalar;
use crate::special::gamma;

const GAUSS_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeakSide {
    Sub,
    Super,
}

impl WeakSide {
    pub fn name(self) -> &'static str {
        match self {
            WeakSide::Sub => "sub",
            WeakSide::Super => "super",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakReport<S> {
    pub side: WeakSide,
    pub passed: bool,
    /// `min_i (R - L)` for `Sub`, `min_i (L - R)` for `Super`.
    pub worst_margin: S,
    pub worst_node: usize,
    pub tol_margin: S,
    /// Per-node margins; zero at the boundary.
    pub margins: Field<S>,
}

impl<S: Scalar> WeakReport<S> {
    pub fn verdict(&self) -> String {
        format!("{}-{}", self.side.name(), if self.passed { "pass" } else { "fail" })
    }
}

/// Discrete weak form against the interior hat functions `w_i`, the hats
/// being piecewise linear in `u = psi(x)`.
///
/// The left Hilfer derivative of a hat is known in closed form (independent
/// of `beta`, since hats vanish at the origin); it is integrated cell by cell
/// in `x` with Gauss-Legendre against the linear interpolant of the nodal
/// `D_{0+} u`. That makes `B(u, w_i) = (H · D_{0+} u)_i`.
#[derive(Debug, Clone)]
pub struct WeakForm<S> {
    h: DenseMatrix<S>,
    weights: Vec<S>,
}

impl<S: Scalar> WeakForm<S> {
    pub fn new(op: &ComposedOperator<S>, alpha: S) -> Result<Self> {
        let grid = op.grid();
        let (x, u) = (grid.nodes(), grid.psi_nodes());
        let n = grid.len();
        let psi = grid.psi();
        let expo = S::one() - alpha;
        let norm = S::one() / gamma(S::lit(2.0) - alpha)?;
        let rho = |t: S| if t > S::zero() { t.powf(expo) } else { S::zero() };
        let (gx, gw) = gauss_legendre::<S>(GAUSS_POINTS);
        let h = DenseMatrix::from_rows_par(n, n, |i, row| {
            if i == 0 || i == n - 1 {
                return;
            }
            let (h1, h2) = (u[i] - u[i - 1], u[i + 1] - u[i]);
            let c_mid = S::one() / h1 + S::one() / h2;
            for k in i - 1..n - 1 {
                let dx = x[k + 1] - x[k];
                for (&t, &w) in gx.iter().zip(&gw) {
                    let uu = psi.eval(x[k] + t * dx);
                    let dw = norm * (rho(uu - u[i - 1]) / h1 - c_mid * rho(uu - u[i]) + rho(uu - u[i + 1]) / h2);
                    let wd = w * dx * dw;
                    row[k] = row[k] + (S::one() - t) * wd;
                    row[k + 1] = row[k + 1] + t * wd;
                }
            }
        });
        Ok(Self { h, weights: grid.trapezoid_weights() })
    }

    /// `B(u, w_i) = ∫ D_{0+}u · D_{0+}w_i` for every node (zero at the boundary).
    pub fn bilinear(&self, u: &Field<S>, op: &ComposedOperator<S>) -> Result<Vec<S>> {
        let du = op.d_left().apply(u)?;
        self.h.matvec(&du)
    }

    /// `L(w_i) = M(energy(u)) B(u, w_i)`.
    pub fn kirchhoff_side(&self, u: &Field<S>, spec: &ProblemSpec<S>, op: &ComposedOperator<S>) -> Result<Vec<S>> {
        let m = spec.m.eval(op.energy(u)?);
        Ok(self.bilinear(u, op)?.into_iter().map(|b| m * b).collect())
    }

    pub fn verify(
        &self,
        u: &Field<S>,
        spec: &ProblemSpec<S>,
        op: &ComposedOperator<S>,
        side: WeakSide,
    ) -> Result<WeakReport<S>> {
        let n = op.len();
        if u.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: u.len() });
        }
        for b in [0, n - 1] {
            if u[b] != S::zero() {
                return Err(Error::BoundaryNotZero { node: b });
            }
        }
        if let Some(node) = (1..n - 1).find(|&i| !(u[i] > S::zero())) {
            return Err(Error::NonPositiveInterior { node });
        }
        let lhs = self.kirchhoff_side(u, spec, op)?;
        let mut margins = Field::zeros(n);
        let mut r_sup = S::zero();
        for i in 1..n - 1 {
            let r = self.weights[i] * spec.forcing(u[i]);
            r_sup = r_sup.max(r.abs());
            margins[i] = match side {
                WeakSide::Sub => r - lhs[i],
                WeakSide::Super => lhs[i] - r,
            };
        }
        let (worst_node, worst_margin) = (1..n - 1)
            .map(|i| (i, margins[i]))
            .fold((1, S::infinity()), |b, c| if c.1 < b.1 { c } else { b });
        let tol_margin = S::lit(1e-8) * (S::one() + r_sup);
        Ok(WeakReport { side, passed: worst_margin >= -tol_margin, worst_margin, worst_node, tol_margin, margins })
    }
}

/// One-shot verification; build a [`WeakForm`] once when checking many fields.
pub fn verify_weak_inequality<S: Scalar>(
    u: &Field<S>,
    spec: &ProblemSpec<S>,
    op: &ComposedOperator<S>,
    side: WeakSide,
) -> Result<WeakReport<S>> {
    WeakForm::new(op, spec.order.alpha)?.verify(u, spec, op, side)
}
