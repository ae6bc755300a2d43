use crate::error::Result;
use crate::linalg::DenseMatrix;
use crate::problem::{FractionalOrder, Grid};
use crate::scalar::Scalar;
use crate::special::gamma;

use super::integral::integral_or_identity;
use super::{OperatorMatrix, OperatorTag, Side};

/// How the Hilfer composition `I^{g1} (±d/du) I^{g2}` is discretised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HilferScheme {
    /// Moves the outer integral through the derivative,
    /// `I^{g1} D I^{g2} f = D I^{1-alpha} f - (I^{g2} f)(0) (u - u_0)^{g1-1} / Γ(g1)`,
    /// so only one integral of order `1 - alpha` is discretised. The boundary term
    /// is non-zero only for `g2 = 0`.
    #[default]
    Commuted,
    /// The literal product of the three discrete factors.
    Composed,
}

/// Three-point stencil: `(first column, weights)`.
#[derive(Debug, Clone, Copy)]
struct StencilRow<S> {
    start: usize,
    w: [S; 3],
}

/// Weights of the derivative at `at` of the quadratic through `x0, x1, x2`.
fn lagrange_slope<S: Scalar>(x0: S, x1: S, x2: S, at: S) -> [S; 3] {
    [
        ((at - x1) + (at - x2)) / ((x0 - x1) * (x0 - x2)),
        ((at - x0) + (at - x2)) / ((x1 - x0) * (x1 - x2)),
        ((at - x0) + (at - x1)) / ((x2 - x0) * (x2 - x1)),
    ]
}

/// `d/du` on the psi nodes: central inside, one-sided second order at the ends.
/// Differentiating in `u` is `(1/psi') d/dx` without dividing by `psi'`.
fn d1_stencil<S: Scalar>(grid: &Grid<S>) -> Vec<StencilRow<S>> {
    let u = grid.psi_nodes();
    let n = u.len();
    (0..n)
        .map(|i| {
            let start = i.saturating_sub(1).min(n - 3);
            StencilRow { start, w: lagrange_slope(u[start], u[start + 1], u[start + 2], u[i]) }
        })
        .collect()
}

fn stencil_times<S: Scalar>(stencil: &[StencilRow<S>], sign: S, rhs: &DenseMatrix<S>) -> DenseMatrix<S> {
    let n = rhs.cols();
    DenseMatrix::from_rows_par(stencil.len(), n, |i, row| {
        let st = stencil[i];
        for (k, &w) in st.w.iter().enumerate() {
            let w = sign * w;
            for (o, &v) in row.iter_mut().zip(rhs.row(st.start + k)) {
                *o = *o + w * v;
            }
        }
    })
}

/// The first-derivative matrix `(1/psi') d/dx`.
pub fn d1_matrix<S: Scalar>(grid: &Grid<S>) -> OperatorMatrix<S> {
    let n = grid.len();
    let mut m = DenseMatrix::zeros(n, n);
    for (i, st) in d1_stencil(grid).into_iter().enumerate() {
        for k in 0..3 {
            m[(i, st.start + k)] = st.w[k];
        }
    }
    OperatorMatrix::new(m, OperatorTag::D1Psi)
}

pub fn hilfer_derivative_matrix<S: Scalar>(
    grid: &Grid<S>,
    order: FractionalOrder<S>,
    side: Side,
) -> Result<OperatorMatrix<S>> {
    hilfer_derivative_matrix_with(grid, order, side, HilferScheme::default())
}

pub fn hilfer_derivative_matrix_with<S: Scalar>(
    grid: &Grid<S>,
    order: FractionalOrder<S>,
    side: Side,
    scheme: HilferScheme,
) -> Result<OperatorMatrix<S>> {
    let (g1, g2) = (order.outer_integral_order(), order.inner_integral_order());
    let sign = match side {
        Side::Left => S::one(),
        Side::Right => -S::one(),
    };
    let stencil = d1_stencil(grid);
    let entries = match scheme {
        HilferScheme::Composed => {
            let inner = stencil_times(&stencil, sign, &integral_or_identity(grid, g2, side)?);
            if g1 == S::zero() {
                inner
            } else {
                integral_or_identity(grid, g1, side)?.matmul(&inner)?
            }
        }
        HilferScheme::Commuted => {
            let whole = integral_or_identity(grid, S::one() - order.alpha, side)?;
            let mut m = stencil_times(&stencil, sign, &whole);
            if g2 == S::zero() && g1 > S::zero() {
                subtract_boundary_kernel(&mut m, grid, g1, side)?;
            }
            m
        }
    };
    let tag = match side {
        Side::Left => OperatorTag::HilferLeft,
        Side::Right => OperatorTag::HilferRight,
    };
    Ok(OperatorMatrix::new(entries, tag))
}

/// Removes `f(end) (|u - u_end|)^{g-1} / Γ(g)` where `end` is the side's anchor node.
/// The anchor row itself is left undefined by the kernel and set to zero.
fn subtract_boundary_kernel<S: Scalar>(m: &mut DenseMatrix<S>, grid: &Grid<S>, g: S, side: Side) -> Result<()> {
    let u = grid.psi_nodes();
    let n = u.len();
    let norm = gamma(g)?;
    let anchor = match side {
        Side::Left => 0,
        Side::Right => n - 1,
    };
    for i in (0..n).filter(|&i| i != anchor) {
        let dist = (u[i] - u[anchor]).abs();
        m[(i, anchor)] = m[(i, anchor)] - dist.powf(g - S::one()) / norm;
    }
    m.row_mut(anchor).iter_mut().for_each(|v| *v = S::zero());
    Ok(())
}
