//! Product-integration weights for left and right psi-Riemann-Liouville integrals.
//!
//! The integrand is interpolated linearly in `u = psi(x)` and the kernel
//! moments over each cell are integrated exactly.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::problem::Grid;
use crate::scalar::Scalar;
use crate::special::gamma;

use super::{OperatorMatrix, OperatorTag, Side};

/// `(m0, m_hi)` with `m0 = ∫ t^(a-1) dt` and `m_hi = ∫ t^(a-1) (t_hi - t) dt` over `[t_lo, t_hi]`.
///
/// Far from the singularity the naive difference of powers cancels badly,
/// so there the moments are expanded in `q = (t_hi - t_lo) / t_hi`.
pub(crate) fn cell_moments<S: Scalar>(t_lo: S, t_hi: S, a: S) -> (S, S) {
    let q = (t_hi - t_lo) / t_hi;
    let half = S::lit(0.5);
    if q > half {
        let m0 = (t_hi.powf(a) - t_lo.powf(a)) / a;
        let a1 = a + S::one();
        let m_hi = t_hi * m0 - (t_hi.powf(a1) - t_lo.powf(a1)) / a1;
        return (m0, m_hi);
    }
    let m0 = -t_hi.powf(a) * (a * (-q).ln_1p()).exp_m1() / a;
    // ∫_0^q (1-s)^(a-1) s ds as a binomial series.
    let mut coef = S::one();
    let mut qpow = q * q;
    let mut sum = qpow * half;
    for k in 1..400 {
        let kk = S::from_usize_lossy(k);
        coef = coef * (kk - a) / kk;
        qpow = qpow * q;
        let term = coef * qpow / (kk + S::lit(2.0));
        sum = sum + term;
        if term.abs() <= S::epsilon() * sum.abs() {
            break;
        }
    }
    (m0, t_hi.powf(a + S::one()) * sum)
}

/// Dense matrix of the `side` integral of the given order; order zero is the identity.
pub(crate) fn integral_or_identity<S: Scalar>(grid: &Grid<S>, order: S, side: Side) -> Result<DenseMatrix<S>> {
    let n = grid.len();
    if order == S::zero() {
        return Ok(DenseMatrix::identity(n));
    }
    if !(order > S::zero() && order <= S::one()) {
        return Err(Error::InvalidOrder(order.to_f64_lossy()));
    }
    let norm = S::one() / gamma(order)?;
    let u = grid.psi_nodes();
    Ok(DenseMatrix::from_rows_par(n, n, |i, row| match side {
        Side::Left => {
            for j in 0..i {
                let h = u[j + 1] - u[j];
                let (m0, m_hi) = cell_moments(u[i] - u[j + 1], u[i] - u[j], order);
                row[j + 1] = row[j + 1] + norm * m_hi / h;
                row[j] = row[j] + norm * (m0 - m_hi / h);
            }
        }
        Side::Right => {
            for j in i..n - 1 {
                let h = u[j + 1] - u[j];
                let (m0, m_hi) = cell_moments(u[j] - u[i], u[j + 1] - u[i], order);
                row[j] = row[j] + norm * m_hi / h;
                row[j + 1] = row[j + 1] + norm * (m0 - m_hi / h);
            }
        }
    }))
}

/// Left (`I_{0+}`) or right (`I_{T-}`) psi-Riemann-Liouville integral of order in `(0, 1]`.
pub fn frac_integral_matrix<S: Scalar>(grid: &Grid<S>, order: S, side: Side) -> Result<OperatorMatrix<S>> {
    if !(order > S::zero() && order <= S::one()) {
        return Err(Error::InvalidOrder(order.to_f64_lossy()));
    }
    let tag = match side {
        Side::Left => OperatorTag::IntLeft,
        Side::Right => OperatorTag::IntRight,
    };
    Ok(OperatorMatrix::new(integral_or_identity(grid, order, side)?, tag))
}
