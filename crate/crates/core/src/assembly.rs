//! The composed operator `A = D_T ∘ D_{0+}` with Dirichlet rows, its principal
//! eigenpair, and the torsion-like function `e` solving `A e = 1`.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::linalg::Lu;
use crate::problem::{validate_spec, Field, Grid, ProblemSpec};
use crate::psi_calculus::{hilfer_derivative_matrix_with, HilferScheme, OperatorMatrix, OperatorTag, Side};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct ComposedOperator<S> {
    a_full: OperatorMatrix<S>,
    d_left: OperatorMatrix<S>,
    grid: Grid<S>,
    interior_lu: Lu<S>,
}

impl<S: Scalar> ComposedOperator<S> {
    /// Full matrix; boundary rows are unit rows.
    pub fn a_full(&self) -> &OperatorMatrix<S> {
        &self.a_full
    }

    pub fn d_left(&self) -> &OperatorMatrix<S> {
        &self.d_left
    }

    pub fn grid(&self) -> &Grid<S> {
        &self.grid
    }

    pub fn interior(&self) -> Range<usize> {
        self.grid.interior()
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn apply(&self, f: &Field<S>) -> Result<Field<S>> {
        self.a_full.apply(f)
    }

    /// Solves `A v = rhs` on the interior with `v = 0` on the boundary.
    /// Boundary entries of `rhs` are ignored.
    pub fn solve_dirichlet(&self, rhs: &[S]) -> Result<Field<S>> {
        let n = self.len();
        if rhs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: rhs.len() });
        }
        let inner = self.interior_lu.solve(&rhs[self.interior()])?;
        let mut out = Field::zeros(n);
        out[self.interior()].copy_from_slice(&inner);
        Ok(out)
    }

    /// `‖(A u)_i - rhs_i‖_∞` over interior nodes.
    pub fn interior_residual(&self, u: &Field<S>, rhs: &[S]) -> Result<S> {
        let au = self.apply(u)?;
        Ok(self.interior().fold(S::zero(), |m, i| m.max((au[i] - rhs[i]).abs())))
    }

    /// Trapezoid quadrature of `|D_{0+} u|²`.
    pub fn energy(&self, u: &Field<S>) -> Result<S> {
        let du = self.d_left.apply(u)?;
        let sq: Vec<S> = du.iter().map(|&v| v * v).collect();
        Ok(self.grid.integrate(&sq))
    }
}

pub fn assemble_composed<S: Scalar>(spec: &ProblemSpec<S>) -> Result<ComposedOperator<S>> {
    assemble_composed_with(spec, HilferScheme::default())
}

pub fn assemble_composed_with<S: Scalar>(spec: &ProblemSpec<S>, scheme: HilferScheme) -> Result<ComposedOperator<S>> {
    let violations = validate_spec(spec);
    if !violations.is_empty() {
        let msg: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(Error::InvalidArgument(msg.join("; ")));
    }
    let grid = spec.grid()?;
    let d_left = hilfer_derivative_matrix_with(&grid, spec.order, Side::Left, scheme)?;
    let d_right = hilfer_derivative_matrix_with(&grid, spec.order, Side::Right, scheme)?;
    let mut a = d_right.compose(&d_left, OperatorTag::Composed)?.into_entries();
    let n = grid.len();
    for b in grid.boundary() {
        a.row_mut(b).iter_mut().for_each(|v| *v = S::zero());
        a[(b, b)] = S::one();
    }
    let interior_lu = Lu::factor(&a.block(1, n - 1))?;
    Ok(ComposedOperator { a_full: OperatorMatrix::new(a, OperatorTag::Composed), d_left, grid, interior_lu })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair<S> {
    pub lambda1: S,
    /// Sup-norm one, positive at its largest entry, zero on the boundary.
    pub psi1: Field<S>,
    pub iterations: usize,
    /// `‖A psi1 - lambda1 psi1‖_∞` on the interior.
    pub residual: S,
    /// Negative values flag a coarse or non-monotone discretisation.
    pub psi1_min_interior: S,
}

/// Inverse power iteration on the interior block.
///
/// The start vector is the positive bump `(u - u_0)(u_end - u)`, which is
/// nearly orthogonal to the odd/even mode the wide classical stencil carries
/// just above the principal eigenvalue. Stops once successive Rayleigh
/// quotients agree to `tol` relative and the eigen-residual is below `10 tol lambda1`.
pub fn principal_eigenpair<S: Scalar>(op: &ComposedOperator<S>, tol: S, max_iter: usize) -> Result<EigenPair<S>> {
    let u = op.grid().psi_nodes();
    let (u0, u_end) = (u[0], u[u.len() - 1]);
    let mut v = Field(u.iter().map(|&x| (x - u0) * (u_end - x)).collect());
    normalize(&mut v);
    let mut lambda = S::nan();
    let ten = S::lit(10.0);
    for it in 1..=max_iter {
        let w = op.solve_dirichlet(&v)?;
        let ww: S = w.iter().map(|&a| a * a).sum();
        let vw: S = w.iter().zip(v.iter()).map(|(&a, &b)| a * b).sum();
        let next = vw / ww;
        v = w;
        normalize(&mut v);
        let settled = (next - lambda).abs() <= tol * next.abs();
        lambda = next;
        if settled {
            let scaled = v.scaled(lambda);
            let residual = op.interior_residual(&v, &scaled)?;
            if residual <= ten * tol * lambda.abs() {
                let psi1_min_interior = v.min_interior();
                return Ok(EigenPair { lambda1: lambda, psi1: v, iterations: it, residual, psi1_min_interior });
            }
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, last_change: lambda.to_f64_lossy() })
}

fn normalize<S: Scalar>(v: &mut Field<S>) {
    let (mut best, mut at) = (S::zero(), 0);
    for (i, &x) in v.iter().enumerate() {
        if x.abs() > best {
            best = x.abs();
            at = i;
        }
    }
    let s = S::one() / v[at];
    v.iter_mut().for_each(|x| *x = *x * s);
}

/// Solves `A e = 1` with Dirichlet data. Positivity is not enforced; check
/// `min_interior` on the result.
pub fn solve_e<S: Scalar>(op: &ComposedOperator<S>) -> Result<Field<S>> {
    op.solve_dirichlet(&vec![S::one(); op.len()])
}

pub fn energy<S: Scalar>(u: &Field<S>, op: &ComposedOperator<S>) -> Result<S> {
    op.energy(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{classical_spec, FractionalOrder};
    use std::f64::consts::PI;

    #[test]
    fn classical_rows_are_wide_second_difference() {
        let op = assemble_composed(&classical_spec(9, 1.0)).unwrap();
        let a = op.a_full().entries();
        let h = 1.0 / 8.0;
        // Interior rows away from the ends: (-u_{i-2} + 2u_i - u_{i+2}) / (4h²).
        for i in 2..7 {
            for j in 0..9 {
                let expect = match j as isize - i as isize {
                    0 => 2.0,
                    2 | -2 => -1.0,
                    _ => 0.0,
                } / (4.0 * h * h);
                assert!((a[(i, j)] - expect).abs() < 1e-10, "({i},{j}) {} vs {expect}", a[(i, j)]);
            }
        }
        assert_eq!(a.row(0)[0], 1.0);
        assert!(a.row(0)[1..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn classical_sine_image() {
        let op = assemble_composed(&classical_spec(257, 1.0)).unwrap();
        let f = op.grid().field_from_fn(|x| (PI * x).sin());
        let af = op.apply(&f).unwrap();
        let c = op.grid().collar_start();
        for i in c..257 - c {
            assert!((af[i] - PI * PI * f[i]).abs() < 2e-3 * PI * PI, "node {i}");
        }
        let zero = op.apply(&Field::zeros(257)).unwrap();
        assert!(zero.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn classical_eigenpair_and_e() {
        let op = assemble_composed(&classical_spec(257, 1.0)).unwrap();
        let eig = principal_eigenpair(&op, 1e-12, 20_000).unwrap();
        assert!((eig.lambda1 - PI * PI).abs() < 0.01 * PI * PI, "{}", eig.lambda1);
        assert!(eig.psi1_min_interior > 0.0);
        assert!(eig.residual <= 10.0 * 1e-12 * eig.lambda1);
        let e = solve_e(&op).unwrap();
        let exact = op.grid().field_from_fn(|x| x * (1.0 - x) / 2.0);
        assert!(e.max_abs_diff(&exact) < 1e-3);
        assert_eq!(e[0], 0.0);
        assert_eq!(e[256], 0.0);
    }

    #[test]
    fn eigenvalue_scales_with_interval() {
        let mut spec = classical_spec(129, 1.0);
        spec.t_end = 2.0;
        let op = assemble_composed(&spec).unwrap();
        let eig = principal_eigenpair(&op, 1e-12, 20_000).unwrap();
        assert!((eig.lambda1 - PI * PI / 4.0).abs() < 0.01 * PI * PI / 4.0);
        let e = solve_e(&op).unwrap();
        assert!((e.sup_norm() - 0.5).abs() < 5e-3);
    }

    #[test]
    fn energy_of_sine() {
        let op = assemble_composed(&classical_spec(257, 1.0)).unwrap();
        let f = op.grid().field_from_fn(|x| (PI * x).sin());
        let en = op.energy(&f).unwrap();
        assert!((en - PI * PI / 2.0).abs() < 1e-3);
        assert!((op.energy(&f.scaled(3.0)).unwrap() - 9.0 * en).abs() < 1e-9);
        assert_eq!(energy(&Field::zeros(257), &op).unwrap(), 0.0);
    }

    #[test]
    fn invalid_spec_rejected() {
        let spec = ProblemSpec { order: FractionalOrder::new(0.3, 0.5), ..classical_spec(33, 1.0) };
        assert!(matches!(assemble_composed(&spec), Err(Error::InvalidArgument(m)) if m.contains("alpha")));
    }
}
