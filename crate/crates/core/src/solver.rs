//! Projected Picard iteration between an ordered sub/supersolution pair.

use crate::analysis::{SubSuperPair, WeakForm};
use crate::assembly::ComposedOperator;
use crate::error::{Error, Result};
use crate::problem::{Field, ProblemSpec};
use crate::scalar::Scalar;

const OSCILLATION_WINDOW: usize = 50;
const STALL_PATIENCE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Start {
    /// Climb from `phi`.
    #[default]
    Sub,
    /// Descend from `xi`.
    Super,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions<S> {
    pub tol: S,
    pub max_iter: usize,
    pub start: Start,
    /// Whether the pair passed weak-form verification; only recorded.
    pub verified: bool,
}

impl<S: Scalar> Default for SolveOptions<S> {
    fn default() -> Self {
        Self { tol: S::lit(1e-10), max_iter: 2000, start: Start::Sub, verified: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<S> {
    pub converged: bool,
    pub iterations: usize,
    /// Interior `‖m_k A u_k - lambda f(u_k)‖_∞` after each step.
    pub residual_history: Vec<S>,
    /// Interior nodes clamped by the projection at each step.
    pub projection_history: Vec<usize>,
    /// `m_k = M(energy(u_k))` at each step.
    pub kirchhoff_history: Vec<S>,
    pub u: Field<S>,
    pub sandwich_ok: bool,
    pub energy_final: S,
    pub kirchhoff_coeff_final: S,
    /// Step at which damped averaging was switched on, if it was.
    pub damping_from: Option<usize>,
    /// Stopped because steps vanished while the residual did not move.
    pub stalled: bool,
    pub verified: bool,
    pub start: Start,
    /// `u > 0` at every interior node.
    pub positive: bool,
}

impl<S: Scalar> SolveReport<S> {
    pub fn final_residual(&self) -> S {
        self.residual_history.last().copied().unwrap_or(S::nan())
    }

    /// Largest projection count over the last `k` steps.
    pub fn tail_projection_activity(&self, k: usize) -> usize {
        let n = self.projection_history.len();
        self.projection_history[n.saturating_sub(k)..].iter().copied().max().unwrap_or(0)
    }
}

/// `lambda (h(u) - max(u, phi)^-nu)` on the interior, zero on the boundary.
fn forcing<S: Scalar>(u: &Field<S>, phi: &Field<S>, spec: &ProblemSpec<S>) -> Result<Vec<S>> {
    let n = u.len();
    let mut out = vec![S::zero(); n];
    for i in 1..n - 1 {
        let s = u[i].max(phi[i]);
        if !(s > S::zero()) {
            return Err(Error::NonPositiveInterior { node: i });
        }
        out[i] = spec.forcing(s);
    }
    Ok(out)
}

/// `m(u) A u - lambda f(u)` on the interior in sup-norm, and `m(u)`.
pub fn nonlinear_residual<S: Scalar>(
    u: &Field<S>,
    pair: &SubSuperPair<S>,
    spec: &ProblemSpec<S>,
    op: &ComposedOperator<S>,
) -> Result<(S, S)> {
    let m = spec.m.eval(op.energy(u)?);
    let au = op.apply(u)?;
    let f = forcing(u, &pair.phi, spec)?;
    let r = op.interior().fold(S::zero(), |acc, i| acc.max((m * au[i] - f[i]).abs()));
    Ok((r, m))
}

struct Step<S> {
    next: Field<S>,
    active: usize,
    m: S,
}

fn step<S: Scalar>(u: &Field<S>, pair: &SubSuperPair<S>, spec: &ProblemSpec<S>, op: &ComposedOperator<S>) -> Result<Step<S>> {
    let m = spec.m.eval(op.energy(u)?);
    let rhs: Vec<S> = forcing(u, &pair.phi, spec)?.into_iter().map(|v| v / m).collect();
    let mut v = op.solve_dirichlet(&rhs)?;
    let mut active = 0;
    for i in op.interior() {
        if v[i] < pair.phi[i] || v[i] > pair.xi[i] {
            active += 1;
        }
        v[i] = v[i].max(pair.phi[i]).min(pair.xi[i]);
    }
    Ok(Step { next: v, active, m })
}

/// One Picard step: solve `m_k A v = lambda f(u_k)` and clamp `v` into `[phi, xi]`.
pub fn picard_step<S: Scalar>(
    u_k: &Field<S>,
    pair: &SubSuperPair<S>,
    spec: &ProblemSpec<S>,
    op: &ComposedOperator<S>,
) -> Result<Field<S>> {
    Ok(step(u_k, pair, spec, op)?.next)
}

pub fn solve_between<S: Scalar>(
    pair: &SubSuperPair<S>,
    spec: &ProblemSpec<S>,
    op: &ComposedOperator<S>,
    opts: SolveOptions<S>,
) -> Result<SolveReport<S>> {
    let n = op.len();
    if pair.phi.len() != n || pair.xi.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: pair.phi.len() });
    }
    let mut u = match opts.start {
        Start::Sub => pair.phi.clone(),
        Start::Super => pair.xi.clone(),
    };
    let mut report = SolveReport {
        converged: false,
        iterations: 0,
        residual_history: Vec::new(),
        projection_history: Vec::new(),
        kirchhoff_history: Vec::new(),
        u: u.clone(),
        sandwich_ok: true,
        energy_final: S::zero(),
        kirchhoff_coeff_final: S::zero(),
        damping_from: None,
        stalled: false,
        verified: opts.verified,
        start: opts.start,
        positive: false,
    };
    if pair.phi.max_abs_diff(&pair.xi) == S::zero() {
        return finish(report, u, pair, spec, op);
    }
    let res_goal = S::lit(100.0) * opts.tol;
    let mut quiet = 0;
    for k in 1..=opts.max_iter {
        let st = step(&u, pair, spec, op)?;
        let mut next = st.next;
        if report.damping_from.is_some() {
            for (a, &b) in next.iter_mut().zip(u.iter()) {
                *a = (*a + b) / S::lit(2.0);
            }
        }
        let change = next.max_abs_diff(&u);
        let scale = S::one() + u.sup_norm();
        u = next;
        let (res, _) = nonlinear_residual(&u, pair, spec, op)?;
        let prev = report.residual_history.last().copied();
        report.residual_history.push(res);
        report.projection_history.push(st.active);
        report.kirchhoff_history.push(st.m);
        report.iterations = k;

        let small_step = change <= opts.tol * scale;
        if small_step && res <= res_goal {
            report.converged = true;
            break;
        }
        let flat = prev.is_some_and(|p| res >= p * (S::one() - S::lit(1e-3)));
        quiet = if small_step && flat { quiet + 1 } else { 0 };
        if quiet >= STALL_PATIENCE {
            report.stalled = true;
            break;
        }
        if report.damping_from.is_none() && k % OSCILLATION_WINDOW == 0 {
            let w = &report.residual_history[k - OSCILLATION_WINDOW..k];
            if w.windows(2).any(|p| p[1] > p[0]) && w[w.len() - 1] >= w[0] {
                report.damping_from = Some(k);
            }
        }
    }
    finish(report, u, pair, spec, op)
}

fn finish<S: Scalar>(
    mut report: SolveReport<S>,
    u: Field<S>,
    pair: &SubSuperPair<S>,
    spec: &ProblemSpec<S>,
    op: &ComposedOperator<S>,
) -> Result<SolveReport<S>> {
    report.sandwich_ok = pair.phi.is_ordered_below(&u) && u.is_ordered_below(&pair.xi);
    report.energy_final = op.energy(&u)?;
    report.kirchhoff_coeff_final = spec.m.eval(report.energy_final);
    report.positive = u.min_interior() > S::zero();
    report.converged = report.converged && report.sandwich_ok;
    report.u = u;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparisonVerdict {
    /// `M(E(θ1)) B(θ1, w) <= M(E(θ2)) B(θ2, w)` fails for some hat `w`.
    HypothesisFails,
    /// Hypothesis holds and `θ1 <= θ2`.
    Consistent,
    /// Hypothesis holds but `θ1 <= θ2` does not.
    Counterexample,
}

impl ComparisonVerdict {
    pub fn name(self) -> &'static str {
        match self {
            ComparisonVerdict::HypothesisFails => "hypothesis-fails",
            ComparisonVerdict::Consistent => "consistent",
            ComparisonVerdict::Counterexample => "counterexample",
        }
    }
}

/// Discrete comparison principle check against the hat basis.
pub fn comparison_check<S: Scalar>(
    theta1: &Field<S>,
    theta2: &Field<S>,
    spec: &ProblemSpec<S>,
    op: &ComposedOperator<S>,
    form: &WeakForm<S>,
) -> Result<ComparisonVerdict> {
    let n = op.len();
    for t in [theta1, theta2] {
        if t.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: t.len() });
        }
        for b in [0, n - 1] {
            if t[b] != S::zero() {
                return Err(Error::BoundaryNotZero { node: b });
            }
        }
    }
    let l1 = form.kirchhoff_side(theta1, spec, op)?;
    let l2 = form.kirchhoff_side(theta2, spec, op)?;
    let scale = op.interior().fold(S::zero(), |m, i| m.max(l1[i].abs()).max(l2[i].abs()));
    let slack = S::lit(1e-10) * (S::one() + scale);
    if op.interior().any(|i| l1[i] > l2[i] + slack) {
        return Ok(ComparisonVerdict::HypothesisFails);
    }
    Ok(if theta1.is_ordered_below(theta2) { ComparisonVerdict::Consistent } else { ComparisonVerdict::Counterexample })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{assemble_composed, principal_eigenpair, solve_e, EigenPair};
    use crate::problem::{classical_spec, Nonlinearity};
    use std::f64::consts::PI;

    fn setup(n: usize, lambda: f64) -> (ProblemSpec<f64>, ComposedOperator<f64>, EigenPair<f64>, Field<f64>) {
        let spec = classical_spec(n, lambda);
        let op = assemble_composed(&spec).unwrap();
        let eig = principal_eigenpair(&op, 1e-12, 20_000).unwrap();
        let e = solve_e(&op).unwrap();
        (spec, op, eig, e)
    }

    #[test]
    fn converges_and_is_fixed_point() {
        let (spec, op, eig, e) = setup(129, 50.0);
        let pair = SubSuperPair::construct(50.0, 0.8, 0.5, &spec.h, 1.0, &eig, &e).unwrap();
        let rep = solve_between(&pair, &spec, &op, SolveOptions::default()).unwrap();
        assert!(rep.converged && rep.sandwich_ok && rep.positive);
        assert!(rep.final_residual() < 1e-8);
        assert!(rep.final_residual() < rep.residual_history[0]);
        assert_eq!(rep.tail_projection_activity(10), 0);
        let again = picard_step(&rep.u, &pair, &spec, &op).unwrap();
        assert!(again.max_abs_diff(&rep.u) < 1e-9 * (1.0 + rep.u.sup_norm()));

        let first = picard_step(&pair.phi, &pair, &spec, &op).unwrap();
        assert!(first[64] > pair.phi[64]);

        let down = solve_between(&pair, &spec, &op, SolveOptions { start: Start::Super, ..Default::default() }).unwrap();
        assert!(down.converged);
    }

    #[test]
    fn below_threshold_stalls_at_floor() {
        let (spec, op, eig, e) = setup(129, 4.0);
        let pair = SubSuperPair::construct(4.0, 0.8, 0.5, &spec.h, 1.0, &eig, &e).unwrap();
        let rep = solve_between(&pair, &spec, &op, SolveOptions::default()).unwrap();
        assert!(!rep.converged);
        assert!(rep.tail_projection_activity(10) > 0);
        assert!(rep.u.max_abs_diff(&pair.phi) < 1e-12);
    }

    #[test]
    fn zero_forcing_clamps_to_floor() {
        let (mut spec, op, eig, e) = setup(65, 50.0);
        spec.h = Nonlinearity::zero();
        let pair = SubSuperPair::construct(50.0, 0.8, 0.5, &Nonlinearity::sqrt(), 1.0, &eig, &e).unwrap();
        let v = picard_step(&pair.phi, &pair, &spec, &op).unwrap();
        assert_eq!(v, pair.phi);
    }

    #[test]
    fn degenerate_pair_returns_immediately() {
        let (spec, op, _, _) = setup(33, 50.0);
        let pair = SubSuperPair { phi: Field::zeros(33), xi: Field::zeros(33), r: 0.8, zeta: 1.0 };
        let rep = solve_between(&pair, &spec, &op, SolveOptions::default()).unwrap();
        assert!(!rep.converged && !rep.positive && rep.iterations == 0);
    }

    #[test]
    fn comparison_examples() {
        let (spec, op, _, _) = setup(65, 1.0);
        let form = WeakForm::new(&op, 1.0).unwrap();
        let s = op.grid().field_from_fn(|x| (PI * x).sin());
        let mut s = s;
        s[64] = 0.0;
        let s2 = s.scaled(2.0);
        assert_eq!(comparison_check(&s, &s, &spec, &op, &form).unwrap(), ComparisonVerdict::Consistent);
        assert_eq!(comparison_check(&s, &s2, &spec, &op, &form).unwrap(), ComparisonVerdict::Consistent);
        assert_eq!(comparison_check(&s2, &s, &spec, &op, &form).unwrap(), ComparisonVerdict::HypothesisFails);
    }
}
