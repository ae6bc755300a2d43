use std::sync::OnceLock;

use hilfer_kirchhoff::analysis::{build_subsolution, linear_majorant, zeta_lambda, SubSuperPair};
use hilfer_kirchhoff::assembly::{assemble_composed, principal_eigenpair, solve_e, ComposedOperator, EigenPair};
use hilfer_kirchhoff::problem::{
    Field, FractionalOrder, Grid, KirchhoffFn, Nonlinearity, ProblemSpec, PsiFunction,
};
use hilfer_kirchhoff::psi_calculus::{frac_integral_matrix, Side};
use hilfer_kirchhoff::Error;
use proptest::prelude::*;

fn spec(alpha: f64, psi: PsiFunction<f64>, t_end: f64, n: usize) -> ProblemSpec<f64> {
    ProblemSpec {
        order: FractionalOrder::new(alpha, 0.5),
        psi,
        t_end,
        grid_n: n,
        m: KirchhoffFn::Constant { c: 1.0 },
        h: Nonlinearity::sqrt(),
        nu: 0.5,
        lambda: 1.0,
    }
}

fn classical() -> &'static (ComposedOperator<f64>, EigenPair<f64>, Field<f64>) {
    static CELL: OnceLock<(ComposedOperator<f64>, EigenPair<f64>, Field<f64>)> = OnceLock::new();
    CELL.get_or_init(|| {
        let op = assemble_composed(&spec(1.0, PsiFunction::Identity, 1.0, 129)).unwrap();
        let eig = principal_eigenpair(&op, 1e-12, 50_000).unwrap();
        let e = solve_e(&op).unwrap();
        (op, eig, e)
    })
}

fn any_psi() -> impl Strategy<Value = PsiFunction<f64>> {
    prop_oneof![
        Just(PsiFunction::Identity),
        (0.2f64..3.0).prop_map(|k| PsiFunction::ExpMinusOne { k }),
        Just(PsiFunction::Square),
        Just(PsiFunction::Log1p),
    ]
}

fn any_h() -> impl Strategy<Value = Nonlinearity<f64>> {
    (0usize..4).prop_map(|k| Nonlinearity::catalog()[k])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn psi_increasing_from_origin(psi in any_psi(), x in 1e-6f64..5.0, dx in 1e-6f64..1.0) {
        prop_assert_eq!(psi.eval(0.0), 0.0);
        prop_assert!(psi.eval(x + dx) > psi.eval(x));
        prop_assert!(psi.derivative(x) > 0.0);
    }

    #[test]
    fn majorant_dominates(h in any_h(), nu in 0.1f64..0.9, a in 0.5f64..4.0, t in 0.0f64..1.0) {
        if let Ok(m) = linear_majorant(&h, nu, a, 1e6) {
            prop_assert!(m.b > 0.0);
            let (lo, hi) = m.scan_range;
            let s = (lo.ln() + t * (hi.ln() - lo.ln())).exp();
            prop_assert!(m.excess(&h, nu, s) <= 0.0, "excess {} at {}", m.excess(&h, nu, s), s);
        }
    }

    #[test]
    fn zeta_is_smallest_admissible(h in any_h(), lambda in 0.1f64..200.0, e_sup in 0.01f64..1.0) {
        let z = zeta_lambda(&h, lambda, 1.0, e_sup).unwrap();
        prop_assert!(z > 0.0);
        prop_assert!(z >= lambda * h.eval(z * e_sup));
        if h.is_strictly_increasing() && z > 1e-9 {
            let w = z / 1.01;
            prop_assert!(w < lambda * h.eval(w * e_sup));
        }
    }

    #[test]
    fn exponent_window_enforced(nu in prop::sample::select(vec![0.1f64, 0.5, 0.9]), t in 0.0f64..1.0) {
        let (_, eig, _) = classical();
        let lower = 1.0 / (1.0 + nu);
        let outside = t * lower;
        let is_window_error = matches!(build_subsolution(10.0, outside, nu, eig), Err(Error::ExponentOutsideWindow { .. }));
        prop_assert!(is_window_error);
        let above = matches!(build_subsolution(10.0, 1.0 + t, nu, eig), Err(Error::ExponentOutsideWindow { .. }));
        prop_assert!(above);
        let inside = lower + (1.0 - lower) * (0.01 + 0.98 * t);
        prop_assert!(build_subsolution(10.0, inside, nu, eig).is_ok());
    }

    #[test]
    fn pair_ordered_after_raise(h in any_h(), lambda in 0.5f64..300.0, r in 0.67f64..0.99) {
        let (_, eig, e) = classical();
        let pair = SubSuperPair::construct(lambda, r, 0.5, &h, 1.0, eig, e).unwrap();
        prop_assert!(pair.phi.is_ordered_below(&pair.xi));
        prop_assert!(pair.phi.min_interior() > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn eigen_residual_small(alpha in 0.55f64..=1.0, psi in any_psi()) {
        let op = assemble_composed(&spec(alpha, psi, 1.0, 65)).unwrap();
        let eig = principal_eigenpair(&op, 1e-11, 50_000).unwrap();
        prop_assert!(eig.lambda1 > 0.0);
        let a_psi = op.apply(&eig.psi1).unwrap();
        let res = op.interior().map(|i| (a_psi[i] - eig.lambda1 * eig.psi1[i]).abs()).fold(0.0, f64::max);
        prop_assert!(res <= 1e-8 * eig.lambda1 * eig.psi1.sup_norm(), "residual {res}");
    }

    #[test]
    fn integral_semigroup_close(psi in any_psi(), p in 0.25f64..0.75, q in 0.25f64..0.75) {
        let g = Grid::new(1.0f64, 129, psi).unwrap();
        let f = g.field_from_fn(|x| 1.0 + x);
        let ip = frac_integral_matrix(&g, p, Side::Left).unwrap();
        let iq = frac_integral_matrix(&g, q, Side::Left).unwrap();
        let lhs = ip.apply(&iq.apply(&f).unwrap()).unwrap();
        let rhs = if p + q <= 1.0 {
            frac_integral_matrix(&g, p + q, Side::Left).unwrap().apply(&f).unwrap()
        } else {
            let i1 = frac_integral_matrix(&g, 1.0, Side::Left).unwrap();
            let rest = frac_integral_matrix(&g, p + q - 1.0, Side::Left).unwrap();
            i1.apply(&rest.apply(&f).unwrap()).unwrap()
        };
        prop_assert!(lhs.max_abs_diff(&rhs) < 2e-2 * (1.0 + rhs.sup_norm()));
    }
}

#[test]
fn lambda1_decreases_with_interval_length() {
    for alpha in [0.75, 1.0] {
        let l: Vec<f64> = [0.5, 1.0, 2.0]
            .iter()
            .map(|&t| {
                let op = assemble_composed(&spec(alpha, PsiFunction::Identity, t, 129)).unwrap();
                principal_eigenpair(&op, 1e-11, 50_000).unwrap().lambda1
            })
            .collect();
        assert!(l[0] > l[1] && l[1] > l[2], "alpha {alpha}: {l:?}");
    }
}

#[test]
fn e_and_psi1_positive_classical_all_psi() {
    for psi in PsiFunction::<f64>::catalog() {
        let op = assemble_composed(&spec(1.0, psi, 1.0, 129)).unwrap();
        let e = solve_e(&op).unwrap();
        let eig = principal_eigenpair(&op, 1e-11, 50_000).unwrap();
        assert!(e.min_interior() > 0.0, "{}", psi.name());
        assert!(eig.psi1_min_interior > 0.0, "{}", psi.name());
    }
}

#[test]
fn e_positivity_reported_fractional() {
    for alpha in [0.6, 0.75, 0.9] {
        for psi in PsiFunction::<f64>::catalog() {
            let op = assemble_composed(&spec(alpha, psi, 1.0, 129)).unwrap();
            let e = solve_e(&op).unwrap();
            let eig = principal_eigenpair(&op, 1e-11, 50_000).unwrap();
            println!(
                "alpha {alpha} psi {}: min e = {:.3e}, min psi1 = {:.3e}",
                psi.name(),
                e.min_interior(),
                eig.psi1_min_interior
            );
        }
    }
}
