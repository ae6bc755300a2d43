use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use hilfer_kirchhoff::analysis::{
    empirical_mu2, linear_majorant, nonexistence_threshold, LambdaGrid, Majorant, SubSuperPair, WeakForm, WeakSide,
};
use hilfer_kirchhoff::assembly::{assemble_composed, principal_eigenpair, solve_e, ComposedOperator, EigenPair};
use hilfer_kirchhoff::problem::{Field, Grid};
use hilfer_kirchhoff::psi_calculus::{
    frac_integral_matrix, hilfer_derivative_matrix, hilfer_power_oracle, integral_power_oracle, psi_power, Side,
};
use hilfer_kirchhoff::solver::{solve_between, SolveOptions, SolveReport, Start};
use hilfer_kirchhoff::Error;

use crate::args::{Command, SideArg};
use crate::output::{num, write_csv, write_json, Cell};
use crate::{Failure, RunConfig};

const MAJORANT_SAMPLES: usize = 100_000;
const MAX_SLOPE_DOUBLINGS: usize = 60;
pub const CONVERGENCE_GRIDS: [usize; 4] = [64, 128, 256, 512];
pub const CONVERGENCE_DELTAS: [f64; 2] = [1.5, 2.5];

/// Objects every command reports: the operator, eigenpair, `e` and the majorant.
struct Baseline {
    op: ComposedOperator<f64>,
    eig: EigenPair<f64>,
    e: Field<f64>,
    majorant: Majorant<f64>,
    sampled_excess: f64,
    mu1: f64,
}

impl Baseline {
    fn new(cfg: &RunConfig) -> Result<Self, Failure> {
        let spec = &cfg.spec;
        let op = assemble_composed(spec)?;
        let eig = principal_eigenpair(&op, cfg.settings.tol, cfg.eigen_max_iter)?;
        let e = solve_e(&op)?;
        let mut a = cfg.majorant_a;
        let mut found = None;
        for _ in 0..MAX_SLOPE_DOUBLINGS {
            match linear_majorant(&spec.h, spec.nu, a, cfg.majorant_s_max) {
                Ok(m) => {
                    found = Some(m);
                    break;
                }
                Err(Error::MajorantSlopeTooSmall { .. }) => a *= 2.0,
                Err(err) => return Err(err.into()),
            }
        }
        let majorant = found.ok_or_else(|| Failure::Numerical("no majorant slope with positive intercept".into()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let sampled_excess = majorant.worst_sampled_excess(&spec.h, spec.nu, MAJORANT_SAMPLES, &mut rng);
        let mu1 = nonexistence_threshold(eig.lambda1, spec.m.zeta_inf(), majorant.a);
        Ok(Self { op, eig, e, majorant, sampled_excess, mu1 })
    }

    fn pair_at(&self, cfg: &RunConfig, lambda: f64) -> Result<SubSuperPair<f64>, Failure> {
        let s = &cfg.spec;
        Ok(SubSuperPair::construct(lambda, cfg.settings.r, s.nu, &s.h, s.m.zeta0(), &self.eig, &self.e)?)
    }

    fn report(&self, cfg: &RunConfig) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("schema".into(), json!(1));
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        m.insert("command".into(), json!(cfg.command.name()));
        m.insert("seed".into(), json!(cfg.seed));
        m.insert("config".into(), json!(cfg.echo));
        m.insert("lambda1".into(), num(self.eig.lambda1));
        m.insert("e_sup".into(), num(self.e.sup_norm()));
        m.insert("e_min_interior".into(), num(self.e.min_interior()));
        m.insert("mu1".into(), num(self.mu1));
        m.insert("empirical_mu2".into(), Value::Null);
        m.insert(
            "eigen".into(),
            json!({
                "lambda1": num(self.eig.lambda1),
                "iterations": self.eig.iterations,
                "residual": num(self.eig.residual),
                "psi1_min_interior": num(self.eig.psi1_min_interior),
            }),
        );
        m.insert(
            "majorant".into(),
            json!({
                "a": num(self.majorant.a),
                "b": num(self.majorant.b),
                "s_star": num(self.majorant.s_star),
                "s_max": num(self.majorant.scan_range.1),
                "sampled_worst_excess": num(self.sampled_excess),
            }),
        );
        m
    }
}

pub fn dispatch(cfg: &RunConfig) -> Result<(), Failure> {
    let base = Baseline::new(cfg)?;
    let mut report = base.report(cfg);
    let outcome = match &cfg.command {
        Command::Eigen => eigen(cfg, &base, &mut report),
        Command::Solve { from_super, require_verified } => solve(cfg, &base, &mut report, *from_super, *require_verified),
        Command::Verify { side } => verify(cfg, &base, &mut report, *side),
        Command::Sweep { lambda_min, lambda_max, lambda_step, mu2_step, mu2_cap } => {
            let range = LambdaGrid { start: *lambda_min, step: *lambda_step, cap: *lambda_max };
            let mu2_grid = LambdaGrid { start: 1.0, step: *mu2_step, cap: *mu2_cap };
            sweep(cfg, &base, &mut report, range, mu2_grid)
        }
        Command::Convergence => convergence(cfg, &mut report),
    };
    write_json(&cfg.output_dir, "report.json", &Value::Object(report))?;
    outcome
}

fn eigen(cfg: &RunConfig, base: &Baseline, report: &mut Map<String, Value>) -> Result<(), Failure> {
    report.insert("iterations".into(), json!(base.eig.iterations));
    report.insert("residual".into(), num(base.eig.residual));
    report.insert("psi1_min_interior".into(), num(base.eig.psi1_min_interior));
    let x = base.op.grid().nodes();
    let rows: Vec<Vec<Cell>> = (0..x.len())
        .map(|i| vec![Cell::Real(x[i]), Cell::Real(base.eig.psi1[i]), Cell::Real(base.e[i])])
        .collect();
    write_csv(&cfg.output_dir, "eigen.csv", &["x", "psi1", "e"], &rows)?;
    Ok(())
}

fn solve_report_json(rep: &SolveReport<f64>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("converged".into(), json!(rep.converged));
    m.insert("iterations".into(), json!(rep.iterations));
    m.insert("final_residual".into(), num(rep.final_residual()));
    m.insert("residual_history".into(), Value::Array(rep.residual_history.iter().map(|&v| num(v)).collect()));
    m.insert("projection_history".into(), json!(rep.projection_history));
    m.insert("sandwich_ok".into(), json!(rep.sandwich_ok));
    m.insert("energy_final".into(), num(rep.energy_final));
    m.insert("kirchhoff_coeff_final".into(), num(rep.kirchhoff_coeff_final));
    m.insert("damping_from".into(), json!(rep.damping_from));
    m.insert("stalled".into(), json!(rep.stalled));
    m.insert("verified".into(), json!(rep.verified));
    m.insert("start".into(), json!(if rep.start == Start::Super { "super" } else { "sub" }));
    m.insert("positive".into(), json!(rep.positive));
    m
}

fn solve(
    cfg: &RunConfig,
    base: &Baseline,
    report: &mut Map<String, Value>,
    from_super: bool,
    require_verified: bool,
) -> Result<(), Failure> {
    let spec = &cfg.spec;
    let pair = base.pair_at(cfg, spec.lambda)?;
    let form = WeakForm::new(&base.op, spec.order.alpha)?;
    let sub = form.verify(&pair.phi, spec, &base.op, WeakSide::Sub)?;
    let sup = form.verify(&pair.xi, spec, &base.op, WeakSide::Super)?;
    let verified = sub.passed && sup.passed;
    report.insert("sub_verdict".into(), json!(sub.verdict()));
    report.insert("super_verdict".into(), json!(sup.verdict()));
    report.insert("zeta".into(), num(pair.zeta));
    report.insert("r".into(), num(pair.r));
    if require_verified && !verified {
        return Err(Failure::Numerical(format!("pair not verified ({}, {})", sub.verdict(), sup.verdict())));
    }
    let opts = SolveOptions {
        tol: cfg.settings.tol,
        max_iter: cfg.settings.max_iter,
        start: if from_super { Start::Super } else { Start::Sub },
        verified,
    };
    let rep = solve_between(&pair, spec, &base.op, opts)?;
    report.extend(solve_report_json(&rep));
    let x = base.op.grid().nodes();
    let rows: Vec<Vec<Cell>> = (0..x.len())
        .map(|i| vec![Cell::Real(x[i]), Cell::Real(rep.u[i]), Cell::Real(pair.phi[i]), Cell::Real(pair.xi[i])])
        .collect();
    write_csv(&cfg.output_dir, "solve.csv", &["x", "u", "phi", "xi"], &rows)?;
    if rep.converged {
        Ok(())
    } else {
        Err(Failure::Numerical(format!(
            "Picard iteration did not converge after {} steps (residual {:e})",
            rep.iterations,
            rep.final_residual()
        )))
    }
}

fn verify(cfg: &RunConfig, base: &Baseline, report: &mut Map<String, Value>, side: SideArg) -> Result<(), Failure> {
    let spec = &cfg.spec;
    let pair = base.pair_at(cfg, spec.lambda)?;
    let (u, side) = match side {
        SideArg::Sub => (&pair.phi, WeakSide::Sub),
        SideArg::Super => (&pair.xi, WeakSide::Super),
    };
    let rep = hilfer_kirchhoff::analysis::verify_weak_inequality(u, spec, &base.op, side)?;
    report.insert("side".into(), json!(side.name()));
    report.insert("verdict".into(), json!(rep.verdict()));
    report.insert("worst_margin".into(), num(rep.worst_margin));
    report.insert("worst_node".into(), json!(rep.worst_node));
    report.insert("tol_margin".into(), num(rep.tol_margin));
    report.insert("zeta".into(), num(pair.zeta));
    let x = base.op.grid().nodes();
    let rows: Vec<Vec<Cell>> =
        (0..x.len()).map(|i| vec![Cell::Real(x[i]), Cell::Real(u[i]), Cell::Real(rep.margins[i])]).collect();
    write_csv(&cfg.output_dir, "verify.csv", &["x", "u", "margin"], &rows)?;
    Ok(())
}

struct SweepRow {
    lambda: f64,
    converged: bool,
    residual: f64,
    energy: f64,
    positive: bool,
}

fn sweep(
    cfg: &RunConfig,
    base: &Baseline,
    report: &mut Map<String, Value>,
    range: LambdaGrid<f64>,
    mu2_grid: LambdaGrid<f64>,
) -> Result<(), Failure> {
    if !(range.step > 0.0 && range.start > 0.0 && mu2_grid.step > 0.0) {
        return Err(Failure::Validation("sweep range needs positive start and step".into()));
    }
    let opts = SolveOptions { tol: cfg.settings.tol, max_iter: cfg.settings.max_iter, start: Start::Sub, verified: false };
    let rows: Vec<SweepRow> = range
        .values()
        .into_par_iter()
        .map(|lambda| -> Result<SweepRow, Failure> {
            let spec = cfg.spec.with_lambda(lambda);
            let pair = base.pair_at(cfg, lambda)?;
            let rep = solve_between(&pair, &spec, &base.op, opts)?;
            Ok(SweepRow {
                lambda,
                converged: rep.converged,
                residual: rep.final_residual(),
                energy: rep.energy_final,
                positive: rep.converged && rep.positive,
            })
        })
        .collect::<Result<_, _>>()?;
    let mu2 = empirical_mu2(cfg.settings.r, &cfg.spec, &base.op, &base.eig, &base.e, mu2_grid)?;
    report.insert("empirical_mu2".into(), mu2.map_or(Value::Null, num));
    report.insert("mu2_search".into(), json!({"start": mu2_grid.start, "step": mu2_grid.step, "cap": mu2_grid.cap}));
    let below = rows.iter().filter(|r| r.lambda < base.mu1).all(|r| !r.positive);
    let above = mu2.map(|m| rows.iter().filter(|r| r.lambda > m).all(|r| r.positive));
    report.insert("no_positive_below_mu1".into(), json!(below));
    report.insert("all_positive_above_mu2".into(), json!(above));
    report.insert("converged_count".into(), json!(rows.iter().filter(|r| r.converged).count()));
    let csv: Vec<Vec<Cell>> = rows
        .iter()
        .map(|r| {
            vec![
                Cell::Real(r.lambda),
                Cell::Int(r.converged as u64),
                Cell::Real(r.residual),
                Cell::Real(r.energy),
                Cell::Int(r.positive as u64),
            ]
        })
        .collect();
    write_csv(&cfg.output_dir, "sweep.csv", &["lambda", "converged", "residual", "energy", "positive"], &csv)?;
    Ok(())
}

/// Sup-error rows `(n, operator, test function, error, rate)` for both operators.
pub fn convergence_rows(cfg: &RunConfig) -> Result<Vec<(usize, &'static str, String, f64, Option<f64>)>, Failure> {
    let spec = &cfg.spec;
    let mut out = Vec::new();
    for &delta in &CONVERGENCE_DELTAS {
        for op_name in ["hilfer_left", "int_left"] {
            let mut prev: Option<f64> = None;
            for &n in &CONVERGENCE_GRIDS {
                let grid = Grid::new(spec.t_end, n, spec.psi)?;
                let f = psi_power(&grid, delta - 1.0);
                let (approx, exact) = if op_name == "hilfer_left" {
                    let m = hilfer_derivative_matrix(&grid, spec.order, Side::Left)?;
                    (m.apply(&f)?, hilfer_power_oracle(spec.order, delta, &grid)?)
                } else {
                    let m = frac_integral_matrix(&grid, spec.order.alpha, Side::Left)?;
                    (m.apply(&f)?, integral_power_oracle(spec.order.alpha, delta, &grid)?)
                };
                let err = approx.max_abs_diff_on(&exact, grid.collar_start()..n - 1);
                let rate = prev.map(|p| (p / err).log2());
                out.push((n, op_name, format!("psi_power_{:.1}", delta - 1.0), err, rate));
                prev = Some(err);
            }
        }
    }
    Ok(out)
}

fn convergence(cfg: &RunConfig, report: &mut Map<String, Value>) -> Result<(), Failure> {
    let rows = convergence_rows(cfg)?;
    let csv: Vec<Vec<Cell>> = rows
        .iter()
        .map(|(n, op, f, err, rate)| {
            vec![
                Cell::Int(*n as u64),
                Cell::Text(op.to_string()),
                Cell::Text(f.clone()),
                Cell::Real(*err),
                rate.map_or(Cell::Empty, Cell::Real),
            ]
        })
        .collect();
    let finest: Vec<Value> = rows
        .iter()
        .filter(|r| r.0 == *CONVERGENCE_GRIDS.last().unwrap())
        .map(|(_, op, f, err, _)| json!({"operator": op, "test_function": f, "sup_error": num(*err)}))
        .collect();
    report.insert("finest_errors".into(), Value::Array(finest));
    write_csv(&cfg.output_dir, "convergence.csv", &["n", "operator", "test_function", "sup_error", "rate"], &csv)?;
    Ok(())
}
