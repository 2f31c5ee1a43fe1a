use gridcap_lp::{
    export_mps, solve, solve_mps_file, LinExpr, LpBuilder, LpModel, LpSolver, Sense, SolveStatus,
    SolverKind, DEFAULT_TOLERANCE,
};
use proptest::prelude::*;

/// min 2x + 3y  s.t.  x + y >= 10,  x <= 6
fn two_var_model() -> LpModel {
    let mut b = LpBuilder::new("TWOVAR");
    let x = b.add_nonneg("x");
    let y = b.add_nonneg("y");
    b.add_objective(&(LinExpr::term(x, 2.0) + LinExpr::term(y, 3.0)));
    b.add_constraint("test", "cover", LinExpr::from(x) + y.into(), Sense::Ge, 10.0);
    b.add_constraint("test", "xcap", x.into(), Sense::Le, 6.0);
    b.assemble().unwrap()
}

#[test]
fn cheap_variable_loads_to_its_cap() {
    let model = two_var_model();
    for kind in [SolverKind::HighsSimplex, SolverKind::HighsIpm] {
        let sol = kind.build().solve(&model, DEFAULT_TOLERANCE);
        assert_eq!(sol.status, SolveStatus::Optimal, "{kind}: {}", sol.message);
        assert!((sol.objective - 24.0).abs() < 1e-6, "{kind}");
        assert!((sol.primal[0] - 6.0).abs() < 1e-6);
        assert!((sol.primal[1] - 4.0).abs() < 1e-6);
    }
}

#[test]
fn contradictory_bounds_report_infeasible() {
    let mut b = LpBuilder::new("INF");
    let x = b.add_nonneg("x");
    b.add_objective(&x.into());
    b.add_constraint("test", "lo", x.into(), Sense::Ge, 1.0);
    b.add_constraint("test", "hi", x.into(), Sense::Le, 0.0);
    let sol = solve(&b.assemble().unwrap(), DEFAULT_TOLERANCE);
    assert_eq!(sol.status, SolveStatus::Infeasible);
}

#[test]
fn unbounded_direction_reported() {
    let mut b = LpBuilder::new("UNB");
    let x = b.add_nonneg("x");
    let y = b.add_nonneg("y");
    b.add_objective(&LinExpr::term(x, -1.0));
    b.add_constraint("test", "link", LinExpr::from(x) - y.into(), Sense::Le, 3.0);
    let sol = solve(&b.assemble().unwrap(), DEFAULT_TOLERANCE);
    assert_eq!(sol.status, SolveStatus::Unbounded, "{}", sol.message);
}

#[test]
fn objective_offset_survives_solve_and_export() {
    let mut b = LpBuilder::new("OFFSET");
    let x = b.add_nonneg("x");
    let mut obj = LinExpr::term(x, 1.0);
    obj.constant = 100.0;
    b.add_objective(&obj);
    b.add_constraint("test", "floor", x.into(), Sense::Ge, 1.0);
    let model = b.assemble().unwrap();
    let sol = solve(&model, DEFAULT_TOLERANCE);
    assert!((sol.objective - 101.0).abs() < 1e-9);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("offset.mps");
    std::fs::write(&path, export_mps(&model)).unwrap();
    let ext = solve_mps_file(&path).unwrap();
    assert!((ext.objective - 101.0).abs() < 1e-9, "{}", ext.objective);
}

#[test]
fn exported_models_solve_externally() {
    let dir = tempfile::tempdir().unwrap();

    let mut b = LpBuilder::new("XGE1");
    let x = b.add_nonneg("x");
    b.add_objective(&x.into());
    b.add_constraint("test", "floor", x.into(), Sense::Ge, 1.0);
    let path = dir.path().join("xge1.mps");
    std::fs::write(&path, export_mps(&b.assemble().unwrap())).unwrap();
    let ext = solve_mps_file(&path).unwrap();
    assert_eq!(ext.status, SolveStatus::Optimal);
    assert!((ext.objective - 1.0).abs() < 1e-9);
    assert!((ext.value("x").unwrap() - 1.0).abs() < 1e-9);

    let path = dir.path().join("twovar.mps");
    std::fs::write(&path, export_mps(&two_var_model())).unwrap();
    let ext = solve_mps_file(&path).unwrap();
    assert!((ext.objective - 24.0).abs() < 1e-9);
    assert!((ext.value("x").unwrap() - 6.0).abs() < 1e-9);
    assert!((ext.value("y").unwrap() - 4.0).abs() < 1e-9);
}

#[test]
fn export_is_byte_identical() {
    assert_eq!(export_mps(&two_var_model()), export_mps(&two_var_model()));
}

/// Random covering LP: min c·x, A x >= b, 0 <= x <= u, with A, b, c > 0 and
/// u large enough that x = u is feasible.
fn covering_lp(costs: &[f64], rows: &[(Vec<f64>, f64)]) -> LpModel {
    let mut b = LpBuilder::new("RAND");
    let vars: Vec<_> = costs
        .iter()
        .enumerate()
        .map(|(j, _)| b.add_var(format!("x{j}"), 0.0, 50.0))
        .collect();
    let mut obj = LinExpr::new();
    for (&v, &c) in vars.iter().zip(costs) {
        obj.add_term(v, c);
    }
    b.add_objective(&obj);
    for (i, (coefs, rhs)) in rows.iter().enumerate() {
        let mut e = LinExpr::new();
        for (&v, &a) in vars.iter().zip(coefs) {
            e.add_term(v, a);
        }
        b.add_constraint("test", format!("r{i}"), e, Sense::Ge, *rhs);
    }
    b.assemble().unwrap()
}

fn lp_strategy() -> impl Strategy<Value = (Vec<f64>, Vec<(Vec<f64>, f64)>)> {
    (2usize..6, 1usize..5).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(0.1f64..10.0, n),
            prop::collection::vec((prop::collection::vec(0.1f64..5.0, n), 1.0f64..40.0), m),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn optimal_solutions_are_feasible_and_consistent((costs, rows) in lp_strategy()) {
        let model = covering_lp(&costs, &rows);
        let sol = solve(&model, DEFAULT_TOLERANCE);
        prop_assert_eq!(sol.status, SolveStatus::Optimal);
        for c in &model.constraints {
            prop_assert!(c.violation(&sol.primal) <= DEFAULT_TOLERANCE * c.rhs.abs().max(1.0));
        }
        let dot: f64 = costs.iter().zip(&sol.primal).map(|(c, x)| c * x).sum();
        prop_assert!((dot - sol.objective).abs() <= DEFAULT_TOLERANCE * dot.abs().max(1.0));
    }

    #[test]
    fn external_and_internal_objectives_agree((costs, rows) in lp_strategy()) {
        let model = covering_lp(&costs, &rows);
        let internal = solve(&model, DEFAULT_TOLERANCE);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.mps");
        std::fs::write(&path, export_mps(&model)).unwrap();
        let external = solve_mps_file(&path).unwrap();
        let rel = (internal.objective - external.objective).abs() / internal.objective.abs().max(1.0);
        prop_assert!(rel <= 1e-5, "internal {} external {}", internal.objective, external.objective);
    }
}
