use super::*;
use approx::assert_abs_diff_eq;

fn single_ge() -> LinearProgram {
    let mut lp = LinearProgram::new();
    let x = lp.add_var("x", 0.0, 10.0, 1.0);
    lp.add_row("r", [(x, 1.0)], RowSense::Ge, 3.0);
    lp
}

fn simplex_corner() -> LinearProgram {
    let mut lp = LinearProgram::new();
    let x = lp.add_var("x", 0.0, f64::INFINITY, -1.0);
    let y = lp.add_var("y", 0.0, f64::INFINITY, -1.0);
    lp.add_row("cap", [(x, 1.0), (y, 1.0)], RowSense::Le, 1.0);
    lp
}

#[test]
fn lower_bound_row() {
    let lp = single_ge();
    let sol = solve_lp(&lp).unwrap();
    assert_eq!(sol.status, LpStatus::Optimal);
    assert_abs_diff_eq!(sol.primal[0], 3.0, epsilon = 1e-12);
    assert_abs_diff_eq!(sol.objective, 3.0, epsilon = 1e-12);
    assert_abs_diff_eq!(sol.duals[0], 1.0, epsilon = 1e-12);
    assert!(verify_duality(&lp, &sol).passes(DUALITY_TOL));
}

#[test]
fn capacity_row() {
    let lp = simplex_corner();
    let sol = solve_lp(&lp).unwrap();
    assert_abs_diff_eq!(sol.objective, -1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(sol.duals[0], -1.0, epsilon = 1e-12);
    assert!(verify_duality(&lp, &sol).passes(DUALITY_TOL));
}

#[test]
fn perturbed_point_fails_check() {
    let lp = simplex_corner();
    let mut sol = solve_lp(&lp).unwrap();
    sol.primal[0] += 1.0;
    let rep = verify_duality(&lp, &sol);
    assert!(rep.primal_residual > 0.5);
    assert!(!rep.passes(DUALITY_TOL));
}

#[test]
fn infeasible_and_unbounded() {
    let mut lp = LinearProgram::new();
    let x = lp.add_var("x", 0.0, 1.0, 1.0);
    lp.add_row("r", [(x, 1.0)], RowSense::Ge, 2.0);
    assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);

    let mut lp = LinearProgram::new();
    let x = lp.add_var("x", 0.0, f64::INFINITY, -1.0);
    let y = lp.add_var("y", 0.0, f64::INFINITY, 0.0);
    lp.add_row("r", [(x, 1.0), (y, -1.0)], RowSense::Le, 1.0);
    assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Unbounded);
}

#[test]
fn free_columns_and_equalities() {
    // min |x - 2| written with a free x and an epigraph variable.
    let mut lp = LinearProgram::new();
    let x = lp.add_var("x", f64::NEG_INFINITY, f64::INFINITY, 0.0);
    let t = lp.add_var("t", f64::NEG_INFINITY, f64::INFINITY, 1.0);
    let z = lp.add_var("z", f64::NEG_INFINITY, f64::INFINITY, 0.0);
    lp.add_row("a", [(t, 1.0), (x, -1.0)], RowSense::Ge, -2.0);
    lp.add_row("b", [(t, 1.0), (x, 1.0)], RowSense::Ge, 2.0);
    lp.add_row("link", [(z, 1.0), (x, -1.0)], RowSense::Eq, 5.0);
    let sol = solve_lp(&lp).unwrap();
    assert_abs_diff_eq!(sol.objective, 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(sol.primal[2] - sol.primal[0], 5.0, epsilon = 1e-9);
    assert!(verify_duality(&lp, &sol).passes(DUALITY_TOL));
}

#[test]
fn scaling_an_equality_scales_its_dual() {
    let build = |k: f64| {
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x", 0.0, 10.0, 2.0);
        let y = lp.add_var("y", 0.0, 10.0, 3.0);
        lp.add_row("d", [(x, k), (y, k)], RowSense::Eq, 12.0 * k);
        lp.add_row("cap", [(x, 1.0)], RowSense::Le, 8.0);
        lp
    };
    let a = solve_lp(&build(1.0)).unwrap();
    let b = solve_lp(&build(4.0)).unwrap();
    assert_eq!(a.primal, b.primal);
    assert_abs_diff_eq!(a.duals[0], 3.0, epsilon = 1e-12);
    assert_abs_diff_eq!(b.duals[0], a.duals[0] / 4.0, epsilon = 1e-12);
}

#[test]
fn objective_offset_is_reported() {
    let mut lp = single_ge();
    lp.objective_offset = 10.0;
    assert_abs_diff_eq!(solve_lp(&lp).unwrap().objective, 13.0, epsilon = 1e-12);
}

#[test]
fn no_rows() {
    let mut lp = LinearProgram::new();
    lp.add_var("x", -1.0, 4.0, -2.0);
    lp.add_var("y", -1.0, 4.0, 3.0);
    let sol = solve_lp(&lp).unwrap();
    assert_eq!(sol.primal, vec![4.0, -1.0]);
}

#[test]
fn bad_index_is_rejected() {
    let mut lp = single_ge();
    lp.rows[0].coeffs.push((7, 1.0));
    assert!(matches!(solve_lp(&lp), Err(crate::Error::InvalidInput(_))));
}

#[test]
fn iteration_cap_is_enforced() {
    let lp = simplex_corner();
    let opts = SimplexOptions {
        iteration_factor: 0,
        ..SimplexOptions::default()
    };
    assert!(matches!(
        solve_lp_with(&lp, &opts),
        Err(crate::Error::NumericalFailure { .. })
    ));
}

#[test]
fn merged_row_coefficients() {
    let mut lp = LinearProgram::new();
    let x = lp.add_var("x", 0.0, 1.0, 0.0);
    lp.add_row("r", [(x, 1.0), (x, 2.0)], RowSense::Le, 1.0);
    assert_eq!(lp.rows[0].coeffs, vec![(x, 3.0)]);
}

#[test]
fn mps_sections() {
    let mut lp = single_ge();
    lp.add_var("free", f64::NEG_INFINITY, f64::INFINITY, 0.0);
    let text = to_mps(&lp, "t");
    for needle in ["NAME t", " G r", " x obj 1", " x r 1", " rhs r 3", " UP bnd x 10", " FR bnd free", "ENDATA"] {
        assert!(text.contains(needle), "missing {needle:?} in\n{text}");
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.mps");
    dump_lp(&lp, &path).unwrap();
    assert_eq!(std::fs::read_to_string(path).unwrap(), text);
}
