use super::*;
use crate::cases::section5;
use crate::formulations::{assemble_2bin, assemble_meuc, map_to_schedule};
use crate::fuzz::{random_system, seeded};
use crate::lp::RowSense;
use approx::assert_abs_diff_eq;

fn knapsack() -> MipProblem {
    // max 5a + 4b + 3c  s.t.  2a + 3b + c <= 4  (optimum a = c = 1, value 8)
    let mut lp = LinearProgram::new();
    let a = lp.add_var("a", 0.0, 1.0, -5.0);
    let b = lp.add_var("b", 0.0, 1.0, -4.0);
    let c = lp.add_var("c", 0.0, 1.0, -3.0);
    lp.add_row("cap", [(a, 2.0), (b, 3.0), (c, 1.0)], RowSense::Le, 4.0);
    MipProblem::new(lp, vec![a, b, c]).unwrap()
}

#[test]
fn knapsack_optimum() {
    let sol = solve_mip(&knapsack()).unwrap();
    assert_eq!(sol.status, MipStatus::Optimal);
    assert_abs_diff_eq!(sol.objective, -8.0, epsilon = 1e-9);
    assert_eq!(sol.primal, vec![1.0, 0.0, 1.0]);
    assert!(sol.gap <= 1e-6 && sol.bound <= sol.objective + 1e-12);
}

#[test]
fn integral_relaxation_is_solved_at_the_root() {
    let mut lp = LinearProgram::new();
    let a = lp.add_var("a", 0.0, 1.0, 1.0);
    let b = lp.add_var("b", 0.0, 1.0, 2.0);
    lp.add_row("pick", [(a, 1.0), (b, 1.0)], RowSense::Ge, 1.0);
    let sol = solve_mip(&MipProblem::new(lp, vec![a, b]).unwrap()).unwrap();
    assert_eq!(sol.node_count, 1);
    assert_abs_diff_eq!(sol.objective, 1.0, epsilon = 1e-12);
}

#[test]
fn infeasible_integer_problem() {
    // 2a = 1 has a fractional but no integral solution.
    let mut lp = LinearProgram::new();
    let a = lp.add_var("a", 0.0, 1.0, 0.0);
    lp.add_row("half", [(a, 2.0)], RowSense::Eq, 1.0);
    let err = solve_mip(&MipProblem::new(lp.clone(), vec![a]).unwrap()).unwrap_err();
    assert!(matches!(err, Error::Infeasible(_)));
    lp.rows[0].rhs = 3.0;
    assert!(matches!(solve_mip(&MipProblem::new(lp, vec![a]).unwrap()), Err(Error::Infeasible(_))));
}

#[test]
fn bounds_outside_unit_interval_are_rejected() {
    let mut lp = LinearProgram::new();
    let a = lp.add_var("a", 0.0, 2.0, 0.0);
    assert!(matches!(MipProblem::new(lp, vec![a]), Err(Error::InvalidInput(_))));
}

#[test]
fn node_limit_keeps_the_incumbent() {
    let opts = MipOptions {
        node_limit: 1,
        ..MipOptions::default()
    };
    let sol = solve_mip_with(&knapsack(), &opts).unwrap();
    // The root rounding finds a feasible point; the search stops right away.
    assert_eq!(sol.status, MipStatus::NodeLimit);
    assert!(sol.bound <= sol.objective);
}

#[test]
fn section5_both_encodings_give_835() {
    let inst = section5();
    let meuc = assemble_meuc(&inst);
    let sol = solve_mip(&MipProblem::new(meuc.lp.clone(), meuc.integer_vars.clone()).unwrap()).unwrap();
    assert_abs_diff_eq!(sol.objective, 835.0, epsilon = 1e-6);
    assert!(sol.bound >= 828.0 - 1e-6);
    for (gen, map) in inst.generators.iter().zip(&meuc.maps) {
        map_to_schedule(gen, &sol.primal, map).unwrap();
    }
    let two = assemble_2bin(&inst);
    let sol = solve_mip(&MipProblem::new(two.lp.clone(), two.integer_vars.clone()).unwrap()).unwrap();
    assert_abs_diff_eq!(sol.objective, 835.0, epsilon = 1e-6);
    let (oracle, sched) = enumerate_commitments(&inst).unwrap();
    assert_abs_diff_eq!(oracle, 835.0, epsilon = 1e-6);
    assert_eq!(sched.units[1].x, vec![40.0, 45.0, 50.0]);
}

#[test]
fn random_systems_match_enumeration() {
    let mut rng = seeded(3);
    for case in 0..40 {
        let inst = random_system(&mut rng, 1 + case % 3, 1 + case % 5).unwrap();
        let (oracle, _) = enumerate_commitments(&inst).unwrap();
        let meuc = assemble_meuc(&inst);
        let sol = solve_mip(&MipProblem::new(meuc.lp.clone(), meuc.integer_vars.clone()).unwrap()).unwrap();
        assert_abs_diff_eq!(sol.objective, oracle, epsilon = 1e-6);
        let sched = meuc.schedules(&inst, &sol.primal).unwrap();
        assert_abs_diff_eq!(sched.total_cost(), oracle, epsilon = 1e-6);
        let two = assemble_2bin(&inst);
        let sol = solve_mip(&MipProblem::new(two.lp.clone(), two.integer_vars.clone()).unwrap()).unwrap();
        assert_abs_diff_eq!(sol.objective, oracle, epsilon = 1e-6);
    }
}

#[test]
fn enumeration_guard() {
    let mut inst = section5();
    for g in &mut inst.generators {
        g.cost = vec![g.cost[0].clone(); 11];
    }
    inst.horizon = 11;
    inst.demand = vec![40.0; 11];
    assert!(matches!(enumerate_commitments(&inst), Err(Error::EnumerationTooLarge { .. })));
}

