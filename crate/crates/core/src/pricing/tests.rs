use super::*;
use crate::cases::section5;
use crate::fuzz::{random_system, seeded};
use approx::assert_abs_diff_eq;

fn iso() -> IsoSolution {
    solve_system(&section5(), &MipOptions::default()).unwrap()
}

fn total(rows: &[GeneratorUplift]) -> f64 {
    rows.iter().map(|g| g.uplift).sum()
}

#[test]
fn section5_iso_schedule() {
    let iso = iso();
    assert_abs_diff_eq!(iso.z_qip, 835.0, epsilon = 1e-6);
    let g1 = iso.schedule.unit("G1").unwrap();
    let g2 = iso.schedule.unit("G2").unwrap();
    for (a, b) in g1.x.iter().zip([0.0, 35.0, 10.0]) {
        assert_abs_diff_eq!(*a, b, epsilon = 1e-6);
    }
    for (a, b) in g2.x.iter().zip([40.0, 45.0, 50.0]) {
        assert_abs_diff_eq!(*a, b, epsilon = 1e-6);
    }
}

#[test]
fn section5_tlmp() {
    let (pi, sched) = price_tlmp(&section5()).unwrap();
    for (a, b) in pi.as_slice().iter().zip([1.0, 5.0, 6.0]) {
        assert_abs_diff_eq!(*a, b, epsilon = 1e-4);
    }
    let rows = uplift(&section5(), &pi, &sched).unwrap();
    assert_abs_diff_eq!(total(&rows), 35.0, epsilon = 1e-3);
}

#[test]
fn section5_chp() {
    let inst = section5();
    let (pi, z_qp) = price_chp(&inst).unwrap();
    assert_abs_diff_eq!(z_qp, 828.0, epsilon = 1e-4);
    let rows = uplift(&inst, &pi, &iso().schedule).unwrap();
    assert_abs_diff_eq!(total(&rows), 7.0, epsilon = 1e-3);
    assert_abs_diff_eq!(lagrangian_value(&inst, &pi).unwrap(), z_qp, epsilon = 1e-6);
}

#[test]
fn section5_fixed_price_uplifts() {
    let inst = section5();
    let iso = iso();
    let at = |p: [f64; 3]| total(&uplift(&inst, &PriceVector(p.to_vec()), &iso.schedule).unwrap());
    assert_abs_diff_eq!(at([1.0, 5.0, 6.0]), 35.0, epsilon = 1e-6);
    // Total uplift is 15 * pi_1 - 25 on this segment: the printed 3.45 is a
    // rounded 38/11.
    assert_abs_diff_eq!(at([3.45, 5.0, 5.0]), 26.75, epsilon = 1e-6);
    assert_abs_diff_eq!(at([38.0 / 11.0, 5.0, 5.0]), 26.0 + 9.0 / 11.0, epsilon = 1e-6);
    assert_abs_diff_eq!(at([1.7, 5.0, 6.0]), 7.0, epsilon = 1e-6);
}

#[test]
fn section5_2bin_relaxation() {
    let (pi, obj) = price_2bin_relaxation(&section5()).unwrap();
    assert_abs_diff_eq!(obj, 808.18, epsilon = 0.01);
    for (a, b) in pi.as_slice().iter().zip([3.45, 5.0, 5.0]) {
        assert_abs_diff_eq!(*a, b, epsilon = 0.01);
    }
    let rows = uplift(&section5(), &pi, &iso().schedule).unwrap();
    assert_abs_diff_eq!(total(&rows), 26.82, epsilon = 0.01);
}

#[test]
fn section5_compare() {
    let reports = compare(&section5()).unwrap();
    assert_eq!(reports[0].method, Method::Tlmp);
    assert_abs_diff_eq!(reports[0].total_uplift, 35.0, epsilon = 1e-3);
    assert_abs_diff_eq!(reports[1].total_uplift, 7.0, epsilon = 1e-3);
    assert_abs_diff_eq!(reports[1].gap_tm.unwrap(), 0.8, epsilon = 1e-6);
    let csv = render_csv(&reports);
    assert!(csv.starts_with("method,period,price\nTLMP,1,"));
    assert!(csv.contains("\nmethod,total_uplift,z_qip,relaxation_obj,gap_tm\n"));
    assert!(csv.contains("CHP,7.000000,835.000000,828.000000,0.800000"));
    assert!(render_pretty(&reports).contains("80.00%"));
}

#[test]
fn marginal_cost_pricing_for_a_single_convex_unit() {
    let mut inst = section5();
    inst.generators.truncate(1);
    inst.demand = vec![10.0, 20.0, 30.0];
    let (pi, _) = price_tlmp(&inst).unwrap();
    assert_eq!(pi.as_slice(), &[4.0, 5.0, 6.0]);
    let reports = compare(&inst).unwrap();
    for r in &reports {
        assert_abs_diff_eq!(r.total_uplift, 0.0, epsilon = 1e-9);
    }
    assert_eq!(reports[0].gap_tm, Some(0.0));
}

#[test]
fn zero_demand_with_free_shutdown() {
    let mut inst = section5();
    inst.demand = vec![0.0; 3];
    let (pi, obj) = price_chp(&inst).unwrap();
    assert_abs_diff_eq!(obj, 0.0, epsilon = 1e-9);
    assert!(pi.as_slice().iter().all(|p| *p >= -1e-9));
}

#[test]
fn method_parsing() {
    assert_eq!("TLMP".parse::<Method>().unwrap(), Method::Tlmp);
    assert_eq!("chp".parse::<Method>().unwrap(), Method::Chp);
    assert!("lmp".parse::<Method>().is_err());
}

#[test]
fn negative_zero_is_normalized() {
    assert_eq!(fmt_num(-0.0), "0.000000");
    assert_eq!(fmt_num(-1e-9), "0.000000");
    assert_eq!(fmt_num(-1.5), "-1.500000");
}

#[test]
fn random_systems_satisfy_pricing_invariants() {
    let mut rng = seeded(5);
    for case in 0..25 {
        let inst = random_system(&mut rng, 2 + case % 3, 2 + case % 5).unwrap();
        let reports = compare(&inst).unwrap();
        let (tlmp, chp) = (&reports[0], &reports[1]);
        assert!(chp.total_uplift <= tlmp.total_uplift + 1e-6, "case {case}");
        assert_abs_diff_eq!(chp.total_uplift, chp.z_qip - chp.relaxation_objective, epsilon = 1e-6);
        for r in &reports {
            assert!(r.per_gen.iter().all(|g| g.uplift >= -1e-6));
        }
        assert_abs_diff_eq!(lagrangian_value(&inst, &chp.prices).unwrap(), chp.relaxation_objective, epsilon = 1e-6);
    }
}

