use proptest::prelude::*;
use uc_chp::fuzz::{random_lp, random_system, seeded};
use uc_chp::lp::{solve_lp, verify_duality, LpStatus};
use uc_chp::mip::MipOptions;
use uc_chp::model::{parse_instance, to_json, validate, LoadOptions, PeriodCost, PriceVector};
use uc_chp::pricing::{solve_system, uplift};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn instance_json_round_trips(seed in any::<u64>(), n in 1usize..4, t in 1usize..7) {
        let inst = random_system(&mut seeded(seed), n, t).unwrap();
        let back = parse_instance(&to_json(&inst), &LoadOptions::default()).unwrap();
        prop_assert_eq!(back, inst.clone());
        prop_assert!(validate(&inst).iter().all(|d| !d.is_error()));
    }

    #[test]
    fn random_lps_satisfy_optimality_conditions(seed in any::<u64>()) {
        let lp = random_lp(&mut seeded(seed));
        let sol = solve_lp(&lp).unwrap();
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        let report = verify_duality(&lp, &sol);
        prop_assert!(report.passes(1e-6), "{:?}", report);
    }

    #[test]
    fn tangent_cuts_underestimate_a_convex_quadratic(
        alpha in 0.001f64..1.0,
        beta in 0.0f64..10.0,
        c in 0.0f64..50.0,
        n in 1usize..12,
        x in 0.0f64..1.0,
    ) {
        let (lo, hi) = (10.0, 60.0);
        let cost = PeriodCost::from_quadratic(alpha, beta, c, n, lo, hi);
        let at = lo + x * (hi - lo);
        let exact = alpha * at * at + beta * at + c;
        prop_assert!(cost.eval(at) <= exact + 1e-9);
        // Error of the tangent envelope is at most alpha * (width / 2)^2.
        let half = (hi - lo) / (2.0 * n as f64);
        prop_assert!(exact - cost.eval(at) <= alpha * half * half + 1e-9);
    }

    #[test]
    fn uplift_is_nonnegative_at_any_price(seed in any::<u64>(), prices in prop::collection::vec(-5.0f64..15.0, 4)) {
        let inst = random_system(&mut seeded(seed), 2, 4).unwrap();
        let iso = solve_system(&inst, &MipOptions::default()).unwrap();
        let rows = uplift(&inst, &PriceVector(prices), &iso.schedule).unwrap();
        prop_assert!(rows.iter().all(|g| g.uplift >= -1e-6), "{:?}", rows);
    }
}
