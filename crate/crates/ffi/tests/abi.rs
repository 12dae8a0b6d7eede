use std::ffi::{CStr, CString};
use std::path::Path;
use std::ptr;

use uc_chp_ffi::*;

fn section5_path() -> CString {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/examples/section5.json");
    CString::new(p.to_str().unwrap()).unwrap()
}

fn last_error() -> String {
    let p = uc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn load() -> *mut UcInstance {
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { uc_instance_load(section5_path().as_ptr(), 0, &mut inst) }, UcStatus::Ok);
    inst
}

#[test]
fn solve_through_handles() {
    unsafe {
        let inst = load();
        let (mut horizon, mut count) = (0, 0);
        assert_eq!(uc_instance_horizon(inst, &mut horizon), UcStatus::Ok);
        assert_eq!(uc_instance_generator_count(inst, &mut count), UcStatus::Ok);
        assert_eq!((horizon, count), (3, 2));

        let mut sol = ptr::null_mut();
        assert_eq!(uc_solve(inst, 0, &mut sol), UcStatus::Ok);
        let (mut z, mut proven) = (0.0, 0);
        assert_eq!(uc_solution_objective(sol, &mut z, &mut proven), UcStatus::Ok);
        assert!((z - 835.0).abs() < 1e-6);
        assert_eq!(proven, 1);

        let mut n = 0;
        assert_eq!(uc_solution_dispatch(sol, 1, ptr::null_mut(), 0, &mut n), UcStatus::BufferTooSmall);
        assert_eq!(n, 3);
        let mut x = vec![0.0; n];
        assert_eq!(uc_solution_dispatch(sol, 1, x.as_mut_ptr(), x.len(), &mut n), UcStatus::Ok);
        assert!(x.iter().zip([40.0, 45.0, 50.0]).all(|(a, b)| (a - b).abs() < 1e-6), "{x:?}");
        assert_eq!(uc_solution_dispatch(sol, 2, x.as_mut_ptr(), x.len(), &mut n), UcStatus::OutOfRange);

        uc_solution_free(sol);
        uc_instance_free(inst);
    }
}

#[test]
fn compare_report_accessors() {
    unsafe {
        let inst = load();
        let mut rep = ptr::null_mut();
        assert_eq!(uc_compare(inst, &mut rep), UcStatus::Ok);
        let mut count = 0;
        assert_eq!(uc_report_count(rep, &mut count), UcStatus::Ok);
        assert_eq!(count, 2);

        let mut method = UcMethod::Tlmp;
        assert_eq!(uc_report_method(rep, 1, &mut method), UcStatus::Ok);
        assert_eq!(method, UcMethod::Chp);

        let mut prices = [0.0; 3];
        let mut n = 0;
        assert_eq!(uc_report_prices(rep, 0, prices.as_mut_ptr(), 3, &mut n), UcStatus::Ok);
        assert!(prices.iter().zip([1.0, 5.0, 6.0]).all(|(a, b)| (a - b).abs() < 1e-6), "{prices:?}");

        let (mut u, mut z, mut relax, mut gap) = (0.0, 0.0, 0.0, 0.0);
        assert_eq!(uc_report_summary(rep, 1, &mut u, &mut z, &mut relax, &mut gap), UcStatus::Ok);
        assert!((u - 7.0).abs() < 1e-6 && (z - 835.0).abs() < 1e-6 && (relax - 828.0).abs() < 1e-6);
        assert!((gap - 0.8).abs() < 1e-9);
        assert_eq!(uc_report_summary(rep, 0, &mut u, ptr::null_mut(), ptr::null_mut(), ptr::null_mut()), UcStatus::Ok);
        assert!((u - 35.0).abs() < 1e-6);

        let mut uplifts = [0.0; 2];
        assert_eq!(uc_report_uplifts(rep, 0, uplifts.as_mut_ptr(), 2, &mut n), UcStatus::Ok);
        assert!((uplifts[1] - 35.0).abs() < 1e-6);

        let mut csv = ptr::null_mut();
        assert_eq!(uc_report_csv(rep, &mut csv), UcStatus::Ok);
        let text = CStr::from_ptr(csv).to_str().unwrap().to_owned();
        uc_string_free(csv);
        assert!(text.contains("CHP,7.000000,835.000000,828.000000,0.800000"));

        assert_eq!(uc_report_prices(rep, 2, prices.as_mut_ptr(), 3, &mut n), UcStatus::OutOfRange);
        uc_report_free(rep);
        uc_instance_free(inst);
    }
}

#[test]
fn single_method_report_has_no_gap() {
    unsafe {
        let inst = load();
        let mut rep = ptr::null_mut();
        assert_eq!(uc_price(inst, UcMethod::Chp, &mut rep), UcStatus::Ok);
        let mut gap = 0.0;
        assert_eq!(
            uc_report_summary(rep, 0, ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), &mut gap),
            UcStatus::Ok
        );
        assert!(gap.is_nan());
        uc_report_free(rep);
        uc_instance_free(inst);
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(uc_instance_load(ptr::null(), 0, &mut inst), UcStatus::NullPointer);
        assert!(last_error().contains("path"));

        let missing = CString::new("/nonexistent/file.json").unwrap();
        assert_eq!(uc_instance_load(missing.as_ptr(), 0, &mut inst), UcStatus::Io);

        let bad = CString::new("{\"T\": 3,").unwrap();
        assert_eq!(uc_instance_parse(bad.as_ptr(), 0, &mut inst), UcStatus::Parse);
        assert!(last_error().contains("line"));

        let text = std::fs::read_to_string(section5_path().to_str().unwrap()).unwrap();
        let invalid = CString::new(text.replace("\"start_ramp\": 55", "\"start_ramp\": 10")).unwrap();
        assert_eq!(uc_instance_parse(invalid.as_ptr(), 0, &mut inst), UcStatus::Validation);
        assert!(last_error().contains("G2"));
        assert!(inst.is_null());

        let short = CString::new(text.replace("[40, 80, 60]", "[40, 500, 60]")).unwrap();
        assert_eq!(uc_instance_parse(short.as_ptr(), 0, &mut inst), UcStatus::Ok);
        let mut sol = ptr::null_mut();
        assert_eq!(uc_solve(inst, 0, &mut sol), UcStatus::Infeasible);
        assert!(sol.is_null());
        uc_instance_free(inst);

        let mut n = 0;
        assert_eq!(uc_instance_horizon(ptr::null(), &mut n), UcStatus::NullPointer);
        uc_instance_free(ptr::null_mut());
        uc_report_free(ptr::null_mut());
        uc_string_free(ptr::null_mut());
    }
}
