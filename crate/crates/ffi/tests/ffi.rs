use std::ffi::{CStr, CString};
use std::ptr;

use intsep_ffi::*;

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    intsep_string_free(p);
    s
}

unsafe fn last_error() -> String {
    let p = intsep_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_owned()
}

unsafe fn parse(text: &str) -> *mut IntsepInstance {
    let c = CString::new(text).unwrap();
    let mut inst = ptr::null_mut();
    assert_eq!(
        intsep_instance_parse(c.as_ptr(), &mut inst),
        IntsepStatus::Ok
    );
    inst
}

#[test]
fn parse_solve_and_read_back() {
    unsafe {
        let inst = parse("0 8\n2 4\n3 5\n");
        assert_eq!(intsep_instance_len(inst), 3);
        for algo in [INTSEP_ALGO_FAST, INTSEP_ALGO_PRELIM, INTSEP_ALGO_BRUTE] {
            let mut sol = ptr::null_mut();
            assert_eq!(
                intsep_solve(inst, INTSEP_MODE_ONE, algo, &mut sol),
                IntsepStatus::Ok
            );
            assert_eq!(take_string(intsep_solution_delta(sol)), "6");
            assert_eq!(intsep_solution_delta_f64(sol), 6.0);
            let mut order = [usize::MAX; 3];
            assert_eq!(
                intsep_solution_order(sol, order.as_mut_ptr(), 3),
                IntsepStatus::Ok
            );
            assert_eq!(order, [1, 2, 0]);
            assert_eq!(take_string(intsep_solution_position(sol, 0)), "6");
            assert_eq!(take_string(intsep_solution_position(sol, 1)), "2");
            assert!(intsep_solution_position(sol, 3).is_null());
            let text = take_string(intsep_solution_render(sol));
            assert!(text.starts_with("delta 6\n"), "{text}");
            intsep_solution_free(sol);
        }
        intsep_instance_free(inst);
    }
}

#[test]
fn two_direction_halves_delta() {
    unsafe {
        let inst = parse("0 2\n1 3\n");
        let mut sol = ptr::null_mut();
        assert_eq!(
            intsep_solve(inst, INTSEP_MODE_TWO, INTSEP_ALGO_FAST, &mut sol),
            IntsepStatus::Ok
        );
        assert_eq!(take_string(intsep_solution_delta(sol)), "1/2");
        assert_eq!(intsep_solution_delta_f64(sol), 0.5);
        intsep_solution_free(sol);
        intsep_instance_free(inst);
    }
}

#[test]
fn from_arrays_matches_parse() {
    unsafe {
        let lefts = [0i64, 2, 3];
        let rights = [8i64, 4, 5];
        let mut inst = ptr::null_mut();
        assert_eq!(
            intsep_instance_from_arrays(lefts.as_ptr(), rights.as_ptr(), 3, &mut inst),
            IntsepStatus::Ok
        );
        let mut sol = ptr::null_mut();
        assert_eq!(
            intsep_solve(inst, INTSEP_MODE_ONE, INTSEP_ALGO_FAST, &mut sol),
            IntsepStatus::Ok
        );
        assert_eq!(take_string(intsep_solution_delta(sol)), "6");
        intsep_solution_free(sol);
        intsep_instance_free(inst);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(
            intsep_instance_parse(ptr::null(), &mut inst),
            IntsepStatus::NullArgument
        );

        let bad = CString::new("0 1\n3 x\n").unwrap();
        assert_eq!(
            intsep_instance_parse(bad.as_ptr(), &mut inst),
            IntsepStatus::ParseError
        );
        assert!(last_error().contains("line 2"), "{}", last_error());

        let bytes = [0xffu8, 0];
        assert_eq!(
            intsep_instance_parse(bytes.as_ptr().cast(), &mut inst),
            IntsepStatus::InvalidUtf8
        );

        let (l, r) = ([3i64], [3i64]);
        assert_eq!(
            intsep_instance_from_arrays(l.as_ptr(), r.as_ptr(), 1, &mut inst),
            IntsepStatus::InvalidInstance
        );
        assert_eq!(
            intsep_instance_from_arrays(ptr::null(), ptr::null(), 0, &mut inst),
            IntsepStatus::InvalidInstance
        );

        let inst = parse("0 2\n1 3\n");
        let mut sol = ptr::null_mut();
        assert_eq!(
            intsep_solve(inst, 9, INTSEP_ALGO_FAST, &mut sol),
            IntsepStatus::InvalidArgument
        );
        assert_eq!(
            intsep_solve(inst, INTSEP_MODE_ONE, 9, &mut sol),
            IntsepStatus::InvalidArgument
        );
        assert_eq!(
            intsep_solve(ptr::null(), INTSEP_MODE_ONE, 0, &mut sol),
            IntsepStatus::NullArgument
        );

        assert_eq!(
            intsep_solve(inst, INTSEP_MODE_ONE, INTSEP_ALGO_FAST, &mut sol),
            IntsepStatus::Ok
        );
        let mut small = [0usize; 1];
        assert_eq!(
            intsep_solution_order(sol, small.as_mut_ptr(), 1),
            IntsepStatus::BufferTooSmall
        );
        intsep_solution_free(sol);
        intsep_instance_free(inst);

        let many: String = (0..11).map(|k| format!("{k} {}\n", k + 2)).collect();
        let inst = parse(&many);
        assert_eq!(
            intsep_solve(inst, INTSEP_MODE_ONE, INTSEP_ALGO_BRUTE, &mut sol),
            IntsepStatus::TooLarge
        );
        intsep_instance_free(inst);

        assert!(intsep_solution_delta(ptr::null()).is_null());
        assert!(intsep_solution_delta_f64(ptr::null()).is_nan());
        assert_eq!(intsep_instance_len(ptr::null()), 0);
        intsep_instance_free(ptr::null_mut());
        intsep_solution_free(ptr::null_mut());
        intsep_string_free(ptr::null_mut());
    }
}

#[test]
fn header_lists_every_export() {
    let header = include_str!("../include/intsep.h");
    for name in [
        "intsep_last_error",
        "intsep_instance_parse",
        "intsep_instance_from_arrays",
        "intsep_instance_len",
        "intsep_instance_free",
        "intsep_solve",
        "intsep_solution_delta",
        "intsep_solution_delta_f64",
        "intsep_solution_order",
        "intsep_solution_position",
        "intsep_solution_render",
        "intsep_solution_free",
        "intsep_string_free",
        "INTSEP_STATUS_BUFFER_TOO_SMALL",
        "typedef struct IntsepInstance IntsepInstance",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
