#![allow(clippy::approx_constant)] // pinned reference values

use std::ffi::CStr;
use std::process::Command;
use std::ptr;

use bathcool_ffi::*;

fn last_error() -> String {
    let p = bc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn scalar_maps_round_trip() {
    let mut n = 0.0;
    assert_eq!(
        bc_occupation_from_temperature(1.0 / 2f64.ln(), 1.0, &mut n),
        BcStatus::Ok
    );
    assert!((n - 1.0).abs() < 1e-12);
    let mut t = 0.0;
    assert_eq!(bc_temperature_from_occupation(n, 1.0, &mut t), BcStatus::Ok);
    assert!((t - 1.0 / 2f64.ln()).abs() < 1e-12);
}

#[test]
fn laws_and_inversions() {
    let mut v = 0.0;
    assert_eq!(
        bc_evaluate_law(BcLaw::Newton as u32, 2000.0, 200.0, 1.0, 3f64.ln(), &mut v),
        BcStatus::Ok
    );
    assert!((v - 800.0).abs() < 1e-9);
    assert_eq!(
        bc_half_time(BcLaw::Modified as u32, 1.0, &mut v),
        BcStatus::Ok
    );
    assert!((v - 0.544764).abs() < 1e-6);
    assert_eq!(
        bc_time_to_value(BcLaw::Modified as u32, 2000.0, 200.0, 1.0, 800.0, &mut v),
        BcStatus::Ok
    );
    assert!((v - 0.788078).abs() < 1e-6);
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut v = 0.0;
    assert_eq!(
        bc_time_to_value(0, 2000.0, 200.0, 1.0, 100.0, &mut v),
        BcStatus::Domain
    );
    assert!(last_error().contains("domain"));
    assert_eq!(bc_half_time(9, 1.0, &mut v), BcStatus::InvalidEnum);
    assert_eq!(bc_half_time(0, 1.0, ptr::null_mut()), BcStatus::NullPointer);
    let mut h = ptr::null_mut();
    assert_eq!(
        bc_integrate_thermal_state(0, 1.0, 2.0, 25.0, 10, 0.01, 1.0, &mut h),
        BcStatus::Truncation
    );
    assert!(h.is_null());
}

#[test]
fn four_point_function() {
    let ops = [0u8, 1, 0, 1];
    let (mut re, mut im) = (0.0, 0.0);
    let status = unsafe { bc_wick_four_point(ops.as_ptr(), 1.0, &mut re, &mut im) };
    assert_eq!(status, BcStatus::Ok);
    let direct = bathcool::correlators::wick_four_point(
        [
            bathcool::correlators::LadderOp::Lower,
            bathcool::correlators::LadderOp::Raise,
            bathcool::correlators::LadderOp::Lower,
            bathcool::correlators::LadderOp::Raise,
        ],
        bathcool::Occupation::new(1.0).unwrap(),
    );
    assert_eq!((re, im), (direct.re, direct.im));
    let bad = [0u8, 1, 2, 1];
    let status = unsafe { bc_wick_four_point(bad.as_ptr(), 1.0, &mut re, &mut im) };
    assert_eq!(status, BcStatus::InvalidEnum);
}

#[test]
fn trajectory_handles() {
    let mut h = ptr::null_mut();
    let status = bc_integrate_number_state(
        BcRateLaw::ConstantMarkov as u32,
        1.0,
        2.0,
        8,
        60,
        0.005,
        3.0,
        &mut h,
    );
    assert_eq!(status, BcStatus::Ok);
    let mut p0 = vec![0.0; 60];
    p0[8] = 1.0;
    let mut g = ptr::null_mut();
    let status = unsafe {
        bc_evolve_populations(
            BcRateLaw::ConstantMarkov as u32,
            1.0,
            2.0,
            p0.as_ptr(),
            60,
            0.005,
            3.0,
            &mut g,
        )
    };
    assert_eq!(status, BcStatus::Ok);

    // SAFETY: `h` and `g` are live handles and every buffer holds `cap` values.
    unsafe {
        let len = bc_trajectory_len(h);
        assert_eq!(len, 601);
        let mut times = vec![0.0; len];
        let mut n = vec![0.0; len];
        assert_eq!(
            bc_trajectory_copy_times(h, times.as_mut_ptr(), len),
            BcStatus::Ok
        );
        assert_eq!(
            bc_trajectory_copy_n_bar(h, n.as_mut_ptr(), len),
            BcStatus::Ok
        );
        for (t, v) in times.iter().zip(&n) {
            assert!((v - (2.0 + 6.0 * (-t).exp())).abs() < 1e-6);
        }
        let mut short = vec![0.0; 3];
        assert_eq!(
            bc_trajectory_copy_trace(h, short.as_mut_ptr(), 3),
            BcStatus::BufferTooSmall
        );
        assert!(last_error().contains("601"));

        let mut m = vec![0.0; len];
        assert_eq!(
            bc_trajectory_copy_n_bar(g, m.as_mut_ptr(), len),
            BcStatus::Ok
        );
        let dev = n
            .iter()
            .zip(&m)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(dev < 1e-10);

        bc_trajectory_free(h);
        bc_trajectory_free(g);
        bc_trajectory_free(ptr::null_mut());
        assert_eq!(bc_trajectory_len(ptr::null()), 0);
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/bathcool.h");
    let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header])
        .output()
    else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
