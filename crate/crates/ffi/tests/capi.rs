use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use bpd_ffi::*;

fn last_error() -> String {
    let p = bpd_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn problem(rho: f64, d1: f64, d2: f64) -> *mut BpdProblem {
    let mut p = ptr::null_mut();
    let s = unsafe { bpd_problem_new(rho, 1.0, 0.5, 1.0, d1, d2, &mut p) };
    assert_eq!(s, BpdStatus::Ok);
    assert!(!p.is_null());
    p
}

#[test]
fn min_power_matches_hand_values() {
    let p = problem(0.8, 0.2, 0.3);
    let mut out = BpdPowerSolution {
        power: 0.0,
        optimizer: 0.0,
        has_optimizer: false,
        eta_bar: 0.0,
        degenerate: false,
    };
    unsafe {
        assert_eq!(bpd_problem_min_power(p, BpdScheme::OuterBound as i32, &mut out), BpdStatus::Ok);
        assert!((out.power - 4.5).abs() < 1e-9);
        assert!(!out.has_optimizer && out.optimizer.is_nan());

        assert_eq!(bpd_problem_min_power(p, BpdScheme::SchemeC as i32, &mut out), BpdStatus::Ok);
        assert!((out.power - 5.566_666_666_666_667).abs() < 1e-9);
        let p_c = out.power;

        assert_eq!(bpd_problem_min_power(p, BpdScheme::Separate as i32, &mut out), BpdStatus::Ok);
        assert!(out.has_optimizer && out.power <= p_c);

        let (mut lo, mut hi) = (0.0, 0.0);
        assert_eq!(bpd_problem_nu_interval(p, &mut lo, &mut hi), BpdStatus::Ok);
        assert_eq!(lo, 0.8);
        assert!(out.optimizer >= lo && out.optimizer <= hi);

        let (mut r1, mut r2) = (0.0, 0.0);
        assert_eq!(bpd_problem_successive_rates(p, 0.8, &mut r1, &mut r2), BpdStatus::Ok);
        assert!((r1 - 1.160_964).abs() < 1e-6);

        let (mut pw, mut eb) = (0.0, 0.0);
        assert_eq!(bpd_problem_power_of_nu(p, 0.8, &mut pw, &mut eb), BpdStatus::Ok);
        assert!((pw - p_c).abs() < 1e-9);

        let (mut trivial, mut low) = (true, true);
        assert_eq!(bpd_problem_region(p, &mut trivial, &mut low), BpdStatus::Ok);
        assert!(!trivial && !low);

        assert_eq!(bpd_problem_min_power(p, 9, &mut out), BpdStatus::InvalidParameter);
        assert!(last_error().contains("scheme"));
        bpd_problem_free(p);
    }
}

#[test]
fn invalid_parameters_report_errors() {
    let mut p = ptr::null_mut();
    let s = unsafe { bpd_problem_new(0.8, 1.0, 0.5, 1.0, 1.5, 0.3, &mut p) };
    assert_eq!(s, BpdStatus::InvalidParameter);
    assert!(p.is_null());
    assert!(last_error().contains("DistortionPair"));

    let s = unsafe { bpd_problem_new(0.8, 1.0, 0.5, 1.0, 0.2, 0.3, ptr::null_mut()) };
    assert_eq!(s, BpdStatus::NullPointer);

    let p = problem(0.8, 0.2, 0.3);
    let (mut r1, mut r2) = (0.0, 0.0);
    let s = unsafe { bpd_problem_successive_rates(p, 5.0, &mut r1, &mut r2) };
    assert_eq!(s, BpdStatus::InfeasibleNu);
    unsafe { bpd_problem_free(p) };
    unsafe { bpd_problem_free(ptr::null_mut()) };
}

#[test]
fn free_functions() {
    let (mut p, mut e) = (0.0, 0.0);
    let s = unsafe { bpd_min_power_for_rates(1.0, 0.5, 1.0, 1.0, 0.5, &mut p, &mut e) };
    assert_eq!(s, BpdStatus::Ok);
    assert!(p > 0.0 && (0.0..=1.0).contains(&e));
    let s = unsafe { bpd_min_power_for_rates(0.5, 1.0, 1.0, 1.0, 0.5, &mut p, &mut e) };
    assert_eq!(s, BpdStatus::InvalidParameter);

    let mut b = 0.0;
    assert_eq!(unsafe { bpd_theorem2_bound(0.8, 0.3, &mut b) }, BpdStatus::Ok);
    assert!((b - 2.1196).abs() < 1e-3);
    assert_eq!(unsafe { bpd_theorem3_limit(0.8, 0.3, &mut b) }, BpdStatus::Ok);
    assert!((b - 1.64f64.powf(1.0 / 0.3)).abs() < 1e-12);
    assert_eq!(unsafe { bpd_theorem3_limit(0.8, -1.0, &mut b) }, BpdStatus::InvalidParameter);

    let v = unsafe { CStr::from_ptr(bpd_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn ratio_map_handle() {
    let mut m = ptr::null_mut();
    let s = unsafe {
        bpd_ratio_map_new(0.8, 1.0, 0.5, 0.3, 0.1, 0.7, 2, 0.1, 0.7, 3, BpdComparison::SepVsOuter as i32, 1, &mut m)
    };
    assert_eq!(s, BpdStatus::Ok);
    assert_eq!(unsafe { bpd_ratio_map_len(m) }, 6);
    let mut cell = std::mem::MaybeUninit::<BpdRatioCell>::uninit();
    for i in 0..6 {
        assert_eq!(unsafe { bpd_ratio_map_cell(m, i, cell.as_mut_ptr()) }, BpdStatus::Ok);
        let c = unsafe { cell.assume_init() };
        assert!(c.p_outer <= c.p_sep * (1.0 + 1e-9));
        assert_eq!(c.d1, if i < 3 { 0.1 } else { 0.7 });
    }
    assert_eq!(unsafe { bpd_ratio_map_cell(m, 6, cell.as_mut_ptr()) }, BpdStatus::OutOfRange);
    unsafe { bpd_ratio_map_free(m) };

    let s = unsafe { bpd_ratio_map_new(0.8, 1.0, 0.5, 0.3, 0.1, 1.5, 2, 0.1, 0.7, 2, 0, 1, &mut m) };
    assert_eq!(s, BpdStatus::InvalidGrid);
    assert!(m.is_null());
    assert_eq!(unsafe { bpd_ratio_map_len(ptr::null()) }, 0);
}

fn header_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include")
}

#[test]
fn header_declares_every_entry_point() {
    let h = std::fs::read_to_string(header_dir().join("bpd.h")).unwrap();
    for name in [
        "bpd_last_error",
        "bpd_version",
        "bpd_problem_new",
        "bpd_problem_free",
        "bpd_problem_region",
        "bpd_problem_nu_interval",
        "bpd_problem_min_power",
        "bpd_problem_successive_rates",
        "bpd_problem_power_of_nu",
        "bpd_min_power_for_rates",
        "bpd_theorem2_bound",
        "bpd_theorem3_limit",
        "bpd_ratio_map_new",
        "bpd_ratio_map_len",
        "bpd_ratio_map_cell",
        "bpd_ratio_map_free",
        "typedef struct BpdProblem BpdProblem;",
        "BPD_SCHEME_OUTER_BOUND = 4",
    ] {
        assert!(h.contains(name), "missing {name}");
    }
}

/// Compiles and runs a C program against the header and static library,
/// when a C compiler and the static archive are available.
#[test]
fn c_program_links_and_runs() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libbpd_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or {}", lib.display());
        return;
    }
    let dir = std::env::temp_dir().join(format!("bpd-ffi-c-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "bpd.h"
int main(void) {
    BpdProblem *p = NULL;
    if (bpd_problem_new(0.8, 1.0, 0.5, 1.0, 0.2, 0.3, &p) != BPD_STATUS_OK) return 1;
    BpdPowerSolution s;
    if (bpd_problem_min_power(p, BPD_SCHEME_OUTER_BOUND, &s) != BPD_STATUS_OK) return 2;
    printf("%.6f\n", s.power);
    bpd_problem_free(p);
    if (bpd_problem_new(0.8, 1.0, 0.5, 1.0, 2.0, 0.3, &p) != BPD_STATUS_INVALID_PARAMETER) return 3;
    printf("%s\n", bpd_last_error());
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.join("main");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header_dir())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("4.500000\n"), "{text}");
    assert!(text.contains("DistortionPair"));
    let _ = std::fs::remove_dir_all(&dir);
}
