use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use beamspace_ffi::*;

const DESIGN: &str = "# GHz S RI R 50
2.5  0.24 0.19   -0.13 0.47   -0.13 0.47
     -0.13 0.47   0.46 -0.27   0.14 0.13
     -0.13 0.47   0.14 0.13    0.46 -0.27
";

fn c(re: f64, im: f64) -> BsComplex {
    BsComplex { re, im }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(bs_last_error_message()) }.to_string_lossy().into_owned()
}

fn radiator() -> *mut BsRadiator {
    let text = CString::new(DESIGN).unwrap();
    let mut r = ptr::null_mut();
    let st = unsafe { bs_radiator_from_touchstone(text.as_ptr(), f64::NAN, 1e-6, 5e-3, &mut r) };
    assert_eq!(st, BsStatus::Ok, "{}", last_error());
    assert!(!r.is_null());
    r
}

#[test]
fn synthesizes_qpsk_table_through_handles() {
    let r = radiator();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { bs_synthesize_psk(r, -100.0, 4, 1e-8, &mut t) }, BsStatus::Ok);
    assert_eq!(unsafe { bs_table_len(t) }, 4);

    let mut gamma_tot = BsComplex::default();
    assert_eq!(unsafe { bs_table_gamma_tot(t, &mut gamma_tot) }, BsStatus::Ok);
    let rl = -20.0 * gamma_tot.re.hypot(gamma_tot.im).log10();
    assert!((rl - 10.4).abs() < 0.2, "{rl}");

    for i in 0..4 {
        let mut e = BsLoadEntry::default();
        assert_eq!(unsafe { bs_table_entry(t, i, &mut e) }, BsStatus::Ok);
        assert_eq!(e.state as usize, i + 1);
        assert!((e.gamma1.re.hypot(e.gamma1.im) - 1.0).abs() < 1e-12);
        let mut g = BsComplex::default();
        assert_eq!(unsafe { bs_total_reflection(r, e.gamma1, e.gamma2, &mut g) }, BsStatus::Ok);
        assert!((g.re - gamma_tot.re).abs() < 1e-10 && (g.im - gamma_tot.im).abs() < 1e-10);
    }
    let mut e = BsLoadEntry::default();
    assert_eq!(unsafe { bs_table_entry(t, 4, &mut e) }, BsStatus::OutOfRange);
    assert!(last_error().contains("out of range"));

    let mut pair = BsReactivePair::default();
    assert_eq!(unsafe { bs_table_pair(t, &mut pair) }, BsStatus::Ok);
    assert!((pair.x_ii - 85.6416).abs() < 1e-3);
    assert!(!pair.ii_open);

    let mut p = BsBasisPowers::default();
    assert_eq!(unsafe { bs_basis_powers(r, t, &mut p) }, BsStatus::Ok);
    assert!((p.p_b1 + p.p_b2 - (1.0 - gamma_tot.re.powi(2) - gamma_tot.im.powi(2))).abs() < 1e-9);

    let mut residual = f64::NAN;
    assert_eq!(unsafe { bs_verify_multiplexing(r, t, 200, 3, &mut residual) }, BsStatus::Ok);
    assert!(residual < 1e-9);

    unsafe {
        bs_table_free(t);
        bs_radiator_free(r);
    }
}

#[test]
fn partner_and_solve_loads_agree() {
    let r = radiator();
    let mut pair = BsReactivePair::default();
    assert_eq!(unsafe { bs_reactive_partner(r, -100.0, &mut pair) }, BsStatus::Ok);
    assert!(pair.residual < 1e-12);
    let (mut g1, mut g2) = (BsComplex::default(), BsComplex::default());
    let st = unsafe { bs_solve_loads(r, pair.gamma_i, pair.gamma_ii, c(1.0, 0.0), &mut g1, &mut g2) };
    assert_eq!(st, BsStatus::Ok);
    assert!((g1.re - pair.gamma_ii.re).abs() < 1e-12 && (g1.im - pair.gamma_ii.im).abs() < 1e-12);
    assert!((g2.re - pair.gamma_i.re).abs() < 1e-12 && (g2.im - pair.gamma_i.im).abs() < 1e-12);
    unsafe { bs_radiator_free(r) };
}

#[test]
fn errors_map_to_status_codes() {
    let mut r = ptr::null_mut();
    let two_port = CString::new("# GHz S RI R 50\n1 0.1 0 0.2 0 0.2 0 0.1 0\n").unwrap();
    let st = unsafe { bs_radiator_from_touchstone(two_port.as_ptr(), f64::NAN, 1e-6, 5e-3, &mut r) };
    assert_eq!(st, BsStatus::PortCount);
    assert!(r.is_null());

    let asym = CString::new(DESIGN.replacen("0.46 -0.27\n", "0.36 -0.27\n", 1)).unwrap();
    let st = unsafe { bs_radiator_from_touchstone(asym.as_ptr(), f64::NAN, 1e-6, 5e-3, &mut r) };
    assert_eq!(st, BsStatus::Asymmetric, "{}", last_error());
    assert!(last_error().contains("S(1,1) and S(2,2)"));

    let active = CString::new(DESIGN.replace("0.24 0.19", "1.5 0.0")).unwrap();
    let st = unsafe { bs_radiator_from_touchstone(active.as_ptr(), f64::NAN, 1e-6, 5e-3, &mut r) };
    assert_eq!(st, BsStatus::NotPassive);

    let st = unsafe { bs_radiator_from_touchstone(ptr::null(), f64::NAN, 1e-6, 5e-3, &mut r) };
    assert_eq!(st, BsStatus::NullPointer);

    let st = unsafe { bs_reactive_partner(ptr::null(), 1.0, ptr::null_mut()) };
    assert_eq!(st, BsStatus::NullPointer);

    let good = radiator();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { bs_synthesize_psk(good, -100.0, 3, 1e-8, &mut t) }, BsStatus::InvalidInput);
    assert!(t.is_null());
    let mut pair = BsReactivePair::default();
    assert_eq!(unsafe { bs_reactive_partner(good, f64::NAN, &mut pair) }, BsStatus::InvalidInput);
    // A successful call clears the message.
    assert_eq!(unsafe { bs_reactive_partner(good, 10.0, &mut pair) }, BsStatus::Ok);
    assert_eq!(last_error(), "");
    assert_eq!(unsafe { bs_table_len(ptr::null()) }, 0);
    unsafe {
        bs_radiator_free(good);
        bs_radiator_free(ptr::null_mut());
        bs_table_free(ptr::null_mut());
    }
}

#[test]
fn radiator_from_parts_matches_touchstone() {
    let mut r = ptr::null_mut();
    let st = unsafe { bs_radiator_from_parts(c(0.24, 0.19), c(-0.13, 0.47), c(0.46, -0.27), c(0.14, 0.13), 50.0, &mut r) };
    assert_eq!(st, BsStatus::Ok);
    let from_file = radiator();
    let (mut a, mut b) = (BsComplex::default(), BsComplex::default());
    unsafe {
        bs_total_reflection(r, c(0.0, 1.0), c(0.6, -0.8), &mut a);
        bs_total_reflection(from_file, c(0.0, 1.0), c(0.6, -0.8), &mut b);
        bs_radiator_free(r);
        bs_radiator_free(from_file);
    }
    assert_eq!(a, b);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(bs_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn header() -> String {
    std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/beamspace.h")).unwrap()
}

#[test]
fn header_declares_the_api() {
    let h = header();
    for name in [
        "bs_last_error_message",
        "bs_version",
        "bs_radiator_from_touchstone",
        "bs_radiator_from_parts",
        "bs_radiator_free",
        "bs_total_reflection",
        "bs_reactive_partner",
        "bs_solve_loads",
        "bs_synthesize_psk",
        "bs_table_free",
        "bs_table_len",
        "bs_table_entry",
        "bs_table_gamma_tot",
        "bs_table_pair",
        "bs_basis_powers",
        "bs_verify_multiplexing",
    ] {
        assert!(h.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(h.contains("typedef struct BsRadiator BsRadiator;"));
    assert!(h.contains("typedef struct BsLoadTable BsLoadTable;"));
    assert!(h.contains("BS_STATUS_OK = 0"));
    assert!(h.contains("BS_STATUS_PANIC = 12"));
}

const C_PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "beamspace.h"

int main(void) {
    BsRadiator *r = NULL;
    BsComplex s00 = {0.24, 0.19}, s01 = {-0.13, 0.47}, s11 = {0.46, -0.27}, s21 = {0.14, 0.13};
    if (bs_radiator_from_parts(s00, s01, s11, s21, 50.0, &r) != BS_STATUS_OK) return 1;
    BsLoadTable *t = NULL;
    if (bs_synthesize_psk(r, -100.0, 4, 1e-8, &t) != BS_STATUS_OK) return 2;
    if (bs_table_len(t) != 4) return 3;
    BsLoadEntry e;
    if (bs_table_entry(t, 2, &e) != BS_STATUS_OK) return 4;
    if (bs_table_entry(t, 9, &e) != BS_STATUS_OUT_OF_RANGE) return 5;
    if (bs_last_error_message()[0] == '\0') return 6;
    printf("%.6f %.6f\n", e.x1, e.x2);
    bs_table_free(t);
    bs_radiator_free(r);
    return 0;
}
"#;

/// Compiles and runs a C client against the header and static library when a
/// C compiler is available.
#[test]
fn c_client_links_and_runs() {
    let Ok(cc) = which_cc() else {
        eprintln!("skipping: no C compiler found");
        return;
    };
    let exe = std::env::current_exe().unwrap();
    let target_dir = exe.parent().and_then(|p| p.parent()).unwrap().to_path_buf();
    let lib = target_dir.join("libbeamspace_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    let bin = dir.path().join("client");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C client failed to compile");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "client exit {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    let xs: Vec<f64> = text.split_whitespace().map(|s| s.parse().unwrap()).collect();
    assert!((xs[0] - 36.428982).abs() < 1e-5, "{text}");
    assert!((xs[1] - 190.391677).abs() < 1e-5, "{text}");
}

fn which_cc() -> Result<String, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok_and(|o| o.status.success()) {
            return Ok(cc.to_string());
        }
    }
    Err(())
}
