use std::ffi::{c_char, CStr, CString};
use std::ptr;

use cdss_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    cdss_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(cdss_last_error_message()).to_str().unwrap().to_owned()
}

fn config(n: usize, k: usize, l: usize) -> *mut CdssConfig {
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { cdss_config_new(n, k, l, &mut cfg) }, CdssStatus::Ok);
    cfg
}

#[test]
fn config_handle_round_trip() {
    let cfg = config(100, 85, 10);
    unsafe {
        assert_eq!(cdss_config_cluster_size(cfg), 10);
        assert_eq!(cdss_config_intra_helpers(cfg), 9);
        assert_eq!(cdss_config_cross_helpers(cfg), 90);
        cdss_config_free(cfg);
        assert_eq!(cdss_config_cluster_size(ptr::null()), 0);
        cdss_config_free(ptr::null_mut());
    }
}

#[test]
fn invalid_config_sets_status_and_message() {
    let mut cfg = ptr::null_mut();
    unsafe {
        assert_eq!(cdss_config_new(7, 3, 2, &mut cfg), CdssStatus::InvalidConfig);
        assert!(cfg.is_null());
        assert!(last_error().contains("does not divide"));
        assert_eq!(cdss_config_new(4, 4, 2, &mut cfg), CdssStatus::InvalidConfig);
        assert_eq!(cdss_config_new(4, 2, 2, ptr::null_mut()), CdssStatus::NullPointer);
    }
}

#[test]
fn capacity_matches_brute_force() {
    let cfg = config(4, 3, 2);
    let (alpha, bi, bc) = (c("2"), c("1"), c("1/2"));
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(cdss_capacity(cfg, alpha.as_ptr(), bi.as_ptr(), bc.as_ptr(), &mut out), CdssStatus::Ok);
        let closed = take(out);
        assert_eq!(closed, "4/1");
        assert_eq!(
            cdss_brute_force_capacity(cfg, alpha.as_ptr(), bi.as_ptr(), bc.as_ptr(), 1000, &mut out),
            CdssStatus::Ok
        );
        assert_eq!(take(out), closed);
        assert_eq!(
            cdss_brute_force_capacity(cfg, alpha.as_ptr(), bi.as_ptr(), bc.as_ptr(), 1, &mut out),
            CdssStatus::BudgetExceeded
        );
        cdss_config_free(cfg);
    }
}

#[test]
fn bad_inputs_map_to_status_codes() {
    let cfg = config(4, 3, 2);
    let mut out = ptr::null_mut();
    unsafe {
        let (one, half, junk, neg) = (c("1"), c("1/2"), c("abc"), c("-1"));
        assert_eq!(cdss_capacity(cfg, junk.as_ptr(), one.as_ptr(), half.as_ptr(), &mut out), CdssStatus::Parse);
        assert_eq!(
            cdss_capacity(cfg, neg.as_ptr(), one.as_ptr(), half.as_ptr(), &mut out),
            CdssStatus::InvalidResource
        );
        assert_eq!(
            cdss_capacity(cfg, one.as_ptr(), half.as_ptr(), one.as_ptr(), &mut out),
            CdssStatus::InvalidResource
        );
        assert_eq!(cdss_capacity(cfg, ptr::null(), one.as_ptr(), half.as_ptr(), &mut out), CdssStatus::NullPointer);
        assert_eq!(
            cdss_capacity(ptr::null(), one.as_ptr(), one.as_ptr(), half.as_ptr(), &mut out),
            CdssStatus::NullPointer
        );
        let bad_utf8 = [0xffu8 as c_char, 0];
        assert_eq!(
            cdss_capacity(cfg, bad_utf8.as_ptr(), one.as_ptr(), half.as_ptr(), &mut out),
            CdssStatus::InvalidUtf8
        );
        let kappa = c("3/2");
        assert_eq!(
            cdss_capacity_of_kappa(cfg, one.as_ptr(), one.as_ptr(), kappa.as_ptr(), &mut out),
            CdssStatus::KappaOutOfRange
        );
        cdss_config_free(cfg);
    }
}

#[test]
fn tradeoff_thresholds() {
    let cfg = config(100, 85, 10);
    let mut out = ptr::null_mut();
    unsafe {
        let (m, one, two, big, three_fifths) = (c("85"), c("1"), c("2"), c("1000"), c("3/5"));
        assert_eq!(cdss_capacity_of_kappa(cfg, one.as_ptr(), one.as_ptr(), one.as_ptr(), &mut out), CdssStatus::Ok);
        assert_eq!(take(out), "1615/33");
        assert_eq!(cdss_gamma_i_star(cfg, m.as_ptr(), big.as_ptr(), &mut out), CdssStatus::Ok);
        assert_eq!(take(out), "153/79");
        assert_eq!(cdss_zero_cross_threshold(cfg, m.as_ptr(), big.as_ptr(), &mut out), CdssStatus::Ok);
        assert_eq!(take(out), "153/79");
        assert_eq!(cdss_gamma_i_star(cfg, m.as_ptr(), one.as_ptr(), &mut out), CdssStatus::AlphaTooSmall);
        assert_eq!(cdss_min_gamma_c(cfg, m.as_ptr(), one.as_ptr(), three_fifths.as_ptr(), &mut out), CdssStatus::Ok);
        assert_eq!(take(out), "6/1");
        let below = c("1/2");
        assert_eq!(cdss_min_gamma_c(cfg, m.as_ptr(), one.as_ptr(), below.as_ptr(), &mut out), CdssStatus::Infeasible);
        assert_eq!(cdss_min_gamma_c(cfg, m.as_ptr(), two.as_ptr(), big.as_ptr(), &mut out), CdssStatus::Ok);
        assert_eq!(take(out), "0/1");
        cdss_config_free(cfg);

        let small = config(4, 3, 2);
        assert_eq!(cdss_gamma_i_star(small, m.as_ptr(), big.as_ptr(), &mut out), CdssStatus::DegenerateCluster);
        assert_eq!(cdss_zero_cross_threshold(small, m.as_ptr(), big.as_ptr(), &mut out), CdssStatus::Ok);
        cdss_string_free(out);
        cdss_config_free(small);
    }
}

#[test]
fn decimal_rendering() {
    let mut out = ptr::null_mut();
    let v = c("85/77");
    unsafe {
        assert_eq!(cdss_to_decimal(v.as_ptr(), &mut out), CdssStatus::Ok);
        assert_eq!(take(out), "1.1038961039");
    }
}

#[test]
fn sweep_curve_set() {
    let cfg = config(100, 85, 10);
    let grid: Vec<CString> = ["0", "1/2", "1"].iter().map(|s| c(s)).collect();
    let ptrs: Vec<*const c_char> = grid.iter().map(|s| s.as_ptr()).collect();
    let (m, one) = (c("85"), c("1"));
    unsafe {
        let mut set = ptr::null_mut();
        assert_eq!(
            cdss_sweep(
                cfg,
                CdssCurveKind::Kappa,
                ptr::null(),
                one.as_ptr(),
                one.as_ptr(),
                ptrs.as_ptr(),
                ptrs.len(),
                &mut set
            ),
            CdssStatus::Ok
        );
        assert_eq!(cdss_curve_set_len(set), 1);
        let mut out = ptr::null_mut();
        assert_eq!(cdss_curve_set_csv(set, 0, &mut out), CdssStatus::Ok);
        let csv = take(out);
        assert!(csv.starts_with("kappa,capacity\n"));
        assert!(csv.contains("1,48.9393939394"));
        assert_eq!(cdss_curve_set_csv(set, 1, &mut out), CdssStatus::IndexOutOfRange);
        assert_eq!(cdss_curve_set_json(set, &mut out), CdssStatus::Ok);
        assert!(take(out).contains("\"1615/33\""));
        cdss_curve_set_free(set);

        let alphas: Vec<CString> = ["1", "2"].iter().map(|s| c(s)).collect();
        let aptrs: Vec<*const c_char> = alphas.iter().map(|s| s.as_ptr()).collect();
        assert_eq!(
            cdss_sweep(
                cfg,
                CdssCurveKind::AlphaGamma,
                m.as_ptr(),
                ptr::null(),
                ptr::null(),
                aptrs.as_ptr(),
                2,
                &mut set
            ),
            CdssStatus::Ok
        );
        assert_eq!(cdss_curve_set_len(set), 2);
        cdss_curve_set_free(set);

        let unsorted: Vec<*const c_char> = ptrs.iter().rev().copied().collect();
        assert_eq!(
            cdss_sweep(
                cfg,
                CdssCurveKind::Kappa,
                ptr::null(),
                one.as_ptr(),
                one.as_ptr(),
                unsorted.as_ptr(),
                3,
                &mut set
            ),
            CdssStatus::InvalidGrid
        );
        cdss_config_free(cfg);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/cdss.h")).unwrap();
    for name in [
        "cdss_last_error_message",
        "cdss_string_free",
        "cdss_config_new",
        "cdss_config_free",
        "cdss_config_cluster_size",
        "cdss_config_intra_helpers",
        "cdss_config_cross_helpers",
        "cdss_capacity",
        "cdss_brute_force_capacity",
        "cdss_capacity_of_kappa",
        "cdss_gamma_i_star",
        "cdss_zero_cross_threshold",
        "cdss_min_gamma_c",
        "cdss_to_decimal",
        "cdss_sweep",
        "cdss_curve_set_len",
        "cdss_curve_set_csv",
        "cdss_curve_set_json",
        "cdss_curve_set_free",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct CdssConfig CdssConfig;"));
    assert!(header.contains("CDSS_STATUS_OK = 0"));
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/cdss.h");
    let Ok(status) =
        std::process::Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header]).status()
    else {
        eprintln!("no C compiler, skipping");
        return;
    };
    assert!(status.success());
}
