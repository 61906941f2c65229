use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use wgelfand_ffi::*;

fn last_error() -> String {
    let p = wg_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn s3_pair(weight_json: &str) -> *mut WgPair {
    let mut g = ptr::null_mut();
    assert_eq!(wg_group_symmetric(3, &mut g), WgStatus::Ok);
    let k = CString::new(r#"{"generators": [[1, 0, 2]]}"#).unwrap();
    let w = CString::new(weight_json).unwrap();
    let mut p = ptr::null_mut();
    let st = wg_pair_from_json(g, k.as_ptr(), w.as_ptr(), &mut p);
    wg_group_free(g);
    assert_eq!(st, WgStatus::Ok, "{}", last_error());
    p
}

#[test]
fn group_handles() {
    unsafe {
        let json = CString::new(r#"{"kind": "dihedral", "n": 4}"#).unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(wg_group_from_json(json.as_ptr(), &mut g), WgStatus::Ok);
        assert_eq!(wg_group_order(g), 8);
        for a in 0..8 {
            let mut inv = 0;
            let mut prod = 99;
            assert_eq!(wg_group_inverse(g, a, &mut inv), WgStatus::Ok);
            assert_eq!(wg_group_mul(g, a, inv, &mut prod), WgStatus::Ok);
            assert_eq!(prod, 0);
        }
        let mut out = 0;
        assert_eq!(wg_group_mul(g, 8, 0, &mut out), WgStatus::OutOfRange);
        assert!(last_error().contains('8'));
        wg_group_free(g);
        assert_eq!(wg_group_order(ptr::null()), 0);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        let bad = CString::new("{\"kind\": \"cyclic\"}").unwrap();
        assert_eq!(wg_group_from_json(bad.as_ptr(), &mut g), WgStatus::InvalidInput);
        assert!(last_error().contains("`n`"));
        assert!(g.is_null());
        assert_eq!(wg_group_from_json(ptr::null(), &mut g), WgStatus::NullPointer);
        assert_eq!(wg_group_cyclic(0, &mut g), WgStatus::InvalidInput);
        assert_eq!(wg_group_cyclic(3, ptr::null_mut()), WgStatus::NullPointer);

        assert_eq!(wg_group_symmetric(3, &mut g), WgStatus::Ok);
        let mut p = ptr::null_mut();
        let w = [1.0, 1.0, 0.0, 1.0, 1.0, 1.0];
        assert_eq!(wg_pair_new(g, ptr::null(), 0, w.as_ptr(), 6, &mut p), WgStatus::InvalidInput);
        assert_eq!(wg_pair_new(g, ptr::null(), 0, w.as_ptr(), 5, &mut p), WgStatus::InvalidInput);
        assert_eq!(wg_pair_new(g, [9usize].as_ptr(), 1, ptr::null(), 0, &mut p), WgStatus::OutOfRange);
        wg_group_free(g);
    }
}

#[test]
fn gelfand_pair_analysis() {
    unsafe {
        let p = s3_pair(r#"{"kind": "by_double_coset", "values": {"0": 1, "1": 2}}"#);
        assert_eq!(wg_pair_coset_count(p), 2);
        let mut a = ptr::null_mut();
        assert_eq!(wg_analysis_run(p, 1e-9, 0xC0FFEE, &mut a), WgStatus::Ok);
        assert_eq!(wg_analysis_is_gelfand(a), 1);
        assert_eq!(wg_analysis_spherical_count(a), 2);
        let mut rank = 0;
        assert_eq!(wg_analysis_fourier_rank(a, &mut rank), WgStatus::Ok);
        assert_eq!(rank, 2);

        // Each spherical function is a character of the convolution algebra.
        let mut phis = Vec::new();
        for s in 0..2 {
            let mut buf = [0.0; 4];
            assert_eq!(wg_analysis_spherical_values(a, s, buf.as_mut_ptr(), 4), WgStatus::Ok);
            assert!((buf[0] - 1.0).abs() < 1e-9 && buf[1].abs() < 1e-9);
            phis.push(buf);
        }
        let mut small = [0.0; 3];
        assert_eq!(wg_analysis_spherical_values(a, 0, small.as_mut_ptr(), 3), WgStatus::BufferTooSmall);
        assert_eq!(wg_analysis_spherical_values(a, 2, small.as_mut_ptr(), 4), WgStatus::OutOfRange);

        let f = [0.3, -0.2, 1.1, 0.4];
        let g = [-0.7, 0.5, 0.2, 0.9];
        let mut h = [0.0; 4];
        assert_eq!(wg_pair_convolve(p, f.as_ptr(), g.as_ptr(), h.as_mut_ptr(), 4), WgStatus::Ok);
        assert_eq!(wg_pair_convolve(p, f.as_ptr(), g.as_ptr(), h.as_mut_ptr(), 2), WgStatus::BufferTooSmall);

        let json = wg_analysis_report_json(a);
        let doc: serde_json::Value = serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        wg_string_free(json);
        assert_eq!(doc["gelfand"]["gelfand"], true);
        assert_eq!(doc["fourier_rank"], 2);
        assert_eq!(doc["spherical"].as_array().unwrap().len(), 2);

        wg_analysis_free(a);
        wg_pair_free(p);
    }
}

#[test]
fn pair_from_seeds_and_weights() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(wg_group_cyclic(6, &mut g), WgStatus::Ok);
        let w = [1.0, 2.0, 4.0, 1.0, 2.0, 4.0];
        let mut p = ptr::null_mut();
        assert_eq!(wg_pair_new(g, [3usize].as_ptr(), 1, w.as_ptr(), 6, &mut p), WgStatus::Ok, "{}", last_error());
        assert_eq!(wg_pair_coset_count(p), 3);
        let mut c = 9;
        assert_eq!(wg_pair_coset_of(p, 4, &mut c), WgStatus::Ok);
        assert_eq!(c, 1);
        wg_pair_free(p);
        wg_group_free(g);
    }
}

#[test]
fn negative_verdict_is_not_an_error() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(wg_group_symmetric(3, &mut g), WgStatus::Ok);
        let mut p = ptr::null_mut();
        assert_eq!(wg_pair_new(g, ptr::null(), 0, ptr::null(), 0, &mut p), WgStatus::Ok);
        let mut a = ptr::null_mut();
        assert_eq!(wg_analysis_run(p, 1e-9, 1, &mut a), WgStatus::Ok);
        assert_eq!(wg_analysis_is_gelfand(a), 0);
        assert_eq!(wg_analysis_spherical_count(a), 0);
        let mut rank = 0;
        assert_eq!(wg_analysis_fourier_rank(a, &mut rank), WgStatus::NotGelfand);
        assert_eq!(wg_analysis_run(p, 0.0, 1, &mut a), WgStatus::InvalidInput);
        wg_analysis_free(a);
        wg_pair_free(p);
        wg_group_free(g);
    }
}

#[test]
fn analyze_json_matches_cli_exit_codes() {
    unsafe {
        let g = CString::new(r#"{"kind": "symmetric", "n": 3}"#).unwrap();
        let k = CString::new(r#"{"generators": [[1, 0, 2]]}"#).unwrap();
        let mut report = ptr::null_mut();
        let mut code = -1;
        assert_eq!(wg_analyze_json(g.as_ptr(), k.as_ptr(), ptr::null(), &mut report, &mut code), WgStatus::Ok);
        assert_eq!(code, 0);
        let doc: serde_json::Value = serde_json::from_str(CStr::from_ptr(report).to_str().unwrap()).unwrap();
        assert_eq!(doc["tool"], "wgelfand");
        wg_string_free(report);

        assert_eq!(wg_analyze_json(g.as_ptr(), ptr::null(), ptr::null(), &mut report, &mut code), WgStatus::Ok);
        assert_eq!(code, 2);
        wg_string_free(report);

        let w = CString::new(r#"{"kind": "uniform", "extra": 1}"#).unwrap();
        assert_eq!(wg_analyze_json(g.as_ptr(), k.as_ptr(), w.as_ptr(), &mut report, &mut code), WgStatus::InvalidInput);
        assert_eq!(code, 1);
        assert!(report.is_null());
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(wg_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "wgelfand.h"

int main(void) {
    WgGroup *g = NULL;
    WgPair *p = NULL;
    WgAnalysis *a = NULL;
    if (wg_group_from_json("{\"kind\": \"symmetric\", \"n\": 4}", &g) != WG_STATUS_OK) return 10;
    if (wg_pair_from_json(g, "{\"stabilizer\": 3}", NULL, &p) != WG_STATUS_OK) return 11;
    if (wg_analysis_run(p, 1e-9, 0xC0FFEE, &a) != WG_STATUS_OK) return 12;
    size_t rank = 0;
    if (wg_analysis_fourier_rank(a, &rank) != WG_STATUS_OK) return 13;
    printf("order=%zu cosets=%zu gelfand=%d spherical=%zu rank=%zu\n", wg_group_order(g),
           wg_pair_coset_count(p), wg_analysis_is_gelfand(a), wg_analysis_spherical_count(a), rank);
    WgGroup *bad = NULL;
    if (wg_group_cyclic(0, &bad) != WG_STATUS_INVALID_INPUT || wg_last_error_message() == NULL) return 14;
    wg_analysis_free(a);
    wg_pair_free(p);
    wg_group_free(g);
    return 0;
}
"#;

/// The static library built alongside this test binary. `cargo test`
/// leaves it in `target/<profile>/deps` without copying it up a level.
fn static_lib() -> PathBuf {
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    deps.join("libwgelfand_ffi.a")
}

#[test]
fn header_compiles_and_links_from_c() {
    let lib = static_lib();
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap_or_else(|e| panic!("failed to run {cc}: {e}"));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert_eq!(stdout.trim(), "order=24 cosets=2 gelfand=1 spherical=2 rank=2");
}
