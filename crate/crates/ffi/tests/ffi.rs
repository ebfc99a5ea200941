use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use serde_json::Value;
use wcalc_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(wcalc_last_error()) }.to_string_lossy().into_owned()
}

/// Takes ownership of a returned JSON string.
fn take_json(p: *mut c_char) -> Value {
    let v = serde_json::from_str(unsafe { CStr::from_ptr(p) }.to_str().unwrap()).unwrap();
    unsafe { wcalc_string_free(p) };
    v
}

#[test]
fn sequence_round_trip() {
    unsafe {
        let mut seq = ptr::null_mut();
        assert_eq!(wcalc_sequence_parse(c("gevrey:2").as_ptr(), 100, &mut seq), WCALC_OK);
        let mut len = 0usize;
        assert_eq!(wcalc_sequence_len(seq, &mut len), WCALC_OK);
        assert_eq!(len, 101);
        let mut v = 0.0;
        assert_eq!(wcalc_sequence_log_value(seq, 3, &mut v), WCALC_OK);
        assert!((v - 2.0 * 6f64.ln()).abs() < 1e-12);
        let mut json = ptr::null_mut();
        assert_eq!(wcalc_sequence_analyze(seq, &mut json), WCALC_OK);
        let report = take_json(json);
        assert!(report["verdicts"].as_array().unwrap().iter().all(|v| v["status"] == "holds"));
        let mut status = -1;
        assert_eq!(wcalc_sequence_nq(seq, &mut status), WCALC_OK);
        assert_eq!(status, WCALC_HOLDS);
        wcalc_sequence_free(seq);
    }
}

#[test]
fn prefix_only_sequences_stop_at_pmax() {
    unsafe {
        let mut seq = ptr::null_mut();
        assert_eq!(wcalc_sequence_parse(c("values:0,0,1,3").as_ptr(), 100, &mut seq), WCALC_OK);
        let mut v = 0.0;
        assert_eq!(wcalc_sequence_log_value(seq, 4, &mut v), WCALC_ERR_PRECONDITION);
        assert!(last_error().contains("4"), "{}", last_error());
        wcalc_sequence_free(seq);
    }
}

#[test]
fn errors_map_to_codes() {
    unsafe {
        let mut seq = ptr::null_mut();
        assert_eq!(wcalc_sequence_parse(c("nosuch:1").as_ptr(), 10, &mut seq), WCALC_ERR_PARSE);
        assert!(seq.is_null());
        assert!(last_error().contains("nosuch"));
        assert_eq!(wcalc_sequence_parse(ptr::null(), 10, &mut seq), WCALC_ERR_INVALID_ARGUMENT);
        assert_eq!(wcalc_sequence_parse(c("gevrey:2").as_ptr(), 10, ptr::null_mut()), WCALC_ERR_INVALID_ARGUMENT);
        let mut v = 0.0;
        assert_eq!(wcalc_sequence_log_value(ptr::null(), 0, &mut v), WCALC_ERR_INVALID_ARGUMENT);
        let mut w = ptr::null_mut();
        assert_eq!(wcalc_weight_parse(c("powerlog:0.5").as_ptr(), 10, &mut w), WCALC_ERR_PRECONDITION);
        // success clears the message
        assert_eq!(wcalc_weight_parse(c("powerlog:2").as_ptr(), 10, &mut w), WCALC_OK);
        assert_eq!(last_error(), "");
        wcalc_weight_free(w);
        wcalc_sequence_free(ptr::null_mut());
        wcalc_string_free(ptr::null_mut());
    }
}

#[test]
fn weights() {
    unsafe {
        let mut w = ptr::null_mut();
        assert_eq!(wcalc_weight_parse(c("powerlog:2").as_ptr(), 200, &mut w), WCALC_OK);
        let mut v = 0.0;
        assert_eq!(wcalc_weight_omega(w, 100f64.exp(), &mut v), WCALC_OK);
        assert!((v - 1e4).abs() < 1e-6 * 1e4);
        assert_eq!(wcalc_weight_omega(w, f64::NAN, &mut v), WCALC_ERR_INVALID_ARGUMENT);
        let mut json = ptr::null_mut();
        assert_eq!(wcalc_weight_analyze(w, &mut json), WCALC_OK);
        let report = take_json(json);
        let omega6 = report["verdicts"]
            .as_array()
            .unwrap()
            .iter()
            .find(|v| v["condition"] == "omega6")
            .unwrap();
        assert_eq!(omega6["status"], "fails");
        wcalc_weight_free(w);
    }
}

#[test]
fn matrices() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(wcalc_matrix_parse(c("gevrey:1,2,3").as_ptr(), 200, &mut m), WCALC_OK);
        let mut json = ptr::null_mut();
        assert_eq!(wcalc_matrix_conditions(m, &mut json), WCALC_OK);
        assert!(!take_json(json)["verdicts"].as_array().unwrap().is_empty());
        let mut status = -1;
        assert_eq!(wcalc_matrix_nq(m, WCALC_BEURLING, &mut status), WCALC_OK);
        assert_eq!(status, WCALC_HOLDS);
        assert_eq!(wcalc_matrix_nq(m, 7, &mut status), WCALC_ERR_INVALID_ARGUMENT);
        wcalc_matrix_free(m);
    }
}

#[test]
fn run_reports() {
    unsafe {
        let mut json = ptr::null_mut();
        let args = c(r#"["matrix", "chain", "--gevrey", "2", "--steps", "2", "--check-identity", "--out", "/nonexistent/x.json"]"#);
        assert_eq!(wcalc_run(args.as_ptr(), &mut json), WCALC_OK);
        let report = take_json(json);
        assert_eq!(report["tool"], "wcalc");
        assert_eq!(report["status"], "holds");
        assert_eq!(wcalc_run(c(r#"["analyze"]"#).as_ptr(), &mut json), WCALC_ERR_PARSE);
        assert_eq!(wcalc_run(c("not json").as_ptr(), &mut json), WCALC_ERR_PARSE);
        let args = c(r#"["fourier", "harness", "--matrix", "constant:gevrey:2", "--points", "1024"]"#);
        assert_eq!(wcalc_run(args.as_ptr(), &mut json), WCALC_ERR_PRECONDITION);
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(wcalc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

/// Compiles tests/smoke.c against the generated header and the static
/// library; skipped when no C compiler is on PATH.
#[test]
fn c_smoke_program() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<this test> → target/<profile>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libwcalc_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("wcalc_smoke");
    let status = Command::new(&cc)
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg("-Wall")
        .arg("-Werror")
        .arg("-o")
        .arg(&exe)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).ends_with("ok\n"));
}

fn which_cc() -> Result<String, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .map(str::to_string)
        .ok_or(())
}
