use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use refbloch_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    rb_string_free(s);
    out
}

#[test]
fn field_lifecycle_and_bloch_order() {
    unsafe {
        let mut f: *mut RbField = ptr::null_mut();
        assert_eq!(rb_field_new(8, &mut f), RbStatus::Ok);
        assert_eq!(rb_field_order(f), 8);
        let mut n = 0u64;
        assert_eq!(rb_field_bloch_order(f, &mut n), RbStatus::Ok);
        assert_eq!(n, 9);
        let mut json = ptr::null_mut();
        assert_eq!(rb_field_prebloch_json(f, &mut json), RbStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["text"], "Z/9");
        rb_field_free(f);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut f: *mut RbField = ptr::null_mut();
        assert_eq!(rb_field_new(6, &mut f), RbStatus::InvalidField);
        assert!(f.is_null());
        assert!(take(rb_last_error_message()).contains("prime power"));
        assert_eq!(rb_field_new(5, ptr::null_mut()), RbStatus::NullPointer);
        assert_eq!(rb_field_order(ptr::null()), 0);
        rb_field_free(ptr::null_mut());
        rb_string_free(ptr::null_mut());

        assert_eq!(rb_field_new(5, &mut f), RbStatus::Ok);
        let bad = CString::new("nonsense").unwrap();
        let mut json = ptr::null_mut();
        assert_eq!(rb_field_verify_json(f, bad.as_ptr(), &mut json), RbStatus::InvalidArgument);
        assert_eq!(rb_field_verify_json(f, ptr::null(), &mut json), RbStatus::NullPointer);
        rb_field_free(f);
    }
}

#[test]
fn verify_suite() {
    unsafe {
        let mut f: *mut RbField = ptr::null_mut();
        assert_eq!(rb_field_new(7, &mut f), RbStatus::Ok);
        let suite = CString::new("suslin").unwrap();
        let mut json = ptr::null_mut();
        assert_eq!(rb_field_verify_json(f, suite.as_ptr(), &mut json), RbStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["suite"], "suslin");
        rb_field_free(f);
    }
}

fn run(args: &[&str]) -> (RbStatus, Option<serde_json::Value>) {
    let owned: Vec<CString> = args.iter().map(|a| CString::new(*a).unwrap()).collect();
    let ptrs: Vec<*const c_char> = owned.iter().map(|c| c.as_ptr()).collect();
    let mut json = ptr::null_mut();
    unsafe {
        let s = rb_run_json(ptrs.as_ptr(), ptrs.len(), &mut json);
        let v = (!json.is_null()).then(|| serde_json::from_str(&take(json)).unwrap());
        (s, v)
    }
}

#[test]
fn run_json_commands() {
    let (s, v) = run(&["tower", "--base", "5", "--levels", "2"]);
    assert_eq!(s, RbStatus::Ok);
    let v = v.unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["checks"][0]["data"]["exponents"], serde_json::json!([2, 1]));

    let (s, v) = run(&["tower", "--base", "2", "--levels", "1"]);
    assert_eq!(s, RbStatus::CheckFailed);
    assert_eq!(v.unwrap()["checks"][0]["data"]["surjection_only"], true);

    assert_eq!(run(&["laurent-fuzz", "--q", "4"]).0, RbStatus::InvalidArgument);
    assert_eq!(run(&["no-such-command"]).0, RbStatus::InvalidArgument);
}

#[test]
fn header_declares_the_api() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/refbloch.h")).unwrap();
    for name in [
        "rb_field_new",
        "rb_field_free",
        "rb_field_bloch_order",
        "rb_field_verify_json",
        "rb_run_json",
        "rb_last_error_message",
        "rb_string_free",
        "typedef struct RbField RbField",
        "RB_STATUS_CHECK_FAILED = 5",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "refbloch.h"

int main(void) {
    RbField *f = NULL;
    if (rb_field_new(5, &f) != RB_STATUS_OK) return 1;
    uint64_t n = 0;
    if (rb_field_bloch_order(f, &n) != RB_STATUS_OK || n != 3) return 2;
    rb_field_free(f);
    if (rb_field_new(1, &f) != RB_STATUS_INVALID_FIELD) return 3;
    char *msg = rb_last_error_message();
    if (msg == NULL) return 4;
    rb_string_free(msg);
    const char *argv[] = {"tower", "--base", "5", "--levels", "1"};
    char *json = NULL;
    if (rb_run_json(argv, 5, &json) != RB_STATUS_OK) return 5;
    if (strstr(json, "\"schema\":1") == NULL) return 6;
    rb_string_free(json);
    puts("ok");
    return 0;
}
"#;

/// Compiles and links a C program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target = std::env::var_os("CARGO_TARGET_DIR").map(PathBuf::from).unwrap_or_else(|| dir.join("../../target"));
    let profile = if cfg!(debug_assertions) { "debug" } else { "release" };
    let lib = target.join(profile).join("librefbloch_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping C link test: no C compiler or {} not built", lib.display());
        return;
    }
    let tmp = std::env::temp_dir().join(format!("refbloch_capi_{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    let src = tmp.join("main.c");
    let exe = tmp.join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let out = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(out.status.success(), "cc failed: {}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "C program exited with {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
    let _ = std::fs::remove_dir_all(&tmp);
}
