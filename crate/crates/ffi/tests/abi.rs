use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use pseudodyn_ffi::*;

const LINE: &str = r#"{
    "points": ["a", "b", "c"],
    "dist": [[0, 1, 2], [1, 0, 1], [2, 1, 0]],
    "generators": [{"name": "g", "map": {"a": "b", "b": "c"}}],
    "mu": {"a": "1/2", "b": "1/4", "c": "1/4"}
}"#;

const GOOD: &str = r#"{
    "points": ["a", "b", "c", "d"],
    "dist": [[0, 1, 2, 3], [1, 0, 1, 2], [2, 1, 0, 1], [3, 2, 1, 0]],
    "generators": [{"name": "s", "map": {"a": "b", "b": "c", "c": "d"}, "core": ["a", "b", "c"]}]
}"#;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn load(json: &str) -> *mut PdModel {
    let mut m = ptr::null_mut();
    let status = unsafe { pd_model_from_json(c(json).as_ptr(), &mut m) };
    assert_eq!(status, PdStatus::Ok, "{}", last_error());
    m
}

fn last_error() -> String {
    let p = pd_last_error();
    if p.is_null() {
        String::new()
    } else {
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }
}

#[test]
fn balls_and_measure() {
    let m = load(LINE);
    unsafe {
        assert_eq!(pd_point_count(m), 3);
        let mut mask = [9u8; 3];
        let eps = c("3/2");
        assert_eq!(
            pd_dyn_ball(m, 0, 1, eps.as_ptr(), true, mask.as_mut_ptr(), 3),
            PdStatus::Ok
        );
        assert_eq!(mask, [1, 1, 0]);
        assert!(pd_last_error().is_null());

        let delta = c("1");
        assert_eq!(
            pd_bowen_ball(m, 1, delta.as_ptr(), mask.as_mut_ptr(), 3),
            PdStatus::Ok
        );
        assert_eq!(mask[1], 1);

        let mut out = ptr::null_mut();
        assert_eq!(
            pd_measure_of(m, [1u8, 1, 0].as_ptr(), 3, &mut out),
            PdStatus::Ok
        );
        assert_eq!(CStr::from_ptr(out).to_str().unwrap(), "3/4");
        pd_string_free(out);

        let (mut lo, mut hi) = (0, 0);
        let half = c("1/2");
        assert_eq!(
            pd_separated_count(m, 1, half.as_ptr(), true, &mut lo, &mut hi),
            PdStatus::Ok
        );
        assert_eq!((lo, hi), (3, 3));
        pd_model_free(m);
    }
}

#[test]
fn goodness() {
    let m = load(GOOD);
    let mut good = false;
    unsafe {
        assert_eq!(pd_is_good(m, &mut good), PdStatus::Ok);
        assert!(good);
        pd_model_free(m);
    }
    let m = load(LINE);
    unsafe {
        assert_eq!(pd_is_good(m, &mut good), PdStatus::Precondition);
        assert!(last_error().contains("core"), "{}", last_error());
        pd_model_free(m);
    }
}

#[test]
fn errors_are_reported() {
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(
            pd_model_from_json(c("{").as_ptr(), &mut m),
            PdStatus::InvalidInput
        );
        assert!(m.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(
            pd_model_from_json(ptr::null(), &mut m),
            PdStatus::NullArgument
        );

        let m = load(LINE);
        let mut idx = 0;
        assert_eq!(pd_point_index(m, c("b").as_ptr(), &mut idx), PdStatus::Ok);
        assert_eq!(idx, 1);
        assert_eq!(
            pd_point_index(m, c("z").as_ptr(), &mut idx),
            PdStatus::InvalidInput
        );
        assert!(last_error().contains("`z`"));

        let mut small = [0u8; 2];
        let eps = c("1");
        assert_eq!(
            pd_dyn_ball(m, 0, 1, eps.as_ptr(), true, small.as_mut_ptr(), 2),
            PdStatus::BufferTooSmall
        );
        assert_eq!(
            pd_dyn_ball(m, 7, 1, eps.as_ptr(), true, small.as_mut_ptr(), 2),
            PdStatus::InvalidInput
        );
        let mut out = ptr::null_mut();
        assert_eq!(
            pd_measure_of(m, small.as_ptr(), 2, &mut out),
            PdStatus::InvalidInput
        );
        pd_model_free(m);

        let bare = load(GOOD);
        let mask = [1u8; 4];
        assert_eq!(
            pd_measure_of(bare, mask.as_ptr(), 4, &mut out),
            PdStatus::Precondition
        );
        pd_model_free(bare);
        assert_eq!(pd_point_count(ptr::null()), 0);
        pd_model_free(ptr::null_mut());
        pd_string_free(ptr::null_mut());
    }
}

/// Compiles a C program against the generated header and the static
/// library. Skipped when no C compiler is on the path.
#[test]
fn c_program_links_against_header() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let deps = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib_dir = deps.parent().unwrap();
    let lib = lib_dir.join("libpseudodyn_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let exe = deps.join("pseudodyn_smoke");
    let status = Command::new("cc")
        .arg(root.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
