use std::ffi::{CStr, CString};
use std::ptr;

use twdeg_ffi::*;

// Every call below passes null or valid pointers.

fn new_psl(q: u32) -> *mut TwdegPsl {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(twdeg_psl_new(q, &mut h), TwdegStatus::Ok);
        assert!(!h.is_null());
        h
    }
}

fn last_error() -> String {
    let p = twdeg_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn group_queries() {
    unsafe {
        let h = new_psl(7);
        let mut n = 0u64;
        assert_eq!(twdeg_psl_order(h, &mut n), TwdegStatus::Ok);
        assert_eq!(n, 168);
        assert_eq!(twdeg_psl_point_stabilizer_order(h, &mut n), TwdegStatus::Ok);
        assert_eq!(n, 21);
        let mut x = 0u32;
        for a in 0..168 {
            assert_eq!(twdeg_psl_inverse(h, a, &mut x), TwdegStatus::Ok);
            let mut e = 99u32;
            assert_eq!(twdeg_psl_multiply(h, a, x, &mut e), TwdegStatus::Ok);
            assert_eq!(e, 0);
            let (mut ord, mut c, mut k) = (0u32, 0u64, 0u64);
            assert_eq!(twdeg_psl_element_order(h, a, &mut ord), TwdegStatus::Ok);
            assert_eq!(twdeg_psl_centralizer_order(h, a, &mut c), TwdegStatus::Ok);
            assert_eq!(twdeg_psl_class_size(h, a, &mut k), TwdegStatus::Ok);
            assert_eq!(c * k, 168);
            if ord == 2 {
                assert_eq!(k, 21);
            }
        }
        twdeg_psl_free(h);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(twdeg_psl_new(6, &mut h), TwdegStatus::BadOrder);
        assert!(h.is_null());
        assert!(last_error().contains("6"));
        assert_eq!(twdeg_psl_new(7, ptr::null_mut()), TwdegStatus::NullPointer);

        let h = new_psl(4);
        let mut x = 0u32;
        assert_eq!(
            twdeg_psl_multiply(h, 60, 0, &mut x),
            TwdegStatus::InvalidArgument
        );
        assert!(last_error().contains("out of range"));
        assert_eq!(
            twdeg_psl_inverse(h, 0, ptr::null_mut()),
            TwdegStatus::NullPointer
        );
        assert_eq!(
            twdeg_psl_order(ptr::null(), ptr::null_mut()),
            TwdegStatus::NullPointer
        );
        twdeg_psl_free(h);
        twdeg_psl_free(ptr::null_mut());
    }
}

#[test]
fn run_returns_json_report() {
    unsafe {
        let cmd = CString::new("coset-involution").unwrap();
        let mut json = ptr::null_mut();
        let mut passed = -1;
        assert_eq!(
            twdeg_run(cmd.as_ptr(), 7, 0, false, &mut json, &mut passed),
            TwdegStatus::Ok
        );
        assert_eq!(passed, 1);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        twdeg_string_free(json);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["results"][0]["check_id"], "coset-involution.q7");
        assert_eq!(v["results"][0]["status"], "pass");

        let cmd = CString::new("dickson-census").unwrap();
        assert_eq!(
            twdeg_run(cmd.as_ptr(), 13, 0, false, &mut json, &mut passed),
            TwdegStatus::Ok
        );
        assert_eq!(passed, 0);
        twdeg_string_free(json);

        let cmd = CString::new("nonsense").unwrap();
        assert_eq!(
            twdeg_run(cmd.as_ptr(), 0, 0, false, &mut json, &mut passed),
            TwdegStatus::UnknownCheck
        );
        assert_eq!(
            twdeg_run(ptr::null(), 0, 0, false, &mut json, &mut passed),
            TwdegStatus::NullPointer
        );
    }
}

#[test]
fn header_declares_every_entry_point() {
    let header = include_str!("../include/twdeg.h");
    for name in [
        "twdeg_last_error_message",
        "twdeg_psl_new",
        "twdeg_psl_free",
        "twdeg_psl_order",
        "twdeg_psl_point_stabilizer_order",
        "twdeg_psl_multiply",
        "twdeg_psl_inverse",
        "twdeg_psl_element_order",
        "twdeg_psl_centralizer_order",
        "twdeg_psl_class_size",
        "twdeg_run",
        "twdeg_string_free",
        "TWDEG_STATUS_OK",
        "typedef struct TwdegPsl TwdegPsl",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = tempfile_dir();
    let src = dir.join("use_header.c");
    std::fs::write(
        &src,
        "#include \"twdeg.h\"\nint main(void) { TwdegPsl *h = 0; uint64_t n = 0;\n\
         TwdegStatus s = twdeg_psl_new(7, &h);\n if (s == TWDEG_STATUS_OK) { twdeg_psl_order(h, &n); twdeg_psl_free(h); }\n\
         return n == 168 ? 0 : 1; }\n",
    )
    .unwrap();
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let out = std::process::Command::new("cc")
        .args([
            "-std=c99",
            "-Wall",
            "-Werror",
            "-fsyntax-only",
            "-I",
            include,
        ])
        .arg(&src)
        .output()
        .expect("a C compiler on PATH");
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn tempfile_dir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("twdeg-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
