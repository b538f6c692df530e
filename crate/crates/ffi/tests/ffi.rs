use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use flatcount_ffi::*;

fn last_error() -> String {
    let p = fc_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn torus_roundtrip() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(fc_surface_unit_torus(&mut s), FcStatus::Ok);
        let mut h = ptr::null_mut();
        assert_eq!(fc_enumerate(s, 2.0, &mut h), FcStatus::Ok);
        assert_eq!(fc_holonomy_set_len(h), 8);
        let mut n = 0usize;
        assert_eq!(fc_count_sector(h, 2.0, 0.0, std::f64::consts::TAU, &mut n), FcStatus::Ok);
        assert_eq!(n, 8);
        let mut c = FcSaddleConnection::default();
        assert_eq!(fc_holonomy_set_get(h, 0, &mut c), FcStatus::Ok);
        assert_eq!((c.x * c.x + c.y * c.y).sqrt(), 1.0);
        let mut sys = 0.0;
        assert_eq!(fc_surface_systole(s, &mut sys), FcStatus::Ok);
        assert_eq!(sys, 1.0);
        fc_holonomy_set_free(h);
        fc_surface_free(s);
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let bad = CString::new(
            r#"{"type":"polygons","polygons":[[[0,0],[1,0],[1,1],[0,1]]],"gluings":[[[0,0],[0,1]],[[0,2],[0,3]]]}"#,
        )
        .unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(fc_surface_from_json(bad.as_ptr(), &mut s), FcStatus::NonMatchingEdge);
        assert!(s.is_null());
        assert!(last_error().contains("cannot be glued"));

        assert_eq!(fc_surface_from_json(ptr::null(), &mut s), FcStatus::NullPointer);
        let junk = CString::new("{").unwrap();
        assert_eq!(fc_surface_from_json(junk.as_ptr(), &mut s), FcStatus::MalformedSpec);

        let mut t = ptr::null_mut();
        assert_eq!(fc_surface_unit_torus(&mut t), FcStatus::Ok);
        let mut g = ptr::null_mut();
        assert_eq!(fc_surface_apply(t, 1.0, 2.0, 3.0, 4.0, &mut g), FcStatus::NotUnimodular);
        assert_eq!(fc_surface_genus(t, ptr::null_mut()), FcStatus::NullPointer);
        fc_surface_free(t);
        fc_surface_free(ptr::null_mut());
        fc_holonomy_set_free(ptr::null_mut());
    }
}

#[test]
fn ledger_values() {
    let mut l = FcExponentLedger::default();
    unsafe {
        assert_eq!(fc_exponent_ledger(1.0, 1.01, 1.99, false, &mut l), FcStatus::Ok);
        assert_eq!(l.sigma, 11.0);
        assert!((l.kappa - 1.0 / 11.0).abs() < 1e-15);
        assert_eq!(fc_exponent_ledger(1.0, 1.01, 1.99, true, &mut l), FcStatus::Ok);
        assert_eq!(l.sigma, 17.0);
        assert_eq!(fc_exponent_ledger(2.0, 1.01, 1.99, false, &mut l), FcStatus::InvalidArgument);
    }
}

#[test]
fn header_declares_entry_points() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/flatcount.h")).unwrap();
    for f in [
        "fc_surface_from_json",
        "fc_surface_free",
        "fc_enumerate",
        "fc_holonomy_set_get",
        "fc_count_sector",
        "fc_exponent_ledger",
        "fc_last_error_message",
    ] {
        assert!(header.contains(f), "{f} missing from header");
    }
}

fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let dir = exe.parent()?.parent()?;
    let lib = dir.join("libflatcount_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_links_against_static_lib() {
    let Some(lib) = static_lib() else {
        eprintln!("static library not found next to the test binary; skipping");
        return;
    };
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let dir = std::env::temp_dir().join(format!("flatcount-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let exe = dir.join("smoke");
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
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
    let _ = std::fs::remove_dir_all(&dir);
}
