use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use errgroup_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    eg_string_free(s);
    out
}

fn last_error() -> String {
    let p = eg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn pauli_round_trip() {
    unsafe {
        let mut b = ptr::null_mut();
        assert_eq!(eg_basis_pauli(3, &mut b), EgStatus::Ok);
        let mut dim = 0;
        assert_eq!(eg_basis_dim(b, &mut dim), EgStatus::Ok);
        assert_eq!(dim, 3);
        let mut json = ptr::null_mut();
        assert_eq!(eg_basis_to_json(b, &mut json), EgStatus::Ok);
        let text = CString::new(take(json)).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(eg_basis_from_json(text.as_ptr(), &mut back), EgStatus::Ok);
        let mut pass = false;
        let mut report = ptr::null_mut();
        assert_eq!(eg_basis_verify(back, &mut pass, &mut report), EgStatus::Ok);
        assert!(pass, "{}", take(report));
        eg_basis_free(b);
        eg_basis_free(back);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut b = ptr::null_mut();
        assert_eq!(eg_basis_pauli(6, &mut b), EgStatus::InvalidArgument);
        assert!(b.is_null());
        assert!(last_error().contains("invalid argument"));
        assert_eq!(eg_basis_pauli(2, ptr::null_mut()), EgStatus::NullPointer);
        let bad = CString::new("{").unwrap();
        assert_eq!(eg_basis_from_json(bad.as_ptr(), &mut b), EgStatus::InvalidArgument);
        let mut dim = 0;
        assert_eq!(eg_basis_dim(ptr::null(), &mut dim), EgStatus::NullPointer);
        let name = CString::new("nope").unwrap();
        let mut inst = ptr::null_mut();
        assert_eq!(eg_instance_new(name.as_ptr(), &mut inst), EgStatus::InvalidArgument);
        // a success clears the slot
        assert_eq!(eg_basis_pauli(2, &mut b), EgStatus::Ok);
        assert!(eg_last_error().is_null());
        eg_basis_free(b);
        eg_basis_free(ptr::null_mut());
        eg_string_free(ptr::null_mut());
    }
}

#[test]
fn instance_check_all() {
    unsafe {
        let name = CString::new("bitflip3").unwrap();
        let mut inst = ptr::null_mut();
        assert_eq!(eg_instance_new(name.as_ptr(), &mut inst), EgStatus::Ok);
        let mut k = 0;
        assert_eq!(eg_instance_code_dim(inst, &mut k), EgStatus::Ok);
        assert_eq!(k, 2);
        let mut out = ptr::null_mut();
        assert_eq!(eg_instance_check_all(inst, 7, &mut out), EgStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["pass"], true);
        eg_instance_free(inst);
    }
}

#[test]
fn cli_through_abi() {
    unsafe {
        let args: Vec<CString> = ["group", "isomorphic", "--with", "q8"]
            .iter()
            .map(|s| CString::new(*s).unwrap())
            .collect();
        let argv: Vec<*const c_char> = args.iter().map(|s| s.as_ptr()).collect();
        let input = CString::new("{\"ops\": null}").unwrap();
        let (mut code, mut so, mut se) = (0, ptr::null_mut(), ptr::null_mut());
        let st = eg_cli_run(argv.len(), argv.as_ptr(), input.as_ptr(), &mut code, &mut so, &mut se);
        assert_eq!(st, EgStatus::Ok);
        assert_eq!(code, 1);
        let v: serde_json::Value = serde_json::from_str(&take(so)).unwrap();
        assert!(v["error"]["kind"].is_string());
        take(se);

        let args: Vec<CString> = ["group", "isomorphic", "s3", "--with", "d6"]
            .iter()
            .map(|s| CString::new(*s).unwrap())
            .collect();
        let argv: Vec<*const c_char> = args.iter().map(|s| s.as_ptr()).collect();
        let st = eg_cli_run(argv.len(), argv.as_ptr(), ptr::null(), &mut code, &mut so, &mut se);
        assert_eq!(st, EgStatus::Ok);
        assert_eq!((code, take(so).trim()), (0, "true"));
        take(se);
    }
}

fn target_dir() -> PathBuf {
    // <target>/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("liberrgroup_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout.contains("dim 2"), "{stdout}");
    assert!(stdout.contains("verified 1"), "{stdout}");
}
