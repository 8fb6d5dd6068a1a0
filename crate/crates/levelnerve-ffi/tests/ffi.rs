use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use levelnerve_ffi::*;

fn last_error() -> String {
    let p = ln_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn nerve_counts_and_pi1() {
    unsafe {
        let mut x = ptr::null_mut();
        assert_eq!(ln_nerve_build(2, 0, 2, &mut x), LnStatus::Ok);
        assert!(ln_last_error().is_null());
        let mut c = 0usize;
        assert_eq!(ln_complex_count(x, 0, &mut c), LnStatus::Ok);
        assert_eq!(c, 25);
        let mut r = 0usize;
        assert_eq!(ln_complex_ranks(x, &mut r), LnStatus::Ok);
        assert_eq!(r, 3);
        let mut v = 7i32;
        assert_eq!(ln_complex_pi1(x, &mut v), LnStatus::Ok);
        assert_eq!(v, 1);
        let mut s = ptr::null_mut();
        assert_eq!(ln_complex_to_json(x, &mut s), LnStatus::Ok);
        let mut y = ptr::null_mut();
        assert_eq!(ln_complex_from_json(s, &mut y), LnStatus::Ok);
        let mut s2 = ptr::null_mut();
        assert_eq!(ln_complex_to_json(y, &mut s2), LnStatus::Ok);
        assert_eq!(CStr::from_ptr(s), CStr::from_ptr(s2));
        ln_string_free(s);
        ln_string_free(s2);
        ln_complex_free(x);
        ln_complex_free(y);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut x = ptr::null_mut();
        assert_eq!(ln_nerve_build(2, 0, 1, &mut x), LnStatus::Argument);
        assert!(last_error().contains("modulus"));
        assert!(x.is_null());
        assert_eq!(ln_nerve_build(2, 0, 2, ptr::null_mut()), LnStatus::NullPointer);
        let bad = CString::new("{\"trunc").unwrap();
        assert_eq!(ln_complex_from_json(bad.as_ptr(), &mut x), LnStatus::Schema);
        assert_eq!(ln_complex_from_json(ptr::null(), &mut x), LnStatus::NullPointer);
        let mut c = 0usize;
        assert_eq!(ln_complex_count(ptr::null(), 0, &mut c), LnStatus::NullPointer);
        let mut s = ptr::null_mut();
        assert_eq!(ln_abelian_kernel_json(2, 0, 0, 99, 2, &mut s), LnStatus::Argument);
        assert_eq!(ln_nerve_build(5, 0, 2, &mut x), LnStatus::Unsupported);
    }
}

#[test]
fn covers_and_image() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(ln_cover_identity(2, 0, &mut c), LnStatus::Ok);
        let mut x = ptr::null_mut();
        assert_eq!(ln_image_build(c, 2, &mut x), LnStatus::Ok);
        let mut k = 0usize;
        ln_complex_count(x, 0, &mut k);
        assert_eq!(k, 25);
        let mut s = ptr::null_mut();
        assert_eq!(ln_cover_to_json(c, &mut s), LnStatus::Ok);
        let mut c2 = ptr::null_mut();
        assert_eq!(ln_cover_from_json(s, &mut c2), LnStatus::Ok);
        ln_string_free(s);
        let mut h = ptr::null_mut();
        assert_eq!(ln_cover_homology(1, 1, 3, &mut h), LnStatus::Ok);
        ln_cover_free(c);
        ln_cover_free(c2);
        ln_cover_free(h);
        ln_complex_free(x);
    }
}

#[test]
fn kernel_json() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ln_abelian_kernel_json(2, 0, 0, 0, 2, &mut s), LnStatus::Ok);
        let j = CStr::from_ptr(s).to_str().unwrap().to_string();
        ln_string_free(s);
        assert!(j.contains("\"kernel_lattice\""));
        assert!(!CStr::from_ptr(ln_version()).to_bytes().is_empty());
    }
}

#[test]
fn header_declares_every_export() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let h = std::fs::read_to_string(dir.join("include/levelnerve.h")).unwrap();
    let src = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    for line in src.lines().filter(|l| l.contains("extern \"C\" fn ")) {
        let name = line.split("fn ").nth(1).unwrap().split('(').next().unwrap();
        assert!(h.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(h.contains("typedef struct LnComplex LnComplex;"));
    assert!(h.contains("LN_STATUS_RESOURCE = 4"));
}

#[test]
fn header_compiles_as_c() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", "-"])
        .arg("-I")
        .arg(dir.join("include"))
        .stdin(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .and_then(|mut c| {
            use std::io::Write;
            c.stdin
                .take()
                .unwrap()
                .write_all(b"#include \"levelnerve.h\"\nint main(void){LnComplex*x=0;return ln_nerve_build(2,0,2,&x)==LN_STATUS_OK?0:1;}\n")?;
            c.wait_with_output()
        })
    else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
