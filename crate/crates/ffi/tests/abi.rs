use ecdensity_ffi::*;
use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

fn take_string(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { ec_string_free(s) };
    out
}

fn rational_string(r: *const EcRational) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ec_rational_to_string(r, &mut s) }, EcStatus::Ok);
    take_string(s)
}

#[test]
fn exact_densities() {
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { ec_density_tors(5, &mut r) }, EcStatus::Ok);
    assert_eq!(rational_string(r), "25/62");
    let mut x = 0.0;
    assert_eq!(unsafe { ec_rational_to_double(r, &mut x) }, EcStatus::Ok);
    assert!((x - 25.0 / 62.0).abs() < 1e-15);
    unsafe { ec_rational_free(r) };

    assert_eq!(unsafe { ec_density_iso(5, &mut r) }, EcStatus::Ok);
    assert_eq!(rational_string(r), "401/781");
    unsafe { ec_rational_free(r) };
}

#[test]
fn errors_map_to_status_codes() {
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { ec_density_tors(2, &mut r) }, EcStatus::PrimeTwoUnsupported);
    assert!(r.is_null());
    assert!(take_string(ec_last_error()).contains('2'));
    assert_eq!(unsafe { ec_density_tors(9, &mut r) }, EcStatus::NotPrime);
    assert_eq!(unsafe { ec_density_tors(5, ptr::null_mut()) }, EcStatus::NullPointer);

    let mut ans = EcAnswer::No;
    assert_eq!(unsafe { ec_decide_short(5, 0, 16, 6, 99, 0, &mut ans) }, EcStatus::InvalidArgument);
    let mut e = ptr::null_mut();
    assert_eq!(
        unsafe { ec_estimate_exhaustive(5, 2, EC_PREDICATE_TORSION3, 0, 42, 10, 1, &mut e) },
        EcStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { ec_estimate_exhaustive(5, 3, EC_PREDICATE_TORSION3, 0, EC_STRATUM_ALL, 10, 1, &mut e) },
        EcStatus::BudgetExceeded
    );
    assert!(e.is_null());
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ec_rational_to_string(ptr::null(), &mut s) }, EcStatus::InvalidArgument);
    unsafe {
        ec_rational_free(ptr::null_mut());
        ec_estimate_free(ptr::null_mut());
        ec_string_free(ptr::null_mut());
    }
}

#[test]
fn decisions() {
    let mut ans = EcAnswer::No;
    let decide = |a, b, k, pred, ell, ans: &mut EcAnswer| unsafe { ec_decide_short(5, a, b, k, pred, ell, ans) };
    assert_eq!(decide(0, 16, 6, EC_PREDICATE_TORSION3, 0, &mut ans), EcStatus::Ok);
    assert_eq!(ans, EcAnswer::Yes);
    assert_eq!(decide(25, 50, 6, EC_PREDICATE_TORSION3, 0, &mut ans), EcStatus::Ok);
    assert_eq!(ans, EcAnswer::No);
    assert_eq!(decide(0, 0, 2, EC_PREDICATE_TORSION3, 0, &mut ans), EcStatus::Ok);
    assert_eq!(ans, EcAnswer::Undecided);
    assert_eq!(decide(0, 16, 6, EC_PREDICATE_ELL_TORSION, 5, &mut ans), EcStatus::InvalidArgument);
    assert_eq!(unsafe { ec_decide_medium_p3(0, 0, 9, 8, EC_PREDICATE_TORSION3, 0, &mut ans) }, EcStatus::Ok);
    assert_eq!(ans, EcAnswer::Yes);
}

#[test]
fn estimates_bracket_the_closed_form() {
    let mut e = ptr::null_mut();
    assert_eq!(
        unsafe { ec_estimate_exhaustive(5, 3, EC_PREDICATE_TORSION3, 0, EC_STRATUM_ALL, 10_000_000, 0, &mut e) },
        EcStatus::Ok
    );
    let (mut yes, mut no, mut und) = (0, 0, 0);
    assert_eq!(unsafe { ec_estimate_counts(e, &mut yes, &mut no, &mut und) }, EcStatus::Ok);
    assert_eq!(yes + no + und, 5u64.pow(6));
    let (mut lo, mut hi) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { ec_estimate_bracket(e, &mut lo, &mut hi) }, EcStatus::Ok);
    let (mut l, mut h) = (0.0, 0.0);
    unsafe {
        ec_rational_to_double(lo, &mut l);
        ec_rational_to_double(hi, &mut h);
        ec_rational_free(lo);
        ec_rational_free(hi);
    }
    assert!(l <= 25.0 / 62.0 && 25.0 / 62.0 <= h, "[{l}, {h}]");

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ec_estimate_to_json(e, &mut s) }, EcStatus::Ok);
    let json = take_string(s);
    assert!(json.contains("\"predicate\":\"torsion3\""), "{json}");
    unsafe { ec_estimate_free(e) };
}

#[test]
fn monte_carlo_is_seeded() {
    let run = |jobs| {
        let mut e = ptr::null_mut();
        assert_eq!(
            unsafe { ec_estimate_monte_carlo(7, 3, 3000, 17, EC_PREDICATE_ISOGENY3, 0, EC_STRATUM_ALL, jobs, &mut e) },
            EcStatus::Ok
        );
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { ec_estimate_to_json(e, &mut s) }, EcStatus::Ok);
        unsafe { ec_estimate_free(e) };
        take_string(s)
    };
    assert_eq!(run(1), run(2));
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(ec_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn c_compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc).arg("--version").output().ok().filter(|o| o.status.success()).map(|_| cc)
}

/// The static library sits next to the `deps` directory holding this test binary.
fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let dir = exe.parent()?.parent()?;
    Some(dir.join("libecdensity_ffi.a")).filter(|p| p.exists())
}

#[test]
fn header_is_valid_c() {
    let header = crate_dir().join("include/ecdensity.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["ec_density_tors", "ec_decide_short", "ec_estimate_free", "ec_string_free", "EC_STATUS_OK"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Some(cc) = c_compiler() else {
        eprintln!("no C compiler found; header syntax not checked");
        return;
    };
    let out = Command::new(cc).args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"]).arg(&header).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn c_program_links_and_runs() {
    let (Some(cc), Some(lib)) = (c_compiler(), static_lib()) else {
        eprintln!("C compiler or static library unavailable; link test not run");
        return;
    };
    let exe = std::env::temp_dir().join(format!("ecdensity-smoke-{}", std::process::id()));
    let include = crate_dir().join("include");
    let src = crate_dir().join("tests/c/smoke.c");
    let out = Command::new(cc)
        .arg(Path::new(&src))
        .arg(format!("-I{}", include.display()))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    let _ = std::fs::remove_file(&exe);
    assert!(run.status.success(), "exit {:?}", run.status.code());
    let expected = CString::new(format!("ok {}\n", env!("CARGO_PKG_VERSION"))).unwrap();
    assert_eq!(run.stdout, expected.as_bytes());
}
