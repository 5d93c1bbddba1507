use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use robustpac_ffi::*;

fn parse(text: &str) -> *mut RpConcept {
    let s = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { rp_concept_parse(s.as_ptr(), &mut out) },
        RpStatus::Ok
    );
    out
}

fn uniform(n: usize) -> *mut RpDistribution {
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { rp_distribution_uniform(n, &mut d) }, RpStatus::Ok);
    d
}

fn last_error() -> String {
    let p = rp_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn risks_through_handles() {
    let h = parse("const 3 0\n");
    let c = parse("dl 3 1\n1 -> 1\ntrue -> 0\n");
    let d = uniform(3);
    let mut r = 0.0;
    unsafe {
        assert_eq!(rp_standard_risk(h, c, d, &mut r), RpStatus::Ok);
        assert_eq!(r, 0.5);
        // every point is one flip away from the disagreement set {x₁ = 1}
        assert_eq!(rp_robust_risk_exact(h, c, 1, d, &mut r), RpStatus::Ok);
        assert_eq!(r, 1.0);
        assert_eq!(rp_robust_risk_exact(h, c, 0, d, &mut r), RpStatus::Ok);
        assert_eq!(r, 0.5);
        let mut radius = 0.0;
        assert_eq!(
            rp_robust_risk_mc(h, c, 1, d, 2000, 1e-3, 4, &mut r, &mut radius),
            RpStatus::Ok
        );
        assert_eq!(r, 1.0);
        assert!(radius > 0.0);
        let mut dim = 0;
        assert_eq!(rp_concept_dim(c, &mut dim), RpStatus::Ok);
        assert_eq!(dim, 3);
        let mut v = false;
        assert_eq!(rp_concept_evaluate(c, 0b001, &mut v), RpStatus::Ok);
        assert!(v);
        assert_eq!(
            rp_concept_evaluate(c, 0b1000, &mut v),
            RpStatus::InvalidArgument
        );
        rp_concept_free(h);
        rp_concept_free(c);
        rp_distribution_free(d);
    }
}

#[test]
fn expansion_of_six_literal_conjunction() {
    let phi = parse("conj 8\n1 2 3 4 5 6\n");
    let d = uniform(8);
    let (mut s0, mut s) = (0.0, 0.0);
    unsafe {
        assert_eq!(rp_expansion_exact(phi, 2, d, &mut s0, &mut s), RpStatus::Ok);
        assert_eq!((s0, s), (1.0 / 64.0, 22.0 / 64.0));
        assert_eq!(
            rp_expansion_exact(phi, 9, d, &mut s0, &mut s),
            RpStatus::InvalidArgument
        );
        rp_concept_free(phi);
        rp_distribution_free(d);
    }
}

#[test]
fn error_codes_and_messages() {
    let bad = CString::new("p cnf 3 1\n1 5 0\n").unwrap();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(rp_concept_parse(bad.as_ptr(), &mut out), RpStatus::Parse);
        assert!(out.is_null());
        assert!(last_error().contains("line 2"), "{}", last_error());
        assert_eq!(
            rp_concept_parse(ptr::null(), &mut out),
            RpStatus::NullPointer
        );
        let mut d = ptr::null_mut();
        assert_eq!(rp_distribution_uniform(30, &mut d), RpStatus::Ok);
        let c = parse("const 30 1\n");
        let mut r = 0.0;
        assert_eq!(rp_standard_risk(c, c, d, &mut r), RpStatus::CapExceeded);
        let means = [0.5, 1.0];
        let mut p = ptr::null_mut();
        assert_eq!(
            rp_distribution_product(means.as_ptr(), 2, &mut p),
            RpStatus::InvalidArgument
        );
        let c3 = parse("const 3 1\n");
        let d3 = uniform(3);
        assert_eq!(
            rp_standard_risk(c, c3, d3, &mut r),
            RpStatus::DimensionMismatch
        );
        rp_concept_free(c);
        rp_concept_free(c3);
        rp_distribution_free(d);
        rp_distribution_free(d3);
        rp_concept_free(ptr::null_mut());
    }
}

#[test]
fn constants_and_allzero() {
    let mut k = RpConstants::default();
    unsafe {
        assert_eq!(
            rp_theorem1_constants(1, 1.0, RpConstantsVariant::ExactRecurrence as u32, &mut k),
            RpStatus::Ok
        );
        assert_eq!(
            (k.log2_c1, k.c2, k.c3, k.c4, k.eta),
            (0.0, 0.0, 16.0, 4.0, 0.5)
        );
        assert_eq!(
            rp_theorem1_constants(
                2,
                1.0,
                RpConstantsVariant::DominatingClosedForm as u32,
                &mut k
            ),
            RpStatus::Ok
        );
        assert_eq!(
            (k.log2_c1, k.c2, k.c3, k.c4),
            (-1024.0, 256.0, 16384.0, 1024.0)
        );
        assert_eq!(
            rp_theorem1_constants(1, 1.0, 7, &mut k),
            RpStatus::InvalidArgument
        );
        assert_eq!(
            rp_theorem1_constants(0, 1.0, 0, &mut k),
            RpStatus::InvalidArgument
        );
    }
    assert_eq!(rp_allzero_probability(1, 1), 0.5625);
    let mut alpha = 0.0;
    let means = [0.6, 0.5];
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(
            rp_distribution_product(means.as_ptr(), 2, &mut p),
            RpStatus::Ok
        );
        assert_eq!(rp_distribution_log_lipschitz(p, &mut alpha), RpStatus::Ok);
        rp_distribution_free(p);
    }
    assert!((alpha - 1.5).abs() < 1e-9);
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("librobustpac_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!(
            "skipping: no C compiler or static library at {}",
            lib.display()
        );
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let bin = tmp.path().join("smoke");
    let status = Command::new("cc")
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke program failed to build");
    let out = Command::new(&bin).output().unwrap();
    assert!(
        out.status.success(),
        "smoke exited with {:?}",
        out.status.code()
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
