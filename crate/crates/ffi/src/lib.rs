//! C ABI over the robustpac oracles.
//!
//! Concepts and distributions are opaque heap handles created by the
//! `*_parse` / `*_uniform` / `*_product` constructors and released by the
//! matching `*_free`. Every fallible call returns an [`RpStatus`] and writes
//! its result through an out-pointer; on failure a message is available from
//! [`rp_last_error_message`] on the same thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use robustpac::concepts::{parse_concept, AnyConcept, Concept};
use robustpac::distributions::Distribution;
use robustpac::expansion::{exact_expansion, theorem1_constants, ConstantsVariant};
use robustpac::lowerbound::allzero_probability;
use robustpac::risk::{robust_risk_exact, robust_risk_mc, standard_risk, McConfig};
use robustpac::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    DimensionMismatch = 4,
    CapExceeded = 5,
    Realizability = 6,
    ZeroMass = 7,
    Io = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RpConstantsVariant {
    ExactRecurrence = 0,
    DominatingClosedForm = 1,
}

/// Expansion-bound constants; `C₁` is carried as `log₂ C₁`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RpConstants {
    pub k: usize,
    pub alpha: f64,
    pub eta: f64,
    pub log2_c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

/// Opaque concept handle.
pub struct RpConcept(AnyConcept);

/// Opaque distribution handle.
pub struct RpDistribution(Distribution);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RpStatus {
    match e {
        Error::DimensionMismatch { .. } => RpStatus::DimensionMismatch,
        Error::CapExceeded { .. } => RpStatus::CapExceeded,
        Error::InvalidParameter(_) => RpStatus::InvalidArgument,
        Error::Parse { .. } => RpStatus::Parse,
        Error::Realizability(_) => RpStatus::Realizability,
        Error::ZeroMass(_) => RpStatus::ZeroMass,
        Error::Io(_) => RpStatus::Io,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RpStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            RpStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            RpStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a concept in the text format (`p cnf`, `dl`, `conj`, `monconj`,
/// `const`).
#[no_mangle]
pub unsafe extern "C" fn rp_concept_parse(
    text: *const c_char,
    out_concept: *mut *mut RpConcept,
) -> RpStatus {
    guard(|| {
        if text.is_null() {
            return Err(Failure::Null("text"));
        }
        let slot = out(out_concept, "out_concept")?;
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| Error::InvalidParameter("text is not valid UTF-8".into()))?;
        let c = parse_concept(s)?;
        *slot = Box::into_raw(Box::new(RpConcept(c)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn rp_concept_free(concept: *mut RpConcept) {
    if !concept.is_null() {
        drop(Box::from_raw(concept));
    }
}

#[no_mangle]
pub unsafe extern "C" fn rp_concept_dim(
    concept: *const RpConcept,
    out_dim: *mut usize,
) -> RpStatus {
    guard(|| {
        *out(out_dim, "out_dim")? = deref(concept, "concept")?.0.dim();
        Ok(())
    })
}

/// Evaluates on `bits`, where bit `i` is variable `i`.
#[no_mangle]
pub unsafe extern "C" fn rp_concept_evaluate(
    concept: *const RpConcept,
    bits: u64,
    out_value: *mut bool,
) -> RpStatus {
    guard(|| {
        let c = &deref(concept, "concept")?.0;
        let n = c.dim();
        if n < 64 && bits >> n != 0 {
            return Err(Error::InvalidParameter(format!("bits outside dimension {n}")).into());
        }
        *out(out_value, "out_value")? = c.eval_raw(bits);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn rp_distribution_uniform(
    n: usize,
    out_dist: *mut *mut RpDistribution,
) -> RpStatus {
    guard(|| {
        let slot = out(out_dist, "out_dist")?;
        *slot = Box::into_raw(Box::new(RpDistribution(Distribution::uniform(n)?)));
        Ok(())
    })
}

/// Product distribution with `Pr[x_i = 1] = means[i]`.
#[no_mangle]
pub unsafe extern "C" fn rp_distribution_product(
    means: *const f64,
    n: usize,
    out_dist: *mut *mut RpDistribution,
) -> RpStatus {
    guard(|| {
        if means.is_null() {
            return Err(Failure::Null("means"));
        }
        let slot = out(out_dist, "out_dist")?;
        let v = std::slice::from_raw_parts(means, n).to_vec();
        *slot = Box::into_raw(Box::new(RpDistribution(Distribution::product(v)?)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn rp_distribution_free(dist: *mut RpDistribution) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

#[no_mangle]
pub unsafe extern "C" fn rp_distribution_log_lipschitz(
    dist: *const RpDistribution,
    out_alpha: *mut f64,
) -> RpStatus {
    guard(|| {
        *out(out_alpha, "out_alpha")? = deref(dist, "dist")?.0.log_lipschitz_constant()?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn rp_standard_risk(
    h: *const RpConcept,
    c: *const RpConcept,
    dist: *const RpDistribution,
    out_risk: *mut f64,
) -> RpStatus {
    guard(|| {
        let r = standard_risk(
            &deref(h, "h")?.0,
            &deref(c, "c")?.0,
            &deref(dist, "dist")?.0,
        )?;
        *out(out_risk, "out_risk")? = r.value;
        Ok(())
    })
}

/// Exact `Pr_{x∼D}[∃ z ∈ B_ρ(x) : h(z) ≠ c(z)]`.
#[no_mangle]
pub unsafe extern "C" fn rp_robust_risk_exact(
    h: *const RpConcept,
    c: *const RpConcept,
    radius: usize,
    dist: *const RpDistribution,
    out_risk: *mut f64,
) -> RpStatus {
    guard(|| {
        let r = robust_risk_exact(
            &deref(h, "h")?.0,
            &deref(c, "c")?.0,
            radius,
            &deref(dist, "dist")?.0,
        )?;
        *out(out_risk, "out_risk")? = r.value;
        Ok(())
    })
}

/// Monte-Carlo estimate of the exact-in-the-ball risk and its Hoeffding
/// radius at confidence `1 − delta`.
#[no_mangle]
pub unsafe extern "C" fn rp_robust_risk_mc(
    h: *const RpConcept,
    c: *const RpConcept,
    radius: usize,
    dist: *const RpDistribution,
    trials: u64,
    delta: f64,
    seed: u64,
    out_risk: *mut f64,
    out_confidence_radius: *mut f64,
) -> RpStatus {
    guard(|| {
        let cfg = McConfig::new(trials, delta, seed);
        let r = robust_risk_mc(
            &deref(h, "h")?.0,
            &deref(c, "c")?.0,
            radius,
            &deref(dist, "dist")?.0,
            &cfg,
        )?;
        *out(out_risk, "out_risk")? = r.value;
        *out(out_confidence_radius, "out_confidence_radius")? = r.confidence_radius;
        Ok(())
    })
}

/// Exact `S_0` and `S_ρ` of the concept's satisfying set.
#[no_mangle]
pub unsafe extern "C" fn rp_expansion_exact(
    phi: *const RpConcept,
    radius: usize,
    dist: *const RpDistribution,
    out_s0: *mut f64,
    out_s_rho: *mut f64,
) -> RpStatus {
    guard(|| {
        let phi = &deref(phi, "phi")?.0;
        if radius > phi.dim() {
            return Err(Error::InvalidParameter(format!(
                "radius {radius} exceeds dimension {}",
                phi.dim()
            ))
            .into());
        }
        let (s0, s) = exact_expansion(phi, radius, &deref(dist, "dist")?.0)?;
        *out(out_s0, "out_s0")? = s0;
        *out(out_s_rho, "out_s_rho")? = s;
        Ok(())
    })
}

/// `variant` is an [`RpConstantsVariant`] value.
#[no_mangle]
pub unsafe extern "C" fn rp_theorem1_constants(
    k: usize,
    alpha: f64,
    variant: u32,
    out_constants: *mut RpConstants,
) -> RpStatus {
    guard(|| {
        let v = match variant {
            x if x == RpConstantsVariant::ExactRecurrence as u32 => {
                ConstantsVariant::ExactRecurrence
            }
            x if x == RpConstantsVariant::DominatingClosedForm as u32 => {
                ConstantsVariant::DominatingClosedForm
            }
            other => {
                return Err(
                    Error::InvalidParameter(format!("unknown constants variant {other}")).into(),
                )
            }
        };
        let b = theorem1_constants(k, alpha, v)?;
        *out(out_constants, "out_constants")? = RpConstants {
            k: b.k,
            alpha: b.alpha,
            eta: b.eta,
            log2_c1: b.log2_c1,
            c2: b.c2,
            c3: b.c3,
            c4: b.c4,
        };
        Ok(())
    })
}

/// `(1 − 2^{−2ρ})^{2m}`.
#[no_mangle]
pub extern "C" fn rp_allzero_probability(rho: usize, m: u64) -> f64 {
    allzero_probability(rho, m)
}
