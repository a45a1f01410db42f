//! C ABI over `bdrplus`.
//!
//! Rings and values are opaque heap handles owned by the caller and released
//! with the matching `_free` function. Every fallible call returns a
//! [`BdrStatus`] and writes its result through an out-pointer; on failure the
//! out-pointer is left untouched and [`bdrplus_last_error`] describes the
//! problem. Values cross the boundary as schema-v1 JSON documents.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use bdrplus::bdr::{BdrRing, PrecisionProfile};
use bdrplus::cli::json::{self, Payload};
use bdrplus::normal_forms;
use bdrplus::random::random_cocycle;
use bdrplus::rh::{self, Cocycle};
use bdrplus::toric::GammaVector;
use bdrplus::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BdrStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    WrongKind = 3,
    Parse = 4,
    InvalidProfile = 5,
    RingMismatch = 6,
    NonUnit = 7,
    PrecisionExhausted = 8,
    SingularAtPrecision = 9,
    DomainViolation = 10,
    NotDivisible = 11,
    LevelExceedsK = 12,
    NotACocycle = 13,
    NotIntegrable = 14,
    TwistMismatch = 15,
    ResidueFieldTooSmall = 16,
    AmbiguousAtPrecision = 17,
    SpectraNotDisjoint = 18,
    NotCommuting = 19,
    ResidueRootMissing = 20,
    ExtensionCommutationFailure = 21,
    Shape = 22,
    /// A check ran and returned a negative verdict.
    CheckFailed = 23,
    Internal = 99,
}

/// What a [`BdrValue`] holds.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BdrKind {
    Element = 0,
    Toric = 1,
    Matrix = 2,
    ToricMatrix = 3,
    Cocycle = 4,
    Connection = 5,
}

/// A period ring at a fixed precision profile.
pub struct BdrRingHandle(Arc<BdrRing>);

/// Any value of the library together with its ring.
pub struct BdrValue {
    ring: Arc<BdrRing>,
    payload: Payload,
}

impl From<&Error> for BdrStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidProfile(_) => BdrStatus::InvalidProfile,
            Error::RingMismatch => BdrStatus::RingMismatch,
            Error::NonUnit => BdrStatus::NonUnit,
            Error::PrecisionExhausted(_) => BdrStatus::PrecisionExhausted,
            Error::SingularAtPrecision => BdrStatus::SingularAtPrecision,
            Error::DomainViolation(_) => BdrStatus::DomainViolation,
            Error::NotDivisible(_) => BdrStatus::NotDivisible,
            Error::LevelExceedsK { .. } => BdrStatus::LevelExceedsK,
            Error::NotACocycle(_) => BdrStatus::NotACocycle,
            Error::NotIntegrable => BdrStatus::NotIntegrable,
            Error::TwistMismatch => BdrStatus::TwistMismatch,
            Error::ResidueFieldTooSmall { .. } => BdrStatus::ResidueFieldTooSmall,
            Error::AmbiguousAtPrecision => BdrStatus::AmbiguousAtPrecision,
            Error::SpectraNotDisjoint => BdrStatus::SpectraNotDisjoint,
            Error::NotCommuting => BdrStatus::NotCommuting,
            Error::ResidueRootMissing { .. } => BdrStatus::ResidueRootMissing,
            Error::ExtensionCommutationFailure => BdrStatus::ExtensionCommutationFailure,
            Error::Shape(_) => BdrStatus::Shape,
            Error::Parse(_) => BdrStatus::Parse,
        }
    }
}

struct Failure(BdrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure((&e).into(), e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|l| *l.borrow_mut() = c);
}

/// Run `f`, record its error message and turn panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BdrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            BdrStatus::Ok
        }
        Ok(Err(Failure(code, msg))) => {
            set_last_error(&msg);
            code
        }
        Err(_) => {
            set_last_error("internal error");
            BdrStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(BdrStatus::NullArgument, format!("`{what}` is null"))
}

fn wrong_kind(what: &str) -> Failure {
    Failure(BdrStatus::WrongKind, format!("`{what}` has the wrong kind"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(BdrStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_value(out: *mut *mut BdrValue, ring: &Arc<BdrRing>, payload: Payload) -> Result<(), Failure> {
    put(out, BdrValue { ring: ring.clone(), payload })
}

fn same_ring(a: &BdrValue, b: &BdrValue) -> Result<(), Failure> {
    if a.ring.profile() == b.ring.profile() {
        Ok(())
    } else {
        Err(Error::RingMismatch.into())
    }
}

fn payload_eq(a: &Payload, b: &Payload) -> bool {
    match (a, b) {
        (Payload::Bdr(x), Payload::Bdr(y)) => x == y,
        (Payload::Toric(x), Payload::Toric(y)) => x == y,
        (Payload::BdrMatrix(x), Payload::BdrMatrix(y)) => x == y,
        (Payload::ToricMatrix(x), Payload::ToricMatrix(y)) => x == y,
        (Payload::Cocycle(x), Payload::Cocycle(y)) => x == y,
        (Payload::Connection(x), Payload::Connection(y)) => x == y,
        _ => false,
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn bdrplus_last_error() -> *const c_char {
    LAST_ERROR.with(|l| l.borrow().as_ptr())
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be null or a string obtained from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn bdrplus_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Build the ring for profile `(p, k, N, alpha, s)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bdrplus_ring_new(p: u64, k: u32, n: u32, alpha: u32, s: u32, out: *mut *mut BdrRingHandle) -> BdrStatus {
    guard(|| {
        let ring = BdrRing::new(PrecisionProfile::new(p, k, n, alpha, s as usize)?)?;
        put(out, BdrRingHandle(ring))
    })
}

/// # Safety
/// `ring` must be null or a handle from [`bdrplus_ring_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn bdrplus_ring_free(ring: *mut BdrRingHandle) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// A named constant: `t`, `xi`, `q`, `z`, `zeta_<p^n>` or `q^(1/<p^n>)`.
///
/// # Safety
/// `ring` must be a live handle, `name` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bdrplus_ring_constant(ring: *const BdrRingHandle, name: *const c_char, out: *mut *mut BdrValue) -> BdrStatus {
    guard(|| {
        let b = &deref(ring, "ring")?.0;
        let name = text(name, "name")?;
        let x = match name {
            "t" => b.t(),
            "xi" => b.xi(),
            "q" => b.q(),
            "z" => b.z(),
            _ => {
                let n = (1..=b.profile().k).find(|&n| {
                    let pn = b.p().pow(n);
                    name == format!("zeta_{pn}") || name == format!("q^(1/{pn})")
                });
                match n {
                    Some(n) if name.starts_with("zeta") => b.zeta(n)?,
                    Some(n) => b.q_root(n)?,
                    None => return Err(Error::DomainViolation(format!("unknown constant `{name}`")).into()),
                }
            }
        };
        put_value(out, b, Payload::Bdr(x))
    })
}

/// Parse a schema-v1 JSON document.
///
/// # Safety
/// `doc` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bdrplus_value_from_json(doc: *const c_char, out: *mut *mut BdrValue) -> BdrStatus {
    guard(|| {
        let (ring, payload) = json::from_str(text(doc, "doc")?)?;
        put_value(out, &ring, payload)
    })
}

/// Serialize a value; release the string with [`bdrplus_string_free`].
///
/// # Safety
/// `value` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bdrplus_value_to_json(value: *const BdrValue, out: *mut *mut c_char) -> BdrStatus {
    guard(|| {
        let v = deref(value, "value")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = json::to_string(v.ring.profile(), &v.payload);
        *out = CString::new(s).map_err(|_| Failure(BdrStatus::Internal, "NUL in JSON".into()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `value` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn bdrplus_value_free(value: *mut BdrValue) {
    if !value.is_null() {
        drop(Box::from_raw(value));
    }
}

/// # Safety
/// `value` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bdrplus_value_kind(value: *const BdrValue, out: *mut BdrKind) -> BdrStatus {
    guard(|| {
        let v = deref(value, "value")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = match v.payload {
            Payload::Bdr(_) => BdrKind::Element,
            Payload::Toric(_) => BdrKind::Toric,
            Payload::BdrMatrix(_) => BdrKind::Matrix,
            Payload::ToricMatrix(_) => BdrKind::ToricMatrix,
            Payload::Cocycle(_) => BdrKind::Cocycle,
            Payload::Connection(_) => BdrKind::Connection,
        };
        Ok(())
    })
}

/// Equality at the common precision; values of different kinds are unequal.
///
/// # Safety
/// `a` and `b` must be live handles and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bdrplus_value_equal(a: *const BdrValue, b: *const BdrValue, out: *mut bool) -> BdrStatus {
    guard(|| {
        let (a, b) = (deref(a, "a")?, deref(b, "b")?);
        same_ring(a, b)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = payload_eq(&a.payload, &b.payload);
        Ok(())
    })
}

unsafe fn binary(a: *const BdrValue, b: *const BdrValue, out: *mut *mut BdrValue, mul: bool) -> BdrStatus {
    guard(|| {
        let (a, b) = (deref(a, "a")?, deref(b, "b")?);
        same_ring(a, b)?;
        let p = match (&a.payload, &b.payload) {
            (Payload::Bdr(x), Payload::Bdr(y)) => Payload::Bdr(if mul { x.mul(y) } else { x.add(y) }),
            (Payload::Toric(x), Payload::Toric(y)) => {
                if x.dim() != y.dim() {
                    return Err(Error::Shape("toric dimensions differ".into()).into());
                }
                Payload::Toric(if mul { x.mul(y) } else { x.add(y) })
            }
            _ => return Err(wrong_kind("a or b")),
        };
        put_value(out, &a.ring, p)
    })
}

/// Sum of two elements or two toric elements.
///
/// # Safety
/// `a` and `b` must be live handles and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bdrplus_value_add(a: *const BdrValue, b: *const BdrValue, out: *mut *mut BdrValue) -> BdrStatus {
    binary(a, b, out, false)
}

/// Product of two elements or two toric elements.
///
/// # Safety
/// `a` and `b` must be live handles and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bdrplus_value_mul(a: *const BdrValue, b: *const BdrValue, out: *mut *mut BdrValue) -> BdrStatus {
    binary(a, b, out, true)
}

/// Seeded cocycle of dimension `d` and rank `r` on `p^m Gamma`.
///
/// # Safety
/// `ring` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bdrplus_random_cocycle(
    ring: *const BdrRingHandle,
    seed: u64,
    d: u32,
    r: u32,
    m: u32,
    out: *mut *mut BdrValue,
) -> BdrStatus {
    guard(|| {
        let b = &deref(ring, "ring")?.0;
        let phi = random_cocycle(seed, b, d as usize, r as usize, m)?;
        put_value(out, b, Payload::Cocycle(phi))
    })
}

fn cocycle<'a>(v: &'a BdrValue, what: &str) -> Result<&'a Cocycle, Failure> {
    match &v.payload {
        Payload::Cocycle(c) => Ok(c),
        _ => Err(wrong_kind(what)),
    }
}

fn bdr_matrix<'a>(v: &'a BdrValue, what: &str) -> Result<&'a normal_forms::RMatrix, Failure> {
    match &v.payload {
        Payload::BdrMatrix(m) => Ok(m),
        _ => Err(wrong_kind(what)),
    }
}

/// Verify the cocycle relations; a negative verdict returns `CheckFailed`.
///
/// # Safety
/// `phi` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bdrplus_cocycle_check(phi: *const BdrValue) -> BdrStatus {
    guard(|| {
        let (ok, _) = rh::cocycle_check(cocycle(deref(phi, "phi")?, "phi")?)?;
        if ok {
            Ok(())
        } else {
            Err(Failure(BdrStatus::CheckFailed, "cocycle relations fail".into()))
        }
    })
}

/// The t-connection of a cocycle.
///
/// # Safety
/// `phi` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bdrplus_log(phi: *const BdrValue, out: *mut *mut BdrValue) -> BdrStatus {
    guard(|| {
        let v = deref(phi, "phi")?;
        let nabla = rh::log_correspondence(cocycle(v, "phi")?)?;
        put_value(out, &v.ring, Payload::Connection(nabla))
    })
}

/// The cocycle on `p^m Gamma` of an integrable t-connection.
///
/// # Safety
/// `nabla` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bdrplus_exp(nabla: *const BdrValue, m: u32, out: *mut *mut BdrValue) -> BdrStatus {
    guard(|| {
        let v = deref(nabla, "nabla")?;
        let Payload::Connection(c) = &v.payload else {
            return Err(wrong_kind("nabla"));
        };
        let phi = rh::exp_correspondence(c, m)?;
        put_value(out, &v.ring, Payload::Cocycle(phi))
    })
}

fn beta() -> GammaVector {
    GammaVector::basis(1, 0, 1)
}

/// The solution `Y` of `Phi_i Y - Y Phi_j = X`.
///
/// # Safety
/// All handles must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bdrplus_sylvester(
    phi_i: *const BdrValue,
    phi_j: *const BdrValue,
    x: *const BdrValue,
    out: *mut *mut BdrValue,
) -> BdrStatus {
    guard(|| {
        let (a, b, c) = (deref(phi_i, "phi_i")?, deref(phi_j, "phi_j")?, deref(x, "x")?);
        same_ring(a, b)?;
        same_ring(a, c)?;
        let y = normal_forms::twisted_sylvester(bdr_matrix(a, "phi_i")?, bdr_matrix(b, "phi_j")?, &beta(), bdr_matrix(c, "x")?)?;
        put_value(out, &a.ring, Payload::BdrMatrix(y))
    })
}

/// Split `h`, block diagonal mod t with block sizes `types`, into the
/// conjugator `M` and the block-diagonal result.
///
/// # Safety
/// `h` must be a live handle, `types` must point to `n_types` sizes, and
/// both out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bdrplus_block_diagonalize(
    h: *const BdrValue,
    types: *const usize,
    n_types: usize,
    out_m: *mut *mut BdrValue,
    out_h: *mut *mut BdrValue,
) -> BdrStatus {
    guard(|| {
        let v = deref(h, "h")?;
        if types.is_null() || out_m.is_null() || out_h.is_null() {
            return Err(null("types or out"));
        }
        let types = std::slice::from_raw_parts(types, n_types);
        let (m, blocks) = normal_forms::block_diagonalize(bdr_matrix(v, "h")?, types, &beta())?;
        put_value(out_m, &v.ring, Payload::BdrMatrix(m))?;
        put_value(out_h, &v.ring, Payload::BdrMatrix(blocks))
    })
}

/// The `m`-th root of `phi` lifting the canonical residual seed.
///
/// # Safety
/// `phi` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bdrplus_mth_root(phi: *const BdrValue, m: u32, out: *mut *mut BdrValue) -> BdrStatus {
    guard(|| {
        let v = deref(phi, "phi")?;
        let phi = bdr_matrix(v, "phi")?;
        let seed = normal_forms::mth_root_seed(phi, m as i64)?;
        let root = normal_forms::twisted_mth_root(phi, &beta(), m as i64, &seed)?;
        put_value(out, &v.ring, Payload::BdrMatrix(root))
    })
}

/// Extend a constant cocycle from `m Gamma` to `Gamma`.
///
/// # Safety
/// `psi` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bdrplus_extend(psi: *const BdrValue, m: u32, out: *mut *mut BdrValue) -> BdrStatus {
    guard(|| {
        let v = deref(psi, "psi")?;
        let phi = normal_forms::extend_cocycle(cocycle(v, "psi")?, m as i64)?;
        put_value(out, &v.ring, Payload::Cocycle(phi))
    })
}

#[cfg(test)]
mod tests;
