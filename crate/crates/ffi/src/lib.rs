//! C ABI over the permdeg library. Groups are opaque handles; every fallible
//! call returns a [`PermdegStatus`] and leaves a message retrievable with
//! [`permdeg_last_error`].

use permdeg::catalog::{self, Catalog, Mode, Status};
use permdeg::pcpres::{self, Refined};
use permdeg::{mu, primes, quasiperm, structure, Budget, Error};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PermdegStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidPrime = 3,
    Parse = 4,
    InvalidPresentation = 5,
    Catalog = 6,
    BudgetExhausted = 7,
    Overflow = 8,
    Mismatch = 9,
    Io = 10,
    Panic = 11,
}

/// Opaque group handle.
pub struct PermdegGroup {
    inner: Refined,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: PermdegStatus, msg: &str) -> PermdegStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> PermdegStatus {
    match e {
        Error::InvalidPrime(_) => PermdegStatus::InvalidPrime,
        Error::Parse { .. }
        | Error::UnknownGenerator(_)
        | Error::DuplicateRelation(_)
        | Error::UnknownParam(_)
        | Error::ParamOutOfRange { .. } => PermdegStatus::Parse,
        Error::BudgetExhausted { .. } => PermdegStatus::BudgetExhausted,
        Error::Catalog(_) => PermdegStatus::Catalog,
        Error::Io(_) => PermdegStatus::Io,
        _ => PermdegStatus::InvalidPresentation,
    }
}

fn from_error(e: Error) -> PermdegStatus {
    fail(status_of(&e), &e.to_string())
}

fn guarded(f: impl FnOnce() -> PermdegStatus) -> PermdegStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(PermdegStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, PermdegStatus> {
    if s.is_null() {
        return Err(fail(PermdegStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(PermdegStatus::InvalidUtf8, "argument is not UTF-8"))
}

/// Parses `k=v` bindings separated by `;`, `,` or whitespace.
fn bindings(s: &str) -> Result<Vec<(&str, &str)>, PermdegStatus> {
    s.split(|c: char| c == ';' || c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.split_once('=').map(|(k, v)| (k.trim(), v.trim())).ok_or_else(|| fail(PermdegStatus::Parse, &format!("bad binding `{t}`")))
        })
        .collect()
}

fn budget_of(n: u64) -> Budget {
    if n == 0 {
        Budget::default()
    } else {
        Budget::uniform(n)
    }
}

fn to_u64(v: u128) -> Result<u64, PermdegStatus> {
    u64::try_from(v).map_err(|_| fail(PermdegStatus::Overflow, &format!("{v} does not fit in 64 bits")))
}

unsafe fn emit_string(s: String, out: *mut *mut c_char) -> PermdegStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            PermdegStatus::Ok
        }
        Err(_) => fail(PermdegStatus::Panic, "interior NUL in output"),
    }
}

/// Returns the message for the most recent failure on this thread, or NULL.
/// The caller owns the string and must release it with [`permdeg_string_free`].
#[no_mangle]
pub extern "C" fn permdeg_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().clone()).map_or(ptr::null_mut(), CString::into_raw)
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a pointer returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn permdeg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a group from presentation text at prime `p`. `params` holds
/// `k=v` bindings separated by `;` and may be NULL.
///
/// # Safety
/// `text` must be a valid NUL-terminated string, `params` NULL or a valid
/// NUL-terminated string, and `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn permdeg_group_from_presentation(
    text: *const c_char,
    p: u64,
    params: *const c_char,
    out: *mut *mut PermdegGroup,
) -> PermdegStatus {
    guarded(|| {
        if out.is_null() {
            return fail(PermdegStatus::NullPointer, "null output pointer");
        }
        let text = match str_arg(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let params = if params.is_null() { Ok("") } else { str_arg(params) };
        let binds = match params.and_then(bindings) {
            Ok(b) => b,
            Err(s) => return s,
        };
        let built = primes::resolve_params(p)
            .and_then(|prime| pcpres::parse_presentation(text, prime, &binds))
            .and_then(|pres| pcpres::refine(&pres));
        match built {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(PermdegGroup { inner }));
                PermdegStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Loads a catalog group by id (for example `G_(3,23)`). `catalog_dir` may be
/// NULL to use the default catalog location.
///
/// # Safety
/// `id` must be a valid NUL-terminated string, `catalog_dir` and `params`
/// NULL or valid NUL-terminated strings, and `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn permdeg_group_from_catalog(
    catalog_dir: *const c_char,
    id: *const c_char,
    p: u64,
    params: *const c_char,
    out: *mut *mut PermdegGroup,
) -> PermdegStatus {
    guarded(|| {
        if out.is_null() {
            return fail(PermdegStatus::NullPointer, "null output pointer");
        }
        let id = match str_arg(id) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let params = if params.is_null() { Ok("") } else { str_arg(params) };
        let binds = match params.and_then(bindings) {
            Ok(b) => b,
            Err(s) => return s,
        };
        let cat = match load_catalog(catalog_dir) {
            Ok(c) => c,
            Err(s) => return s,
        };
        match cat.load_entry(id, p, &binds) {
            Ok((inner, _)) => {
                *out = Box::into_raw(Box::new(PermdegGroup { inner }));
                PermdegStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

unsafe fn load_catalog(dir: *const c_char) -> Result<Catalog, PermdegStatus> {
    let loaded = if dir.is_null() { Catalog::load_default() } else { Catalog::load(std::path::Path::new(str_arg(dir)?)) };
    loaded.map_err(from_error)
}

/// Releases a group handle.
///
/// # Safety
/// `g` must be NULL or a handle returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn permdeg_group_free(g: *mut PermdegGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Returns `n` where the group has order `p^n`, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn permdeg_group_log_order(g: *const PermdegGroup) -> u32 {
    g.as_ref().map_or(0, |g| g.inner.group.n() as u32)
}

/// Returns the prime of the group, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn permdeg_group_prime(g: *const PermdegGroup) -> u64 {
    g.as_ref().map_or(0, |g| g.inner.group.p())
}

/// Returns `k` where the centre has order `p^k`, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn permdeg_group_log_center(g: *const PermdegGroup) -> u32 {
    g.as_ref().map_or(0, |g| structure::center(&g.inner.group).log_order() as u32)
}

/// Returns 1 when the collector rules are consistent, 0 otherwise or for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn permdeg_group_is_consistent(g: *const PermdegGroup) -> bool {
    g.as_ref().is_some_and(|g| g.inner.group.consistency_check().is_empty())
}

/// Computes the minimal faithful permutation degree. `budget` 0 selects the
/// default limits.
///
/// # Safety
/// `g` must be a live handle and `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn permdeg_mu(g: *const PermdegGroup, budget: u64, out: *mut u64) -> PermdegStatus {
    guarded(|| {
        let (Some(g), false) = (g.as_ref(), out.is_null()) else {
            return fail(PermdegStatus::NullPointer, "null argument");
        };
        match mu::minimal_degree(&g.inner.group, &budget_of(budget)) {
            Ok((m, _)) => match to_u64(m) {
                Ok(v) => {
                    *out = v;
                    PermdegStatus::Ok
                }
                Err(s) => s,
            },
            Err(e) => from_error(e),
        }
    })
}

/// Computes the minimal faithful quasi-permutation degree. `budget` 0 selects
/// the default limits.
///
/// # Safety
/// `g` must be a live handle and `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn permdeg_c(g: *const PermdegGroup, budget: u64, out: *mut u64) -> PermdegStatus {
    guarded(|| {
        let (Some(g), false) = (g.as_ref(), out.is_null()) else {
            return fail(PermdegStatus::NullPointer, "null argument");
        };
        match quasiperm::minimal_c(&g.inner.group, &budget_of(budget)) {
            Ok((c, _)) => match to_u64(c) {
                Ok(v) => {
                    *out = v;
                    PermdegStatus::Ok
                }
                Err(s) => s,
            },
            Err(e) => from_error(e),
        }
    })
}

/// Writes a JSON certificate for the minimal degree: the point stabilisers
/// and their indices. Free the result with [`permdeg_string_free`].
///
/// # Safety
/// `g` must be a live handle and `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn permdeg_mu_certificate_json(g: *const PermdegGroup, budget: u64, out: *mut *mut c_char) -> PermdegStatus {
    guarded(|| {
        let (Some(g), false) = (g.as_ref(), out.is_null()) else {
            return fail(PermdegStatus::NullPointer, "null argument");
        };
        let grp = &g.inner.group;
        match mu::minimal_degree(grp, &budget_of(budget)) {
            Ok((m, cert)) => {
                let parts: Vec<_> = cert
                    .parts
                    .iter()
                    .map(|h| serde_json::json!({"generators": h.format(grp), "index": h.index(grp).to_string()}))
                    .collect();
                emit_string(serde_json::json!({"degree": m.to_string(), "parts": parts}).to_string(), out)
            }
            Err(e) => from_error(e),
        }
    })
}

/// Writes the minimal degree permutation representation as text: a
/// `degree n` line, then one line of 0-based images per pc generator.
/// Free the result with [`permdeg_string_free`].
///
/// # Safety
/// `g` must be a live handle and `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn permdeg_export(g: *const PermdegGroup, budget: u64, out: *mut *mut c_char) -> PermdegStatus {
    guarded(|| {
        let (Some(g), false) = (g.as_ref(), out.is_null()) else {
            return fail(PermdegStatus::NullPointer, "null argument");
        };
        let grp = &g.inner.group;
        let b = budget_of(budget);
        match mu::minimal_degree(grp, &b).and_then(|(_, cert)| mu::coset_action(grp, &cert.parts, &b)) {
            Ok(rep) => emit_string(rep.to_text(), out),
            Err(e) => from_error(e),
        }
    })
}

/// Verifies every catalog entry at prime `p`. Witness degrees are always
/// checked; `exact` also recomputes the values. Writes the number of failing
/// entries to `failures` and returns [`PermdegStatus::Mismatch`] when it is
/// nonzero.
///
/// # Safety
/// `catalog_dir` must be NULL or a valid NUL-terminated string and
/// `failures` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn permdeg_verify_catalog(
    catalog_dir: *const c_char,
    p: u64,
    exact: bool,
    budget: u64,
    failures: *mut u32,
) -> PermdegStatus {
    guarded(|| {
        if failures.is_null() {
            return fail(PermdegStatus::NullPointer, "null output pointer");
        }
        let cat = match load_catalog(catalog_dir) {
            Ok(c) => c,
            Err(s) => return s,
        };
        match catalog::verify_all(&cat, p, Mode { exact }, &budget_of(budget)) {
            Ok(summary) => {
                let failed = summary.failures();
                *failures = failed.len() as u32;
                if let Some(r) = failed.first() {
                    return fail(PermdegStatus::Mismatch, &format!("{}: {:?}", r.label(), r.status));
                }
                if summary.count(|s| matches!(s, Status::Bounded(_))) > 0 {
                    return fail(PermdegStatus::BudgetExhausted, "some entries exhausted the budget");
                }
                PermdegStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
