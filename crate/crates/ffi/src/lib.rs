//! C interface to `mcf-core`.
//!
//! Results live behind opaque handles released with the matching `*_free`.
//! Strings returned through out-parameters are owned by the caller and must
//! be released with [`mcf_string_free`]. Every function returns an
//! [`McfStatus`]; on failure [`mcf_last_error`] describes the cause for the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};

use mcf_core::engine::{check_admissible, expand, ExpansionRecord, PartialQuotients};
use mcf_core::io;
use mcf_core::periodic::{solve_periodic, CubicCertificate, PeriodicSpec};
use mcf_core::transcendence::{construct_liouville, verify_liouville, EntryRule, LiouvilleSpec};
use mcf_core::McfError;
use num_bigint::BigInt;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum McfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    Violation = 4,
    BudgetExhausted = 5,
    Degenerate = 6,
    OutOfRange = 7,
    Panic = 8,
}

/// Expansion of a tuple of reals.
pub struct McfExpansion {
    record: ExpansionRecord,
}

/// Cubic certificate of a periodic expansion.
pub struct McfCertificate {
    cert: CubicCertificate,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &McfError) -> McfStatus {
    match e {
        McfError::HypothesisViolated { .. } => McfStatus::Violation,
        McfError::DegenerateCubic { .. } | McfError::RootSelectionAmbiguous => McfStatus::Degenerate,
        e if e.is_refinement_failure() => McfStatus::BudgetExhausted,
        _ => McfStatus::InvalidInput,
    }
}

struct Fail(McfStatus, String);

impl From<McfError> for Fail {
    fn from(e: McfError) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<McfStatus, Fail> + UnwindSafe) -> McfStatus {
    match catch_unwind(f) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            McfStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(McfStatus::NullPointer, format!("`{name}` is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(McfStatus::InvalidUtf8, format!("`{name}` is not UTF-8")))
}

fn json_arg(s: &str) -> Result<serde_json::Value, Fail> {
    serde_json::from_str(s).map_err(|e| Fail(McfStatus::InvalidInput, format!("bad JSON: {e}")))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(McfStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(v);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(McfStatus::NullPointer, "output pointer is null".into()));
    }
    let c = CString::new(s).map_err(|_| Fail(McfStatus::Panic, "interior nul in output".into()))?;
    out.write(c.into_raw());
    Ok(())
}

fn int_list(s: &str) -> Result<Vec<BigInt>, Fail> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| Fail(McfStatus::InvalidInput, format!("not an integer: {t:?}"))))
        .collect()
}

fn pq_arg(s: &str) -> Result<PartialQuotients, Fail> {
    Ok(io::pq_from_json(&json_arg(s)?)?)
}

/// Message for the last failed call on this thread. Valid until the next
/// call on the same thread; never null.
#[no_mangle]
pub extern "C" fn mcf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mcf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Expands the reals in `inputs_json` (an array of real values) for `steps`
/// indices.
///
/// # Safety
/// `inputs_json` must be a valid nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mcf_expand(inputs_json: *const c_char, steps: usize, out: *mut *mut McfExpansion) -> McfStatus {
    guard(|| {
        let inputs = io::inputs_from_json(&json_arg(str_arg(inputs_json, "inputs_json")?)?)?;
        let record = expand(&inputs, steps, false)?;
        write_out(out, Box::into_raw(Box::new(McfExpansion { record })))?;
        Ok(McfStatus::Ok)
    })
}

/// Number of sequences (the starting dimension).
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mcf_expansion_dim(h: *const McfExpansion) -> usize {
    h.as_ref().map_or(0, |h| h.record.pq.m())
}

/// Length of sequence `j`, or 0 for a bad handle or index.
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mcf_expansion_len(h: *const McfExpansion, j: usize) -> usize {
    h.as_ref().filter(|h| j < h.record.pq.m()).map_or(0, |h| h.record.pq.seq(j).len())
}

/// Number of interruptions met.
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mcf_expansion_interruptions(h: *const McfExpansion) -> usize {
    h.as_ref().map_or(0, |h| h.record.interruptions.len())
}

/// Quotient `a^{(j+1)}_n` as a decimal string.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mcf_expansion_quotient(
    h: *const McfExpansion,
    j: usize,
    n: usize,
    out: *mut *mut c_char,
) -> McfStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| Fail(McfStatus::NullPointer, "handle is null".into()))?;
        let v = h.record.pq.get(j, n).ok_or_else(|| Fail(McfStatus::OutOfRange, format!("no quotient ({j}, {n})")))?;
        write_string(out, v.to_string())?;
        Ok(McfStatus::Ok)
    })
}

/// The quotients as `{"m":…, "seqs":[[…],…]}`.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mcf_expansion_json(h: *const McfExpansion, out: *mut *mut c_char) -> McfStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| Fail(McfStatus::NullPointer, "handle is null".into()))?;
        write_string(out, io::pq_to_json(&h.record.pq).to_string())?;
        Ok(McfStatus::Ok)
    })
}

/// # Safety
/// `h` must come from [`mcf_expand`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mcf_expansion_free(h: *mut McfExpansion) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Solves a periodic expansion of dimension 2. Each argument is a comma
/// separated integer list; the pre-periods may be empty strings.
///
/// # Safety
/// All strings must be valid and nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mcf_periodic_solve(
    pre_a: *const c_char,
    pre_b: *const c_char,
    per_a: *const c_char,
    per_b: *const c_char,
    out: *mut *mut McfCertificate,
) -> McfStatus {
    guard(|| {
        let spec = PeriodicSpec::new(
            int_list(str_arg(pre_a, "pre_a")?)?,
            int_list(str_arg(pre_b, "pre_b")?)?,
            int_list(str_arg(per_a, "per_a")?)?,
            int_list(str_arg(per_b, "per_b")?)?,
        )?;
        let cert = solve_periodic(&spec)?;
        write_out(out, Box::into_raw(Box::new(McfCertificate { cert })))?;
        Ok(McfStatus::Ok)
    })
}

/// Coefficient of `x^(3-i)` in the minimal polynomial of the first
/// (`which = 0`) or second (`which = 1`) coordinate.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mcf_certificate_coeff(
    h: *const McfCertificate,
    which: u32,
    i: usize,
    out: *mut *mut c_char,
) -> McfStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| Fail(McfStatus::NullPointer, "handle is null".into()))?;
        let poly = match which {
            0 => &h.cert.poly_alpha,
            1 => &h.cert.poly_beta,
            _ => return Err(Fail(McfStatus::OutOfRange, "which must be 0 or 1".into())),
        };
        let c = poly.get(i).ok_or_else(|| Fail(McfStatus::OutOfRange, "coefficient index above 3".into()))?;
        write_string(out, c.to_string())?;
        Ok(McfStatus::Ok)
    })
}

/// 1 if the height bound holds, 0 if it fails, -1 if it does not apply.
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mcf_certificate_bound_holds(h: *const McfCertificate) -> i32 {
    match h.as_ref().and_then(|h| h.cert.bound_holds()) {
        Some(true) => 1,
        Some(false) => 0,
        None => -1,
    }
}

/// The whole certificate as JSON.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mcf_certificate_json(h: *const McfCertificate, out: *mut *mut c_char) -> McfStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| Fail(McfStatus::NullPointer, "handle is null".into()))?;
        write_string(out, io::certificate_to_json(&h.cert).to_string())?;
        Ok(McfStatus::Ok)
    })
}

/// # Safety
/// `h` must come from [`mcf_periodic_solve`] and not be freed twice. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn mcf_certificate_free(h: *mut McfCertificate) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Admissibility of the quotients in `pq_json`. Writes 1 or 0 to `out`.
///
/// # Safety
/// `pq_json` must be valid and nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mcf_check_admissible(pq_json: *const c_char, out: *mut i32) -> McfStatus {
    guard(|| {
        let pq = pq_arg(str_arg(pq_json, "pq_json")?)?;
        write_out(out, i32::from(check_admissible(&pq).is_admissible()))?;
        Ok(McfStatus::Ok)
    })
}

/// Builds a Liouville-type expansion through index `depth`. `rules` holds
/// one rule per coordinate after the first, separated by `;`
/// (e.g. `const:0`). Writes the quotients as JSON.
///
/// # Safety
/// Strings must be valid and nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mcf_construct_liouville(
    m: usize,
    delta: *const c_char,
    rules: *const c_char,
    depth: usize,
    out: *mut *mut c_char,
) -> McfStatus {
    guard(|| {
        let delta = io::parse_rational_str(str_arg(delta, "delta")?)?;
        let rules_s = str_arg(rules, "rules")?;
        let rules = if rules_s.trim().is_empty() {
            Vec::new()
        } else {
            rules_s.split(';').map(|r| r.trim().parse()).collect::<Result<Vec<EntryRule>, _>>()?
        };
        let pq = construct_liouville(&LiouvilleSpec { m, delta, a0: BigInt::from(0), rules, depth })?;
        write_string(out, io::pq_to_json(&pq).to_string())?;
        Ok(McfStatus::Ok)
    })
}

/// Runs the Liouville-type criterion through index `depth` and writes the
/// report as JSON. Returns `Violation` (with the report written) when a
/// hypothesis fails.
///
/// # Safety
/// Strings must be valid and nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mcf_verify_liouville(
    pq_json: *const c_char,
    delta: *const c_char,
    depth: usize,
    out: *mut *mut c_char,
) -> McfStatus {
    guard(|| {
        let pq = pq_arg(str_arg(pq_json, "pq_json")?)?;
        let delta = io::parse_rational_str(str_arg(delta, "delta")?)?;
        let rep = verify_liouville(&pq, &delta, depth)?;
        let text = serde_json::to_string(&rep).expect("serializable");
        write_string(out, text)?;
        if rep.holds() {
            Ok(McfStatus::Ok)
        } else {
            set_error(&format!("criterion not met: {}", rep.verdict));
            Ok(McfStatus::Violation)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn take(p: *mut c_char) -> String {
        let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
        unsafe { mcf_string_free(p) };
        s
    }

    #[test]
    fn expansion_handle() {
        let input = CString::new(r#"[{"kind":"rational","num":7,"den":5},{"kind":"rational","num":3,"den":5}]"#).unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { mcf_expand(input.as_ptr(), 4, &mut h) }, McfStatus::Ok);
        unsafe {
            assert_eq!(mcf_expansion_dim(h), 2);
            assert_eq!(mcf_expansion_len(h, 0), 4);
            assert_eq!(mcf_expansion_interruptions(h), 1);
            let mut s = ptr::null_mut();
            assert_eq!(mcf_expansion_quotient(h, 0, 3, &mut s), McfStatus::Ok);
            assert_eq!(take(s), "2");
            assert_eq!(mcf_expansion_quotient(h, 1, 3, &mut s), McfStatus::OutOfRange);
            mcf_expansion_free(h);
        }
    }

    #[test]
    fn errors_are_reported() {
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { mcf_expand(ptr::null(), 1, &mut h) }, McfStatus::NullPointer);
        let bad = CString::new("{").unwrap();
        assert_eq!(unsafe { mcf_expand(bad.as_ptr(), 1, &mut h) }, McfStatus::InvalidInput);
        let msg = unsafe { CStr::from_ptr(mcf_last_error()) }.to_str().unwrap();
        assert!(msg.contains("JSON"), "{msg}");
        assert!(h.is_null());
    }

    #[test]
    fn certificate_handle() {
        let (e, a, b) = (CString::new("").unwrap(), CString::new("2").unwrap(), CString::new("1").unwrap());
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { mcf_periodic_solve(e.as_ptr(), e.as_ptr(), a.as_ptr(), b.as_ptr(), &mut h) }, McfStatus::Ok);
        let coeffs: Vec<String> = (0..4)
            .map(|i| {
                let mut s = ptr::null_mut();
                assert_eq!(unsafe { mcf_certificate_coeff(h, 0, i, &mut s) }, McfStatus::Ok);
                take(s)
            })
            .collect();
        assert_eq!(coeffs, ["1", "-2", "-1", "-1"]);
        assert_eq!(unsafe { mcf_certificate_bound_holds(h) }, 1);
        unsafe { mcf_certificate_free(h) };
    }
}
