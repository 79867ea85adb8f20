//! C interface to `cmclass`.
//!
//! Fields are opaque [`CmField`] handles built from a field specification
//! string (`zeta:20`, `quad:-4*quad:5`, `chars:f=40:e=1,0,2`). Every fallible
//! function returns a [`CmStatus`]; on failure the message is available from
//! [`cm_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cmclass::cli::parse_field_spec;
use cmclass::fieldlat::{AbelianField, DEFAULT_MAX_DEGREE};
use cmclass::hminus::minus_class_number;
use cmclass::unitindex::hasse_unit_index;
use cmclass::Error;

/// Opaque field handle.
pub struct CmField {
    field: AbelianField,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    DegreeBound = 5,
    NotCm = 6,
    Unsupported = 7,
    NonIntegral = 8,
    Internal = 9,
    Panic = 10,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> CmStatus {
    match err {
        Error::Parse { .. } => CmStatus::Parse,
        Error::DegreeBoundExceeded(_) => CmStatus::DegreeBound,
        Error::NotCm(_) => CmStatus::NotCm,
        Error::Unsupported(_) => CmStatus::Unsupported,
        Error::NonIntegralResult(_) => CmStatus::NonIntegral,
        Error::InternalInconsistency(_) => CmStatus::Internal,
        _ => CmStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (CmStatus, String)>) -> CmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CmStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CmStatus::Panic
        }
    }
}

fn lib(err: Error) -> (CmStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(name: &str) -> (CmStatus, String) {
    (CmStatus::NullPointer, format!("{name} is null"))
}

unsafe fn field_ref<'a>(field: *const CmField) -> Result<&'a AbelianField, (CmStatus, String)> {
    field.as_ref().map(|f| &f.field).ok_or_else(|| null("field"))
}

/// Builds a field from a specification. `max_degree` 0 selects the default
/// bound. On success `*out` owns a handle to release with [`cm_field_free`].
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cm_field_new(spec: *const c_char, max_degree: usize, out: *mut *mut CmField) -> CmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if spec.is_null() {
            return Err(null("spec"));
        }
        let text = CStr::from_ptr(spec)
            .to_str()
            .map_err(|e| (CmStatus::InvalidUtf8, e.to_string()))?;
        let bound = if max_degree == 0 { DEFAULT_MAX_DEGREE } else { max_degree };
        let field = parse_field_spec(text).and_then(|s| s.build(bound)).map_err(lib)?;
        *out = Box::into_raw(Box::new(CmField { field }));
        Ok(())
    })
}

/// Releases a handle from [`cm_field_new`]. Null is ignored.
///
/// # Safety
/// `field` must come from [`cm_field_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cm_field_free(field: *mut CmField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Conductor, degree, order of the roots of unity, and whether the field is CM.
///
/// # Safety
/// Pointers must be valid; `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cm_field_info(
    field: *const CmField,
    conductor: *mut u64,
    degree: *mut u64,
    roots_of_unity: *mut u64,
    is_cm: *mut bool,
) -> CmStatus {
    guard(|| {
        let k = field_ref(field)?;
        if conductor.is_null() || degree.is_null() || roots_of_unity.is_null() || is_cm.is_null() {
            return Err(null("output"));
        }
        *conductor = k.conductor();
        *degree = k.degree() as u64;
        *roots_of_unity = k.roots_of_unity_order();
        *is_cm = k.is_cm();
        Ok(())
    })
}

/// Canonical specification of the field. Release with [`cm_string_free`].
///
/// # Safety
/// `field` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cm_field_spec(field: *const CmField, out: *mut *mut c_char) -> CmStatus {
    guard(|| {
        let k = field_ref(field)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = CString::new(k.to_spec()).expect("spec has no NUL").into_raw();
        Ok(())
    })
}

/// h⁻(K) as a decimal string. `q_override` is 0 to use the rule cascade,
/// or 1 or 2. Release the string with [`cm_string_free`].
///
/// # Safety
/// `field` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cm_h_minus(field: *const CmField, q_override: u8, out: *mut *mut c_char) -> CmStatus {
    guard(|| {
        let k = field_ref(field)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let q = (q_override != 0).then_some(q_override);
        let r = minus_class_number(k, q).map_err(lib)?;
        *out = CString::new(r.h_minus.to_string()).expect("digits").into_raw();
        Ok(())
    })
}

/// Hasse unit index Q(K) and the order of the capitulation kernel
/// (0 when not decided).
///
/// # Safety
/// `field` must be a live handle; `q` and `kappa` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cm_unit_index(field: *const CmField, q: *mut u8, kappa: *mut u8) -> CmStatus {
    guard(|| {
        let k = field_ref(field)?;
        if q.is_null() || kappa.is_null() {
            return Err(null("output"));
        }
        let v = hasse_unit_index(k, None).map_err(lib)?;
        *q = v.q;
        *kappa = v.kappa_order.unwrap_or(0);
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, empty after a
/// successful call. Valid until the next call into the library.
#[no_mangle]
pub extern "C" fn cm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping() {
        assert_eq!(status_of(&Error::Unsupported("x".into())), CmStatus::Unsupported);
        assert_eq!(
            status_of(&Error::Parse { offset: 0, expected: "y".into() }),
            CmStatus::Parse
        );
        assert_eq!(status_of(&Error::EvenIndex(2)), CmStatus::InvalidArgument);
    }

    #[test]
    fn error_message_without_nul() {
        set_error("a\0b");
        let msg = unsafe { CStr::from_ptr(cm_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "a b");
    }
}
