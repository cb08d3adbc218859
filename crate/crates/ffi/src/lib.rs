//! C ABI for the toricext library.
//!
//! All functions follow one convention: inputs are const pointers,
//! results come back through out-pointers, and the return value is a
//! [`ToricStatus`] code. Strings are NUL-terminated UTF-8; integer
//! matrix entries cross the boundary as decimal strings so arbitrary
//! precision survives. Every object handed out (`ToricMatrix`,
//! `ToricVariety`, strings) is owned by the caller and must be
//! released with the matching `*_free` function, each of which accepts
//! NULL.

use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::BigInt;

use toricext::cli;
use toricext::intlin::IntMat;
use toricext::toric::{classify, LatticePresentation, ToricProfile};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToricStatus {
    /// The call succeeded and out-parameters are filled in.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8 or not NUL-terminated
    /// where required.
    InvalidString = 2,
    /// The input was structurally malformed (bad number, bad shape,
    /// unknown command, bad document).
    InvalidInput = 3,
    /// The input was well formed but a mathematical precondition
    /// failed; the diagnostic names it.
    DomainError = 4,
    /// An internal invariant failed.
    InternalError = 5,
}

/// An exact integer matrix.
pub struct ToricMatrix(IntMat);

/// The classification of one lattice presentation.
pub struct ToricVariety(ToricProfile);

fn status_of(err: &toricext::Error) -> ToricStatus {
    if err.is_input_error() {
        ToricStatus::InvalidInput
    } else {
        ToricStatus::DomainError
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, ToricStatus> {
    if ptr.is_null() {
        return Err(ToricStatus::NullPointer);
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| ToricStatus::InvalidString)
}

fn give_string(s: String, out: *mut *mut c_char) -> ToricStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            ToricStatus::Ok
        }
        Err(_) => ToricStatus::InternalError,
    }
}

fn guarded<F: FnOnce() -> ToricStatus>(f: F) -> ToricStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(ToricStatus::InternalError)
}

/// Build a matrix from row-major decimal-string entries.
///
/// `entries` must point to `rows * cols` NUL-terminated strings. On
/// success `*out` receives a new matrix; free it with
/// [`toric_matrix_free`].
///
/// # Safety
/// `entries` must be valid for `rows * cols` reads of C string
/// pointers and `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn toric_matrix_new(
    rows: usize,
    cols: usize,
    entries: *const *const c_char,
    out: *mut *mut ToricMatrix,
) -> ToricStatus {
    if out.is_null() || (rows * cols > 0 && entries.is_null()) {
        return ToricStatus::NullPointer;
    }
    guarded(|| {
        let mut data = Vec::with_capacity(rows * cols);
        for k in 0..rows * cols {
            let s = match read_str(*entries.add(k)) {
                Ok(s) => s,
                Err(status) => return status,
            };
            match s.trim().parse::<BigInt>() {
                Ok(x) => data.push(x),
                Err(_) => return ToricStatus::InvalidInput,
            }
        }
        let m = IntMat::new(rows, cols, data);
        *out = Box::into_raw(Box::new(ToricMatrix(m)));
        ToricStatus::Ok
    })
}

/// Row count; 0 when the handle is NULL.
///
/// # Safety
/// `m` must be NULL or a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn toric_matrix_rows(m: *const ToricMatrix) -> usize {
    if m.is_null() {
        return 0;
    }
    unsafe { (*m).0.rows() }
}

/// Column count; 0 when the handle is NULL.
///
/// # Safety
/// `m` must be NULL or a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn toric_matrix_cols(m: *const ToricMatrix) -> usize {
    if m.is_null() {
        return 0;
    }
    unsafe { (*m).0.cols() }
}

/// Copy entry (i, j) as a decimal string into `*out`; free it with
/// [`toric_string_free`].
///
/// # Safety
/// `m` must be a live matrix handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn toric_matrix_entry(
    m: *const ToricMatrix,
    i: usize,
    j: usize,
    out: *mut *mut c_char,
) -> ToricStatus {
    if m.is_null() || out.is_null() {
        return ToricStatus::NullPointer;
    }
    let mat = &(*m).0;
    if i >= mat.rows() || j >= mat.cols() {
        return ToricStatus::InvalidInput;
    }
    give_string(mat.get(i, j).to_string(), out)
}

/// Release a matrix handle. NULL is accepted.
///
/// # Safety
/// `m` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn toric_matrix_free(m: *mut ToricMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Classify the presentation whose relation matrix is `relations`.
/// On success `*out` receives a new handle; free it with
/// [`toric_variety_free`].
///
/// # Safety
/// `relations` must be a live matrix handle and `out` valid for a
/// write.
#[no_mangle]
pub unsafe extern "C" fn toric_classify(
    relations: *const ToricMatrix,
    out: *mut *mut ToricVariety,
) -> ToricStatus {
    if relations.is_null() || out.is_null() {
        return ToricStatus::NullPointer;
    }
    guarded(|| {
        let m = (*relations).0.clone();
        match LatticePresentation::new(m) {
            Ok(p) => {
                let profile = classify(&p);
                *out = Box::into_raw(Box::new(ToricVariety(profile)));
                ToricStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// 1 when the coordinate ring is an integral domain, 0 otherwise or on
/// NULL.
///
/// # Safety
/// `v` must be NULL or a live classification handle.
#[no_mangle]
pub unsafe extern "C" fn toric_variety_is_prime(v: *const ToricVariety) -> c_int {
    if v.is_null() {
        return 0;
    }
    unsafe { (*v).0.is_prime as c_int }
}

/// 1 when the variety contains the origin, 0 otherwise or on NULL.
///
/// # Safety
/// `v` must be NULL or a live classification handle.
#[no_mangle]
pub unsafe extern "C" fn toric_variety_contains_origin(v: *const ToricVariety) -> c_int {
    if v.is_null() {
        return 0;
    }
    unsafe { (*v).0.contains_origin as c_int }
}

/// 1 when the normalization is an affine space, 0 otherwise or on
/// NULL.
///
/// # Safety
/// `v` must be NULL or a live classification handle.
#[no_mangle]
pub unsafe extern "C" fn toric_variety_normalization_is_affine_space(v: *const ToricVariety) -> c_int {
    if v.is_null() {
        return 0;
    }
    unsafe { (*v).0.normalization_is_affine_space as c_int }
}

/// Dimension of the variety; 0 on NULL.
///
/// # Safety
/// `v` must be NULL or a live classification handle.
#[no_mangle]
pub unsafe extern "C" fn toric_variety_dimension(v: *const ToricVariety) -> usize {
    if v.is_null() {
        return 0;
    }
    unsafe { (*v).0.dimension }
}

/// Number of monomials in the parametrization (columns of the basis
/// matrix); 0 on NULL.
///
/// # Safety
/// `v` must be NULL or a live classification handle.
#[no_mangle]
pub unsafe extern "C" fn toric_variety_monomial_count(v: *const ToricVariety) -> usize {
    if v.is_null() {
        return 0;
    }
    unsafe { (*v).0.basis.len() }
}

/// Rank of the kernel of the basis matrix; 0 on NULL.
///
/// # Safety
/// `v` must be NULL or a live classification handle.
#[no_mangle]
pub unsafe extern "C" fn toric_variety_kernel_rank(v: *const ToricVariety) -> usize {
    if v.is_null() {
        return 0;
    }
    unsafe { (*v).0.kernel_rank() }
}

/// Copy the Hilbert basis matrix (columns are the basis elements) into
/// a new handle at `*out`.
///
/// # Safety
/// `v` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn toric_variety_basis(
    v: *const ToricVariety,
    out: *mut *mut ToricMatrix,
) -> ToricStatus {
    if v.is_null() || out.is_null() {
        return ToricStatus::NullPointer;
    }
    *out = Box::into_raw(Box::new(ToricMatrix((*v).0.basis.matrix.clone())));
    ToricStatus::Ok
}

/// Copy the kernel basis matrix of the Hilbert basis matrix into a new
/// handle at `*out`.
///
/// # Safety
/// `v` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn toric_variety_kernel(
    v: *const ToricVariety,
    out: *mut *mut ToricMatrix,
) -> ToricStatus {
    if v.is_null() || out.is_null() {
        return ToricStatus::NullPointer;
    }
    *out = Box::into_raw(Box::new(ToricMatrix((*v).0.kernel.clone())));
    ToricStatus::Ok
}

/// Release a classification handle. NULL is accepted.
///
/// # Safety
/// `v` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn toric_variety_free(v: *mut ToricVariety) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Run one batch command on a JSON document and return its report.
///
/// `command` is one of `classify`, `hilbert-basis`, `saturate`,
/// `obstruction`, `counterexample`, `decide-extension`. `as_json`
/// selects the report format (0 = text). `budget` caps the number of
/// fiber selections examined by `decide-extension`; pass 0 for the
/// default. On every outcome `*out` receives a string, the report on
/// `Ok` and the diagnostic otherwise; free it with [`toric_string_free`].
///
/// # Safety
/// `command` and `document` must be NUL-terminated and `out` valid for
/// a write.
#[no_mangle]
pub unsafe extern "C" fn toric_run_json(
    command: *const c_char,
    document: *const c_char,
    as_json: c_int,
    budget: u64,
    out: *mut *mut c_char,
) -> ToricStatus {
    if out.is_null() {
        return ToricStatus::NullPointer;
    }
    let command = match read_str(command) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let document = match read_str(document) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let command = match command {
        "classify" => cli::Command::Classify,
        "hilbert-basis" => cli::Command::HilbertBasis,
        "saturate" => cli::Command::Saturate,
        "obstruction" => cli::Command::Obstruction,
        "counterexample" => cli::Command::Counterexample,
        "decide-extension" => cli::Command::DecideExtension,
        other => {
            let status = give_string(format!("unknown command {other:?}"), out);
            if status == ToricStatus::Ok {
                return ToricStatus::InvalidInput;
            }
            return status;
        }
    };
    let format = if as_json == 0 {
        cli::Format::Text
    } else {
        cli::Format::Json
    };
    let budget = if budget == 0 {
        toricext::divisor::DEFAULT_SELECTION_BUDGET
    } else {
        budget
    };
    guarded(|| match cli::dispatch(command, document, format, budget) {
        Ok(report) => give_string(report, out),
        Err(failure) => {
            let status = give_string(failure.message, out);
            if status != ToricStatus::Ok {
                return status;
            }
            if failure.exit_code == 2 {
                ToricStatus::InvalidInput
            } else {
                ToricStatus::DomainError
            }
        }
    })
}

/// Release a string returned by this library. NULL is accepted.
///
/// # Safety
/// `s` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn toric_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
