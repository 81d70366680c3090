//! C interface to `qprenex`.
//!
//! Formulas live behind an opaque `QpFormula` handle. Every fallible call
//! returns a `QpStatus`; on failure `qp_last_error_message` describes the
//! error. Strings returned through out-pointers are owned by the caller and
//! released with `qp_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qprenex::export::{prenex_problem_text, to_qcir, to_qdimacs, ExportError, FreeVariables};
use qprenex::{
    parse_with, print_problem, transform, FreshGen, Mode, Oracle, ParseOptions, Problem,
    SemanticsError,
};

/// Opaque formula handle, together with its operator declarations.
pub struct QpFormula {
    problem: Problem,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    NotPrenex = 5,
    Refused = 6,
    SemanticsError = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpMode {
    Sat = 0,
    Valid = 1,
    Mc = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpFormat {
    Fqbf = 0,
    Qcir = 1,
    Qdimacs = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpFreeVariables {
    Exists = 0,
    Forall = 1,
    Free = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QpMetrics {
    pub length: usize,
    pub qdepth: usize,
    pub nblock: usize,
    pub nbvar: usize,
    pub is_prenex: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(message).ok());
}

struct Failure(QpStatus, String);

impl From<SemanticsError> for Failure {
    fn from(e: SemanticsError) -> Self {
        let status = match e {
            SemanticsError::Refused { .. } => QpStatus::Refused,
            _ => QpStatus::SemanticsError,
        };
        Failure(status, e.to_string())
    }
}

impl From<ExportError> for Failure {
    fn from(e: ExportError) -> Self {
        let status = match e {
            ExportError::NotPrenex => QpStatus::NotPrenex,
            ExportError::UnloweredOperator(_) => QpStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null() -> Failure {
    Failure(QpStatus::NullArgument, "null pointer argument".into())
}

/// Runs `f`, recording any failure or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            QpStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QpStatus::Panic
        }
    }
}

unsafe fn formula<'a>(p: *const QpFormula) -> Result<&'a QpFormula, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap().into_raw()
}

fn to_mode(mode: QpMode) -> Mode {
    match mode {
        QpMode::Sat => Mode::Sat,
        QpMode::Valid => Mode::Valid,
        QpMode::Mc => Mode::Mc,
    }
}

/// Parses `text`. On success `*out` receives a handle to release with
/// `qp_formula_free`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qp_parse(
    text: *const c_char,
    allow_internal_names: bool,
    out: *mut *mut QpFormula,
) -> QpStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return Err(null());
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Failure(QpStatus::InvalidUtf8, e.to_string()))?;
        let problem = parse_with(
            text,
            ParseOptions {
                allow_internal_names,
            },
        )
        .map_err(|e| Failure(QpStatus::ParseError, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(QpFormula { problem })))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `f` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qp_formula_free(f: *mut QpFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Prints the formula with its declarations in the input syntax.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qp_formula_print(f: *const QpFormula, out: *mut *mut c_char) -> QpStatus {
    guard(|| {
        let f = formula(f)?;
        if out.is_null() {
            return Err(null());
        }
        write_out(out, into_c_string(print_problem(&f.problem)))
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qp_formula_metrics(f: *const QpFormula, out: *mut QpMetrics) -> QpStatus {
    guard(|| {
        let phi = &formula(f)?.problem.formula;
        let metrics = QpMetrics {
            length: phi.length(),
            qdepth: phi.qdepth(),
            nblock: phi.nblock(),
            nbvar: phi.nbvar(),
            is_prenex: phi.is_prenex(),
        };
        write_out(out, metrics)
    })
}

/// Transforms `f` for `mode` into a new handle.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qp_prenex(
    f: *const QpFormula,
    mode: QpMode,
    out: *mut *mut QpFormula,
) -> QpStatus {
    guard(|| {
        let problem = &formula(f)?.problem;
        if out.is_null() {
            return Err(null());
        }
        let phi = &problem.formula;
        let result = Problem {
            declarations: problem.declarations.clone(),
            formula: transform(to_mode(mode), phi, &mut FreshGen::for_formula(phi)),
        };
        write_out(out, Box::into_raw(Box::new(QpFormula { problem: result })))
    })
}

/// Writes a prenex formula in `format`. `free` says how free variables are
/// bound in QCIR and QDIMACS; it is ignored for `.fqbf` text.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qp_export(
    f: *const QpFormula,
    format: QpFormat,
    free: QpFreeVariables,
    out: *mut *mut c_char,
) -> QpStatus {
    guard(|| {
        let problem = &formula(f)?.problem;
        if out.is_null() {
            return Err(null());
        }
        let free = match free {
            QpFreeVariables::Exists => FreeVariables::Exists,
            QpFreeVariables::Forall => FreeVariables::Forall,
            QpFreeVariables::Free => FreeVariables::Free,
        };
        let ops = problem.operators();
        let text = match format {
            QpFormat::Fqbf => prenex_problem_text(problem)?,
            QpFormat::Qcir => to_qcir(&problem.formula, &ops, free)?.text,
            QpFormat::Qdimacs => to_qdimacs(&problem.formula, &ops, free)?.text,
        };
        write_out(out, into_c_string(text))
    })
}

/// Decides whether `a` and `b` agree under the relation of `mode`:
/// equisatisfiable, equivalid or equivalent. `cap` bounds the variables the
/// oracle accepts; 0 selects the default.
///
/// # Safety
/// `a` and `b` must be live handles and `agree` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qp_check(
    a: *const QpFormula,
    b: *const QpFormula,
    mode: QpMode,
    cap: usize,
    agree: *mut bool,
) -> QpStatus {
    guard(|| {
        let (a, b) = (&formula(a)?.problem, &formula(b)?.problem);
        let mut ops = a.operators();
        for d in &b.declarations {
            match ops.get(&d.name) {
                Some(def) if *def != d.def => {
                    return Err(Failure(
                        QpStatus::InvalidArgument,
                        format!("operator `{}` is declared differently", d.name),
                    ))
                }
                Some(_) => {}
                None => ops
                    .declare(&d.name, d.def.clone())
                    .map_err(|e| Failure(QpStatus::InvalidArgument, e.to_string()))?,
            }
        }
        let mut oracle = Oracle::new(ops);
        if cap > 0 {
            oracle = oracle.with_cap(cap);
        }
        let (phi, psi) = (&a.formula, &b.formula);
        let same = match to_mode(mode) {
            Mode::Sat => oracle.equisatisfiable(phi, psi)?,
            Mode::Valid => oracle.equivalid(phi, psi)?,
            Mode::Mc => oracle.equivalent(phi, psi)?,
        };
        write_out(agree, same)
    })
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn qp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
