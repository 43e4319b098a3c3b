//! C ABI for idemkern.
//!
//! Every function returns an [`IkStatus`]. Handles are opaque and owned by the
//! caller until passed to their `_free` function. Strings returned through
//! `char **` out-parameters are owned by the caller and released with
//! [`ik_string_free`]. After a non-`IK_OK` status, [`ik_last_error`] describes
//! the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use idemkern::cli::{self, Status};
use idemkern::io::{KernelFile, OperatorFile, SemimoduleFile, FULL_CARRIER_CAP};
use idemkern::kernel::{has_integral_representation, Operator, Space, WitnessRule};
use idemkern::Error;

/// Result codes; 0 to 3 match the command-line exit statuses.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IkStatus {
    Ok = 0,
    /// The question was answered in the negative; outputs are still written.
    VerdictNegative = 1,
    InvalidInput = 2,
    InternalInconsistency = 3,
    NullPointer = 4,
    Panic = 5,
}

/// A functional semimodule loaded from JSON.
pub struct IkSemimodule {
    space: Space,
}

/// An operator between functional semimodules loaded from JSON.
pub struct IkOperator {
    op: Operator,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn from_status(s: Status) -> IkStatus {
    match s {
        Status::Ok => IkStatus::Ok,
        Status::Negative => IkStatus::VerdictNegative,
        Status::InputError => IkStatus::InvalidInput,
        Status::InternalInconsistency => IkStatus::InternalInconsistency,
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

fn guard(body: impl FnOnce() -> Result<IkStatus, Failure>) -> IkStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure::Null(what))) => {
            set_error(&format!("null pointer: {what}"));
            IkStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(&e.to_string());
            IkStatus::InvalidInput
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("panic: {msg}"));
            IkStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Lib(Error::Input(format!("{what} is not UTF-8"))))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("interior NULs removed")
        .into_raw()
}

/// Message for the last failure on this thread; empty if none. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ik_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ik_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ik_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a semimodule file.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ik_semimodule_from_json(json: *const c_char, out: *mut *mut IkSemimodule) -> IkStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let space = SemimoduleFile::parse(text)?.load()?.space;
        write_out(out, Box::into_raw(Box::new(IkSemimodule { space })), "out")?;
        Ok(IkStatus::Ok)
    })
}

/// # Safety
/// `m` must be null or a handle from [`ik_semimodule_from_json`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ik_semimodule_free(m: *mut IkSemimodule) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of points of the underlying set `X`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ik_semimodule_dim(m: *const IkSemimodule, out: *mut usize) -> IkStatus {
    guard(|| {
        let m = m.as_ref().ok_or(Failure::Null("semimodule"))?;
        write_out(out, m.space.dim(), "out")?;
        Ok(IkStatus::Ok)
    })
}

/// Carrier size; `InvalidInput` for a full space over an infinite semiring
/// or one larger than the enumeration cap.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ik_semimodule_len(m: *const IkSemimodule, out: *mut usize) -> IkStatus {
    guard(|| {
        let m = m.as_ref().ok_or(Failure::Null("semimodule"))?;
        let len = m.space.require_module(FULL_CARRIER_CAP)?.len();
        write_out(out, len, "out")?;
        Ok(IkStatus::Ok)
    })
}

/// Whether the internal join is the pointwise one.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ik_semimodule_is_b_subsemimodule(m: *const IkSemimodule, out: *mut bool) -> IkStatus {
    guard(|| {
        let m = m.as_ref().ok_or(Failure::Null("semimodule"))?;
        write_out(out, m.space.is_b_subsemimodule(), "out")?;
        Ok(IkStatus::Ok)
    })
}

/// Whether the identity of the semimodule is integral. Returns
/// `VerdictNegative` (with `*holds = false`) when it is not.
///
/// # Safety
/// `m` must be a live handle; `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ik_semimodule_identity_integral(m: *const IkSemimodule, holds: *mut bool) -> IkStatus {
    guard(|| {
        let m = m.as_ref().ok_or(Failure::Null("semimodule"))?;
        let v = has_integral_representation(&Operator::identity(m.space.clone()))?;
        write_out(holds, v.integral, "holds")?;
        Ok(if v.integral {
            IkStatus::Ok
        } else {
            IkStatus::VerdictNegative
        })
    })
}

/// Loads an operator file.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ik_operator_from_json(json: *const c_char, out: *mut *mut IkOperator) -> IkStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let op = OperatorFile::parse(text)?.load()?;
        write_out(out, Box::into_raw(Box::new(IkOperator { op })), "out")?;
        Ok(IkStatus::Ok)
    })
}

/// # Safety
/// `op` must be null or a handle from [`ik_operator_from_json`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ik_operator_free(op: *mut IkOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// The maximal kernel as a kernel file. Returns `VerdictNegative` when the
/// operator has no integral representation; the kernel written is then the
/// residual candidate that fails.
///
/// # Safety
/// `op` must be a live handle; `kernel_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ik_operator_max_kernel(op: *const IkOperator, kernel_json: *mut *mut c_char) -> IkStatus {
    guard(|| {
        let op = op.as_ref().ok_or(Failure::Null("operator"))?;
        if kernel_json.is_null() {
            return Err(Failure::Null("kernel_json"));
        }
        let v = has_integral_representation(&op.op)?;
        let text = serde_json::to_string(&KernelFile::of(&v.kernel)).map_err(Error::from)?;
        write_out(kernel_json, into_c_string(text), "kernel_json")?;
        Ok(if v.integral {
            IkStatus::Ok
        } else {
            IkStatus::VerdictNegative
        })
    })
}

/// Runs a command on JSON input and writes its JSON output, with the same
/// status the command-line tool would exit with. Commands: `axioms`,
/// `kernel-extract`, `kernel-decide`, `delta-enum`, `shortest-path`,
/// `viterbi`, `conv`. `seed` is used by `axioms`.
///
/// # Safety
/// `command` and `input` must be NUL-terminated strings; `output` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ik_run(
    command: *const c_char,
    input: *const c_char,
    seed: u64,
    output: *mut *mut c_char,
) -> IkStatus {
    guard(|| {
        let command = read_str(command, "command")?;
        let input = read_str(input, "input")?;
        if output.is_null() {
            return Err(Failure::Null("output"));
        }
        let result = match command {
            "axioms" => cli::axioms(input, cli::DEFAULT_AXIOM_BUDGET, seed),
            "kernel-extract" => cli::kernel_extract(input),
            "kernel-decide" => cli::kernel_decide(input),
            "delta-enum" => cli::delta_enum(input, FULL_CARRIER_CAP, WitnessRule::Any),
            "shortest-path" => cli::app_shortest_path(input),
            "viterbi" => cli::app_viterbi(input),
            "conv" => cli::app_conv(input),
            other => Err(Error::Input(format!("unknown command `{other}`"))),
        }?;
        write_out(output, into_c_string(result.json), "output")?;
        Ok(from_status(result.status))
    })
}
