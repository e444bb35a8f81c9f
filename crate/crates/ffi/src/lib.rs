//! C ABI for `xisim-core`.
//!
//! Every fallible function returns an [`XisimStatus`] and writes results
//! through out-pointers. On failure the thread's last error message is set;
//! fetch it with [`xisim_last_error_message`]. Handles and strings returned
//! by this library must be released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use xisim_core::algorithms::{
    np_search, search_via_counting_traced, sharp_p_count, Limits, OracleFunction,
};
use xisim_core::causal::bell::{
    classical_chsh_max, pr_box_distribution, quantum_bell_distribution, BellScenario,
    MeasurementAngles, Resource,
};
use xisim_core::causal::{chsh_value, CausalModel};
use xisim_core::error::{AlgorithmError, Error, FormatError, GateError, StateError};
use xisim_core::format;
use xisim_core::nonlinear::{signaling_advantage, LocalAction};
use xisim_core::statevector::{gates, SparseState};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XisimStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    /// Input outside an operation's domain.
    Domain = 5,
    TooLarge = 6,
    NotLocallyApplicable = 7,
    /// Search ended with several candidate solutions.
    MultipleSolutions = 8,
    Internal = 9,
}

/// Shared resource for [`xisim_chsh`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XisimResource {
    Classical = 0,
    Quantum = 1,
    PrBox = 2,
}

/// Alice's action for [`xisim_bell_signaling_advantage`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XisimAction {
    Identity = 0,
    PauliX = 1,
    Hadamard = 2,
    Weinberg = 3,
}

/// Opaque truth-table oracle.
pub struct XisimOracle(OracleFunction);

/// Opaque causal model.
pub struct XisimModel(CausalModel);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', "?")).expect("interior NULs were replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(XisimStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Format(_) | Error::Io { .. } => XisimStatus::Parse,
            Error::Algorithm(AlgorithmError::TooLarge { .. })
            | Error::State(StateError::TooManyQubits { .. }) => XisimStatus::TooLarge,
            Error::Algorithm(AlgorithmError::MultipleSolutionOutcome { .. }) => {
                XisimStatus::MultipleSolutions
            }
            Error::Gate(GateError::NotLocallyApplicable(_)) => XisimStatus::NotLocallyApplicable,
            Error::Gate(GateError::GateDomain(_)) => XisimStatus::Domain,
            Error::Algorithm(AlgorithmError::Invariant(_)) => XisimStatus::Internal,
            _ => XisimStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

macro_rules! impl_failure_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Error::from(e).into()
            }
        }
    )*};
}
impl_failure_from!(AlgorithmError, GateError, StateError, FormatError, xisim_core::error::CausalError);

fn null(what: &str) -> Failure {
    Failure(XisimStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> XisimStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => XisimStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            XisimStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(XisimStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn names(list: &str) -> Vec<&str> {
    list.split([',', ' ']).filter(|s| !s.is_empty()).collect()
}

/// Message of the last failed call on this thread, or NULL. Free with [`xisim_string_free`].
#[no_mangle]
pub extern "C" fn xisim_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn xisim_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn xisim_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses an oracle file (`n=<int>` then one satisfying bit string per line).
///
/// # Safety
/// `source` must be a NUL-terminated string and `out_oracle` writable.
#[no_mangle]
pub unsafe extern "C" fn xisim_oracle_parse(
    source: *const c_char,
    out_oracle: *mut *mut XisimOracle,
) -> XisimStatus {
    guard(|| {
        let slot = out(out_oracle, "out_oracle")?;
        let oracle = format::parse_oracle(text(source, "source")?)?;
        *slot = Box::into_raw(Box::new(XisimOracle(oracle)));
        Ok(())
    })
}

/// Builds an oracle from `2^n` truth-table bytes (nonzero means satisfied).
///
/// # Safety
/// `table` must point to `len` readable bytes and `out_oracle` be writable.
#[no_mangle]
pub unsafe extern "C" fn xisim_oracle_from_table(
    n: usize,
    table: *const u8,
    len: usize,
    out_oracle: *mut *mut XisimOracle,
) -> XisimStatus {
    guard(|| {
        let slot = out(out_oracle, "out_oracle")?;
        if table.is_null() {
            return Err(null("table"));
        }
        let bits = std::slice::from_raw_parts(table, len).iter().map(|&b| b != 0).collect();
        *slot = Box::into_raw(Box::new(XisimOracle(OracleFunction::new(n, bits)?)));
        Ok(())
    })
}

/// # Safety
/// `oracle` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn xisim_oracle_free(oracle: *mut XisimOracle) {
    if !oracle.is_null() {
        drop(Box::from_raw(oracle));
    }
}

/// Marker-mode search. `found` is false when the oracle has no solution.
///
/// # Safety
/// `oracle` must be a live handle; out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn xisim_np_search(
    oracle: *const XisimOracle,
    out_found: *mut bool,
    out_solution: *mut u64,
    out_gate_applications: *mut usize,
) -> XisimStatus {
    guard(|| {
        let o = handle(oracle, "oracle")?;
        let (found, solution, apps) = (
            out(out_found, "out_found")?,
            out(out_solution, "out_solution")?,
            out(out_gate_applications, "out_gate_applications")?,
        );
        let res = np_search(&o.0)?;
        *found = res.solution.is_some();
        *solution = res.solution.unwrap_or(0);
        *apps = res.gate_applications;
        Ok(())
    })
}

/// Number of satisfying inputs.
///
/// # Safety
/// `oracle` must be a live handle; `out_count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xisim_sharp_p_count(
    oracle: *const XisimOracle,
    out_count: *mut u64,
) -> XisimStatus {
    guard(|| {
        let o = handle(oracle, "oracle")?;
        let count = out(out_count, "out_count")?;
        *count = sharp_p_count(&o.0)?;
        Ok(())
    })
}

/// Smallest solution by prefix descent on counts.
///
/// # Safety
/// `oracle` must be a live handle; out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn xisim_search_via_counting(
    oracle: *const XisimOracle,
    out_found: *mut bool,
    out_solution: *mut u64,
    out_counting_calls: *mut usize,
) -> XisimStatus {
    guard(|| {
        let o = handle(oracle, "oracle")?;
        let (found, solution, calls) = (
            out(out_found, "out_found")?,
            out(out_solution, "out_solution")?,
            out(out_counting_calls, "out_counting_calls")?,
        );
        let res = search_via_counting_traced(&o.0, Limits::default())?;
        *found = res.solution.is_some();
        *solution = res.solution.unwrap_or(0);
        *calls = res.counting_calls;
        Ok(())
    })
}

/// Parses a causal model file.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out_model` writable.
#[no_mangle]
pub unsafe extern "C" fn xisim_model_parse(
    source: *const c_char,
    out_model: *mut *mut XisimModel,
) -> XisimStatus {
    guard(|| {
        let slot = out(out_model, "out_model")?;
        let model = format::parse_model(text(source, "source")?)?;
        *slot = Box::into_raw(Box::new(XisimModel(model)));
        Ok(())
    })
}

/// Serializes a model; free the result with [`xisim_string_free`]. NULL on a NULL handle.
///
/// # Safety
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn xisim_model_to_string(model: *const XisimModel) -> *mut c_char {
    match model.as_ref() {
        Some(m) => CString::new(format::write_model(&m.0))
            .map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `model` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn xisim_model_free(model: *mut XisimModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// d-separation of comma-separated node lists; `l` may be empty.
///
/// # Safety
/// `model` must be a live handle, the lists NUL-terminated strings and
/// `out_separated` writable.
#[no_mangle]
pub unsafe extern "C" fn xisim_d_separated(
    model: *const XisimModel,
    j: *const c_char,
    k: *const c_char,
    l: *const c_char,
    out_separated: *mut bool,
) -> XisimStatus {
    guard(|| {
        let m = handle(model, "model")?;
        let sep = out(out_separated, "out_separated")?;
        let (j, k, l) = (text(j, "j")?, text(k, "k")?, text(l, "l")?);
        *sep = m.0.dag().d_separated(&names(j), &names(k), &names(l))?;
        Ok(())
    })
}

/// CHSH value for a resource. `angles` holds Alice's two angles then Bob's
/// and is read only for the quantum resource; NULL selects the Tsirelson angles.
///
/// # Safety
/// `angles` must be NULL or point to 4 doubles; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xisim_chsh(
    resource: XisimResource,
    angles: *const f64,
    out_value: *mut f64,
) -> XisimStatus {
    guard(|| {
        let value = out(out_value, "out_value")?;
        *value = match resource {
            XisimResource::Classical => {
                classical_chsh_max(&BellScenario::new(Resource::SharedRandomness))?
            }
            XisimResource::PrBox => chsh_value(&pr_box_distribution()),
            XisimResource::Quantum => {
                let a = if angles.is_null() {
                    MeasurementAngles::tsirelson()
                } else {
                    let a = std::slice::from_raw_parts(angles, 4);
                    MeasurementAngles {
                        alice: [a[0], a[1]],
                        bob: [a[2], a[3]],
                    }
                };
                chsh_value(&quantum_bell_distribution(&BellScenario::quantum(a))?)
            }
        };
        Ok(())
    })
}

/// Trace distance between Bob's states before and after Alice acts on her
/// half of `(|00⟩ + |11⟩)/√2`.
///
/// # Safety
/// `out_distance` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xisim_bell_signaling_advantage(
    action: XisimAction,
    out_distance: *mut f64,
) -> XisimStatus {
    guard(|| {
        let d = out(out_distance, "out_distance")?;
        let act = match action {
            XisimAction::Identity => LocalAction::Identity,
            XisimAction::PauliX => LocalAction::unitary(gates::pauli_x(), &[0]),
            XisimAction::Hadamard => LocalAction::unitary(gates::hadamard(), &[0]),
            XisimAction::Weinberg => LocalAction::Weinberg { qubit: 0 },
        };
        let bell = SparseState::bell_pair(2, 0, 1)?;
        *d = signaling_advantage(&bell, &[0], &[1], &act)?;
        Ok(())
    })
}
