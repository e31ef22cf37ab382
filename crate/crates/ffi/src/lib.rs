//! C ABI over the `qcomm` library.
//!
//! Objects are opaque handles created by `*_new`/`*_load`/`*_compute`
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`QcommStatus`]; on failure the message is available from
//! [`qcomm_last_error_message`] on the same thread. Matrices are dense and
//! row-major.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qcomm::closeness::{Measure, NodeCloseness, PhaseVector, Regime};
use qcomm::hermitian::HermitianMatrix;
use qcomm::network_lab::{load_hamiltonian, save_hamiltonian, toy_hamiltonian, ToyConfig, ToyVariant};
use qcomm::partitioning::{modularity, nmi, signed_modularity, Partition};
use qcomm::pipeline::{closeness, detect, Detection, MeasureSpec};
use qcomm::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcommStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Io = 4,
    Numerical = 5,
    Panic = 6,
}

/// Closeness measure. Passing a value outside the declared variants is undefined behaviour.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcommMeasure {
    Transport = 0,
    Fidelity = 1,
    FidelityPhaseAvg = 2,
    Purity = 3,
    PurityPhaseAvg = 4,
}

/// Time regime. Passing a value outside the declared variants is undefined behaviour.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcommRegime {
    Short = 0,
    /// Average over `[0, t]`; uses the `t` argument.
    Finite = 1,
    Infinite = 2,
}

/// Opaque Hermitian Hamiltonian.
pub struct QcommHamiltonian(HermitianMatrix);

/// Opaque node closeness matrix.
pub struct QcommCloseness(NodeCloseness);

/// Opaque detection result: best partition and its modularity.
pub struct QcommDetection(Detection);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QcommStatus {
    match e {
        Error::Parse { .. } => QcommStatus::Parse,
        Error::Io { .. } => QcommStatus::Io,
        e if e.is_numerical() => QcommStatus::Numerical,
        _ => QcommStatus::InvalidArgument,
    }
}

struct Fail(QcommStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(QcommStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(QcommStatus::InvalidArgument, msg.into())
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> QcommStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            QcommStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QcommStatus::Panic
        }
    }
}

unsafe fn path_arg<'a>(path: *const c_char) -> Result<&'a str, Fail> {
    if path.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(path)
        .to_str()
        .map_err(|_| invalid("path is not valid UTF-8"))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn measure_spec(measure: QcommMeasure, regime: QcommRegime, t: f64) -> MeasureSpec {
    let measure = match measure {
        QcommMeasure::Transport => Measure::Transport,
        QcommMeasure::Fidelity => Measure::Fidelity,
        QcommMeasure::FidelityPhaseAvg => Measure::FidelityPhaseAvg,
        QcommMeasure::Purity => Measure::Purity,
        QcommMeasure::PurityPhaseAvg => Measure::PurityPhaseAvg,
    };
    let regime = match regime {
        QcommRegime::Short => Regime::Short,
        QcommRegime::Finite => Regime::Finite(t),
        QcommRegime::Infinite => Regime::Infinite,
    };
    MeasureSpec::new(measure, regime)
}

unsafe fn spec_with_phases(
    h: &HermitianMatrix,
    measure: QcommMeasure,
    regime: QcommRegime,
    t: f64,
    phases: *const f64,
) -> MeasureSpec {
    let spec = measure_spec(measure, regime, t);
    if phases.is_null() {
        spec
    } else {
        let thetas = std::slice::from_raw_parts(phases, h.n()).to_vec();
        spec.with_phases(PhaseVector::new(thetas))
    }
}

fn copy_row_major(c: &NodeCloseness, out: &mut [f64]) {
    let n = c.n();
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = c.get(i, j);
        }
    }
}

/// Creates a Hamiltonian from `n*n` row-major entries. `imag` may be null for
/// a real matrix. The matrix must be Hermitian within `tol`.
///
/// # Safety
/// `real` (and `imag`, if non-null) must point to `n*n` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn qcomm_hamiltonian_new(
    n: usize,
    real: *const f64,
    imag: *const f64,
    tol: f64,
    out: *mut *mut QcommHamiltonian,
) -> QcommStatus {
    guard(|| {
        if real.is_null() {
            return Err(null("real"));
        }
        if n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        let len = n.checked_mul(n).ok_or_else(|| invalid("n is too large"))?;
        let re = std::slice::from_raw_parts(real, len);
        let im = (!imag.is_null()).then(|| std::slice::from_raw_parts(imag, len));
        let h = HermitianMatrix::from_row_major(n, re, im, tol)?;
        write_out(out, QcommHamiltonian(h))
    })
}

/// Loads a Hamiltonian from a JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcomm_hamiltonian_load(path: *const c_char, out: *mut *mut QcommHamiltonian) -> QcommStatus {
    guard(|| {
        let h = load_hamiltonian(path_arg(path)?)?;
        write_out(out, QcommHamiltonian(h))
    })
}

/// Writes a Hamiltonian as JSON.
///
/// # Safety
/// `h` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qcomm_hamiltonian_save(h: *const QcommHamiltonian, path: *const c_char) -> QcommStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("hamiltonian"))?;
        save_hamiltonian(&h.0, path_arg(path)?)?;
        Ok(())
    })
}

/// One of the six-node toy networks, `variant` in `'a'..='i'`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcomm_hamiltonian_toy(
    variant: c_char,
    seed: u64,
    out: *mut *mut QcommHamiltonian,
) -> QcommStatus {
    guard(|| {
        let letter = (variant as u8 as char).to_string();
        let v: ToyVariant = letter.parse()?;
        write_out(out, QcommHamiltonian(toy_hamiltonian(&ToyConfig::new(v, seed))))
    })
}

/// Node count, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcomm_hamiltonian_n(h: *const QcommHamiltonian) -> usize {
    h.as_ref().map_or(0, |h| h.0.n())
}

/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qcomm_hamiltonian_free(h: *mut QcommHamiltonian) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Computes a node closeness matrix. `t` is read only for the finite regime;
/// `phases` may be null (all zero) or point to `n` angles.
///
/// # Safety
/// `h` must be a live handle; `phases` null or `n` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn qcomm_closeness_compute(
    h: *const QcommHamiltonian,
    measure: QcommMeasure,
    regime: QcommRegime,
    t: f64,
    phases: *const f64,
    out: *mut *mut QcommCloseness,
) -> QcommStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("hamiltonian"))?;
        let spec = spec_with_phases(&h.0, measure, regime, t, phases);
        write_out(out, QcommCloseness(closeness(&h.0, &spec)?))
    })
}

/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcomm_closeness_n(c: *const QcommCloseness) -> usize {
    c.as_ref().map_or(0, |c| c.0.n())
}

/// Copies the `n*n` entries row-major into `buf` of length `len`.
///
/// # Safety
/// `c` must be a live handle and `buf` must have `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qcomm_closeness_copy(c: *const QcommCloseness, buf: *mut f64, len: usize) -> QcommStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("closeness"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let n = c.0.n();
        if len < n * n {
            return Err(invalid(format!("buffer holds {len} values, need {}", n * n)));
        }
        copy_row_major(&c.0, std::slice::from_raw_parts_mut(buf, n * n));
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qcomm_closeness_free(c: *mut QcommCloseness) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Full pipeline: closeness, agglomeration and best modularity level.
///
/// # Safety
/// As for [`qcomm_closeness_compute`].
#[no_mangle]
pub unsafe extern "C" fn qcomm_detect(
    h: *const QcommHamiltonian,
    measure: QcommMeasure,
    regime: QcommRegime,
    t: f64,
    phases: *const f64,
    out: *mut *mut QcommDetection,
) -> QcommStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("hamiltonian"))?;
        let spec = spec_with_phases(&h.0, measure, regime, t, phases);
        write_out(out, QcommDetection(detect(&h.0, &spec)?))
    })
}

/// Copies the community label of each node into `labels` (length `len`).
///
/// # Safety
/// `d` must be a live handle and `labels` must have `len` writable slots.
#[no_mangle]
pub unsafe extern "C" fn qcomm_detection_labels(
    d: *const QcommDetection,
    labels: *mut usize,
    len: usize,
) -> QcommStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| null("detection"))?;
        if labels.is_null() {
            return Err(null("labels"));
        }
        let src = d.0.partition.labels();
        if len < src.len() {
            return Err(invalid(format!("buffer holds {len} labels, need {}", src.len())));
        }
        ptr::copy_nonoverlapping(src.as_ptr(), labels, src.len());
        Ok(())
    })
}

/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcomm_detection_num_communities(d: *const QcommDetection) -> usize {
    d.as_ref().map_or(0, |d| d.0.partition.num_communities())
}

/// # Safety
/// `d` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qcomm_detection_modularity(d: *const QcommDetection, out: *mut f64) -> QcommStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| null("detection"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = d.0.modularity;
        Ok(())
    })
}

/// # Safety
/// `d` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qcomm_detection_free(d: *mut QcommDetection) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

unsafe fn partition_arg(labels: *const usize, n: usize) -> Result<Partition, Fail> {
    if labels.is_null() {
        return Err(null("labels"));
    }
    Ok(Partition::from_labels(std::slice::from_raw_parts(labels, n))?)
}

/// Normalized mutual information of two labelings of `n` nodes.
///
/// # Safety
/// `x` and `y` must point to `n` readable labels; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcomm_nmi(x: *const usize, y: *const usize, n: usize, out: *mut f64) -> QcommStatus {
    guard(|| {
        let (px, py) = (partition_arg(x, n)?, partition_arg(y, n)?);
        if out.is_null() {
            return Err(null("out"));
        }
        *out = nmi(&px, &py)?;
        Ok(())
    })
}

/// Modularity of a labeling under a closeness matrix; `is_signed` selects the
/// signed variant that accepts negative entries.
///
/// # Safety
/// `c` must be a live handle, `labels` must hold `n` labels, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qcomm_modularity(
    c: *const QcommCloseness,
    labels: *const usize,
    n: usize,
    is_signed: bool,
    out: *mut f64,
) -> QcommStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("closeness"))?;
        let p = partition_arg(labels, n)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = if is_signed {
            signed_modularity(&c.0, &p)?
        } else {
            modularity(&c.0, &p)?
        };
        Ok(())
    })
}

/// Message of the last failed call on this thread, or null if the last call
/// succeeded. Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn qcomm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
