//! C ABI over `qensemble`.
//!
//! Objects are handed out as opaque pointers that must be released with the matching
//! `*_free` function. Every fallible call returns a [`QeStatus`]; on failure a message is
//! available from [`qe_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qensemble::cloning::{flash_experiment, Cloner, CloningChannel, MeasurementSetting};
use qensemble::ensemble::{EnsembleDefinition, Registry};
use qensemble::experiments::{binomial_pmf, discrimination_power, BinomialSpec};
use qensemble::linalg::c;
use qensemble::state::{partial_trace, trace_distance};
use qensemble::{DensityOperator, Ensemble, Error, PureState};

/// Result of an FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NumericalInvariant = 3,
    Panic = 4,
}

/// A preparation procedure for a stream of qubits.
pub struct QeEnsemble(Ensemble);

/// A density operator.
pub struct QeDensity(DensityOperator);

/// A 1 → 2 qubit cloning channel.
pub struct QeCloner(CloningChannel);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Lib(e)
    }
}

fn call(f: impl FnOnce() -> Result<(), Failure>) -> QeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            QeStatus::Ok
        }
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("{what} is null"));
            QeStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            if e.is_numerical() {
                QeStatus::NumericalInvariant
            } else {
                QeStatus::InvalidArgument
            }
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            QeStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn put<T>(out: *mut T, what: &'static str, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_boxed<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure::Lib(Error::InvalidArgument(format!("{what} is not UTF-8"))))
}

/// Message describing the last failed call on this thread, or null if the last call succeeded.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn qe_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Looks up a built-in ensemble (`E1`…`E6`). `n_total` sizes `E5`/`E6` and is ignored otherwise.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qe_ensemble_builtin(
    name: *const c_char,
    n_total: usize,
    out: *mut *mut QeEnsemble,
) -> QeStatus {
    call(|| {
        let name = read_str(name, "name")?;
        let e = Registry::default().get(name, n_total)?;
        put_boxed(out, QeEnsemble(e))
    })
}

/// Builds an ensemble from its JSON definition.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qe_ensemble_from_json(
    json: *const c_char,
    out: *mut *mut QeEnsemble,
) -> QeStatus {
    call(|| {
        let def = EnsembleDefinition::from_json_str(read_str(json, "json")?)?;
        put_boxed(out, QeEnsemble(def.build()?))
    })
}

/// # Safety
/// `e` must be null or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qe_ensemble_free(e: *mut QeEnsemble) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// `⟨Σ_z⟩` and `⟨Σ_z²⟩` over an `m`-particle window.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qe_ensemble_sigma_z_moments(
    e: *const QeEnsemble,
    m: usize,
    mean: *mut f64,
    second_moment: *mut f64,
) -> QeStatus {
    call(|| {
        let moments = get(e, "ensemble")?.0.sigma_z_moments(m)?;
        put(mean, "mean", moments.mean)?;
        put(second_moment, "second_moment", moments.second_moment)
    })
}

/// The one-particle density operator of the ensemble.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qe_ensemble_single_particle_operator(
    e: *const QeEnsemble,
    out: *mut *mut QeDensity,
) -> QeStatus {
    call(|| {
        let rho = get(e, "ensemble")?.0.single_particle_operator();
        put_boxed(out, QeDensity(rho))
    })
}

/// The joint density operator of `m` consecutive particles.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qe_ensemble_window_operator(
    e: *const QeEnsemble,
    m: usize,
    out: *mut *mut QeDensity,
) -> QeStatus {
    call(|| {
        let rho = get(e, "ensemble")?.0.window_operator(m)?;
        put_boxed(out, QeDensity(rho))
    })
}

/// Hilbert-space dimension, or 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qe_density_dim(d: *const QeDensity) -> usize {
    d.as_ref().map_or(0, |d| d.0.dim())
}

/// Reads matrix element `(row, col)`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qe_density_get(
    d: *const QeDensity,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> QeStatus {
    call(|| {
        let d = &get(d, "density")?.0;
        if row >= d.dim() || col >= d.dim() {
            return Err(Error::InvalidArgument(format!(
                "element ({row}, {col}) outside a {0}×{0} operator",
                d.dim()
            ))
            .into());
        }
        let z = d.matrix()[(row, col)];
        put(re, "re", z.re)?;
        put(im, "im", z.im)
    })
}

/// # Safety
/// `d` must be null or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qe_density_free(d: *mut QeDensity) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// `½‖a − b‖₁`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qe_density_trace_distance(
    a: *const QeDensity,
    b: *const QeDensity,
    out: *mut f64,
) -> QeStatus {
    call(|| {
        let dist = trace_distance(&get(a, "a")?.0, &get(b, "b")?.0)?;
        put(out, "out", dist)
    })
}

/// Traces out every subsystem not listed in `keep`.
///
/// # Safety
/// `keep` must point to `n_keep` readable indices; the other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qe_density_partial_trace(
    d: *const QeDensity,
    keep: *const usize,
    n_keep: usize,
    out: *mut *mut QeDensity,
) -> QeStatus {
    call(|| {
        let d = &get(d, "density")?.0;
        if keep.is_null() && n_keep > 0 {
            return Err(Failure::Null("keep"));
        }
        let keep = if n_keep == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(keep, n_keep)
        };
        put_boxed(out, QeDensity(partial_trace(d, keep)?))
    })
}

/// The optimal universal symmetric cloner with blank and ancilla in `|0⟩`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qe_cloner_buzek_hillery(out: *mut *mut QeCloner) -> QeStatus {
    call(|| put_boxed(out, QeCloner(CloningChannel::buzek_hillery_default())))
}

/// The non-physical perfect cloner `|ψ⟩ ↦ |ψ⟩|ψ⟩`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qe_cloner_perfect(out: *mut *mut QeCloner) -> QeStatus {
    call(|| put_boxed(out, QeCloner(CloningChannel::perfect())))
}

/// # Safety
/// `cl` must be null or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qe_cloner_free(cl: *mut QeCloner) {
    if !cl.is_null() {
        drop(Box::from_raw(cl));
    }
}

/// Clones the qubit `amplitudes = [re0, im0, re1, im1]` and returns the joint two-clone state.
///
/// # Safety
/// `amplitudes` must point to four doubles; the other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qe_cloner_clone(
    cl: *const QeCloner,
    amplitudes: *const f64,
    out: *mut *mut QeDensity,
) -> QeStatus {
    call(|| {
        let cl = &get(cl, "cloner")?.0;
        if amplitudes.is_null() {
            return Err(Failure::Null("amplitudes"));
        }
        let a = std::slice::from_raw_parts(amplitudes, 4);
        let psi = PureState::new(vec![c(a[0], a[1]), c(a[2], a[3])])?;
        put_boxed(out, QeDensity(cl.clone_state(&psi)?.joint))
    })
}

/// Trace distance between Bob's two-clone states when Alice measures `σ_φ` and `σ_3`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qe_cloner_flash_distance(
    cl: *const QeCloner,
    phi: f64,
    out: *mut f64,
) -> QeStatus {
    call(|| {
        let cl = &get(cl, "cloner")?.0;
        let r_phi = flash_experiment(cl, MeasurementSetting::SigmaPhi(phi))?;
        let r_3 = flash_experiment(cl, MeasurementSetting::Sigma3)?;
        put(out, "out", trace_distance(&r_phi, &r_3)?)
    })
}

/// `C(n, m) p^m (1−p)^{n−m}`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qe_binomial_pmf(n: u64, m: u64, p: f64, out: *mut f64) -> QeStatus {
    call(|| put(out, "out", binomial_pmf(&BinomialSpec::new(n, m, p)?)))
}

/// Success probability `1 − ½ P(n, n/2, ½)` of the count-based discrimination.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qe_discrimination_power(n: u64, out: *mut f64) -> QeStatus {
    call(|| put(out, "out", discrimination_power(n)?))
}
