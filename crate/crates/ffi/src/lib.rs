//! C ABI for `crowdperm`.
//!
//! Matrices and instances cross the boundary as opaque handles created by a
//! `*_new` function and released with the matching `*_free`. Every fallible
//! call returns a [`CpStatus`]; on failure a message for the calling thread
//! is available from [`cp_last_error_message`]. Output buffers are caller
//! allocated and their lengths are checked.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use crowdperm::model::{
    classify_matrix, estimate_pobs, Answers, ProbabilityMatrix, ResponseMatrix, TruthInstance,
};
use crowdperm::scenarios::{build, ScenarioKind, ScenarioSpec, TruthMode};
use crowdperm::spectral::{top_eigenvector, WorkerOrdering};
use crowdperm::{
    collective_intelligence, hamming, majority_vote, obi_wan, qstar_loss, sample_responses, wan,
    Error,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotConverged = 4,
    SizeCapExceeded = 5,
    Unsatisfiable = 6,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpScenario {
    Easy = 0,
    FewSmart = 1,
    Adversarial = 2,
    PermNotInt = 3,
    MinimaxLb = 4,
    SuperSparse = 5,
    GhoshHard = 6,
    ZhangHard = 7,
    MvLowerBound = 8,
}

impl From<CpScenario> for ScenarioKind {
    fn from(s: CpScenario) -> Self {
        match s {
            CpScenario::Easy => ScenarioKind::Easy,
            CpScenario::FewSmart => ScenarioKind::FewSmart,
            CpScenario::Adversarial => ScenarioKind::Adversarial,
            CpScenario::PermNotInt => ScenarioKind::PermNotInt,
            CpScenario::MinimaxLb => ScenarioKind::MinimaxLB,
            CpScenario::SuperSparse => ScenarioKind::SuperSparse,
            CpScenario::GhoshHard => ScenarioKind::GhoshHard,
            CpScenario::ZhangHard => ScenarioKind::ZhangHard,
            CpScenario::MvLowerBound => ScenarioKind::MvLowerBound,
        }
    }
}

/// Opaque probability matrix.
pub struct CpProbabilityMatrix(ProbabilityMatrix);

/// Opaque response matrix.
pub struct CpResponseMatrix(ResponseMatrix);

/// Opaque ground-truth instance.
pub struct CpInstance(TruthInstance);

/// Model-class membership flags.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CpClassReport {
    pub in_ds: bool,
    pub in_int: bool,
    pub in_perm: bool,
}

/// Result of the windowing step.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CpWanInfo {
    pub k_wan: usize,
    pub window_floor: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> CpStatus {
    match err {
        Error::Mismatch { .. } | Error::Dimension(_) => CpStatus::DimensionMismatch,
        Error::EigenNotConverged { .. } | Error::ProjectionNotConverged { .. } => {
            CpStatus::NotConverged
        }
        Error::SizeCapExceeded { .. } => CpStatus::SizeCapExceeded,
        Error::Scenario(_) => CpStatus::Unsatisfiable,
        _ => CpStatus::InvalidArgument,
    }
}

struct Fail(CpStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

type Outcome = Result<(), Fail>;

fn guard(f: impl FnOnce() -> Outcome) -> CpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CpStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CpStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(CpStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn input<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn output<'a, T>(
    p: *mut T,
    len: usize,
    want: usize,
    what: &str,
) -> Result<&'a mut [T], Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    if len != want {
        return Err(Fail(
            CpStatus::DimensionMismatch,
            format!("`{what}` holds {len} values, {want} required"),
        ));
    }
    Ok(slice::from_raw_parts_mut(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates an `n x d` probability matrix from row-major `entries`.
/// Entries must be in `[0.5, 1]`, or `[0, 1]` when `allow_adversarial`.
///
/// # Safety
/// `entries` must point to `n * d` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_probability_matrix_new(
    n: usize,
    d: usize,
    entries: *const f64,
    allow_adversarial: bool,
    out: *mut *mut CpProbabilityMatrix,
) -> CpStatus {
    guard(|| {
        let e = input(entries, n.saturating_mul(d), "entries")?.to_vec();
        let q = if allow_adversarial {
            ProbabilityMatrix::adversarial(n, d, e)?
        } else {
            ProbabilityMatrix::new(n, d, e)?
        };
        emit(out, CpProbabilityMatrix(q))
    })
}

/// # Safety
/// `q` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cp_probability_matrix_free(q: *mut CpProbabilityMatrix) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// # Safety
/// `entries` must point to `n * d` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_response_matrix_new(
    n: usize,
    d: usize,
    entries: *const i8,
    out: *mut *mut CpResponseMatrix,
) -> CpStatus {
    guard(|| {
        let e = input(entries, n.saturating_mul(d), "entries")?.to_vec();
        emit(out, CpResponseMatrix(ResponseMatrix::new(n, d, e)?))
    })
}

/// # Safety
/// `y` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cp_response_matrix_free(y: *mut CpResponseMatrix) {
    if !y.is_null() {
        drop(Box::from_raw(y));
    }
}

/// # Safety
/// `y` must be a live handle; `n` and `d` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_response_matrix_dims(
    y: *const CpResponseMatrix,
    n: *mut usize,
    d: *mut usize,
) -> CpStatus {
    guard(|| {
        let y = &handle(y, "y")?.0;
        if n.is_null() || d.is_null() {
            return Err(null("n/d"));
        }
        *n = y.n();
        *d = y.d();
        Ok(())
    })
}

/// Copies the row-major entries of `y` into `buf` (`len` must be `n * d`).
///
/// # Safety
/// `y` must be a live handle; `buf` must hold `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cp_response_matrix_copy(
    y: *const CpResponseMatrix,
    buf: *mut i8,
    len: usize,
) -> CpStatus {
    guard(|| {
        let y = &handle(y, "y")?.0;
        output(buf, len, y.entries().len(), "buf")?.copy_from_slice(y.entries());
        Ok(())
    })
}

/// Ground truth from a probability matrix (copied), answers in `{-1, +1}`
/// and `p_obs ∈ (0, 1]`.
///
/// # Safety
/// `q` must be a live handle; `truth` must hold `d` readable bytes.
#[no_mangle]
pub unsafe extern "C" fn cp_instance_new(
    q: *const CpProbabilityMatrix,
    truth: *const i8,
    d: usize,
    p_obs: f64,
    out: *mut *mut CpInstance,
) -> CpStatus {
    guard(|| {
        let q = handle(q, "q")?.0.clone();
        let x = Answers::new(input(truth, d, "truth")?.to_vec())?;
        emit(out, CpInstance(TruthInstance::new(q, x, p_obs)?))
    })
}

/// Builds a simulation scenario. `random_truth` draws answers from
/// `truth_seed`; otherwise they are all `+1` (all `-1` for the
/// majority-vote lower-bound construction).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_scenario_build(
    kind: CpScenario,
    n: usize,
    d: usize,
    p_obs: f64,
    random_truth: bool,
    truth_seed: u64,
    out: *mut *mut CpInstance,
) -> CpStatus {
    guard(|| {
        let mode = if random_truth {
            TruthMode::Random(truth_seed)
        } else {
            TruthMode::AllPlusOne
        };
        let inst = build(&ScenarioSpec::new(kind.into(), n, d, p_obs, mode))?;
        emit(out, CpInstance(inst))
    })
}

/// # Safety
/// `inst` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cp_instance_free(inst: *mut CpInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Copies the true answers of `inst` into `buf` (`len` must be `d`).
///
/// # Safety
/// `inst` must be a live handle; `buf` must hold `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cp_instance_truth(
    inst: *const CpInstance,
    buf: *mut i8,
    len: usize,
) -> CpStatus {
    guard(|| {
        let inst = &handle(inst, "inst")?.0;
        output(buf, len, inst.truth().len(), "buf")?.copy_from_slice(inst.truth());
        Ok(())
    })
}

/// New handle holding a copy of the instance's probability matrix.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_instance_matrix(
    inst: *const CpInstance,
    out: *mut *mut CpProbabilityMatrix,
) -> CpStatus {
    guard(|| {
        let q = handle(inst, "inst")?.0.q().clone();
        emit(out, CpProbabilityMatrix(q))
    })
}

/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_sample_responses(
    inst: *const CpInstance,
    seed: u64,
    out: *mut *mut CpResponseMatrix,
) -> CpStatus {
    guard(|| {
        let inst = &handle(inst, "inst")?.0;
        emit(out, CpResponseMatrix(sample_responses(inst, seed)))
    })
}

/// # Safety
/// `y` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_estimate_pobs(y: *const CpResponseMatrix, out: *mut f64) -> CpStatus {
    guard(|| {
        let y = &handle(y, "y")?.0;
        *output(out, 1, 1, "out")?.first_mut().expect("one slot") = estimate_pobs(y);
        Ok(())
    })
}

/// # Safety
/// `q` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_classify_matrix(
    q: *const CpProbabilityMatrix,
    tol: f64,
    out: *mut CpClassReport,
) -> CpStatus {
    guard(|| {
        let r = classify_matrix(&handle(q, "q")?.0, tol)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = CpClassReport {
            in_ds: r.in_ds,
            in_int: r.in_int,
            in_perm: r.in_perm,
        };
        Ok(())
    })
}

/// # Safety
/// `y` must be a live handle; `answers` must hold `len == d` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cp_majority_vote(
    y: *const CpResponseMatrix,
    answers: *mut i8,
    len: usize,
) -> CpStatus {
    guard(|| {
        let y = &handle(y, "y")?.0;
        output(answers, len, y.d(), "answers")?.copy_from_slice(&majority_vote(y));
        Ok(())
    })
}

/// WAN with a caller-supplied worker ordering (`order[k]` is the worker at
/// rank `k`, best first).
///
/// # Safety
/// `y` must be a live handle; `order` must hold `n` readable values;
/// `answers` must hold `len == d` writable bytes; `info` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn cp_wan(
    y: *const CpResponseMatrix,
    order: *const usize,
    n: usize,
    p_obs: f64,
    answers: *mut i8,
    len: usize,
    info: *mut CpWanInfo,
) -> CpStatus {
    guard(|| {
        let y = &handle(y, "y")?.0;
        let ordering = WorkerOrdering::new(input(order, n, "order")?.to_vec())?;
        let dst = output(answers, len, y.d(), "answers")?;
        let res = wan(y, &ordering, p_obs)?;
        dst.copy_from_slice(&res.answers);
        if let Some(info) = info.as_mut() {
            *info = CpWanInfo {
                k_wan: res.k_wan,
                window_floor: res.window_floor,
            };
        }
        Ok(())
    })
}

/// # Safety
/// `y` must be a live handle; `answers` must hold `len == d` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cp_obi_wan(
    y: *const CpResponseMatrix,
    p_obs: f64,
    seed: u64,
    answers: *mut i8,
    len: usize,
) -> CpStatus {
    guard(|| {
        let y = &handle(y, "y")?.0;
        let dst = output(answers, len, y.d(), "answers")?;
        dst.copy_from_slice(&obi_wan(y, p_obs, seed)?);
        Ok(())
    })
}

/// Top eigenvector of `Y Yᵀ` (sign resolved) into `vector` (`len == n`).
/// On `NOT_CONVERGED` the last iterate is still written.
///
/// # Safety
/// `y` must be a live handle; `vector` must hold `len` writable doubles;
/// `eigenvalue` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn cp_top_eigenvector(
    y: *const CpResponseMatrix,
    tol: f64,
    max_iter: usize,
    vector: *mut f64,
    len: usize,
    eigenvalue: *mut f64,
) -> CpStatus {
    guard(|| {
        let y = &handle(y, "y")?.0;
        let dst = output(vector, len, y.n(), "vector")?;
        match top_eigenvector(y, tol, max_iter) {
            Ok(top) => {
                dst.copy_from_slice(&top.vector);
                if let Some(l) = eigenvalue.as_mut() {
                    *l = top.eigenvalue;
                }
                Ok(())
            }
            Err(e) => {
                if let Error::EigenNotConverged { last_vector, .. } = &e {
                    dst.copy_from_slice(last_vector);
                }
                Err(e.into())
            }
        }
    })
}

/// # Safety
/// `a` and `b` must each hold `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_hamming(
    a: *const i8,
    b: *const i8,
    len: usize,
    out: *mut f64,
) -> CpStatus {
    guard(|| {
        let v = hamming(input(a, len, "a")?, input(b, len, "b")?)?.value();
        *out.as_mut().ok_or_else(|| null("out"))? = v;
        Ok(())
    })
}

/// # Safety
/// `q` must be a live handle; `a` and `b` must each hold `len` readable
/// bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_qstar_loss(
    q: *const CpProbabilityMatrix,
    a: *const i8,
    b: *const i8,
    len: usize,
    out: *mut f64,
) -> CpStatus {
    guard(|| {
        let q = &handle(q, "q")?.0;
        let v = qstar_loss(q, input(a, len, "a")?, input(b, len, "b")?)?.value();
        *out.as_mut().ok_or_else(|| null("out"))? = v;
        Ok(())
    })
}

/// # Safety
/// `w` must hold `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_collective_intelligence(
    w: *const f64,
    len: usize,
    out: *mut f64,
) -> CpStatus {
    guard(|| {
        let v = collective_intelligence(input(w, len, "w")?)?;
        *out.as_mut().ok_or_else(|| null("out"))? = v;
        Ok(())
    })
}
