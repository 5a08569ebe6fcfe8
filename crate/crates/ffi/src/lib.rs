//! C ABI for `ksat-smj`.
//!
//! Every fallible function returns a [`KsatStatus`] and writes its result
//! through an out-pointer. Objects are opaque handles created by a `*_new`
//! or `*_generate` function and released with the matching `*_free`. The
//! message of the most recent failure on the calling thread is available
//! from [`ksat_last_error_message`].
//!
//! The header `include/ksat_smj.h` is generated by cbindgen at build time.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ksat_smj::analytic;
use ksat_smj::critical::{self, Active, Branch, PhaseDiagram, Tolerances};
use ksat_smj::lab::{self, Assignment, Formula};
use ksat_smj::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KsatStatus {
    Ok = 0,
    InvalidArgument = 1,
    Domain = 2,
    Budget = 3,
    Unproven = 4,
    Numeric = 5,
    NullPointer = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Which local maximum of the rate function is global.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KsatActive {
    S1 = 1,
    S3 = 3,
    Both = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct KsatCriticalPoints {
    pub k: u32,
    pub s01: f64,
    pub s02: f64,
    pub s03: f64,
    pub r_at_s01: f64,
    pub r_at_s03: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct KsatThresholds {
    pub k: u32,
    pub r_cr: f64,
    pub s1cr: f64,
    pub s3cr: f64,
    pub s3cr_complement: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub residual: f64,
}

/// `s_mj` at one ratio. Absent values are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct KsatCurvePoint {
    pub r: f64,
    pub smj: f64,
    pub smj_complement: f64,
    pub smj_alt: f64,
    pub active: KsatActive,
    pub f_s1: f64,
    pub f_s3: f64,
}

/// Opaque handle: critical points and threshold for one clause length.
pub struct KsatPhaseDiagram(PhaseDiagram);

/// Opaque handle: a k-SAT formula.
pub struct KsatFormula(Formula);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> KsatStatus {
    match err {
        Error::InvalidParameter(_) | Error::LengthMismatch { .. } => KsatStatus::InvalidArgument,
        Error::Domain { .. } => KsatStatus::Domain,
        Error::Budget(_) => KsatStatus::Budget,
        Error::Unproven { .. } => KsatStatus::Unproven,
        Error::NotBracketed(_) | Error::Overflow(_) => KsatStatus::Numeric,
    }
}

/// Runs `f`, converting errors and panics into a status and last-error text.
fn guard<F>(f: F) -> KsatStatus
where
    F: FnOnce() -> Result<(), KsatFailure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KsatStatus::Ok,
        Ok(Err(KsatFailure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            KsatStatus::Panic
        }
    }
}

struct KsatFailure(KsatStatus, String);

impl From<Error> for KsatFailure {
    fn from(e: Error) -> Self {
        KsatFailure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> KsatFailure {
    KsatFailure(KsatStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), KsatFailure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, KsatFailure> {
    h.as_ref().ok_or_else(|| null("handle"))
}

/// Length in bytes (without terminator) of the last error message on this
/// thread, or 0 when there is none.
#[no_mangle]
pub extern "C" fn ksat_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(0, |c| c.as_bytes().len()))
}

/// Copies the last error message (NUL-terminated, truncated to fit) into
/// `buf`. Returns the number of bytes written excluding the terminator.
#[no_mangle]
pub unsafe extern "C" fn ksat_last_error_message(buf: *mut c_char, len: usize) -> usize {
    if buf.is_null() || len == 0 {
        return 0;
    }
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_ref().map_or(&[][..], |c| c.as_bytes());
        let n = bytes.len().min(len - 1);
        ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
        *buf.add(n) = 0;
        n
    })
}

/// Rate function `f(s) = h(s) - r·g(s)`.
#[no_mangle]
pub unsafe extern "C" fn ksat_rate_f(k: u32, r: f64, s: f64, out: *mut f64) -> KsatStatus {
    guard(|| {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::Domain {
                what: "s",
                value: s,
                domain: "[0, 1]".into(),
            }
            .into());
        }
        write(out, analytic::rate_f(k, r, s), "out")
    })
}

/// Critical-point curve `r(s)` for `s` in `[0.5, 1)`.
#[no_mangle]
pub unsafe extern "C" fn ksat_r_of_s(k: u32, s: f64, out: *mut f64) -> KsatStatus {
    guard(|| write(out, critical::r_of_s(k, s)?, "out"))
}

/// Per-clause probability that both members of a pair with similarity
/// number `s_num` satisfy a random clause.
#[no_mangle]
pub unsafe extern "C" fn ksat_clause_pair_agreement_probability(
    n: u32,
    k: u32,
    s_num: u32,
    out: *mut f64,
) -> KsatStatus {
    guard(|| write(out, analytic::clause_pair_agreement_probability(n, k, s_num)?, "out"))
}

/// Natural log of the probability that a pair satisfies `m` random clauses.
#[no_mangle]
pub unsafe extern "C" fn ksat_ln_pair_sat_probability(
    n: u32,
    k: u32,
    m: u64,
    s_num: u32,
    out: *mut f64,
) -> KsatStatus {
    guard(|| write(out, analytic::pair_sat_probability_exact(n, k, m, s_num)?.ln(), "out"))
}

/// Natural log of the expected number of satisfying ordered pairs.
#[no_mangle]
pub unsafe extern "C" fn ksat_ln_expected_sat_pairs(
    n: u32,
    k: u32,
    m: u64,
    s_num: u32,
    out: *mut f64,
) -> KsatStatus {
    guard(|| write(out, analytic::expected_sat_pairs_exact(n, k, m, s_num)?.ln(), "out"))
}

/// Builds the phase diagram for `k >= 5`. `tolerance <= 0` selects the
/// defaults (1e-12 in s, 1e-10 in r).
#[no_mangle]
pub unsafe extern "C" fn ksat_phase_diagram_new(
    k: u32,
    tolerance: f64,
    out: *mut *mut KsatPhaseDiagram,
) -> KsatStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let tol = if tolerance > 0.0 {
            Tolerances::uniform(tolerance)?
        } else {
            Tolerances::default()
        };
        let diagram = PhaseDiagram::new(k, tol)?;
        out.write(Box::into_raw(Box::new(KsatPhaseDiagram(diagram))));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ksat_phase_diagram_free(diagram: *mut KsatPhaseDiagram) {
    if !diagram.is_null() {
        drop(Box::from_raw(diagram));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ksat_phase_diagram_critical_points(
    diagram: *const KsatPhaseDiagram,
    out: *mut KsatCriticalPoints,
) -> KsatStatus {
    guard(|| {
        let c = handle(diagram)?.0.critical;
        write(
            out,
            KsatCriticalPoints {
                k: c.k,
                s01: c.s01,
                s02: c.s02,
                s03: c.s03,
                r_at_s01: c.r_at_s01,
                r_at_s03: c.r_at_s03,
            },
            "out",
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn ksat_phase_diagram_thresholds(
    diagram: *const KsatPhaseDiagram,
    out: *mut KsatThresholds,
) -> KsatStatus {
    guard(|| {
        let t = handle(diagram)?.0.thresholds;
        write(
            out,
            KsatThresholds {
                k: t.k,
                r_cr: t.r_cr,
                s1cr: t.s1cr,
                s3cr: t.s3cr,
                s3cr_complement: t.s3cr_complement,
                bracket_lo: t.bracket_lo,
                bracket_hi: t.bracket_hi,
                residual: t.residual,
            },
            "out",
        )
    })
}

/// Inverse of `r(s)` on branch 1, 2 or 3.
#[no_mangle]
pub unsafe extern "C" fn ksat_phase_diagram_invert_branch(
    diagram: *const KsatPhaseDiagram,
    branch: u32,
    r: f64,
    out: *mut f64,
) -> KsatStatus {
    guard(|| {
        let d = handle(diagram)?;
        let s = d.0.critical.invert(Branch::from_index(branch)?, r)?.s();
        write(out, s, "out")
    })
}

/// Major similarity degree at ratio `r`.
#[no_mangle]
pub unsafe extern "C" fn ksat_phase_diagram_major_similarity(
    diagram: *const KsatPhaseDiagram,
    r: f64,
    out: *mut KsatCurvePoint,
) -> KsatStatus {
    guard(|| {
        let p = handle(diagram)?.0.major_similarity_degree(r)?;
        let active = match p.active {
            Active::S1 => KsatActive::S1,
            Active::S3 => KsatActive::S3,
            Active::Both => KsatActive::Both,
        };
        write(
            out,
            KsatCurvePoint {
                r: p.r,
                smj: p.smj,
                smj_complement: p.smj_complement,
                smj_alt: p.smj_alt.unwrap_or(f64::NAN),
                active,
                f_s1: p.f_s1.unwrap_or(f64::NAN),
                f_s3: p.f_s3.unwrap_or(f64::NAN),
            },
            "out",
        )
    })
}

/// Random k-SAT formula with `m` clauses over `n` variables.
#[no_mangle]
pub unsafe extern "C" fn ksat_formula_generate(
    n: u32,
    k: u32,
    m: u64,
    seed: u64,
    out: *mut *mut KsatFormula,
) -> KsatStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let f = lab::generate_random_ksat(n, k, m, seed)?;
        out.write(Box::into_raw(Box::new(KsatFormula(f))));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ksat_formula_free(formula: *mut KsatFormula) {
    if !formula.is_null() {
        drop(Box::from_raw(formula));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ksat_formula_num_vars(formula: *const KsatFormula) -> u32 {
    formula.as_ref().map_or(0, |f| f.0.num_vars())
}

#[no_mangle]
pub unsafe extern "C" fn ksat_formula_num_clauses(formula: *const KsatFormula) -> u64 {
    formula.as_ref().map_or(0, |f| f.0.num_clauses() as u64)
}

/// Evaluates the formula on `len` bytes (nonzero = true), one per variable.
#[no_mangle]
pub unsafe extern "C" fn ksat_formula_evaluate(
    formula: *const KsatFormula,
    bits: *const u8,
    len: usize,
    out: *mut bool,
) -> KsatStatus {
    guard(|| {
        let f = handle(formula)?;
        if bits.is_null() && len > 0 {
            return Err(null("bits"));
        }
        let slice = if len == 0 { &[][..] } else { std::slice::from_raw_parts(bits, len) };
        let a = Assignment::new(slice.iter().map(|&b| b != 0).collect());
        write(out, lab::evaluate(&f.0, &a)?, "out")
    })
}

/// Number of satisfying assignments (exhaustive, `n <= 26`).
#[no_mangle]
pub unsafe extern "C" fn ksat_formula_count_solutions(
    formula: *const KsatFormula,
    out: *mut u64,
) -> KsatStatus {
    guard(|| write(out, lab::count_solutions(&handle(formula)?.0)?, "out"))
}

/// Ordered-pair similarity histogram of the formula's solutions; `counts`
/// must hold `n + 1` entries.
#[no_mangle]
pub unsafe extern "C" fn ksat_formula_pair_histogram(
    formula: *const KsatFormula,
    counts: *mut u64,
    len: usize,
) -> KsatStatus {
    guard(|| {
        let f = handle(formula)?;
        let n = f.0.num_vars();
        if counts.is_null() {
            return Err(null("counts"));
        }
        if len < n as usize + 1 {
            return Err(KsatFailure(
                KsatStatus::BufferTooSmall,
                format!("counts needs {} entries, got {len}", n + 1),
            ));
        }
        let h = lab::pair_similarity_histogram(&lab::enumerate_solutions(&f.0)?, n)?;
        ptr::copy_nonoverlapping(h.counts.as_ptr(), counts, h.counts.len());
        Ok(())
    })
}

/// DIMACS CNF text of the formula; release with [`ksat_string_free`].
/// Returns NULL on failure.
#[no_mangle]
pub unsafe extern "C" fn ksat_formula_to_dimacs(formula: *const KsatFormula) -> *mut c_char {
    match formula.as_ref() {
        Some(f) => CString::new(f.0.to_dimacs()).map_or(ptr::null_mut(), CString::into_raw),
        None => {
            set_last_error("handle is NULL".into());
            ptr::null_mut()
        }
    }
}

#[no_mangle]
pub unsafe extern "C" fn ksat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Monte Carlo mean and standard error of the pair histogram; `mean` and
/// `std_error` must each hold `n + 1` entries.
#[no_mangle]
pub unsafe extern "C" fn ksat_monte_carlo_histogram(
    n: u32,
    k: u32,
    m: u64,
    trials: u64,
    seed: u64,
    mean: *mut f64,
    std_error: *mut f64,
    len: usize,
) -> KsatStatus {
    guard(|| {
        if mean.is_null() || std_error.is_null() {
            return Err(null("output buffer"));
        }
        if len < n as usize + 1 {
            return Err(KsatFailure(
                KsatStatus::BufferTooSmall,
                format!("buffers need {} entries, got {len}", n as usize + 1),
            ));
        }
        let stats = lab::monte_carlo_expected_histogram(n, k, m, trials, seed)?;
        ptr::copy_nonoverlapping(stats.mean.as_ptr(), mean, stats.mean.len());
        ptr::copy_nonoverlapping(stats.std_error.as_ptr(), std_error, stats.std_error.len());
        Ok(())
    })
}
