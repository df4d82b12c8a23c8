//! C ABI for the `yellowstone` crate.
//!
//! Sequences live behind an opaque `YsSequence` handle. Every fallible call
//! returns a `YsStatus`; on failure a description of the most recent error on
//! the calling thread is available from `ys_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use yellowstone::numtheory::{least_odd_prime_not_dividing, SieveTable};
use yellowstone::{check_hypothesis_a, find_fixed_points, Domain, Error, SequenceState, VariantConfig};

/// Result of every fallible call. Values 2 through 9 match the exit codes of
/// the command-line tool.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum YsStatus {
    Ok = 0,
    NullPointer = 1,
    Format = 2,
    InvalidArgument = 3,
    ResourceLimit = 4,
    OutOfRange = 5,
    InternalLimit = 6,
    InsufficientData = 7,
    Inconsistent = 8,
    Io = 9,
    /// The value does not occur in the generated prefix.
    NotFound = 10,
    /// The output buffer is too small; the required size was still written.
    BufferTooSmall = 11,
    Panic = 12,
}

pub const YS_DOMAIN_ALL: u32 = 0;
pub const YS_DOMAIN_ODD: u32 = 1;

/// Opaque sequence handle.
pub struct YsSequence {
    state: SequenceState,
}

/// Even and odd-composite frontiers after the generated prefix.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct YsFrontier {
    pub n: usize,
    pub even_low: u64,
    pub even_high: u64,
    pub odd_composite_low: u64,
    pub odd_composite_high: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct YsHypothesisSummary {
    pub first_index: usize,
    pub last_index: usize,
    pub windows: usize,
    pub violations: usize,
    /// Index of the first violation, or 0 when there is none.
    pub first_violation: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> YsStatus {
    match e {
        Error::Format { .. } => YsStatus::Format,
        Error::InvalidArgument(_) => YsStatus::InvalidArgument,
        Error::ResourceLimit(_) => YsStatus::ResourceLimit,
        Error::OutOfRange { .. } => YsStatus::OutOfRange,
        Error::InternalLimit(_) => YsStatus::InternalLimit,
        Error::InsufficientData(_) => YsStatus::InsufficientData,
        Error::Inconsistent(_) => YsStatus::Inconsistent,
        Error::Io(_) => YsStatus::Io,
    }
}

fn fail(status: YsStatus, message: impl Into<String>) -> YsStatus {
    set_last_error(message.into());
    status
}

/// Runs `f`, converting library errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<YsStatus, Error>) -> YsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(e)) => fail(status_of(&e), e.to_string()),
        Err(_) => fail(YsStatus::Panic, "panic inside the library"),
    }
}

unsafe fn seq_ref<'a>(seq: *const YsSequence) -> Option<&'a YsSequence> {
    seq.as_ref()
}

fn domain_of(domain: u32) -> Option<Domain> {
    match domain {
        YS_DOMAIN_ALL => Some(Domain::AllPositive),
        YS_DOMAIN_ODD => Some(Domain::OddOnly),
        _ => None,
    }
}

/// Static description of a status code. Never NULL; do not free.
#[no_mangle]
pub extern "C" fn ys_status_message(status: YsStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        YsStatus::Ok => b"ok\0",
        YsStatus::NullPointer => b"null pointer argument\0",
        YsStatus::Format => b"malformed input\0",
        YsStatus::InvalidArgument => b"invalid argument\0",
        YsStatus::ResourceLimit => b"resource limit exceeded\0",
        YsStatus::OutOfRange => b"value outside the precomputed range\0",
        YsStatus::InternalLimit => b"internal limit reached\0",
        YsStatus::InsufficientData => b"insufficient data\0",
        YsStatus::Inconsistent => b"internal consistency check failed\0",
        YsStatus::Io => b"i/o error\0",
        YsStatus::NotFound => b"not found\0",
        YsStatus::BufferTooSmall => b"buffer too small\0",
        YsStatus::Panic => b"panic inside the library\0",
    };
    s.as_ptr().cast()
}

/// Detail of the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ys_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates a sequence from `len` initial terms over `domain`
/// (`YS_DOMAIN_ALL` or `YS_DOMAIN_ODD`).
///
/// # Safety
/// `start` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ys_sequence_new(
    start: *const u64,
    len: usize,
    domain: u32,
    out: *mut *mut YsSequence,
) -> YsStatus {
    if start.is_null() || out.is_null() {
        return fail(YsStatus::NullPointer, "start and out must not be NULL");
    }
    let Some(domain) = domain_of(domain) else {
        return fail(YsStatus::InvalidArgument, format!("unknown domain {domain}"));
    };
    let terms = std::slice::from_raw_parts(start, len).to_vec();
    guard(|| {
        let state = SequenceState::new(VariantConfig::new(terms, domain)?)?;
        *out = Box::into_raw(Box::new(YsSequence { state }));
        Ok(YsStatus::Ok)
    })
}

/// Creates the standard sequence starting 1, 2, 3.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ys_sequence_default(out: *mut *mut YsSequence) -> YsStatus {
    if out.is_null() {
        return fail(YsStatus::NullPointer, "out must not be NULL");
    }
    guard(|| {
        let state = SequenceState::new(VariantConfig::default())?;
        *out = Box::into_raw(Box::new(YsSequence { state }));
        Ok(YsStatus::Ok)
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `seq` must come from `ys_sequence_new` or `ys_sequence_default` and not
/// have been freed.
#[no_mangle]
pub unsafe extern "C" fn ys_sequence_free(seq: *mut YsSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Generates terms until the sequence has at least `n`.
///
/// # Safety
/// `seq` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ys_sequence_extend(seq: *mut YsSequence, n: usize) -> YsStatus {
    let Some(seq) = seq.as_mut() else {
        return fail(YsStatus::NullPointer, "seq must not be NULL");
    };
    guard(|| {
        seq.state.reserve_for(n)?;
        seq.state.extend_to(n)?;
        Ok(YsStatus::Ok)
    })
}

/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ys_sequence_len(seq: *const YsSequence, out: *mut usize) -> YsStatus {
    let (Some(seq), false) = (seq_ref(seq), out.is_null()) else {
        return fail(YsStatus::NullPointer, "seq and out must not be NULL");
    };
    *out = seq.state.len();
    YsStatus::Ok
}

/// The 1-based term `a(n)`.
///
/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ys_sequence_term(seq: *const YsSequence, n: usize, out: *mut u64) -> YsStatus {
    let (Some(seq), false) = (seq_ref(seq), out.is_null()) else {
        return fail(YsStatus::NullPointer, "seq and out must not be NULL");
    };
    match seq.state.term(n) {
        Some(v) => {
            *out = v;
            YsStatus::Ok
        }
        None => fail(
            YsStatus::OutOfRange,
            format!("index {n} outside 1..={}", seq.state.len()),
        ),
    }
}

/// Copies up to `capacity` terms into `buf` and stores the total number of
/// terms in `written`. Returns `BufferTooSmall` when the copy was truncated.
///
/// # Safety
/// `seq` must be a live handle; `buf` must hold `capacity` values (it may be
/// NULL when `capacity` is 0); `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ys_sequence_copy_terms(
    seq: *const YsSequence,
    buf: *mut u64,
    capacity: usize,
    written: *mut usize,
) -> YsStatus {
    let (Some(seq), false) = (seq_ref(seq), written.is_null()) else {
        return fail(YsStatus::NullPointer, "seq and written must not be NULL");
    };
    copy_out(seq.state.terms(), buf, capacity, written)
}

unsafe fn copy_out(values: &[u64], buf: *mut u64, capacity: usize, written: *mut usize) -> YsStatus {
    *written = values.len();
    let k = values.len().min(capacity);
    if k > 0 {
        if buf.is_null() {
            return fail(YsStatus::NullPointer, "buf must not be NULL");
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, k);
    }
    if k < values.len() {
        return fail(
            YsStatus::BufferTooSmall,
            format!("{} values do not fit in {capacity}", values.len()),
        );
    }
    YsStatus::Ok
}

/// The index `n` with `a(n) = value`, if it is in the generated prefix.
///
/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ys_sequence_position(
    seq: *const YsSequence,
    value: u64,
    out: *mut usize,
) -> YsStatus {
    let (Some(seq), false) = (seq_ref(seq), out.is_null()) else {
        return fail(YsStatus::NullPointer, "seq and out must not be NULL");
    };
    match seq.state.inverse_position(value) {
        Some(i) => {
            *out = i;
            YsStatus::Ok
        }
        None => fail(YsStatus::NotFound, format!("{value} not among the first {} terms", seq.state.len())),
    }
}

/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ys_sequence_frontier(seq: *const YsSequence, out: *mut YsFrontier) -> YsStatus {
    let (Some(seq), false) = (seq_ref(seq), out.is_null()) else {
        return fail(YsStatus::NullPointer, "seq and out must not be NULL");
    };
    guard(|| {
        let f = seq.state.frontier();
        *out = YsFrontier {
            n: f.n,
            even_low: f.even_low,
            even_high: f.even_high,
            odd_composite_low: f.odd_composite_low,
            odd_composite_high: f.odd_composite_high,
        };
        Ok(YsStatus::Ok)
    })
}

/// Checks the alternation structure from index `start` to the end of the
/// generated prefix.
///
/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ys_sequence_check_hypothesis_a(
    seq: *const YsSequence,
    start: usize,
    out: *mut YsHypothesisSummary,
) -> YsStatus {
    let (Some(seq), false) = (seq_ref(seq), out.is_null()) else {
        return fail(YsStatus::NullPointer, "seq and out must not be NULL");
    };
    guard(|| {
        let r = check_hypothesis_a(&seq.state, start)?;
        *out = YsHypothesisSummary {
            first_index: r.checked_range.0,
            last_index: r.checked_range.1,
            windows: r.five_term_events(),
            violations: r.violations.len(),
            first_violation: r.violations.first().map_or(0, |v| v.index),
        };
        Ok(YsStatus::Ok)
    })
}

/// Fixed points `n <= limit`, copied like `ys_sequence_copy_terms`.
///
/// # Safety
/// As for `ys_sequence_copy_terms`.
#[no_mangle]
pub unsafe extern "C" fn ys_sequence_fixed_points(
    seq: *const YsSequence,
    limit: usize,
    buf: *mut u64,
    capacity: usize,
    written: *mut usize,
) -> YsStatus {
    let (Some(seq), false) = (seq_ref(seq), written.is_null()) else {
        return fail(YsStatus::NullPointer, "seq and written must not be NULL");
    };
    let mut status = YsStatus::Ok;
    let outer = guard(|| {
        let fixed = find_fixed_points(&seq.state, limit)?;
        status = copy_out(&fixed, buf, capacity, written);
        Ok(YsStatus::Ok)
    });
    if outer != YsStatus::Ok {
        outer
    } else {
        status
    }
}

/// Number of primes `<= x`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ys_prime_pi(x: u64, out: *mut u64) -> YsStatus {
    if out.is_null() {
        return fail(YsStatus::NullPointer, "out must not be NULL");
    }
    guard(|| {
        let sieve = SieveTable::build(x.max(2))?;
        *out = sieve.prime_pi(x)?;
        Ok(YsStatus::Ok)
    })
}

/// Least odd prime that does not divide `j`; 0 for `j = 0`.
#[no_mangle]
pub extern "C" fn ys_least_odd_prime_not_dividing(j: u64) -> u64 {
    if j == 0 {
        0
    } else {
        least_odd_prime_not_dividing(j)
    }
}
