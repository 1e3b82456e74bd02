//! C ABI over `balword`.
//!
//! Every function returns a [`BalwordStatus`] and writes results through out
//! pointers. Words are opaque heap handles released with [`balword_word_free`].
//! Panics never cross the boundary; they surface as `BALWORD_STATUS_PANIC`.
//! The text of the most recent failure on the calling thread is available from
//! [`balword_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use balword::analysis::{balance_bound, rect_count, AnalysisError};
use balword::lift::{LiftError, LiftedSequence};
use balword::number::{Density, DensityError};
use balword::word::{patch, sturmian_word_at, word_at, LatticeRect, WordError};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalwordStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// The density string is not in a recognised format.
    Parse = 3,
    /// Well-formed input outside the supported domain.
    Domain = 4,
    /// A computed difference left the alphabet `{a, a-1}`.
    Invariant = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Planar balanced word of a fixed density.
pub struct BalwordWord {
    seq: LiftedSequence,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(BalwordStatus, String);

impl From<DensityError> for Failure {
    fn from(e: DensityError) -> Self {
        let status = match e {
            DensityError::Malformed(_) => BalwordStatus::Parse,
            _ => BalwordStatus::Domain,
        };
        Failure(status, e.to_string())
    }
}

impl From<LiftError> for Failure {
    fn from(e: LiftError) -> Self {
        let status = match e {
            LiftError::NotInAlphabet { .. } => BalwordStatus::Invariant,
            _ => BalwordStatus::Domain,
        };
        Failure(status, e.to_string())
    }
}

impl From<WordError> for Failure {
    fn from(e: WordError) -> Self {
        match e {
            WordError::Lift(l) => l.into(),
            other => Failure(BalwordStatus::Domain, other.to_string()),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Word(w) => w.into(),
            AnalysisError::Lift(l) => l.into(),
            other => Failure(BalwordStatus::Domain, other.to_string()),
        }
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> BalwordStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            BalwordStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&msg);
            BalwordStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(BalwordStatus::NullPointer, "null pointer argument".into())
}

unsafe fn density_arg(s: *const c_char) -> Result<Density, Failure> {
    if s.is_null() {
        return Err(null());
    }
    let text = CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(BalwordStatus::InvalidUtf8, e.to_string()))?;
    Ok(Density::parse(text)?)
}

unsafe fn word_arg<'a>(w: *const BalwordWord) -> Result<&'a BalwordWord, Failure> {
    w.as_ref().ok_or_else(null)
}

unsafe fn out_arg<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(null)
}

unsafe fn buffer_arg<'a>(buf: *mut u8, len: usize, needed: u128) -> Result<&'a mut [u8], Failure> {
    if needed > len as u128 {
        return Err(Failure(
            BalwordStatus::BufferTooSmall,
            format!("buffer holds {len} bytes, {needed} needed"),
        ));
    }
    if buf.is_null() {
        return Err(null());
    }
    Ok(std::slice::from_raw_parts_mut(buf, needed as usize))
}

/// Parses `density` and stores a new word handle in `*out`.
///
/// # Safety
/// `density` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn balword_word_new(
    density: *const c_char,
    out: *mut *mut BalwordWord,
) -> BalwordStatus {
    guard(|| {
        let out = out_arg(out)?;
        let a = density_arg(density)?;
        *out = Box::into_raw(Box::new(BalwordWord {
            seq: LiftedSequence::planar(&a),
        }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `word` must come from [`balword_word_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn balword_word_free(word: *mut BalwordWord) {
    if !word.is_null() {
        drop(Box::from_raw(word));
    }
}

/// Word value at lattice point `(m, n)`.
///
/// # Safety
/// `word` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn balword_word_bit(
    word: *const BalwordWord,
    m: i64,
    n: i64,
    out: *mut u8,
) -> BalwordStatus {
    guard(|| {
        let w = word_arg(word)?;
        let out = out_arg(out)?;
        *out = word_at(&w.seq, &[m, n])?;
        Ok(())
    })
}

/// Fills `buf` row-major with the `width x height` patch anchored at `(x, y)`.
/// Row `r` holds the points with second coordinate `y + r`.
///
/// # Safety
/// `buf` must point to at least `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn balword_word_patch(
    word: *const BalwordWord,
    x: i64,
    y: i64,
    width: u64,
    height: u64,
    buf: *mut u8,
    len: usize,
) -> BalwordStatus {
    guard(|| {
        let w = word_arg(word)?;
        let rect = LatticeRect::planar(x, y, width, height)?;
        let dst = buffer_arg(buf, len, rect.cardinality())?;
        dst.copy_from_slice(patch(&w.seq, &rect)?.bits());
        Ok(())
    })
}

/// Number of ones in the `width x height` rectangle anchored at `(x, y)`.
///
/// # Safety
/// `word` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn balword_rect_count(
    word: *const BalwordWord,
    x: i64,
    y: i64,
    width: u64,
    height: u64,
    out: *mut u64,
) -> BalwordStatus {
    guard(|| {
        let w = word_arg(word)?;
        let out = out_arg(out)?;
        *out = rect_count(&w.seq, &LatticeRect::planar(x, y, width, height)?)?;
        Ok(())
    })
}

/// Proven balance constant of the word.
///
/// # Safety
/// `word` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn balword_balance_bound(
    word: *const BalwordWord,
    out: *mut u64,
) -> BalwordStatus {
    guard(|| {
        let w = word_arg(word)?;
        let out = out_arg(out)?;
        *out = balance_bound(w.seq.density(), 2)?;
        Ok(())
    })
}

/// Writes `len` bits of the rotation word `floor((m+1)a) - floor(ma)` for
/// `m = start, start + 1, ...` into `buf`.
///
/// # Safety
/// `density` must be a NUL-terminated string and `buf` hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn balword_sturmian_bits(
    density: *const c_char,
    start: i64,
    buf: *mut u8,
    len: usize,
) -> BalwordStatus {
    guard(|| {
        let a = density_arg(density)?;
        let dst = buffer_arg(buf, len, len as u128)?;
        for (i, slot) in dst.iter_mut().enumerate() {
            *slot = sturmian_word_at(&a, start + i as i64);
        }
        Ok(())
    })
}

/// Static description of a status code. Unknown codes get a generic text.
#[no_mangle]
pub extern "C" fn balword_status_message(status: i32) -> *const c_char {
    let s: &'static CStr = match status {
        0 => c"ok",
        1 => c"null pointer argument",
        2 => c"string is not valid UTF-8",
        3 => c"malformed density",
        4 => c"argument outside the supported domain",
        5 => c"difference outside the alphabet {a, a-1}",
        6 => c"output buffer too small",
        7 => c"internal panic",
        _ => c"unknown status",
    };
    s.as_ptr()
}

/// Detail of the last failure on this thread; empty after a success. The
/// pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn balword_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn balword_version() -> *const c_char {
    const V: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    V.as_ptr().cast()
}
