use std::ffi::{CStr, CString};
use std::ptr;

use balword_ffi::*;

fn new_word(density: &str) -> Result<*mut BalwordWord, BalwordStatus> {
    let s = CString::new(density).unwrap();
    let mut w = ptr::null_mut();
    match unsafe { balword_word_new(s.as_ptr(), &mut w) } {
        BalwordStatus::Ok => Ok(w),
        e => Err(e),
    }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(balword_last_error()) }
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn half_word_through_the_abi() {
    let w = new_word("1/2").unwrap();
    let mut buf = vec![0u8; 12];
    assert_eq!(
        unsafe { balword_word_patch(w, 1, 0, 12, 1, buf.as_mut_ptr(), buf.len()) },
        BalwordStatus::Ok
    );
    assert_eq!(buf, [0, 0, 1, 1, 1, 0, 1, 0, 1, 0, 1, 0]);

    let mut bit = 9u8;
    assert_eq!(
        unsafe { balword_word_bit(w, 2, 1, &mut bit) },
        BalwordStatus::Ok
    );
    assert_eq!(bit, 1);

    let mut count = 0u64;
    assert_eq!(
        unsafe { balword_rect_count(w, 1, 0, 12, 1, &mut count) },
        BalwordStatus::Ok
    );
    assert_eq!(count, 6);

    let mut bound = 0u64;
    assert_eq!(
        unsafe { balword_balance_bound(w, &mut bound) },
        BalwordStatus::Ok
    );
    assert_eq!(bound, 32);
    unsafe { balword_word_free(w) };
}

#[test]
fn patch_matches_library() {
    let a = balword::Density::parse("(0+1*sqrt(2))/3").unwrap();
    let seq = balword::LiftedSequence::planar(&a);
    let rect = balword::LatticeRect::planar(-40, 17, 23, 9).unwrap();
    let expected = balword::word::patch(&seq, &rect).unwrap();
    let w = new_word("(0+1*sqrt(2))/3").unwrap();
    let mut buf = vec![0u8; 23 * 9];
    assert_eq!(
        unsafe { balword_word_patch(w, -40, 17, 23, 9, buf.as_mut_ptr(), buf.len()) },
        BalwordStatus::Ok
    );
    assert_eq!(buf, expected.bits());
    unsafe { balword_word_free(w) };
}

#[test]
fn error_codes() {
    assert_eq!(new_word("abc").unwrap_err(), BalwordStatus::Parse);
    assert!(last_error().contains("malformed"));
    assert_eq!(new_word("3/2").unwrap_err(), BalwordStatus::Domain);
    assert_eq!(new_word("1/0").unwrap_err(), BalwordStatus::Domain);

    let bad = [0xffu8, 0];
    let mut w = ptr::null_mut();
    assert_eq!(
        unsafe { balword_word_new(bad.as_ptr().cast(), &mut w) },
        BalwordStatus::InvalidUtf8
    );
    assert_eq!(
        unsafe { balword_word_new(ptr::null(), &mut w) },
        BalwordStatus::NullPointer
    );
    let s = CString::new("1/2").unwrap();
    assert_eq!(
        unsafe { balword_word_new(s.as_ptr(), ptr::null_mut()) },
        BalwordStatus::NullPointer
    );

    let w = new_word("1/3").unwrap();
    assert!(last_error().is_empty());
    let mut small = [0u8; 3];
    assert_eq!(
        unsafe { balword_word_patch(w, 0, 0, 2, 2, small.as_mut_ptr(), small.len()) },
        BalwordStatus::BufferTooSmall
    );
    assert_eq!(
        unsafe { balword_word_patch(w, 0, 0, 0, 2, small.as_mut_ptr(), small.len()) },
        BalwordStatus::Domain
    );
    assert_eq!(
        unsafe { balword_word_bit(ptr::null(), 0, 0, small.as_mut_ptr()) },
        BalwordStatus::NullPointer
    );
    unsafe { balword_word_free(w) };
    unsafe { balword_word_free(ptr::null_mut()) };
}

#[test]
fn sturmian_and_messages() {
    let s = CString::new("(-1+1*sqrt(5))/2").unwrap();
    let mut buf = [0u8; 8];
    assert_eq!(
        unsafe { balword_sturmian_bits(s.as_ptr(), 1, buf.as_mut_ptr(), 8) },
        BalwordStatus::Ok
    );
    assert_eq!(buf, [1, 0, 1, 1, 0, 1, 0, 1]);

    for code in 0..8 {
        let msg = unsafe { CStr::from_ptr(balword_status_message(code)) };
        assert!(!msg.to_bytes().is_empty());
    }
    let unknown = unsafe { CStr::from_ptr(balword_status_message(99)) };
    assert_eq!(unknown.to_str().unwrap(), "unknown status");
    let v = unsafe { CStr::from_ptr(balword_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
