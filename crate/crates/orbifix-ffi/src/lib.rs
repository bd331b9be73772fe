//! C ABI over the fixing and separation core.
//!
//! Faces are opaque handles created by [`orbifix_face_new`] or
//! [`orbifix_face_parse`] and released with [`orbifix_face_free`]. Every
//! function returns an [`OrbifixStatus`]; on an error status, a thread-local
//! message is available from [`orbifix_last_error`] until the next call on
//! the same thread. Strings returned by the library are freed with
//! [`orbifix_string_free`].
//!
//! The header `include/orbifix.h` is generated with cbindgen
//! (`cbindgen --config cbindgen.toml --crate orbifix-ffi --output include/orbifix.h`)
//! and committed, so C consumers need no Rust tooling.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use orbifix::face::{check_face, complete_face, format_face_record, parse_face_record, FaceCheck};
use orbifix::fixing::{orbitopal_fix, FixingOutcome};
use orbifix::sci::separate_sci;
use orbifix::shape::{CellIndex, OrbitopeShape};
use orbifix::{CubeFace, Error};

/// Status and error codes. Non-negative values are outcomes, negative
/// values are errors.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbifixStatus {
    Ok = 0,
    /// The face contains no feasible 0/1 point.
    Infeasible = 1,
    /// Separation found no violated inequality.
    NoViolation = 2,
    InvalidArgument = -1,
    ParseError = -2,
    NotFixingReady = -3,
    NullPointer = -4,
    InvalidUtf8 = -5,
    GuardExceeded = -6,
    BufferTooSmall = -7,
    Panic = -99,
}

/// Opaque face handle: a set of 0-fixed and 1-fixed cells over a shape.
pub struct OrbifixFace {
    face: CubeFace,
}

/// Work counters reported by [`orbifix_fix`].
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OrbifixFixStats {
    pub flag_transitions: u64,
    pub fixed_zeros: u64,
    pub fixed_ones: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

fn status_of(err: &Error) -> OrbifixStatus {
    set_error(&err.to_string());
    match err {
        Error::Parse(_) => OrbifixStatus::ParseError,
        Error::NotFixingReady(_) => OrbifixStatus::NotFixingReady,
        Error::GuardExceeded(_) => OrbifixStatus::GuardExceeded,
        _ => OrbifixStatus::InvalidArgument,
    }
}

fn guarded(body: impl FnOnce() -> OrbifixStatus) -> OrbifixStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            OrbifixStatus::Panic
        }
    }
}

/// The last error message of this thread; a borrowed pointer, valid until
/// the next library call on the same thread.
#[no_mangle]
pub extern "C" fn orbifix_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn orbifix_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Creates an empty face over a `p x q` shape (`p >= q >= 2`).
///
/// # Safety
/// `out` must be a valid pointer; on `Ok` it receives a handle that must be
/// released with [`orbifix_face_free`].
#[no_mangle]
pub unsafe extern "C" fn orbifix_face_new(
    p: u32,
    q: u32,
    out: *mut *mut OrbifixFace,
) -> OrbifixStatus {
    guarded(|| {
        if out.is_null() {
            set_error("out pointer is null");
            return OrbifixStatus::NullPointer;
        }
        match OrbitopeShape::new(p, q) {
            Ok(shape) => {
                let handle = Box::new(OrbifixFace { face: CubeFace::empty(shape) });
                unsafe { *out = Box::into_raw(handle) };
                OrbifixStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Parses the text record `p q ; zeros: (i,j) ... ; ones: (i,j) ...`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` as in [`orbifix_face_new`].
#[no_mangle]
pub unsafe extern "C" fn orbifix_face_parse(
    text: *const c_char,
    out: *mut *mut OrbifixFace,
) -> OrbifixStatus {
    guarded(|| {
        if text.is_null() || out.is_null() {
            set_error("null pointer argument");
            return OrbifixStatus::NullPointer;
        }
        let text = match unsafe { CStr::from_ptr(text) }.to_str() {
            Ok(t) => t,
            Err(_) => {
                set_error("input is not valid UTF-8");
                return OrbifixStatus::InvalidUtf8;
            }
        };
        match parse_face_record(text.trim()) {
            Ok(face) => {
                unsafe { *out = Box::into_raw(Box::new(OrbifixFace { face })) };
                OrbifixStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Releases a face handle. A null pointer is ignored.
///
/// # Safety
/// `face` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn orbifix_face_free(face: *mut OrbifixFace) {
    if !face.is_null() {
        drop(unsafe { Box::from_raw(face) });
    }
}

/// Frees a string returned by this library. A null pointer is ignored.
///
/// # Safety
/// `s` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn orbifix_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

unsafe fn with_face<T>(
    face: *const OrbifixFace,
    body: impl FnOnce(&CubeFace) -> T,
) -> Result<T, OrbifixStatus> {
    if face.is_null() {
        set_error("face handle is null");
        return Err(OrbifixStatus::NullPointer);
    }
    Ok(body(unsafe { &(*face).face }))
}

fn fix_cell(
    face: *mut OrbifixFace,
    i: u32,
    j: u32,
    one: bool,
) -> OrbifixStatus {
    guarded(|| {
        if face.is_null() {
            set_error("face handle is null");
            return OrbifixStatus::NullPointer;
        }
        let handle = unsafe { &mut *face };
        let shape = handle.face.shape();
        let cell = CellIndex::new(i, j);
        if !shape.contains(cell) {
            set_error(&format!(
                "cell ({i},{j}) lies outside the {}x{} shape",
                shape.p(),
                shape.q()
            ));
            return OrbifixStatus::InvalidArgument;
        }
        if one {
            handle.face.fix_one(cell);
        } else {
            handle.face.fix_zero(cell);
        }
        OrbifixStatus::Ok
    })
}

/// Fixes a cell to zero.
///
/// # Safety
/// `face` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn orbifix_face_fix_zero(
    face: *mut OrbifixFace,
    i: u32,
    j: u32,
) -> OrbifixStatus {
    fix_cell(face, i, j, false)
}

/// Fixes a cell to one.
///
/// # Safety
/// `face` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn orbifix_face_fix_one(
    face: *mut OrbifixFace,
    i: u32,
    j: u32,
) -> OrbifixStatus {
    fix_cell(face, i, j, true)
}

/// Renders the face as a text record; the string is freed with
/// [`orbifix_string_free`].
///
/// # Safety
/// `face` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orbifix_face_format(
    face: *const OrbifixFace,
    out: *mut *mut c_char,
) -> OrbifixStatus {
    guarded(|| {
        if out.is_null() {
            set_error("out pointer is null");
            return OrbifixStatus::NullPointer;
        }
        match unsafe { with_face(face, format_face_record) } {
            Ok(text) => {
                let text = CString::new(text).expect("record has no interior NUL");
                unsafe { *out = text.into_raw() };
                OrbifixStatus::Ok
            }
            Err(status) => status,
        }
    })
}

/// Closes the face under the one-per-row rule (row-complement zeros of every
/// 1-fixing) in place. Returns `Infeasible` when a cell is forced both ways.
///
/// # Safety
/// `face` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn orbifix_face_complete(face: *mut OrbifixFace) -> OrbifixStatus {
    guarded(|| {
        if face.is_null() {
            set_error("face handle is null");
            return OrbifixStatus::NullPointer;
        }
        let handle = unsafe { &mut *face };
        match complete_face(&handle.face) {
            Ok(done) => {
                handle.face = done;
                OrbifixStatus::Ok
            }
            Err(Error::EmptyFace { .. }) => OrbifixStatus::Infeasible,
            Err(err) => status_of(&err),
        }
    })
}

/// Computes the simultaneous fixing of a fixing-ready face.
///
/// On `Ok`, `out_fixed` receives the enlarged face; on `Infeasible` it is
/// set to null. `stats` (optional) receives the work counters either way.
/// A face that violates the readiness conditions yields `NotFixingReady`;
/// close it with [`orbifix_face_complete`] first.
///
/// # Safety
/// `face` must be a live handle; `out_fixed` must be valid; `stats` may be
/// null.
#[no_mangle]
pub unsafe extern "C" fn orbifix_fix(
    face: *const OrbifixFace,
    out_fixed: *mut *mut OrbifixFace,
    stats: *mut OrbifixFixStats,
) -> OrbifixStatus {
    guarded(|| {
        if out_fixed.is_null() {
            set_error("out pointer is null");
            return OrbifixStatus::NullPointer;
        }
        let result = match unsafe { with_face(face, orbitopal_fix) } {
            Ok(r) => r,
            Err(status) => return status,
        };
        match result {
            Ok((outcome, fix_stats)) => {
                if !stats.is_null() {
                    unsafe {
                        *stats = OrbifixFixStats {
                            flag_transitions: fix_stats.flag_transitions as u64,
                            fixed_zeros: fix_stats.fixed_zeros as u64,
                            fixed_ones: fix_stats.fixed_ones as u64,
                        };
                    }
                }
                match outcome {
                    FixingOutcome::Infeasible => {
                        unsafe { *out_fixed = std::ptr::null_mut() };
                        OrbifixStatus::Infeasible
                    }
                    FixingOutcome::Fixed(fixed) => {
                        unsafe {
                            *out_fixed = Box::into_raw(Box::new(OrbifixFace { face: fixed }));
                        }
                        OrbifixStatus::Ok
                    }
                }
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Whether the face satisfies the fixing-readiness conditions.
///
/// # Safety
/// `face` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn orbifix_face_is_ready(face: *const OrbifixFace) -> OrbifixStatus {
    guarded(|| match unsafe { with_face(face, check_face) } {
        Ok(FaceCheck::Ok) => OrbifixStatus::Ok,
        Ok(check) => {
            set_error(&format!("{check:?}"));
            OrbifixStatus::NotFixingReady
        }
        Err(status) => status,
    })
}

/// Finds the most violated shifted column inequality at a fractional point.
///
/// `x` holds the point row-major over the reduced index set of the shape
/// (`len` values). On `Ok`, the anchor cell and the violation are written,
/// and `entry_cols` receives the shifted-column entry columns by diagonal
/// (`entry_len` of them, at most `p`). Returns `NoViolation` when every
/// inequality holds within 1e-6.
///
/// # Safety
/// `x` must point to `len` doubles; out-pointers must be valid; `entry_cols`
/// must have capacity for `entry_capacity` values.
#[no_mangle]
pub unsafe extern "C" fn orbifix_separate(
    p: u32,
    q: u32,
    x: *const f64,
    len: usize,
    anchor_i: *mut u32,
    anchor_j: *mut u32,
    violation: *mut f64,
    entry_cols: *mut u32,
    entry_capacity: usize,
    entry_len: *mut usize,
) -> OrbifixStatus {
    guarded(|| {
        if x.is_null()
            || anchor_i.is_null()
            || anchor_j.is_null()
            || violation.is_null()
            || entry_cols.is_null()
            || entry_len.is_null()
        {
            set_error("null pointer argument");
            return OrbifixStatus::NullPointer;
        }
        let shape = match OrbitopeShape::new(p, q) {
            Ok(s) => s,
            Err(err) => return status_of(&err),
        };
        if len != shape.num_cells() {
            set_error(&format!("expected {} values, got {len}", shape.num_cells()));
            return OrbifixStatus::InvalidArgument;
        }
        let point = unsafe { std::slice::from_raw_parts(x, len) };
        if point.iter().any(|v| !(0.0..=1.0).contains(v)) {
            set_error("point components must lie in [0,1]");
            return OrbifixStatus::InvalidArgument;
        }
        match separate_sci(point, shape, 1e-6) {
            None => OrbifixStatus::NoViolation,
            Some((sci, value)) => {
                let cols: Vec<u32> =
                    (1..=sci.shifted_column().len() as u32).map(|k| sci.shifted_column().column(k)).collect();
                if cols.len() > entry_capacity {
                    set_error(&format!(
                        "shifted column has {} entries, buffer holds {entry_capacity}",
                        cols.len()
                    ));
                    return OrbifixStatus::BufferTooSmall;
                }
                unsafe {
                    *anchor_i = sci.anchor().i;
                    *anchor_j = sci.anchor().j;
                    *violation = value;
                    std::ptr::copy_nonoverlapping(cols.as_ptr(), entry_cols, cols.len());
                    *entry_len = cols.len();
                }
                OrbifixStatus::Ok
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cstr(text: &str) -> CString {
        CString::new(text).unwrap()
    }

    #[test]
    fn face_roundtrip_through_the_abi() {
        unsafe {
            let mut face: *mut OrbifixFace = std::ptr::null_mut();
            let record = cstr("5 4 ; zeros: (3,2) (5,1) (5,2) (5,3) ; ones: (1,1) (5,4)");
            assert_eq!(orbifix_face_parse(record.as_ptr(), &mut face), OrbifixStatus::Ok);
            assert_eq!(orbifix_face_is_ready(face), OrbifixStatus::Ok);

            let mut fixed: *mut OrbifixFace = std::ptr::null_mut();
            let mut stats = OrbifixFixStats::default();
            assert_eq!(orbifix_fix(face, &mut fixed, &mut stats), OrbifixStatus::Ok);
            assert!(stats.flag_transitions <= 20);
            assert_eq!(stats.fixed_ones, 1);

            let mut text: *mut c_char = std::ptr::null_mut();
            assert_eq!(orbifix_face_format(fixed, &mut text), OrbifixStatus::Ok);
            let rendered = CStr::from_ptr(text).to_str().unwrap().to_string();
            assert_eq!(
                rendered,
                "5 4 ; zeros: (2,1) (3,2) (5,1) (5,2) (5,3) ; ones: (1,1) (2,2) (5,4)"
            );
            orbifix_string_free(text);
            orbifix_face_free(fixed);
            orbifix_face_free(face);
        }
    }

    #[test]
    fn building_a_face_by_hand() {
        unsafe {
            let mut face: *mut OrbifixFace = std::ptr::null_mut();
            assert_eq!(orbifix_face_new(3, 3, &mut face), OrbifixStatus::Ok);
            assert_eq!(orbifix_face_fix_zero(face, 2, 2), OrbifixStatus::Ok);
            assert_eq!(orbifix_face_fix_zero(face, 3, 1), OrbifixStatus::Ok);
            assert_eq!(orbifix_face_fix_zero(face, 3, 2), OrbifixStatus::Ok);
            // out-of-shape cell
            assert_eq!(orbifix_face_fix_zero(face, 1, 2), OrbifixStatus::InvalidArgument);
            let msg = CStr::from_ptr(orbifix_last_error()).to_str().unwrap();
            assert!(msg.contains("outside"));

            let mut fixed: *mut OrbifixFace = std::ptr::null_mut();
            assert_eq!(
                orbifix_fix(face, &mut fixed, std::ptr::null_mut()),
                OrbifixStatus::Infeasible
            );
            assert!(fixed.is_null());
            orbifix_face_free(face);
        }
    }

    #[test]
    fn completion_over_the_abi() {
        unsafe {
            let mut face: *mut OrbifixFace = std::ptr::null_mut();
            assert_eq!(orbifix_face_new(3, 3, &mut face), OrbifixStatus::Ok);
            assert_eq!(orbifix_face_fix_one(face, 3, 2), OrbifixStatus::Ok);
            // incomplete: the row-complement zeros are missing
            assert_eq!(orbifix_face_is_ready(face), OrbifixStatus::NotFixingReady);
            assert_eq!(orbifix_face_complete(face), OrbifixStatus::Ok);
            assert_eq!(orbifix_face_is_ready(face), OrbifixStatus::Ok);

            // contradictory ones collapse to an empty face
            assert_eq!(orbifix_face_fix_one(face, 3, 3), OrbifixStatus::Ok);
            assert_eq!(orbifix_face_complete(face), OrbifixStatus::Infeasible);
            orbifix_face_free(face);
        }
    }

    #[test]
    fn separation_over_the_abi() {
        unsafe {
            // 4x3 shape, mass on (3,3) and (2,2)
            let shape = OrbitopeShape::new(4, 3).unwrap();
            let mut x = vec![0.0f64; shape.num_cells()];
            x[shape.cell_offset(CellIndex::new(3, 3))] = 0.5;
            x[shape.cell_offset(CellIndex::new(2, 2))] = 0.2;
            let mut ai = 0u32;
            let mut aj = 0u32;
            let mut violation = 0.0f64;
            let mut cols = vec![0u32; 4];
            let mut cols_len = 0usize;
            let status = orbifix_separate(
                4,
                3,
                x.as_ptr(),
                x.len(),
                &mut ai,
                &mut aj,
                &mut violation,
                cols.as_mut_ptr(),
                cols.len(),
                &mut cols_len,
            );
            assert_eq!(status, OrbifixStatus::Ok);
            assert!(violation >= 0.3);
            assert!(cols_len >= 1);

            // a vertex point separates nothing
            let mut v = vec![0.0f64; shape.num_cells()];
            for i in 1..=4u32 {
                v[shape.cell_offset(CellIndex::new(i, 1))] = 1.0;
            }
            let status = orbifix_separate(
                4,
                3,
                v.as_ptr(),
                v.len(),
                &mut ai,
                &mut aj,
                &mut violation,
                cols.as_mut_ptr(),
                cols.len(),
                &mut cols_len,
            );
            assert_eq!(status, OrbifixStatus::NoViolation);

            // dimension mismatch
            let status = orbifix_separate(
                4,
                3,
                v.as_ptr(),
                3,
                &mut ai,
                &mut aj,
                &mut violation,
                cols.as_mut_ptr(),
                cols.len(),
                &mut cols_len,
            );
            assert_eq!(status, OrbifixStatus::InvalidArgument);
        }
    }

    #[test]
    fn version_is_exposed() {
        let v = unsafe { CStr::from_ptr(orbifix_version()) };
        assert!(!v.to_bytes().is_empty());
    }
}
