//! C ABI over `hcorr`.
//!
//! Objects cross the boundary as opaque handles that the caller frees with the matching
//! `*_free` function. Every fallible call returns an [`HcorrStatus`]; on failure the message
//! is available from [`hcorr_last_error`] on the same thread. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hcorr::closed_form::partition;
use hcorr::combinatorics::ClassTable;
use hcorr::groups::{GroupFamily, GroupSpectrum};
use hcorr::oracles::{mc_group_partition, McConfig};
use hcorr::recursion::{correlator_vector, correlator_vector_rescaled, SpectralPoints};
use hcorr::Error;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcorrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    CoincidentEigenvalues = 3,
    Pole = 4,
    Unsupported = 5,
    Numerical = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcorrFamily {
    OEven = 0,
    OOdd = 1,
    Sp = 2,
    U = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HcorrComplex {
    pub re: f64,
    pub im: f64,
}

/// Eigenvalues of one Cartan element together with its group family.
pub struct HcorrSpectrum(GroupSpectrum);

/// Values over the `(2R)!` basis classes, indexed by the Lehmer rank of the class permutation.
pub struct HcorrVector(Vec<Complex64>);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(err: &Error) -> HcorrStatus {
    match err {
        Error::CoincidentEigenvalues { .. } => HcorrStatus::CoincidentEigenvalues,
        Error::Pole { .. } | Error::SingularResolvent(_) => HcorrStatus::Pole,
        Error::UnsupportedFamily(_) | Error::IncompatibleEmbedding { .. } | Error::CouplingNotHalf(_) => {
            HcorrStatus::Unsupported
        }
        Error::NonCommuting { .. } | Error::SingularDenominator(_) => HcorrStatus::Numerical,
        _ => HcorrStatus::InvalidArgument,
    }
}

struct Failure(HcorrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(HcorrStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, records any failure and turns panics into [`HcorrStatus::Panic`].
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> HcorrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => HcorrStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HcorrStatus::Panic
        }
    }
}

/// # Safety
/// `ptr` must be null or valid for `len` reads.
unsafe fn slice<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn handle<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(ptr: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    ptr.as_mut().ok_or_else(|| null(what))
}

/// Message of the last failed call on this thread. The pointer stays valid until the next
/// failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn hcorr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hcorr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a spectrum of rank `len`; the family's rank is taken from `len`.
///
/// # Safety
/// `eigenvalues` must be valid for `len` reads and `out_spectrum` for one write.
#[no_mangle]
pub unsafe extern "C" fn hcorr_spectrum_new(
    family: HcorrFamily,
    eigenvalues: *const f64,
    len: usize,
    out_spectrum: *mut *mut HcorrSpectrum,
) -> HcorrStatus {
    guard(|| {
        let dst = out(out_spectrum, "out_spectrum")?;
        let eigs = slice(eigenvalues, len, "eigenvalues")?.to_vec();
        let f = match family {
            HcorrFamily::OEven => GroupFamily::OEven(len),
            HcorrFamily::OOdd => GroupFamily::OOdd(len),
            HcorrFamily::Sp => GroupFamily::Sp(len),
            HcorrFamily::U => GroupFamily::U(len),
        };
        let spec = GroupSpectrum::new(f, eigs)?;
        *dst = Box::into_raw(Box::new(HcorrSpectrum(spec)));
        Ok(())
    })
}

/// # Safety
/// `spectrum` must be null or come from [`hcorr_spectrum_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hcorr_spectrum_free(spectrum: *mut HcorrSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Rank of the spectrum, or 0 for a null handle.
///
/// # Safety
/// `spectrum` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hcorr_spectrum_rank(spectrum: *const HcorrSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.0.rank())
}

/// Haar-normalized partition function `⟨exp(-γ tr(X Ω Y Ω⁻¹))⟩`.
///
/// # Safety
/// `x` and `y` must be live handles and `out_value` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn hcorr_partition(
    x: *const HcorrSpectrum,
    y: *const HcorrSpectrum,
    gamma: f64,
    out_value: *mut f64,
) -> HcorrStatus {
    guard(|| {
        let (x, y) = (handle(x, "x")?, handle(y, "y")?);
        let dst = out(out_value, "out_value")?;
        *dst = partition(&x.0, &y.0, gamma)?.value;
        Ok(())
    })
}

/// Haar Monte Carlo estimate of the partition function, deterministic in `seed`.
///
/// # Safety
/// `x` and `y` must be live handles; `out_mean` and `out_stderr` valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn hcorr_mc_partition(
    x: *const HcorrSpectrum,
    y: *const HcorrSpectrum,
    gamma: f64,
    samples: u64,
    seed: u64,
    out_mean: *mut f64,
    out_stderr: *mut f64,
) -> HcorrStatus {
    guard(|| {
        let (x, y) = (handle(x, "x")?, handle(y, "y")?);
        let (mean, stderr) = (out(out_mean, "out_mean")?, out(out_stderr, "out_stderr")?);
        if samples < 2 {
            return Err(Failure(HcorrStatus::InvalidArgument, "at least two samples are needed".into()));
        }
        let est = mc_group_partition(&x.0, &y.0, gamma, &McConfig::new(samples, seed))?;
        *mean = est.mean.re;
        *stderr = est.stderr;
        Ok(())
    })
}

/// Normalized correlation vector at `r` pairs of spectral points, for any `γ > 0`.
///
/// # Safety
/// `x` and `y` must be live handles, `x_points` and `y_points` valid for `r` reads and
/// `out_vector` for one write.
#[no_mangle]
pub unsafe extern "C" fn hcorr_correlator(
    x: *const HcorrSpectrum,
    y: *const HcorrSpectrum,
    x_points: *const HcorrComplex,
    y_points: *const HcorrComplex,
    r: usize,
    gamma: f64,
    out_vector: *mut *mut HcorrVector,
) -> HcorrStatus {
    guard(|| {
        let (x, y) = (handle(x, "x")?, handle(y, "y")?);
        let dst = out(out_vector, "out_vector")?;
        let conv = |p: &[HcorrComplex]| p.iter().map(|c| Complex64::new(c.re, c.im)).collect::<Vec<_>>();
        let xp = conv(slice(x_points, r, "x_points")?);
        let yp = conv(slice(y_points, r, "y_points")?);
        let pts = SpectralPoints::new(xp, yp)?;
        let table = ClassTable::new(r)?;
        let v = if gamma == 0.5 {
            correlator_vector(&x.0, &y.0, &pts, gamma, &table)?
        } else {
            correlator_vector_rescaled(&x.0, &y.0, &pts, gamma, &table)?
        };
        *dst = Box::into_raw(Box::new(HcorrVector(v.entries().to_vec())));
        Ok(())
    })
}

/// Number of entries, or 0 for a null handle.
///
/// # Safety
/// `vector` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hcorr_vector_len(vector: *const HcorrVector) -> usize {
    vector.as_ref().map_or(0, |v| v.0.len())
}

/// # Safety
/// `vector` must be a live handle and `out_value` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn hcorr_vector_get(vector: *const HcorrVector, index: usize, out_value: *mut HcorrComplex) -> HcorrStatus {
    guard(|| {
        let v = handle(vector, "vector")?;
        let dst = out(out_value, "out_value")?;
        let c = v.0.get(index).ok_or_else(|| {
            Failure(HcorrStatus::InvalidArgument, format!("index {index} out of range {}", v.0.len()))
        })?;
        *dst = HcorrComplex { re: c.re, im: c.im };
        Ok(())
    })
}

/// # Safety
/// `vector` must be null or come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hcorr_vector_free(vector: *mut HcorrVector) {
    if !vector.is_null() {
        drop(Box::from_raw(vector));
    }
}

/// Writes the one-based one-line permutation of class `index` at rank `r` into `buf`,
/// which must hold `2r` entries.
///
/// # Safety
/// `buf` must be valid for `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn hcorr_class_permutation(r: usize, index: usize, buf: *mut usize, capacity: usize) -> HcorrStatus {
    guard(|| {
        let table = ClassTable::new(r)?;
        if index >= table.len() {
            return Err(Failure(HcorrStatus::InvalidArgument, format!("index {index} out of range {}", table.len())));
        }
        if capacity < 2 * r {
            return Err(Failure(HcorrStatus::InvalidArgument, format!("buffer holds {capacity}, need {}", 2 * r)));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        let dst = std::slice::from_raw_parts_mut(buf, 2 * r);
        dst.copy_from_slice(&table.get(index).perm2r.one_line());
        Ok(())
    })
}
