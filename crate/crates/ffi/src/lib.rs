//! C ABI for `wgelfand`.
//!
//! Objects are exposed as opaque handles created by `*_new`/`*_from_*`
//! functions and released by the matching `*_free`. Every fallible call
//! returns a [`WgStatus`]; on failure a message is available from
//! [`wg_last_error_message`] on the same thread until the next failing call.
//!
//! Complex arrays cross the boundary as interleaved `double` pairs
//! `re0, im0, re1, im1, ...`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use serde::Serialize;

use wgelfand::cli::{self, input, AnalysisRequest, Command, ExitStatus};
use wgelfand::fourier::{injectivity_check, FourierTable, Injectivity};
use wgelfand::function::{BiInvariantFunction, Weight};
use wgelfand::group::{double_cosets, subgroup_closure, GroupTable, SubgroupEmbedding, DEFAULT_ELEMENT_CAP};
use wgelfand::hecke::{gelfand_report, GelfandReport, HeckeAlgebra, WeightedPair};
use wgelfand::spherical::{enumerate_spherical, EnumerationOptions, SphericalSet};
use wgelfand::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    InvalidUtf8 = 3,
    OutOfRange = 4,
    NotGelfand = 5,
    Degenerate = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

/// A finite group.
pub struct WgGroup {
    group: GroupTable,
}

/// A subgroup and weight on a group, with its bi-invariant algebra.
pub struct WgPair {
    group: GroupTable,
    algebra: HeckeAlgebra,
}

/// Gelfand verdict and, for Gelfand pairs, the spherical functions and
/// Fourier table.
pub struct WgAnalysis {
    report: GelfandReport,
    spectral: Option<(SphericalSet, FourierTable, Injectivity)>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("no interior nul")));
}

fn fail(status: WgStatus, msg: impl Into<String>) -> WgStatus {
    set_error(msg);
    status
}

fn status_for(err: &Error) -> WgStatus {
    match err {
        Error::IndexOutOfRange { .. } => WgStatus::OutOfRange,
        Error::NotCommutative { .. } => WgStatus::NotGelfand,
        Error::Degenerate(_) | Error::ConsistencyViolation(_) => WgStatus::Degenerate,
        _ => WgStatus::InvalidInput,
    }
}

fn from_error(err: Error) -> WgStatus {
    fail(status_for(&err), err.to_string())
}

/// Runs `body`, turning panics into [`WgStatus::Internal`].
fn guard(body: impl FnOnce() -> WgStatus) -> WgStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => s,
        Err(_) => fail(WgStatus::Internal, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, WgStatus> {
    if p.is_null() {
        return Err(fail(WgStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(WgStatus::InvalidUtf8, "string is not valid UTF-8"))
}

unsafe fn read_slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], WgStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(WgStatus::NullPointer, "null array"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn complex_from_interleaved(v: &[f64]) -> Vec<Complex64> {
    v.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> WgStatus {
    *out = Box::into_raw(Box::new(value));
    WgStatus::Ok
}

/// Message of the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn wg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn wg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a group spec such as `{"kind": "symmetric", "n": 3}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wg_group_from_json(json: *const c_char, out: *mut *mut WgGroup) -> WgStatus {
    guard(|| {
        if out.is_null() {
            return fail(WgStatus::NullPointer, "null output pointer");
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let built = input::parse_json::<input::GroupSpec>(text, "group").and_then(|s| s.build(DEFAULT_ELEMENT_CAP));
        match built {
            Ok(group) => write_out(out, WgGroup { group }),
            Err(e) => from_error(e),
        }
    })
}

unsafe fn group_ctor(out: *mut *mut WgGroup, build: impl FnOnce() -> wgelfand::Result<GroupTable>) -> WgStatus {
    guard(|| {
        if out.is_null() {
            return fail(WgStatus::NullPointer, "null output pointer");
        }
        match build() {
            Ok(group) => write_out(out, WgGroup { group }),
            Err(e) => from_error(e),
        }
    })
}

/// Cyclic group of order `n`; element `k` is the `k`-th power of the generator.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wg_group_cyclic(n: usize, out: *mut *mut WgGroup) -> WgStatus {
    group_ctor(out, || GroupTable::cyclic(n))
}

/// Dihedral group of order `2n` (`n >= 3`).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wg_group_dihedral(n: usize, out: *mut *mut WgGroup) -> WgStatus {
    group_ctor(out, || GroupTable::dihedral(n))
}

/// Symmetric group on `n` points.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wg_group_symmetric(n: usize, out: *mut *mut WgGroup) -> WgStatus {
    group_ctor(out, || GroupTable::symmetric(n, DEFAULT_ELEMENT_CAP))
}

/// Number of elements, or 0 for a NULL handle.
///
/// # Safety
/// `group` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wg_group_order(group: *const WgGroup) -> usize {
    group.as_ref().map_or(0, |g| g.group.order())
}

/// Writes the index of `a * b`.
///
/// # Safety
/// `group` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wg_group_mul(group: *const WgGroup, a: usize, b: usize, out: *mut usize) -> WgStatus {
    guard(|| {
        let (Some(g), false) = (group.as_ref(), out.is_null()) else {
            return fail(WgStatus::NullPointer, "null argument");
        };
        if let Err(e) = g.group.check_index(a).and_then(|_| g.group.check_index(b)) {
            return from_error(e);
        }
        *out = g.group.mul(a, b);
        WgStatus::Ok
    })
}

/// Writes the index of `a⁻¹`.
///
/// # Safety
/// `group` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wg_group_inverse(group: *const WgGroup, a: usize, out: *mut usize) -> WgStatus {
    guard(|| {
        let (Some(g), false) = (group.as_ref(), out.is_null()) else {
            return fail(WgStatus::NullPointer, "null argument");
        };
        if let Err(e) = g.group.check_index(a) {
            return from_error(e);
        }
        *out = g.group.inv(a);
        WgStatus::Ok
    })
}

/// # Safety
/// `group` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wg_group_free(group: *mut WgGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Builds the pair `(G, K, ω)` with `K` generated by `seeds`. `weights`
/// holds one positive value per group element, or is NULL for `ω ≡ 1`.
/// The group handle may be freed afterwards.
///
/// # Safety
/// `group` must be a live handle, `seeds` must point to `n_seeds` values,
/// `weights` must be NULL or point to `n_weights` values, and `out` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wg_pair_new(
    group: *const WgGroup,
    seeds: *const usize,
    n_seeds: usize,
    weights: *const f64,
    n_weights: usize,
    out: *mut *mut WgPair,
) -> WgStatus {
    guard(|| {
        let (Some(g), false) = (group.as_ref(), out.is_null()) else {
            return fail(WgStatus::NullPointer, "null argument");
        };
        let seeds = match read_slice(seeds, n_seeds) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let weight = if weights.is_null() {
            Ok(Weight::uniform(g.group.order()))
        } else if n_weights != g.group.order() {
            Err(Error::LengthMismatch { expected: g.group.order(), found: n_weights })
        } else {
            Weight::new(std::slice::from_raw_parts(weights, n_weights).to_vec())
        };
        let built = weight.and_then(|w| {
            let k = subgroup_closure(&g.group, seeds)?;
            let pair = WeightedPair::new(&g.group, k, w)?;
            HeckeAlgebra::new(&g.group, &pair)
        });
        match built {
            Ok(algebra) => write_out(out, WgPair { group: g.group.clone(), algebra }),
            Err(e) => from_error(e),
        }
    })
}

/// Builds a pair from JSON subgroup and weight specs, as accepted by the
/// command line. `subgroup_json` NULL means the trivial subgroup and
/// `weight_json` NULL means `ω ≡ 1`.
///
/// # Safety
/// `group` must be a live handle, the strings NULL or NUL-terminated, and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wg_pair_from_json(
    group: *const WgGroup,
    subgroup_json: *const c_char,
    weight_json: *const c_char,
    out: *mut *mut WgPair,
) -> WgStatus {
    guard(|| {
        let (Some(g), false) = (group.as_ref(), out.is_null()) else {
            return fail(WgStatus::NullPointer, "null argument");
        };
        let optional = |p: *const c_char| if p.is_null() { Ok(None) } else { read_str(p).map(Some) };
        let (subgroup, weight) = match (optional(subgroup_json), optional(weight_json)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let built = (|| {
            let k = match subgroup {
                Some(text) => input::parse_json::<input::SubgroupSpec>(text, "subgroup")?.build(&g.group)?,
                None => SubgroupEmbedding::trivial(&g.group),
            };
            let w = match weight {
                Some(text) => {
                    let cosets = double_cosets(&g.group, &k);
                    input::parse_json::<input::WeightSpec>(text, "weight")?.build(&g.group, &cosets)?
                }
                None => Weight::uniform(g.group.order()),
            };
            let pair = WeightedPair::new(&g.group, k, w)?;
            HeckeAlgebra::new(&g.group, &pair)
        })();
        match built {
            Ok(algebra) => write_out(out, WgPair { group: g.group.clone(), algebra }),
            Err(e) => from_error(e),
        }
    })
}

/// Number of double cosets `KxK`, or 0 for a NULL handle.
///
/// # Safety
/// `pair` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wg_pair_coset_count(pair: *const WgPair) -> usize {
    pair.as_ref().map_or(0, |p| p.algebra.dim())
}

/// Writes the id of the double coset containing `x`.
///
/// # Safety
/// `pair` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wg_pair_coset_of(pair: *const WgPair, x: usize, out: *mut usize) -> WgStatus {
    guard(|| {
        let (Some(p), false) = (pair.as_ref(), out.is_null()) else {
            return fail(WgStatus::NullPointer, "null argument");
        };
        if let Err(e) = p.group.check_index(x) {
            return from_error(e);
        }
        *out = p.algebra.pair().cosets().coset_of(x);
        WgStatus::Ok
    })
}

/// Weighted convolution of two bi-invariant functions given by their coset
/// values. `f`, `g` and `out` each hold `2 * wg_pair_coset_count` doubles.
///
/// # Safety
/// All pointers must be valid for `2 * d` doubles.
#[no_mangle]
pub unsafe extern "C" fn wg_pair_convolve(
    pair: *const WgPair,
    f: *const f64,
    g: *const f64,
    out: *mut f64,
    len: usize,
) -> WgStatus {
    guard(|| {
        let Some(p) = pair.as_ref() else {
            return fail(WgStatus::NullPointer, "null pair");
        };
        let d = p.algebra.dim();
        if len != 2 * d {
            return fail(WgStatus::BufferTooSmall, format!("expected {} doubles, got {len}", 2 * d));
        }
        if out.is_null() {
            return fail(WgStatus::NullPointer, "null output buffer");
        }
        let (fv, gv) = match (read_slice(f, len), read_slice(g, len)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let fv = BiInvariantFunction::new(complex_from_interleaved(fv));
        let gv = BiInvariantFunction::new(complex_from_interleaved(gv));
        let h = p.algebra.convolve(&fv, &gv);
        let dst = std::slice::from_raw_parts_mut(out, len);
        for (i, v) in h.coset_values().iter().enumerate() {
            dst[2 * i] = v.re;
            dst[2 * i + 1] = v.im;
        }
        WgStatus::Ok
    })
}

/// # Safety
/// `pair` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wg_pair_free(pair: *mut WgPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Decides the Gelfand property and, when it holds, enumerates the
/// spherical functions and builds the Fourier table. A negative verdict is
/// not an error: the call returns `WG_STATUS_OK` and
/// [`wg_analysis_is_gelfand`] reports 0.
///
/// # Safety
/// `pair` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wg_analysis_run(
    pair: *const WgPair,
    tolerance: f64,
    seed: u64,
    out: *mut *mut WgAnalysis,
) -> WgStatus {
    guard(|| {
        let (Some(p), false) = (pair.as_ref(), out.is_null()) else {
            return fail(WgStatus::NullPointer, "null argument");
        };
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return fail(WgStatus::InvalidInput, "tolerance must be positive");
        }
        let report = match gelfand_report(&p.group, &p.algebra, None, tolerance) {
            Ok(r) => r,
            Err(e) => return from_error(e),
        };
        let spectral = if report.gelfand {
            let options = EnumerationOptions { seed, tolerance };
            match enumerate_spherical(&p.group, &p.algebra, &options) {
                Ok(set) => {
                    let table = FourierTable::build(&p.group, p.algebra.pair(), &set);
                    let inj = injectivity_check(&table);
                    Some((set, table, inj))
                }
                Err(e) => return from_error(e),
            }
        } else {
            None
        };
        write_out(out, WgAnalysis { report, spectral })
    })
}

/// 1 for a weighted Gelfand pair, 0 otherwise (or for a NULL handle).
///
/// # Safety
/// `analysis` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wg_analysis_is_gelfand(analysis: *const WgAnalysis) -> i32 {
    analysis.as_ref().map_or(0, |a| a.report.gelfand as i32)
}

/// Number of spherical functions; 0 when the pair is not Gelfand.
///
/// # Safety
/// `analysis` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wg_analysis_spherical_count(analysis: *const WgAnalysis) -> usize {
    analysis.as_ref().and_then(|a| a.spectral.as_ref()).map_or(0, |(s, _, _)| s.len())
}

/// Copies the coset values of spherical function `index` into `out`,
/// which must hold `2 * d` doubles.
///
/// # Safety
/// `analysis` must be a live handle and `out` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn wg_analysis_spherical_values(
    analysis: *const WgAnalysis,
    index: usize,
    out: *mut f64,
    len: usize,
) -> WgStatus {
    guard(|| {
        let (Some(a), false) = (analysis.as_ref(), out.is_null()) else {
            return fail(WgStatus::NullPointer, "null argument");
        };
        let Some((set, _, _)) = &a.spectral else {
            return fail(WgStatus::NotGelfand, "not a weighted Gelfand pair");
        };
        if index >= set.len() {
            return fail(WgStatus::OutOfRange, format!("spherical index {index} out of range (count {})", set.len()));
        }
        let values = set.entries()[index].function.coset_values();
        if len < 2 * values.len() {
            return fail(WgStatus::BufferTooSmall, format!("need {} doubles, got {len}", 2 * values.len()));
        }
        let dst = std::slice::from_raw_parts_mut(out, len);
        for (i, v) in values.iter().enumerate() {
            dst[2 * i] = v.re;
            dst[2 * i + 1] = v.im;
        }
        WgStatus::Ok
    })
}

/// Numerical rank of the Fourier table.
///
/// # Safety
/// `analysis` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wg_analysis_fourier_rank(analysis: *const WgAnalysis, out: *mut usize) -> WgStatus {
    guard(|| {
        let (Some(a), false) = (analysis.as_ref(), out.is_null()) else {
            return fail(WgStatus::NullPointer, "null argument");
        };
        match &a.spectral {
            Some((_, _, inj)) => {
                *out = inj.rank;
                WgStatus::Ok
            }
            None => fail(WgStatus::NotGelfand, "not a weighted Gelfand pair"),
        }
    })
}

#[derive(Serialize)]
struct AnalysisJson<'a> {
    gelfand: &'a GelfandReport,
    spherical: Option<&'a SphericalSet>,
    fourier_rank: Option<usize>,
    fourier_condition: Option<f64>,
}

/// The analysis as a JSON string, to be released with [`wg_string_free`].
/// Returns NULL for a NULL handle.
///
/// # Safety
/// `analysis` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wg_analysis_report_json(analysis: *const WgAnalysis) -> *mut c_char {
    let Some(a) = analysis.as_ref() else {
        set_error("null analysis");
        return ptr::null_mut();
    };
    let doc = AnalysisJson {
        gelfand: &a.report,
        spherical: a.spectral.as_ref().map(|(s, _, _)| s),
        fourier_rank: a.spectral.as_ref().map(|(_, _, i)| i.rank),
        fourier_condition: a.spectral.as_ref().map(|(_, _, i)| i.condition).filter(|c| c.is_finite()),
    };
    into_c_string(serde_json::to_string(&doc).expect("serializable"))
}

/// # Safety
/// `analysis` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wg_analysis_free(analysis: *mut WgAnalysis) {
    if !analysis.is_null() {
        drop(Box::from_raw(analysis));
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Runs the command-line `analyze` pipeline on JSON specs and writes the
/// full report to `*report` (release with [`wg_string_free`]) and the
/// command-line exit code to `*exit_code`. `subgroup_json` and
/// `weight_json` may be NULL.
///
/// The report is produced for exit codes 0 and 2; otherwise `*report` is
/// NULL and the status describes the failure.
///
/// # Safety
/// String arguments must be NULL (where allowed) or NUL-terminated, and the
/// output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wg_analyze_json(
    group_json: *const c_char,
    subgroup_json: *const c_char,
    weight_json: *const c_char,
    report: *mut *mut c_char,
    exit_code: *mut i32,
) -> WgStatus {
    guard(|| {
        if report.is_null() || exit_code.is_null() {
            return fail(WgStatus::NullPointer, "null output pointer");
        }
        *report = ptr::null_mut();
        let group = match read_str(group_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let optional = |p: *const c_char| if p.is_null() { Ok(None) } else { read_str(p).map(Some) };
        let (subgroup, weight) = match (optional(subgroup_json), optional(weight_json)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let result = (|| {
            let mut request = AnalysisRequest::new(Command::Analyze, input::parse_json(group, "group")?);
            request.subgroup = subgroup.map(|s| input::parse_json(s, "subgroup")).transpose()?;
            request.weight = weight.map(|s| input::parse_json(s, "weight")).transpose()?;
            cli::run_analyze(&request)
        })();
        match result {
            Ok(outcome) => {
                *exit_code = outcome.status.code();
                *report = into_c_string(outcome.report.to_json());
                WgStatus::Ok
            }
            Err(e) => {
                *exit_code = ExitStatus::for_error(&e).code();
                from_error(e)
            }
        }
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
