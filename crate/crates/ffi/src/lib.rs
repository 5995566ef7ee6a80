//! C ABI over `simplicial-score`.
//!
//! Complexes are opaque handles created by `ss_complex_*` constructors and
//! released with `ss_complex_free`. Every fallible call returns an
//! `SsStatus`; on failure `ss_last_error_message` describes the problem for
//! the calling thread. Matrices are dense and row-major. Missing results
//! (constant features, untested p-values) are written as NaN.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use simplicial_score::complex::{build_vietoris_rips, DistanceMatrix, SimplicialComplex, WeightScheme};
use simplicial_score::features::{Aggregation, FeatureSet};
use simplicial_score::inference::{score_report, PermutationConfig};
use simplicial_score::spectral::eigenmap;
use simplicial_score::Error;

/// Opaque simplicial complex.
pub struct SsComplex {
    inner: SimplicialComplex,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotClosedUnderInclusion = 4,
    DuplicateSimplex = 5,
    MalformedDocument = 6,
    NoSimplicesAtDimension = 7,
    MissingWeights = 8,
    ZeroVarianceFeature = 9,
    ConvergenceFailure = 10,
    InvalidPValue = 11,
    MissingTupleValue = 12,
    Io = 13,
    Panic = 14,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsWeights {
    Unit = 0,
    /// Coface sums with unit top weights and a 1e-12 floor.
    Coface = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsAggregation {
    Mean = 0,
    Min = 1,
    Max = 2,
}

impl From<SsAggregation> for Aggregation {
    fn from(a: SsAggregation) -> Self {
        match a {
            SsAggregation::Mean => Aggregation::Mean,
            SsAggregation::Min => Aggregation::Min,
            SsAggregation::Max => Aggregation::Max,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SsStatus {
    match e {
        Error::ZeroVarianceRow { .. } | Error::ZeroVarianceFeature { .. } => SsStatus::ZeroVarianceFeature,
        Error::DimensionMismatch { .. } => SsStatus::DimensionMismatch,
        Error::NotClosedUnderInclusion { .. } => SsStatus::NotClosedUnderInclusion,
        Error::DuplicateSimplex(_) => SsStatus::DuplicateSimplex,
        Error::MalformedDocument(_) | Error::Json(_) => SsStatus::MalformedDocument,
        Error::NoSimplicesAtDimension { .. } => SsStatus::NoSimplicesAtDimension,
        Error::MissingWeights => SsStatus::MissingWeights,
        Error::ConvergenceFailure { .. } => SsStatus::ConvergenceFailure,
        Error::InvalidPValue { .. } => SsStatus::InvalidPValue,
        Error::MissingTupleValue(_) => SsStatus::MissingTupleValue,
        Error::Io { .. } | Error::Parse { .. } => SsStatus::Io,
        _ => SsStatus::InvalidArgument,
    }
}

/// Runs `f`, turning errors and panics into a status plus a thread-local
/// message.
fn guard(f: impl FnOnce() -> Result<(), (SsStatus, String)>) -> SsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SsStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            SsStatus::Panic
        }
    }
}

fn lib(e: Error) -> (SsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SsStatus, String) {
    (SsStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> (SsStatus, String) {
    (SsStatus::InvalidArgument, msg.into())
}

/// Message describing the last failure on this thread, or null. Valid until
/// the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn ss_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds the Vietoris-Rips complex of an `n x n` distance matrix at scale
/// `epsilon` up to dimension `max_dim`. The complex has no weights yet.
///
/// # Safety
/// `distances` must point to `n * n` doubles and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn ss_complex_from_distances(
    distances: *const f64,
    n: usize,
    epsilon: f64,
    max_dim: usize,
    out: *mut *mut SsComplex,
) -> SsStatus {
    guard(|| {
        if distances.is_null() {
            return Err(null("distances"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let data = slice::from_raw_parts(distances, n * n).to_vec();
        let d = DistanceMatrix::new(n, data).map_err(lib)?;
        let k = build_vietoris_rips(&d, epsilon, max_dim).map_err(lib)?;
        *out = Box::into_raw(Box::new(SsComplex { inner: k }));
        Ok(())
    })
}

/// Parses and validates a complex JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ss_complex_from_json(json: *const c_char, out: *mut *mut SsComplex) -> SsStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| (SsStatus::MalformedDocument, "document is not UTF-8".to_string()))?;
        let k = SimplicialComplex::from_json_str(text).map_err(lib)?;
        *out = Box::into_raw(Box::new(SsComplex { inner: k }));
        Ok(())
    })
}

/// Serialises a complex to JSON. Release the string with `ss_string_free`.
///
/// # Safety
/// `complex` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ss_complex_to_json(complex: *const SsComplex, out: *mut *mut c_char) -> SsStatus {
    guard(|| {
        let k = complex.as_ref().ok_or_else(|| null("complex"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CString::new(k.inner.to_json_string()).map_err(|e| invalid(e.to_string()))?;
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn ss_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `complex` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ss_complex_compute_weights(complex: *mut SsComplex, scheme: SsWeights) -> SsStatus {
    guard(|| {
        let k = complex.as_mut().ok_or_else(|| null("complex"))?;
        let scheme = match scheme {
            SsWeights::Unit => WeightScheme::Unit,
            SsWeights::Coface => WeightScheme::default(),
        };
        k.inner.compute_weights(scheme).map_err(lib)
    })
}

/// Number of q-simplices; zero for a null handle.
///
/// # Safety
/// `complex` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ss_complex_simplex_count(complex: *const SsComplex, q: usize) -> usize {
    complex.as_ref().map_or(0, |k| k.inner.count(q))
}

/// # Safety
/// `complex` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ss_complex_vertex_count(complex: *const SsComplex) -> usize {
    complex.as_ref().map_or(0, |k| k.inner.vertex_count())
}

/// # Safety
/// `complex` must come from this library or be null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn ss_complex_free(complex: *mut SsComplex) {
    if !complex.is_null() {
        drop(Box::from_raw(complex));
    }
}

unsafe fn feature_set(features: *const f64, n_features: usize, n_samples: usize) -> Result<FeatureSet, (SsStatus, String)> {
    if features.is_null() {
        return Err(null("features"));
    }
    let flat = slice::from_raw_parts(features, n_features * n_samples);
    let rows = flat.chunks(n_samples.max(1)).take(n_features).map(<[f64]>::to_vec).collect();
    let names = (0..n_features).map(|i| i.to_string()).collect();
    FeatureSet::from_points(names, rows).map_err(lib)
}

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, (SsStatus, String)> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| invalid(e.to_string()))?;
    Ok(pool.install(f))
}

/// Scores `n_features` point features (row-major, `n_samples` columns each)
/// as q-forms. Constant features get NaN.
///
/// # Safety
/// `complex` must be a live weighted handle, `features` must hold
/// `n_features * n_samples` doubles and `scores` room for `n_features`.
#[no_mangle]
pub unsafe extern "C" fn ss_score_features(
    complex: *const SsComplex,
    features: *const f64,
    n_features: usize,
    n_samples: usize,
    q: usize,
    agg: SsAggregation,
    scores: *mut f64,
) -> SsStatus {
    guard(|| {
        let k = complex.as_ref().ok_or_else(|| null("complex"))?;
        if scores.is_null() {
            return Err(null("scores"));
        }
        let fs = feature_set(features, n_features, n_samples)?;
        let report = score_report(&k.inner, &fs, q, agg.into(), None, "").map_err(lib)?;
        let out = slice::from_raw_parts_mut(scores, n_features);
        for (o, f) in out.iter_mut().zip(&report.features) {
            *o = f.score.unwrap_or(f64::NAN);
        }
        Ok(())
    })
}

/// Scores, permutation p-values, BH q-values and rejections at level
/// `alpha`. `threads = 0` uses every core; results do not depend on it.
///
/// # Safety
/// As `ss_score_features`; `p_values`, `q_values` and `rejected` must each
/// have room for `n_features` entries. Any output pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn ss_permutation_test(
    complex: *const SsComplex,
    features: *const f64,
    n_features: usize,
    n_samples: usize,
    q: usize,
    agg: SsAggregation,
    n_permutations: usize,
    seed: u64,
    alpha: f64,
    threads: usize,
    scores: *mut f64,
    p_values: *mut f64,
    q_values: *mut f64,
    rejected: *mut u8,
) -> SsStatus {
    guard(|| {
        let k = complex.as_ref().ok_or_else(|| null("complex"))?;
        let fs = feature_set(features, n_features, n_samples)?;
        let cfg = PermutationConfig {
            n_permutations,
            seed,
            alpha,
        };
        cfg.validate().map_err(lib)?;
        let report = with_threads(threads, || score_report(&k.inner, &fs, q, agg.into(), Some(&cfg), ""))?.map_err(lib)?;
        let nan = |x: Option<f64>| x.unwrap_or(f64::NAN);
        for (i, f) in report.features.iter().enumerate() {
            if !scores.is_null() {
                *scores.add(i) = nan(f.score);
            }
            if !p_values.is_null() {
                *p_values.add(i) = nan(f.p_value);
            }
            if !q_values.is_null() {
                *q_values.add(i) = nan(f.q_value);
            }
            if !rejected.is_null() {
                *rejected.add(i) = u8::from(f.rejected);
            }
        }
        Ok(())
    })
}

/// First `m` eigenpairs of the q-Laplacian. `coordinates` receives one row of
/// `m` values per q-simplex in canonical order.
///
/// # Safety
/// `complex` must be a live weighted handle, `eigenvalues` must have room
/// for `m` doubles and `coordinates` for `m * ss_complex_simplex_count(q)`.
#[no_mangle]
pub unsafe extern "C" fn ss_eigenmap(
    complex: *const SsComplex,
    q: usize,
    m: usize,
    eigenvalues: *mut f64,
    coordinates: *mut f64,
) -> SsStatus {
    guard(|| {
        let k = complex.as_ref().ok_or_else(|| null("complex"))?;
        if eigenvalues.is_null() {
            return Err(null("eigenvalues"));
        }
        if coordinates.is_null() {
            return Err(null("coordinates"));
        }
        let map = eigenmap(&k.inner, q, m).map_err(lib)?;
        slice::from_raw_parts_mut(eigenvalues, m).copy_from_slice(&map.eigenvalues);
        let out = slice::from_raw_parts_mut(coordinates, m * map.coordinates.len());
        for (dst, row) in out.chunks_mut(m).zip(&map.coordinates) {
            dst.copy_from_slice(row);
        }
        Ok(())
    })
}
