//! C ABI for the covpovm library.
//!
//! Every object crosses the boundary as an opaque handle created by a
//! `covpovm_*_new`-style constructor and released by the matching
//! `covpovm_*_free`. Functions return [`CovpovmStatus`]; scalar results come
//! back through out-pointers. Complex buffers are interleaved `re, im`
//! doubles in row-major order. On any non-`Ok` status a thread-local
//! message describing the failure is available through
//! [`covpovm_last_error_message`].
//!
//! The C header is generated by cbindgen into `include/covpovm.h`.

use std::cell::RefCell;
use std::os::raw::c_char;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use covpovm::axb::{
    apply_formal_degree_root, apply_pi_plus, orthogonality_defect, povm_quadratic_form,
    wavelet_coefficient, AffineElement, DensityMixture, GroupQuadrature, GroupRegion, HalfLineGrid,
    SampledFunction,
};
use covpovm::error::Error;
use covpovm::fock::LinearOperator;
use covpovm::heisenberg::{
    covariance_residual, outcome_density, povm_element, probability, PhaseSpaceRegion,
    QuadratureRule, QuadratureSpec, Rect,
};
use covpovm::povm::{normalization_defect, DensityOperator};

/// Result codes of every `covpovm_*` call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovpovmStatus {
    /// Operation succeeded.
    Ok = 0,
    /// A pointer argument was null.
    NullPointer = 1,
    /// An argument violated a precondition (dimension, range, coverage...).
    InvalidArgument = 2,
    /// Dimensions of the operands do not match.
    DimensionMismatch = 3,
}

/// Quadrature rule selector for region integrals.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovpovmQuadRule {
    /// Uniform nodes, trapezoid weights (robust under disk masking).
    Trapezoid = 0,
    /// Tensor Gauss-Legendre (spectrally accurate over the full box).
    GaussLegendre = 1,
}

impl From<CovpovmQuadRule> for QuadratureRule {
    fn from(r: CovpovmQuadRule) -> Self {
        match r {
            CovpovmQuadRule::Trapezoid => QuadratureRule::Trapezoid,
            CovpovmQuadRule::GaussLegendre => QuadratureRule::GaussLegendre,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(err: &Error) -> CovpovmStatus {
    match err {
        Error::DimensionMismatch { .. } | Error::GridMismatch => CovpovmStatus::DimensionMismatch,
        _ => CovpovmStatus::InvalidArgument,
    }
}

fn fail(err: Error) -> CovpovmStatus {
    let code = status_of(&err);
    set_error(err.to_string());
    code
}

fn null_arg(name: &str) -> CovpovmStatus {
    set_error(format!("null pointer argument: {name}"));
    CovpovmStatus::NullPointer
}

/// Copies the message of the most recent failure on this thread into `buf`
/// (NUL-terminated, truncated to `len`). Returns the full message length in
/// bytes, excluding the terminator. `buf` may be null to query the length.
///
/// # Safety
/// `buf` must point to at least `len` writable bytes, or be null.
#[no_mangle]
pub unsafe extern "C" fn covpovm_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

// ---------------------------------------------------------------------------
// density operators

/// Opaque trace-one positive operator.
pub struct CovpovmDensity(DensityOperator);

/// Projector onto the lowest number state.
///
/// # Safety
/// `out` must be a valid pointer; the handle must be released with
/// [`covpovm_density_free`].
#[no_mangle]
pub unsafe extern "C" fn covpovm_density_vacuum(
    dim: usize,
    out: *mut *mut CovpovmDensity,
) -> CovpovmStatus {
    if out.is_null() {
        return null_arg("out");
    }
    match DensityOperator::vacuum_projector(dim) {
        Ok(d) => {
            *out = Box::into_raw(Box::new(CovpovmDensity(d)));
            CovpovmStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Projector onto number state `level`.
///
/// # Safety
/// As for [`covpovm_density_vacuum`].
#[no_mangle]
pub unsafe extern "C" fn covpovm_density_fock(
    dim: usize,
    level: usize,
    out: *mut *mut CovpovmDensity,
) -> CovpovmStatus {
    if out.is_null() {
        return null_arg("out");
    }
    match DensityOperator::fock_projector(dim, level) {
        Ok(d) => {
            *out = Box::into_raw(Box::new(CovpovmDensity(d)));
            CovpovmStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Diagonal mixture over the lowest levels; weights normalized to sum one.
///
/// # Safety
/// `weights` must point to `weights_len` doubles; `out` as above.
#[no_mangle]
pub unsafe extern "C" fn covpovm_density_mixed(
    dim: usize,
    weights: *const f64,
    weights_len: usize,
    out: *mut *mut CovpovmDensity,
) -> CovpovmStatus {
    if out.is_null() {
        return null_arg("out");
    }
    if weights.is_null() {
        return null_arg("weights");
    }
    let w = std::slice::from_raw_parts(weights, weights_len);
    match DensityOperator::mixed_diagonal(dim, w) {
        Ok(d) => {
            *out = Box::into_raw(Box::new(CovpovmDensity(d)));
            CovpovmStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Validates a full matrix as a density operator at tolerance `tol`.
/// `entries` holds `dim * dim` interleaved `re, im` pairs, row-major.
///
/// # Safety
/// `entries` must point to `2 * dim * dim` doubles; `out` as above.
#[no_mangle]
pub unsafe extern "C" fn covpovm_density_from_entries(
    dim: usize,
    entries: *const f64,
    tol: f64,
    out: *mut *mut CovpovmDensity,
) -> CovpovmStatus {
    if out.is_null() {
        return null_arg("out");
    }
    if entries.is_null() {
        return null_arg("entries");
    }
    let raw = std::slice::from_raw_parts(entries, 2 * dim * dim);
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let k = 2 * (i * dim + j);
            mat[(i, j)] = Complex64::new(raw[k], raw[k + 1]);
        }
    }
    match DensityOperator::validate(mat, tol) {
        Ok(d) => {
            *out = Box::into_raw(Box::new(CovpovmDensity(d)));
            CovpovmStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Dimension of the operator, 0 for null.
///
/// # Safety
/// `density` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn covpovm_density_dim(density: *const CovpovmDensity) -> usize {
    if density.is_null() {
        0
    } else {
        (*density).0.dim()
    }
}

/// Releases a density handle. Null is ignored.
///
/// # Safety
/// `density` must originate from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn covpovm_density_free(density: *mut CovpovmDensity) {
    if !density.is_null() {
        drop(Box::from_raw(density));
    }
}

// ---------------------------------------------------------------------------
// phase-space regions and quadrature

/// Opaque union-of-primitives region in the phase plane.
pub struct CovpovmRegion(PhaseSpaceRegion);

/// Creates an empty region; add primitives with the `covpovm_region_add_*`
/// functions.
///
/// # Safety
/// `out` must be valid; release with [`covpovm_region_free`].
#[no_mangle]
pub unsafe extern "C" fn covpovm_region_new(out: *mut *mut CovpovmRegion) -> CovpovmStatus {
    if out.is_null() {
        return null_arg("out");
    }
    *out = Box::into_raw(Box::new(CovpovmRegion(PhaseSpaceRegion::empty())));
    CovpovmStatus::Ok
}

/// Adds the closed rectangle `[p_lo, p_hi] x [q_lo, q_hi]`.
///
/// # Safety
/// `region` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn covpovm_region_add_rect(
    region: *mut CovpovmRegion,
    p_lo: f64,
    p_hi: f64,
    q_lo: f64,
    q_hi: f64,
) -> CovpovmStatus {
    if region.is_null() {
        return null_arg("region");
    }
    match Rect::new(p_lo, p_hi, q_lo, q_hi) {
        Ok(r) => {
            (*region).0.add_rect(r);
            CovpovmStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Adds a closed disk.
///
/// # Safety
/// `region` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn covpovm_region_add_disk(
    region: *mut CovpovmRegion,
    center_p: f64,
    center_q: f64,
    radius: f64,
) -> CovpovmStatus {
    if region.is_null() {
        return null_arg("region");
    }
    match (*region).0.add_disk(center_p, center_q, radius) {
        Ok(()) => CovpovmStatus::Ok,
        Err(e) => fail(e),
    }
}

/// Releases a region handle. Null is ignored.
///
/// # Safety
/// `region` must originate from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn covpovm_region_free(region: *mut CovpovmRegion) {
    if !region.is_null() {
        drop(Box::from_raw(region));
    }
}

unsafe fn quad_of(
    rule: CovpovmQuadRule,
    nodes_p: usize,
    nodes_q: usize,
    bbox: *const f64,
    region: &PhaseSpaceRegion,
) -> Result<QuadratureSpec, Error> {
    let rect = if bbox.is_null() {
        region
            .bounding_box()
            .map_or_else(|| Rect::new(0.0, 0.0, 0.0, 0.0), Ok)?
    } else {
        let b = std::slice::from_raw_parts(bbox, 4);
        Rect::new(b[0], b[1], b[2], b[3])?
    };
    Ok(QuadratureSpec::new(rule.into(), nodes_p, nodes_q, rect))
}

// ---------------------------------------------------------------------------
// POVM operators

/// Opaque dense complex operator (a POVM element).
pub struct CovpovmOperator(LinearOperator);

/// Integrates the POVM element of `density` over `region`.
/// `bbox` is `[p_lo, p_hi, q_lo, q_hi]` or null for the region's own box.
///
/// # Safety
/// Handles must be live; `bbox` null or 4 doubles; `out` valid. Release the
/// result with [`covpovm_operator_free`].
#[no_mangle]
pub unsafe extern "C" fn covpovm_povm_element(
    density: *const CovpovmDensity,
    region: *const CovpovmRegion,
    rule: CovpovmQuadRule,
    nodes_p: usize,
    nodes_q: usize,
    bbox: *const f64,
    out: *mut *mut CovpovmOperator,
) -> CovpovmStatus {
    if out.is_null() {
        return null_arg("out");
    }
    if density.is_null() {
        return null_arg("density");
    }
    if region.is_null() {
        return null_arg("region");
    }
    let quad = match quad_of(rule, nodes_p, nodes_q, bbox, &(*region).0) {
        Ok(q) => q,
        Err(e) => return fail(e),
    };
    match povm_element(&(*density).0, &(*region).0, &quad) {
        Ok(op) => {
            *out = Box::into_raw(Box::new(CovpovmOperator(op)));
            CovpovmStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Dimension of an operator handle, 0 for null.
///
/// # Safety
/// `op` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn covpovm_operator_dim(op: *const CovpovmOperator) -> usize {
    if op.is_null() {
        0
    } else {
        (*op).0.dim()
    }
}

/// Reads entry `(row, col)` of an operator.
///
/// # Safety
/// `op` live; `re`, `im` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn covpovm_operator_entry(
    op: *const CovpovmOperator,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> CovpovmStatus {
    if op.is_null() {
        return null_arg("op");
    }
    if re.is_null() || im.is_null() {
        return null_arg("re/im");
    }
    let n = (*op).0.dim();
    if row >= n || col >= n {
        set_error(format!("entry ({row}, {col}) outside a {n} x {n} operator"));
        return CovpovmStatus::InvalidArgument;
    }
    let z = (*op).0.entry(row, col);
    *re = z.re;
    *im = z.im;
    CovpovmStatus::Ok
}

/// Copies all entries row-major as interleaved `re, im` doubles.
/// `buf_len` counts doubles and must be at least `2 * dim * dim`.
///
/// # Safety
/// `buf` must point to `buf_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn covpovm_operator_copy(
    op: *const CovpovmOperator,
    buf: *mut f64,
    buf_len: usize,
) -> CovpovmStatus {
    if op.is_null() {
        return null_arg("op");
    }
    if buf.is_null() {
        return null_arg("buf");
    }
    let n = (*op).0.dim();
    if buf_len < 2 * n * n {
        set_error(format!(
            "buffer holds {buf_len} doubles, need {}",
            2 * n * n
        ));
        return CovpovmStatus::InvalidArgument;
    }
    let slice = std::slice::from_raw_parts_mut(buf, 2 * n * n);
    for i in 0..n {
        for j in 0..n {
            let z = (*op).0.entry(i, j);
            let k = 2 * (i * n + j);
            slice[k] = z.re;
            slice[k + 1] = z.im;
        }
    }
    CovpovmStatus::Ok
}

/// Releases an operator handle. Null is ignored.
///
/// # Safety
/// `op` must originate from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn covpovm_operator_free(op: *mut CovpovmOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Phase-space outcome density `(1/2pi) tr(rho D T D-dagger)` at `(p, q)`.
///
/// # Safety
/// Handles live, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn covpovm_outcome_density(
    density: *const CovpovmDensity,
    rho: *const CovpovmDensity,
    p: f64,
    q: f64,
    out: *mut f64,
) -> CovpovmStatus {
    if density.is_null() || rho.is_null() {
        return null_arg("density/rho");
    }
    if out.is_null() {
        return null_arg("out");
    }
    match outcome_density(&(*density).0, &(*rho).0, p, q) {
        Ok(v) => {
            *out = v;
            CovpovmStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Measurement probability `tr(rho Q_T(region))`.
///
/// # Safety
/// As for [`covpovm_povm_element`]; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn covpovm_probability(
    density: *const CovpovmDensity,
    rho: *const CovpovmDensity,
    region: *const CovpovmRegion,
    rule: CovpovmQuadRule,
    nodes_p: usize,
    nodes_q: usize,
    bbox: *const f64,
    out: *mut f64,
) -> CovpovmStatus {
    if density.is_null() || rho.is_null() {
        return null_arg("density/rho");
    }
    if region.is_null() {
        return null_arg("region");
    }
    if out.is_null() {
        return null_arg("out");
    }
    let quad = match quad_of(rule, nodes_p, nodes_q, bbox, &(*region).0) {
        Ok(q) => q,
        Err(e) => return fail(e),
    };
    match probability(&(*density).0, &(*rho).0, &(*region).0, &quad) {
        Ok(v) => {
            *out = v;
            CovpovmStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Covariance defect between the shifted element and the conjugated one,
/// measured on the top-left `dim/2` block.
///
/// # Safety
/// As for [`covpovm_povm_element`]; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn covpovm_covariance_residual(
    density: *const CovpovmDensity,
    shift_p: f64,
    shift_q: f64,
    region: *const CovpovmRegion,
    rule: CovpovmQuadRule,
    nodes_p: usize,
    nodes_q: usize,
    bbox: *const f64,
    out: *mut f64,
) -> CovpovmStatus {
    if density.is_null() {
        return null_arg("density");
    }
    if region.is_null() {
        return null_arg("region");
    }
    if out.is_null() {
        return null_arg("out");
    }
    let quad = match quad_of(rule, nodes_p, nodes_q, bbox, &(*region).0) {
        Ok(q) => q,
        Err(e) => return fail(e),
    };
    match covariance_residual(&(*density).0, (shift_p, shift_q), &(*region).0, &quad) {
        Ok(v) => {
            *out = v;
            CovpovmStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Deviation of the element over the centred square of half-width
/// `box_half_width` from the identity on the lowest `low_block` levels,
/// with an `nodes x nodes` Gauss-Legendre rule.
///
/// # Safety
/// `density` live, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn covpovm_normalization_defect(
    density: *const CovpovmDensity,
    box_half_width: f64,
    low_block: usize,
    nodes: usize,
    out: *mut f64,
) -> CovpovmStatus {
    if density.is_null() {
        return null_arg("density");
    }
    if out.is_null() {
        return null_arg("out");
    }
    let r = box_half_width;
    let rect = match Rect::new(-r, r, -r, r) {
        Ok(rect) => rect,
        Err(e) => return fail(e),
    };
    let quad = QuadratureSpec::gauss_legendre(nodes, nodes, rect);
    match normalization_defect(&(*density).0, r, low_block, &quad) {
        Ok(v) => {
            *out = v;
            CovpovmStatus::Ok
        }
        Err(e) => fail(e),
    }
}

// ---------------------------------------------------------------------------
// half-line grid and sampled functions

/// Opaque geometric half-line grid.
pub struct CovpovmGrid(Arc<HalfLineGrid>);

/// Opaque complex function sampled on a grid.
pub struct CovpovmFunction(SampledFunction);

/// Geometric grid `x_k = x_min * ratio^k`, `k = 0..count-1`.
///
/// # Safety
/// `out` valid; release with [`covpovm_grid_free`].
#[no_mangle]
pub unsafe extern "C" fn covpovm_grid_new(
    x_min: f64,
    ratio: f64,
    count: usize,
    out: *mut *mut CovpovmGrid,
) -> CovpovmStatus {
    if out.is_null() {
        return null_arg("out");
    }
    match HalfLineGrid::geometric(x_min, ratio, count) {
        Ok(g) => {
            *out = Box::into_raw(Box::new(CovpovmGrid(g)));
            CovpovmStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Number of grid nodes, 0 for null.
///
/// # Safety
/// `grid` live or null.
#[no_mangle]
pub unsafe extern "C" fn covpovm_grid_len(grid: *const CovpovmGrid) -> usize {
    if grid.is_null() {
        0
    } else {
        (*grid).0.len()
    }
}

/// Releases a grid handle. Null is ignored.
///
/// # Safety
/// `grid` must originate from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn covpovm_grid_free(grid: *mut CovpovmGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Function from `count` interleaved `re, im` samples.
///
/// # Safety
/// `values` must hold `2 * count` doubles where `count` is the grid length;
/// `out` valid. Release with [`covpovm_function_free`].
#[no_mangle]
pub unsafe extern "C" fn covpovm_function_from_values(
    grid: *const CovpovmGrid,
    values: *const f64,
    values_len: usize,
    out: *mut *mut CovpovmFunction,
) -> CovpovmStatus {
    if grid.is_null() {
        return null_arg("grid");
    }
    if values.is_null() {
        return null_arg("values");
    }
    if out.is_null() {
        return null_arg("out");
    }
    let n = (*grid).0.len();
    if values_len != 2 * n {
        set_error(format!("expected {} doubles, got {values_len}", 2 * n));
        return CovpovmStatus::DimensionMismatch;
    }
    let raw = std::slice::from_raw_parts(values, values_len);
    let vals: Vec<Complex64> = (0..n)
        .map(|k| Complex64::new(raw[2 * k], raw[2 * k + 1]))
        .collect();
    match SampledFunction::from_values(Arc::clone(&(*grid).0), vals) {
        Ok(f) => {
            *out = Box::into_raw(Box::new(CovpovmFunction(f)));
            CovpovmStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Unit-norm smooth bump centred at `center_x` with logarithmic half-width
/// `half_width_ln`.
///
/// # Safety
/// `grid` live, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn covpovm_function_bump(
    grid: *const CovpovmGrid,
    center_x: f64,
    half_width_ln: f64,
    out: *mut *mut CovpovmFunction,
) -> CovpovmStatus {
    if grid.is_null() {
        return null_arg("grid");
    }
    if out.is_null() {
        return null_arg("out");
    }
    match SampledFunction::bump(Arc::clone(&(*grid).0), center_x, half_width_ln) {
        Ok(f) => {
            *out = Box::into_raw(Box::new(CovpovmFunction(f)));
            CovpovmStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Squared norm of a sampled function.
///
/// # Safety
/// `f` live, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn covpovm_function_norm_sq(
    f: *const CovpovmFunction,
    out: *mut f64,
) -> CovpovmStatus {
    if f.is_null() {
        return null_arg("f");
    }
    if out.is_null() {
        return null_arg("out");
    }
    *out = (*f).0.norm_sq();
    CovpovmStatus::Ok
}

/// Releases a function handle. Null is ignored.
///
/// # Safety
/// `f` must originate from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn covpovm_function_free(f: *mut CovpovmFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Applies the half-line representation element `(b, a)`; fails when the
/// squared-norm fraction lost off the grid edges exceeds `max_support_loss`
/// or `a` is not a grid-compatible power of the ratio.
///
/// # Safety
/// `f` live, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn covpovm_apply_pi_plus(
    b: f64,
    a: f64,
    f: *const CovpovmFunction,
    max_support_loss: f64,
    out: *mut *mut CovpovmFunction,
) -> CovpovmStatus {
    if f.is_null() {
        return null_arg("f");
    }
    if out.is_null() {
        return null_arg("out");
    }
    let g = match AffineElement::new(b, a) {
        Ok(g) => g,
        Err(e) => return fail(e),
    };
    match apply_pi_plus(g, &(*f).0, max_support_loss) {
        Ok(res) => {
            *out = Box::into_raw(Box::new(CovpovmFunction(res)));
            CovpovmStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Multiplies by `sqrt(x)` (the formal-degree root of the construction).
///
/// # Safety
/// `f` live, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn covpovm_apply_degree_root(
    f: *const CovpovmFunction,
    out: *mut *mut CovpovmFunction,
) -> CovpovmStatus {
    if f.is_null() {
        return null_arg("f");
    }
    if out.is_null() {
        return null_arg("out");
    }
    *out = Box::into_raw(Box::new(CovpovmFunction(apply_formal_degree_root(&(*f).0))));
    CovpovmStatus::Ok
}

/// Wavelet coefficient `<v, pi+(b, a) C eta>`.
///
/// # Safety
/// Handles live; `re`, `im` valid.
#[no_mangle]
pub unsafe extern "C" fn covpovm_wavelet_coefficient(
    v: *const CovpovmFunction,
    eta: *const CovpovmFunction,
    b: f64,
    a: f64,
    re: *mut f64,
    im: *mut f64,
) -> CovpovmStatus {
    if v.is_null() || eta.is_null() {
        return null_arg("v/eta");
    }
    if re.is_null() || im.is_null() {
        return null_arg("re/im");
    }
    let g = match AffineElement::new(b, a) {
        Ok(g) => g,
        Err(e) => return fail(e),
    };
    match wavelet_coefficient(&(*v).0, &(*eta).0, g) {
        Ok(z) => {
            *re = z.re;
            *im = z.im;
            CovpovmStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Deviation of the windowed orthogonality integral from
/// `norm_sq(u) * norm_sq(v)`.
///
/// # Safety
/// Handles live, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn covpovm_orthogonality_defect(
    u: *const CovpovmFunction,
    v: *const CovpovmFunction,
    b_lo: f64,
    b_hi: f64,
    a_lo: f64,
    a_hi: f64,
    b_nodes: usize,
    out: *mut f64,
) -> CovpovmStatus {
    if u.is_null() || v.is_null() {
        return null_arg("u/v");
    }
    if out.is_null() {
        return null_arg("out");
    }
    let window = match GroupRegion::new(b_lo, b_hi, a_lo, a_hi) {
        Ok(w) => w,
        Err(e) => return fail(e),
    };
    let quad = match GroupQuadrature::new(b_nodes) {
        Ok(q) => q,
        Err(e) => return fail(e),
    };
    match orthogonality_defect(&(*u).0, &(*v).0, &window, &quad) {
        Ok(d) => {
            *out = d;
            CovpovmStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Quadratic form of the rank-one measure built from the unit vector `eta`,
/// evaluated at `u` over the window.
///
/// # Safety
/// Handles live, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn covpovm_quadratic_form_rank_one(
    eta: *const CovpovmFunction,
    u: *const CovpovmFunction,
    b_lo: f64,
    b_hi: f64,
    a_lo: f64,
    a_hi: f64,
    b_nodes: usize,
    out: *mut f64,
) -> CovpovmStatus {
    if eta.is_null() || u.is_null() {
        return null_arg("eta/u");
    }
    if out.is_null() {
        return null_arg("out");
    }
    let window = match GroupRegion::new(b_lo, b_hi, a_lo, a_hi) {
        Ok(w) => w,
        Err(e) => return fail(e),
    };
    let quad = match GroupQuadrature::new(b_nodes) {
        Ok(q) => q,
        Err(e) => return fail(e),
    };
    let mixture = match DensityMixture::rank_one((*eta).0.clone()) {
        Ok(m) => m,
        Err(e) => return fail(e),
    };
    match povm_quadratic_form(&mixture, &window, &(*u).0, &quad) {
        Ok(v) => {
            *out = v;
            CovpovmStatus::Ok
        }
        Err(e) => fail(e),
    }
}
