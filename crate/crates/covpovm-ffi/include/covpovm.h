#ifndef COVPOVM_H
#define COVPOVM_H

/* Generated by cbindgen from covpovm-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Quadrature rule selector for region integrals.
 */
typedef enum CovpovmQuadRule {
  /**
   * Uniform nodes, trapezoid weights (robust under disk masking).
   */
  CovpovmQuadRule_Trapezoid = 0,
  /**
   * Tensor Gauss-Legendre (spectrally accurate over the full box).
   */
  CovpovmQuadRule_GaussLegendre = 1,
} CovpovmQuadRule;

/**
 * Result codes of every `covpovm_*` call.
 */
typedef enum CovpovmStatus {
  /**
   * Operation succeeded.
   */
  CovpovmStatus_Ok = 0,
  /**
   * A pointer argument was null.
   */
  CovpovmStatus_NullPointer = 1,
  /**
   * An argument violated a precondition (dimension, range, coverage...).
   */
  CovpovmStatus_InvalidArgument = 2,
  /**
   * Dimensions of the operands do not match.
   */
  CovpovmStatus_DimensionMismatch = 3,
} CovpovmStatus;

/**
 * Opaque trace-one positive operator.
 */
typedef struct CovpovmDensity CovpovmDensity;

/**
 * Opaque complex function sampled on a grid.
 */
typedef struct CovpovmFunction CovpovmFunction;

/**
 * Opaque geometric half-line grid.
 */
typedef struct CovpovmGrid CovpovmGrid;

/**
 * Opaque dense complex operator (a POVM element).
 */
typedef struct CovpovmOperator CovpovmOperator;

/**
 * Opaque union-of-primitives region in the phase plane.
 */
typedef struct CovpovmRegion CovpovmRegion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the message of the most recent failure on this thread into `buf`
 * (NUL-terminated, truncated to `len`). Returns the full message length in
 * bytes, excluding the terminator. `buf` may be null to query the length.
 *
 * # Safety
 * `buf` must point to at least `len` writable bytes, or be null.
 */
uintptr_t covpovm_last_error_message(char *buf, uintptr_t len);

/**
 * Projector onto the lowest number state.
 *
 * # Safety
 * `out` must be a valid pointer; the handle must be released with
 * [`covpovm_density_free`].
 */
enum CovpovmStatus covpovm_density_vacuum(uintptr_t dim, struct CovpovmDensity **out);

/**
 * Projector onto number state `level`.
 *
 * # Safety
 * As for [`covpovm_density_vacuum`].
 */
enum CovpovmStatus covpovm_density_fock(uintptr_t dim,
                                        uintptr_t level,
                                        struct CovpovmDensity **out);

/**
 * Diagonal mixture over the lowest levels; weights normalized to sum one.
 *
 * # Safety
 * `weights` must point to `weights_len` doubles; `out` as above.
 */
enum CovpovmStatus covpovm_density_mixed(uintptr_t dim,
                                         const double *weights,
                                         uintptr_t weights_len,
                                         struct CovpovmDensity **out);

/**
 * Validates a full matrix as a density operator at tolerance `tol`.
 * `entries` holds `dim * dim` interleaved `re, im` pairs, row-major.
 *
 * # Safety
 * `entries` must point to `2 * dim * dim` doubles; `out` as above.
 */
enum CovpovmStatus covpovm_density_from_entries(uintptr_t dim,
                                                const double *entries,
                                                double tol,
                                                struct CovpovmDensity **out);

/**
 * Dimension of the operator, 0 for null.
 *
 * # Safety
 * `density` must be a live handle from this library or null.
 */
uintptr_t covpovm_density_dim(const struct CovpovmDensity *density);

/**
 * Releases a density handle. Null is ignored.
 *
 * # Safety
 * `density` must originate from this library and not be freed twice.
 */
void covpovm_density_free(struct CovpovmDensity *density);

/**
 * Creates an empty region; add primitives with the `covpovm_region_add_*`
 * functions.
 *
 * # Safety
 * `out` must be valid; release with [`covpovm_region_free`].
 */
enum CovpovmStatus covpovm_region_new(struct CovpovmRegion **out);

/**
 * Adds the closed rectangle `[p_lo, p_hi] x [q_lo, q_hi]`.
 *
 * # Safety
 * `region` must be a live handle.
 */
enum CovpovmStatus covpovm_region_add_rect(struct CovpovmRegion *region,
                                           double p_lo,
                                           double p_hi,
                                           double q_lo,
                                           double q_hi);

/**
 * Adds a closed disk.
 *
 * # Safety
 * `region` must be a live handle.
 */
enum CovpovmStatus covpovm_region_add_disk(struct CovpovmRegion *region,
                                           double center_p,
                                           double center_q,
                                           double radius);

/**
 * Releases a region handle. Null is ignored.
 *
 * # Safety
 * `region` must originate from this library and not be freed twice.
 */
void covpovm_region_free(struct CovpovmRegion *region);

/**
 * Integrates the POVM element of `density` over `region`.
 * `bbox` is `[p_lo, p_hi, q_lo, q_hi]` or null for the region's own box.
 *
 * # Safety
 * Handles must be live; `bbox` null or 4 doubles; `out` valid. Release the
 * result with [`covpovm_operator_free`].
 */
enum CovpovmStatus covpovm_povm_element(const struct CovpovmDensity *density,
                                        const struct CovpovmRegion *region,
                                        enum CovpovmQuadRule rule,
                                        uintptr_t nodes_p,
                                        uintptr_t nodes_q,
                                        const double *bbox,
                                        struct CovpovmOperator **out);

/**
 * Dimension of an operator handle, 0 for null.
 *
 * # Safety
 * `op` must be a live handle or null.
 */
uintptr_t covpovm_operator_dim(const struct CovpovmOperator *op);

/**
 * Reads entry `(row, col)` of an operator.
 *
 * # Safety
 * `op` live; `re`, `im` valid pointers.
 */
enum CovpovmStatus covpovm_operator_entry(const struct CovpovmOperator *op,
                                          uintptr_t row,
                                          uintptr_t col,
                                          double *re,
                                          double *im);

/**
 * Copies all entries row-major as interleaved `re, im` doubles.
 * `buf_len` counts doubles and must be at least `2 * dim * dim`.
 *
 * # Safety
 * `buf` must point to `buf_len` writable doubles.
 */
enum CovpovmStatus covpovm_operator_copy(const struct CovpovmOperator *op,
                                         double *buf,
                                         uintptr_t buf_len);

/**
 * Releases an operator handle. Null is ignored.
 *
 * # Safety
 * `op` must originate from this library and not be freed twice.
 */
void covpovm_operator_free(struct CovpovmOperator *op);

/**
 * Phase-space outcome density `(1/2pi) tr(rho D T D-dagger)` at `(p, q)`.
 *
 * # Safety
 * Handles live, `out` valid.
 */
enum CovpovmStatus covpovm_outcome_density(const struct CovpovmDensity *density,
                                           const struct CovpovmDensity *rho,
                                           double p,
                                           double q,
                                           double *out);

/**
 * Measurement probability `tr(rho Q_T(region))`.
 *
 * # Safety
 * As for [`covpovm_povm_element`]; `out` valid.
 */
enum CovpovmStatus covpovm_probability(const struct CovpovmDensity *density,
                                       const struct CovpovmDensity *rho,
                                       const struct CovpovmRegion *region,
                                       enum CovpovmQuadRule rule,
                                       uintptr_t nodes_p,
                                       uintptr_t nodes_q,
                                       const double *bbox,
                                       double *out);

/**
 * Covariance defect between the shifted element and the conjugated one,
 * measured on the top-left `dim/2` block.
 *
 * # Safety
 * As for [`covpovm_povm_element`]; `out` valid.
 */
enum CovpovmStatus covpovm_covariance_residual(const struct CovpovmDensity *density,
                                               double shift_p,
                                               double shift_q,
                                               const struct CovpovmRegion *region,
                                               enum CovpovmQuadRule rule,
                                               uintptr_t nodes_p,
                                               uintptr_t nodes_q,
                                               const double *bbox,
                                               double *out);

/**
 * Deviation of the element over the centred square of half-width
 * `box_half_width` from the identity on the lowest `low_block` levels,
 * with an `nodes x nodes` Gauss-Legendre rule.
 *
 * # Safety
 * `density` live, `out` valid.
 */
enum CovpovmStatus covpovm_normalization_defect(const struct CovpovmDensity *density,
                                                double box_half_width,
                                                uintptr_t low_block,
                                                uintptr_t nodes,
                                                double *out);

/**
 * Geometric grid `x_k = x_min * ratio^k`, `k = 0..count-1`.
 *
 * # Safety
 * `out` valid; release with [`covpovm_grid_free`].
 */
enum CovpovmStatus covpovm_grid_new(double x_min,
                                    double ratio,
                                    uintptr_t count,
                                    struct CovpovmGrid **out);

/**
 * Number of grid nodes, 0 for null.
 *
 * # Safety
 * `grid` live or null.
 */
uintptr_t covpovm_grid_len(const struct CovpovmGrid *grid);

/**
 * Releases a grid handle. Null is ignored.
 *
 * # Safety
 * `grid` must originate from this library and not be freed twice.
 */
void covpovm_grid_free(struct CovpovmGrid *grid);

/**
 * Function from `count` interleaved `re, im` samples.
 *
 * # Safety
 * `values` must hold `2 * count` doubles where `count` is the grid length;
 * `out` valid. Release with [`covpovm_function_free`].
 */
enum CovpovmStatus covpovm_function_from_values(const struct CovpovmGrid *grid,
                                                const double *values,
                                                uintptr_t values_len,
                                                struct CovpovmFunction **out);

/**
 * Unit-norm smooth bump centred at `center_x` with logarithmic half-width
 * `half_width_ln`.
 *
 * # Safety
 * `grid` live, `out` valid.
 */
enum CovpovmStatus covpovm_function_bump(const struct CovpovmGrid *grid,
                                         double center_x,
                                         double half_width_ln,
                                         struct CovpovmFunction **out);

/**
 * Squared norm of a sampled function.
 *
 * # Safety
 * `f` live, `out` valid.
 */
enum CovpovmStatus covpovm_function_norm_sq(const struct CovpovmFunction *f, double *out);

/**
 * Releases a function handle. Null is ignored.
 *
 * # Safety
 * `f` must originate from this library and not be freed twice.
 */
void covpovm_function_free(struct CovpovmFunction *f);

/**
 * Applies the half-line representation element `(b, a)`; fails when the
 * squared-norm fraction lost off the grid edges exceeds `max_support_loss`
 * or `a` is not a grid-compatible power of the ratio.
 *
 * # Safety
 * `f` live, `out` valid.
 */
enum CovpovmStatus covpovm_apply_pi_plus(double b,
                                         double a,
                                         const struct CovpovmFunction *f,
                                         double max_support_loss,
                                         struct CovpovmFunction **out);

/**
 * Multiplies by `sqrt(x)` (the formal-degree root of the construction).
 *
 * # Safety
 * `f` live, `out` valid.
 */
enum CovpovmStatus covpovm_apply_degree_root(const struct CovpovmFunction *f,
                                             struct CovpovmFunction **out);

/**
 * Wavelet coefficient `<v, pi+(b, a) C eta>`.
 *
 * # Safety
 * Handles live; `re`, `im` valid.
 */
enum CovpovmStatus covpovm_wavelet_coefficient(const struct CovpovmFunction *v,
                                               const struct CovpovmFunction *eta,
                                               double b,
                                               double a,
                                               double *re,
                                               double *im);

/**
 * Deviation of the windowed orthogonality integral from
 * `norm_sq(u) * norm_sq(v)`.
 *
 * # Safety
 * Handles live, `out` valid.
 */
enum CovpovmStatus covpovm_orthogonality_defect(const struct CovpovmFunction *u,
                                                const struct CovpovmFunction *v,
                                                double b_lo,
                                                double b_hi,
                                                double a_lo,
                                                double a_hi,
                                                uintptr_t b_nodes,
                                                double *out);

/**
 * Quadratic form of the rank-one measure built from the unit vector `eta`,
 * evaluated at `u` over the window.
 *
 * # Safety
 * Handles live, `out` valid.
 */
enum CovpovmStatus covpovm_quadratic_form_rank_one(const struct CovpovmFunction *eta,
                                                   const struct CovpovmFunction *u,
                                                   double b_lo,
                                                   double b_hi,
                                                   double a_lo,
                                                   double a_hi,
                                                   uintptr_t b_nodes,
                                                   double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COVPOVM_H */
