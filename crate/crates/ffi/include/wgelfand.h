#ifndef WGELFAND_H
#define WGELFAND_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum WgStatus {
  WG_STATUS_OK = 0,
  WG_STATUS_NULL_POINTER = 1,
  WG_STATUS_INVALID_INPUT = 2,
  WG_STATUS_INVALID_UTF8 = 3,
  WG_STATUS_OUT_OF_RANGE = 4,
  WG_STATUS_NOT_GELFAND = 5,
  WG_STATUS_DEGENERATE = 6,
  WG_STATUS_BUFFER_TOO_SMALL = 7,
  WG_STATUS_INTERNAL = 8,
} WgStatus;

// Gelfand verdict and, for Gelfand pairs, the spherical functions and
// Fourier table.
typedef struct WgAnalysis WgAnalysis;

// A finite group.
typedef struct WgGroup WgGroup;

// A subgroup and weight on a group, with its bi-invariant algebra.
typedef struct WgPair WgPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the most recent failure on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread.
const char *wg_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *wg_version(void);

// Parses a group spec such as `{"kind": "symmetric", "n": 3}`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum WgStatus wg_group_from_json(const char *json, struct WgGroup **out);

// Cyclic group of order `n`; element `k` is the `k`-th power of the generator.
//
// # Safety
// `out` must be a valid pointer.
enum WgStatus wg_group_cyclic(size_t n, struct WgGroup **out);

// Dihedral group of order `2n` (`n >= 3`).
//
// # Safety
// `out` must be a valid pointer.
enum WgStatus wg_group_dihedral(size_t n, struct WgGroup **out);

// Symmetric group on `n` points.
//
// # Safety
// `out` must be a valid pointer.
enum WgStatus wg_group_symmetric(size_t n, struct WgGroup **out);

// Number of elements, or 0 for a NULL handle.
//
// # Safety
// `group` must be NULL or a live handle.
size_t wg_group_order(const struct WgGroup *group);

// Writes the index of `a * b`.
//
// # Safety
// `group` must be a live handle and `out` a valid pointer.
enum WgStatus wg_group_mul(const struct WgGroup *group, size_t a, size_t b, size_t *out);

// Writes the index of `a⁻¹`.
//
// # Safety
// `group` must be a live handle and `out` a valid pointer.
enum WgStatus wg_group_inverse(const struct WgGroup *group, size_t a, size_t *out);

// # Safety
// `group` must be NULL or a handle not yet freed.
void wg_group_free(struct WgGroup *group);

// Builds the pair `(G, K, ω)` with `K` generated by `seeds`. `weights`
// holds one positive value per group element, or is NULL for `ω ≡ 1`.
// The group handle may be freed afterwards.
//
// # Safety
// `group` must be a live handle, `seeds` must point to `n_seeds` values,
// `weights` must be NULL or point to `n_weights` values, and `out` must be
// a valid pointer.
enum WgStatus wg_pair_new(const struct WgGroup *group,
                          const size_t *seeds,
                          size_t n_seeds,
                          const double *weights,
                          size_t n_weights,
                          struct WgPair **out);

// Builds a pair from JSON subgroup and weight specs, as accepted by the
// command line. `subgroup_json` NULL means the trivial subgroup and
// `weight_json` NULL means `ω ≡ 1`.
//
// # Safety
// `group` must be a live handle, the strings NULL or NUL-terminated, and
// `out` a valid pointer.
enum WgStatus wg_pair_from_json(const struct WgGroup *group,
                                const char *subgroup_json,
                                const char *weight_json,
                                struct WgPair **out);

// Number of double cosets `KxK`, or 0 for a NULL handle.
//
// # Safety
// `pair` must be NULL or a live handle.
size_t wg_pair_coset_count(const struct WgPair *pair);

// Writes the id of the double coset containing `x`.
//
// # Safety
// `pair` must be a live handle and `out` a valid pointer.
enum WgStatus wg_pair_coset_of(const struct WgPair *pair, size_t x, size_t *out);

// Weighted convolution of two bi-invariant functions given by their coset
// values. `f`, `g` and `out` each hold `2 * wg_pair_coset_count` doubles.
//
// # Safety
// All pointers must be valid for `2 * d` doubles.
enum WgStatus wg_pair_convolve(const struct WgPair *pair,
                               const double *f,
                               const double *g,
                               double *out,
                               size_t len);

// # Safety
// `pair` must be NULL or a handle not yet freed.
void wg_pair_free(struct WgPair *pair);

// Decides the Gelfand property and, when it holds, enumerates the
// spherical functions and builds the Fourier table. A negative verdict is
// not an error: the call returns `WG_STATUS_OK` and
// [`wg_analysis_is_gelfand`] reports 0.
//
// # Safety
// `pair` must be a live handle and `out` a valid pointer.
enum WgStatus wg_analysis_run(const struct WgPair *pair,
                              double tolerance,
                              uint64_t seed,
                              struct WgAnalysis **out);

// 1 for a weighted Gelfand pair, 0 otherwise (or for a NULL handle).
//
// # Safety
// `analysis` must be NULL or a live handle.
int32_t wg_analysis_is_gelfand(const struct WgAnalysis *analysis);

// Number of spherical functions; 0 when the pair is not Gelfand.
//
// # Safety
// `analysis` must be NULL or a live handle.
size_t wg_analysis_spherical_count(const struct WgAnalysis *analysis);

// Copies the coset values of spherical function `index` into `out`,
// which must hold `2 * d` doubles.
//
// # Safety
// `analysis` must be a live handle and `out` valid for `len` doubles.
enum WgStatus wg_analysis_spherical_values(const struct WgAnalysis *analysis,
                                           size_t index,
                                           double *out,
                                           size_t len);

// Numerical rank of the Fourier table.
//
// # Safety
// `analysis` must be a live handle and `out` a valid pointer.
enum WgStatus wg_analysis_fourier_rank(const struct WgAnalysis *analysis, size_t *out);

// The analysis as a JSON string, to be released with [`wg_string_free`].
// Returns NULL for a NULL handle.
//
// # Safety
// `analysis` must be NULL or a live handle.
char *wg_analysis_report_json(const struct WgAnalysis *analysis);

// # Safety
// `analysis` must be NULL or a handle not yet freed.
void wg_analysis_free(struct WgAnalysis *analysis);

// Runs the command-line `analyze` pipeline on JSON specs and writes the
// full report to `*report` (release with [`wg_string_free`]) and the
// command-line exit code to `*exit_code`. `subgroup_json` and
// `weight_json` may be NULL.
//
// The report is produced for exit codes 0 and 2; otherwise `*report` is
// NULL and the status describes the failure.
//
// # Safety
// String arguments must be NULL (where allowed) or NUL-terminated, and the
// output pointers must be valid.
enum WgStatus wg_analyze_json(const char *group_json,
                              const char *subgroup_json,
                              const char *weight_json,
                              char **report,
                              int32_t *exit_code);

// Releases a string returned by this library.
//
// # Safety
// `s` must be NULL or a string from this library not yet freed.
void wg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WGELFAND_H */
