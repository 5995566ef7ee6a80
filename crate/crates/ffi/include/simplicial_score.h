#ifndef SIMPLICIAL_SCORE_H
#define SIMPLICIAL_SCORE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SsStatus {
  SS_STATUS_OK = 0,
  SS_STATUS_NULL_POINTER = 1,
  SS_STATUS_INVALID_ARGUMENT = 2,
  SS_STATUS_DIMENSION_MISMATCH = 3,
  SS_STATUS_NOT_CLOSED_UNDER_INCLUSION = 4,
  SS_STATUS_DUPLICATE_SIMPLEX = 5,
  SS_STATUS_MALFORMED_DOCUMENT = 6,
  SS_STATUS_NO_SIMPLICES_AT_DIMENSION = 7,
  SS_STATUS_MISSING_WEIGHTS = 8,
  SS_STATUS_ZERO_VARIANCE_FEATURE = 9,
  SS_STATUS_CONVERGENCE_FAILURE = 10,
  SS_STATUS_INVALID_P_VALUE = 11,
  SS_STATUS_MISSING_TUPLE_VALUE = 12,
  SS_STATUS_IO = 13,
  SS_STATUS_PANIC = 14,
} SsStatus;

typedef enum SsWeights {
  SS_WEIGHTS_UNIT = 0,
  // Coface sums with unit top weights and a 1e-12 floor.
  SS_WEIGHTS_COFACE = 1,
} SsWeights;

typedef enum SsAggregation {
  SS_AGGREGATION_MEAN = 0,
  SS_AGGREGATION_MIN = 1,
  SS_AGGREGATION_MAX = 2,
} SsAggregation;

// Opaque simplicial complex.
typedef struct SsComplex SsComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failure on this thread, or null. Valid until
// the next call into this library from the same thread.
const char *ss_last_error_message(void);

// Builds the Vietoris-Rips complex of an `n x n` distance matrix at scale
// `epsilon` up to dimension `max_dim`. The complex has no weights yet.
//
// # Safety
// `distances` must point to `n * n` doubles and `out` to writable storage.
enum SsStatus ss_complex_from_distances(const double *distances,
                                        size_t n,
                                        double epsilon,
                                        size_t max_dim,
                                        struct SsComplex **out);

// Parses and validates a complex JSON document.
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable.
enum SsStatus ss_complex_from_json(const char *json, struct SsComplex **out);

// Serialises a complex to JSON. Release the string with `ss_string_free`.
//
// # Safety
// `complex` must be a live handle and `out` writable.
enum SsStatus ss_complex_to_json(const struct SsComplex *complex, char **out);

// # Safety
// `s` must come from this library or be null.
void ss_string_free(char *s);

// # Safety
// `complex` must be a live handle.
enum SsStatus ss_complex_compute_weights(struct SsComplex *complex, enum SsWeights scheme);

// Number of q-simplices; zero for a null handle.
//
// # Safety
// `complex` must be a live handle or null.
size_t ss_complex_simplex_count(const struct SsComplex *complex, size_t q);

// # Safety
// `complex` must be a live handle or null.
size_t ss_complex_vertex_count(const struct SsComplex *complex);

// # Safety
// `complex` must come from this library or be null; it is invalid afterwards.
void ss_complex_free(struct SsComplex *complex);

// Scores `n_features` point features (row-major, `n_samples` columns each)
// as q-forms. Constant features get NaN.
//
// # Safety
// `complex` must be a live weighted handle, `features` must hold
// `n_features * n_samples` doubles and `scores` room for `n_features`.
enum SsStatus ss_score_features(const struct SsComplex *complex,
                                const double *features,
                                size_t n_features,
                                size_t n_samples,
                                size_t q,
                                enum SsAggregation agg,
                                double *scores);

// Scores, permutation p-values, BH q-values and rejections at level
// `alpha`. `threads = 0` uses every core; results do not depend on it.
//
// # Safety
// As `ss_score_features`; `p_values`, `q_values` and `rejected` must each
// have room for `n_features` entries. Any output pointer may be null.
enum SsStatus ss_permutation_test(const struct SsComplex *complex,
                                  const double *features,
                                  size_t n_features,
                                  size_t n_samples,
                                  size_t q,
                                  enum SsAggregation agg,
                                  size_t n_permutations,
                                  uint64_t seed,
                                  double alpha,
                                  size_t threads,
                                  double *scores,
                                  double *p_values,
                                  double *q_values,
                                  uint8_t *rejected);

// First `m` eigenpairs of the q-Laplacian. `coordinates` receives one row of
// `m` values per q-simplex in canonical order.
//
// # Safety
// `complex` must be a live weighted handle, `eigenvalues` must have room
// for `m` doubles and `coordinates` for `m * ss_complex_simplex_count(q)`.
enum SsStatus ss_eigenmap(const struct SsComplex *complex,
                          size_t q,
                          size_t m,
                          double *eigenvalues,
                          double *coordinates);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIMPLICIAL_SCORE_H */
