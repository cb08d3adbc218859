#ifndef TORICEXT_H
#define TORICEXT_H

/* Generated from the Rust sources; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum ToricStatus {
  /**
   * The call succeeded and out-parameters are filled in.
   */
  ToricStatus_Ok = 0,
  /**
   * A required pointer argument was NULL.
   */
  ToricStatus_NullPointer = 1,
  /**
   * A string argument was not valid UTF-8 or not NUL-terminated
   * where required.
   */
  ToricStatus_InvalidString = 2,
  /**
   * The input was structurally malformed (bad number, bad shape,
   * unknown command, bad document).
   */
  ToricStatus_InvalidInput = 3,
  /**
   * The input was well formed but a mathematical precondition
   * failed; the diagnostic names it.
   */
  ToricStatus_DomainError = 4,
  /**
   * An internal invariant failed.
   */
  ToricStatus_InternalError = 5,
} ToricStatus;

/**
 * An exact integer matrix.
 */
typedef struct ToricMatrix ToricMatrix;

/**
 * The classification of one lattice presentation.
 */
typedef struct ToricVariety ToricVariety;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Build a matrix from row-major decimal-string entries.
 *
 * `entries` must point to `rows * cols` NUL-terminated strings. On
 * success `*out` receives a new matrix; free it with
 * [`toric_matrix_free`].
 *
 * # Safety
 * `entries` must be valid for `rows * cols` reads of C string
 * pointers and `out` must be valid for a write.
 */
enum ToricStatus toric_matrix_new(size_t rows,
                                  size_t cols,
                                  const char *const *entries,
                                  struct ToricMatrix **out);

/**
 * Row count; 0 when the handle is NULL.
 *
 * # Safety
 * `m` must be NULL or a live matrix handle.
 */
size_t toric_matrix_rows(const struct ToricMatrix *m);

/**
 * Column count; 0 when the handle is NULL.
 *
 * # Safety
 * `m` must be NULL or a live matrix handle.
 */
size_t toric_matrix_cols(const struct ToricMatrix *m);

/**
 * Copy entry (i, j) as a decimal string into `*out`; free it with
 * [`toric_string_free`].
 *
 * # Safety
 * `m` must be a live matrix handle and `out` valid for a write.
 */
enum ToricStatus toric_matrix_entry(const struct ToricMatrix *m, size_t i, size_t j, char **out);

/**
 * Release a matrix handle. NULL is accepted.
 *
 * # Safety
 * `m` must have come from this library and not been freed before.
 */
void toric_matrix_free(struct ToricMatrix *m);

/**
 * Classify the presentation whose relation matrix is `relations`.
 * On success `*out` receives a new handle; free it with
 * [`toric_variety_free`].
 *
 * # Safety
 * `relations` must be a live matrix handle and `out` valid for a
 * write.
 */
enum ToricStatus toric_classify(const struct ToricMatrix *relations, struct ToricVariety **out);

/**
 * 1 when the coordinate ring is an integral domain, 0 otherwise or on
 * NULL.
 *
 * # Safety
 * `v` must be NULL or a live classification handle.
 */
int toric_variety_is_prime(const struct ToricVariety *v);

/**
 * 1 when the variety contains the origin, 0 otherwise or on NULL.
 *
 * # Safety
 * `v` must be NULL or a live classification handle.
 */
int toric_variety_contains_origin(const struct ToricVariety *v);

/**
 * 1 when the normalization is an affine space, 0 otherwise or on
 * NULL.
 *
 * # Safety
 * `v` must be NULL or a live classification handle.
 */
int toric_variety_normalization_is_affine_space(const struct ToricVariety *v);

/**
 * Dimension of the variety; 0 on NULL.
 *
 * # Safety
 * `v` must be NULL or a live classification handle.
 */
size_t toric_variety_dimension(const struct ToricVariety *v);

/**
 * Number of monomials in the parametrization (columns of the basis
 * matrix); 0 on NULL.
 *
 * # Safety
 * `v` must be NULL or a live classification handle.
 */
size_t toric_variety_monomial_count(const struct ToricVariety *v);

/**
 * Rank of the kernel of the basis matrix; 0 on NULL.
 *
 * # Safety
 * `v` must be NULL or a live classification handle.
 */
size_t toric_variety_kernel_rank(const struct ToricVariety *v);

/**
 * Copy the Hilbert basis matrix (columns are the basis elements) into
 * a new handle at `*out`.
 *
 * # Safety
 * `v` must be a live handle and `out` valid for a write.
 */
enum ToricStatus toric_variety_basis(const struct ToricVariety *v, struct ToricMatrix **out);

/**
 * Copy the kernel basis matrix of the Hilbert basis matrix into a new
 * handle at `*out`.
 *
 * # Safety
 * `v` must be a live handle and `out` valid for a write.
 */
enum ToricStatus toric_variety_kernel(const struct ToricVariety *v, struct ToricMatrix **out);

/**
 * Release a classification handle. NULL is accepted.
 *
 * # Safety
 * `v` must have come from this library and not been freed before.
 */
void toric_variety_free(struct ToricVariety *v);

/**
 * Run one batch command on a JSON document and return its report.
 *
 * `command` is one of `classify`, `hilbert-basis`, `saturate`,
 * `obstruction`, `counterexample`, `decide-extension`. `as_json`
 * selects the report format (0 = text). `budget` caps the number of
 * fiber selections examined by `decide-extension`; pass 0 for the
 * default. On every outcome `*out` receives a string, the report on
 * `Ok` and the diagnostic otherwise; free it with [`toric_string_free`].
 *
 * # Safety
 * `command` and `document` must be NUL-terminated and `out` valid for
 * a write.
 */
enum ToricStatus toric_run_json(const char *command,
                                const char *document,
                                int as_json,
                                uint64_t budget,
                                char **out);

/**
 * Release a string returned by this library. NULL is accepted.
 *
 * # Safety
 * `s` must have come from this library and not been freed before.
 */
void toric_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TORICEXT_H */
