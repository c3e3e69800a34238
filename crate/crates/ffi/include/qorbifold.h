#ifndef QORBIFOLD_H
#define QORBIFOLD_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result codes shared by all functions.
typedef enum QoStatus {
  QO_STATUS_OK = 0,
  QO_STATUS_NULL_POINTER = 1,
  QO_STATUS_INVALID_UTF8 = 2,
  QO_STATUS_IO = 3,
  QO_STATUS_PARSE = 4,
  QO_STATUS_VALIDATION = 5,
  QO_STATUS_INTEGRITY = 6,
  QO_STATUS_NOT_FOUND = 7,
  QO_STATUS_CHECK_FAILED = 8,
  QO_STATUS_BUFFER_TOO_SMALL = 9,
  QO_STATUS_INTERNAL = 10,
} QoStatus;

// Quantum expansion of one curve: terms in increasing lexicographic order of
// exponent vectors, coefficients as (q^{1/2}-power, integer) pairs.
typedef struct QoExpansion QoExpansion;

// A parsed and validated scenario.
typedef struct QoScenario QoScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on this thread.
const char *qo_last_error_message(void);

// Loads a scenario document from a file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum QoStatus qo_scenario_load(const char *path, struct QoScenario **out);

// Parses a scenario document held in memory.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum QoStatus qo_scenario_from_json(const char *json, struct QoScenario **out);

// Releases a scenario; null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void qo_scenario_free(struct QoScenario *s);

// Canonical document text of a scenario.
//
// # Safety
// `s` must be a live handle and `out` a valid pointer.
enum QoStatus qo_scenario_to_json(const struct QoScenario *s, char **out);

// Number of cluster variables `m` and mutable directions `n` of the seed.
//
// # Safety
// `s` must be a live handle; `m` and `n` valid pointers.
enum QoStatus qo_scenario_rank(const struct QoScenario *s, size_t *m, size_t *n);

// Expansion of a curve (or arc of the triangulation) in canonical text,
// quantum or at q = 1.
//
// # Safety
// `s` must be a live handle, `arc` a NUL-terminated string, `out` valid.
enum QoStatus qo_expand_text(const struct QoScenario *s,
                             const char *arc,
                             bool commutative,
                             char **out);

// Number of perfect matchings of the curve's snake graph.
//
// # Safety
// `s` must be a live handle, `arc` a NUL-terminated string, `out` valid.
enum QoStatus qo_matching_count(const struct QoScenario *s, const char *arc, uint64_t *out);

// Runs the verification suite, or one named check when `check` is non-null.
// Returns `CheckFailed` if any check fails. The report (one line per check)
// is stored in `report` when it is non-null.
//
// # Safety
// `s` must be a live handle; `check` null or NUL-terminated; `report` null
// or valid.
enum QoStatus qo_verify(const struct QoScenario *s, const char *check, char **report);

// Releases a string returned by this library; null is ignored.
//
// # Safety
// `p` must come from this library and not be used afterwards.
void qo_string_free(char *p);

// Computes the quantum expansion of a curve as a term table.
//
// # Safety
// `s` must be a live handle, `arc` a NUL-terminated string, `out` valid.
enum QoStatus qo_expansion_new(const struct QoScenario *s,
                               const char *arc,
                               struct QoExpansion **out);

// Releases an expansion; null is ignored.
//
// # Safety
// `e` must come from this library and not be used afterwards.
void qo_expansion_free(struct QoExpansion *e);

// Number of terms and length of every exponent vector.
//
// # Safety
// `e` must be a live handle; `terms` and `rank` valid pointers.
enum QoStatus qo_expansion_shape(const struct QoExpansion *e, size_t *terms, size_t *rank);

// Copies the exponent vector of term `i` into `buf` (`len` >= rank).
//
// # Safety
// `e` must be a live handle and `buf` valid for `len` writes.
enum QoStatus qo_expansion_exponent(const struct QoExpansion *e,
                                    size_t i,
                                    int64_t *buf,
                                    size_t len);

// Number of q^{1/2}-powers in the coefficient of term `i`.
//
// # Safety
// `e` must be a live handle and `out` valid.
enum QoStatus qo_expansion_coefficient_len(const struct QoExpansion *e, size_t i, size_t *out);

// Copies the coefficient of term `i`, highest power first: `powers[k]` is
// an exponent of q^{1/2} and `coefficients[k]` its integer coefficient.
//
// # Safety
// `e` must be a live handle; both buffers valid for `len` writes.
enum QoStatus qo_expansion_coefficient(const struct QoExpansion *e,
                                       size_t i,
                                       int64_t *powers,
                                       int64_t *coefficients,
                                       size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QORBIFOLD_H */
