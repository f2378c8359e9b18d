#ifndef DQSOLVE_H
#define DQSOLVE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

// Doubles per dual quaternion entry.
#define DQS_ENTRY_DOUBLES 8

typedef enum DqsEta {
  DQS_ETA_I = 0,
  DQS_ETA_J = 1,
  DQS_ETA_K = 2,
} DqsEta;

// Which condition family decides solvability of the full system.
typedef enum DqsMode {
  DQS_MODE_BOTH = 0,
  DQS_MODE_PROJECTOR = 1,
  DQS_MODE_RANK = 2,
} DqsMode;

// Result of every fallible call.
typedef enum DqsStatus {
  DQS_STATUS_OK = 0,
  DQS_STATUS_NULL_POINTER = 1,
  DQS_STATUS_INVALID_ARGUMENT = 2,
  DQS_STATUS_SHAPE_MISMATCH = 3,
  DQS_STATUS_PARSE = 4,
  DQS_STATUS_INVALID_TOLERANCE = 5,
  DQS_STATUS_NOT_ETA_HERMITIAN = 6,
  DQS_STATUS_CONDITION_DISAGREEMENT = 7,
  DQS_STATUS_NUMERICAL = 8,
  // The system has no solution; there is no particular solution or sample.
  DQS_STATUS_UNSOLVABLE = 9,
  DQS_STATUS_PANIC = 10,
} DqsStatus;

// Opaque dual quaternion matrix.
typedef struct DqsMatrix DqsMatrix;

// Opaque solve result.
typedef struct DqsOutcome DqsOutcome;

// Rank cutoff is `rank_rel * sigma_max`; a residual counts as zero when it
// is at most `zero_abs * (1 + scale)`.
typedef struct DqsTolerance {
  double rank_rel;
  double zero_abs;
} DqsTolerance;

// Message for the most recent failing call on this thread, or "" after a
// success. The pointer stays valid until the next call on this thread.
const char *dqs_last_error(void);

struct DqsTolerance dqs_tolerance_default(void);

// Builds a matrix from `rows * cols * 8` doubles.
//
// # Safety
// `data` must point to `len` readable doubles; `out` must be writable.
enum DqsStatus dqs_matrix_new(size_t rows,
                              size_t cols,
                              const double *data,
                              size_t len,
                              struct DqsMatrix **out);

// # Safety
// `m` must be null or a handle from this library not yet freed.
void dqs_matrix_free(struct DqsMatrix *m);

// Row count, or 0 for a null handle.
//
// # Safety
// `m` must be null or a live handle.
size_t dqs_matrix_rows(const struct DqsMatrix *m);

// Column count, or 0 for a null handle.
//
// # Safety
// `m` must be null or a live handle.
size_t dqs_matrix_cols(const struct DqsMatrix *m);

// Copies all entries into `buf`, which must hold exactly `rows * cols * 8` doubles.
//
// # Safety
// `m` must be a live handle; `buf` must point to `len` writable doubles.
enum DqsStatus dqs_matrix_entries(const struct DqsMatrix *m, double *buf, size_t len);

// Parses one matrix in `.dqm` text form.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum DqsStatus dqs_matrix_parse(const char *text, struct DqsMatrix **out);

// Renders a matrix as `.dqm` text. Release the string with [`dqs_string_free`].
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum DqsStatus dqs_matrix_render(const struct DqsMatrix *m, char **out);

// # Safety
// `s` must be null or a string returned by this library not yet freed.
void dqs_string_free(char *s);

// Solves `AX = B, XC = D` for `A: m×n, B: m×k, C: k×l, D: n×l`.
// A null `tol` selects the defaults. An unsolvable system is still `Ok`;
// query it with [`dqs_outcome_solvable`].
//
// # Safety
// Matrix arguments must be live handles; `tol` null or valid; `out` writable.
enum DqsStatus dqs_solve_system(const struct DqsMatrix *a,
                                const struct DqsMatrix *b,
                                const struct DqsMatrix *c,
                                const struct DqsMatrix *d,
                                const struct DqsTolerance *tol,
                                enum DqsMode mode,
                                struct DqsOutcome **out);

// Solves `AX = B`.
//
// # Safety
// As for [`dqs_solve_system`].
enum DqsStatus dqs_solve_ax_b(const struct DqsMatrix *a,
                              const struct DqsMatrix *b,
                              const struct DqsTolerance *tol,
                              struct DqsOutcome **out);

// Solves `XC = D`.
//
// # Safety
// As for [`dqs_solve_system`].
enum DqsStatus dqs_solve_xc_d(const struct DqsMatrix *c,
                              const struct DqsMatrix *d,
                              const struct DqsTolerance *tol,
                              struct DqsOutcome **out);

// Solves `AX = B` for η-Hermitian `X`; `A` and `B` square, `B` η-Hermitian.
//
// # Safety
// As for [`dqs_solve_system`].
enum DqsStatus dqs_solve_ax_b_eta_hermitian(const struct DqsMatrix *a,
                                            const struct DqsMatrix *b,
                                            enum DqsEta eta,
                                            const struct DqsTolerance *tol,
                                            struct DqsOutcome **out);

// 1 if solvable, 0 if not or if `o` is null.
//
// # Safety
// `o` must be null or a live handle.
int32_t dqs_outcome_solvable(const struct DqsOutcome *o);

// Number of failed solvability conditions.
//
// # Safety
// `o` must be null or a live handle.
size_t dqs_outcome_failed_count(const struct DqsOutcome *o);

// Name of the `i`-th failed condition, or null when out of range. The
// string is owned by the outcome.
//
// # Safety
// `o` must be null or a live handle.
const char *dqs_outcome_failed_name(const struct DqsOutcome *o, size_t i);

// The particular solution (all free parameters zero).
//
// # Safety
// `o` must be a live handle; `out` writable.
enum DqsStatus dqs_outcome_particular(const struct DqsOutcome *o, struct DqsMatrix **out);

// A member of the general solution with free parameters drawn uniformly
// from `[-scale, scale]` by a generator seeded with `seed`.
//
// # Safety
// `o` must be a live handle; `out` writable.
enum DqsStatus dqs_outcome_sample(const struct DqsOutcome *o,
                                  uint64_t seed,
                                  double scale,
                                  struct DqsMatrix **out);

// # Safety
// `o` must be null or a handle from this library not yet freed.
void dqs_outcome_free(struct DqsOutcome *o);

// Writes `‖AX − B‖` and `‖XC − D‖` (dual norm).
//
// # Safety
// Matrix arguments must be live handles; `ax_b` and `xc_d` writable.
enum DqsStatus dqs_verify_residual(const struct DqsMatrix *a,
                                   const struct DqsMatrix *b,
                                   const struct DqsMatrix *c,
                                   const struct DqsMatrix *d,
                                   const struct DqsMatrix *x,
                                   double *ax_b,
                                   double *xc_d);

#endif  /* DQSOLVE_H */
