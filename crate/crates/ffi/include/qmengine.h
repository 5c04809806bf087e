#ifndef QMENGINE_H
#define QMENGINE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Measurement applied to one subsystem.
typedef enum QmeAxis {
  QME_AXIS_X = 0,
  QME_AXIS_Y = 1,
  QME_AXIS_Z = 2,
  // Projective measurement along (theta, phi).
  QME_AXIS_ANGLES = 3,
  // Qubit SIC-POVM; spin 1/2 only.
  QME_AXIS_SIC = 4,
} QmeAxis;

// Result code of every fallible call.
typedef enum QmeStatus {
  QME_STATUS_OK = 0,
  QME_STATUS_NULL_POINTER = 1,
  QME_STATUS_INVALID_INPUT = 2,
  QME_STATUS_INVALID_SPIN = 3,
  QME_STATUS_INVALID_BETA = 4,
  QME_STATUS_DIMENSION_MISMATCH = 5,
  QME_STATUS_INCOMPLETE_SCHEME = 6,
  QME_STATUS_NON_HERMITIAN = 7,
  QME_STATUS_NO_CONVERGENCE = 8,
  QME_STATUS_UNSUPPORTED_PAIR = 9,
  QME_STATUS_UNKNOWN_ID = 10,
  QME_STATUS_EFFICIENCY_UNDEFINED = 11,
  // No solution exists (for example no effective cold temperature).
  QME_STATUS_NOT_FOUND = 12,
  // The output buffer is too small; the required length was reported.
  QME_STATUS_BUFFER_TOO_SMALL = 13,
  // A Rust panic was caught at the boundary.
  QME_STATUS_INTERNAL = 14,
} QmeStatus;

// Opaque coupled spin pair.
typedef struct QmeMedium QmeMedium;

// Opaque measurement scheme bound to a medium's dimension.
typedef struct QmeScheme QmeScheme;

// One side of a local measurement scheme. `theta` and `phi` (radians) are
// read only when `axis` is `QME_AXIS_ANGLES`.
typedef struct QmeSide {
  enum QmeAxis axis;
  double theta;
  double phi;
} QmeSide;

// Energetics of one cycle. `eta` is NaN when `eta_defined` is 0.
typedef struct QmeCycleResult {
  double w1;
  double w2;
  double wt;
  double qm;
  double qt;
  double eta;
  int32_t eta_defined;
} QmeCycleResult;

// Heat exchanged by each subsystem and the resulting local works.
typedef struct QmeLocalWorks {
  double q_a1;
  double q_a2;
  double q_b1;
  double q_b2;
  double w_a;
  double w_b;
  double w_global;
} QmeLocalWorks;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *qme_version(void);

// Message of the last failed call on this thread, or NULL after a
// successful call. Valid until the next call into the library on this
// thread.
const char *qme_last_error_message(void);

// Creates a spin pair with spins `twice_a / 2` and `twice_b / 2` and
// exchange coupling `j`.
//
// # Safety
// `out` must be valid for writes.
enum QmeStatus qme_medium_new(uint32_t twice_a, uint32_t twice_b, double j, struct QmeMedium **out);

// Releases a medium. NULL is ignored.
//
// # Safety
// `m` must come from `qme_medium_new` and not be used afterwards.
void qme_medium_free(struct QmeMedium *m);

// Hilbert-space dimension of the pair, or 0 for NULL.
//
// # Safety
// `m` must be NULL or a live medium.
size_t qme_medium_dimension(const struct QmeMedium *m);

// Writes the ascending energy levels at field `b` into `values`. `len` is
// the capacity of `values`; the dimension is always stored in `written`,
// and `QME_STATUS_BUFFER_TOO_SMALL` is returned when it exceeds `len`.
//
// # Safety
// `m` must be a live medium, `values` valid for `len` writes and
// `written` valid for one write.
enum QmeStatus qme_medium_spectrum(const struct QmeMedium *m,
                                   double b,
                                   double *values,
                                   size_t len,
                                   size_t *written);

// Builds the local scheme `a ⊗ b` for the medium's spin pair.
//
// # Safety
// `m` must be a live medium and `out` valid for writes.
enum QmeStatus qme_scheme_new(const struct QmeMedium *m,
                              struct QmeSide a,
                              struct QmeSide b,
                              struct QmeScheme **out);

// Like `qme_scheme_new`, with each side given as text: `x`, `y`, `z`,
// `sic` or `theta=<rad>,phi=<rad>`.
//
// # Safety
// `m` must be a live medium, `a` and `b` NUL-terminated strings and
// `out` valid for writes.
enum QmeStatus qme_scheme_parse(const struct QmeMedium *m,
                                const char *a,
                                const char *b,
                                struct QmeScheme **out);

// Releases a scheme. NULL is ignored.
//
// # Safety
// `s` must come from `qme_scheme_new` or `qme_scheme_parse` and not be
// used afterwards.
void qme_scheme_free(struct QmeScheme *s);

// Runs one cycle between fields `b1` and `b2` at inverse temperature `beta`.
//
// # Safety
// `m` and `s` must be live handles and `out` valid for writes.
enum QmeStatus qme_run_cycle(const struct QmeMedium *m,
                             const struct QmeScheme *s,
                             double b1,
                             double b2,
                             double beta,
                             struct QmeCycleResult *out);

// Per-subsystem heats and works for one cycle.
//
// # Safety
// `m` and `s` must be live handles and `out` valid for writes.
enum QmeStatus qme_local_works(const struct QmeMedium *m,
                               const struct QmeScheme *s,
                               double b1,
                               double b2,
                               double beta,
                               struct QmeLocalWorks *out);

// Temperature `t2 <= 1/beta` at which the thermal energy at `b2` exceeds
// the ground energy by the measurement energy. Returns
// `QME_STATUS_NOT_FOUND` when no such temperature exists. `residual` may
// be NULL.
//
// # Safety
// `m` and `s` must be live handles, `t2` valid for writes and `residual`
// NULL or valid for writes.
enum QmeStatus qme_effective_cold_temperature(const struct QmeMedium *m,
                                              const struct QmeScheme *s,
                                              double b1,
                                              double b2,
                                              double beta,
                                              double *t2,
                                              double *residual);

// Evaluates the named closed-form expression (for example `"eta_xz_hh"`).
//
// # Safety
// `name` must be a NUL-terminated string and `out` valid for writes.
enum QmeStatus qme_closed_form(const char *name, double j, double b1, double b2, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QMENGINE_H */
