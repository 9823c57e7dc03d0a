#ifndef TELEQCP_H
#define TELEQCP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  TQ_STATUS_OK = 0,
  TQ_STATUS_NULL_POINTER = 1,
  TQ_STATUS_INVALID_ARGUMENT = 2,
  TQ_STATUS_UNPHYSICAL = 3,
  TQ_STATUS_NUMERICAL = 4,
  TQ_STATUS_BUFFER_TOO_SMALL = 5,
  TQ_STATUS_PANIC = 6,
} TqStatus;

typedef enum {
  TQ_SET_FAMILY_PSI = 0,
  TQ_SET_FAMILY_PHI = 1,
} TqSetFamily;

typedef enum {
  // XXZ scanning the anisotropy; `fixed` is the field.
  TQ_FAMILY_XXZ_DELTA = 0,
  // XY scanning lambda; `fixed` is gamma.
  TQ_FAMILY_XY_LAMBDA = 1,
  // XY scanning gamma; `fixed` is lambda.
  TQ_FAMILY_XY_GAMMA = 2,
} TqFamily;

typedef enum {
  TQ_OBSERVABLE_Z = 0,
  TQ_OBSERVABLE_XX = 1,
  TQ_OBSERVABLE_YY = 2,
  TQ_OBSERVABLE_ZZ = 3,
  TQ_OBSERVABLE_FBAR_PSI = 4,
  TQ_OBSERVABLE_FBAR_PHI = 5,
  TQ_OBSERVABLE_FMAX = 6,
  TQ_OBSERVABLE_DBAR_PSI = 7,
  TQ_OBSERVABLE_DBAR_PHI = 8,
  TQ_OBSERVABLE_DMIN = 9,
} TqObservable;

typedef enum {
  TQ_FIT_LINEAR = 0,
  TQ_FIT_QUADRATIC = 1,
} TqFit;

// Correlator source with a spectrum cache.
typedef struct TqProvider TqProvider;

// One finished scan.
typedef struct TqScan TqScan;

// One-site magnetization and nearest-neighbour Pauli correlators.
typedef struct {
  double z;
  double xx;
  double yy;
  double zz;
} TqCorrelators;

typedef struct {
  double location;
  double uncertainty;
  double derivative;
  // Nonzero when the extremum lies on a one-sided point or the window edge.
  int32_t at_edge;
} TqExtremum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread, NUL-terminated, into `buf`.
// Returns the message length excluding the terminator; call with `len = 0`
// to query the size.
//
// # Safety
// `buf` must be valid for `len` bytes or null.
uintptr_t tq_last_error_message(char *buf, uintptr_t len);

// # Safety
// Output pointers must be valid for writes.
TqStatus tq_fmax(TqCorrelators c, double *value, TqSetFamily *family);

// # Safety
// Output pointers must be valid for writes.
TqStatus tq_dmin(TqCorrelators c, double *value, TqSetFamily *family);

// # Safety
// `out` must be valid for writes.
TqStatus tq_mean_fidelity(TqCorrelators c, TqSetFamily family, double *out);

// # Safety
// `out` must be valid for writes.
TqStatus tq_mean_trace_distance(TqCorrelators c, TqSetFamily family, double *out);

// # Safety
// `out` must be valid for writes.
TqStatus tq_xxz_delta1(double h, double *out);

// # Safety
// `out` must be valid for writes.
TqStatus tq_xxz_delta2(double h, double *out);

// Creates a provider; release it with [`tq_provider_free`].
//
// # Safety
// `out` must be valid for writes.
TqStatus tq_provider_new(TqProvider **out);

// # Safety
// `p` must come from [`tq_provider_new`] and not be used afterwards.
void tq_provider_free(TqProvider *p);

// Thermal correlators of one model point. `family` and `fixed` name the
// model as in scans and `param` is the scanned coordinate.
//
// # Safety
// `provider` must be a live handle and `out` valid for writes.
TqStatus tq_correlators(const TqProvider *provider,
                        TqFamily family,
                        double fixed,
                        double param,
                        double kt,
                        uintptr_t chain_length,
                        TqCorrelators *out);

// Scans `[start, end]` with spacing `step` at temperature `kt`; release the
// result with [`tq_scan_free`].
//
// # Safety
// `provider` must be a live handle and `out` valid for writes.
TqStatus tq_scan_new(const TqProvider *provider,
                     TqFamily family,
                     double fixed,
                     double start,
                     double end,
                     double step,
                     double kt,
                     uintptr_t chain_length,
                     TqScan **out);

// # Safety
// `s` must come from [`tq_scan_new`] and not be used afterwards.
void tq_scan_free(TqScan *s);

// Number of grid points, or 0 for a null handle.
//
// # Safety
// `s` must be a live handle or null.
uintptr_t tq_scan_len(const TqScan *s);

// Copies the scanned parameter values into `buf`.
//
// # Safety
// `s` must be a live handle and `buf` valid for `len` doubles.
TqStatus tq_scan_params(const TqScan *s, double *buf, uintptr_t len);

// Copies one observable column into `buf`; failed grid points are NaN.
//
// # Safety
// `s` must be a live handle and `buf` valid for `len` doubles.
TqStatus tq_scan_column(const TqScan *s, TqObservable observable, double *buf, uintptr_t len);

// Finite-difference derivative (order 1 or 2) of `n` equally spaced values,
// written to `out` (length `n`).
//
// # Safety
// `series` must be valid for `n` reads and `out` for `n` writes.
TqStatus tq_finite_difference(const double *series,
                              uintptr_t n,
                              double step,
                              uintptr_t order,
                              double *out);

// Largest `|derivative|` of `series` over grid points within `[lo, hi]`,
// where the grid is `start + i * step`.
//
// # Safety
// `series` must be valid for `n` reads and `out` for writes.
TqStatus tq_locate_extremum(const double *series,
                            uintptr_t n,
                            double start,
                            double step,
                            uintptr_t order,
                            double lo,
                            double hi,
                            TqExtremum *out);

// Least-squares fit of extremum locations against temperature, evaluated
// at zero temperature. Points with `kt <= 0` are ignored.
//
// # Safety
// `kts` and `locations` must be valid for `n` reads; output pointers for
// writes (`residual` may be null).
TqStatus tq_extrapolate(const double *kts,
                        const double *locations,
                        uintptr_t n,
                        TqFit fit,
                        double *location,
                        double *residual);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TELEQCP_H */
