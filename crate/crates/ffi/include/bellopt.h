#ifndef BELLOPT_H
#define BELLOPT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Default largest magnitude tolerated outside the X pattern.
 */
#define BELLOPT_DEFAULT_OFF_X_TOL 1e-9

typedef enum BelloptStatus {
  BELLOPT_STATUS_OK = 0,
  BELLOPT_STATUS_NULL_POINTER = 1,
  BELLOPT_STATUS_NOT_HERMITIAN = 2,
  BELLOPT_STATUS_TRACE_NOT_ONE = 3,
  BELLOPT_STATUS_NOT_POSITIVE = 4,
  BELLOPT_STATUS_NOT_X_STRUCTURED = 5,
  BELLOPT_STATUS_INVALID_ARGUMENT = 6,
  BELLOPT_STATUS_BUDGET_EXCEEDED = 7,
  BELLOPT_STATUS_PANIC = 8,
} BelloptStatus;

typedef enum BelloptEventKind {
  BELLOPT_EVENT_KIND_SET_JUMP = 0,
  BELLOPT_EVENT_KIND_VIOLATION_ON = 1,
  BELLOPT_EVENT_KIND_VIOLATION_OFF = 2,
} BelloptEventKind;

/**
 * The result of a time scan.
 */
typedef struct BelloptScan BelloptScan;

/**
 * A validated two-qubit state.
 */
typedef struct BelloptState BelloptState;

/**
 * Measurement angles in the order `(1, 1', 2, 2')`, radians.
 */
typedef struct BelloptAngles {
  /**
   * 1 or 2.
   */
  int32_t set;
  bool tie;
  double theta[4];
  double phi[4];
  /**
   * Bell value these angles reach.
   */
  double bell;
} BelloptAngles;

typedef struct BelloptOracleConfig {
  size_t grid_n;
  size_t refine_iters;
  size_t restarts;
  uint64_t seed;
} BelloptOracleConfig;

typedef struct BelloptRecord {
  double t;
  double q2;
  double u[3];
  double bmax;
  int32_t active_set;
  double theta[4];
  double phi[4];
} BelloptRecord;

typedef struct BelloptEvent {
  enum BelloptEventKind kind;
  double t;
  double q2;
  double bmax;
} BelloptEvent;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Validates a density matrix and returns a new state handle in `*out_state`.
 *
 * `entries` holds the 4×4 matrix row-major in the basis
 * `|11>, |10>, |01>, |00>`, each entry as `re, im` (32 doubles). `off_x_tol` is the
 * largest magnitude accepted outside the X pattern; pass
 * `BELLOPT_DEFAULT_OFF_X_TOL` when unsure.
 *
 * # Safety
 * `entries` must point at 32 readable doubles and `out_state` at a writable pointer.
 */
enum BelloptStatus bellopt_state_new(const double *entries,
                                     double off_x_tol,
                                     struct BelloptState **out_state);

/**
 * Extended Werner-like state `r|Φ><Φ| + (1-r)I/4`,
 * `|Φ> = α|01> + βe^{iδ}|10>`, with `alpha2 = α²`.
 *
 * # Safety
 * `out_state` must be a writable pointer.
 */
enum BelloptStatus bellopt_state_ewl(double alpha2,
                                     double r,
                                     double delta,
                                     struct BelloptState **out_state);

/**
 * Releases a state; null is ignored.
 *
 * # Safety
 * `state` must come from this library and not be used afterwards.
 */
void bellopt_state_free(struct BelloptState *state);

/**
 * # Safety
 * Pointers must be valid or null.
 */
enum BelloptStatus bellopt_state_is_x(const struct BelloptState *state, bool *out_is_x);

/**
 * Maximum CHSH-Bell value: closed form for X states, Horodecki otherwise.
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum BelloptStatus bellopt_bmax(const struct BelloptState *state, double *out_bmax);

/**
 * `u1, u2, u3` of an X state; `NOT_X_STRUCTURED` otherwise.
 *
 * # Safety
 * `out_u` must point at 3 writable doubles.
 */
enum BelloptStatus bellopt_eigenvalues(const struct BelloptState *state, double *out_u);

/**
 * Optimal angles of an X state. On a tie the second set is written to
 * `out_alternate` when it is non-null; otherwise `out_alternate->set` is 0.
 *
 * # Safety
 * Pointers must be valid; `out_alternate` may be null.
 */
enum BelloptStatus bellopt_optimal_angles(const struct BelloptState *state,
                                          struct BelloptAngles *out_active,
                                          struct BelloptAngles *out_alternate);

/**
 * Bell function by direct trace at the given angles, order `(1, 1', 2, 2')`.
 *
 * # Safety
 * `theta` and `phi` must point at 4 readable doubles each.
 */
enum BelloptStatus bellopt_bell_function(const struct BelloptState *state,
                                         const double *theta,
                                         const double *phi,
                                         double *out_value);

/**
 * Default oracle configuration.
 */
struct BelloptOracleConfig bellopt_oracle_config_default(void);

/**
 * Brute-force estimate of the maximum Bell value.
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum BelloptStatus bellopt_oracle(const struct BelloptState *state,
                                  const struct BelloptOracleConfig *config,
                                  double *out_bmax);

/**
 * Values of `|q|²` where the extended Werner-like trajectory crosses
 * `u2 = u3`, ascending. Writes up to two roots and their count.
 *
 * # Safety
 * `out_roots` must point at 2 writable doubles.
 */
enum BelloptStatus bellopt_crossing_roots(double alpha2,
                                          double r,
                                          double *out_roots,
                                          size_t *out_count);

/**
 * Evolves an X state under amplitude damping on `samples` equally spaced
 * times in `[0, t_max]`. `qmodel` is `exp:GAMMA`, `lorentz:LAMBDA,GAMMA0`
 * or `table:PATH`.
 *
 * # Safety
 * `qmodel` must be a NUL-terminated string; pointers must be valid or null.
 */
enum BelloptStatus bellopt_scan_run(const struct BelloptState *state,
                                    const char *qmodel,
                                    double t_max,
                                    size_t samples,
                                    struct BelloptScan **out_scan);

/**
 * # Safety
 * `scan` must come from this library and not be used afterwards.
 */
void bellopt_scan_free(struct BelloptScan *scan);

/**
 * Number of time samples; 0 for null.
 *
 * # Safety
 * `scan` must be valid or null.
 */
size_t bellopt_scan_len(const struct BelloptScan *scan);

/**
 * Number of refined events; 0 for null.
 *
 * # Safety
 * `scan` must be valid or null.
 */
size_t bellopt_scan_event_count(const struct BelloptScan *scan);

/**
 * Number of grid warnings; 0 for null.
 *
 * # Safety
 * `scan` must be valid or null.
 */
size_t bellopt_scan_warning_count(const struct BelloptScan *scan);

/**
 * # Safety
 * Pointers must be valid or null.
 */
enum BelloptStatus bellopt_scan_record(const struct BelloptScan *scan,
                                       size_t index,
                                       struct BelloptRecord *out_record);

/**
 * # Safety
 * Pointers must be valid or null.
 */
enum BelloptStatus bellopt_scan_event(const struct BelloptScan *scan,
                                      size_t index,
                                      struct BelloptEvent *out_event);

/**
 * Message for the last failed call on this thread, or an empty string.
 * Valid until the next call into this library on the same thread.
 */
const char *bellopt_last_error_message(void);

/**
 * Library version, NUL-terminated, static.
 */
const char *bellopt_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BELLOPT_H */
