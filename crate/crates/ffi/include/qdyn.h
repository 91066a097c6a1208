#ifndef QDYN_H
#define QDYN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QdynStatus {
  QDYN_STATUS_OK = 0,
  QDYN_STATUS_NULL_POINTER = 1,
  QDYN_STATUS_INVALID_ARGUMENT = 2,
  QDYN_STATUS_DIMENSION_MISMATCH = 3,
  QDYN_STATUS_NOT_HERMITIAN = 4,
  QDYN_STATUS_NOT_UNITARY = 5,
  QDYN_STATUS_NOT_POSITIVE = 6,
  QDYN_STATUS_NOT_NORMALIZED = 7,
  QDYN_STATUS_NUMERICAL = 8,
  QDYN_STATUS_CONFIG = 9,
  QDYN_STATUS_PANIC = 10,
} QdynStatus;

/**
 * Opaque density matrix.
 */
typedef struct QdynDensity QdynDensity;

/**
 * Opaque square matrix.
 */
typedef struct QdynOperator QdynOperator;

/**
 * Opaque normalized state vector.
 */
typedef struct QdynState QdynState;

typedef struct QdynComplex {
  double re;
  double im;
} QdynComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Valid until the next failing call.
 */
const char *qdyn_last_error(void);

/**
 * Copies a row-major `dim x dim` matrix into a new operator handle.
 *
 * # Safety
 * `data` must point to `dim * dim` values; `out` must be writable.
 */
enum QdynStatus qdyn_operator_new(const struct QdynComplex *data,
                                  uintptr_t dim,
                                  struct QdynOperator **out);

/**
 * # Safety
 * `op` must come from this library and not be used afterwards. Null is ignored.
 */
void qdyn_operator_free(struct QdynOperator *op);

/**
 * Dimension of `op`, or 0 for null.
 *
 * # Safety
 * `op` must be null or a live handle.
 */
uintptr_t qdyn_operator_dim(const struct QdynOperator *op);

/**
 * Writes the entries of `op` row-major into `out`, which holds `len` values.
 *
 * # Safety
 * `op` must be a live handle and `out` must hold `len` values.
 */
enum QdynStatus qdyn_operator_data(const struct QdynOperator *op,
                                   struct QdynComplex *out,
                                   uintptr_t len);

/**
 * Copies `dim` amplitudes into a new state handle. The vector must have unit norm.
 *
 * # Safety
 * `data` must point to `dim` values; `out` must be writable.
 */
enum QdynStatus qdyn_state_new(const struct QdynComplex *data,
                               uintptr_t dim,
                               struct QdynState **out);

/**
 * # Safety
 * `psi` must come from this library and not be used afterwards. Null is ignored.
 */
void qdyn_state_free(struct QdynState *psi);

/**
 * # Safety
 * `psi` must be null or a live handle.
 */
uintptr_t qdyn_state_dim(const struct QdynState *psi);

/**
 * # Safety
 * `psi` must be a live handle and `out` must hold `len` values.
 */
enum QdynStatus qdyn_state_data(const struct QdynState *psi,
                                struct QdynComplex *out,
                                uintptr_t len);

/**
 * Validates and copies a row-major density matrix.
 *
 * # Safety
 * `data` must point to `dim * dim` values; `out` must be writable.
 */
enum QdynStatus qdyn_density_new(const struct QdynComplex *data,
                                 uintptr_t dim,
                                 struct QdynDensity **out);

/**
 * `psi psi^dag`.
 *
 * # Safety
 * `psi` must be a live handle; `out` must be writable.
 */
enum QdynStatus qdyn_density_from_state(const struct QdynState *psi, struct QdynDensity **out);

/**
 * # Safety
 * `rho` must come from this library and not be used afterwards. Null is ignored.
 */
void qdyn_density_free(struct QdynDensity *rho);

/**
 * # Safety
 * `rho` must be null or a live handle.
 */
uintptr_t qdyn_density_dim(const struct QdynDensity *rho);

/**
 * # Safety
 * `rho` must be a live handle and `out` must hold `len` values.
 */
enum QdynStatus qdyn_density_data(const struct QdynDensity *rho,
                                  struct QdynComplex *out,
                                  uintptr_t len);

/**
 * Closed-form Rabi propagator `exp(-i (Omega a + conj(Omega) a^dag) t)` on a qubit.
 *
 * # Safety
 * `out` must be writable.
 */
enum QdynStatus qdyn_rabi_propagator(struct QdynComplex omega, double t, struct QdynOperator **out);

/**
 * Evolves `psi0` under the constant Hamiltonian `h` from `t0` to `t1` and
 * returns the final state.
 *
 * # Safety
 * `h` and `psi0` must be live handles; `out` must be writable.
 */
enum QdynStatus qdyn_evolve(const struct QdynOperator *h,
                            const struct QdynState *psi0,
                            double t0,
                            double t1,
                            uintptr_t steps,
                            struct QdynState **out);

/**
 * Lindblad evolution with constant `h` and `count` collapse operators
 * `collapses[k]` at rates `gammas[k] > 0`, from 0 to `t1`. Returns the final state.
 *
 * # Safety
 * `h`, `rho0` and every `collapses[k]` must be live handles; `collapses` and
 * `gammas` must hold `count` entries; `out` must be writable.
 */
enum QdynStatus qdyn_lindblad_evolve(const struct QdynOperator *h,
                                     const struct QdynOperator *const *collapses,
                                     const double *gammas,
                                     uintptr_t count,
                                     const struct QdynDensity *rho0,
                                     double t1,
                                     uintptr_t steps,
                                     struct QdynDensity **out);

/**
 * `Tr sqrt(sqrt(rho) sigma sqrt(rho))`.
 *
 * # Safety
 * `rho` and `sigma` must be live handles; `out` must be writable.
 */
enum QdynStatus qdyn_fidelity(const struct QdynDensity *rho,
                              const struct QdynDensity *sigma,
                              double *out);

/**
 * Pure-state concurrence of `psi` split as `dim_a x dim_b`.
 *
 * # Safety
 * `psi` must be a live handle; `out` must be writable.
 */
enum QdynStatus qdyn_concurrence(const struct QdynState *psi,
                                 uintptr_t dim_a,
                                 uintptr_t dim_b,
                                 double *out);

/**
 * `|Tr(U^dag V)|^2 / d^2`.
 *
 * # Safety
 * `u` and `v` must be live handles; `out` must be writable.
 */
enum QdynStatus qdyn_trace_fidelity(const struct QdynOperator *u,
                                    const struct QdynOperator *v,
                                    double *out);

/**
 * General RWA error bound on `||e(t)||^2` for constant envelopes `p`, `q`.
 *
 * # Safety
 * `out` must be writable.
 */
enum QdynStatus qdyn_rwa_error_bound(double omega_a,
                                     double xi,
                                     uintptr_t dim,
                                     double p,
                                     double q,
                                     double t,
                                     double *out);

/**
 * Runs the experiment described by `config` (the CLI's `key=value` format) and
 * returns the CSV text through `out_csv`. Any `out` key is ignored. Release the
 * string with `qdyn_string_free`.
 *
 * # Safety
 * `config` must be a NUL-terminated string; `out_csv` must be writable.
 */
enum QdynStatus qdyn_run_experiment(const char *config, char **out_csv);

/**
 * # Safety
 * `s` must come from `qdyn_run_experiment` and not be used afterwards. Null is ignored.
 */
void qdyn_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QDYN_H */
