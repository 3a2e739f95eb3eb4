#ifndef BEAMSPACE_H
#define BEAMSPACE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum BsStatus {
  BS_STATUS_OK = 0,
  BS_STATUS_NULL_POINTER = 1,
  BS_STATUS_INVALID_INPUT = 2,
  BS_STATUS_PARSE = 3,
  BS_STATUS_PORT_COUNT = 4,
  BS_STATUS_NOT_PASSIVE = 5,
  BS_STATUS_ASYMMETRIC = 6,
  BS_STATUS_SINGULAR = 7,
  BS_STATUS_ROOT_NOT_FOUND = 8,
  BS_STATUS_NOT_REACTIVE = 9,
  BS_STATUS_DEGENERATE_BASIS = 10,
  BS_STATUS_OUT_OF_RANGE = 11,
  BS_STATUS_PANIC = 12,
} BsStatus;

/**
 * Opaque PSK load table together with the basis pair it was built from.
 */
typedef struct BsLoadTable BsLoadTable;

/**
 * Opaque symmetric three-port model.
 */
typedef struct BsRadiator BsRadiator;

typedef struct BsComplex {
  double re;
  double im;
} BsComplex;

/**
 * Reactive basis pair returned by [`bs_reactive_partner`]. `x_ii` is NaN
 * when the partner is an open circuit.
 */
typedef struct BsReactivePair {
  double x_i;
  double x_ii;
  bool ii_open;
  struct BsComplex gamma_i;
  struct BsComplex gamma_ii;
  double residual;
  uint32_t roots;
} BsReactivePair;

/**
 * One row of a load table. Reactances are NaN for an open circuit.
 */
typedef struct BsLoadEntry {
  uint32_t state;
  struct BsComplex ratio;
  struct BsComplex gamma1;
  struct BsComplex gamma2;
  double x1;
  double x2;
  bool open1;
  bool open2;
} BsLoadEntry;

typedef struct BsBasisPowers {
  double p_b1;
  double p_b2;
  double r;
} BsBasisPowers;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next library call on the same thread.
 */
const char *bs_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *bs_version(void);

/**
 * Parses Touchstone text for a three-port, selects the frequency nearest
 * `freq_hz` (the first point when `freq_hz` is NaN), checks passivity and
 * mirror symmetry and returns the reduced model.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum BsStatus bs_radiator_from_touchstone(const char *text,
                                          double freq_hz,
                                          double passivity_tol,
                                          double symmetry_tol,
                                          struct BsRadiator **out);

/**
 * Builds the model from its four distinct scattering parameters.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BsStatus bs_radiator_from_parts(struct BsComplex s00,
                                     struct BsComplex s01,
                                     struct BsComplex s11,
                                     struct BsComplex s21,
                                     double z0,
                                     struct BsRadiator **out);

/**
 * # Safety
 * `r` must come from a `bs_radiator_*` constructor and not be freed twice.
 */
void bs_radiator_free(struct BsRadiator *r);

/**
 * Feed reflection coefficient for control loads `gamma1`, `gamma2`.
 *
 * # Safety
 * `r` and `out` must be valid pointers.
 */
enum BsStatus bs_total_reflection(const struct BsRadiator *r,
                                  struct BsComplex gamma1,
                                  struct BsComplex gamma2,
                                  struct BsComplex *out);

/**
 * Reactive partner of the first basis reactance `x_i` (ohms).
 *
 * # Safety
 * `r` and `out` must be valid pointers.
 */
enum BsStatus bs_reactive_partner(const struct BsRadiator *r,
                                  double x_i,
                                  struct BsReactivePair *out);

/**
 * Control loads realizing ratio `s_r` on the basis built from `gamma_i`, `gamma_ii`.
 *
 * # Safety
 * `r`, `out_gamma1` and `out_gamma2` must be valid pointers.
 */
enum BsStatus bs_solve_loads(const struct BsRadiator *r,
                             struct BsComplex gamma_i,
                             struct BsComplex gamma_ii,
                             struct BsComplex s_r,
                             struct BsComplex *out_gamma1,
                             struct BsComplex *out_gamma2);

/**
 * Synthesizes the M-PSK load table for the partner of `x_i`.
 *
 * # Safety
 * `r` and `out` must be valid pointers.
 */
enum BsStatus bs_synthesize_psk(const struct BsRadiator *r,
                                double x_i,
                                uint32_t m,
                                double reactive_tol,
                                struct BsLoadTable **out);

/**
 * # Safety
 * `t` must come from [`bs_synthesize_psk`] and not be freed twice.
 */
void bs_table_free(struct BsLoadTable *t);

/**
 * Number of states; 0 for a null table.
 *
 * # Safety
 * `t` must be null or a valid table.
 */
size_t bs_table_len(const struct BsLoadTable *t);

/**
 * Copies row `index` (0-based, state order) into `out`.
 *
 * # Safety
 * `t` and `out` must be valid pointers.
 */
enum BsStatus bs_table_entry(const struct BsLoadTable *t, size_t index, struct BsLoadEntry *out);

/**
 * Feed reflection coefficient shared by every state of the table.
 *
 * # Safety
 * `t` and `out` must be valid pointers.
 */
enum BsStatus bs_table_gamma_tot(const struct BsLoadTable *t, struct BsComplex *out);

/**
 * Basis pair the table was built from.
 *
 * # Safety
 * `t` and `out` must be valid pointers.
 */
enum BsStatus bs_table_pair(const struct BsLoadTable *t, struct BsReactivePair *out);

/**
 * Lossless basis-pattern powers and their ratio.
 *
 * # Safety
 * `r`, `t` and `out` must be valid pointers.
 */
enum BsStatus bs_basis_powers(const struct BsRadiator *r,
                              const struct BsLoadTable *t,
                              struct BsBasisPowers *out);

/**
 * Largest pattern mismatch over `samples` random symbol pairs.
 *
 * # Safety
 * `r`, `t` and `out_max_residual` must be valid pointers.
 */
enum BsStatus bs_verify_multiplexing(const struct BsRadiator *r,
                                     const struct BsLoadTable *t,
                                     size_t samples,
                                     uint64_t seed,
                                     double *out_max_residual);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BEAMSPACE_H */
