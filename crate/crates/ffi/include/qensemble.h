#ifndef QENSEMBLE_H
#define QENSEMBLE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

/*
 Result of an FFI call.
 */
typedef enum QeStatus {
  QE_STATUS_OK = 0,
  QE_STATUS_NULL_POINTER = 1,
  QE_STATUS_INVALID_ARGUMENT = 2,
  QE_STATUS_NUMERICAL_INVARIANT = 3,
  QE_STATUS_PANIC = 4,
} QeStatus;

/*
 A 1 → 2 qubit cloning channel.
 */
typedef struct QeCloner QeCloner;

/*
 A density operator.
 */
typedef struct QeDensity QeDensity;

/*
 A preparation procedure for a stream of qubits.
 */
typedef struct QeEnsemble QeEnsemble;

/*
 Message describing the last failed call on this thread, or null if the last call succeeded.
 The pointer stays valid until the next call into this library on the same thread.
 */
const char *qe_last_error(void);

/*
 Looks up a built-in ensemble (`E1`…`E6`). `n_total` sizes `E5`/`E6` and is ignored otherwise.

 # Safety
 `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QeStatus qe_ensemble_builtin(const char *name, size_t n_total, struct QeEnsemble **out);

/*
 Builds an ensemble from its JSON definition.

 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QeStatus qe_ensemble_from_json(const char *json, struct QeEnsemble **out);

/*
 # Safety
 `e` must be null or a pointer obtained from this library and not yet freed.
 */
void qe_ensemble_free(struct QeEnsemble *e);

/*
 `⟨Σ_z⟩` and `⟨Σ_z²⟩` over an `m`-particle window.

 # Safety
 All pointers must be valid.
 */
enum QeStatus qe_ensemble_sigma_z_moments(const struct QeEnsemble *e,
                                          size_t m,
                                          double *mean,
                                          double *second_moment);

/*
 The one-particle density operator of the ensemble.

 # Safety
 All pointers must be valid.
 */
enum QeStatus qe_ensemble_single_particle_operator(const struct QeEnsemble *e,
                                                   struct QeDensity **out);

/*
 The joint density operator of `m` consecutive particles.

 # Safety
 All pointers must be valid.
 */
enum QeStatus qe_ensemble_window_operator(const struct QeEnsemble *e,
                                          size_t m,
                                          struct QeDensity **out);

/*
 Hilbert-space dimension, or 0 for a null handle.

 # Safety
 `d` must be null or a live handle.
 */
size_t qe_density_dim(const struct QeDensity *d);

/*
 Reads matrix element `(row, col)`.

 # Safety
 All pointers must be valid.
 */
enum QeStatus qe_density_get(const struct QeDensity *d,
                             size_t row,
                             size_t col,
                             double *re,
                             double *im);

/*
 # Safety
 `d` must be null or a pointer obtained from this library and not yet freed.
 */
void qe_density_free(struct QeDensity *d);

/*
 `½‖a − b‖₁`.

 # Safety
 All pointers must be valid.
 */
enum QeStatus qe_density_trace_distance(const struct QeDensity *a,
                                        const struct QeDensity *b,
                                        double *out);

/*
 Traces out every subsystem not listed in `keep`.

 # Safety
 `keep` must point to `n_keep` readable indices; the other pointers must be valid.
 */
enum QeStatus qe_density_partial_trace(const struct QeDensity *d,
                                       const size_t *keep,
                                       size_t n_keep,
                                       struct QeDensity **out);

/*
 The optimal universal symmetric cloner with blank and ancilla in `|0⟩`.

 # Safety
 `out` must be valid.
 */
enum QeStatus qe_cloner_buzek_hillery(struct QeCloner **out);

/*
 The non-physical perfect cloner `|ψ⟩ ↦ |ψ⟩|ψ⟩`.

 # Safety
 `out` must be valid.
 */
enum QeStatus qe_cloner_perfect(struct QeCloner **out);

/*
 # Safety
 `cl` must be null or a pointer obtained from this library and not yet freed.
 */
void qe_cloner_free(struct QeCloner *cl);

/*
 Clones the qubit `amplitudes = [re0, im0, re1, im1]` and returns the joint two-clone state.

 # Safety
 `amplitudes` must point to four doubles; the other pointers must be valid.
 */
enum QeStatus qe_cloner_clone(const struct QeCloner *cl,
                              const double *amplitudes,
                              struct QeDensity **out);

/*
 Trace distance between Bob's two-clone states when Alice measures `σ_φ` and `σ_3`.

 # Safety
 All pointers must be valid.
 */
enum QeStatus qe_cloner_flash_distance(const struct QeCloner *cl, double phi, double *out);

/*
 `C(n, m) p^m (1−p)^{n−m}`.

 # Safety
 `out` must be valid.
 */
enum QeStatus qe_binomial_pmf(uint64_t n, uint64_t m, double p, double *out);

/*
 Success probability `1 − ½ P(n, n/2, ½)` of the count-based discrimination.

 # Safety
 `out` must be valid.
 */
enum QeStatus qe_discrimination_power(uint64_t n, double *out);

#endif  /* QENSEMBLE_H */
