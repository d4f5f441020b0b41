/* Generated by cbindgen. Do not edit. */

#ifndef EPSPECT_H
#define EPSPECT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of every fallible call.
 */
typedef enum EpsStatus {
  EPS_STATUS_OK = 0,
  EPS_STATUS_NULL_POINTER = 1,
  EPS_STATUS_INVALID_ARGUMENT = 2,
  EPS_STATUS_BUFFER_TOO_SMALL = 3,
  EPS_STATUS_COMPUTATION = 4,
  EPS_STATUS_PANIC = 5,
} EpsStatus;

/*
 Certified exceptional points of one chain length.
 */
typedef struct EpsEpList EpsEpList;

/*
 Solution of the metric equation for one model.
 */
typedef struct EpsMetric EpsMetric;

/*
 One lattice model.
 */
typedef struct EpsModel EpsModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failure on this thread, or null. The pointer stays
 valid until the next library call on the same thread.
 */
const char *eps_last_error(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void eps_string_free(char *s);

/*
 Model with shift `u` and non-Hermiticity `r` (shifted convention).

 # Safety
 `out` must be a valid pointer.
 */
enum EpsStatus eps_model_new_shift(size_t n, double u, double r, struct EpsModel **out);

/*
 Model with complex corner parameter `z` (shifted convention).

 # Safety
 `out` must be a valid pointer.
 */
enum EpsStatus eps_model_new_z(size_t n, double z_re, double z_im, struct EpsModel **out);

/*
 Model from a `ModelParams` JSON document.

 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum EpsStatus eps_model_from_json(const char *json, struct EpsModel **out);

/*
 # Safety
 `m` must come from this library and not have been freed. Null is ignored.
 */
void eps_model_free(struct EpsModel *m);

/*
 Matrix dimension, or 0 for a null handle.

 # Safety
 `m` must be null or a live handle.
 */
size_t eps_model_dim(const struct EpsModel *m);

/*
 Eigenvalues sorted by real then imaginary part into `re`, `im` (each of
 length at least the dimension).

 # Safety
 `m` must be a live handle and the buffers valid for `len` doubles.
 */
enum EpsStatus eps_model_spectrum(const struct EpsModel *m, double *re, double *im, size_t len);

/*
 Hamiltonian in row-major order (`len` at least dimension squared).

 # Safety
 `m` must be a live handle and the buffers valid for `len` doubles.
 */
enum EpsStatus eps_model_matrix(const struct EpsModel *m, double *re, double *im, size_t len);

/*
 Exceptional points of the `n`-site chain on the `r = 0` slice.

 # Safety
 `out` must be a valid pointer.
 */
enum EpsStatus eps_locate_eps(size_t n, struct EpsEpList **out);

/*
 # Safety
 `l` must be null or a live handle.
 */
size_t eps_ep_list_len(const struct EpsEpList *l);

/*
 Shift, eigenvalue and relative Jordan residual of entry `i`.

 # Safety
 `l` must be a live handle; output pointers must be valid.
 */
enum EpsStatus eps_ep_list_get(const struct EpsEpList *l,
                               size_t i,
                               double *u,
                               double *e_re,
                               double *e_im,
                               double *residual);

/*
 All certificates as a JSON array; free with [`eps_string_free`].

 # Safety
 `l` must be a live handle and `out` a valid pointer.
 */
enum EpsStatus eps_ep_list_json(const struct EpsEpList *l, char **out);

/*
 # Safety
 `l` must come from this library and not have been freed. Null is ignored.
 */
void eps_ep_list_free(struct EpsEpList *l);

/*
 Positive-definite metric for the model; fails with
 `EPS_STATUS_COMPUTATION` outside the reality domain.

 # Safety
 `m` must be a live handle and `out` a valid pointer.
 */
enum EpsStatus eps_metric_solve(const struct EpsModel *m, struct EpsMetric **out);

/*
 Dimension of the Hermitian solution space.

 # Safety
 `t` must be null or a live handle.
 */
size_t eps_metric_basis_dim(const struct EpsMetric *t);

/*
 Representative metric in row-major order.

 # Safety
 `t` must be a live handle and the buffers valid for `len` doubles.
 */
enum EpsStatus eps_metric_representative(const struct EpsMetric *t,
                                         double *re,
                                         double *im,
                                         size_t len);

/*
 Metric solution as JSON; free with [`eps_string_free`].

 # Safety
 `t` must be a live handle and `out` a valid pointer.
 */
enum EpsStatus eps_metric_json(const struct EpsMetric *t, char **out);

/*
 # Safety
 `t` must come from this library and not have been freed. Null is ignored.
 */
void eps_metric_free(struct EpsMetric *t);

/*
 Corner parameter `z` of the discretized Robin condition.

 # Safety
 Output pointers must be valid.
 */
enum EpsStatus eps_robin_to_z(double alpha, double beta, double h, double *z_re, double *z_im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EPSPECT_H */
