#ifndef MULTILAYER_KURAMOTO_H
#define MULTILAYER_KURAMOTO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MlkStatus {
  MLK_STATUS_OK = 0,
  MLK_STATUS_NULL_POINTER = 1,
  MLK_STATUS_BUFFER_SIZE = 2,
  MLK_STATUS_INVALID_ARGUMENT = 3,
  MLK_STATUS_DIMENSION = 4,
  MLK_STATUS_INVALID_GRAPH = 5,
  MLK_STATUS_GENERATION = 6,
  MLK_STATUS_REGULARITY = 7,
  MLK_STATUS_NOT_EQUILIBRIUM = 8,
  MLK_STATUS_ASSUMPTION = 9,
  MLK_STATUS_CONNECTIVITY = 10,
  MLK_STATUS_ASYMMETRIC = 11,
  MLK_STATUS_NO_CONVERGENCE = 12,
  MLK_STATUS_DIVERGENCE = 13,
  MLK_STATUS_CONFIG = 14,
  MLK_STATUS_IO = 15,
  MLK_STATUS_PANIC = 16,
} MlkStatus;

typedef enum MlkInterKind {
  // Every pair of layers coupled with the same epsilon.
  MLK_INTER_KIND_COMPLETE = 0,
  // Layer l coupled to l - 1 and l + 1 (cyclically).
  MLK_INTER_KIND_RING = 1,
} MlkInterKind;

typedef enum MlkVerdict {
  MLK_VERDICT_STABLE = 0,
  MLK_VERDICT_UNSTABLE = 1,
  MLK_VERDICT_MARGINAL = 2,
} MlkVerdict;

typedef struct MlkNetwork MlkNetwork;

typedef struct MlkSpectrum MlkSpectrum;

typedef struct MlkTrajectory MlkTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failure on this thread, or null if none.
// The pointer stays valid until the next failing call on the same thread.
const char *mlk_last_error_message(void);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a pointer obtained from this library that was not freed yet.
void mlk_string_free(char *s);

// `m` identical ring layers of `n` nodes, each linked to its `k` nearest
// neighbours on either side with weight `w`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum MlkStatus mlk_network_new_rings(size_t m,
                                     size_t n,
                                     size_t k,
                                     double w,
                                     enum MlkInterKind inter,
                                     double epsilon,
                                     double omega,
                                     struct MlkNetwork **out);

// Network from explicit matrices. `adjacency` holds the `m` layer matrices
// one after another, each row-major with side `sizes[l]`; `inter` is the
// row-major `m x m` coupling matrix.
//
// # Safety
// `sizes` must point to `m` values, `adjacency` to `sum(sizes[l]^2)` values,
// `inter` to `m * m` values, and `out` to storage for one handle.
enum MlkStatus mlk_network_from_matrices(size_t m,
                                         const size_t *sizes,
                                         const double *adjacency,
                                         const double *inter,
                                         double omega,
                                         struct MlkNetwork **out);

// Network described by a TOML scenario document (same schema as the CLI).
//
// # Safety
// `toml` must be a nul-terminated string and `out` storage for one handle.
enum MlkStatus mlk_network_from_config(const char *toml, struct MlkNetwork **out);

// # Safety
// `net` must be null or a handle from this library that was not freed yet.
void mlk_network_free(struct MlkNetwork *net);

// Number of layers, or 0 for a null handle.
//
// # Safety
// `net` must be null or a live handle.
size_t mlk_network_layer_count(const struct MlkNetwork *net);

// Total number of oscillators, or 0 for a null handle.
//
// # Safety
// `net` must be null or a live handle.
size_t mlk_network_total_size(const struct MlkNetwork *net);

// # Safety
// `net` must be a live handle and `out` must hold `len` values.
enum MlkStatus mlk_network_layer_sizes(const struct MlkNetwork *net, size_t *out, size_t len);

// Row-major full adjacency; `len` must be `total_size^2`.
//
// # Safety
// `net` must be a live handle and `out` must hold `len` values.
enum MlkStatus mlk_network_full_adjacency(const struct MlkNetwork *net, double *out, size_t len);

// Row-major reduced coupling matrix; `len` must be `layer_count^2`.
//
// # Safety
// `net` must be a live handle and `out` must hold `len` values.
enum MlkStatus mlk_network_reduced_matrix(const struct MlkNetwork *net, double *out, size_t len);

// Repeats each reduced phase over its layer.
//
// # Safety
// `theta_bar` must hold `m` values and `out` must hold `n` values.
enum MlkStatus mlk_broadcast(const struct MlkNetwork *net,
                             const double *theta_bar,
                             size_t m,
                             double *out,
                             size_t n);

// Phases of the `p`-th twisted state on `m` oscillators.
//
// # Safety
// `out` must hold `m` values.
enum MlkStatus mlk_twisted_state(size_t m, int64_t p, double *out);

// # Safety
// `theta` must hold `n` values and `out` must be writable.
enum MlkStatus mlk_order_parameter(const double *theta, size_t n, double *out);

// Integrates the full network from `theta0` (length `total_size`).
//
// # Safety
// `net` must be a live handle, `theta0` must hold `n` values and `out`
// must be storage for one handle.
enum MlkStatus mlk_simulate_full(const struct MlkNetwork *net,
                                 const double *theta0,
                                 size_t n,
                                 double dt,
                                 double t_max,
                                 size_t record_every,
                                 struct MlkTrajectory **out);

// Integrates the reduced system from `theta_bar0` (length `layer_count`).
//
// # Safety
// As for [`mlk_simulate_full`] with `m` values in `theta_bar0`.
enum MlkStatus mlk_simulate_reduced(const struct MlkNetwork *net,
                                    const double *theta_bar0,
                                    size_t m,
                                    double dt,
                                    double t_max,
                                    size_t record_every,
                                    struct MlkTrajectory **out);

// # Safety
// `traj` must be null or a handle from this library that was not freed yet.
void mlk_trajectory_free(struct MlkTrajectory *traj);

// Number of recorded samples, or 0 for a null handle.
//
// # Safety
// `traj` must be null or a live handle.
size_t mlk_trajectory_len(const struct MlkTrajectory *traj);

// Phases per sample, or 0 for a null handle.
//
// # Safety
// `traj` must be null or a live handle.
size_t mlk_trajectory_dim(const struct MlkTrajectory *traj);

// Sample times; `len` must equal the trajectory length.
//
// # Safety
// `traj` must be a live handle and `out` must hold `len` values.
enum MlkStatus mlk_trajectory_times(const struct MlkTrajectory *traj, double *out, size_t len);

// Order parameter at every sample; `len` must equal the trajectory length.
//
// # Safety
// `traj` must be a live handle and `out` must hold `len` values.
enum MlkStatus mlk_trajectory_order_parameters(const struct MlkTrajectory *traj,
                                               double *out,
                                               size_t len);

// Phases of sample `index`; `len` must equal the trajectory dimension.
//
// # Safety
// `traj` must be a live handle and `out` must hold `len` values.
enum MlkStatus mlk_trajectory_state(const struct MlkTrajectory *traj,
                                    size_t index,
                                    double *out,
                                    size_t len);

// Full Jacobian spectrum at the broadcast of the reduced equilibrium
// `theta_bar_star`, assembled from the layer Laplacians and the reduced Jacobian.
//
// # Safety
// `net` must be a live handle, `theta_bar_star` must hold `m` values and
// `out` must be storage for one handle.
enum MlkStatus mlk_stability_analyze(const struct MlkNetwork *net,
                                     const double *theta_bar_star,
                                     size_t m,
                                     struct MlkSpectrum **out);

// # Safety
// `spectrum` must be null or a handle from this library that was not freed yet.
void mlk_spectrum_free(struct MlkSpectrum *spectrum);

// Number of eigenvalues, or 0 for a null handle.
//
// # Safety
// `spectrum` must be null or a live handle.
size_t mlk_spectrum_len(const struct MlkSpectrum *spectrum);

// Eigenvalues in ascending order.
//
// # Safety
// `spectrum` must be a live handle and `out` must hold `len` values.
enum MlkStatus mlk_spectrum_eigenvalues(const struct MlkSpectrum *spectrum,
                                        double *out,
                                        size_t len);

// # Safety
// `spectrum` must be a live handle and `out` must be writable.
enum MlkStatus mlk_spectrum_verdict(const struct MlkSpectrum *spectrum, enum MlkVerdict *out);

// JSON rendering of the report (eigenvalues, provenance, verdict, tolerance).
// Release with [`mlk_string_free`]. Returns null for a null handle.
//
// # Safety
// `spectrum` must be null or a live handle.
char *mlk_spectrum_to_json(const struct MlkSpectrum *spectrum);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MULTILAYER_KURAMOTO_H */
