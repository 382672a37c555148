#ifndef CAPAFLAT_H
#define CAPAFLAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CapaflatStatus {
  CAPAFLAT_STATUS_OK = 0,
  CAPAFLAT_STATUS_NULL_POINTER = 1,
  CAPAFLAT_STATUS_INVALID_INPUT = 2,
  CAPAFLAT_STATUS_UNSUPPORTED_FAMILY = 3,
  CAPAFLAT_STATUS_CAPACITY_UNDEFINED = 4,
  CAPAFLAT_STATUS_CONVERGENCE = 5,
  CAPAFLAT_STATUS_EXTRAPOLATION = 6,
  CAPAFLAT_STATUS_NEWTON = 7,
  CAPAFLAT_STATUS_BOUNDARY_MISMATCH = 8,
  CAPAFLAT_STATUS_STEP_FAILURE = 9,
  CAPAFLAT_STATUS_EVALUATION = 10,
  CAPAFLAT_STATUS_PANIC = 11,
} CapaflatStatus;

/**
 * Closed-form harmonic-static examples.
 */
typedef enum CapaflatHsExample {
  CAPAFLAT_HS_EXAMPLE_FLAT = 0,
  CAPAFLAT_HS_EXAMPLE_SCHWARZSCHILD = 1,
  CAPAFLAT_HS_EXAMPLE_SPHERE = 2,
} CapaflatHsExample;

/**
 * Radial metric handle.
 */
typedef struct CapaflatMetric CapaflatMetric;

/**
 * Capacitary potential handle; owns a copy of its metric.
 */
typedef struct CapaflatPotential CapaflatPotential;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next call into the library on this thread.
 */
const char *capaflat_last_error(void);

/**
 * Static description of a status code.
 */
const char *capaflat_status_name(enum CapaflatStatus status);

/**
 * Euclidean exterior of the ball of radius `r0`.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum CapaflatStatus capaflat_metric_flat(double r0, struct CapaflatMetric **out);

/**
 * Schwarzschild exterior of the isotropic sphere of radius `r0`.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum CapaflatStatus capaflat_metric_schwarzschild(double m, double r0, struct CapaflatMetric **out);

/**
 * Band `r0 <= r <= r1` of the unit 3-sphere, `dr^2 + cos(r)^2 dσ^2`.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum CapaflatStatus capaflat_metric_sphere_band(double r0, double r1, struct CapaflatMetric **out);

/**
 * Metric from a JSON specification such as
 * `{"spec":"schwarzschild","m":2,"r0":1,"r1":"inf"}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for writing
 * one pointer.
 */
enum CapaflatStatus capaflat_metric_from_json(const char *json, struct CapaflatMetric **out);

/**
 * # Safety
 * `metric` must be NULL or a handle from this library not yet freed.
 */
void capaflat_metric_free(struct CapaflatMetric *metric);

/**
 * Capacity of the inner sphere. A nonpositive `tol` selects the default
 * quadrature tolerance.
 *
 * # Safety
 * `metric` must be a live handle; `out` must be valid for writing.
 */
enum CapaflatStatus capaflat_capacity(const struct CapaflatMetric *metric, double tol, double *out);

/**
 * `d/dr` of the capacity of the sphere of radius `r` as it moves outward.
 *
 * # Safety
 * `metric` must be a live handle; `out` must be valid for writing.
 */
enum CapaflatStatus capaflat_flow_variation(const struct CapaflatMetric *metric,
                                            double r,
                                            double tol,
                                            double *out);

/**
 * Capacitary potential of `metric`.
 *
 * # Safety
 * `metric` must be a live handle; `out` must be valid for writing one
 * pointer.
 */
enum CapaflatStatus capaflat_potential_new(const struct CapaflatMetric *metric,
                                           double tol,
                                           struct CapaflatPotential **out);

/**
 * # Safety
 * `potential` must be NULL or a handle from this library not yet freed.
 */
void capaflat_potential_free(struct CapaflatPotential *potential);

/**
 * # Safety
 * `potential` must be a live handle; `out` must be valid for writing.
 */
enum CapaflatStatus capaflat_potential_cap(const struct CapaflatPotential *potential, double *out);

/**
 * Value of the potential at `r`.
 *
 * # Safety
 * `potential` must be a live handle; `out` must be valid for writing.
 */
enum CapaflatStatus capaflat_potential_phi(const struct CapaflatPotential *potential,
                                           double r,
                                           double *out);

/**
 * Radial derivative of the potential at `r`.
 *
 * # Safety
 * `potential` must be a live handle; `out` must be valid for writing.
 */
enum CapaflatStatus capaflat_potential_dphi(const struct CapaflatPotential *potential,
                                            double r,
                                            double *out);

/**
 * Capacity as the Dirichlet energy of the potential over `4π`.
 *
 * # Safety
 * `potential` must be a live handle; `out` must be valid for writing.
 */
enum CapaflatStatus capaflat_capacity_energy(const struct CapaflatPotential *potential,
                                             double *out);

/**
 * Bray–Miao bound for round data with constant mean curvature `h`.
 *
 * # Safety
 * `out` must be valid for writing.
 */
enum CapaflatStatus capaflat_bray_miao_bound(double area, double h, double *out);

/**
 * Maximal capacity over rotationally symmetric extensions of round data.
 *
 * # Safety
 * `out` must be valid for writing.
 */
enum CapaflatStatus capaflat_max_capacity_round(double area, double h, double *out);

/**
 * Area and mean curvature of the Schwarzschild sphere at `r0`.
 *
 * # Safety
 * `area_out` and `h_out` must be valid for writing.
 */
enum CapaflatStatus capaflat_schwarzschild_bartnik_data(double m,
                                                        double r0,
                                                        double *area_out,
                                                        double *h_out);

/**
 * Schwarzschild mass and radius whose sphere carries the round data.
 *
 * # Safety
 * `m_out` and `r0_out` must be valid for writing.
 */
enum CapaflatStatus capaflat_round_data_to_schwarzschild(double area,
                                                         double h,
                                                         double *m_out,
                                                         double *r0_out);

/**
 * Sup norm of the harmonic-static residual of a closed-form example on
 * `n + 1` evenly spaced radii in `[lo, hi]`. `m` and `r0` are ignored where
 * they do not apply; `c` is the kernel coefficient.
 *
 * # Safety
 * `out` must be valid for writing.
 */
enum CapaflatStatus capaflat_hs_example_residual(enum CapaflatHsExample example,
                                                 double m,
                                                 double r0,
                                                 double c,
                                                 double lo,
                                                 double hi,
                                                 size_t n,
                                                 double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CAPAFLAT_H */
