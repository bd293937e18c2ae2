/* Copyright 2026 The ivmap Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the ivmap core. Every function returns an ivm_status; on
 * failure ivm_last_error() holds a message for the calling thread. Strings
 * returned through char** are owned by the caller and released with
 * ivm_string_free.
 */

#ifndef IVMAP_IVMAP_H
#define IVMAP_IVMAP_H

#include <stddef.h>
#include <stdint.h>

#if defined(IVMAP_BUILDING)
#define IVM_API __attribute__((visibility("default")))
#else
#define IVM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ivm_status {
  IVM_OK = 0,
  IVM_E_EXCEPTIONAL_POINT = 1,
  IVM_E_OUT_OF_DOMAIN = 2,
  IVM_E_CRITICAL_POINT = 3,
  IVM_E_DEGENERATE_SIDE = 4,
  IVM_E_PARTIAL_ORBIT = 5,
  IVM_E_NOT_A_GAP_MAP = 6,
  IVM_E_SUBDIVISION_OVERFLOW = 7,
  IVM_E_HYPOTHESIS_FAILED = 8,
  IVM_E_UNBOUNDED_DERIVATIVE = 9,
  IVM_E_DEGENERATE_SCALE = 10,
  IVM_E_BAD_PARAM = 11,
  IVM_E_SEARCH_EXHAUSTED = 12,
  IVM_E_PRECONDITION_FAILED = 13,
  IVM_E_PARSE = 14,
  IVM_E_IO = 15,
  IVM_E_NULL_ARG = 16,
  IVM_E_INTERNAL = 17
} ivm_status;

typedef struct ivm_map ivm_map;

/* Sides of a lateral point. 0 selects the real orbit where accepted. */
#define IVM_SIDE_MINUS (-1)
#define IVM_SIDE_PLUS 1

IVM_API const char* ivm_version(void);
IVM_API const char* ivm_status_name(ivm_status s);
IVM_API const char* ivm_last_error(void);
IVM_API void ivm_string_free(char* s);

/* Map specs */
IVM_API ivm_status ivm_map_load(const char* path, ivm_map** out);
IVM_API ivm_status ivm_map_from_json(const char* text, ivm_map** out);
IVM_API ivm_status ivm_map_to_json(const ivm_map* m, char** out);
IVM_API ivm_status ivm_map_save(const ivm_map* m, const char* path);
IVM_API void ivm_map_free(ivm_map* m);
IVM_API ivm_status ivm_map_exceptional(const ivm_map* m, double* out, size_t cap, size_t* count);
IVM_API ivm_status ivm_map_eval(const ivm_map* m, double x, double* y);
IVM_API ivm_status ivm_map_derivative(const ivm_map* m, double x, int order, double* y);
IVM_API ivm_status ivm_map_schwarzian(const ivm_map* m, double x, double* y);
IVM_API ivm_status ivm_map_validate(const ivm_map* m, size_t grid_n, int* clean, char** report_json);

/* Zoo */
typedef struct ivm_ewi_options {
  double rotation_target;
  double target_tolerance;
  size_t search_budget;
  double v_lo;
  double v_hi;
  size_t rotation_steps;
  double rational_gap;
  size_t max_denominator;
} ivm_ewi_options;

IVM_API void ivm_ewi_options_default(ivm_ewi_options* o);
IVM_API ivm_status ivm_zoo_logistic(double lambda, ivm_map** out);
IVM_API ivm_status ivm_zoo_lorenz(double c, double rho_l, double rho_r, double u, double v, ivm_map** out);
IVM_API ivm_status ivm_zoo_ewi(double c, double rho_l, double rho_r, double u, const ivm_ewi_options* o,
                               ivm_map** out, char** info_json);
IVM_API ivm_status ivm_gap_map(const ivm_map* lorenz, ivm_map** out, char** info_json);

/* Lateral orbits */
IVM_API ivm_status ivm_lateral_step(const ivm_map* m, double coord, int side, double* out_coord, int* out_side);
/* CSV rows step,coord,side,branch_index; side 0 gives the real orbit. */
IVM_API ivm_status ivm_orbit_csv(const ivm_map* m, double coord, int side, size_t n, char** csv);
IVM_API ivm_status ivm_periodic(const ivm_map* m, double coord, int side, size_t max_period, double tol_p,
                                char** json);
IVM_API ivm_status ivm_omega(const ivm_map* m, double x0, size_t burn_in, size_t tail, double resolution,
                             char** json);
IVM_API ivm_status ivm_rotation(const ivm_map* m, double c, size_t n, double* out);

/* Return maps */
IVM_API ivm_status ivm_check_nice(const ivm_map* m, double a, double b, size_t horizon, char** json);
/* CSV rows sub_lo,sub_hi,return_time,image_lo,image_hi,onto. */
IVM_API ivm_status ivm_return_map(const ivm_map* m, double a, double b, size_t max_time, double tol_onto, char** csv,
                                  char** summary_json);
IVM_API ivm_status ivm_induced_map(const ivm_map* m, double a, double b, size_t depth_cap, size_t max_time,
                                   char** json);

typedef struct ivm_sampling {
  size_t samples;
  size_t burn_in;
  size_t tail;
  double resolution;
  double hausdorff_tol;
  uint64_t seed;
  unsigned threads; /* 0: IVMAP_THREADS or hardware concurrency */
  size_t closure_steps;
} ivm_sampling;

IVM_API void ivm_sampling_default(ivm_sampling* s);
IVM_API ivm_status ivm_dichotomy(const ivm_map* m, double a, double b, const ivm_sampling* s, size_t horizon,
                                 double threshold, char** json);

/* Surgery; the record describes the modification. */
IVM_API ivm_status ivm_surgery_pit(const ivm_map* m, double a, double b, double q, ivm_map** out, char** record);
IVM_API ivm_status ivm_surgery_flatten(const ivm_map* m, double p, ivm_map** out, char** record);
IVM_API ivm_status ivm_surgery_lorenz(const ivm_map* m, double a, double b, double c, ivm_map** out, char** record);

/* Attractors */
IVM_API ivm_status ivm_classify(const ivm_map* m, const ivm_sampling* s, char** json);
IVM_API ivm_status ivm_mane(const ivm_map* m, double tol_dist, const ivm_sampling* s, double* fraction);

#ifdef __cplusplus
}
#endif

#endif /* IVMAP_IVMAP_H */
