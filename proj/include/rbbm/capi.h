/* Copyright 2026 the rbbm authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the beam-model toolkit. All functions return an rbbm_status
 * (0 on success); rbbm_last_error() describes the most recent failure on the
 * calling thread. Opaque handles own their resources and are released with
 * the matching *_free call.
 */

#ifndef RBBM_CAPI_H
#define RBBM_CAPI_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RBBM_API __declspec(dllexport)
#else
#define RBBM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rbbm_status {
  RBBM_OK = 0,
  RBBM_ERR_FAILED = 1,  /* numeric or internal failure */
  RBBM_ERR_INVALID = 2, /* invalid argument or parameter invariant */
  RBBM_ERR_IO = 3       /* file could not be read/written/parsed */
} rbbm_status;

RBBM_API const char* rbbm_version(void);
RBBM_API const char* rbbm_last_error(void);

/* ---- parameter structs (plain data, mirrored from the C++ core) ---- */

typedef struct rbbm_beam_params {
  double sigma_m;
  double p_prime;
  double pi3;
  double pi4;
  double z_max;
} rbbm_beam_params;

typedef struct rbbm_net_params {
  double p;
  double sigma_m;
  double pi3;
  double pi4;
  double z_max;
} rbbm_net_params;

typedef struct rbbm_thrun_params {
  double sigma_m;
  double z_hit;
  double z_short;
  double z_max_w;
  double z_rand;
  double lambda_short;
  double z_max;
} rbbm_thrun_params;

typedef struct rbbm_vb_posterior {
  double alpha[4];
  double beta;
  double mu_bar;
  double w;
  double nu;
} rbbm_vb_posterior;

typedef struct rbbm_pose {
  double x;
  double y;
  double heading;
} rbbm_pose;

typedef struct rbbm_region {
  double trans_sigma;
  double rot_sigma;
  double euclid_weight;
  double angular_weight;
  int uniform_bounds;
} rbbm_region;

typedef struct rbbm_scan_config {
  uint64_t samples_l;
  double smooth_c;
  int dynamic_mode; /* 0: hit-only static model, 1: full mixture */
} rbbm_scan_config;

typedef struct rbbm_grid_spec {
  double x0, x1, y0, y1;
  size_t nx, ny;
  double heading;
  size_t heading_count;
  double heading_step;
} rbbm_grid_spec;

/* ---- maps ---- */

typedef struct rbbm_map rbbm_map;

RBBM_API rbbm_status rbbm_map_load_file(const char* path, rbbm_map** out);
RBBM_API rbbm_status rbbm_map_from_json(const char* text, rbbm_map** out);
/* segments: n quadruples x1,y1,x2,y2 */
RBBM_API rbbm_status rbbm_map_create(const double* segments, size_t n,
                                     double z_max, rbbm_map** out);
RBBM_API void rbbm_map_free(rbbm_map* map);
RBBM_API rbbm_status rbbm_map_z_max(const rbbm_map* map, double* out);
RBBM_API rbbm_status rbbm_map_ray_cast(const rbbm_map* map,
                                       const rbbm_pose* pose, double angle,
                                       double* out);
/* out has room for n_angles expected ranges */
RBBM_API rbbm_status rbbm_map_simulate_scan(const rbbm_map* map,
                                            const rbbm_pose* pose,
                                            const double* angles,
                                            size_t n_angles, double* out);

/* ---- datasets ---- */

typedef struct rbbm_dataset rbbm_dataset;

RBBM_API rbbm_status rbbm_dataset_load_csv(const char* path, double z_max,
                                           rbbm_dataset** out);
RBBM_API rbbm_status rbbm_dataset_create(const double* z, const double* z_star,
                                         size_t n, double z_max,
                                         rbbm_dataset** out);
RBBM_API rbbm_status rbbm_dataset_save_csv(const rbbm_dataset* ds,
                                           const char* path);
RBBM_API void rbbm_dataset_free(rbbm_dataset* ds);
RBBM_API size_t rbbm_dataset_size(const rbbm_dataset* ds);
RBBM_API rbbm_status rbbm_dataset_row(const rbbm_dataset* ds, size_t index,
                                      double* z, double* z_star);

/* ---- beam densities ---- */

RBBM_API rbbm_status rbbm_density_eval(double z, double z_star,
                                       const rbbm_beam_params* params,
                                       double eps, double* out);
RBBM_API rbbm_status rbbm_density_exact_numeric(double z, double z_star,
                                                const rbbm_beam_params* params,
                                                double step, double eps,
                                                double* out);
RBBM_API rbbm_status rbbm_thrun_density_eval(double z, double z_star,
                                             const rbbm_thrun_params* params,
                                             double eps, double* out);
RBBM_API rbbm_status rbbm_p_prime_from_env(double u, double p, double* out);
/* quadrature of the occlusion density over [0, z*] */
RBBM_API rbbm_status rbbm_occl_integral(double z_star, double p_prime,
                                        double* out);
RBBM_API rbbm_status rbbm_sum_identity(uint64_t k, double e, uint64_t terms,
                                       double* partial, double* closed);

/* ---- generative sampling & validation ---- */

RBBM_API rbbm_status rbbm_sample_dataset(const double* z_stars,
                                         size_t n_z_stars,
                                         const rbbm_net_params* params,
                                         uint64_t per_range, uint64_t seed,
                                         int keep_causes, rbbm_dataset** out);
RBBM_API rbbm_status rbbm_validate_monte_carlo(double z_star,
                                               const rbbm_net_params* params,
                                               uint64_t draws, size_t bins,
                                               uint64_t seed,
                                               double* hellinger_out);

/* ---- learning ---- */

/* loglik_out (optional) holds up to iters entries; *n_iters_out reports how
 * many were produced. */
RBBM_API rbbm_status rbbm_ml_fit(const rbbm_dataset* ds,
                                 const rbbm_beam_params* init, size_t iters,
                                 int early_stop, rbbm_beam_params* params_out,
                                 double* loglik_out, size_t* n_iters_out);
/* Standard initialization (most-probable-bin mean, alpha0 as given). */
RBBM_API rbbm_status rbbm_vb_fit(const rbbm_dataset* ds, size_t iters,
                                 double alpha0, rbbm_vb_posterior* post_out,
                                 rbbm_beam_params* point_out);
RBBM_API rbbm_status rbbm_vb_predictive_eval(double z, double z_star,
                                             const rbbm_vb_posterior* post,
                                             double z_max, double eps,
                                             double* out);
RBBM_API rbbm_status rbbm_thrun_fit(const rbbm_dataset* ds,
                                    const rbbm_thrun_params* init, size_t iters,
                                    rbbm_thrun_params* params_out,
                                    double* loglik_out, size_t* n_iters_out);

/* ---- histogram distances ---- */

/* d1: KL divergence, d2: Hellinger distance between the dataset histogram
 * (equal-width bins on [0, z_max]) and the discretized model density,
 * evaluated at the dataset's mean expected range. kind: 0 beam mixture,
 * 1 Thrun baseline, 2 VB predictive. */
RBBM_API rbbm_status rbbm_fit_distances(const rbbm_dataset* ds, int kind,
                                        const rbbm_beam_params* beam,
                                        const rbbm_thrun_params* thrun,
                                        const rbbm_vb_posterior* vb,
                                        size_t bins, double eps, double* d1,
                                        double* d2);

/* ---- full-scan models ---- */

RBBM_API rbbm_status rbbm_scan_loglik_independent(
    const rbbm_map* map, const rbbm_pose* pose, const double* angles,
    const double* z, size_t n_beams, const rbbm_beam_params* params, double eps,
    double* out);
RBBM_API rbbm_status rbbm_scan_loglik_sample_based(
    const rbbm_map* map, const rbbm_pose* pose, const double* angles,
    const double* z, size_t n_beams, const rbbm_beam_params* params,
    const rbbm_region* region, const rbbm_scan_config* cfg, uint64_t seed,
    double eps, double* out);
RBBM_API rbbm_status rbbm_scan_loglik_gaussian(
    const rbbm_map* map, const rbbm_pose* pose, const double* angles,
    const double* z, size_t n_beams, const rbbm_beam_params* params,
    const rbbm_region* region, uint64_t samples_l, double smooth_c,
    uint64_t seed, double* out);
RBBM_API rbbm_status rbbm_beam_marginal_eval(
    const rbbm_map* map, const rbbm_pose* pose, const double* angles,
    size_t n_beams, size_t beam_index, const rbbm_beam_params* params,
    const rbbm_region* region, const rbbm_scan_config* cfg,
    const double* z_grid, size_t n_grid, uint64_t seed, double eps,
    double* out);
RBBM_API rbbm_status rbbm_beam_marginal_gaussian_eval(
    const rbbm_map* map, const rbbm_pose* pose, const double* angles,
    size_t n_beams, size_t beam_index, const rbbm_beam_params* params,
    const rbbm_region* region, uint64_t samples_l, double smooth_c,
    const double* z_grid, size_t n_grid, uint64_t seed, double* out);
/* values_out holds nx*ny likelihoods, row-major by y */
RBBM_API rbbm_status rbbm_probability_map_eval(
    const rbbm_map* map, const double* angles, const double* z, size_t n_beams,
    const rbbm_beam_params* params, const rbbm_region* region,
    const rbbm_scan_config* cfg, const rbbm_grid_spec* grid, uint64_t seed,
    double eps, double* values_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RBBM_CAPI_H */
