// Copyright 2026 the rbbm authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rbbm/capi.h"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "rbbm/bayes_net.hpp"
#include "rbbm/beam_model.hpp"
#include "rbbm/dataset.hpp"
#include "rbbm/estimators.hpp"
#include "rbbm/geometry.hpp"
#include "rbbm/io.hpp"
#include "rbbm/metrics.hpp"
#include "rbbm/scan_model.hpp"

struct rbbm_map {
  rbbm::SegmentMap m;
};

struct rbbm_dataset {
  rbbm::Dataset d;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

// Runs fn, translating exceptions to status codes. Invariant violations map
// to RBBM_ERR_INVALID; other failures to `failure_code` (IO paths pass
// RBBM_ERR_IO, numeric paths RBBM_ERR_FAILED).
template <typename Fn>
rbbm_status guarded(rbbm_status failure_code, Fn&& fn) {
  try {
    fn();
    return RBBM_OK;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return RBBM_ERR_INVALID;
  } catch (const std::exception& e) {
    set_error(e.what());
    return failure_code;
  } catch (...) {
    set_error("unknown error");
    return RBBM_ERR_FAILED;
  }
}

rbbm_status invalid(const char* msg) {
  set_error(msg);
  return RBBM_ERR_INVALID;
}

rbbm::BeamParams to_cpp(const rbbm_beam_params& p) {
  rbbm::BeamParams out;
  out.sigma_m = p.sigma_m;
  out.p_prime = p.p_prime;
  out.pi3 = p.pi3;
  out.pi4 = p.pi4;
  out.z_max = p.z_max;
  rbbm::validate_params(out);
  return out;
}

rbbm_beam_params from_cpp(const rbbm::BeamParams& p) {
  return {p.sigma_m, p.p_prime, p.pi3, p.pi4, p.z_max};
}

rbbm::NetParams to_cpp(const rbbm_net_params& p) {
  rbbm::NetParams out;
  out.p = p.p;
  out.sigma_m = p.sigma_m;
  out.pi3 = p.pi3;
  out.pi4 = p.pi4;
  out.z_max = p.z_max;
  rbbm::validate_params(out);
  return out;
}

rbbm::ThrunParams to_cpp(const rbbm_thrun_params& p) {
  rbbm::ThrunParams out;
  out.sigma_m = p.sigma_m;
  out.z_hit = p.z_hit;
  out.z_short = p.z_short;
  out.z_max_w = p.z_max_w;
  out.z_rand = p.z_rand;
  out.lambda_short = p.lambda_short;
  out.z_max = p.z_max;
  rbbm::validate_params(out);
  return out;
}

rbbm_thrun_params from_cpp(const rbbm::ThrunParams& p) {
  return {p.sigma_m, p.z_hit,        p.z_short, p.z_max_w,
          p.z_rand,  p.lambda_short, p.z_max};
}

rbbm::VBPosterior to_cpp(const rbbm_vb_posterior& p) {
  rbbm::VBPosterior out;
  out.alpha = {p.alpha[0], p.alpha[1], p.alpha[2], p.alpha[3]};
  out.beta = p.beta;
  out.mu_bar = p.mu_bar;
  out.W = p.w;
  out.nu = p.nu;
  return out;
}

rbbm_vb_posterior from_cpp(const rbbm::VBPosterior& p) {
  rbbm_vb_posterior out;
  out.alpha[0] = p.alpha[0];
  out.alpha[1] = p.alpha[1];
  out.alpha[2] = p.alpha[2];
  out.alpha[3] = p.alpha[3];
  out.beta = p.beta;
  out.mu_bar = p.mu_bar;
  out.w = p.W;
  out.nu = p.nu;
  return out;
}

rbbm::Pose to_cpp(const rbbm_pose& p) { return {p.x, p.y, p.heading}; }

rbbm::LocalRegion to_cpp(const rbbm_region& r) {
  rbbm::LocalRegion out;
  out.trans_sigma = r.trans_sigma;
  out.rot_sigma = r.rot_sigma;
  out.euclid_weight = r.euclid_weight;
  out.angular_weight = r.angular_weight;
  out.uniform_bounds = r.uniform_bounds != 0;
  return out;
}

rbbm::ScanModelConfig to_cpp(const rbbm_scan_config& c) {
  rbbm::ScanModelConfig out;
  out.L = c.samples_l;
  out.C = c.smooth_c;
  out.mode = c.dynamic_mode ? rbbm::ScanMode::kDynamicFullMixture
                            : rbbm::ScanMode::kStaticHitOnly;
  return out;
}

rbbm::GridSpec to_cpp(const rbbm_grid_spec& g) {
  rbbm::GridSpec out;
  out.x0 = g.x0;
  out.x1 = g.x1;
  out.y0 = g.y0;
  out.y1 = g.y1;
  out.nx = g.nx;
  out.ny = g.ny;
  out.heading = g.heading;
  out.heading_count = g.heading_count;
  out.heading_step = g.heading_step;
  return out;
}

rbbm::Scan make_scan(const double* angles, const double* z, size_t n) {
  rbbm::Scan scan;
  scan.z.assign(z, z + n);
  scan.geometry.angles.assign(angles, angles + n);
  return scan;
}

}  // namespace

extern "C" {

const char* rbbm_version(void) { return "0.1.0"; }

const char* rbbm_last_error(void) { return g_last_error.c_str(); }

/* ---- maps ---- */

rbbm_status rbbm_map_load_file(const char* path, rbbm_map** out) {
  if (!path || !out) return invalid("null argument");
  return guarded(RBBM_ERR_IO, [&] {
    auto* h = new rbbm_map{rbbm::load_map_file(path)};
    *out = h;
  });
}

rbbm_status rbbm_map_from_json(const char* text, rbbm_map** out) {
  if (!text || !out) return invalid("null argument");
  return guarded(RBBM_ERR_IO, [&] {
    auto* h = new rbbm_map{rbbm::load_map_json(text)};
    *out = h;
  });
}

rbbm_status rbbm_map_create(const double* segments, size_t n, double z_max,
                            rbbm_map** out) {
  if (!out || (n > 0 && !segments)) return invalid("null argument");
  return guarded(RBBM_ERR_FAILED, [&] {
    rbbm::SegmentMap m;
    m.z_max = z_max;
    for (size_t i = 0; i < n; ++i)
      m.segments.push_back({segments[4 * i + 0], segments[4 * i + 1],
                            segments[4 * i + 2], segments[4 * i + 3]});
    rbbm::validate_map(m);
    *out = new rbbm_map{std::move(m)};
  });
}

void rbbm_map_free(rbbm_map* map) { delete map; }

rbbm_status rbbm_map_z_max(const rbbm_map* map, double* out) {
  if (!map || !out) return invalid("null argument");
  *out = map->m.z_max;
  return RBBM_OK;
}

rbbm_status rbbm_map_ray_cast(const rbbm_map* map, const rbbm_pose* pose,
                              double angle, double* out) {
  if (!map || !pose || !out) return invalid("null argument");
  return guarded(RBBM_ERR_FAILED,
                 [&] { *out = rbbm::ray_cast(map->m, to_cpp(*pose), angle); });
}

rbbm_status rbbm_map_simulate_scan(const rbbm_map* map, const rbbm_pose* pose,
                                   const double* angles, size_t n_angles,
                                   double* out) {
  if (!map || !pose || !angles || !out) return invalid("null argument");
  return guarded(RBBM_ERR_FAILED, [&] {
    rbbm::ScanGeometry geom;
    geom.angles.assign(angles, angles + n_angles);
    const auto scan = rbbm::simulate_ideal_scan(map->m, to_cpp(*pose), geom);
    std::copy(scan.begin(), scan.end(), out);
  });
}

/* ---- datasets ---- */

rbbm_status rbbm_dataset_load_csv(const char* path, double z_max,
                                  rbbm_dataset** out) {
  if (!path || !out) return invalid("null argument");
  return guarded(RBBM_ERR_IO, [&] {
    *out = new rbbm_dataset{rbbm::load_dataset_csv(path, z_max)};
  });
}

rbbm_status rbbm_dataset_create(const double* z, const double* z_star, size_t n,
                                double z_max, rbbm_dataset** out) {
  if (!z || !z_star || !out) return invalid("null argument");
  if (n == 0) return invalid("empty dataset");
  return guarded(RBBM_ERR_FAILED, [&] {
    rbbm::Dataset d;
    d.z_max = z_max;
    d.z.assign(z, z + n);
    d.z_star.assign(z_star, z_star + n);
    *out = new rbbm_dataset{std::move(d)};
  });
}

rbbm_status rbbm_dataset_save_csv(const rbbm_dataset* ds, const char* path) {
  if (!ds || !path) return invalid("null argument");
  return guarded(RBBM_ERR_IO, [&] { rbbm::save_dataset_csv(ds->d, path); });
}

void rbbm_dataset_free(rbbm_dataset* ds) { delete ds; }

size_t rbbm_dataset_size(const rbbm_dataset* ds) {
  return ds ? ds->d.size() : 0;
}

rbbm_status rbbm_dataset_row(const rbbm_dataset* ds, size_t index, double* z,
                             double* z_star) {
  if (!ds || !z || !z_star) return invalid("null argument");
  if (index >= ds->d.size()) return invalid("dataset row index out of range");
  *z = ds->d.z[index];
  *z_star = ds->d.z_star[index];
  return RBBM_OK;
}

/* ---- beam densities ---- */

rbbm_status rbbm_density_eval(double z, double z_star,
                              const rbbm_beam_params* params, double eps,
                              double* out) {
  if (!params || !out) return invalid("null argument");
  return guarded(RBBM_ERR_FAILED, [&] {
    *out = rbbm::rbbm_density(z, z_star, to_cpp(*params), eps);
  });
}

rbbm_status rbbm_density_exact_numeric(double z, double z_star,
                                       const rbbm_beam_params* params,
                                       double step, double eps, double* out) {
  if (!params || !out) return invalid("null argument");
  return guarded(RBBM_ERR_FAILED, [&] {
    *out = rbbm::rbbm_exact_numeric(z, z_star, to_cpp(*params), step, eps);
  });
}

rbbm_status rbbm_thrun_density_eval(double z, double z_star,
                                    const rbbm_thrun_params* params, double eps,
                                    double* out) {
  if (!params || !out) return invalid("null argument");
  return guarded(RBBM_ERR_FAILED, [&] {
    *out = rbbm::thrun_density(z, z_star, to_cpp(*params), eps);
  });
}

rbbm_status rbbm_p_prime_from_env(double u, double p, double* out) {
  if (!out) return invalid("null argument");
  return guarded(RBBM_ERR_FAILED, [&] {
    rbbm::OcclusionEnvironment env{p, u};
    rbbm::validate_env(env);
    *out = rbbm::p_prime_from_environment(env);
  });
}

rbbm_status rbbm_occl_integral(double z_star, double p_prime, double* out) {
  if (!out) return invalid("null argument");
  if (!(z_star > 0.0)) return invalid("z_star must be positive");
  if (!(p_prime >= 0.0 && p_prime < 1.0))
    return invalid("p_prime must lie in [0, 1)");
  return guarded(RBBM_ERR_FAILED, [&] {
    *out = rbbm::integrate_adaptive(
        [&](double z) { return rbbm::p_occl(z, z_star, p_prime); }, 0.0,
        z_star);
  });
}

rbbm_status rbbm_sum_identity(uint64_t k, double e, uint64_t terms,
                              double* partial, double* closed) {
  if (!partial || !closed) return invalid("null argument");
  return guarded(RBBM_ERR_FAILED, [&] {
    const auto [ps, cf] = rbbm::verify_sum_identity(k, e, terms);
    *partial = ps;
    *closed = cf;
  });
}

/* ---- generative sampling & validation ---- */

rbbm_status rbbm_sample_dataset(const double* z_stars, size_t n_z_stars,
                                const rbbm_net_params* params,
                                uint64_t per_range, uint64_t seed,
                                int keep_causes, rbbm_dataset** out) {
  if (!z_stars || !params || !out) return invalid("null argument");
  if (n_z_stars == 0 || per_range == 0) return invalid("empty sampling plan");
  return guarded(RBBM_ERR_FAILED, [&] {
    const std::vector<double> stars(z_stars, z_stars + n_z_stars);
    *out = new rbbm_dataset{rbbm::sample_dataset(
        stars, to_cpp(*params), per_range, seed, keep_causes != 0)};
  });
}

rbbm_status rbbm_validate_monte_carlo(double z_star,
                                      const rbbm_net_params* params,
                                      uint64_t draws, size_t bins,
                                      uint64_t seed, double* hellinger_out) {
  if (!params || !hellinger_out) return invalid("null argument");
  if (draws == 0 || bins == 0) return invalid("draws and bins must be positive");
  return guarded(RBBM_ERR_FAILED, [&] {
    *hellinger_out = rbbm::validate_against_analytic(z_star, to_cpp(*params),
                                                     draws, bins, seed);
  });
}

/* ---- learning ---- */

rbbm_status rbbm_ml_fit(const rbbm_dataset* ds, const rbbm_beam_params* init,
                        size_t iters, int early_stop,
                        rbbm_beam_params* params_out, double* loglik_out,
                        size_t* n_iters_out) {
  if (!ds || !params_out) return invalid("null argument");
  if (iters == 0) return invalid("iters must be positive");
  return guarded(RBBM_ERR_FAILED, [&] {
    const rbbm::BeamParams start =
        init ? to_cpp(*init) : rbbm::default_ml_init(ds->d.z_max);
    rbbm::MlFitOptions opts;
    opts.iters = iters;
    opts.early_stop = early_stop != 0;
    const auto res = rbbm::ml_em_fit(ds->d, start, opts);
    *params_out = from_cpp(res.params);
    if (loglik_out)
      std::copy(res.loglik.begin(), res.loglik.end(), loglik_out);
    if (n_iters_out) *n_iters_out = res.loglik.size();
  });
}

rbbm_status rbbm_vb_fit(const rbbm_dataset* ds, size_t iters, double alpha0,
                        rbbm_vb_posterior* post_out,
                        rbbm_beam_params* point_out) {
  if (!ds || !post_out) return invalid("null argument");
  if (iters == 0) return invalid("iters must be positive");
  if (!(alpha0 > 0.0)) return invalid("alpha0 must be positive");
  return guarded(RBBM_ERR_FAILED, [&] {
    rbbm::VBPriors priors = rbbm::default_vb_priors(ds->d);
    priors.alpha0 = alpha0;
    const auto init = rbbm::default_vb_init(ds->d);
    const auto res = rbbm::vb_em_fit(ds->d, priors, init, iters);
    *post_out = from_cpp(res.post);
    if (point_out)
      *point_out = from_cpp(rbbm::vb_point_estimates(res.post, ds->d.z_max));
  });
}

rbbm_status rbbm_vb_predictive_eval(double z, double z_star,
                                    const rbbm_vb_posterior* post, double z_max,
                                    double eps, double* out) {
  if (!post || !out) return invalid("null argument");
  return guarded(RBBM_ERR_FAILED, [&] {
    *out = rbbm::vb_predictive(z, z_star, to_cpp(*post), z_max, eps);
  });
}

rbbm_status rbbm_thrun_fit(const rbbm_dataset* ds,
                           const rbbm_thrun_params* init, size_t iters,
                           rbbm_thrun_params* params_out, double* loglik_out,
                           size_t* n_iters_out) {
  if (!ds || !params_out) return invalid("null argument");
  if (iters == 0) return invalid("iters must be positive");
  return guarded(RBBM_ERR_FAILED, [&] {
    const rbbm::ThrunParams start =
        init ? to_cpp(*init) : rbbm::default_thrun_init(ds->d.z_max);
    const auto res = rbbm::thrun_ml_fit(ds->d, start, iters);
    *params_out = from_cpp(res.params);
    if (loglik_out)
      std::copy(res.loglik.begin(), res.loglik.end(), loglik_out);
    if (n_iters_out) *n_iters_out = res.loglik.size();
  });
}

/* ---- histogram distances ---- */

rbbm_status rbbm_fit_distances(const rbbm_dataset* ds, int kind,
                               const rbbm_beam_params* beam,
                               const rbbm_thrun_params* thrun,
                               const rbbm_vb_posterior* vb, size_t bins,
                               double eps, double* d1, double* d2) {
  if (!ds || !d1 || !d2) return invalid("null argument");
  if (bins == 0) return invalid("bins must be positive");
  if (kind < 0 || kind > 2) return invalid("kind must be 0, 1 or 2");
  if (kind == 0 && !beam) return invalid("beam params required for kind 0");
  if (kind == 1 && !thrun) return invalid("baseline params required for kind 1");
  if (kind == 2 && !vb) return invalid("posterior required for kind 2");
  return guarded(RBBM_ERR_FAILED, [&] {
    const rbbm::Dataset& d = ds->d;
    const double z_star =
        std::accumulate(d.z_star.begin(), d.z_star.end(), 0.0) /
        static_cast<double>(d.size());
    auto edges = rbbm::uniform_edges(0.0, d.z_max, bins);
    const auto hist = rbbm::build_histogram(d.z, edges);

    // Continuous part of the model density plus the max-range point mass.
    // eps = -1 disables the indicator so the quadrature never sees it.
    std::function<double(double)> density;
    double atom_mass = 0.0;
    switch (kind) {
      case 0: {
        const auto p = to_cpp(*beam);
        density = [p, z_star](double z) {
          return rbbm::rbbm_density(z, z_star, p, -1.0);
        };
        atom_mass = p.pi4;
        break;
      }
      case 1: {
        const auto p = to_cpp(*thrun);
        density = [p, z_star](double z) {
          return rbbm::thrun_density(z, z_star, p, -1.0);
        };
        atom_mass = p.z_max_w;
        break;
      }
      default: {
        const auto post = to_cpp(*vb);
        const double z_max = d.z_max;
        density = [post, z_star, z_max](double z) {
          return rbbm::vb_predictive(z, z_star, post, z_max, -1.0);
        };
        const double asum =
            post.alpha[0] + post.alpha[1] + post.alpha[2] + post.alpha[3];
        atom_mass = post.alpha[3] / asum;
        break;
      }
    }
    (void)eps;
    const auto model = rbbm::discretize_density(
        density, edges, std::make_pair(d.z_max, atom_mass));
    *d1 = rbbm::kl_divergence(hist, model);
    *d2 = rbbm::hellinger_distance(hist, model);
  });
}

/* ---- full-scan models ---- */

rbbm_status rbbm_scan_loglik_independent(const rbbm_map* map,
                                         const rbbm_pose* pose,
                                         const double* angles, const double* z,
                                         size_t n_beams,
                                         const rbbm_beam_params* params,
                                         double eps, double* out) {
  if (!map || !pose || !angles || !z || !params || !out)
    return invalid("null argument");
  if (n_beams == 0) return invalid("scan has no beams");
  return guarded(RBBM_ERR_FAILED, [&] {
    *out = rbbm::scan_loglik_independent(make_scan(angles, z, n_beams),
                                         to_cpp(*pose), map->m, to_cpp(*params),
                                         eps);
  });
}

rbbm_status rbbm_scan_loglik_sample_based(
    const rbbm_map* map, const rbbm_pose* pose, const double* angles,
    const double* z, size_t n_beams, const rbbm_beam_params* params,
    const rbbm_region* region, const rbbm_scan_config* cfg, uint64_t seed,
    double eps, double* out) {
  if (!map || !pose || !angles || !z || !params || !region || !cfg || !out)
    return invalid("null argument");
  if (n_beams == 0) return invalid("scan has no beams");
  return guarded(RBBM_ERR_FAILED, [&] {
    *out = rbbm::scan_loglik_sample_based(
        make_scan(angles, z, n_beams), to_cpp(*pose), map->m, to_cpp(*params),
        to_cpp(*region), to_cpp(*cfg), seed, eps);
  });
}

rbbm_status rbbm_scan_loglik_gaussian(const rbbm_map* map,
                                      const rbbm_pose* pose,
                                      const double* angles, const double* z,
                                      size_t n_beams,
                                      const rbbm_beam_params* params,
                                      const rbbm_region* region,
                                      uint64_t samples_l, double smooth_c,
                                      uint64_t seed, double* out) {
  if (!map || !pose || !angles || !z || !params || !region || !out)
    return invalid("null argument");
  if (n_beams == 0) return invalid("scan has no beams");
  return guarded(RBBM_ERR_FAILED, [&] {
    *out = rbbm::scan_loglik_gaussian_baseline(
        make_scan(angles, z, n_beams), to_cpp(*pose), map->m, to_cpp(*params),
        to_cpp(*region), samples_l, smooth_c, seed);
  });
}

rbbm_status rbbm_beam_marginal_eval(const rbbm_map* map, const rbbm_pose* pose,
                                    const double* angles, size_t n_beams,
                                    size_t beam_index,
                                    const rbbm_beam_params* params,
                                    const rbbm_region* region,
                                    const rbbm_scan_config* cfg,
                                    const double* z_grid, size_t n_grid,
                                    uint64_t seed, double eps, double* out) {
  if (!map || !pose || !angles || !params || !region || !cfg || !z_grid ||
      !out)
    return invalid("null argument");
  if (beam_index >= n_beams) return invalid("beam index out of range");
  return guarded(RBBM_ERR_FAILED, [&] {
    rbbm::ScanGeometry geom;
    geom.angles.assign(angles, angles + n_beams);
    const std::vector<double> grid(z_grid, z_grid + n_grid);
    const auto vals = rbbm::beam_marginal(geom, beam_index, to_cpp(*pose),
                                          map->m, to_cpp(*params),
                                          to_cpp(*region), to_cpp(*cfg), grid,
                                          seed, eps);
    std::copy(vals.begin(), vals.end(), out);
  });
}

rbbm_status rbbm_beam_marginal_gaussian_eval(
    const rbbm_map* map, const rbbm_pose* pose, const double* angles,
    size_t n_beams, size_t beam_index, const rbbm_beam_params* params,
    const rbbm_region* region, uint64_t samples_l, double smooth_c,
    const double* z_grid, size_t n_grid, uint64_t seed, double* out) {
  if (!map || !pose || !angles || !params || !region || !z_grid || !out)
    return invalid("null argument");
  if (beam_index >= n_beams) return invalid("beam index out of range");
  return guarded(RBBM_ERR_FAILED, [&] {
    rbbm::ScanGeometry geom;
    geom.angles.assign(angles, angles + n_beams);
    const std::vector<double> grid(z_grid, z_grid + n_grid);
    const auto vals = rbbm::beam_marginal_gaussian(
        geom, beam_index, to_cpp(*pose), map->m, to_cpp(*params),
        to_cpp(*region), samples_l, smooth_c, grid, seed);
    std::copy(vals.begin(), vals.end(), out);
  });
}

rbbm_status rbbm_probability_map_eval(const rbbm_map* map, const double* angles,
                                      const double* z, size_t n_beams,
                                      const rbbm_beam_params* params,
                                      const rbbm_region* region,
                                      const rbbm_scan_config* cfg,
                                      const rbbm_grid_spec* grid, uint64_t seed,
                                      double eps, double* values_out) {
  if (!map || !angles || !z || !params || !region || !cfg || !grid ||
      !values_out)
    return invalid("null argument");
  if (n_beams == 0) return invalid("scan has no beams");
  if (grid->nx == 0 || grid->ny == 0) return invalid("empty pose grid");
  return guarded(RBBM_ERR_FAILED, [&] {
    const auto pm = rbbm::probability_map(make_scan(angles, z, n_beams),
                                          map->m, to_cpp(*params),
                                          to_cpp(*region), to_cpp(*cfg),
                                          to_cpp(*grid), seed, eps);
    std::copy(pm.values.begin(), pm.values.end(), values_out);
  });
}

} /* extern "C" */
