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

#include "rbbm/scan_model.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rbbm/rng.hpp"

namespace rbbm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

void check_scan(const Scan& scan) {
  if (scan.z.size() != scan.geometry.angles.size())
    throw std::invalid_argument("scan range/angle count mismatch");
  if (scan.z.empty()) throw std::invalid_argument("empty scan");
}

/// Per-beam log density of the chosen full-scan component model.
double beam_log_density(double z, double z_star, const BeamParams& params,
                        double sigma_infl, ScanMode mode, double eps) {
  z = std::clamp(z, 0.0, params.z_max);  // same support rule as rbbm_density
  if (mode == ScanMode::kStaticHitOnly)
    return safe_log(p_hit(z, z_star, sigma_infl));
  BeamParams inflated = params;
  inflated.sigma_m = sigma_infl;
  return safe_log(rbbm_density(z, z_star, inflated, eps));
}

double log_mean_exp(const std::vector<double>& terms) {
  double m = kNegInf;
  for (double t : terms) m = std::max(m, t);
  if (m == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - m);
  return m + std::log(sum / static_cast<double>(terms.size()));
}

}  // namespace

double region_diameter(const LocalRegion& region) {
  return region.euclid_weight * 2.0 * region.trans_sigma +
         region.angular_weight * 2.0 * region.rot_sigma;
}

double inflated_sigma(double sigma_m, const LocalRegion& region, double C) {
  return sigma_m * (1.0 + C * std::sqrt(region_diameter(region)));
}

std::vector<Pose> sample_region_poses(const Pose& pose,
                                      const LocalRegion& region,
                                      std::uint64_t L, std::uint64_t rng_seed) {
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  std::vector<Pose> poses;
  poses.reserve(L);
  Rng rng(rng_seed);
  for (std::uint64_t l = 0; l < L; ++l) {
    Pose p = pose;
    if (region.uniform_bounds) {
      p.x += rng.uniform(-region.trans_sigma, region.trans_sigma);
      p.y += rng.uniform(-region.trans_sigma, region.trans_sigma);
      p.heading = normalize_angle(
          p.heading + rng.uniform(-region.rot_sigma, region.rot_sigma));
    } else {
      p.x += rng.normal(0.0, region.trans_sigma);
      p.y += rng.normal(0.0, region.trans_sigma);
      p.heading = normalize_angle(p.heading + rng.normal(0.0, region.rot_sigma));
    }
    poses.push_back(p);
  }
  return poses;
}

double scan_loglik_independent(const Scan& scan, const Pose& pose,
                               const SegmentMap& map, const BeamParams& params,
                               double eps) {
  check_scan(scan);
  double ll = 0.0;
  for (std::size_t b = 0; b < scan.z.size(); ++b) {
    const double zs = ray_cast(map, pose, pose.heading + scan.geometry.angles[b]);
    const double d = rbbm_density(scan.z[b], zs, params, eps);
    if (d <= 0.0) return kNegInf;
    ll += std::log(d);
  }
  return ll;
}

double scan_loglik_sample_based(const Scan& scan, const Pose& pose,
                                const SegmentMap& map, const BeamParams& params,
                                const LocalRegion& region,
                                const ScanModelConfig& cfg,
                                std::uint64_t rng_seed, double eps) {
  check_scan(scan);
  const double sigma_infl = inflated_sigma(params.sigma_m, region, cfg.C);
  const auto poses = sample_region_poses(pose, region, cfg.L, rng_seed);

  std::vector<double> per_pose;
  per_pose.reserve(poses.size());
  for (const Pose& p : poses) {
    double ll = 0.0;
    for (std::size_t b = 0; b < scan.z.size(); ++b) {
      const double zs = ray_cast(map, p, p.heading + scan.geometry.angles[b]);
      ll += beam_log_density(scan.z[b], zs, params, sigma_infl, cfg.mode, eps);
      if (ll == kNegInf) break;
    }
    per_pose.push_back(ll);
  }
  return log_mean_exp(per_pose);
}

namespace {

/// Mean and covariance of L simulated noiseless scans at region poses, with
/// the inflated measurement variance on the diagonal.
void fit_scan_gaussian(const Scan& scan, const Pose& pose,
                       const SegmentMap& map, const BeamParams& params,
                       const LocalRegion& region, std::uint64_t L, double C,
                       std::uint64_t rng_seed, Eigen::VectorXd& mean,
                       Eigen::MatrixXd& cov) {
  const auto B = static_cast<Eigen::Index>(scan.z.size());
  const auto poses = sample_region_poses(pose, region, L, rng_seed);

  Eigen::MatrixXd sims(static_cast<Eigen::Index>(L), B);
  for (Eigen::Index l = 0; l < sims.rows(); ++l) {
    const Pose& p = poses[static_cast<std::size_t>(l)];
    for (Eigen::Index b = 0; b < B; ++b)
      sims(l, b) = ray_cast(
          map, p, p.heading + scan.geometry.angles[static_cast<std::size_t>(b)]);
  }

  mean = sims.colwise().mean();
  Eigen::MatrixXd centered = sims.rowwise() - mean.transpose();
  cov = centered.transpose() * centered / static_cast<double>(L);

  const double s = inflated_sigma(params.sigma_m, region, C);
  cov.diagonal().array() += s * s;
}

}  // namespace

double scan_loglik_gaussian_baseline(const Scan& scan, const Pose& pose,
                                     const SegmentMap& map,
                                     const BeamParams& params,
                                     const LocalRegion& region, std::uint64_t L,
                                     double C, std::uint64_t rng_seed) {
  check_scan(scan);
  if (L < 2) throw std::invalid_argument("gaussian baseline needs L >= 2");

  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  fit_scan_gaussian(scan, pose, map, params, region, L, C, rng_seed, mean, cov);
  cov.diagonal().array() += 1e-9;  // jitter before factorization

  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("scan covariance factorization failed");

  const auto B = static_cast<Eigen::Index>(scan.z.size());
  Eigen::VectorXd zv(B);
  for (Eigen::Index b = 0; b < B; ++b) zv(b) = scan.z[static_cast<std::size_t>(b)];

  const Eigen::VectorXd d = zv - mean;
  const Eigen::VectorXd w = llt.matrixL().solve(d);
  double log_det = 0.0;
  for (Eigen::Index b = 0; b < B; ++b)
    log_det += 2.0 * std::log(llt.matrixL()(b, b));
  return -0.5 * (static_cast<double>(B) * std::log(2.0 * M_PI) + log_det +
                 w.squaredNorm());
}

std::vector<double> beam_marginal(const ScanGeometry& geom,
                                  std::size_t beam_index, const Pose& pose,
                                  const SegmentMap& map,
                                  const BeamParams& params,
                                  const LocalRegion& region,
                                  const ScanModelConfig& cfg,
                                  const std::vector<double>& grid,
                                  std::uint64_t rng_seed, double eps) {
  if (grid.empty()) throw std::invalid_argument("empty z grid");
  if (beam_index >= geom.angles.size())
    throw std::invalid_argument("beam index out of range");
  const double sigma_infl = inflated_sigma(params.sigma_m, region, cfg.C);
  const auto poses = sample_region_poses(pose, region, cfg.L, rng_seed);

  std::vector<double> z_stars;
  z_stars.reserve(poses.size());
  for (const Pose& p : poses)
    z_stars.push_back(ray_cast(map, p, p.heading + geom.angles[beam_index]));

  std::vector<double> out(grid.size(), 0.0);
  const double inv_l = 1.0 / static_cast<double>(poses.size());
  for (double zs : z_stars) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double d;
      if (cfg.mode == ScanMode::kStaticHitOnly) {
        d = p_hit(grid[i], zs, sigma_infl);
      } else {
        BeamParams inflated = params;
        inflated.sigma_m = sigma_infl;
        d = rbbm_density(grid[i], zs, inflated, eps);
      }
      out[i] += inv_l * d;
    }
  }
  return out;
}

std::vector<double> beam_marginal_gaussian(const ScanGeometry& geom,
                                           std::size_t beam_index,
                                           const Pose& pose,
                                           const SegmentMap& map,
                                           const BeamParams& params,
                                           const LocalRegion& region,
                                           std::uint64_t L, double C,
                                           const std::vector<double>& grid,
                                           std::uint64_t rng_seed) {
  if (grid.empty()) throw std::invalid_argument("empty z grid");
  if (beam_index >= geom.angles.size())
    throw std::invalid_argument("beam index out of range");

  Scan dummy;
  dummy.geometry = geom;
  dummy.z.assign(geom.angles.size(), 0.0);

  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  fit_scan_gaussian(dummy, pose, map, params, region, L, C, rng_seed, mean,
                    cov);

  const auto b = static_cast<Eigen::Index>(beam_index);
  const double mu = mean(b);
  const double var = cov(b, b);
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = grid[i] - mu;
    out[i] = std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * M_PI * var);
  }
  return out;
}

ProbabilityMap probability_map(const Scan& scan, const SegmentMap& map,
                               const BeamParams& params,
                               const LocalRegion& region,
                               const ScanModelConfig& cfg,
                               const GridSpec& grid_spec,
                               std::uint64_t rng_seed, double eps) {
  check_scan(scan);
  if (grid_spec.nx == 0 || grid_spec.ny == 0)
    throw std::invalid_argument("grid must have at least one cell");

  ProbabilityMap pm;
  pm.spec = grid_spec;
  pm.values.resize(grid_spec.nx * grid_spec.ny, 0.0);

  const std::size_t hc = std::max<std::size_t>(grid_spec.heading_count, 1);
  for (std::size_t iy = 0; iy < grid_spec.ny; ++iy) {
    for (std::size_t ix = 0; ix < grid_spec.nx; ++ix) {
      const std::size_t cell = iy * grid_spec.nx + ix;
      Pose p;
      p.x = grid_spec.nx == 1
                ? grid_spec.x0
                : grid_spec.x0 + (grid_spec.x1 - grid_spec.x0) *
                                     static_cast<double>(ix) /
                                     static_cast<double>(grid_spec.nx - 1);
      p.y = grid_spec.ny == 1
                ? grid_spec.y0
                : grid_spec.y0 + (grid_spec.y1 - grid_spec.y0) *
                                     static_cast<double>(iy) /
                                     static_cast<double>(grid_spec.ny - 1);

      double lik = 0.0;
      for (std::size_t ih = 0; ih < hc; ++ih) {
        p.heading = normalize_angle(
            grid_spec.heading +
            (static_cast<double>(ih) - 0.5 * static_cast<double>(hc - 1)) *
                grid_spec.heading_step);
        const double ll = scan_loglik_sample_based(
            scan, p, map, params, region, cfg,
            substream_seed(rng_seed, cell * hc + ih), eps);
        lik += std::isfinite(ll) ? std::exp(ll) : 0.0;
      }
      pm.values[cell] = lik / static_cast<double>(hc);
    }
  }
  return pm;
}

}  // namespace rbbm
