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

#ifndef RBBM_SCAN_MODEL_HPP
#define RBBM_SCAN_MODEL_HPP

#include <cstdint>
#include <vector>

#include "rbbm/beam_model.hpp"
#include "rbbm/geometry.hpp"

namespace rbbm {

/// Pose-uncertainty region around an estimate. The diameter entering the
/// noise inflation is a weighted sum of twice the translational and
/// rotational scales. Sampling is Gaussian by default, with a hard-bound
/// uniform option.
struct LocalRegion {
  double trans_sigma = 0.0;    // meters, applied to x and y
  double rot_sigma = 0.0;      // radians
  double euclid_weight = 1.0;
  double angular_weight = 1.0;
  bool uniform_bounds = false;
};

enum class ScanMode : std::uint8_t { kStaticHitOnly, kDynamicFullMixture };

struct ScanModelConfig {
  std::uint64_t L = 150;  // simulated scans per evaluation
  double C = 20.0;        // smoothing constant
  ScanMode mode = ScanMode::kStaticHitOnly;
};

struct Scan {
  std::vector<double> z;
  ScanGeometry geometry;
};

/// Pose grid for probability maps. Heading is fixed by default; setting
/// heading_count > 1 averages the likelihood over a small heading fan of
/// spacing heading_step centered on `heading`.
struct GridSpec {
  double x0 = 0.0, x1 = 1.0;
  double y0 = 0.0, y1 = 1.0;
  std::size_t nx = 10, ny = 10;
  double heading = 0.0;
  std::size_t heading_count = 1;
  double heading_step = 0.0;
};

struct ProbabilityMap {
  GridSpec spec;
  std::vector<double> values;  // row-major, ny rows of nx likelihoods
};

/// Region diameter d_U entering the sigma inflation.
double region_diameter(const LocalRegion& region);

/// sigma_m * (1 + C sqrt(d_U)).
double inflated_sigma(double sigma_m, const LocalRegion& region, double C);

/// L perturbed poses drawn from the region; deterministic given the seed.
std::vector<Pose> sample_region_poses(const Pose& pose,
                                      const LocalRegion& region,
                                      std::uint64_t L, std::uint64_t rng_seed);

/// Independent-beam log-likelihood: sum of per-beam mixture log densities.
/// Returns -inf when any beam has zero likelihood.
double scan_loglik_independent(const Scan& scan, const Pose& pose,
                               const SegmentMap& map, const BeamParams& params,
                               double eps = kDefaultMaxRangeEps);

/// Sample-based full-scan log-likelihood: log-mean over L pose hypotheses
/// of the per-pose beam products, evaluated in the log domain. Static mode
/// uses the inflated-sigma hit density only; dynamic mode the full mixture
/// with the inflation applied to the hit component.
double scan_loglik_sample_based(const Scan& scan, const Pose& pose,
                                const SegmentMap& map, const BeamParams& params,
                                const LocalRegion& region,
                                const ScanModelConfig& cfg,
                                std::uint64_t rng_seed,
                                double eps = kDefaultMaxRangeEps);

/// Jointly-Gaussian baseline: fits mean and full covariance to L simulated
/// noiseless scans, adds the inflated measurement variance to the diagonal
/// and evaluates the scan. Throws if the covariance cannot be factorized
/// after jitter.
double scan_loglik_gaussian_baseline(const Scan& scan, const Pose& pose,
                                     const SegmentMap& map,
                                     const BeamParams& params,
                                     const LocalRegion& region, std::uint64_t L,
                                     double C, std::uint64_t rng_seed);

/// Per-beam marginal of the sample-based model on a z grid.
std::vector<double> beam_marginal(const ScanGeometry& geom,
                                  std::size_t beam_index, const Pose& pose,
                                  const SegmentMap& map,
                                  const BeamParams& params,
                                  const LocalRegion& region,
                                  const ScanModelConfig& cfg,
                                  const std::vector<double>& grid,
                                  std::uint64_t rng_seed,
                                  double eps = kDefaultMaxRangeEps);

/// Per-beam marginal of the Gaussian baseline (univariate Gaussian with the
/// fitted mean and variance of that beam).
std::vector<double> beam_marginal_gaussian(const ScanGeometry& geom,
                                           std::size_t beam_index,
                                           const Pose& pose,
                                           const SegmentMap& map,
                                           const BeamParams& params,
                                           const LocalRegion& region,
                                           std::uint64_t L, double C,
                                           const std::vector<double>& grid,
                                           std::uint64_t rng_seed);

/// Sample-based scan likelihood over a pose grid; per-cell seeds derive
/// from the master seed and cell index.
ProbabilityMap probability_map(const Scan& scan, const SegmentMap& map,
                               const BeamParams& params,
                               const LocalRegion& region,
                               const ScanModelConfig& cfg,
                               const GridSpec& grid_spec,
                               std::uint64_t rng_seed,
                               double eps = kDefaultMaxRangeEps);

}  // namespace rbbm

#endif  // RBBM_SCAN_MODEL_HPP
