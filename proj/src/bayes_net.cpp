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

#include "rbbm/bayes_net.hpp"

#include <algorithm>
#include <stdexcept>

#include "rbbm/metrics.hpp"
#include "rbbm/rng.hpp"

namespace rbbm {

void validate_params(const NetParams& p) {
  if (p.p < 0.0 || p.p >= 1.0) throw std::invalid_argument("p must be in [0, 1)");
  if (!(p.sigma_m > 0.0)) throw std::invalid_argument("sigma_m must be > 0");
  if (!(p.z_max > 0.0)) throw std::invalid_argument("z_max must be > 0");
  if (p.pi3 < 0.0 || p.pi4 < 0.0 || p.pi3 + p.pi4 > 1.0)
    throw std::invalid_argument("pi3, pi4 must be >= 0 with pi3 + pi4 <= 1");
}

BeamParams beam_params_from_net(const NetParams& params, double z_star) {
  OcclusionEnvironment env{params.p, z_star / params.z_max};
  BeamParams bp;
  bp.sigma_m = params.sigma_m;
  bp.p_prime = p_prime_from_environment(env);
  bp.pi3 = params.pi3;
  bp.pi4 = params.pi4;
  bp.z_max = params.z_max;
  return bp;
}

namespace {

SampleTrace sample_beam_impl(double z_star, const NetParams& params, Rng& rng) {
  SampleTrace trace;

  const double cause_u = rng.uniform();
  if (cause_u < params.pi3) {
    trace.cause = Cause::kRandom;
    trace.z = rng.uniform(0.0, params.z_max);
    return trace;
  }
  if (cause_u < params.pi3 + params.pi4) {
    trace.cause = Cause::kMaxRange;
    trace.z = params.z_max;
    return trace;
  }

  trace.n = rng.geometric(params.p);
  double closest = params.z_max;
  for (std::uint64_t j = 0; j < trace.n; ++j) {
    const double x = rng.uniform(0.0, params.z_max);
    if (x < z_star) {
      ++trace.k;
      closest = std::min(closest, x);
    }
  }
  if (trace.k == 0) {
    trace.cause = Cause::kHit;
    trace.z = rng.normal(z_star, params.sigma_m);
  } else {
    trace.cause = Cause::kOccluded;
    trace.z_occl_star = closest;
    trace.z = rng.normal(closest, params.sigma_m);
  }
  trace.z = std::clamp(trace.z, 0.0, params.z_max);
  return trace;
}

}  // namespace

SampleTrace sample_beam(double z_star, const NetParams& params,
                        std::uint64_t rng_seed) {
  validate_params(params);
  if (!(z_star > 0.0) || z_star > params.z_max)
    throw std::invalid_argument("z_star must be in (0, z_max]");
  Rng rng(rng_seed);
  return sample_beam_impl(z_star, params, rng);
}

Dataset sample_dataset(const std::vector<double>& z_stars,
                       const NetParams& params, std::uint64_t per_range,
                       std::uint64_t rng_seed, bool keep_causes) {
  validate_params(params);
  if (per_range < 1) throw std::invalid_argument("per_range must be >= 1");

  Dataset ds;
  ds.z_max = params.z_max;
  ds.z.reserve(z_stars.size() * per_range);
  ds.z_star.reserve(z_stars.size() * per_range);

  std::uint64_t index = 0;
  for (double zs : z_stars) {
    if (!(zs > 0.0) || zs > params.z_max)
      throw std::invalid_argument("z_star must be in (0, z_max]");
    for (std::uint64_t i = 0; i < per_range; ++i, ++index) {
      Rng rng(substream_seed(rng_seed, index));
      const SampleTrace t = sample_beam_impl(zs, params, rng);
      ds.z.push_back(t.z);
      ds.z_star.push_back(zs);
      if (keep_causes) ds.causes.push_back(static_cast<std::uint8_t>(t.cause));
    }
  }
  return ds;
}

double validate_against_analytic(double z_star, const NetParams& params,
                                 std::uint64_t draws, std::size_t bins,
                                 std::uint64_t rng_seed) {
  if (draws < 100) throw std::invalid_argument("draws must be >= 100");
  if (bins < 10) throw std::invalid_argument("bins must be >= 10");

  const Dataset ds = sample_dataset({z_star}, params, draws, rng_seed);
  auto edges = uniform_edges(0.0, params.z_max, bins);
  const auto hist = build_histogram(ds.z, edges);

  const BeamParams bp = beam_params_from_net(params, z_star);
  const auto analytic = discretize_density(
      [&](double z) {
        return bp.pi1() * p_hit(z, z_star, bp.sigma_m) +
               bp.pi2() * p_occl(z, z_star, bp.p_prime) +
               bp.pi3 * p_rand(z, bp.z_max);
      },
      edges, std::make_pair(bp.z_max, bp.pi4));
  return hellinger_distance(hist, analytic);
}

}  // namespace rbbm
