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

#ifndef RBBM_BAYES_NET_HPP
#define RBBM_BAYES_NET_HPP

#include <cstdint>
#include <vector>

#include "rbbm/beam_model.hpp"
#include "rbbm/dataset.hpp"

namespace rbbm {

/// Generative-network parameters: unlike BeamParams, the occlusion behavior
/// is driven by the raw appearance degree p (the resulting p' follows from
/// the geometry via u = z*/z_max).
struct NetParams {
  double p = 0.0;
  double sigma_m = 0.15;
  double pi3 = 0.0;
  double pi4 = 0.0;
  double z_max = 10.0;
};

void validate_params(const NetParams& p);

enum class Cause : std::uint8_t { kHit, kOccluded, kRandom, kMaxRange };

/// One ancestral-sampling pass through the network, with the intermediate
/// variables kept for diagnostics.
struct SampleTrace {
  Cause cause = Cause::kHit;
  std::uint64_t n = 0;        // unmodeled objects
  std::uint64_t k = 0;        // of which occluding
  double z_occl_star = -1.0;  // closest occluder; valid iff cause == kOccluded
  double z = 0.0;
};

/// Draw one beam by ancestral sampling: the random/max causes fire first
/// with probabilities pi3, pi4; otherwise the object network runs (n
/// geometric, positions uniform on [0, z_max], occluders those in front of
/// z*) and the measurement is Gaussian around z* or the closest occluder.
/// The result is clipped to [0, z_max].
SampleTrace sample_beam(double z_star, const NetParams& params,
                        std::uint64_t rng_seed);

/// per_range independent draws for each expected range. Each draw uses a
/// substream derived from the seed and its index, so the output is
/// deterministic and independent of any parallel decomposition.
Dataset sample_dataset(const std::vector<double>& z_stars,
                       const NetParams& params, std::uint64_t per_range,
                       std::uint64_t rng_seed, bool keep_causes = false);

/// Hellinger distance between the normalized histogram of `draws` network
/// samples and the discretized closed-form mixture on the same bins.
double validate_against_analytic(double z_star, const NetParams& params,
                                 std::uint64_t draws, std::size_t bins,
                                 std::uint64_t rng_seed);

/// Closed-form parameter set implied by the network at a given z*.
BeamParams beam_params_from_net(const NetParams& params, double z_star);

}  // namespace rbbm

#endif  // RBBM_BAYES_NET_HPP
