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

#ifndef RBBM_BEAM_MODEL_HPP
#define RBBM_BEAM_MODEL_HPP

#include <cstdint>
#include <utility>

namespace rbbm {

/// Default half-width of the max-range tolerance band, in meters.
inline constexpr double kDefaultMaxRangeEps = 0.01;

/// Minimal parameter set of the beam mixture: measurement noise, occlusion
/// probability, and the random/max-range weights, plus the sensor's maximum
/// range. The hit and occlusion weights are derived:
///   pi1 = (1 - p') (1 - pi3 - pi4),  pi2 = p' (1 - pi3 - pi4).
struct BeamParams {
  double sigma_m = 0.15;
  double p_prime = 0.0;
  double pi3 = 0.0;
  double pi4 = 0.0;
  double z_max = 10.0;

  double pi1() const { return (1.0 - p_prime) * (1.0 - pi3 - pi4); }
  double pi2() const { return p_prime * (1.0 - pi3 - pi4); }
};

struct MixtureWeights {
  double pi1 = 1.0, pi2 = 0.0, pi3 = 0.0, pi4 = 0.0;
};

/// Environment description behind the occlusion probability: p is the degree
/// of appearance of unmodeled objects, u the chance a single unmodeled
/// object occludes the map (u = z*/z_max).
struct OcclusionEnvironment {
  double p = 0.0;
  double u = 0.0;
};

/// Parameters of the exponential-decay baseline mixture.
struct ThrunParams {
  double sigma_m = 0.5;
  double z_hit = 1.0;
  double z_short = 0.0;
  double z_max_w = 0.0;
  double z_rand = 0.0;
  double lambda_short = 0.1;
  double z_max = 10.0;
};

/// Throws std::invalid_argument when a parameter invariant is violated.
void validate_params(const BeamParams& p);
void validate_params(const ThrunParams& p);
void validate_env(const OcclusionEnvironment& env);

/// Gaussian hit density N(z; z*, sigma_m).
double p_hit(double z, double z_star, double sigma_m);

/// Occlusion density with quadratic decay, supported on [0, z*]:
///   (1/z*) (1 - p') / [1 - ((z* - z)/z*) p']^2.
double p_occl(double z, double z_star, double p_prime);

/// Uniform density 1/z_max on [0, z_max].
double p_rand(double z, double z_max);

/// Max-range indicator: 1 when |z - z_max| <= eps, else 0. Used as a unit
/// likelihood factor, not a density.
double p_max(double z, double z_max, double eps = kDefaultMaxRangeEps);

/// Full four-component beam mixture. z is clipped to [0, z_max] before
/// evaluation; for z* = 0 the occlusion component has empty support and
/// drops out.
double rbbm_density(double z, double z_star, const BeamParams& params,
                    double eps = kDefaultMaxRangeEps);

/// Numeric oracle for rbbm_density: evaluates the exact marginalization (a
/// scaled-Gaussian integral over the occluder position, no delta
/// approximation) by a Riemann sum with the given step. Smooth where the
/// closed form has its discontinuity at z = z*.
double rbbm_exact_numeric(double z, double z_star, const BeamParams& params,
                          double step, double eps = kDefaultMaxRangeEps);

/// Occlusion probability p' = u p / (1 - (1 - u) p).
double p_prime_from_environment(const OcclusionEnvironment& env);

/// Geometric pmf (1-p) p^n of the number of unmodeled objects.
double geometric_count_pmf(std::uint64_t n, double p);

/// Pmf (1-p') p'^k of the number of occluding objects.
double occluded_count_pmf(std::uint64_t k, const OcclusionEnvironment& env);

/// Partial sum of sum_t (t+k)!/(t! k!) e^t (log-factorial arithmetic) and
/// its closed form 1/(1-e)^(k+1). Rejects e >= 1 (divergent).
std::pair<double, double> verify_sum_identity(std::uint64_t k, double e,
                                              std::uint64_t terms);

/// Exponential-decay baseline mixture. The short component is a truncated
/// exponential on [0, z*], normalized by 1/(1 - exp(-lambda z*)).
double thrun_density(double z, double z_star, const ThrunParams& params,
                     double eps = kDefaultMaxRangeEps);

}  // namespace rbbm

#endif  // RBBM_BEAM_MODEL_HPP
