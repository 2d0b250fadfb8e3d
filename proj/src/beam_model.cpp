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

#include "rbbm/beam_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rbbm {

namespace {
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * M_PI);
}

void validate_params(const BeamParams& p) {
  if (!(p.sigma_m > 0.0)) throw std::invalid_argument("sigma_m must be > 0");
  if (!(p.z_max > 0.0)) throw std::invalid_argument("z_max must be > 0");
  if (p.p_prime < 0.0 || p.p_prime > 1.0)
    throw std::invalid_argument("p_prime must be in [0, 1]");
  if (p.pi3 < 0.0 || p.pi4 < 0.0 || p.pi3 + p.pi4 > 1.0)
    throw std::invalid_argument("pi3, pi4 must be >= 0 with pi3 + pi4 <= 1");
}

void validate_params(const ThrunParams& p) {
  if (!(p.sigma_m > 0.0)) throw std::invalid_argument("sigma_m must be > 0");
  if (!(p.z_max > 0.0)) throw std::invalid_argument("z_max must be > 0");
  if (!(p.lambda_short > 0.0))
    throw std::invalid_argument("lambda_short must be > 0");
  const double w[] = {p.z_hit, p.z_short, p.z_max_w, p.z_rand};
  double sum = 0.0;
  for (double x : w) {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("weights must be in [0, 1]");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("weights must sum to 1");
}

void validate_env(const OcclusionEnvironment& env) {
  if (env.p < 0.0 || env.p >= 1.0)
    throw std::invalid_argument("p must be in [0, 1)");
  if (env.u < 0.0 || env.u > 1.0)
    throw std::invalid_argument("u must be in [0, 1]");
}

double p_hit(double z, double z_star, double sigma_m) {
  const double d = (z - z_star) / sigma_m;
  return kInvSqrt2Pi / sigma_m * std::exp(-0.5 * d * d);
}

double p_occl(double z, double z_star, double p_prime) {
  if (z_star <= 0.0 || z < 0.0 || z > z_star) return 0.0;
  const double denom = 1.0 - ((z_star - z) / z_star) * p_prime;
  return (1.0 - p_prime) / (z_star * denom * denom);
}

double p_rand(double z, double z_max) {
  return (z >= 0.0 && z <= z_max) ? 1.0 / z_max : 0.0;
}

double p_max(double z, double z_max, double eps) {
  return std::abs(z - z_max) <= eps ? 1.0 : 0.0;
}

double rbbm_density(double z, double z_star, const BeamParams& params,
                    double eps) {
  z = std::clamp(z, 0.0, params.z_max);
  double v = params.pi1() * p_hit(z, z_star, params.sigma_m);
  if (z_star > 0.0) v += params.pi2() * p_occl(z, z_star, params.p_prime);
  v += params.pi3 * p_rand(z, params.z_max);
  v += params.pi4 * p_max(z, params.z_max, eps);
  return v;
}

double rbbm_exact_numeric(double z, double z_star, const BeamParams& params,
                          double step, double eps) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be > 0");
  z = std::clamp(z, 0.0, params.z_max);
  const double pp = params.p_prime;

  // Exact hit + occlusion marginal: (1-p') N(z; z*, s) plus the integral
  // over the occluder position of a scaled Gaussian (midpoint rule).
  double hit_occl = (1.0 - pp) * p_hit(z, z_star, params.sigma_m);
  if (z_star > 0.0 && pp > 0.0) {
    double integral = 0.0;
    const auto n = static_cast<std::size_t>(std::ceil(z_star / step));
    const double h = z_star / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double zo = (static_cast<double>(i) + 0.5) * h;
      const double denom = 1.0 - ((z_star - zo) / z_star) * pp;
      const double scale = (1.0 - pp) / (z_star * denom * denom);
      integral += p_hit(z, zo, params.sigma_m) * scale * h;
    }
    hit_occl += pp * integral;
  }

  double v = (1.0 - params.pi3 - params.pi4) * hit_occl;
  v += params.pi3 * p_rand(z, params.z_max);
  v += params.pi4 * p_max(z, params.z_max, eps);
  return v;
}

double p_prime_from_environment(const OcclusionEnvironment& env) {
  validate_env(env);
  return env.u * env.p / (1.0 - (1.0 - env.u) * env.p);
}

double geometric_count_pmf(std::uint64_t n, double p) {
  if (p < 0.0 || p >= 1.0) throw std::invalid_argument("p must be in [0, 1)");
  if (p == 0.0) return n == 0 ? 1.0 : 0.0;
  return (1.0 - p) * std::pow(p, static_cast<double>(n));
}

double occluded_count_pmf(std::uint64_t k, const OcclusionEnvironment& env) {
  const double pp = p_prime_from_environment(env);
  if (pp == 0.0) return k == 0 ? 1.0 : 0.0;
  return (1.0 - pp) * std::pow(pp, static_cast<double>(k));
}

std::pair<double, double> verify_sum_identity(std::uint64_t k, double e,
                                              std::uint64_t terms) {
  if (e < 0.0 || e >= 1.0)
    throw std::invalid_argument("e must be in [0, 1): series diverges");
  if (terms < 1) throw std::invalid_argument("terms must be >= 1");

  const double log_kfact = std::lgamma(static_cast<double>(k) + 1.0);
  const double log_e = e > 0.0 ? std::log(e) : 0.0;
  double partial = 0.0;
  for (std::uint64_t t = 0; t < terms; ++t) {
    if (e == 0.0 && t > 0) break;
    const double td = static_cast<double>(t);
    const double log_term = std::lgamma(td + static_cast<double>(k) + 1.0) -
                            std::lgamma(td + 1.0) - log_kfact + td * log_e;
    partial += std::exp(log_term);
  }
  const double closed =
      std::pow(1.0 - e, -(static_cast<double>(k) + 1.0));
  return {partial, closed};
}

double thrun_density(double z, double z_star, const ThrunParams& params,
                     double eps) {
  z = std::clamp(z, 0.0, params.z_max);
  const double lambda = std::max(params.lambda_short, 1e-8);
  double v = params.z_hit * p_hit(z, z_star, params.sigma_m);
  if (z_star > 0.0 && z >= 0.0 && z <= z_star) {
    const double eta = 1.0 / (1.0 - std::exp(-lambda * z_star));
    v += params.z_short * eta * lambda * std::exp(-lambda * z);
  }
  v += params.z_max_w * p_max(z, params.z_max, eps);
  v += params.z_rand * p_rand(z, params.z_max);
  return v;
}

}  // namespace rbbm
