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

#include <array>
#include <cmath>

#include <doctest.h>

#include "rbbm/bayes_net.hpp"
#include "rbbm/beam_model.hpp"
#include "rbbm/rng.hpp"

using rbbm::Cause;
using rbbm::NetParams;

namespace {
// Fig. 9 generative configuration
const NetParams kFig9{0.8, 0.15, 0.2, 0.02, 10.0};
}  // namespace

TEST_CASE("p = 0 network always hits") {
  const NetParams params{0.0, 0.15, 0.0, 0.0, 10.0};
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto t = rbbm::sample_beam(5.0, params, rbbm::substream_seed(1, i));
    CHECK(t.cause == Cause::kHit);
    CHECK(t.k == 0);
    sum += t.z;
  }
  CHECK(sum / n == doctest::Approx(5.0).epsilon(3 * 0.15 / std::sqrt(double(n)) / 5.0));
}

TEST_CASE("sampling is deterministic in the seed") {
  const auto a = rbbm::sample_beam(5.0, kFig9, 1234);
  const auto b = rbbm::sample_beam(5.0, kFig9, 1234);
  CHECK(a.z == b.z);
  CHECK(a.cause == b.cause);
  CHECK(a.n == b.n);
  CHECK(a.k == b.k);

  const auto d1 = rbbm::sample_dataset({5.0, 7.0}, kFig9, 500, 42, true);
  const auto d2 = rbbm::sample_dataset({5.0, 7.0}, kFig9, 500, 42, true);
  CHECK(d1.z == d2.z);
  CHECK(d1.z_star == d2.z_star);
  CHECK(d1.causes == d2.causes);
  CHECK(d1.size() == 1000);
}

TEST_CASE("sample traces respect their invariants") {
  for (int i = 0; i < 20000; ++i) {
    const auto t = rbbm::sample_beam(5.0, kFig9, rbbm::substream_seed(7, i));
    CHECK(t.z >= 0.0);
    CHECK(t.z <= 10.0);
    CHECK(t.k <= t.n);
    if (t.cause == Cause::kOccluded) {
      CHECK(t.k >= 1);
      CHECK(t.z_occl_star >= 0.0);
      CHECK(t.z_occl_star <= 5.0);
    }
  }
  CHECK_THROWS(rbbm::sample_beam(0.0, kFig9, 1));
  CHECK_THROWS(rbbm::sample_beam(-1.0, kFig9, 1));
}

TEST_CASE("cause frequencies match the closed-form mixture weights") {
  const auto params = rbbm::beam_params_from_net(kFig9, 5.0);
  std::array<double, 4> counts{};
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const auto t = rbbm::sample_beam(5.0, kFig9, rbbm::substream_seed(3, i));
    counts[static_cast<int>(t.cause)] += 1.0;
  }
  CHECK(counts[0] / n == doctest::Approx(params.pi1()).epsilon(0.005 / params.pi1()));
  CHECK(counts[1] / n == doctest::Approx(params.pi2()).epsilon(0.005 / params.pi2()));
  CHECK(std::abs(counts[2] / n - params.pi3) < 0.005);
  CHECK(std::abs(counts[3] / n - params.pi4) < 0.005);
}

TEST_CASE("empirical occlusion probability matches the closed form") {
  const NetParams params{0.8, 0.15, 0.0, 0.0, 10.0};
  const double p_prime = rbbm::p_prime_from_environment({0.8, 0.5});
  int occluded = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i)
    if (rbbm::sample_beam(5.0, params, rbbm::substream_seed(11, i)).k >= 1)
      ++occluded;
  CHECK(std::abs(double(occluded) / n - p_prime) < 0.005);
}

TEST_CASE("occluder count given occlusion matches the renormalized pmf") {
  const NetParams params{0.8, 0.15, 0.0, 0.0, 10.0};
  const rbbm::OcclusionEnvironment env{0.8, 0.5};
  const double p_prime = rbbm::p_prime_from_environment(env);

  std::array<double, 64> counts{};
  double total = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    const auto t = rbbm::sample_beam(5.0, params, rbbm::substream_seed(13, i));
    if (t.k >= 1 && t.k < counts.size()) {
      counts[t.k] += 1.0;
      total += 1.0;
    }
  }
  double tv = 0.0;
  for (std::uint64_t k = 1; k < counts.size(); ++k)
    tv += 0.5 * std::abs(counts[k] / total -
                         rbbm::occluded_count_pmf(k, env) / p_prime);
  CHECK(tv < 0.01);
}

TEST_CASE("validate_against_analytic on the pure-Gaussian network") {
  const NetParams params{0.0, 0.15, 0.0, 0.0, 10.0};
  CHECK(rbbm::validate_against_analytic(5.0, params, 100000, 100, 21) < 0.05);
}

TEST_CASE("validator distance shrinks with more draws") {
  const double coarse = rbbm::validate_against_analytic(5.0, kFig9, 1000, 100, 31);
  const double fine = rbbm::validate_against_analytic(5.0, kFig9, 100000, 100, 31);
  CHECK(fine < coarse);
}

TEST_CASE("beam_params_from_net applies the occlusion geometry") {
  const auto params = rbbm::beam_params_from_net(kFig9, 5.0);
  CHECK(params.p_prime == doctest::Approx(2.0 / 3.0));
  CHECK(params.sigma_m == kFig9.sigma_m);
  CHECK(params.pi3 == kFig9.pi3);
  CHECK(params.pi4 == kFig9.pi4);
  CHECK(params.z_max == kFig9.z_max);
}
