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

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include <doctest.h>

#include "rbbm/bayes_net.hpp"
#include "rbbm/estimators.hpp"
#include "rbbm/metrics.hpp"
#include "rbbm/rng.hpp"

using rbbm::BeamParams;
using rbbm::Dataset;

namespace {

Dataset fig9_dataset(std::uint64_t seed, std::uint64_t n = 10000) {
  const rbbm::NetParams net{0.8, 0.15, 0.2, 0.02, 10.0};
  return rbbm::sample_dataset({5.0}, net, n, seed);
}

}  // namespace

TEST_CASE("digamma against reference values") {
  const double euler = 0.57721566490153286;
  CHECK(rbbm::digamma(1.0) == doctest::Approx(-euler).epsilon(1e-10));
  CHECK(rbbm::digamma(0.5) ==
        doctest::Approx(-euler - 2 * std::log(2.0)).epsilon(1e-10));
  CHECK(rbbm::digamma(5.0) ==
        doctest::Approx(-euler + 1.0 + 0.5 + 1.0 / 3 + 0.25).epsilon(1e-10));
  // recurrence psi(x+1) = psi(x) + 1/x
  for (double x : {0.1, 0.7, 2.3, 17.0})
    CHECK(rbbm::digamma(x + 1.0) ==
          doctest::Approx(rbbm::digamma(x) + 1.0 / x).epsilon(1e-10));
}

TEST_CASE("most_probable_value finds the dominant bin") {
  Dataset ds;
  ds.z_max = 10.0;
  for (int i = 0; i < 90; ++i) ds.z.push_back(4.92);
  for (int i = 0; i < 10; ++i) ds.z.push_back(2.0);
  ds.z_star.assign(ds.z.size(), 5.0);
  CHECK(rbbm::most_probable_value(ds) == doctest::Approx(4.95));
}

TEST_CASE("ml_responsibilities degenerate mixture and row normalization") {
  auto ds = fig9_dataset(2, 500);
  const BeamParams pure{0.15, 0.0, 0.0, 0.0, 10.0};
  auto resp = rbbm::ml_responsibilities(ds, pure);
  for (const auto& row : resp.rows) {
    CHECK(row[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::accumulate(row.begin(), row.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  const BeamParams mixed{0.15, 0.5, 0.2, 0.1, 10.0};
  resp = rbbm::ml_responsibilities(ds, mixed);
  for (const auto& row : resp.rows) {
    for (double g : row) CHECK(g >= 0.0);
    CHECK(std::accumulate(row.begin(), row.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("ml_responsibilities equal hand-computed Bayes ratios") {
  Dataset ds;
  ds.z_max = 10.0;
  ds.z = {4.0, 9.995};
  ds.z_star = {5.0, 5.0};
  const BeamParams params{0.15, 0.5, 0.2, 0.1, 10.0};
  const double eps = rbbm::kDefaultMaxRangeEps;

  const auto resp = rbbm::ml_responsibilities(ds, params, eps);
  for (std::size_t i = 0; i < 2; ++i) {
    const double z = ds.z[i], zs = ds.z_star[i];
    // the fitting likelihood treats the max-range component as a band
    // density pi4 / (2 eps) so that the mixture stays a proper density
    const std::array<double, 4> w = {
        params.pi1() * rbbm::p_hit(z, zs, params.sigma_m),
        params.pi2() * rbbm::p_occl(z, zs, params.p_prime),
        params.pi3 * rbbm::p_rand(z, params.z_max),
        params.pi4 * rbbm::p_max(z, params.z_max, eps) / (2.0 * eps)};
    const double norm = w[0] + w[1] + w[2] + w[3];
    for (int s = 0; s < 4; ++s)
      CHECK(resp.rows[i][s] == doctest::Approx(w[s] / norm).epsilon(1e-9));
  }
  CHECK(resp.rows[1][3] > 0.5);  // band measurement dominated by the atom
}

TEST_CASE("ml_em_fit recovers a pure-Gaussian generator") {
  const rbbm::NetParams net{0.0, 0.15, 0.0, 0.0, 10.0};
  const auto ds = rbbm::sample_dataset({5.0}, net, 10000, 9);
  const auto fit =
      rbbm::ml_em_fit(ds, rbbm::default_ml_init(10.0), {.iters = 50});
  CHECK(fit.params.pi2() < 0.02);
  CHECK(fit.params.pi3 < 0.02);
  CHECK(fit.params.pi4 < 0.02);
  CHECK(fit.params.sigma_m == doctest::Approx(0.15).epsilon(0.1));
}

TEST_CASE("ml_em_fit log-likelihood is non-decreasing") {
  const auto ds = fig9_dataset(4);
  const auto fit = rbbm::ml_em_fit(ds, rbbm::default_ml_init(10.0));
  REQUIRE(fit.loglik.size() == 30);
  for (std::size_t i = 1; i < fit.loglik.size(); ++i)
    CHECK(fit.loglik[i] >=
          fit.loglik[i - 1] - 1e-8 * std::abs(fit.loglik[i - 1]));
}

TEST_CASE("ml_em_fit is invariant under row permutation") {
  auto ds = fig9_dataset(5, 2000);
  auto shuffled = ds;
  std::vector<std::size_t> idx(ds.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(77);
  std::shuffle(idx.begin(), idx.end(), rng);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    shuffled.z[i] = ds.z[idx[i]];
    shuffled.z_star[i] = ds.z_star[idx[i]];
  }

  const auto a = rbbm::ml_em_fit(ds, rbbm::default_ml_init(10.0));
  const auto b = rbbm::ml_em_fit(shuffled, rbbm::default_ml_init(10.0));
  CHECK(a.params.p_prime == doctest::Approx(b.params.p_prime).epsilon(1e-9));
  CHECK(a.params.pi3 == doctest::Approx(b.params.pi3).epsilon(1e-9));
  CHECK(a.params.pi4 == doctest::Approx(b.params.pi4).epsilon(1e-9));
  CHECK(a.params.sigma_m == doctest::Approx(b.params.sigma_m).epsilon(1e-9));
}

TEST_CASE("one-point dataset drives sigma to the floor") {
  Dataset ds;
  ds.z_max = 10.0;
  ds.z = {5.0};
  ds.z_star = {5.0};
  const auto fit = rbbm::ml_em_fit(ds, rbbm::default_ml_init(10.0));
  CHECK(fit.params.sigma_m == doctest::Approx(1e-6));
  CHECK(fit.params.pi1() > 0.9);
}

TEST_CASE("vb_responsibilities rows normalize and match ML in the limit") {
  const auto ds = fig9_dataset(6, 1000);
  const BeamParams truth{0.15, 2.0 / 3.0, 0.2, 0.02, 10.0};

  // concentrated posterior around the truth: huge counts, tight precision
  rbbm::VBPosterior post;
  const double n = 1e9;
  post.alpha = {truth.pi1() * n, truth.pi2() * n, truth.pi3 * n,
                truth.pi4 * n};
  post.beta = n;
  post.mu_bar = 5.0;
  post.nu = n;
  post.W = 1.0 / (0.15 * 0.15 * n);  // lambda = nu W = sigma^-2

  const auto vb = rbbm::vb_responsibilities(ds, post, truth.p_prime);
  const auto ml = rbbm::ml_responsibilities(ds, truth);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(std::accumulate(vb.rows[i].begin(), vb.rows[i].end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    for (int s = 0; s < 4; ++s)
      CHECK(std::abs(vb.rows[i][s] - ml.rows[i][s]) < 1e-3);
  }
}

TEST_CASE("symmetric alpha leaves responsibilities density-driven") {
  Dataset ds;
  ds.z_max = 10.0;
  ds.z = {3.0};
  ds.z_star = {5.0};
  rbbm::VBPosterior post;
  post.alpha = {2.0, 2.0, 2.0, 2.0};
  post.beta = 1e9;
  post.mu_bar = 5.0;
  post.nu = 1e9;
  post.W = 1.0 / (0.15 * 0.15 * 1e9);

  const auto resp = rbbm::vb_responsibilities(ds, post, 0.5);
  // equal E[log pi]: ratio of responsibilities equals ratio of densities
  const double occl = rbbm::p_occl(3.0, 5.0, 0.5);
  const double rand = rbbm::p_rand(3.0, 10.0);
  CHECK(resp.rows[0][1] / resp.rows[0][2] ==
        doctest::Approx(occl / rand).epsilon(1e-6));
}

TEST_CASE("vb_m_step equals the hand-rolled conjugate updates") {
  rbbm::Rng rng(15);
  Dataset ds;
  ds.z_max = 10.0;
  rbbm::Responsibilities resp;
  for (int i = 0; i < 10; ++i) {
    ds.z.push_back(rng.uniform(0.0, 10.0));
    ds.z_star.push_back(5.0);
    std::array<double, 4> r;
    double sum = 0.0;
    for (auto& v : r) sum += (v = rng.uniform());
    for (auto& v : r) v /= sum;
    resp.rows.push_back(r);
  }

  rbbm::VBPriors priors;
  priors.alpha0 = 1.0;
  priors.beta0 = 2.0;
  priors.mu_bar0 = 4.0;
  priors.W0 = 12.0;
  priors.nu0 = 3.0;

  const auto post = rbbm::vb_m_step(ds, resp, priors);

  std::array<double, 4> js{};
  double zsum = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int s = 0; s < 4; ++s) js[s] += resp.rows[i][s];
    zsum += resp.rows[i][0] * ds.z[i];
  }
  const double j1 = js[0];
  const double zbar = zsum / j1;
  double c1 = 0.0;
  for (int i = 0; i < 10; ++i)
    c1 += resp.rows[i][0] * (ds.z[i] - zbar) * (ds.z[i] - zbar);
  c1 /= j1;

  for (int s = 0; s < 4; ++s)
    CHECK(post.alpha[s] == doctest::Approx(1.0 + js[s]).epsilon(1e-12));
  CHECK(post.beta == doctest::Approx(2.0 + j1).epsilon(1e-12));
  CHECK(post.mu_bar ==
        doctest::Approx((2.0 * 4.0 + j1 * zbar) / (2.0 + j1)).epsilon(1e-12));
  const double w_inv =
      1.0 / 12.0 + j1 * c1 + (2.0 * j1 / (2.0 + j1)) * (zbar - 4.0) * (zbar - 4.0);
  CHECK(post.W == doctest::Approx(1.0 / w_inv).epsilon(1e-12));
  CHECK(post.nu == doctest::Approx(3.0 + j1).epsilon(1e-12));
}

TEST_CASE("vb alpha mass is conserved every iteration") {
  const auto ds = fig9_dataset(7, 2000);
  const auto priors = rbbm::default_vb_priors(ds);
  const auto fit =
      rbbm::vb_em_fit(ds, priors, rbbm::default_vb_init(ds), 10);
  REQUIRE(fit.trace.size() == 10);
  for (const auto& post : fit.trace) {
    const double sum =
        post.alpha[0] + post.alpha[1] + post.alpha[2] + post.alpha[3];
    CHECK(sum == doctest::Approx(4.0 * priors.alpha0 + 2000.0).epsilon(1e-9));
  }
}

TEST_CASE("tiny dataset stays close to the prior") {
  Dataset ds;
  ds.z_max = 10.0;
  ds.z = {5.0, 4.9, 5.1};
  ds.z_star = {5.0, 5.0, 5.0};
  const auto priors = rbbm::default_vb_priors(ds);
  const auto fit = rbbm::vb_em_fit(ds, priors, rbbm::default_vb_init(ds), 5);
  for (double a : fit.post.alpha) {
    CHECK(a >= priors.alpha0);
    CHECK(a <= priors.alpha0 + 3.0 + 1e-9);
  }
}

TEST_CASE("vb_point_estimates arithmetic") {
  rbbm::VBPosterior post;
  post.alpha = {1.0, 1.0, 1.0, 1.0};
  post.beta = 5000.0;
  post.mu_bar = 5.0;
  post.W = 12.0;
  post.nu = 100.0;

  const auto params = rbbm::vb_point_estimates(post, 10.0);
  CHECK(params.pi3 == doctest::Approx(0.25));
  CHECK(params.pi4 == doctest::Approx(0.25));
  CHECK(params.p_prime == doctest::Approx(0.5));
  CHECK(params.sigma_m ==
        doctest::Approx(1.0 / std::sqrt(100.0 * (5000.0 / 5001.0) * 12.0))
            .epsilon(1e-12));
}

TEST_CASE("vb_predictive mass and Gaussian limit") {
  const auto ds = fig9_dataset(8, 5000);
  const auto fit = rbbm::vb_em_fit(ds, rbbm::default_vb_priors(ds),
                                   rbbm::default_vb_init(ds), 30);
  const auto& post = fit.post;
  const double alpha_sum =
      post.alpha[0] + post.alpha[1] + post.alpha[2] + post.alpha[3];

  // continuous part plus the max-range weight integrates to about one
  const double cont = rbbm::integrate_adaptive(
      [&](double z) { return rbbm::vb_predictive(z, 5.0, post, 10.0, -1.0); },
      0.0, 10.0, 1e-8);
  CHECK(cont + post.alpha[3] / alpha_sum == doctest::Approx(1.0).epsilon(1e-3));

  // large nu: the Student-t hit term equals the Gaussian shortcut
  rbbm::VBPosterior wide = post;
  wide.nu = 150.0;  // shortcut branch
  rbbm::VBPosterior narrow = post;
  narrow.nu = 99.0;  // explicit Student-t branch
  narrow.W = wide.W * wide.nu / narrow.nu;  // same precision nu * W
  const double a = rbbm::vb_predictive(5.1, 5.0, wide, 10.0);
  const double b = rbbm::vb_predictive(5.1, 5.0, narrow, 10.0);
  CHECK(a == doctest::Approx(b).epsilon(0.02));
}

TEST_CASE("vb and ml agree on large datasets") {
  const auto ds = fig9_dataset(10);
  const auto ml = rbbm::ml_em_fit(ds, rbbm::default_ml_init(10.0));
  const auto vb = rbbm::vb_em_fit(ds, rbbm::default_vb_priors(ds),
                                  rbbm::default_vb_init(ds), 30);
  const auto pt = rbbm::vb_point_estimates(vb.post, 10.0);
  CHECK(pt.p_prime == doctest::Approx(ml.params.p_prime).epsilon(0.05));
  CHECK(std::abs(pt.pi3 - ml.params.pi3) < 0.02);
  CHECK(std::abs(pt.pi4 - ml.params.pi4) < 0.01);
  CHECK(pt.sigma_m == doctest::Approx(ml.params.sigma_m).epsilon(0.05));
}

TEST_CASE("thrun zero short weight is an EM fixed point") {
  const auto ds = fig9_dataset(11, 2000);
  rbbm::ThrunParams init{0.5, 0.6, 0.0, 0.1, 0.3, 0.1, 10.0};
  const auto fit = rbbm::thrun_ml_fit(ds, init, 20);
  CHECK(fit.params.z_short == doctest::Approx(0.0));
}

TEST_CASE("thrun_ml_fit recovers its own generative model") {
  // sample directly from the Thrun mixture: hit / truncated-exp short /
  // max-range / uniform
  const rbbm::ThrunParams truth{0.1, 0.4, 0.3, 0.1, 0.2, 1.0, 10.0};
  const double zs = 5.0;
  rbbm::Rng rng(17);
  Dataset ds;
  ds.z_max = 10.0;
  const double trunc = 1.0 - std::exp(-truth.lambda_short * zs);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    double z;
    if (u < truth.z_hit) {
      z = rng.normal(zs, truth.sigma_m);
    } else if (u < truth.z_hit + truth.z_short) {
      z = -std::log(1.0 - rng.uniform() * trunc) / truth.lambda_short;
    } else if (u < truth.z_hit + truth.z_short + truth.z_max_w) {
      z = 10.0;
    } else {
      z = rng.uniform(0.0, 10.0);
    }
    ds.z.push_back(std::clamp(z, 0.0, 10.0));
    ds.z_star.push_back(zs);
  }

  const auto fit =
      rbbm::thrun_ml_fit(ds, rbbm::default_thrun_init(10.0), 50);
  CHECK(std::abs(fit.params.z_hit - 0.4) < 0.04);
  CHECK(std::abs(fit.params.z_short - 0.3) < 0.03);
  CHECK(std::abs(fit.params.z_max_w - 0.1) < 0.02);
  CHECK(std::abs(fit.params.z_rand - 0.2) < 0.03);
  CHECK(fit.params.sigma_m == doctest::Approx(0.1).epsilon(0.1));
  CHECK(fit.params.lambda_short == doctest::Approx(1.0).epsilon(0.1));
}
