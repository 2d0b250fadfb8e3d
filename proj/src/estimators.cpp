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

#include "rbbm/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rbbm/metrics.hpp"

namespace rbbm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSigmaFloor = 1e-6;
constexpr double kDenomFloor = 1e-9;

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

/// Normalize four log-domain terms into probabilities; returns the log of
/// the normalizer. All-(-inf) rows are reported via `row` in the message.
double normalize_log_row(std::array<double, 4>& lr, std::size_t row) {
  const double m = std::max({lr[0], lr[1], lr[2], lr[3]});
  if (m == kNegInf)
    throw std::runtime_error("row " + std::to_string(row) +
                             ": all mixture components are zero");
  double sum = 0.0;
  for (double v : lr) sum += std::exp(v - m);
  const double log_norm = m + std::log(sum);
  for (double& v : lr) v = std::exp(v - log_norm);
  return log_norm;
}

/// Max-range component used inside the estimators: the atom's mass spread
/// uniformly over the tolerance band, so the mixture is a proper density
/// and the weight estimates are consistent. (With the raw {0,1} indicator
/// the likelihood is improper: the uniform component then absorbs the
/// max-range mass, driving pi4 to zero on band-sized spikes.)
double log_p_max_density(double z, double z_max, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  return p_max(z, z_max, eps) > 0.0 ? -std::log(2.0 * eps) : kNegInf;
}

/// Expected complete-data log-likelihood terms that depend on p'. With
/// hit/occlusion responsibility masses A and B and per-row occlusion
/// statistics a_i = (z*_i - z_i)/z*_i, g2_i:
///   Q(p') = (A+B) log(1-p') + B log p' - 2 sum_i g2_i log(1 - a_i p').
/// The occlusion density depends on p' beyond the mixture weight, so the
/// classic count-ratio update B/(A+B) alone does not maximize Q and can
/// make EM oscillate near the fixed point.
double occl_q(double p, double A, double B, const std::vector<double>& a,
              const std::vector<double>& g2) {
  if (p <= 0.0) return B > 0.0 ? kNegInf : A * std::log1p(-p);
  if (p >= 1.0) return kNegInf;
  double q = (A + B) * std::log1p(-p) + B * std::log(p);
  for (std::size_t i = 0; i < a.size(); ++i)
    q -= 2.0 * g2[i] * std::log1p(-a[i] * p);
  return q;
}

double occl_q_grad(double p, double A, double B, const std::vector<double>& a,
                   const std::vector<double>& g2) {
  double g = -(A + B) / (1.0 - p) + B / p;
  for (std::size_t i = 0; i < a.size(); ++i)
    g += 2.0 * g2[i] * a[i] / (1.0 - a[i] * p);
  return g;
}

/// Exact M-step for p': bisection on the stationary condition of Q, with a
/// generalized-EM safeguard (never accept a value that lowers Q below the
/// previous iterate's).
double update_p_prime(double prev, double A, double B,
                      const std::vector<double>& a,
                      const std::vector<double>& g2) {
  double lo = 1e-12, hi = 1.0 - 1e-12;
  double root;
  if (occl_q_grad(lo, A, B, a, g2) <= 0.0) {
    root = 0.0;
  } else if (occl_q_grad(hi, A, B, a, g2) >= 0.0) {
    root = hi;
  } else {
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (occl_q_grad(mid, A, B, a, g2) > 0.0 ? lo : hi) = mid;
    }
    root = 0.5 * (lo + hi);
  }

  double best = root, best_q = occl_q(root, A, B, a, g2);
  for (double cand : {prev, A + B > 0.0 ? B / (A + B) : 0.0}) {
    const double q = occl_q(cand, A, B, a, g2);
    if (q > best_q) {
      best = cand;
      best_q = q;
    }
  }
  return std::clamp(best, 0.0, 1.0);
}

void check_dataset(const Dataset& ds) {
  if (ds.size() == 0) throw std::invalid_argument("dataset is empty");
  if (ds.z.size() != ds.z_star.size())
    throw std::invalid_argument("dataset column length mismatch");
}

}  // namespace

double digamma(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("digamma: x must be > 0");
  double result = 0.0;
  // Recurrence up to the asymptotic regime.
  while (x < 6.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Asymptotic expansion with Bernoulli terms through x^-12.
  result += std::log(x) - 0.5 * inv -
            inv2 * (1.0 / 12.0 -
                    inv2 * (1.0 / 120.0 -
                            inv2 * (1.0 / 252.0 -
                                    inv2 * (1.0 / 240.0 - inv2 / 132.0))));
  return result;
}

double most_probable_value(const Dataset& dataset, std::size_t bins) {
  check_dataset(dataset);
  const auto edges = uniform_edges(0.0, dataset.z_max, bins);
  const auto hist = build_histogram(dataset.z, edges);
  const auto it = std::max_element(hist.mass.begin(), hist.mass.end());
  const auto idx = static_cast<std::size_t>(it - hist.mass.begin());
  return 0.5 * (hist.edges[idx] + hist.edges[idx + 1]);
}

BeamParams default_ml_init(double z_max) {
  return BeamParams{0.5, 0.4, 0.2, 0.1, z_max};
}

VBInit default_vb_init(const Dataset& dataset) {
  VBInit init;
  init.post.alpha = {5.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0};
  init.post.beta = 5000.0;
  init.post.W = 12.0;
  init.post.mu_bar = most_probable_value(dataset);
  init.post.nu = 100.0;
  init.p_prime = 1.0 / 3.0;
  return init;
}

VBPriors default_vb_priors(const Dataset& dataset) {
  VBPriors priors;
  priors.mu_bar0 = most_probable_value(dataset);
  return priors;
}

ThrunParams default_thrun_init(double z_max) {
  return ThrunParams{0.5, 0.4, 0.3, 0.1, 0.2, 0.1, z_max};
}

Responsibilities ml_responsibilities(const Dataset& dataset,
                                     const BeamParams& params, double eps) {
  check_dataset(dataset);
  validate_params(params);

  const std::array<double, 4> log_pi = {
      safe_log(params.pi1()), safe_log(params.pi2()), safe_log(params.pi3),
      safe_log(params.pi4)};

  Responsibilities resp;
  resp.rows.resize(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const double z = std::clamp(dataset.z[i], 0.0, params.z_max);
    const double zs = dataset.z_star[i];
    std::array<double, 4> lr = {
        log_pi[0] + safe_log(p_hit(z, zs, params.sigma_m)),
        log_pi[1] + safe_log(p_occl(z, zs, params.p_prime)),
        log_pi[2] + safe_log(p_rand(z, params.z_max)),
        log_pi[3] + log_p_max_density(z, params.z_max, eps)};
    normalize_log_row(lr, i);
    resp.rows[i] = lr;
  }
  return resp;
}

double ml_loglik(const Dataset& dataset, const BeamParams& params,
                 double eps) {
  check_dataset(dataset);
  const std::array<double, 4> log_pi = {
      safe_log(params.pi1()), safe_log(params.pi2()), safe_log(params.pi3),
      safe_log(params.pi4)};
  double ll = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const double z = std::clamp(dataset.z[i], 0.0, params.z_max);
    const double zs = dataset.z_star[i];
    std::array<double, 4> lr = {
        log_pi[0] + safe_log(p_hit(z, zs, params.sigma_m)),
        log_pi[1] + safe_log(p_occl(z, zs, params.p_prime)),
        log_pi[2] + safe_log(p_rand(z, params.z_max)),
        log_pi[3] + log_p_max_density(z, params.z_max, eps)};
    ll += normalize_log_row(lr, i);
  }
  return ll;
}

MlFitResult ml_em_fit(const Dataset& dataset, const BeamParams& init,
                      const MlFitOptions& opts) {
  check_dataset(dataset);
  validate_params(init);
  if (opts.iters < 1) throw std::invalid_argument("iters must be >= 1");

  const double J = static_cast<double>(dataset.size());
  MlFitResult result;
  result.params = init;

  for (std::size_t iter = 0; iter < opts.iters; ++iter) {
    const BeamParams prev = result.params;
    result.loglik.push_back(ml_loglik(dataset, result.params, opts.eps));

    const auto resp = ml_responsibilities(dataset, result.params, opts.eps);
    std::array<double, 4> js{};
    double hit_sq = 0.0;
    std::vector<double> occl_a, occl_g2;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      for (int s = 0; s < 4; ++s) js[s] += resp.rows[i][s];
      const double r = dataset.z[i] - dataset.z_star[i];
      hit_sq += resp.rows[i][0] * r * r;
      if (resp.rows[i][1] > 0.0 && dataset.z_star[i] > 0.0) {
        const double z = std::clamp(dataset.z[i], 0.0, dataset.z_star[i]);
        occl_a.push_back((dataset.z_star[i] - z) / dataset.z_star[i]);
        occl_g2.push_back(resp.rows[i][1]);
      }
    }

    result.params.pi3 = js[2] / J;
    result.params.pi4 = js[3] / J;
    result.params.p_prime =
        update_p_prime(prev.p_prime, js[0], js[1], occl_a, occl_g2);

    if (js[0] > 0.0) {
      result.params.sigma_m = std::max(std::sqrt(hit_sq / js[0]), kSigmaFloor);
      result.sigma_update_skipped.push_back(false);
    } else {
      result.sigma_update_skipped.push_back(true);
    }
    result.iterations = iter + 1;

    if (opts.early_stop) {
      const double delta = std::max(
          {std::abs(prev.sigma_m - result.params.sigma_m),
           std::abs(prev.p_prime - result.params.p_prime),
           std::abs(prev.pi3 - result.params.pi3),
           std::abs(prev.pi4 - result.params.pi4)});
      if (delta < 1e-7) break;
    }
  }
  return result;
}

Responsibilities vb_responsibilities(const Dataset& dataset,
                                     const VBPosterior& post,
                                     double p_prime_point, double eps) {
  check_dataset(dataset);
  const double alpha_sum =
      post.alpha[0] + post.alpha[1] + post.alpha[2] + post.alpha[3];
  const double psi_sum = digamma(alpha_sum);
  std::array<double, 4> e_log_pi;
  for (int s = 0; s < 4; ++s) e_log_pi[s] = digamma(post.alpha[s]) - psi_sum;

  const double e_log_lambda =
      digamma(0.5 * post.nu) + std::log(2.0) + std::log(post.W);

  Responsibilities resp;
  resp.rows.resize(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const double z = std::clamp(dataset.z[i], 0.0, dataset.z_max);
    const double zs = dataset.z_star[i];
    const double dz = z - post.mu_bar;
    const double quad = 1.0 / post.beta + post.nu * dz * post.W * dz;
    std::array<double, 4> lr = {
        e_log_pi[0] + 0.5 * e_log_lambda - 0.5 * std::log(2.0 * M_PI) -
            0.5 * quad,
        e_log_pi[1] + safe_log(p_occl(z, zs, p_prime_point)),
        e_log_pi[2] + safe_log(p_rand(z, dataset.z_max)),
        e_log_pi[3] + log_p_max_density(z, dataset.z_max, eps)};
    normalize_log_row(lr, i);
    resp.rows[i] = lr;
  }
  return resp;
}

VBPosterior vb_m_step(const Dataset& dataset, const Responsibilities& resp,
                      const VBPriors& priors) {
  check_dataset(dataset);
  if (resp.rows.size() != dataset.size())
    throw std::invalid_argument("responsibilities/dataset size mismatch");

  std::array<double, 4> js{};
  double hit_z = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (int s = 0; s < 4; ++s) js[s] += resp.rows[i][s];
    hit_z += resp.rows[i][0] * dataset.z[i];
  }

  VBPosterior post;
  for (int s = 0; s < 4; ++s) post.alpha[s] = priors.alpha0 + js[s];

  const double j1 = js[0];
  if (j1 > 0.0) {
    const double z_bar = hit_z / j1;
    double c1 = 0.0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      const double d = dataset.z[i] - z_bar;
      c1 += resp.rows[i][0] * d * d;
    }
    c1 /= j1;

    post.beta = priors.beta0 + j1;
    post.mu_bar = (priors.beta0 * priors.mu_bar0 + j1 * z_bar) / post.beta;
    const double dm = z_bar - priors.mu_bar0;
    const double w_inv = 1.0 / priors.W0 + j1 * c1 +
                         priors.beta0 * j1 / (priors.beta0 + j1) * dm * dm;
    post.W = 1.0 / w_inv;
    post.nu = priors.nu0 + j1;
  } else {
    post.beta = priors.beta0;
    post.mu_bar = priors.mu_bar0;
    post.W = priors.W0;
    post.nu = priors.nu0;
  }
  return post;
}

VBFitResult vb_em_fit(const Dataset& dataset, const VBPriors& priors,
                      const VBInit& init, std::size_t iters, double eps) {
  check_dataset(dataset);
  if (iters < 1) throw std::invalid_argument("iters must be >= 1");

  VBFitResult result;
  result.post = init.post;
  double p_prime = init.p_prime;
  for (std::size_t iter = 0; iter < iters; ++iter) {
    const auto resp = vb_responsibilities(dataset, result.post, p_prime, eps);
    result.post = vb_m_step(dataset, resp, priors);
    p_prime = vb_point_estimates(result.post, dataset.z_max).p_prime;
    result.trace.push_back(result.post);
    result.iterations = iter + 1;
  }
  return result;
}

double vb_predictive(double z, double z_star, const VBPosterior& post,
                     double z_max, double eps) {
  const double alpha_sum =
      post.alpha[0] + post.alpha[1] + post.alpha[2] + post.alpha[3];
  const double p_prime = vb_point_estimates(post, z_max).p_prime;

  // Student-t hit component with precision (nu beta / (1 + beta)) W.
  const double lambda_t = post.nu * post.beta / (1.0 + post.beta) * post.W;
  const double dz = z - post.mu_bar;
  double hit;
  if (post.nu > 100.0) {
    hit = std::sqrt(lambda_t / (2.0 * M_PI)) *
          std::exp(-0.5 * lambda_t * dz * dz);
  } else {
    const double nu = post.nu;
    hit = std::exp(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu)) *
          std::sqrt(lambda_t / (M_PI * nu)) *
          std::pow(1.0 + lambda_t * dz * dz / nu, -0.5 * (nu + 1.0));
  }

  return (post.alpha[0] * hit +
          post.alpha[1] * p_occl(z, z_star, p_prime) +
          post.alpha[2] * p_rand(z, z_max) +
          post.alpha[3] * p_max(z, z_max, eps)) /
         alpha_sum;
}

BeamParams vb_point_estimates(const VBPosterior& post, double z_max) {
  const double alpha_sum =
      post.alpha[0] + post.alpha[1] + post.alpha[2] + post.alpha[3];
  BeamParams params;
  params.z_max = z_max;
  params.pi3 = post.alpha[2] / alpha_sum;
  params.pi4 = post.alpha[3] / alpha_sum;
  const double pi2 = post.alpha[1] / alpha_sum;
  params.p_prime =
      std::clamp(pi2 / std::max(1.0 - params.pi3 - params.pi4, kDenomFloor),
                 0.0, 1.0);
  const double lambda_t = post.nu * post.beta / (1.0 + post.beta) * post.W;
  params.sigma_m = std::max(1.0 / std::sqrt(lambda_t), kSigmaFloor);
  return params;
}

ThrunFitResult thrun_ml_fit(const Dataset& dataset, const ThrunParams& init,
                            std::size_t iters, double eps) {
  check_dataset(dataset);
  validate_params(init);
  if (iters < 1) throw std::invalid_argument("iters must be >= 1");

  const double J = static_cast<double>(dataset.size());
  ThrunFitResult result;
  result.params = init;

  for (std::size_t iter = 0; iter < iters; ++iter) {
    ThrunParams& p = result.params;
    const double lambda = std::max(p.lambda_short, 1e-8);
    const std::array<double, 4> log_w = {safe_log(p.z_hit), safe_log(p.z_short),
                                         safe_log(p.z_max_w), safe_log(p.z_rand)};

    double ll = 0.0;
    std::array<double, 4> js{};
    double hit_sq = 0.0, short_z = 0.0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      const double z = std::clamp(dataset.z[i], 0.0, p.z_max);
      const double zs = dataset.z_star[i];
      double log_short = kNegInf;
      if (zs > 0.0 && z <= zs) {
        const double eta = 1.0 / (1.0 - std::exp(-lambda * zs));
        log_short = std::log(eta * lambda) - lambda * z;
      }
      std::array<double, 4> lr = {
          log_w[0] + safe_log(p_hit(z, zs, p.sigma_m)),
          log_w[1] + log_short,
          log_w[2] + log_p_max_density(z, p.z_max, eps),
          log_w[3] + safe_log(p_rand(z, p.z_max))};
      ll += normalize_log_row(lr, i);
      for (int s = 0; s < 4; ++s) js[s] += lr[s];
      const double r = z - zs;
      hit_sq += lr[0] * r * r;
      short_z += lr[1] * z;
    }
    result.loglik.push_back(ll);

    p.z_hit = js[0] / J;
    p.z_short = js[1] / J;
    p.z_max_w = js[2] / J;
    p.z_rand = js[3] / J;
    if (js[0] > 0.0) p.sigma_m = std::max(std::sqrt(hit_sq / js[0]), kSigmaFloor);
    if (js[1] > 0.0 && short_z > 0.0)
      p.lambda_short = std::max(js[1] / short_z, 1e-8);
    result.iterations = iter + 1;
  }
  return result;
}

}  // namespace rbbm
