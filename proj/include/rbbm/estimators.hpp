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

#ifndef RBBM_ESTIMATORS_HPP
#define RBBM_ESTIMATORS_HPP

#include <array>
#include <vector>

#include "rbbm/beam_model.hpp"
#include "rbbm/dataset.hpp"

namespace rbbm {

/// Per-row posterior cause probabilities (hit, occl, rand, max).
struct Responsibilities {
  std::vector<std::array<double, 4>> rows;
};

struct MlFitOptions {
  std::size_t iters = 30;
  double eps = kDefaultMaxRangeEps;
  bool early_stop = false;  // stop when max parameter change < 1e-7
};

struct MlFitResult {
  BeamParams params;
  std::vector<double> loglik;  // observed-data log-likelihood per iteration
  std::vector<bool> sigma_update_skipped;
  std::size_t iterations = 0;
};

/// Dirichlet + Gaussian-Wishart prior hyperparameters (scalar measurement,
/// so the Wishart block reduces to a scalar precision factor). Defaults are
/// weak so large datasets dominate the posterior; a strong mean prior would
/// permanently bias mu_bar away from the data.
struct VBPriors {
  double alpha0 = 1.0;
  double beta0 = 1e-3;
  double mu_bar0 = 0.0;  // center on the data via default_vb_priors
  double W0 = 12.0;
  double nu0 = 1.0;
};

struct VBPosterior {
  std::array<double, 4> alpha{};
  double beta = 0.0;
  double mu_bar = 0.0;
  double W = 0.0;
  double nu = 0.0;
};

/// Starting point for the variational iteration: a posterior plus the point
/// estimate of p' used inside the occlusion component.
struct VBInit {
  VBPosterior post;
  double p_prime = 1.0 / 3.0;
};

struct VBFitResult {
  VBPosterior post;
  std::vector<VBPosterior> trace;
  std::size_t iterations = 0;
};

struct ThrunFitResult {
  ThrunParams params;
  std::vector<double> loglik;
  std::size_t iterations = 0;
};

/// Digamma, absolute accuracy ~1e-10 for positive arguments.
double digamma(double x);

/// Most probable bin center of a 100-bin histogram of the measurements.
double most_probable_value(const Dataset& dataset, std::size_t bins = 100);

/// Standard-initialization helpers: ML init (sigma 0.5, p' 0.4, pi3 0.2,
/// pi4 0.1) and the VB init (p' 1/3, beta 5000, W 12, mu = most probable
/// bin, nu 100, alpha = (5/8, 1/8, 1/8, 1/8)).
BeamParams default_ml_init(double z_max);
VBInit default_vb_init(const Dataset& dataset);

/// Default weak priors with the Gaussian block centered on the most
/// probable measurement bin.
VBPriors default_vb_priors(const Dataset& dataset);
ThrunParams default_thrun_init(double z_max);

/// E-step responsibilities via Bayes' rule, computed in the log domain with
/// max-subtraction. A row where every component vanishes is an error naming
/// the row.
Responsibilities ml_responsibilities(const Dataset& dataset,
                                     const BeamParams& params,
                                     double eps = kDefaultMaxRangeEps);

/// Observed-data log-likelihood under the mixture (the max-range atom
/// contributes as a unit factor).
double ml_loglik(const Dataset& dataset, const BeamParams& params,
                 double eps = kDefaultMaxRangeEps);

/// EM for the beam mixture: weights from effective counts, p' from an exact
/// 1D maximization of the expected complete-data log-likelihood (the
/// occlusion density depends on p' beyond the mixture weight), sigma from
/// the hit-weighted squared residuals (floored at 1e-6 m; skipped and
/// flagged when no effective hit points remain).
MlFitResult ml_em_fit(const Dataset& dataset, const BeamParams& init,
                      const MlFitOptions& opts = {});

/// Variational E-step responsibilities under the current posterior.
Responsibilities vb_responsibilities(const Dataset& dataset,
                                     const VBPosterior& post,
                                     double p_prime_point,
                                     double eps = kDefaultMaxRangeEps);

/// Variational M-step: conjugate Dirichlet and Gaussian-Wishart updates
/// from the responsibility statistics.
VBPosterior vb_m_step(const Dataset& dataset, const Responsibilities& resp,
                      const VBPriors& priors);

VBFitResult vb_em_fit(const Dataset& dataset, const VBPriors& priors,
                      const VBInit& init, std::size_t iters = 30,
                      double eps = kDefaultMaxRangeEps);

/// Posterior-predictive density: Student-t hit component (Gaussian shortcut
/// when nu > 100) mixed with the other components at weights alpha_s/sum.
double vb_predictive(double z, double z_star, const VBPosterior& post,
                     double z_max, double eps = kDefaultMaxRangeEps);

/// MAP point estimates from the posterior hyperparameters.
BeamParams vb_point_estimates(const VBPosterior& post, double z_max);

/// EM for the exponential-decay baseline; the short-rate update is the
/// standard exponential ML estimate over the short-responsible mass.
ThrunFitResult thrun_ml_fit(const Dataset& dataset, const ThrunParams& init,
                            std::size_t iters = 30,
                            double eps = kDefaultMaxRangeEps);

}  // namespace rbbm

#endif  // RBBM_ESTIMATORS_HPP
