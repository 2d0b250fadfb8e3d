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

#ifndef RBBM_METRICS_HPP
#define RBBM_METRICS_HPP

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace rbbm {

/// Discrete distribution over F bins given by F+1 ascending edges.
struct BinnedDistribution {
  std::vector<double> edges;
  std::vector<double> mass;
};

/// Equal-width edges on [lo, hi].
std::vector<double> uniform_edges(double lo, double hi, std::size_t bins);

/// Adaptive Simpson quadrature of f on [a, b].
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol = 1e-10);

/// Normalized histogram; samples are clipped to the edge range and the
/// final bin is right-closed. Empty input is an error.
BinnedDistribution build_histogram(std::span<const double> samples,
                                   std::vector<double> edges);

/// Per-bin mass of a continuous density by adaptive quadrature, plus an
/// optional point mass added to its containing bin; renormalized to 1.
BinnedDistribution discretize_density(
    const std::function<double(double)>& density_fn, std::vector<double> edges,
    std::optional<std::pair<double, double>> atom_at = std::nullopt);

/// Discrete KL divergence sum h_f log(h_f / p_f) with 0 log(0/x) = 0.
/// Zero model bins under observed mass are floored at 1e-12; `floored`,
/// when given, reports whether the floor was hit.
double kl_divergence(const BinnedDistribution& h, const BinnedDistribution& p,
                     bool* floored = nullptr);

/// Square-root-form Hellinger distance sqrt(sum (sqrt h - sqrt p)^2),
/// range [0, sqrt(2)].
double hellinger_distance(const BinnedDistribution& h,
                          const BinnedDistribution& p);

}  // namespace rbbm

#endif  // RBBM_METRICS_HPP
