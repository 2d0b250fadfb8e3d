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

#include "rbbm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rbbm {

namespace {

void check_edges(const std::vector<double>& edges) {
  if (edges.size() < 2) throw std::invalid_argument("need at least 2 edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1]))
      throw std::invalid_argument("edges must be strictly increasing");
}

void check_same_edges(const BinnedDistribution& a,
                      const BinnedDistribution& b) {
  if (a.edges != b.edges)
    throw std::invalid_argument("distributions have mismatched bin edges");
}

double simpson(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol) {
  // Seed with a fixed subdivision so narrow features inside a wide bin are
  // not missed by the first Simpson estimate.
  constexpr int kSeed = 8;
  double total = 0.0;
  const double h = (b - a) / kSeed;
  for (int i = 0; i < kSeed; ++i) {
    const double x0 = a + i * h, x1 = x0 + h, xm = 0.5 * (x0 + x1);
    const double f0 = f(x0), fm = f(xm), f1 = f(x1);
    total += adaptive_simpson(f, x0, x1, f0, fm, f1,
                              simpson(f, x0, x1, f0, fm, f1), tol / kSeed, 24);
  }
  return total;
}

std::vector<double> uniform_edges(double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw std::invalid_argument("bad edge spec");
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  return edges;
}

BinnedDistribution build_histogram(std::span<const double> samples,
                                   std::vector<double> edges) {
  check_edges(edges);
  if (samples.empty()) throw std::invalid_argument("empty sample list");

  const std::size_t bins = edges.size() - 1;
  std::vector<double> mass(bins, 0.0);
  for (double z : samples) {
    z = std::clamp(z, edges.front(), edges.back());
    auto it = std::upper_bound(edges.begin(), edges.end(), z);
    std::size_t idx = static_cast<std::size_t>(it - edges.begin());
    idx = idx == 0 ? 0 : idx - 1;
    if (idx >= bins) idx = bins - 1;  // right-closed final bin
    mass[idx] += 1.0;
  }
  const double n = static_cast<double>(samples.size());
  for (double& m : mass) m /= n;
  return {std::move(edges), std::move(mass)};
}

BinnedDistribution discretize_density(
    const std::function<double(double)>& density_fn, std::vector<double> edges,
    std::optional<std::pair<double, double>> atom_at) {
  check_edges(edges);
  const std::size_t bins = edges.size() - 1;
  std::vector<double> mass(bins, 0.0);
  for (std::size_t i = 0; i < bins; ++i)
    mass[i] = integrate_adaptive(density_fn, edges[i], edges[i + 1], 1e-10);

  if (atom_at) {
    const auto [loc, m] = *atom_at;
    const double z = std::clamp(loc, edges.front(), edges.back());
    auto it = std::upper_bound(edges.begin(), edges.end(), z);
    std::size_t idx = static_cast<std::size_t>(it - edges.begin());
    idx = idx == 0 ? 0 : idx - 1;
    if (idx >= bins) idx = bins - 1;
    mass[idx] += m;
  }

  double total = 0.0;
  for (double m : mass) total += m;
  if (total <= 0.0) throw std::invalid_argument("density has zero mass on bins");
  for (double& m : mass) m /= total;
  return {std::move(edges), std::move(mass)};
}

double kl_divergence(const BinnedDistribution& h, const BinnedDistribution& p,
                     bool* floored) {
  check_same_edges(h, p);
  if (floored) *floored = false;
  double d = 0.0;
  for (std::size_t f = 0; f < h.mass.size(); ++f) {
    if (h.mass[f] <= 0.0) continue;
    double q = p.mass[f];
    if (q < 1e-12) {
      q = 1e-12;
      if (floored) *floored = true;
    }
    d += h.mass[f] * std::log(h.mass[f] / q);
  }
  return d;
}

double hellinger_distance(const BinnedDistribution& h,
                          const BinnedDistribution& p) {
  check_same_edges(h, p);
  double sum = 0.0;
  for (std::size_t f = 0; f < h.mass.size(); ++f) {
    const double d = std::sqrt(h.mass[f]) - std::sqrt(p.mass[f]);
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace rbbm
