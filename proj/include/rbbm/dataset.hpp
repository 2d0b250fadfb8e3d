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

#ifndef RBBM_DATASET_HPP
#define RBBM_DATASET_HPP

#include <cstdint>
#include <vector>

namespace rbbm {

/// Paired (z, z*) beam observations. Measurements are clipped to
/// [0, z_max] at load time. `causes` is an optional diagnostic column
/// (values of bayes_net's Cause enum); empty when not tracked.
struct Dataset {
  std::vector<double> z;
  std::vector<double> z_star;
  std::vector<std::uint8_t> causes;
  double z_max = 10.0;

  std::size_t size() const { return z.size(); }
};

}  // namespace rbbm

#endif  // RBBM_DATASET_HPP
