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

#ifndef RBBM_IO_HPP
#define RBBM_IO_HPP

#include <string>

#include "rbbm/beam_model.hpp"
#include "rbbm/dataset.hpp"
#include "rbbm/geometry.hpp"

namespace rbbm {

/// Map file: {"z_max": number, "segments": [[x1,y1,x2,y2], ...]}.
SegmentMap load_map_json(const std::string& text);
SegmentMap load_map_file(const std::string& path);
std::string map_to_json(const SegmentMap& map);

/// Dataset CSV: header `z,z_star[,cause]`. Malformed rows are reported by
/// line number. Values are clipped to [0, z_max] on load.
Dataset load_dataset_csv(const std::string& path, double z_max);
void save_dataset_csv(const Dataset& dataset, const std::string& path);

/// Parameter JSON round-trips.
std::string beam_params_to_json(const BeamParams& p);
BeamParams beam_params_from_json(const std::string& text);
std::string thrun_params_to_json(const ThrunParams& p);
ThrunParams thrun_params_from_json(const std::string& text);

/// Stable formatting used for all emitted numbers (17 significant digits,
/// shortest round-trip not required but output is byte-deterministic).
std::string format_double(double v);

}  // namespace rbbm

#endif  // RBBM_IO_HPP
