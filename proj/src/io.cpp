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

#include "rbbm/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rbbm {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SegmentMap load_map_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("map parse error: ") + e.what());
  }
  SegmentMap map;
  map.z_max = j.at("z_max").get<double>();
  for (const auto& seg : j.at("segments")) {
    if (!seg.is_array() || seg.size() != 4)
      throw std::runtime_error("map: segment must be [x1, y1, x2, y2]");
    map.segments.push_back(
        {seg[0].get<double>(), seg[1].get<double>(), seg[2].get<double>(),
         seg[3].get<double>()});
  }
  validate_map(map);
  return map;
}

SegmentMap load_map_file(const std::string& path) {
  return load_map_json(read_file(path));
}

std::string map_to_json(const SegmentMap& map) {
  json j;
  j["z_max"] = map.z_max;
  j["segments"] = json::array();
  for (const auto& s : map.segments)
    j["segments"].push_back({s.x1, s.y1, s.x2, s.y2});
  return j.dump(2);
}

Dataset load_dataset_csv(const std::string& path, double z_max) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);

  Dataset ds;
  ds.z_max = z_max;
  std::string line;
  std::size_t line_no = 0;
  bool has_cause = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      has_cause = line.find("cause") != std::string::npos;
      if (line.rfind("z,", 0) != 0)
        throw std::runtime_error(path + ":1: expected header starting with 'z,'");
      continue;
    }
    std::istringstream row(line);
    std::string field;
    double vals[2];
    for (int c = 0; c < 2; ++c) {
      if (!std::getline(row, field, ','))
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": expected z,z_star");
      try {
        vals[c] = std::stod(field);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": malformed number '" + field + "'");
      }
    }
    ds.z.push_back(std::clamp(vals[0], 0.0, z_max));
    ds.z_star.push_back(std::clamp(vals[1], 0.0, z_max));
    if (has_cause && std::getline(row, field, ','))
      ds.causes.push_back(static_cast<std::uint8_t>(std::stoul(field)));
  }
  if (ds.size() == 0) throw std::runtime_error(path + ": no data rows");
  return ds;
}

void save_dataset_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write dataset: " + path);
  const bool has_cause = dataset.causes.size() == dataset.size();
  out << (has_cause ? "z,z_star,cause\n" : "z,z_star\n");
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out << format_double(dataset.z[i]) << ',' << format_double(dataset.z_star[i]);
    if (has_cause) out << ',' << static_cast<unsigned>(dataset.causes[i]);
    out << '\n';
  }
}

std::string beam_params_to_json(const BeamParams& p) {
  json j;
  j["sigma_m"] = p.sigma_m;
  j["p_prime"] = p.p_prime;
  j["pi3"] = p.pi3;
  j["pi4"] = p.pi4;
  j["z_max"] = p.z_max;
  return j.dump(2);
}

BeamParams beam_params_from_json(const std::string& text) {
  const json j = json::parse(text);
  BeamParams p;
  p.sigma_m = j.at("sigma_m").get<double>();
  p.p_prime = j.at("p_prime").get<double>();
  p.pi3 = j.at("pi3").get<double>();
  p.pi4 = j.at("pi4").get<double>();
  p.z_max = j.at("z_max").get<double>();
  validate_params(p);
  return p;
}

std::string thrun_params_to_json(const ThrunParams& p) {
  json j;
  j["sigma_m"] = p.sigma_m;
  j["z_hit"] = p.z_hit;
  j["z_short"] = p.z_short;
  j["z_max_w"] = p.z_max_w;
  j["z_rand"] = p.z_rand;
  j["lambda_short"] = p.lambda_short;
  j["z_max"] = p.z_max;
  return j.dump(2);
}

ThrunParams thrun_params_from_json(const std::string& text) {
  const json j = json::parse(text);
  ThrunParams p;
  p.sigma_m = j.at("sigma_m").get<double>();
  p.z_hit = j.at("z_hit").get<double>();
  p.z_short = j.at("z_short").get<double>();
  p.z_max_w = j.at("z_max_w").get<double>();
  p.z_rand = j.at("z_rand").get<double>();
  p.lambda_short = j.at("lambda_short").get<double>();
  p.z_max = j.at("z_max").get<double>();
  validate_params(p);
  return p;
}

}  // namespace rbbm
