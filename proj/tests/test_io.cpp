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

#include <cstdio>
#include <fstream>
#include <string>

#include <doctest.h>

#include "rbbm/io.hpp"

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/rbbm_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
  void write(const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
  }
};

}  // namespace

TEST_CASE("map JSON round trip") {
  rbbm::SegmentMap map;
  map.z_max = 10.0;
  map.segments = {{0, 0, 10, 0}, {10, 0, 10, 10}};

  const auto parsed = rbbm::load_map_json(rbbm::map_to_json(map));
  CHECK(parsed.z_max == map.z_max);
  REQUIRE(parsed.segments.size() == 2);
  CHECK(parsed.segments[1].x1 == 10.0);
  CHECK(parsed.segments[1].y2 == 10.0);
}

TEST_CASE("map JSON rejects malformed input") {
  CHECK_THROWS(rbbm::load_map_json("{"));
  CHECK_THROWS(rbbm::load_map_json(R"({"z_max": 10})"));
  CHECK_THROWS(rbbm::load_map_json(R"({"z_max": 10, "segments": [[1,2,3]]})"));
  CHECK_THROWS(rbbm::load_map_json(
      R"({"z_max": -1, "segments": [[0,0,1,0]]})"));
  // empty segment list is a legal open world
  CHECK_NOTHROW(rbbm::load_map_json(R"({"z_max": 10, "segments": []})"));
}

TEST_CASE("dataset CSV round trip with causes") {
  rbbm::Dataset ds;
  ds.z_max = 10.0;
  ds.z = {1.25, 9.875, 10.0};
  ds.z_star = {5.0, 5.0, 7.5};
  ds.causes = {0, 1, 3};

  TempFile f("ds_roundtrip.csv");
  rbbm::save_dataset_csv(ds, f.path);
  const auto loaded = rbbm::load_dataset_csv(f.path, 10.0);
  CHECK(loaded.z == ds.z);
  CHECK(loaded.z_star == ds.z_star);
  CHECK(loaded.causes == ds.causes);
}

TEST_CASE("dataset CSV clips to the measurement range") {
  TempFile f("ds_clip.csv");
  f.write("z,z_star\n-0.5,5\n12.5,5\n");
  const auto ds = rbbm::load_dataset_csv(f.path, 10.0);
  CHECK(ds.z[0] == 0.0);
  CHECK(ds.z[1] == 10.0);
}

TEST_CASE("dataset CSV errors name the offending line") {
  TempFile f("ds_bad.csv");
  f.write("z,z_star\n1.0,5.0\nnope,5.0\n");
  try {
    rbbm::load_dataset_csv(f.path, 10.0);
    FAIL("expected a parse error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }

  TempFile g("ds_short.csv");
  g.write("z,z_star\n1.0\n");
  CHECK_THROWS(rbbm::load_dataset_csv(g.path, 10.0));

  TempFile h("ds_empty.csv");
  h.write("z,z_star\n");
  CHECK_THROWS(rbbm::load_dataset_csv(h.path, 10.0));

  CHECK_THROWS(rbbm::load_dataset_csv("/nonexistent/file.csv", 10.0));
}

TEST_CASE("parameter JSON round trips") {
  rbbm::BeamParams p{0.15, 0.5, 0.2, 0.1, 10.0};
  const auto bp = rbbm::beam_params_from_json(rbbm::beam_params_to_json(p));
  CHECK(bp.sigma_m == p.sigma_m);
  CHECK(bp.p_prime == p.p_prime);
  CHECK(bp.pi3 == p.pi3);
  CHECK(bp.pi4 == p.pi4);
  CHECK(bp.z_max == p.z_max);

  rbbm::ThrunParams t{0.25, 0.4, 0.3, 0.1, 0.2, 1.5, 10.0};
  const auto tp = rbbm::thrun_params_from_json(rbbm::thrun_params_to_json(t));
  CHECK(tp.sigma_m == t.sigma_m);
  CHECK(tp.z_hit == t.z_hit);
  CHECK(tp.z_short == t.z_short);
  CHECK(tp.z_max_w == t.z_max_w);
  CHECK(tp.z_rand == t.z_rand);
  CHECK(tp.lambda_short == t.lambda_short);
}

TEST_CASE("format_double is deterministic and round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 2.6596152026762178, 1e-300, 12345.678}) {
    const auto s = rbbm::format_double(v);
    CHECK(s == rbbm::format_double(v));
    CHECK(std::stod(s) == v);
  }
}
