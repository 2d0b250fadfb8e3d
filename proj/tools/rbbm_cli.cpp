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

// Command-line front end. Talks to the core exclusively through the shared
// library's C interface; CLI11 and JSON are used for plumbing only.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rbbm/capi.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int exit_code_for(rbbm_status s) {
  switch (s) {
    case RBBM_OK:
      return kExitOk;
    case RBBM_ERR_INVALID:
      return kExitUsage;
    case RBBM_ERR_IO:
      return kExitIo;
    default:
      return kExitValidation;
  }
}

// Fails the whole command on any non-OK status.
struct CliError {
  int code;
  std::string message;
};

void check(rbbm_status s, const std::string& what) {
  if (s != RBBM_OK)
    throw CliError{exit_code_for(s), what + ": " + rbbm_last_error()};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{kExitIo, "cannot write " + path};
  out << text;
}

void write_provenance(const std::string& primary_out, const json& config) {
  json j;
  j["version"] = rbbm_version();
  j["config"] = config;
  write_text_file(primary_out + ".provenance.json", j.dump(2) + "\n");
}

struct MapHandle {
  rbbm_map* h = nullptr;
  ~MapHandle() { rbbm_map_free(h); }
};

struct DatasetHandle {
  rbbm_dataset* h = nullptr;
  ~DatasetHandle() { rbbm_dataset_free(h); }
};

// ---------------------------------------------------------------- simulate

struct SimulateConfig {
  std::vector<double> z_stars;
  std::uint64_t per_range = 500;
  double p = 0.0, sigma_m = 0.15, pi3 = 0.0, pi4 = 0.0, z_max = 10.0;
  std::uint64_t seed = 0;
  bool keep_causes = false;
  std::string out;
};

int run_simulate(const SimulateConfig& cfg) {
  rbbm_net_params np{cfg.p, cfg.sigma_m, cfg.pi3, cfg.pi4, cfg.z_max};
  DatasetHandle ds;
  check(rbbm_sample_dataset(cfg.z_stars.data(), cfg.z_stars.size(), &np,
                            cfg.per_range, cfg.seed, cfg.keep_causes ? 1 : 0,
                            &ds.h),
        "sampling failed");
  check(rbbm_dataset_save_csv(ds.h, cfg.out.c_str()), "write failed");

  json prov;
  prov["command"] = "simulate";
  prov["z_star"] = cfg.z_stars;
  prov["per_range"] = cfg.per_range;
  prov["p"] = cfg.p;
  prov["sigma_m"] = cfg.sigma_m;
  prov["pi3"] = cfg.pi3;
  prov["pi4"] = cfg.pi4;
  prov["z_max"] = cfg.z_max;
  prov["seed"] = cfg.seed;
  prov["keep_causes"] = cfg.keep_causes;
  prov["out"] = cfg.out;
  write_provenance(cfg.out, prov);
  return kExitOk;
}

// ------------------------------------------------------------------- learn

struct LearnConfig {
  std::string dataset;
  std::string estimator;  // ml | vb | thrun
  double z_max = 10.0;
  std::size_t iters = 30;
  std::size_t bins = 100;
  std::size_t curve_points = 400;
  double alpha0 = 1.0;
  // optional ML init overrides; negative means "use the standard init"
  double init_sigma = -1.0, init_p_prime = -1.0, init_pi3 = -1.0,
         init_pi4 = -1.0;
  std::string out;
  std::string curve_out;
};

double dataset_mean_z_star(rbbm_dataset* ds) {
  const size_t n = rbbm_dataset_size(ds);
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double z, zs;
    check(rbbm_dataset_row(ds, i, &z, &zs), "dataset row");
    sum += zs;
  }
  return sum / static_cast<double>(n);
}

int run_learn(const LearnConfig& cfg) {
  DatasetHandle ds;
  check(rbbm_dataset_load_csv(cfg.dataset.c_str(), cfg.z_max, &ds.h),
        "dataset load failed");
  const double z_star = dataset_mean_z_star(ds.h);

  json report;
  report["estimator"] = cfg.estimator;
  report["dataset"] = cfg.dataset;
  report["iters"] = cfg.iters;
  report["bins"] = cfg.bins;

  double d1 = 0.0, d2 = 0.0;
  rbbm_beam_params beam{};
  rbbm_thrun_params thrun{};
  rbbm_vb_posterior post{};
  std::vector<double> loglik(cfg.iters, 0.0);
  size_t n_iters = 0;

  if (cfg.estimator == "ml") {
    rbbm_beam_params init{0.5, 0.4, 0.2, 0.1, cfg.z_max};
    if (cfg.init_sigma >= 0.0) init.sigma_m = cfg.init_sigma;
    if (cfg.init_p_prime >= 0.0) init.p_prime = cfg.init_p_prime;
    if (cfg.init_pi3 >= 0.0) init.pi3 = cfg.init_pi3;
    if (cfg.init_pi4 >= 0.0) init.pi4 = cfg.init_pi4;
    check(rbbm_ml_fit(ds.h, &init, cfg.iters, 0, &beam, loglik.data(),
                      &n_iters),
          "fit failed");
    check(rbbm_fit_distances(ds.h, 0, &beam, nullptr, nullptr, cfg.bins, 0.01,
                             &d1, &d2),
          "distance computation failed");
    report["init"] = {{"sigma_m", init.sigma_m},
                      {"p_prime", init.p_prime},
                      {"pi3", init.pi3},
                      {"pi4", init.pi4}};
    report["params"] = {{"sigma_m", beam.sigma_m},
                        {"p_prime", beam.p_prime},
                        {"pi3", beam.pi3},
                        {"pi4", beam.pi4},
                        {"z_max", beam.z_max}};
    loglik.resize(n_iters);
    report["loglik"] = loglik;
    report["iterations"] = n_iters;
  } else if (cfg.estimator == "vb") {
    check(rbbm_vb_fit(ds.h, cfg.iters, cfg.alpha0, &post, &beam),
          "fit failed");
    check(rbbm_fit_distances(ds.h, 2, nullptr, nullptr, &post, cfg.bins, 0.01,
                             &d1, &d2),
          "distance computation failed");
    report["alpha0"] = cfg.alpha0;
    report["posterior"] = {{"alpha", {post.alpha[0], post.alpha[1],
                                      post.alpha[2], post.alpha[3]}},
                           {"beta", post.beta},
                           {"mu_bar", post.mu_bar},
                           {"W", post.w},
                           {"nu", post.nu}};
    report["point_estimates"] = {{"sigma_m", beam.sigma_m},
                                 {"p_prime", beam.p_prime},
                                 {"pi3", beam.pi3},
                                 {"pi4", beam.pi4},
                                 {"z_max", beam.z_max}};
  } else if (cfg.estimator == "thrun") {
    check(rbbm_thrun_fit(ds.h, nullptr, cfg.iters, &thrun, loglik.data(),
                         &n_iters),
          "fit failed");
    check(rbbm_fit_distances(ds.h, 1, nullptr, &thrun, nullptr, cfg.bins, 0.01,
                             &d1, &d2),
          "distance computation failed");
    report["params"] = {{"sigma_m", thrun.sigma_m},
                        {"z_hit", thrun.z_hit},
                        {"z_short", thrun.z_short},
                        {"z_max_w", thrun.z_max_w},
                        {"z_rand", thrun.z_rand},
                        {"lambda_short", thrun.lambda_short},
                        {"z_max", thrun.z_max}};
    loglik.resize(n_iters);
    report["loglik"] = loglik;
    report["iterations"] = n_iters;
  } else {
    throw CliError{kExitUsage, "unknown estimator: " + cfg.estimator};
  }

  report["z_star"] = z_star;
  report["d1_kl"] = d1;
  report["d2_hellinger"] = d2;
  write_text_file(cfg.out, report.dump(2) + "\n");

  // Fitted density on a uniform z grid for plotting.
  std::ostringstream curve;
  curve << "z,density\n";
  for (std::size_t i = 0; i <= cfg.curve_points; ++i) {
    const double z = cfg.z_max * static_cast<double>(i) /
                     static_cast<double>(cfg.curve_points);
    double v = 0.0;
    if (cfg.estimator == "ml")
      check(rbbm_density_eval(z, z_star, &beam, 0.01, &v), "density eval");
    else if (cfg.estimator == "vb")
      check(rbbm_vb_predictive_eval(z, z_star, &post, cfg.z_max, 0.01, &v),
            "density eval");
    else
      check(rbbm_thrun_density_eval(z, z_star, &thrun, 0.01, &v),
            "density eval");
    curve << fmt(z) << ',' << fmt(v) << '\n';
  }
  const std::string curve_path =
      cfg.curve_out.empty() ? cfg.out + ".curve.csv" : cfg.curve_out;
  write_text_file(curve_path, curve.str());

  json prov;
  prov["command"] = "learn";
  prov["dataset"] = cfg.dataset;
  prov["estimator"] = cfg.estimator;
  prov["z_max"] = cfg.z_max;
  prov["iters"] = cfg.iters;
  prov["bins"] = cfg.bins;
  prov["alpha0"] = cfg.alpha0;
  prov["out"] = cfg.out;
  prov["curve"] = curve_path;
  write_provenance(cfg.out, prov);
  return kExitOk;
}

// ---------------------------------------------------------------- validate

struct ValidateConfig {
  double p = 0.8, sigma_m = 0.15, pi3 = 0.2, pi4 = 0.02, z_max = 10.0;
  double z_star = 5.0;
  std::uint64_t draws = 100000;
  std::size_t bins = 100;
  std::uint64_t seed = 0;
  double hellinger_threshold = 0.05;
  std::string out;
  std::string identity_csv;
};

int run_validate(const ValidateConfig& cfg) {
  json report;
  bool all_pass = true;
  auto record = [&](const char* name, bool pass, const json& detail) {
    json r = detail;
    r["pass"] = pass;
    report["checks"][name] = r;
    all_pass = all_pass && pass;
  };

  // Occlusion-density normalization over a parameter sweep.
  {
    double worst = 0.0;
    for (int i = 0; i <= 9; ++i) {
      const double pp = 0.1 * i;
      for (double zs : {0.5, 5.0, 9.9}) {
        double integral = 0.0;
        check(rbbm_occl_integral(zs, pp, &integral), "quadrature failed");
        worst = std::max(worst, std::abs(integral - 1.0));
      }
    }
    record("occl_normalization", worst < 1e-9,
           {{"max_abs_error", worst}, {"threshold", 1e-9}});
  }

  // Combinatorial series identity, k x e sweep.
  {
    double worst = 0.0;
    std::ostringstream table;
    table << "k,e,partial_sum,closed_form,rel_error\n";
    for (std::uint64_t k = 0; k <= 10; ++k) {
      for (int i = 1; i <= 9; ++i) {
        const double e = 0.1 * i;
        double partial = 0.0, closed = 0.0;
        check(rbbm_sum_identity(k, e, 500, &partial, &closed),
              "identity evaluation failed");
        const double rel = std::abs(partial - closed) / std::abs(closed);
        worst = std::max(worst, rel);
        table << k << ',' << fmt(e) << ',' << fmt(partial) << ',' << fmt(closed)
              << ',' << fmt(rel) << '\n';
      }
    }
    if (!cfg.identity_csv.empty()) write_text_file(cfg.identity_csv, table.str());
    record("series_identity", worst < 1e-10,
           {{"max_rel_error", worst}, {"threshold", 1e-10}});
  }

  // Closed form against the numeric marginalization, left of the z* kink.
  {
    const double u = cfg.z_star / cfg.z_max;
    double pp = 0.0;
    check(rbbm_p_prime_from_env(u, cfg.p, &pp), "p_prime evaluation failed");
    rbbm_beam_params bp{cfg.sigma_m, pp, cfg.pi3, cfg.pi4, cfg.z_max};
    // Compare away from both non-smooth regions: the occlusion-support
    // boundary at z = 0 and the kink at z = z*.
    const double lo = 6.0 * cfg.sigma_m;
    const double hi = cfg.z_star - 6.0 * cfg.sigma_m;
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double z = lo + (hi - lo) * static_cast<double>(i) / 200.0;
      double closed = 0.0, numeric = 0.0;
      check(rbbm_density_eval(z, cfg.z_star, &bp, 0.01, &closed),
            "density eval failed");
      check(rbbm_density_exact_numeric(z, cfg.z_star, &bp, 1e-4, 0.01,
                                       &numeric),
            "numeric marginalization failed");
      worst = std::max(worst, std::abs(closed - numeric) / numeric);
    }
    record("closed_vs_numeric", worst < 0.01,
           {{"max_rel_deviation", worst}, {"threshold", 0.01}});
  }

  // Monte Carlo simulation of the generative network against the closed form.
  {
    rbbm_net_params np{cfg.p, cfg.sigma_m, cfg.pi3, cfg.pi4, cfg.z_max};
    double h = 0.0;
    check(rbbm_validate_monte_carlo(cfg.z_star, &np, cfg.draws, cfg.bins,
                                    cfg.seed, &h),
          "Monte Carlo validation failed");
    record("monte_carlo", h < cfg.hellinger_threshold,
           {{"hellinger", h}, {"threshold", cfg.hellinger_threshold}});
  }

  report["all_pass"] = all_pass;
  write_text_file(cfg.out, report.dump(2) + "\n");

  json prov;
  prov["command"] = "validate";
  prov["p"] = cfg.p;
  prov["sigma_m"] = cfg.sigma_m;
  prov["pi3"] = cfg.pi3;
  prov["pi4"] = cfg.pi4;
  prov["z_max"] = cfg.z_max;
  prov["z_star"] = cfg.z_star;
  prov["draws"] = cfg.draws;
  prov["bins"] = cfg.bins;
  prov["seed"] = cfg.seed;
  prov["out"] = cfg.out;
  write_provenance(cfg.out, prov);
  return all_pass ? kExitOk : kExitValidation;
}

// ----------------------------------------------------------------- scanmap

struct ScanmapConfig {
  std::string map_file;
  std::string scan_file;  // empty: simulate the ideal scan at the pose
  std::vector<double> pose{0.0, 0.0, 0.0};
  std::size_t beams = 181;
  double fov = M_PI;  // total field of view, radians
  double sigma_m = 0.03, p_prime = 0.0, pi3 = 0.0, pi4 = 0.0;
  double region_trans = 0.01, region_rot = 0.0872664625997164788;  // 5 deg
  std::uint64_t samples_l = 150;
  double smooth_c = 20.0;
  bool dynamic_mode = false;
  std::vector<double> grid{0.0, 1.0, 0.0, 1.0};
  std::size_t nx = 10, ny = 10;
  double heading = 0.0;
  std::size_t heading_count = 1;
  double heading_step = 0.0;
  std::vector<std::size_t> marginal_beams;
  std::size_t marginal_points = 400;
  std::uint64_t seed = 0;
  std::string out_map;
  std::string marginal_prefix;
};

std::vector<double> read_scan_file(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw CliError{kExitIo, "cannot open scan file: " + path};
  std::vector<double> z;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::getline(row, field, ',');
    try {
      z.push_back(std::stod(field));
    } catch (const std::exception&) {
      if (line_no == 1) continue;  // header
      throw CliError{kExitIo, path + ":" + std::to_string(line_no) +
                                  ": malformed number '" + field + "'"};
    }
  }
  if (z.size() != n)
    throw CliError{kExitUsage, "scan file has " + std::to_string(z.size()) +
                                   " beams, expected " + std::to_string(n)};
  return z;
}

int run_scanmap(const ScanmapConfig& cfg) {
  MapHandle map;
  check(rbbm_map_load_file(cfg.map_file.c_str(), &map.h), "map load failed");
  double z_max = 0.0;
  check(rbbm_map_z_max(map.h, &z_max), "map query failed");

  std::vector<double> angles(cfg.beams);
  for (std::size_t b = 0; b < cfg.beams; ++b)
    angles[b] = cfg.beams == 1
                    ? 0.0
                    : -0.5 * cfg.fov + cfg.fov * static_cast<double>(b) /
                                           static_cast<double>(cfg.beams - 1);

  rbbm_pose pose{cfg.pose[0], cfg.pose[1], cfg.pose[2]};
  std::vector<double> z;
  if (cfg.scan_file.empty()) {
    z.resize(cfg.beams);
    check(rbbm_map_simulate_scan(map.h, &pose, angles.data(), cfg.beams,
                                 z.data()),
          "scan simulation failed");
  } else {
    z = read_scan_file(cfg.scan_file, cfg.beams);
  }

  rbbm_beam_params bp{cfg.sigma_m, cfg.p_prime, cfg.pi3, cfg.pi4, z_max};
  rbbm_region region{cfg.region_trans, cfg.region_rot, 1.0, 1.0, 0};
  rbbm_scan_config sc{cfg.samples_l, cfg.smooth_c, cfg.dynamic_mode ? 1 : 0};

  if (!cfg.out_map.empty()) {
    rbbm_grid_spec grid{cfg.grid[0],  cfg.grid[1],        cfg.grid[2],
                        cfg.grid[3],  cfg.nx,             cfg.ny,
                        cfg.heading,  cfg.heading_count,  cfg.heading_step};
    std::vector<double> values(cfg.nx * cfg.ny, 0.0);
    check(rbbm_probability_map_eval(map.h, angles.data(), z.data(), cfg.beams,
                                    &bp, &region, &sc, &grid, cfg.seed, 0.01,
                                    values.data()),
          "probability map failed");
    std::ostringstream csv;
    csv << "y\\x";
    for (std::size_t ix = 0; ix < cfg.nx; ++ix) {
      const double x = cfg.nx == 1 ? cfg.grid[0]
                                   : cfg.grid[0] + (cfg.grid[1] - cfg.grid[0]) *
                                                       static_cast<double>(ix) /
                                                       static_cast<double>(cfg.nx - 1);
      csv << ',' << fmt(x);
    }
    csv << '\n';
    for (std::size_t iy = 0; iy < cfg.ny; ++iy) {
      const double y = cfg.ny == 1 ? cfg.grid[2]
                                   : cfg.grid[2] + (cfg.grid[3] - cfg.grid[2]) *
                                                       static_cast<double>(iy) /
                                                       static_cast<double>(cfg.ny - 1);
      csv << fmt(y);
      for (std::size_t ix = 0; ix < cfg.nx; ++ix)
        csv << ',' << fmt(values[iy * cfg.nx + ix]);
      csv << '\n';
    }
    write_text_file(cfg.out_map, csv.str());
  }

  if (!cfg.marginal_beams.empty()) {
    std::vector<double> zgrid(cfg.marginal_points + 1);
    for (std::size_t i = 0; i <= cfg.marginal_points; ++i)
      zgrid[i] = z_max * static_cast<double>(i) /
                 static_cast<double>(cfg.marginal_points);
    for (std::size_t b : cfg.marginal_beams) {
      std::vector<double> sample_vals(zgrid.size(), 0.0);
      std::vector<double> gauss_vals(zgrid.size(), 0.0);
      check(rbbm_beam_marginal_eval(map.h, &pose, angles.data(), cfg.beams, b,
                                    &bp, &region, &sc, zgrid.data(),
                                    zgrid.size(), cfg.seed, 0.01,
                                    sample_vals.data()),
            "beam marginal failed");
      check(rbbm_beam_marginal_gaussian_eval(
                map.h, &pose, angles.data(), cfg.beams, b, &bp, &region,
                cfg.samples_l, cfg.smooth_c, zgrid.data(), zgrid.size(),
                cfg.seed, gauss_vals.data()),
            "baseline marginal failed");
      for (int variant = 0; variant < 2; ++variant) {
        const auto& vals = variant == 0 ? sample_vals : gauss_vals;
        std::ostringstream csv;
        csv << "z,density\n";
        for (std::size_t i = 0; i < zgrid.size(); ++i)
          csv << fmt(zgrid[i]) << ',' << fmt(vals[i]) << '\n';
        const std::string path = cfg.marginal_prefix + "_beam" +
                                 std::to_string(b) +
                                 (variant == 0 ? "_sample.csv" : "_gauss.csv");
        write_text_file(path, csv.str());
      }
    }
  }

  const std::string primary =
      !cfg.out_map.empty() ? cfg.out_map : cfg.marginal_prefix + "_marginals";
  json prov;
  prov["command"] = "scanmap";
  prov["map"] = cfg.map_file;
  prov["scan_file"] = cfg.scan_file;
  prov["pose"] = cfg.pose;
  prov["beams"] = cfg.beams;
  prov["fov"] = cfg.fov;
  prov["sigma_m"] = cfg.sigma_m;
  prov["p_prime"] = cfg.p_prime;
  prov["pi3"] = cfg.pi3;
  prov["pi4"] = cfg.pi4;
  prov["region_trans"] = cfg.region_trans;
  prov["region_rot"] = cfg.region_rot;
  prov["samples_L"] = cfg.samples_l;
  prov["smooth_C"] = cfg.smooth_c;
  prov["dynamic"] = cfg.dynamic_mode;
  prov["grid"] = cfg.grid;
  prov["nx"] = cfg.nx;
  prov["ny"] = cfg.ny;
  prov["heading"] = cfg.heading;
  prov["seed"] = cfg.seed;
  prov["out_map"] = cfg.out_map;
  prov["marginal_beams"] = cfg.marginal_beams;
  write_provenance(primary, prov);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beam-model toolkit for range finders in dynamic environments"};
  app.require_subcommand(1);

  SimulateConfig sim;
  auto* s = app.add_subcommand("simulate",
                               "Draw a synthetic dataset from the generative "
                               "beam network");
  s->add_option("--z-star", sim.z_stars, "Expected ranges, meters")
      ->required()
      ->expected(-1);
  s->add_option("--per-range", sim.per_range, "Draws per expected range");
  s->add_option("--p", sim.p, "Appearance degree of unmodeled objects");
  s->add_option("--sigma-m", sim.sigma_m, "Measurement noise, meters");
  s->add_option("--pi3", sim.pi3, "Random-measurement weight");
  s->add_option("--pi4", sim.pi4, "Max-range weight");
  s->add_option("--z-max", sim.z_max, "Maximum range, meters");
  s->add_option("--seed", sim.seed, "Master RNG seed")->required();
  s->add_flag("--keep-causes", sim.keep_causes, "Record the sampled cause");
  s->add_option("--out", sim.out, "Output dataset CSV")->required();

  LearnConfig learn;
  auto* l = app.add_subcommand("learn", "Fit beam-model parameters to a dataset");
  l->add_option("--dataset", learn.dataset, "Training CSV (z,z_star)")
      ->required();
  l->add_option("--estimator", learn.estimator, "ml, vb or thrun")->required();
  l->add_option("--z-max", learn.z_max, "Maximum range, meters")->required();
  l->add_option("--iters", learn.iters, "EM iterations");
  l->add_option("--bins", learn.bins, "Histogram bins for fit distances");
  l->add_option("--alpha0", learn.alpha0, "Dirichlet prior weight (vb)");
  l->add_option("--sigma-m", learn.init_sigma, "Initial sigma_m (ml)");
  l->add_option("--p-prime", learn.init_p_prime, "Initial p' (ml)");
  l->add_option("--pi3", learn.init_pi3, "Initial pi3 (ml)");
  l->add_option("--pi4", learn.init_pi4, "Initial pi4 (ml)");
  l->add_option("--curve-points", learn.curve_points, "Density curve samples");
  l->add_option("--curve-out", learn.curve_out, "Density curve CSV path");
  l->add_option("--out", learn.out, "Fit report JSON")->required();

  ValidateConfig val;
  auto* v = app.add_subcommand("validate",
                               "Run the numeric and Monte Carlo model checks");
  v->add_option("--p", val.p, "Appearance degree");
  v->add_option("--sigma-m", val.sigma_m, "Measurement noise, meters");
  v->add_option("--pi3", val.pi3, "Random-measurement weight");
  v->add_option("--pi4", val.pi4, "Max-range weight");
  v->add_option("--z-max", val.z_max, "Maximum range, meters");
  v->add_option("--z-star", val.z_star, "Expected range, meters");
  v->add_option("--draws", val.draws, "Monte Carlo draws");
  v->add_option("--bins", val.bins, "Histogram bins");
  v->add_option("--seed", val.seed, "Master RNG seed")->required();
  v->add_option("--hellinger-threshold", val.hellinger_threshold,
                "Monte Carlo pass threshold");
  v->add_option("--identity-csv", val.identity_csv,
                "Where to write the series-identity sweep table");
  v->add_option("--out", val.out, "Validation report JSON")->required();

  ScanmapConfig sm;
  auto* m = app.add_subcommand(
      "scanmap", "Scan-likelihood probability maps and beam marginals");
  m->add_option("--map", sm.map_file, "Map JSON")->required();
  m->add_option("--scan-file", sm.scan_file,
                "Measured scan CSV (one range per line); omitted: simulate");
  m->add_option("--pose", sm.pose, "Sensor pose x y heading")->expected(3);
  m->add_option("--beams", sm.beams, "Number of beams");
  m->add_option("--fov", sm.fov, "Total field of view, radians");
  m->add_option("--sigma-m", sm.sigma_m, "Measurement noise, meters");
  m->add_option("--p-prime", sm.p_prime, "Occlusion probability");
  m->add_option("--pi3", sm.pi3, "Random-measurement weight");
  m->add_option("--pi4", sm.pi4, "Max-range weight");
  m->add_option("--region-trans", sm.region_trans,
                "Pose region translational scale, meters");
  m->add_option("--region-rot", sm.region_rot,
                "Pose region rotational scale, radians");
  m->add_option("--samples-L", sm.samples_l, "Simulated scans per evaluation");
  m->add_option("--smooth-C", sm.smooth_c, "Smoothing constant");
  m->add_flag("--dynamic", sm.dynamic_mode, "Full-mixture beam densities");
  m->add_option("--grid", sm.grid, "Pose grid bounds x0 x1 y0 y1")->expected(4);
  m->add_option("--nx", sm.nx, "Grid cells in x");
  m->add_option("--ny", sm.ny, "Grid cells in y");
  m->add_option("--heading", sm.heading, "Grid heading, radians");
  m->add_option("--heading-count", sm.heading_count, "Heading fan size");
  m->add_option("--heading-step", sm.heading_step, "Heading fan step, radians");
  m->add_option("--marginal-beam", sm.marginal_beams,
                "Beam indices to emit marginals for");
  m->add_option("--marginal-points", sm.marginal_points,
                "Marginal curve samples");
  m->add_option("--marginal-prefix", sm.marginal_prefix,
                "Output prefix for marginal CSVs");
  m->add_option("--seed", sm.seed, "Master RNG seed")->required();
  m->add_option("--out-map", sm.out_map, "Probability map CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (s->parsed()) return run_simulate(sim);
    if (l->parsed()) return run_learn(learn);
    if (v->parsed()) return run_validate(val);
    if (m->parsed()) {
      if (sm.out_map.empty() && sm.marginal_beams.empty())
        throw CliError{kExitUsage,
                       "scanmap needs --out-map and/or --marginal-beam"};
      if (!sm.marginal_beams.empty() && sm.marginal_prefix.empty())
        throw CliError{kExitUsage, "--marginal-beam requires --marginal-prefix"};
      return run_scanmap(sm);
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}
