// Copyright 2026 The ccmabeam Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ccma/io.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "ccma/error.hpp"

namespace ccma {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<double> default_frequencies() {
  std::vector<double> f;
  for (int k = 1; k <= 15; ++k) f.push_back(500.0 * k);
  return f;
}

void RunConfig::validate() const {
  array.validate();
  if (!(doa_elevation_deg >= 0.0 && doa_elevation_deg <= 90.0))
    throw ValidationError("doa.elevation_deg", "must lie in [0, 90]");
  if (!(doa_azimuth_deg >= 0.0 && doa_azimuth_deg < 360.0))
    throw ValidationError("doa.azimuth_deg", "must lie in [0, 360)");
  if (frequencies.empty()) throw ValidationError("frequencies", "must list at least one frequency");
  std::set<double> seen;
  for (double f : frequencies) {
    if (!(f > 0.0 && f <= 0.5 * array.sample_rate))
      throw ValidationError("frequencies", fmt::format("{} Hz is outside (0, fs/2]", f));
    if (!seen.insert(f).second) throw ValidationError("frequencies", fmt::format("{} Hz is listed twice", f));
  }
  if (variant == LossVariant::kL3 && frequencies.size() < 2)
    throw ValidationError("frequencies", "L3 needs at least two bands");
  loss().validate();
  if (!(grid_deg > 0.0 && grid_deg <= 10.0)) throw ValidationError("grid_deg", "must lie in (0, 10]");
  const double steps = 360.0 / grid_deg;
  if (std::abs(steps - std::round(steps)) > 1e-6 * steps) throw ValidationError("grid_deg", "must divide 360");
  if (!(mask_k > 0.0)) throw ValidationError("beamwidth.mask_k", "must be > 0");
  if (!(mask_min_deg > 0.0 && mask_max_deg >= mask_min_deg))
    throw ValidationError("beamwidth.mask_min_deg", "need 0 < mask_min_deg <= mask_max_deg");
  if (!(level_drop_db > 0.0)) throw ValidationError("beamwidth.level_drop_db", "must be > 0");
  if (iterations < 1) throw ValidationError("optimizer.iterations", "must be >= 1");
  if (patience < 1) throw ValidationError("optimizer.patience", "must be >= 1");
  for (double f : beampattern_frequencies)
    if (!seen.contains(f))
      throw ValidationError("beampattern_frequencies", fmt::format("{} Hz is not one of the design bands", f));
}

Direction RunConfig::doa() const { return Direction::from_degrees(doa_elevation_deg, doa_azimuth_deg); }

LossConfig RunConfig::loss() const {
  LossConfig c;
  c.variant = variant;
  c.target_theta = deg_to_rad(target_theta_deg);
  c.target_phi = deg_to_rad(target_phi_deg);
  c.alpha = alpha;
  c.lambda1 = lambda1;
  c.lambda2 = lambda2;
  c.lambda3 = lambda3;
  c.broaden_tolerance = deg_to_rad(broaden_tolerance_deg);
  return c;
}

MetricOptions RunConfig::metric_options() const {
  MetricOptions o;
  o.grid_resolution = deg_to_rad(grid_deg);
  o.level_drop_db = level_drop_db;
  o.schedule = {mask_k, deg_to_rad(mask_min_deg), deg_to_rad(mask_max_deg)};
  return o;
}

OptimizeOptions RunConfig::optimize_options() const {
  OptimizeOptions o;
  o.iterations = iterations;
  o.seed = seed;
  o.patience = patience;
  return o;
}

std::vector<double> RunConfig::pattern_frequencies() const {
  return beampattern_frequencies.empty() ? frequencies : beampattern_frequencies;
}

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ValidationError(where.empty() ? "config" : where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError(where.empty() ? key : where + "." + key, "unknown field");
  }
}

template <class T>
void read(const json& j, const char* key, const std::string& field, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(field, "has the wrong type");
  }
}

}  // namespace

RunConfig config_from_json(const json& j) {
  RunConfig c;
  check_keys(j, "", {"array", "doa", "frequencies", "loss", "grid_deg", "beamwidth", "optimizer",
                     "beampattern_frequencies", "output_dir", "run"});
  if (j.contains("array")) {
    const json& a = j["array"];
    check_keys(a, "array", {"ring_radii", "sample_rate", "sound_speed"});
    read(a, "ring_radii", "array.ring_radii", c.array.ring_radii);
    read(a, "sample_rate", "array.sample_rate", c.array.sample_rate);
    read(a, "sound_speed", "array.sound_speed", c.array.sound_speed);
  }
  if (j.contains("doa")) {
    const json& d = j["doa"];
    check_keys(d, "doa", {"elevation_deg", "azimuth_deg"});
    read(d, "elevation_deg", "doa.elevation_deg", c.doa_elevation_deg);
    read(d, "azimuth_deg", "doa.azimuth_deg", c.doa_azimuth_deg);
  }
  read(j, "frequencies", "frequencies", c.frequencies);
  if (j.contains("loss")) {
    const json& l = j["loss"];
    check_keys(l, "loss", {"variant", "target_theta_deg", "target_phi_deg", "alpha", "lambda1", "lambda2", "lambda3",
                           "broaden_tolerance_deg"});
    std::string variant(to_string(c.variant));
    read(l, "variant", "loss.variant", variant);
    c.variant = loss_variant_from_string(variant);
    read(l, "target_theta_deg", "loss.target_theta_deg", c.target_theta_deg);
    read(l, "target_phi_deg", "loss.target_phi_deg", c.target_phi_deg);
    read(l, "alpha", "loss.alpha", c.alpha);
    read(l, "lambda1", "loss.lambda1", c.lambda1);
    read(l, "lambda2", "loss.lambda2", c.lambda2);
    read(l, "lambda3", "loss.lambda3", c.lambda3);
    read(l, "broaden_tolerance_deg", "loss.broaden_tolerance_deg", c.broaden_tolerance_deg);
  }
  read(j, "grid_deg", "grid_deg", c.grid_deg);
  if (j.contains("beamwidth")) {
    const json& b = j["beamwidth"];
    check_keys(b, "beamwidth", {"mask_k", "mask_min_deg", "mask_max_deg", "level_drop_db"});
    read(b, "mask_k", "beamwidth.mask_k", c.mask_k);
    read(b, "mask_min_deg", "beamwidth.mask_min_deg", c.mask_min_deg);
    read(b, "mask_max_deg", "beamwidth.mask_max_deg", c.mask_max_deg);
    read(b, "level_drop_db", "beamwidth.level_drop_db", c.level_drop_db);
  }
  if (j.contains("optimizer")) {
    const json& o = j["optimizer"];
    check_keys(o, "optimizer", {"iterations", "seed", "patience"});
    read(o, "iterations", "optimizer.iterations", c.iterations);
    read(o, "seed", "optimizer.seed", c.seed);
    read(o, "patience", "optimizer.patience", c.patience);
  }
  read(j, "beampattern_frequencies", "beampattern_frequencies", c.beampattern_frequencies);
  read(j, "output_dir", "output_dir", c.output_dir);
  c.validate();
  return c;
}

json config_to_json(const RunConfig& c) {
  return {
      {"array",
       {{"ring_radii", c.array.ring_radii}, {"sample_rate", c.array.sample_rate}, {"sound_speed", c.array.sound_speed}}},
      {"doa", {{"elevation_deg", c.doa_elevation_deg}, {"azimuth_deg", c.doa_azimuth_deg}}},
      {"frequencies", c.frequencies},
      {"loss",
       {{"variant", std::string(to_string(c.variant))},
        {"target_theta_deg", c.target_theta_deg},
        {"target_phi_deg", c.target_phi_deg},
        {"alpha", c.alpha},
        {"lambda1", c.lambda1},
        {"lambda2", c.lambda2},
        {"lambda3", c.lambda3},
        {"broaden_tolerance_deg", c.broaden_tolerance_deg}}},
      {"grid_deg", c.grid_deg},
      {"beamwidth",
       {{"mask_k", c.mask_k},
        {"mask_min_deg", c.mask_min_deg},
        {"mask_max_deg", c.mask_max_deg},
        {"level_drop_db", c.level_drop_db}}},
      {"optimizer", {{"iterations", c.iterations}, {"seed", c.seed}, {"patience", c.patience}}},
      {"beampattern_frequencies", c.beampattern_frequencies},
      {"output_dir", c.output_dir},
  };
}

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path.string(), "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string(), e.what());
  }
}

void save_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError(path.string(), "cannot write file");
  out << j.dump(2) << '\n';
}

RunConfig load_config(const fs::path& path) { return config_from_json(load_json(path)); }

DesignParams load_params(const fs::path& path) { return params_from_json(load_json(path)); }

SweepSpec sweep_from_json(const json& j) {
  static const std::set<std::string> known{"alpha", "lambda1", "lambda2", "lambda3"};
  auto check_name = [](const std::string& name) {
    if (!known.contains(name)) throw ValidationError("sweep." + name, "unknown sweep parameter");
  };
  check_keys(j, "sweep", {"mode", "parameters", "points"});
  const std::string mode = j.value("mode", std::string("product"));
  SweepSpec spec;
  if (mode == "product") {
    if (!j.contains("parameters") || !j["parameters"].is_object() || j["parameters"].empty())
      throw ValidationError("sweep.parameters", "must name at least one parameter");
    spec.points.emplace_back();
    for (const auto& [name, values] : j["parameters"].items()) {
      check_name(name);
      if (!values.is_array() || values.empty())
        throw ValidationError("sweep.parameters." + name, "must be a non-empty list of values");
      std::vector<std::map<std::string, double>> expanded;
      for (const auto& base : spec.points)
        for (const auto& v : values) {
          if (!v.is_number()) throw ValidationError("sweep.parameters." + name, "values must be numbers");
          auto point = base;
          point[name] = v.get<double>();
          expanded.push_back(std::move(point));
        }
      spec.points = std::move(expanded);
    }
  } else if (mode == "tuples") {
    if (!j.contains("points") || !j["points"].is_array() || j["points"].empty())
      throw ValidationError("sweep.points", "must be a non-empty list");
    for (const auto& p : j["points"]) {
      if (!p.is_object() || p.empty()) throw ValidationError("sweep.points", "each point must set a parameter");
      std::map<std::string, double> point;
      for (const auto& [name, v] : p.items()) {
        check_name(name);
        if (!v.is_number()) throw ValidationError("sweep.points." + name, "values must be numbers");
        point[name] = v.get<double>();
      }
      spec.points.push_back(std::move(point));
    }
  } else {
    throw ValidationError("sweep.mode", "expected 'product' or 'tuples'");
  }
  return spec;
}

void apply_sweep_point(RunConfig& config, const std::map<std::string, double>& point) {
  for (const auto& [name, value] : point) {
    if (name == "alpha") config.alpha = value;
    else if (name == "lambda1") config.lambda1 = value;
    else if (name == "lambda2") config.lambda2 = value;
    else if (name == "lambda3") config.lambda3 = value;
    else throw ValidationError("sweep." + name, "unknown sweep parameter");
  }
}

std::string frequency_label(double frequency) {
  if (frequency == std::round(frequency)) return fmt::format("{:.0f}", frequency);
  return fmt::format("{}", frequency);
}

}  // namespace ccma
