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

#ifndef CCMA_IO_HPP
#define CCMA_IO_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccma/geometry.hpp"
#include "ccma/loss.hpp"
#include "ccma/metrics.hpp"
#include "ccma/optimizer.hpp"
#include "ccma/wavefield.hpp"
#include "ccma/weighting.hpp"

namespace ccma {

/// 500 Hz to 7.5 kHz in 500 Hz steps.
std::vector<double> default_frequencies();

/// Everything needed to reproduce a run. Angles are degrees here and
/// radians everywhere past this boundary.
struct RunConfig {
  ArrayConfig array{{0.0, 0.05, 0.10, 0.15, 0.20}, 16000.0, kDefaultSoundSpeed};
  double doa_elevation_deg = 45.0;
  double doa_azimuth_deg = 45.0;
  std::vector<double> frequencies = default_frequencies();
  LossVariant variant = LossVariant::kL1;
  double target_theta_deg = 40.0;
  double target_phi_deg = 40.0;
  double alpha = 1.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double broaden_tolerance_deg = 1.0;
  double grid_deg = 1.0;
  double mask_k = 0.8;
  double mask_min_deg = 4.0;
  double mask_max_deg = 30.0;
  double level_drop_db = kBeamwidthDropDb;
  int iterations = 2000;
  std::uint64_t seed = 0;
  int patience = 200;
  /// Frequencies that get a beampattern grid; empty means every band.
  std::vector<double> beampattern_frequencies;
  std::string output_dir = "out";

  /// Throws ValidationError naming the field.
  void validate() const;

  Direction doa() const;
  LossConfig loss() const;
  MetricOptions metric_options() const;
  OptimizeOptions optimize_options() const;
  std::vector<double> pattern_frequencies() const;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);
RunConfig load_config(const std::filesystem::path& path);

DesignParams load_params(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json load_json(const std::filesystem::path& path);

/// Names accepted in a sweep: alpha, lambda1, lambda2, lambda3.
struct SweepSpec {
  /// Each point assigns a value to one or more parameters.
  std::vector<std::map<std::string, double>> points;
};

/// {"mode": "product", "parameters": {"alpha": [...], ...}} expands the
/// cross product in key order; {"mode": "tuples", "points": [{...}, ...]}
/// lists points explicitly.
SweepSpec sweep_from_json(const nlohmann::json& j);
void apply_sweep_point(RunConfig& config, const std::map<std::string, double>& point);

/// Frequency as it appears in artifact file names, e.g. 1000 or 1234.5.
std::string frequency_label(double frequency);

}  // namespace ccma

#endif  // CCMA_IO_HPP
