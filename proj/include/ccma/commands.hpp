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

#ifndef CCMA_COMMANDS_HPP
#define CCMA_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ccma/baselines.hpp"
#include "ccma/design_problem.hpp"
#include "ccma/io.hpp"
#include "ccma/optimizer.hpp"

namespace ccma {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

ArrayGeometry make_geometry(const RunConfig& config);
DesignProblem make_problem(const RunConfig& config);
DesignProblem make_problem(const RunConfig& config, const std::vector<double>& frequencies);

/// Writes beampattern_<f>.csv for each requested band of `params`.
void write_beampatterns(const RunConfig& config, const DesignParams& params, const std::filesystem::path& out_dir,
                        const std::string& prefix = "beampattern");

/// Optimizes and writes params.json, metrics.csv, run_record.csv,
/// geometry.json, beampattern_<f>.csv and manifest.json.
DesignResult run_design(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

/// Metrics and beampatterns of stored parameters.
MetricCurves run_eval(const RunConfig& config, const DesignParams& params, const std::filesystem::path& out_dir,
                      std::ostream& log);

/// Metrics and beampatterns of a fixed baseline beamformer on the config bands.
MetricCurves run_baseline_eval(const RunConfig& config, BaselineKind kind, const std::filesystem::path& out_dir,
                               std::ostream& log);

struct SweepPointResult {
  std::map<std::string, double> point;
  std::string directory;
  MetricCurves metrics;
  double loss = 0.0;
  std::string stop_reason;
};

/// One design per sweep point, `workers` at a time, each into its own
/// subdirectory, followed by summary.csv in `out_dir`.
std::vector<SweepPointResult> run_sweep(const RunConfig& config, const SweepSpec& sweep,
                                        const std::filesystem::path& out_dir, int workers, std::ostream& log);

/// Baseline against designed parameters band by band. Writes compare.csv
/// and beampatterns of both filters.
void run_compare(const RunConfig& config, const DesignParams& params, BaselineKind kind,
                 const std::filesystem::path& out_dir, std::ostream& log);

/// Uniform ring weights in (-1, 1) and widths log-uniform in [0.2, 2].
std::vector<double> random_interior_point(const DesignProblem& problem, std::mt19937_64& rng);

struct GradcheckSummary {
  double max_error = 0.0;
  std::size_t points = 0;
  std::size_t excluded_coordinates = 0;
  std::vector<double> point_errors;
};

/// Reverse-mode gradient against central differences at random points.
GradcheckSummary run_gradcheck(const DesignProblem& problem, std::size_t points, std::uint64_t seed,
                               std::ostream& log, double relative_step = 1e-4);

}  // namespace ccma

#endif  // CCMA_COMMANDS_HPP
