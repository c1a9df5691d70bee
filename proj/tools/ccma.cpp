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

// ccma: design, evaluate and compare CCMA beamformers.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ccma/commands.hpp"
#include "ccma/error.hpp"
#include "ccma/version.hpp"

namespace {

namespace fs = std::filesystem;

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> grid_deg;
  int workers = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Run configuration (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "Output directory (overrides output_dir)");
  cmd->add_option("--seed", c.seed, "Optimizer seed (overrides optimizer.seed)");
  cmd->add_option("--workers", c.workers, "Parallel workers")->check(CLI::PositiveNumber);
  cmd->add_option("--grid-deg", c.grid_deg, "Angular grid resolution in degrees (overrides grid_deg)");
}

ccma::RunConfig resolve(const Common& c) {
  ccma::RunConfig config = c.config.empty() ? ccma::RunConfig{} : ccma::load_config(c.config);
  if (c.seed) config.seed = *c.seed;
  if (c.grid_deg) config.grid_deg = *c.grid_deg;
  if (!c.out.empty()) config.output_dir = c.out;
  config.validate();
  return config;
}

// Two rings, three bands, every loss term active.
ccma::RunConfig gradcheck_toy() {
  ccma::RunConfig c;
  c.array.ring_radii = {0.05, 0.20};
  c.frequencies = {2000.0, 4000.0, 6000.0};
  c.variant = ccma::LossVariant::kL3;
  c.alpha = 0.5;
  c.lambda1 = 1.0;
  c.lambda2 = 1.0;
  c.lambda3 = 0.01;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concentric circular microphone array beamformer design"};
  app.set_version_flag("--version", std::string(ccma::kVersion));
  app.require_subcommand(1);

  Common common;
  auto* design = app.add_subcommand("design", "Optimize ring weights and window widths");
  add_common(design, common);

  std::string params_path;
  std::string baseline;
  auto* eval = app.add_subcommand("eval", "Evaluate stored parameters or a baseline");
  add_common(eval, common);
  auto* eval_params = eval->add_option("--params", params_path, "Parameters (JSON)")->check(CLI::ExistingFile);
  eval->add_option("--baseline", baseline, "Baseline beamformer: das")->excludes(eval_params);

  std::string sweep_path;
  auto* sweep = app.add_subcommand("sweep", "Design at every point of a loss-parameter sweep");
  add_common(sweep, common);
  sweep->add_option("--sweep", sweep_path, "Sweep specification (JSON)")->required()->check(CLI::ExistingFile);

  std::string compare_baseline = "das";
  auto* compare = app.add_subcommand("compare", "Compare designed parameters with a baseline");
  add_common(compare, common);
  compare->add_option("--params", params_path, "Parameters (JSON); designs first when omitted")
      ->check(CLI::ExistingFile);
  compare->add_option("--baseline", compare_baseline, "Baseline beamformer")->capture_default_str();

  std::size_t points = 20;
  double tolerance = 1e-4;
  auto* gradcheck = app.add_subcommand("gradcheck", "Check reverse-mode gradients against finite differences");
  add_common(gradcheck, common);
  gradcheck->add_option("--points", points, "Random interior points")->capture_default_str();
  gradcheck->add_option("--tolerance", tolerance, "Maximum relative error")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ccma::kExitOk : ccma::kExitValidation;
  }

  try {
    if (design->parsed()) {
      const ccma::RunConfig config = resolve(common);
      ccma::run_design(config, config.output_dir, std::cout);
    } else if (eval->parsed()) {
      const ccma::RunConfig config = resolve(common);
      if (!params_path.empty()) {
        ccma::run_eval(config, ccma::load_params(params_path), config.output_dir, std::cout);
      } else if (!baseline.empty()) {
        ccma::run_baseline_eval(config, ccma::baseline_from_string(baseline), config.output_dir, std::cout);
      } else {
        throw ccma::ValidationError("eval", "needs --params or --baseline");
      }
    } else if (sweep->parsed()) {
      const ccma::RunConfig config = resolve(common);
      ccma::run_sweep(config, ccma::sweep_from_json(ccma::load_json(sweep_path)), config.output_dir,
                      common.workers, std::cout);
    } else if (compare->parsed()) {
      const ccma::RunConfig config = resolve(common);
      const auto kind = ccma::baseline_from_string(compare_baseline);
      const fs::path out = config.output_dir;
      const ccma::DesignParams params = params_path.empty()
                                            ? ccma::run_design(config, out / "design", std::cout).params
                                            : ccma::load_params(params_path);
      ccma::run_compare(config, params, kind, out, std::cout);
    } else if (gradcheck->parsed()) {
      ccma::RunConfig config = common.config.empty() ? gradcheck_toy() : resolve(common);
      if (common.seed) config.seed = *common.seed;
      if (common.grid_deg) config.grid_deg = *common.grid_deg;
      config.validate();
      const auto summary = ccma::run_gradcheck(ccma::make_problem(config), points, config.seed, std::cout);
      fmt::print("max relative error {:.3e} over {} points (tolerance {:.1e})\n", summary.max_error, summary.points,
                 tolerance);
      if (!(summary.max_error <= tolerance)) return ccma::kExitNumerical;
    }
  } catch (const ccma::ArgumentError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return ccma::kExitValidation;
  } catch (const ccma::NumericalError& e) {
    fmt::print(stderr, "numerical failure: {}\n", e.what());
    return ccma::kExitNumerical;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return ccma::kExitValidation;
  }
  return ccma::kExitOk;
}
