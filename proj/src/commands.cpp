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

#include "ccma/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ccma/error.hpp"
#include "ccma/gradcheck.hpp"
#include "ccma/version.hpp"

namespace ccma {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError(path.string(), "cannot write file");
  return out;
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ValidationError(dir.string(), "cannot create output directory");
}

void write_pattern(const RunConfig& config, const ArrayGeometry& geometry, const Eigen::VectorXcd& filter,
                   double frequency, const fs::path& path) {
  const MetricOptions options = config.metric_options();
  const AngularGrid grid =
      AngularGrid::make(options.grid_resolution, config.doa(), options.elevation_min, options.elevation_max);
  auto out = open_output(path);
  write_beampattern_csv(out, grid, beampattern_grid(filter, geometry, frequency, grid));
}

std::vector<double> requested_patterns(const RunConfig& config, const std::vector<double>& available) {
  if (config.beampattern_frequencies.empty()) return available;
  for (double f : config.beampattern_frequencies)
    if (std::find(available.begin(), available.end(), f) == available.end())
      throw ValidationError("beampattern_frequencies", fmt::format("{} Hz is not one of the bands", f));
  return config.beampattern_frequencies;
}

void log_metrics(std::ostream& log, const MetricCurves& m) {
  fmt::print(log, "{:>10} {:>8} {:>8} {:>8} {:>8}\n", "freq_Hz", "DF_dB", "WNG_dB", "theta", "phi");
  for (std::size_t i = 0; i < m.size(); ++i)
    fmt::print(log, "{:>10.1f} {:>8.2f} {:>8.2f} {:>8.2f} {:>8.2f}\n", m.frequencies[i], to_db(m.df[i]),
               to_db(m.wng[i]), rad_to_deg(m.theta[i]), rad_to_deg(m.phi[i]));
}

// Metrics only; L3 needs two bands, which a single-band params file cannot supply.
LossConfig eval_loss(const RunConfig& config, std::size_t bands) {
  LossConfig loss = config.loss();
  if (loss.variant == LossVariant::kL3 && bands < 2) loss.variant = LossVariant::kL1;
  return loss;
}

double mean(const std::vector<double>& xs) { return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size(); }

double stddev(const std::vector<double>& xs) {
  const double mu = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - mu) * (x - mu);
  return std::sqrt(s / xs.size());
}

std::vector<double> db(const std::vector<double>& xs) {
  std::vector<double> out(xs.size());
  std::transform(xs.begin(), xs.end(), out.begin(), to_db);
  return out;
}

std::vector<double> deg(const std::vector<double>& xs) {
  std::vector<double> out(xs.size());
  std::transform(xs.begin(), xs.end(), out.begin(), rad_to_deg);
  return out;
}

}  // namespace

ArrayGeometry make_geometry(const RunConfig& config) { return build_geometry(config.array); }

DesignProblem make_problem(const RunConfig& config) { return make_problem(config, config.frequencies); }

DesignProblem make_problem(const RunConfig& config, const std::vector<double>& frequencies) {
  return DesignProblem(make_geometry(config), config.doa(), frequencies, eval_loss(config, frequencies.size()),
                       config.metric_options());
}

void write_beampatterns(const RunConfig& config, const DesignParams& params, const fs::path& out_dir,
                        const std::string& prefix) {
  const ArrayGeometry geometry = make_geometry(config);
  for (double f : requested_patterns(config, params.frequencies)) {
    const auto b = static_cast<std::size_t>(
        std::find(params.frequencies.begin(), params.frequencies.end(), f) - params.frequencies.begin());
    const Eigen::VectorXcd h = assemble_filter(geometry, params.bands[b], f, config.doa());
    write_pattern(config, geometry, h, f, out_dir / fmt::format("{}_{}.csv", prefix, frequency_label(f)));
  }
}

DesignResult run_design(const RunConfig& config, const fs::path& out_dir, std::ostream& log) {
  config.validate();
  prepare_dir(out_dir);
  const DesignProblem problem = make_problem(config);
  fmt::print(log, "design: {} bands, {} rings, {} mics, loss {}\n", problem.band_count(), problem.ring_count(),
             problem.geometry().total_mics(), to_string(config.variant));
  DesignResult result = optimize(problem, config.optimize_options());
  fmt::print(log, "stopped after {} iterations ({}), loss {:.6f}\n", result.record.iteration_count(),
             result.record.stop_reason, result.loss);
  log_metrics(log, result.metrics);

  save_json(out_dir / "params.json", params_to_json(result.params));
  save_json(out_dir / "geometry.json", geometry_to_json(problem.geometry()));
  {
    auto out = open_output(out_dir / "metrics.csv");
    write_metrics_csv(out, result.metrics);
  }
  {
    auto out = open_output(out_dir / "run_record.csv");
    write_run_record_csv(out, result.record);
  }
  write_beampatterns(config, result.params, out_dir);

  json manifest = config_to_json(config);
  manifest["run"] = {{"command", "design"},
                     {"version", kVersion},
                     {"iterations", result.record.iteration_count()},
                     {"stop_reason", result.record.stop_reason},
                     {"final_loss", result.loss}};
  save_json(out_dir / "manifest.json", manifest);
  return result;
}

MetricCurves run_eval(const RunConfig& config, const DesignParams& params, const fs::path& out_dir,
                      std::ostream& log) {
  if (params.bands.empty()) throw ValidationError("params.bands", "must contain at least one band");
  prepare_dir(out_dir);
  const DesignProblem problem = make_problem(config, params.frequencies);
  const MetricCurves curves = problem.metric_curves(params);
  log_metrics(log, curves);
  {
    auto out = open_output(out_dir / "metrics.csv");
    write_metrics_csv(out, curves);
  }
  write_beampatterns(config, params, out_dir);
  return curves;
}

MetricCurves run_baseline_eval(const RunConfig& config, BaselineKind kind, const fs::path& out_dir,
                               std::ostream& log) {
  config.validate();
  prepare_dir(out_dir);
  const ArrayGeometry geometry = make_geometry(config);
  const MetricCurves curves =
      baseline_curves(kind, geometry, config.doa(), config.frequencies, config.metric_options());
  fmt::print(log, "baseline {}\n", to_string(kind));
  log_metrics(log, curves);
  {
    auto out = open_output(out_dir / "metrics.csv");
    write_metrics_csv(out, curves);
  }
  for (double f : requested_patterns(config, config.frequencies))
    write_pattern(config, geometry, baseline_filter(kind, geometry, f, config.doa()), f,
                  out_dir / fmt::format("beampattern_{}.csv", frequency_label(f)));
  return curves;
}

std::vector<SweepPointResult> run_sweep(const RunConfig& config, const SweepSpec& sweep, const fs::path& out_dir,
                                        int workers, std::ostream& log) {
  if (sweep.points.empty()) throw ValidationError("sweep", "no points to run");
  if (workers < 1) throw ValidationError("workers", "must be >= 1");
  RunConfig base = config;
  base.variant = LossVariant::kL3;
  std::vector<RunConfig> configs;
  for (const auto& point : sweep.points) {
    RunConfig c = base;
    apply_sweep_point(c, point);
    c.validate();
    configs.push_back(std::move(c));
  }
  prepare_dir(out_dir);

  std::vector<SweepPointResult> results(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        SweepPointResult& r = results[i];
        r.point = sweep.points[i];
        r.directory = fmt::format("point_{:03d}", i);
        std::ostringstream quiet;
        const DesignResult d = run_design(configs[i], out_dir / r.directory, quiet);
        r.metrics = d.metrics;
        r.loss = d.loss;
        r.stop_reason = d.record.stop_reason;
        std::lock_guard lock(log_mutex);
        fmt::print(log, "{}: loss {:.6f} ({})\n", r.directory, r.loss, r.stop_reason);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(workers), configs.size());
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::set<std::string> names;
  for (const auto& p : sweep.points)
    for (const auto& [name, value] : p) names.insert(name);
  auto out = open_output(out_dir / "summary.csv");
  fmt::print(out, "directory");
  for (const auto& name : names) fmt::print(out, ",{}", name);
  fmt::print(out, ",loss,stop_reason,mean_DF_dB,std_DF_dB,mean_WNG_dB,std_WNG_dB,mean_theta_deg,mean_phi_deg\n");
  for (const auto& r : results) {
    fmt::print(out, "{}", r.directory);
    for (const auto& name : names) {
      const auto it = r.point.find(name);
      const double value = it == r.point.end() ? json(config_to_json(base)["loss"][name]).get<double>() : it->second;
      fmt::print(out, ",{}", value);
    }
    const auto df = db(r.metrics.df);
    const auto wng = db(r.metrics.wng);
    fmt::print(out, ",{:.6f},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.loss, r.stop_reason, mean(df),
               stddev(df), mean(wng), stddev(wng), mean(deg(r.metrics.theta)), mean(deg(r.metrics.phi)));
  }
  return results;
}

void run_compare(const RunConfig& config, const DesignParams& params, BaselineKind kind, const fs::path& out_dir,
                 std::ostream& log) {
  prepare_dir(out_dir);
  const DesignProblem problem = make_problem(config, params.frequencies);
  const MetricCurves designed = problem.metric_curves(params);
  const MetricCurves baseline =
      baseline_curves(kind, problem.geometry(), config.doa(), params.frequencies, config.metric_options());
  const std::string name(to_string(kind));

  auto out = open_output(out_dir / "compare.csv");
  fmt::print(out,
             "frequency,DF_dB_{0},DF_dB_designed,WNG_dB_{0},WNG_dB_designed,theta_deg_{0},theta_deg_designed,"
             "phi_deg_{0},phi_deg_designed\n",
             name);
  fmt::print(log, "{:>10} {:>16} {:>16} {:>16} {:>16}\n", "freq_Hz", "DF_dB", "WNG_dB", "theta", "phi");
  for (std::size_t i = 0; i < designed.size(); ++i) {
    fmt::print(out, "{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", designed.frequencies[i],
               to_db(baseline.df[i]), to_db(designed.df[i]), to_db(baseline.wng[i]), to_db(designed.wng[i]),
               rad_to_deg(baseline.theta[i]), rad_to_deg(designed.theta[i]), rad_to_deg(baseline.phi[i]),
               rad_to_deg(designed.phi[i]));
    fmt::print(log, "{:>10.1f} {:>7.2f} / {:<6.2f} {:>7.2f} / {:<6.2f} {:>7.2f} / {:<6.2f} {:>7.2f} / {:<6.2f}\n",
               designed.frequencies[i], to_db(baseline.df[i]), to_db(designed.df[i]), to_db(baseline.wng[i]),
               to_db(designed.wng[i]), rad_to_deg(baseline.theta[i]), rad_to_deg(designed.theta[i]),
               rad_to_deg(baseline.phi[i]), rad_to_deg(designed.phi[i]));
  }
  write_beampatterns(config, params, out_dir, "beampattern_designed");
  for (double f : requested_patterns(config, params.frequencies))
    write_pattern(config, problem.geometry(), baseline_filter(kind, problem.geometry(), f, config.doa()), f,
                  out_dir / fmt::format("beampattern_{}_{}.csv", name, frequency_label(f)));
}

std::vector<double> random_interior_point(const DesignProblem& problem, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> weight(-1.0, 1.0);
  std::uniform_real_distribution<double> log_width(std::log(0.2), std::log(2.0));
  const std::size_t r = problem.ring_count();
  std::vector<double> x(problem.parameter_count());
  for (std::size_t b = 0; b < problem.band_count(); ++b) {
    for (std::size_t k = 0; k < r; ++k) x[2 * r * b + k] = weight(rng);
    for (std::size_t k = 0; k < r; ++k) x[2 * r * b + r + k] = softplus_inverse(std::exp(log_width(rng)) - kSigmaFloor);
  }
  return x;
}

GradcheckSummary run_gradcheck(const DesignProblem& problem, std::size_t points, std::uint64_t seed,
                               std::ostream& log, double relative_step) {
  const ad::ScalarFunction f = [&](std::span<const ad::Var> x) { return problem.evaluate<ad::Var>(x).loss.total; };
  const ad::BranchSignature branches = [&](std::span<const double> x) {
    return problem.evaluate<double>(x).signature;
  };
  std::mt19937_64 rng(seed);
  GradcheckSummary summary;
  for (std::size_t p = 0; p < points; ++p) {
    const std::vector<double> x = random_interior_point(problem, rng);
    const ad::GradcheckResult r = ad::gradcheck(f, x, branches, relative_step);
    summary.point_errors.push_back(r.max_error);
    summary.max_error = std::max(summary.max_error, r.max_error);
    summary.excluded_coordinates += r.excluded_count();
    ++summary.points;
    fmt::print(log, "point {:>3}: max error {:.3e}, {} of {} coordinates excluded\n", p, r.max_error,
               r.excluded_count(), x.size());
  }
  return summary;
}

}  // namespace ccma
