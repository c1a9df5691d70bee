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

#include "ccma/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <limits>
#include <random>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ccma/autodiff.hpp"
#include "ccma/error.hpp"

namespace ccma {

void RPropConfig::validate() const {
  if (!(min_step > 0.0 && min_step <= initial_step && initial_step <= max_step))
    throw ValidationError("optimizer.rprop", "need 0 < min_step <= initial_step <= max_step");
  if (!(increase > 1.0)) throw ValidationError("optimizer.rprop", "increase factor must be > 1");
  if (!(decrease > 0.0 && decrease < 1.0)) throw ValidationError("optimizer.rprop", "decrease factor must lie in (0, 1)");
}

RPropState::RPropState(std::size_t size, RPropConfig config)
    : config_(config), steps_(size, config.initial_step), previous_sign_(size, 0) {
  config_.validate();
}

void RPropState::step(std::span<const double> gradient, std::span<double> params) {
  if (gradient.size() != steps_.size() || params.size() != steps_.size())
    throw DimensionError("RPropState::step: size mismatch");
  for (std::size_t k = 0; k < gradient.size(); ++k)
    if (!std::isfinite(gradient[k]))
      throw NumericalError(fmt::format("rprop: non-finite gradient at coordinate {}", k));

  for (std::size_t k = 0; k < gradient.size(); ++k) {
    const double g = gradient[k];
    signed char sign = g > 0.0 ? 1 : (g < 0.0 ? -1 : 0);
    const int agreement = sign * previous_sign_[k];
    if (agreement > 0) {
      steps_[k] = std::min(steps_[k] * config_.increase, config_.max_step);
    } else if (agreement < 0) {
      steps_[k] = std::max(steps_[k] * config_.decrease, config_.min_step);
      sign = 0;
    }
    params[k] -= sign * steps_[k];
    previous_sign_[k] = sign;
  }
}

void write_run_record_csv(std::ostream& out, const RunRecord& record) {
  out << "iteration,loss,best_loss,frequency,theta_deg,phi_deg,DF_dB,WNG_dB\n";
  for (std::size_t i = 0; i < record.iterations.size(); ++i) {
    const IterationRecord& it = record.iterations[i];
    for (std::size_t b = 0; b < it.bands.size(); ++b) {
      const BandSnapshot& s = it.bands[b];
      fmt::print(out, "{},{:.9f},{:.9f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", i, it.loss, it.best_loss,
                 record.frequencies[b], rad_to_deg(s.theta), rad_to_deg(s.phi), to_db(s.df), to_db(s.wng));
    }
  }
}

std::vector<double> initial_parameters(const DesignProblem& problem, const OptimizeOptions& options) {
  if (!(options.initial_width > kSigmaFloor)) throw ValidationError("optimizer.initial_width", "must exceed the floor");
  const std::size_t rings = problem.ring_count();
  const double v0 = softplus_inverse(options.initial_width - kSigmaFloor);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> noise(-options.init_noise, options.init_noise);
  std::vector<double> x(problem.parameter_count());
  for (std::size_t b = 0; b < problem.band_count(); ++b)
    for (std::size_t r = 0; r < 2 * rings; ++r) x[2 * rings * b + r] = (r < rings ? 0.0 : v0) + noise(rng);
  return x;
}

double loss_and_gradient(const DesignProblem& problem, std::span<const double> unconstrained,
                         std::vector<double>& gradient) {
  ad::Tape tape;
  const std::vector<ad::Var> leaves = tape.variables(unconstrained);
  const Evaluation<ad::Var> eval = problem.evaluate<ad::Var>(leaves);
  gradient = tape.gradient(eval.loss.total, leaves);
  return eval.loss.total.value();
}

DesignResult optimize(const DesignProblem& problem, const OptimizeOptions& options) {
  if (options.iterations < 1) throw ValidationError("optimizer.iterations", "must be >= 1");
  options.rprop.validate();

  std::vector<double> x = initial_parameters(problem, options);
  std::vector<double> best_x = x;
  double best_loss = std::numeric_limits<double>::infinity();
  int since_improvement = 0;

  RPropState rprop(x.size(), options.rprop);
  RunRecord record;
  record.frequencies = problem.frequencies();
  record.stop_reason = "iteration budget";

  ad::Tape tape;
  std::vector<ad::Var> leaves;
  for (int iter = 0; iter < options.iterations; ++iter) {
    tape.clear();
    leaves = tape.variables(x);
    const Evaluation<ad::Var> eval = problem.evaluate<ad::Var>(leaves);
    const double loss = eval.loss.total.value();
    if (!std::isfinite(loss)) throw NumericalError(fmt::format("non-finite loss at iteration {}", iter));

    if (loss < best_loss - options.min_improvement) {
      since_improvement = 0;
    } else {
      ++since_improvement;
    }
    if (loss < best_loss) {
      best_loss = loss;
      best_x = x;
    }

    IterationRecord it{loss, best_loss, {}};
    it.bands.reserve(eval.bands.size());
    for (const BandMetrics<ad::Var>& m : eval.bands)
      it.bands.push_back({m.theta.value(), m.phi.value(), m.df.value(), m.wng.value()});
    record.iterations.push_back(std::move(it));

    if (since_improvement >= options.patience) {
      record.stop_reason = "no improvement";
      break;
    }
    if (iter + 1 == options.iterations) break;
    const std::vector<double> gradient = tape.gradient(eval.loss.total, leaves);
    rprop.step(gradient, x);
  }

  DesignResult result;
  result.params = problem.to_params(best_x);
  const Evaluation<double> final_eval = problem.evaluate_params(result.params);
  for (std::size_t b = 0; b < problem.band_count(); ++b)
    result.metrics.push_back(problem.frequencies()[b], final_eval.bands[b]);
  result.loss = final_eval.loss.total;
  result.record = std::move(record);
  return result;
}

DesignResult optimize(const ArrayGeometry& geometry, const Direction& doa, const std::vector<double>& frequencies,
                      const LossConfig& loss, int iterations, std::uint64_t seed) {
  const DesignProblem problem(geometry, doa, frequencies, loss);
  OptimizeOptions options;
  options.iterations = iterations;
  options.seed = seed;
  return optimize(problem, options);
}

}  // namespace ccma
