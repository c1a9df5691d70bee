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

#ifndef CCMA_OPTIMIZER_HPP
#define CCMA_OPTIMIZER_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ccma/design_problem.hpp"

namespace ccma {

struct RPropConfig {
  double initial_step = 0.1;
  double min_step = 1e-6;
  double max_step = 50.0;
  double increase = 1.2;  // eta+
  double decrease = 0.5;  // eta-

  void validate() const;
};

/// Sign-based resilient backpropagation, iRprop- variant: on a sign change
/// the step shrinks, the coordinate is left in place for this iteration and
/// its stored sign is cleared.
class RPropState {
 public:
  explicit RPropState(std::size_t size, RPropConfig config = {});

  /// Updates `params` in place. Throws NumericalError on a non-finite gradient.
  void step(std::span<const double> gradient, std::span<double> params);

  std::span<const double> step_sizes() const noexcept { return steps_; }
  const RPropConfig& config() const noexcept { return config_; }

 private:
  RPropConfig config_;
  std::vector<double> steps_;
  std::vector<signed char> previous_sign_;
};

struct OptimizeOptions {
  int iterations = 2000;
  std::uint64_t seed = 0;
  /// Stop after this many iterations without improving the best loss by more than `min_improvement`.
  int patience = 200;
  double min_improvement = 1e-6;
  double initial_width = 0.5;
  double init_noise = 1e-3;
  RPropConfig rprop;
};

struct BandSnapshot {
  double theta;
  double phi;
  double df;
  double wng;
};

struct IterationRecord {
  double loss;
  double best_loss;
  std::vector<BandSnapshot> bands;
};

struct RunRecord {
  std::vector<double> frequencies;
  std::vector<IterationRecord> iterations;
  std::string stop_reason;

  std::size_t iteration_count() const noexcept { return iterations.size(); }
};

/// Columns: iteration,loss,best_loss,frequency,theta_deg,phi_deg,DF_dB,WNG_dB
/// with one row per (iteration, band).
void write_run_record_csv(std::ostream& out, const RunRecord& record);

struct DesignResult {
  DesignParams params;
  MetricCurves metrics;
  RunRecord record;
  double loss = 0.0;  // loss of the returned params
};

/// Seeded starting point: uniform ring weights and widths near
/// `initial_width`, perturbed by uniform noise of `init_noise`.
std::vector<double> initial_parameters(const DesignProblem& problem, const OptimizeOptions& options);

/// Joint RProp descent over all bands on a single tape. Returns the best
/// parameters seen by total loss.
DesignResult optimize(const DesignProblem& problem, const OptimizeOptions& options = {});

DesignResult optimize(const ArrayGeometry& geometry, const Direction& doa, const std::vector<double>& frequencies,
                      const LossConfig& loss, int iterations, std::uint64_t seed);

/// Loss and gradient at `unconstrained` using a fresh tape.
double loss_and_gradient(const DesignProblem& problem, std::span<const double> unconstrained,
                         std::vector<double>& gradient);

}  // namespace ccma

#endif  // CCMA_OPTIMIZER_HPP
