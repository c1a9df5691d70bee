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

#include "ccma/baselines.hpp"

#include "ccma/error.hpp"

namespace ccma {

std::string_view to_string(BaselineKind kind) noexcept {
  switch (kind) {
    case BaselineKind::kDelayAndSum: return "das";
  }
  return "?";
}

BaselineKind baseline_from_string(std::string_view name) {
  if (name == "das" || name == "delay_and_sum") return BaselineKind::kDelayAndSum;
  throw ValidationError("baseline", "unknown baseline '" + std::string(name) + "' (expected das)");
}

Eigen::VectorXcd das_filter(const ArrayGeometry& geometry, double frequency, const Direction& doa) {
  return steering_vector(geometry, frequency, doa) / static_cast<double>(geometry.total_mics());
}

Eigen::VectorXcd baseline_filter(BaselineKind kind, const ArrayGeometry& geometry, double frequency,
                                 const Direction& doa) {
  switch (kind) {
    case BaselineKind::kDelayAndSum: return das_filter(geometry, frequency, doa);
  }
  throw ArgumentError("baseline_filter: unknown kind");
}

MetricCurves baseline_curves(BaselineKind kind, const ArrayGeometry& geometry, const Direction& doa,
                             const std::vector<double>& frequencies, const MetricOptions& options) {
  MetricCurves curves;
  for (double f : frequencies)
    curves.push_back(f, evaluate_filter(geometry, doa, f, baseline_filter(kind, geometry, f, doa), options));
  return curves;
}

}  // namespace ccma
