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

#ifndef CCMA_BASELINES_HPP
#define CCMA_BASELINES_HPP

#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ccma/geometry.hpp"
#include "ccma/metrics.hpp"
#include "ccma/wavefield.hpp"

namespace ccma {

enum class BaselineKind { kDelayAndSum };

std::string_view to_string(BaselineKind kind) noexcept;
BaselineKind baseline_from_string(std::string_view name);

/// h = d(f, DoA) / M_T.
Eigen::VectorXcd das_filter(const ArrayGeometry& geometry, double frequency, const Direction& doa);

Eigen::VectorXcd baseline_filter(BaselineKind kind, const ArrayGeometry& geometry, double frequency,
                                 const Direction& doa);

MetricCurves baseline_curves(BaselineKind kind, const ArrayGeometry& geometry, const Direction& doa,
                             const std::vector<double>& frequencies, const MetricOptions& options = {});

}  // namespace ccma

#endif  // CCMA_BASELINES_HPP
