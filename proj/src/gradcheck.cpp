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

#include "ccma/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace ccma::ad {

bool GradcheckResult::point_excluded() const noexcept {
  return std::find(excluded.begin(), excluded.end(), true) != excluded.end();
}

std::size_t GradcheckResult::excluded_count() const noexcept {
  return static_cast<std::size_t>(std::count(excluded.begin(), excluded.end(), true));
}

GradcheckResult gradcheck(const ScalarFunction& f, std::span<const double> point, const BranchSignature& branches,
                          double relative_step) {
  GradcheckResult result;
  {
    Tape tape;
    const std::vector<Var> leaves = tape.variables(point);
    result.analytic = tape.gradient(f(leaves), leaves);
  }

  auto value_at = [&](std::span<const double> x) {
    const std::vector<Var> constants(x.begin(), x.end());
    return f(constants).value();
  };
  const std::vector<int> base_signature = branches ? branches(point) : std::vector<int>{};

  std::vector<double> x(point.begin(), point.end());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double h = relative_step * std::max(1.0, std::abs(point[k]));
    x[k] = point[k] + h;
    const double up = value_at(x);
    const bool up_same = !branches || branches(x) == base_signature;
    x[k] = point[k] - h;
    const double down = value_at(x);
    const bool down_same = !branches || branches(x) == base_signature;
    x[k] = point[k];

    const double fd = (up - down) / (2.0 * h);
    result.numeric.push_back(fd);
    const bool skip = !(up_same && down_same);
    result.excluded.push_back(skip);
    const double err = skip ? 0.0 : std::abs(result.analytic[k] - fd) / std::max(1.0, std::abs(fd));
    result.errors.push_back(err);
    result.max_error = std::max(result.max_error, err);
  }
  return result;
}

}  // namespace ccma::ad
