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

#ifndef CCMA_GRADCHECK_HPP
#define CCMA_GRADCHECK_HPP

#include <functional>
#include <span>
#include <vector>

#include "ccma/autodiff.hpp"

namespace ccma::ad {

/// Scalar function of a parameter vector. Called with tape-recorded leaves
/// for the reverse pass and with detached constants for finite differences.
using ScalarFunction = std::function<Var(std::span<const Var>)>;
/// Discrete choices made at a point; finite differences across a change of
/// signature straddle a branch boundary and are excluded.
using BranchSignature = std::function<std::vector<int>(std::span<const double>)>;

struct GradcheckResult {
  double max_error = 0.0;            // over checked coordinates
  std::vector<double> errors;        // |AD - FD| / max(1, |FD|), 0 where excluded
  std::vector<double> analytic;
  std::vector<double> numeric;
  std::vector<bool> excluded;

  bool point_excluded() const noexcept;
  std::size_t excluded_count() const noexcept;
};

/// Compares the reverse-mode gradient with central differences of step
/// `relative_step * max(1, |x_k|)`.
GradcheckResult gradcheck(const ScalarFunction& f, std::span<const double> point, const BranchSignature& branches = {},
                          double relative_step = 1e-4);

}  // namespace ccma::ad

#endif  // CCMA_GRADCHECK_HPP
