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

#include "ccma/loss.hpp"

#include "ccma/error.hpp"

namespace ccma {

std::string_view to_string(LossVariant variant) noexcept {
  switch (variant) {
    case LossVariant::kL1: return "L1";
    case LossVariant::kL2: return "L2";
    case LossVariant::kL3: return "L3";
  }
  return "?";
}

LossVariant loss_variant_from_string(std::string_view name) {
  if (name == "L1" || name == "l1") return LossVariant::kL1;
  if (name == "L2" || name == "l2") return LossVariant::kL2;
  if (name == "L3" || name == "l3") return LossVariant::kL3;
  throw ValidationError("loss.variant", "expected one of L1, L2, L3");
}

std::string_view to_string(Branch branch) noexcept {
  switch (branch) {
    case Branch::kTheta: return "theta";
    case Branch::kPhi: return "phi";
    case Branch::kBoth: return "both";
    case Branch::kPerformance: return "performance";
    case Branch::kBroaden: return "broaden";
  }
  return "?";
}

void LossConfig::validate() const {
  if (!(target_theta > 0.0 && target_theta <= std::numbers::pi))
    throw ValidationError("loss.target_theta_deg", "must lie in (0, 180]");
  if (!(target_phi > 0.0 && target_phi <= std::numbers::pi))
    throw ValidationError("loss.target_phi_deg", "must lie in (0, 180]");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("loss.alpha", "must lie in [0, 1]");
  if (!(lambda1 >= 0.0)) throw ValidationError("loss.lambda1", "must be >= 0");
  if (!(lambda2 >= 0.0)) throw ValidationError("loss.lambda2", "must be >= 0");
  if (!(lambda3 >= 0.0)) throw ValidationError("loss.lambda3", "must be >= 0");
  if (!(broaden_tolerance >= 0.0)) throw ValidationError("loss.broaden_tolerance_deg", "must be >= 0");
}

}  // namespace ccma
