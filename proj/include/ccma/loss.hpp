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

#ifndef CCMA_LOSS_HPP
#define CCMA_LOSS_HPP

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccma/autodiff.hpp"
#include "ccma/metrics.hpp"
#include "ccma/wavefield.hpp"

namespace ccma {

enum class LossVariant { kL1, kL2, kL3 };

std::string_view to_string(LossVariant variant) noexcept;
LossVariant loss_variant_from_string(std::string_view name);

/// Beamwidth targets are in radians.
struct LossConfig {
  LossVariant variant = LossVariant::kL1;
  double target_theta = deg_to_rad(40.0);
  double target_phi = deg_to_rad(40.0);
  double alpha = 1.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  /// L2 only: how far below both targets a band must be before DF is reduced.
  double broaden_tolerance = deg_to_rad(1.0);

  void validate() const;
};

/// Which piece of the piecewise loss a band falls into.
enum class Branch {
  kTheta,        // elevation too wide
  kPhi,          // azimuth too wide
  kBoth,         // both too wide: theta + phi
  kPerformance,  // both within target
  kBroaden,      // L2: both narrower than target by more than the tolerance
};

std::string_view to_string(Branch branch) noexcept;

/// Branch choice on detached values; the boundary is inclusive of the target.
template <class T>
Branch select_branch(const BandMetrics<T>& m, const LossConfig& config) {
  const bool theta_over = ad::value_of(m.theta) > config.target_theta;
  const bool phi_over = ad::value_of(m.phi) > config.target_phi;
  if (theta_over && phi_over) return Branch::kBoth;
  if (theta_over) return Branch::kTheta;
  if (phi_over) return Branch::kPhi;
  return Branch::kPerformance;
}

template <class T>
struct BandLoss {
  T value;
  Branch branch;
};

template <class T>
T width_penalty(const BandMetrics<T>& m, Branch branch) {
  switch (branch) {
    case Branch::kTheta: return m.theta;
    case Branch::kPhi: return m.phi;
    default: return m.theta + m.phi;
  }
}

/// Beamwidth penalty when too wide, otherwise -log10 DF.
template <class T>
BandLoss<T> loss_l1(const BandMetrics<T>& m, const LossConfig& config) {
  using std::log10;
  const Branch branch = select_branch(m, config);
  if (branch != Branch::kPerformance) return {width_penalty(m, branch), branch};
  return {-log10(m.df), branch};
}

/// As L1, but a band narrower than both targets (beyond the tolerance) is
/// pushed wider by minimizing +log10 DF instead.
template <class T>
BandLoss<T> loss_l2(const BandMetrics<T>& m, const LossConfig& config) {
  using std::log10;
  const Branch branch = select_branch(m, config);
  if (branch != Branch::kPerformance) return {width_penalty(m, branch), branch};
  const bool narrow = ad::value_of(m.theta) < config.target_theta - config.broaden_tolerance &&
                      ad::value_of(m.phi) < config.target_phi - config.broaden_tolerance;
  if (narrow) return {log10(m.df), Branch::kBroaden};
  return {-log10(m.df), branch};
}

template <class T>
struct LossTerms {
  std::vector<T> band;         // per-band piecewise value
  std::vector<Branch> branches;
  std::vector<T> performance;  // P_f for every band (L3 only)
  T invariance = 0.0;          // I
  T differences = 0.0;         // Delta
  T total = 0.0;
};

/// Population standard deviation. sqrt has derivative 0 at exactly 0.
template <class T>
T population_std(std::span<const T> xs) {
  using std::sqrt;
  T mean = 0.0;
  for (const T& x : xs) mean = mean + x;
  mean = mean / static_cast<double>(xs.size());
  T var = 0.0;
  for (const T& x : xs) var = var + (x - mean) * (x - mean);
  return sqrt(var / static_cast<double>(xs.size()));
}

/// Piecewise L1 branches with P_f = -alpha log10 DF - (1 - alpha) log10 WNG
/// in the performance branch, plus the band-coupling terms
/// I = lambda1 std(DF) + lambda2 std(WNG) and
/// Delta = lambda3 sum_{i=2}^{floor(F/2)} |P_i - P_{F-i+1}| (1-based).
template <class T>
LossTerms<T> loss_l3(std::span<const BandMetrics<T>> bands, const LossConfig& config) {
  using std::abs;
  using std::log10;
  if (bands.size() < 2) throw ArgumentError("loss_l3: at least two bands are required");
  LossTerms<T> terms;
  const std::size_t count = bands.size();
  std::vector<T> df, wng;
  for (const BandMetrics<T>& m : bands) {
    const T p = -(config.alpha * log10(m.df)) - (1.0 - config.alpha) * log10(m.wng);
    terms.performance.push_back(p);
    const Branch branch = select_branch(m, config);
    terms.branches.push_back(branch);
    terms.band.push_back(branch == Branch::kPerformance ? p : width_penalty(m, branch));
    df.push_back(m.df);
    wng.push_back(m.wng);
  }
  terms.invariance = config.lambda1 * population_std<T>(df) + config.lambda2 * population_std<T>(wng);
  T diff = 0.0;
  for (std::size_t i = 2; i <= count / 2; ++i) diff = diff + abs(terms.performance[i - 1] - terms.performance[count - i]);
  terms.differences = config.lambda3 * diff;
  T total = 0.0;
  for (const T& b : terms.band) total = total + b;
  terms.total = total + terms.invariance + terms.differences;
  return terms;
}

/// Dispatches on the configured variant; L1 and L2 are summed over bands.
template <class T>
LossTerms<T> total_loss(std::span<const BandMetrics<T>> bands, const LossConfig& config) {
  if (config.variant == LossVariant::kL3) return loss_l3<T>(bands, config);
  LossTerms<T> terms;
  T total = 0.0;
  for (const BandMetrics<T>& m : bands) {
    const BandLoss<T> l = config.variant == LossVariant::kL1 ? loss_l1(m, config) : loss_l2(m, config);
    terms.band.push_back(l.value);
    terms.branches.push_back(l.branch);
    total = total + l.value;
  }
  terms.total = total;
  return terms;
}

}  // namespace ccma

#endif  // CCMA_LOSS_HPP
