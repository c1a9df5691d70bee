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

#ifndef CCMA_WEIGHTING_HPP
#define CCMA_WEIGHTING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "ccma/autodiff.hpp"
#include "ccma/error.hpp"
#include "ccma/geometry.hpp"
#include "ccma/wavefield.hpp"

namespace ccma {

/// Lower bound added to every Gaussian window width.
inline constexpr double kSigmaFloor = 1e-3;

/// Ring weights (on the simplex) and Gaussian window widths for one band.
struct BandParams {
  std::vector<double> ring_weights;
  std::vector<double> window_widths;
};

struct DesignParams {
  std::vector<double> frequencies;
  std::vector<BandParams> bands;

  std::size_t ring_count() const noexcept { return bands.empty() ? 0 : bands.front().ring_weights.size(); }
  /// Checks sizes against `rings` and the feasible set (simplex, sigma > 0).
  void validate(std::size_t rings) const;
};

nlohmann::json params_to_json(const DesignParams& params);
DesignParams params_from_json(const nlohmann::json& j);

/// Distance between the unit vector of mic (ring, mic) in the array plane and
/// the DoA unit vector, before per-ring normalization. Mics more than pi/2
/// away from the DoA azimuth are measured against the antipodal DoA vector,
/// which makes the window symmetric between the front and back of the ring.
double angular_distance_raw(const ArrayGeometry& geometry, std::size_t ring, std::size_t mic, const Direction& doa);

/// Per-ring range-normalized distances in [0, 1], flat mic order. Single-mic
/// rings and rings with no spread get 0.
std::vector<double> angular_distances(const ArrayGeometry& geometry, const Direction& doa);

template <class T>
T gaussian_window(double delta, const T& sigma) {
  using std::exp;
  return exp(-(delta * delta) / (2.0 * sigma * sigma));
}

template <class T>
T softplus(const T& x) {
  using std::exp;
  using std::log;
  if (ad::value_of(x) > 0.0) return x + log(1.0 + exp(-x));
  return log(1.0 + exp(x));
}

inline double softplus_inverse(double y) { return std::log(std::expm1(y)); }

/// Maps unconstrained (u, v) to ring weights w = softmax(u) and window widths
/// sigma = softplus(v) + kSigmaFloor.
template <class T>
void constrain(std::span<const T> u, std::span<const T> v, std::span<T> weights, std::span<T> widths) {
  using std::exp;
  if (u.size() != v.size() || u.size() != weights.size() || v.size() != widths.size() || u.empty())
    throw DimensionError("constrain: size mismatch");
  // Shift by the detached maximum for stability; it cancels in the ratio.
  double shift = ad::value_of(u[0]);
  for (const T& x : u) shift = std::max(shift, ad::value_of(x));
  T total = 0.0;
  for (std::size_t r = 0; r < u.size(); ++r) {
    weights[r] = exp(u[r] - shift);
    total = total + weights[r];
  }
  for (std::size_t r = 0; r < u.size(); ++r) weights[r] = weights[r] / total;
  for (std::size_t r = 0; r < v.size(); ++r) widths[r] = softplus(v[r]) + kSigmaFloor;
}

/// Inverse of `constrain` for interior points (w > 0, sigma > kSigmaFloor).
/// u is centered to zero mean.
void unconstrain(std::span<const double> weights, std::span<const double> widths, std::span<double> u,
                 std::span<double> v);

/// Real filter coefficients c_{r,m} = w_r s_{r,m} / sum(w s), so that
/// h = c .* d(DoA) satisfies h^H d(DoA) = 1.
template <class T>
std::vector<T> filter_coefficients(const ArrayGeometry& geometry, std::span<const double> deltas,
                                   std::span<const T> weights, std::span<const T> widths) {
  const std::size_t rings = geometry.ring_count();
  if (weights.size() != rings || widths.size() != rings) throw DimensionError("filter_coefficients: ring count");
  if (deltas.size() != geometry.total_mics()) throw DimensionError("filter_coefficients: mic count");

  std::vector<T> coeffs;
  coeffs.reserve(geometry.total_mics());
  T total = 0.0;
  for (std::size_t r = 0; r < rings; ++r) {
    const std::size_t begin = geometry.ring_offsets()[r];
    const std::size_t count = geometry.rings()[r].mic_count();
    T ring_sum = 0.0;
    for (std::size_t m = 0; m < count; ++m) {
      coeffs.push_back(gaussian_window(deltas[begin + m], widths[r]));
      ring_sum = ring_sum + coeffs.back();
    }
    total = total + weights[r] * ring_sum;
  }
  if (!(ad::value_of(total) > 1e-300)) throw DegenerateFilterError("filter has zero total weight");
  for (std::size_t r = 0; r < rings; ++r) {
    const T scale = weights[r] / total;
    const std::size_t begin = geometry.ring_offsets()[r];
    for (std::size_t m = 0; m < geometry.rings()[r].mic_count(); ++m) coeffs[begin + m] = scale * coeffs[begin + m];
  }
  return coeffs;
}

/// h_{r,m} = w_r s_{r,m} d_{r,m}(f, DoA), scaled to a distortionless response.
Eigen::VectorXcd assemble_filter(const ArrayGeometry& geometry, const BandParams& params, double frequency,
                                 const Direction& doa);

}  // namespace ccma

#endif  // CCMA_WEIGHTING_HPP
