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

#include "ccma/weighting.hpp"

#include <algorithm>
#include <numbers>
#include <string>

namespace ccma {

void DesignParams::validate(std::size_t rings) const {
  if (bands.empty()) throw ValidationError("params.bands", "no bands");
  if (frequencies.size() != bands.size())
    throw ValidationError("params.frequencies", "one frequency per band is required");
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const BandParams& band = bands[b];
    const std::string where = "params.bands[" + std::to_string(b) + "]";
    if (band.ring_weights.size() != rings || band.window_widths.size() != rings)
      throw DimensionError(where + ": expected " + std::to_string(rings) + " rings, got " +
                           std::to_string(band.ring_weights.size()));
    double total = 0.0;
    for (double w : band.ring_weights) {
      if (!(w >= 0.0 && w <= 1.0)) throw ValidationError(where + ".ring_weights", "each weight must lie in [0, 1]");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ValidationError(where + ".ring_weights", "weights must sum to 1");
    for (double s : band.window_widths)
      if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError(where + ".window_widths", "widths must be > 0");
  }
}

nlohmann::json params_to_json(const DesignParams& params) {
  nlohmann::json bands = nlohmann::json::array();
  for (std::size_t b = 0; b < params.bands.size(); ++b)
    bands.push_back({{"frequency", params.frequencies[b]},
                     {"ring_weights", params.bands[b].ring_weights},
                     {"window_widths", params.bands[b].window_widths}});
  return {{"bands", bands}};
}

DesignParams params_from_json(const nlohmann::json& j) {
  try {
    DesignParams params;
    for (const auto& item : j.at("bands")) {
      params.frequencies.push_back(item.at("frequency").get<double>());
      params.bands.push_back(
          {item.at("ring_weights").get<std::vector<double>>(), item.at("window_widths").get<std::vector<double>>()});
    }
    return params;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("params", e.what());
  }
}

double angular_distance_raw(const ArrayGeometry& geometry, std::size_t ring, std::size_t mic, const Direction& doa) {
  const double phi = geometry.rings().at(ring).angles.at(mic);
  const Eigen::Vector3d mic_dir(std::cos(phi), std::sin(phi), 0.0);
  Eigen::Vector3d target = doa.unit_vector();
  if (std::abs(wrap_angle(phi - doa.azimuth)) > std::numbers::pi / 2.0) target = -target;
  return (mic_dir - target).norm();
}

std::vector<double> angular_distances(const ArrayGeometry& geometry, const Direction& doa) {
  std::vector<double> deltas(geometry.total_mics(), 0.0);
  for (std::size_t r = 0; r < geometry.ring_count(); ++r) {
    const std::size_t count = geometry.rings()[r].mic_count();
    const std::size_t begin = geometry.ring_offsets()[r];
    if (count < 2) continue;
    for (std::size_t m = 0; m < count; ++m) deltas[begin + m] = angular_distance_raw(geometry, r, m, doa);
    const auto first = deltas.begin() + static_cast<std::ptrdiff_t>(begin);
    const auto last = first + static_cast<std::ptrdiff_t>(count);
    const auto [lo, hi] = std::minmax_element(first, last);
    const double min = *lo;
    const double range = *hi - *lo;
    for (auto it = first; it != last; ++it) *it = range > 0.0 ? (*it - min) / range : 0.0;
  }
  return deltas;
}

void unconstrain(std::span<const double> weights, std::span<const double> widths, std::span<double> u,
                 std::span<double> v) {
  if (weights.size() != u.size() || widths.size() != v.size() || weights.size() != widths.size())
    throw DimensionError("unconstrain: size mismatch");
  double mean = 0.0;
  for (std::size_t r = 0; r < weights.size(); ++r) {
    if (!(weights[r] > 0.0)) throw ArgumentError("unconstrain: weights must be > 0");
    u[r] = std::log(weights[r]);
    mean += u[r];
  }
  mean /= static_cast<double>(u.size());
  for (double& x : u) x -= mean;
  for (std::size_t r = 0; r < widths.size(); ++r) {
    if (!(widths[r] > kSigmaFloor)) throw ArgumentError("unconstrain: widths must exceed the floor");
    v[r] = softplus_inverse(widths[r] - kSigmaFloor);
  }
}

Eigen::VectorXcd assemble_filter(const ArrayGeometry& geometry, const BandParams& params, double frequency,
                                 const Direction& doa) {
  const std::vector<double> deltas = angular_distances(geometry, doa);
  const std::vector<double> coeffs = filter_coefficients<double>(geometry, deltas, params.ring_weights,
                                                                 params.window_widths);
  const Eigen::VectorXcd d = steering_vector(geometry, frequency, doa);
  Eigen::VectorXcd h(d.size());
  for (Eigen::Index k = 0; k < d.size(); ++k) h(k) = coeffs[static_cast<std::size_t>(k)] * d(k);
  // sum(c) is 1 up to rounding; rescale against the actual response.
  const std::complex<double> gain = h.dot(d);
  return h / std::conj(gain);
}

}  // namespace ccma
