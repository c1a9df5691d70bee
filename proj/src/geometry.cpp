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

#include "ccma/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ccma/error.hpp"

namespace ccma {

void ArrayConfig::validate() const {
  if (ring_radii.empty()) throw ValidationError("array.ring_radii", "at least one ring is required");
  for (std::size_t r = 0; r < ring_radii.size(); ++r) {
    const double radius = ring_radii[r];
    if (!std::isfinite(radius) || radius < 0.0)
      throw ValidationError("array.ring_radii", "radius " + std::to_string(r) + " must be finite and >= 0");
    if (r > 0 && !(radius > ring_radii[r - 1]))
      throw ValidationError("array.ring_radii", "radii must be strictly increasing");
  }
  if (!std::isfinite(sample_rate) || sample_rate <= 0.0)
    throw ValidationError("array.sample_rate", "must be > 0");
  if (!std::isfinite(sound_speed) || sound_speed <= 0.0)
    throw ValidationError("array.sound_speed", "must be > 0");
}

int mics_per_ring(double radius, double min_wavelength) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw ArgumentError("mics_per_ring: radius must be >= 0");
  if (!(min_wavelength > 0.0)) throw ArgumentError("mics_per_ring: min_wavelength must be > 0");
  if (radius == 0.0) return 1;
  const double ratio = min_wavelength / (4.0 * radius);
  if (ratio > 1.0)
    throw ArgumentError("mics_per_ring: ring of radius " + std::to_string(radius) +
                        " m is too small for two non-aliasing microphones");
  return static_cast<int>(std::floor(std::numbers::pi / std::asin(ratio)));
}

ArrayGeometry::ArrayGeometry(std::vector<Ring> rings, double sample_rate, double sound_speed)
    : rings_(std::move(rings)), sample_rate_(sample_rate), sound_speed_(sound_speed) {
  if (rings_.empty()) throw ArgumentError("ArrayGeometry: no rings");
  if (!(sample_rate_ > 0.0) || !(sound_speed_ > 0.0))
    throw ArgumentError("ArrayGeometry: sample_rate and sound_speed must be > 0");

  std::size_t total = 0;
  for (std::size_t r = 0; r < rings_.size(); ++r) {
    const Ring& ring = rings_[r];
    if (ring.angles.empty()) throw ArgumentError("ArrayGeometry: ring " + std::to_string(r) + " has no microphones");
    if (ring.radius == 0.0 && ring.angles.size() != 1)
      throw ArgumentError("ArrayGeometry: a zero-radius ring holds exactly one microphone");
    for (double a : ring.angles)
      if (!(std::abs(a) < 2.0 * std::numbers::pi))
        throw ArgumentError("ArrayGeometry: angular positions must satisfy |phi| < 2 pi");
    offsets_.push_back(total);
    total += ring.angles.size();
  }

  ring_of_.reserve(total);
  positions_.resize(static_cast<Eigen::Index>(total), 3);
  Eigen::Index row = 0;
  for (std::size_t r = 0; r < rings_.size(); ++r) {
    const Ring& ring = rings_[r];
    for (double angle : ring.angles) {
      positions_(row, 0) = ring.radius * std::cos(angle);
      positions_(row, 1) = ring.radius * std::sin(angle);
      positions_(row, 2) = 0.0;
      ring_of_.push_back(r);
      ++row;
    }
  }

  const auto n = static_cast<Eigen::Index>(total);
  distances_.setZero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double l = (positions_.row(i) - positions_.row(j)).norm();
      distances_(i, j) = l;
      distances_(j, i) = l;
    }
}

std::size_t ArrayGeometry::flat_index(std::size_t ring, std::size_t mic) const {
  if (ring >= rings_.size() || mic >= rings_[ring].mic_count())
    throw ArgumentError("ArrayGeometry: microphone index out of range");
  return offsets_[ring] + mic;
}

double ArrayGeometry::diameter() const noexcept { return 2.0 * rings_.back().radius; }

ArrayGeometry build_geometry(const ArrayConfig& config) {
  config.validate();
  const double lambda_min = config.min_wavelength();
  std::vector<Ring> rings;
  rings.reserve(config.ring_radii.size());
  for (double radius : config.ring_radii) {
    const int count = mics_per_ring(radius, lambda_min);
    Ring ring{radius, {}};
    ring.angles.reserve(static_cast<std::size_t>(count));
    for (int m = 0; m < count; ++m) ring.angles.push_back(2.0 * std::numbers::pi * m / count);
    rings.push_back(std::move(ring));
  }
  return ArrayGeometry(std::move(rings), config.sample_rate, config.sound_speed);
}

nlohmann::json geometry_to_json(const ArrayGeometry& geometry) {
  nlohmann::json rings = nlohmann::json::array();
  for (const Ring& ring : geometry.rings())
    rings.push_back({{"radius", ring.radius}, {"count", ring.mic_count()}, {"angles", ring.angles}});
  return {{"sample_rate", geometry.sample_rate()}, {"sound_speed", geometry.sound_speed()}, {"rings", rings}};
}

ArrayGeometry geometry_from_json(const nlohmann::json& j) {
  try {
    std::vector<Ring> rings;
    for (const auto& item : j.at("rings")) {
      Ring ring{item.at("radius").get<double>(), item.at("angles").get<std::vector<double>>()};
      if (item.contains("count") && item.at("count").get<std::size_t>() != ring.mic_count())
        throw ValidationError("rings.count", "does not match the number of angles");
      rings.push_back(std::move(ring));
    }
    return ArrayGeometry(std::move(rings), j.at("sample_rate").get<double>(),
                         j.value("sound_speed", kDefaultSoundSpeed));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("geometry", e.what());
  }
}

}  // namespace ccma
