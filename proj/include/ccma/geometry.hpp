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

#ifndef CCMA_GEOMETRY_HPP
#define CCMA_GEOMETRY_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

namespace ccma {

inline constexpr double kDefaultSoundSpeed = 343.0;

struct ArrayConfig {
  std::vector<double> ring_radii;  // meters, strictly increasing
  double sample_rate = 16000.0;    // Hz
  double sound_speed = kDefaultSoundSpeed;

  /// Throws ValidationError naming the offending field.
  void validate() const;

  /// Shortest wavelength that must be sampled without aliasing (Nyquist).
  double min_wavelength() const { return sound_speed / (0.5 * sample_rate); }
};

struct Ring {
  double radius = 0.0;
  std::vector<double> angles;  // radians, uniform spacing from 0

  std::size_t mic_count() const noexcept { return angles.size(); }
};

/// Planar concentric circular array. Microphones are indexed ring-major:
/// ring 0 first, then ring 1, ... in the order of their angular positions.
class ArrayGeometry {
 public:
  ArrayGeometry(std::vector<Ring> rings, double sample_rate, double sound_speed);

  const std::vector<Ring>& rings() const noexcept { return rings_; }
  std::size_t ring_count() const noexcept { return rings_.size(); }
  std::size_t total_mics() const noexcept { return ring_of_.size(); }

  /// Flat index of microphone `mic` on ring `ring`.
  std::size_t flat_index(std::size_t ring, std::size_t mic) const;
  std::size_t ring_of(std::size_t flat) const { return ring_of_.at(flat); }
  const std::vector<std::size_t>& ring_offsets() const noexcept { return offsets_; }

  /// M_T x 3 coordinates in meters (z = 0).
  const Eigen::MatrixX3d& positions() const noexcept { return positions_; }
  /// M_T x M_T Euclidean distances in meters.
  const Eigen::MatrixXd& distances() const noexcept { return distances_; }

  double sample_rate() const noexcept { return sample_rate_; }
  double sound_speed() const noexcept { return sound_speed_; }
  /// Twice the outermost radius.
  double diameter() const noexcept;

 private:
  std::vector<Ring> rings_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> ring_of_;
  Eigen::MatrixX3d positions_;
  Eigen::MatrixXd distances_;
  double sample_rate_;
  double sound_speed_;
};

/// Minimum microphone count on a ring so that adjacent mics are at least
/// half a minimum wavelength apart. A zero radius holds a single center mic.
int mics_per_ring(double radius, double min_wavelength);

ArrayGeometry build_geometry(const ArrayConfig& config);

nlohmann::json geometry_to_json(const ArrayGeometry& geometry);
ArrayGeometry geometry_from_json(const nlohmann::json& j);

}  // namespace ccma

#endif  // CCMA_GEOMETRY_HPP
