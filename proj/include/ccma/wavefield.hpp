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

#ifndef CCMA_WAVEFIELD_HPP
#define CCMA_WAVEFIELD_HPP

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "ccma/geometry.hpp"

namespace ccma {

inline constexpr double deg_to_rad(double deg) noexcept { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / std::numbers::pi; }

/// Wraps an angle into (-pi, pi].
double wrap_angle(double radians) noexcept;

/// Elevation is the polar angle from the array normal (0 = broadside),
/// azimuth is measured in the array plane from the x-axis.
struct Direction {
  double elevation = 0.0;  // [0, pi]
  double azimuth = 0.0;    // [0, 2 pi)

  static Direction from_degrees(double elevation_deg, double azimuth_deg);
  void validate() const;
  /// Unit propagation vector (sin t cos p, sin t sin p, cos t).
  Eigen::Vector3d unit_vector() const;
};

/// Uniform elevation x azimuth grid that contains the DoA as a sample.
struct AngularGrid {
  std::vector<double> elevations;  // sorted, radians
  std::vector<double> azimuths;    // sorted, radians in [0, 2 pi)
  double resolution = 0.0;
  std::size_t doa_elevation_index = 0;
  std::size_t doa_azimuth_index = 0;

  /// `resolution` must divide 360 degrees. Elevations span
  /// [elevation_min, elevation_max] snapped to the DoA elevation.
  static AngularGrid make(double resolution, const Direction& doa, double elevation_min = 0.0,
                          double elevation_max = std::numbers::pi / 2.0);

  std::size_t size() const noexcept { return elevations.size() * azimuths.size(); }
};

/// Far-field delay in seconds of mic (ring, mic) relative to the array center.
double propagation_delay(const ArrayGeometry& geometry, std::size_t ring, std::size_t mic,
                         const Direction& direction);

/// d(f, dir): entry k = exp(+j 2 pi f tau_k), unit modulus.
Eigen::VectorXcd steering_vector(const ArrayGeometry& geometry, double frequency, const Direction& direction);

/// Steering vectors for every direction of `grid` (elevation-major columns) at each frequency.
struct SteeringField {
  std::vector<double> frequencies;
  AngularGrid grid;
  std::vector<Eigen::MatrixXcd> values;  // per frequency: M_T x grid.size()

  std::size_t column(std::size_t elevation_index, std::size_t azimuth_index) const noexcept {
    return elevation_index * grid.azimuths.size() + azimuth_index;
  }
};

SteeringField build_steering_field(const ArrayGeometry& geometry, const std::vector<double>& frequencies,
                                   const AngularGrid& grid);

/// B = h^H d for a single direction.
std::complex<double> response(const Eigen::VectorXcd& filter, const Eigen::VectorXcd& steering);

/// B = h^H D for every column of a steering slice (one frequency).
Eigen::VectorXcd beampattern(const Eigen::VectorXcd& filter, const Eigen::MatrixXcd& steering_slice);

/// Full beampattern as an elevation x azimuth matrix.
Eigen::MatrixXcd beampattern_grid(const Eigen::VectorXcd& filter, const ArrayGeometry& geometry, double frequency,
                                  const AngularGrid& grid);

/// CSV: header row of azimuths in degrees, then one row per elevation with
/// the elevation in degrees followed by 20 log10 |B| relative to the DoA sample.
void write_beampattern_csv(std::ostream& out, const AngularGrid& grid, const Eigen::MatrixXcd& pattern);

}  // namespace ccma

#endif  // CCMA_WAVEFIELD_HPP
