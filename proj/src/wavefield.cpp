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

#include "ccma/wavefield.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ccma/error.hpp"

namespace ccma {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Grid snapping tolerance, in units of the grid step.
constexpr double kSnapTolerance = 1e-9;

}  // namespace

double wrap_angle(double radians) noexcept {
  double a = std::remainder(radians, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  return a;
}

Direction Direction::from_degrees(double elevation_deg, double azimuth_deg) {
  double az = std::fmod(deg_to_rad(azimuth_deg), kTwoPi);
  if (az < 0.0) az += kTwoPi;
  Direction d{deg_to_rad(elevation_deg), az};
  d.validate();
  return d;
}

void Direction::validate() const {
  if (!(elevation >= 0.0 && elevation <= std::numbers::pi))
    throw ArgumentError("Direction: elevation must lie in [0, pi]");
  if (!(azimuth >= 0.0 && azimuth < kTwoPi)) throw ArgumentError("Direction: azimuth must lie in [0, 2 pi)");
}

Eigen::Vector3d Direction::unit_vector() const {
  return {std::sin(elevation) * std::cos(azimuth), std::sin(elevation) * std::sin(azimuth), std::cos(elevation)};
}

AngularGrid AngularGrid::make(double resolution, const Direction& doa, double elevation_min, double elevation_max) {
  doa.validate();
  if (!(resolution > 0.0)) throw ArgumentError("AngularGrid: resolution must be > 0");
  const double steps_per_turn = kTwoPi / resolution;
  const double n_az = std::round(steps_per_turn);
  if (std::abs(steps_per_turn - n_az) > 1e-6 * steps_per_turn)
    throw ArgumentError("AngularGrid: resolution must divide 360 degrees");
  if (!(elevation_min <= doa.elevation && doa.elevation <= elevation_max))
    throw ArgumentError("AngularGrid: DoA elevation outside the elevation range");

  AngularGrid grid;
  grid.resolution = resolution;

  const auto below = static_cast<long>(std::floor((doa.elevation - elevation_min) / resolution + kSnapTolerance));
  const auto above = static_cast<long>(std::floor((elevation_max - doa.elevation) / resolution + kSnapTolerance));
  for (long k = -below; k <= above; ++k) grid.elevations.push_back(doa.elevation + static_cast<double>(k) * resolution);
  grid.doa_elevation_index = static_cast<std::size_t>(below);

  // Azimuths start at the smallest non-negative grid point congruent to the DoA.
  const auto count = static_cast<long>(n_az);
  const auto shift = static_cast<long>(std::floor(doa.azimuth / resolution + kSnapTolerance));
  const double start = std::max(0.0, doa.azimuth - static_cast<double>(shift) * resolution);
  for (long k = 0; k < count; ++k) grid.azimuths.push_back(start + static_cast<double>(k) * resolution);
  grid.azimuths[static_cast<std::size_t>(shift)] = doa.azimuth;
  grid.doa_azimuth_index = static_cast<std::size_t>(shift);
  return grid;
}

double propagation_delay(const ArrayGeometry& geometry, std::size_t ring, std::size_t mic,
                         const Direction& direction) {
  const Ring& r = geometry.rings().at(ring);
  const double phi = r.angles.at(mic);
  return -(r.radius / geometry.sound_speed()) * std::sin(direction.elevation) * std::cos(direction.azimuth - phi);
}

Eigen::VectorXcd steering_vector(const ArrayGeometry& geometry, double frequency, const Direction& direction) {
  if (!(frequency > 0.0)) throw ArgumentError("steering_vector: frequency must be > 0");
  Eigen::VectorXcd d(static_cast<Eigen::Index>(geometry.total_mics()));
  Eigen::Index k = 0;
  for (std::size_t r = 0; r < geometry.ring_count(); ++r)
    for (std::size_t m = 0; m < geometry.rings()[r].mic_count(); ++m) {
      const double tau = propagation_delay(geometry, r, m, direction);
      // Center mic: tau is exactly zero and polar(1, 0) is exactly 1 + 0j.
      d(k++) = std::polar(1.0, kTwoPi * frequency * tau);
    }
  return d;
}

SteeringField build_steering_field(const ArrayGeometry& geometry, const std::vector<double>& frequencies,
                                   const AngularGrid& grid) {
  SteeringField field{frequencies, grid, {}};
  field.values.reserve(frequencies.size());
  for (double f : frequencies) {
    Eigen::MatrixXcd slice(static_cast<Eigen::Index>(geometry.total_mics()), static_cast<Eigen::Index>(grid.size()));
    for (std::size_t e = 0; e < grid.elevations.size(); ++e)
      for (std::size_t a = 0; a < grid.azimuths.size(); ++a)
        slice.col(static_cast<Eigen::Index>(field.column(e, a))) =
            steering_vector(geometry, f, Direction{grid.elevations[e], grid.azimuths[a]});
    field.values.push_back(std::move(slice));
  }
  return field;
}

std::complex<double> response(const Eigen::VectorXcd& filter, const Eigen::VectorXcd& steering) {
  if (filter.size() != steering.size()) throw DimensionError("response: filter and steering lengths differ");
  return filter.dot(steering);  // Eigen's dot conjugates the first argument
}

Eigen::VectorXcd beampattern(const Eigen::VectorXcd& filter, const Eigen::MatrixXcd& steering_slice) {
  if (filter.size() != steering_slice.rows()) throw DimensionError("beampattern: filter length != mic count");
  return (filter.adjoint() * steering_slice).transpose();
}

Eigen::MatrixXcd beampattern_grid(const Eigen::VectorXcd& filter, const ArrayGeometry& geometry, double frequency,
                                  const AngularGrid& grid) {
  if (filter.size() != static_cast<Eigen::Index>(geometry.total_mics()))
    throw DimensionError("beampattern_grid: filter length != mic count");
  Eigen::MatrixXcd pattern(static_cast<Eigen::Index>(grid.elevations.size()),
                           static_cast<Eigen::Index>(grid.azimuths.size()));
  for (std::size_t e = 0; e < grid.elevations.size(); ++e)
    for (std::size_t a = 0; a < grid.azimuths.size(); ++a)
      pattern(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(a)) =
          response(filter, steering_vector(geometry, frequency, Direction{grid.elevations[e], grid.azimuths[a]}));
  return pattern;
}

void write_beampattern_csv(std::ostream& out, const AngularGrid& grid, const Eigen::MatrixXcd& pattern) {
  const double peak = std::abs(pattern(static_cast<Eigen::Index>(grid.doa_elevation_index),
                                       static_cast<Eigen::Index>(grid.doa_azimuth_index)));
  if (!(peak > 0.0)) throw NumericalError("write_beampattern_csv: zero response at the DoA");
  out << "elevation_deg";
  for (double az : grid.azimuths) fmt::print(out, ",{:.6f}", rad_to_deg(az));
  out << '\n';
  for (std::size_t e = 0; e < grid.elevations.size(); ++e) {
    fmt::print(out, "{:.6f}", rad_to_deg(grid.elevations[e]));
    for (std::size_t a = 0; a < grid.azimuths.size(); ++a) {
      const double mag = std::abs(pattern(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(a))) / peak;
      fmt::print(out, ",{:.6f}", 20.0 * std::log10(std::max(mag, 1e-15)));
    }
    out << '\n';
  }
}

}  // namespace ccma
