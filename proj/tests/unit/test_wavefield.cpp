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

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <doctest.h>

#include "ccma/error.hpp"
#include "ccma/geometry.hpp"
#include "ccma/wavefield.hpp"

using namespace ccma;
using std::numbers::pi;

namespace {

ArrayGeometry paper_array() { return build_geometry({{0.0, 0.05, 0.10, 0.15, 0.20}, 16000.0, 343.0}); }

}  // namespace

TEST_CASE("wrap_angle") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(pi) == doctest::Approx(pi));
  CHECK(wrap_angle(-pi) == doctest::Approx(pi));
  CHECK(wrap_angle(3.0 * pi / 2.0) == doctest::Approx(-pi / 2.0));
  CHECK(wrap_angle(-5.0 * pi / 2.0) == doctest::Approx(-pi / 2.0));
}

TEST_CASE("delay matches the projection of the mic position on the DoA") {
  const ArrayGeometry g = paper_array();
  const Direction dir = Direction::from_degrees(60.0, 130.0);
  const Eigen::Vector3d u = dir.unit_vector();
  for (std::size_t r = 0; r < g.ring_count(); ++r)
    for (std::size_t m = 0; m < g.rings()[r].mic_count(); ++m) {
      const double tau = propagation_delay(g, r, m, dir);
      CHECK(tau == doctest::Approx(-g.positions().row(g.flat_index(r, m)).dot(u) / g.sound_speed()));
    }
}

TEST_CASE("broadside arrivals reach every mic at once") {
  const ArrayGeometry g = paper_array();
  const Eigen::VectorXcd d = steering_vector(g, 3000.0, Direction::from_degrees(0.0, 77.0));
  for (Eigen::Index k = 0; k < d.size(); ++k) CHECK(std::abs(d[k] - 1.0) < 1e-12);
}

TEST_CASE("steering vector has unit modulus and a unit center entry") {
  const ArrayGeometry g = paper_array();
  const Eigen::VectorXcd d = steering_vector(g, 4321.0, Direction::from_degrees(35.0, 290.0));
  CHECK(d.size() == 145);
  CHECK(std::abs(d[0] - 1.0) < 1e-15);
  for (Eigen::Index k = 0; k < d.size(); ++k) CHECK(std::abs(d[k]) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("matched filter response equals one at the DoA") {
  const ArrayGeometry g = paper_array();
  const Direction doa = Direction::from_degrees(45.0, 45.0);
  const Eigen::VectorXcd d = steering_vector(g, 2000.0, doa);
  const Eigen::VectorXcd h = d / static_cast<double>(d.size());
  CHECK(std::abs(response(h, d) - 1.0) < 1e-12);
}

TEST_CASE("grid contains the DoA and covers the requested span") {
  const Direction doa = Direction::from_degrees(45.0, 45.0);
  const AngularGrid grid = AngularGrid::make(deg_to_rad(2.0), doa);
  CHECK(grid.azimuths.size() == 180);
  // 45 degrees is odd in 2 degree steps, so the span is [1, 89].
  CHECK(grid.elevations.front() == doctest::Approx(deg_to_rad(1.0)));
  CHECK(grid.elevations.back() == doctest::Approx(deg_to_rad(89.0)));
  const AngularGrid fine = AngularGrid::make(deg_to_rad(1.0), doa);
  CHECK(fine.elevations.front() == doctest::Approx(0.0));
  CHECK(fine.elevations.back() == doctest::Approx(pi / 2.0));
  CHECK(grid.elevations[grid.doa_elevation_index] == doctest::Approx(doa.elevation));
  CHECK(grid.azimuths[grid.doa_azimuth_index] == doctest::Approx(doa.azimuth));
  CHECK_THROWS_AS(AngularGrid::make(deg_to_rad(7.0), doa), ArgumentError);
}

TEST_CASE("grid snapped to an off-lattice DoA") {
  const Direction doa = Direction::from_degrees(33.3, 101.7);
  const AngularGrid grid = AngularGrid::make(deg_to_rad(1.0), doa);
  CHECK(grid.elevations[grid.doa_elevation_index] == doctest::Approx(doa.elevation));
  CHECK(grid.azimuths[grid.doa_azimuth_index] == doctest::Approx(doa.azimuth));
  for (double a : grid.azimuths) {
    CHECK(a >= 0.0);
    CHECK(a < 2.0 * pi);
  }
}

TEST_CASE("beampattern grid agrees with pointwise responses") {
  const ArrayGeometry g = build_geometry({{0.0, 0.05}, 16000.0, 343.0});
  const Direction doa = Direction::from_degrees(30.0, 10.0);
  const AngularGrid grid = AngularGrid::make(deg_to_rad(10.0), doa);
  const Eigen::VectorXcd h = steering_vector(g, 1500.0, doa) / 15.0;
  const Eigen::MatrixXcd b = beampattern_grid(h, g, 1500.0, grid);
  for (std::size_t i = 0; i < grid.elevations.size(); ++i)
    for (std::size_t j = 0; j < grid.azimuths.size(); ++j) {
      const Direction dir{grid.elevations[i], grid.azimuths[j]};
      CHECK(std::abs(b(i, j) - response(h, steering_vector(g, 1500.0, dir))) < 1e-12);
    }
  const SteeringField field = build_steering_field(g, {1500.0}, grid);
  const Eigen::VectorXcd flat = beampattern(h, field.values[0]);
  CHECK(std::abs(flat[field.column(3, 4)] - b(3, 4)) < 1e-12);
}

TEST_CASE("beampattern csv is normalized to the DoA") {
  const ArrayGeometry g = build_geometry({{0.0, 0.05}, 16000.0, 343.0});
  const Direction doa = Direction::from_degrees(40.0, 90.0);
  const AngularGrid grid = AngularGrid::make(deg_to_rad(30.0), doa);
  const Eigen::VectorXcd h = 3.0 * steering_vector(g, 2000.0, doa);
  std::ostringstream out;
  write_beampattern_csv(out, grid, beampattern_grid(h, g, 2000.0, grid));
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("elevation_deg,", 0) == 0);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (rows == grid.doa_elevation_index) {
      std::istringstream cells(line);
      std::string cell;
      for (std::size_t c = 0; c <= grid.doa_azimuth_index + 1; ++c) std::getline(cells, cell, ',');
      CHECK(std::stod(cell) == doctest::Approx(0.0));
    }
    ++rows;
  }
  CHECK(rows == grid.elevations.size());
}

TEST_CASE("direction validation") {
  CHECK_THROWS_AS(Direction::from_degrees(-1.0, 0.0).validate(), ArgumentError);
  CHECK_THROWS_AS((Direction{0.1, 2.0 * pi}).validate(), ArgumentError);
  CHECK_THROWS_AS((Direction{3.2, 0.0}).validate(), ArgumentError);
  CHECK(Direction::from_degrees(10.0, 370.0).azimuth == doctest::Approx(deg_to_rad(10.0)));
  CHECK_NOTHROW(Direction::from_degrees(90.0, 359.0).validate());
}
