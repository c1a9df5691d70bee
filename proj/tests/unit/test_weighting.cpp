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
#include <numeric>
#include <random>

#include <doctest.h>

#include "ccma/error.hpp"
#include "ccma/geometry.hpp"
#include "ccma/gradcheck.hpp"
#include "ccma/weighting.hpp"

using namespace ccma;

namespace {

ArrayGeometry paper_array() { return build_geometry({{0.0, 0.05, 0.10, 0.15, 0.20}, 16000.0, 343.0}); }

}  // namespace

TEST_CASE("constrain lands on the simplex with widths above the floor") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> u(4), v(4), w(4), s(4);
    for (auto& x : u) x = n(rng);
    for (auto& x : v) x = n(rng);
    constrain<double>(u, v, w, s);
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (double x : w) CHECK(x > 0.0);
    for (double x : s) CHECK(x > kSigmaFloor);
  }
}

TEST_CASE("constrain handles large logits") {
  std::vector<double> u{800.0, 0.0, -800.0}, v{-50.0, 0.0, 60.0}, w(3), s(3);
  constrain<double>(u, v, w, s);
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(std::isfinite(w[2]));
  CHECK(s[2] == doctest::Approx(60.0 + kSigmaFloor));
  CHECK(s[0] >= kSigmaFloor);
}

TEST_CASE("unconstrain inverts constrain") {
  const std::vector<double> w{0.1, 0.2, 0.3, 0.4}, s{0.05, 0.5, 1.0, 3.0};
  std::vector<double> u(4), v(4), w2(4), s2(4);
  unconstrain(w, s, u, v);
  constrain<double>(u, v, w2, s2);
  for (int r = 0; r < 4; ++r) {
    CHECK(w2[r] == doctest::Approx(w[r]).epsilon(1e-13));
    CHECK(s2[r] == doctest::Approx(s[r]).epsilon(1e-13));
  }
  CHECK(std::accumulate(u.begin(), u.end(), 0.0) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("softplus is stable and smooth") {
  CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(softplus(-800.0) >= 0.0);
  CHECK(softplus(800.0) == doctest::Approx(800.0));
  CHECK(softplus_inverse(softplus(0.37)) == doctest::Approx(0.37));
}

TEST_CASE("angular distances are range normalized per ring") {
  const ArrayGeometry g = paper_array();
  const Direction doa = Direction::from_degrees(45.0, 45.0);
  const auto deltas = angular_distances(g, doa);
  REQUIRE(deltas.size() == g.total_mics());
  CHECK(deltas[0] == 0.0);
  for (std::size_t r = 1; r < g.ring_count(); ++r) {
    const auto begin = deltas.begin() + static_cast<std::ptrdiff_t>(g.ring_offsets()[r]);
    const auto end = begin + static_cast<std::ptrdiff_t>(g.rings()[r].mic_count());
    CHECK(*std::min_element(begin, end) == doctest::Approx(0.0));
    CHECK(*std::max_element(begin, end) == doctest::Approx(1.0));
  }
}

TEST_CASE("window is centered on the DoA azimuth and symmetric about it") {
  const ArrayGeometry g = build_geometry({{0.1}, 16000.0, 343.0});
  const std::size_t count = g.rings()[0].mic_count();
  // DoA azimuth on a mic so the neighbors pair up exactly.
  const double az = g.rings()[0].angles[3];
  const Direction doa{deg_to_rad(50.0), az};
  const auto deltas = angular_distances(g, doa);
  CHECK(deltas[3] == doctest::Approx(0.0));
  for (std::size_t k = 1; k < count / 4; ++k)
    CHECK(deltas[(3 + k) % count] == doctest::Approx(deltas[(3 + count - k) % count]));
  CHECK(deltas[4] > deltas[3]);
  CHECK(deltas[5] > deltas[4]);
}

TEST_CASE("filter coefficients are distortionless") {
  const ArrayGeometry g = paper_array();
  const Direction doa = Direction::from_degrees(45.0, 45.0);
  const auto deltas = angular_distances(g, doa);
  const std::vector<double> w{0.1, 0.3, 0.2, 0.25, 0.15}, s{0.4, 0.2, 0.8, 1.5, 0.05};
  const auto c = filter_coefficients<double>(g, deltas, w, s);
  CHECK(std::accumulate(c.begin(), c.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  for (double x : c) CHECK(x >= 0.0);
  for (std::size_t r = 0; r < g.ring_count(); ++r) {
    double ring_total = 0.0;
    for (std::size_t m = 0; m < g.rings()[r].mic_count(); ++m) ring_total += c[g.flat_index(r, m)];
    CHECK(ring_total > 0.0);
  }

  BandParams band{w, s};
  const Eigen::VectorXcd h = assemble_filter(g, band, 2500.0, doa);
  CHECK(std::abs(h.dot(steering_vector(g, 2500.0, doa)) - 1.0) < 1e-14);
}

TEST_CASE("filter coefficient gradient") {
  const ArrayGeometry g = build_geometry({{0.0, 0.05, 0.1}, 16000.0, 343.0});
  const auto deltas = angular_distances(g, Direction::from_degrees(30.0, 200.0));
  const ad::ScalarFunction f = [&](std::span<const ad::Var> x) {
    std::vector<ad::Var> w(3), s(3);
    constrain<ad::Var>(x.subspan(0, 3), x.subspan(3, 3), w, s);
    const auto c = filter_coefficients<ad::Var>(g, deltas, w, s);
    ad::Var acc = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) acc = acc + c[k] * std::cos(0.3 * k);
    return acc;
  };
  const std::vector<double> x{0.2, -0.4, 0.1, -1.0, 0.3, 0.7};
  CHECK(ad::gradcheck(f, x).max_error < 1e-7);
}

TEST_CASE("params validation and json round trip") {
  DesignParams p{{1000.0, 2000.0}, {{{0.5, 0.5}, {0.3, 0.4}}, {{0.2, 0.8}, {1.0, 2.0}}}};
  CHECK_NOTHROW(p.validate(2));
  CHECK_THROWS_AS(p.validate(3), DimensionError);
  const DesignParams q = params_from_json(params_to_json(p));
  CHECK(q.frequencies == p.frequencies);
  CHECK(q.bands[1].ring_weights == p.bands[1].ring_weights);
  CHECK(q.bands[1].window_widths == p.bands[1].window_widths);

  DesignParams bad = p;
  bad.bands[0].ring_weights = {0.7, 0.7};
  CHECK_THROWS_AS(bad.validate(2), ValidationError);
  bad = p;
  bad.bands[0].window_widths[0] = 0.0;
  CHECK_THROWS_AS(bad.validate(2), ValidationError);
}
