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
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include "ccma/baselines.hpp"
#include "ccma/error.hpp"
#include "ccma/gradcheck.hpp"
#include "ccma/metrics.hpp"

using namespace ccma;
using std::numbers::pi;

namespace {

ArrayGeometry paper_array() { return build_geometry({{0.0, 0.05, 0.10, 0.15, 0.20}, 16000.0, 343.0}); }

std::vector<double> grid(double half_span, double step) {
  std::vector<double> x;
  const int n = static_cast<int>(std::lround(half_span / step));
  for (int i = -n; i <= n; ++i) x.push_back(i * step);
  return x;
}

}  // namespace

TEST_CASE("coherence matrix is symmetric PSD with a unit diagonal") {
  const ArrayGeometry g = paper_array();
  for (double f : {200.0, 1000.0, 8000.0}) {
    const Eigen::MatrixXd gamma = gamma_matrix(g, f);
    CHECK(gamma.isApprox(gamma.transpose(), 0.0));
    CHECK((gamma.diagonal().array() == 1.0).all());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gamma, Eigen::EigenvaluesOnly);
    CHECK(eig.eigenvalues().minCoeff() > -1e-10);
  }
}

TEST_CASE("single mic has unit DF and WNG") {
  const ArrayGeometry g = build_geometry({{0.0}, 16000.0, 343.0});
  const Direction doa = Direction::from_degrees(45.0, 45.0);
  const Eigen::VectorXcd d = steering_vector(g, 1000.0, doa);
  const Eigen::VectorXcd h = Eigen::VectorXcd::Ones(1);
  CHECK(std::abs(directivity_factor(h, d, gamma_matrix(g, 1000.0)) - 1.0) <= 1e-12);
  CHECK(std::abs(white_noise_gain(h, d) - 1.0) <= 1e-12);
}

TEST_CASE("DAS WNG equals the mic count and DF is scale invariant") {
  const ArrayGeometry g = paper_array();
  const Direction doa = Direction::from_degrees(45.0, 45.0);
  for (double f : {500.0, 3000.0, 7000.0}) {
    const Eigen::VectorXcd d = steering_vector(g, f, doa);
    const Eigen::VectorXcd h = das_filter(g, f, doa);
    CHECK(std::abs(white_noise_gain(h, d) - 145.0) <= 1e-9);
    const Eigen::MatrixXd gamma = gamma_matrix(g, f);
    const double df = directivity_factor(h, d, gamma);
    const double scaled = directivity_factor(std::complex<double>(-3.7, 0.4) * h, d, gamma);
    CHECK(std::abs(scaled - df) / df <= 1e-12);
  }
}

TEST_CASE("DF agrees with the spherical integral") {
  const ArrayGeometry g = build_geometry({{0.0, 0.05, 0.10}, 16000.0, 343.0});
  const Direction doa = Direction::from_degrees(45.0, 45.0);
  for (double f : {1000.0, 3000.0}) {
    const Eigen::VectorXcd h = das_filter(g, f, doa);
    const double closed = directivity_factor(h, steering_vector(g, f, doa), gamma_matrix(g, f));
    const double quad = directivity_factor_quadrature(g, f, h, doa, deg_to_rad(2.0));
    CHECK(std::abs(quad - closed) / closed < 0.02);
  }
}

TEST_CASE("parabola fit is exact on quadratic cuts") {
  const auto x = grid(pi / 2.0, deg_to_rad(1.0));
  for (double width_deg : {8.0, 25.0, 40.0, 90.0, 150.0}) {
    const double w = deg_to_rad(width_deg);
    const double a = -kBeamwidthDropDb / (0.25 * w * w);
    std::vector<double> levels;
    for (double xi : x) levels.push_back(a * xi * xi - 3.0);
    const auto fit = beamwidth_parabola<double>(x, levels, deg_to_rad(10.0));
    CHECK(fit.concave);
    CHECK(std::abs(fit.width - w) / w <= 1e-9);
    CHECK(fit.curvature == doctest::Approx(a));
  }
}

TEST_CASE("non-concave cuts report pi") {
  const auto x = grid(0.5, 0.01);
  std::vector<double> levels;
  for (double xi : x) levels.push_back(4.0 * xi * xi);
  const auto fit = beamwidth_parabola<double>(x, levels, 0.2);
  CHECK_FALSE(fit.concave);
  CHECK(fit.width == pi);
}

TEST_CASE("mask truncation ignores far samples") {
  const auto x = grid(1.0, 0.01);
  std::vector<double> levels, spoiled;
  for (double xi : x) {
    levels.push_back(-30.0 * xi * xi);
    spoiled.push_back(std::abs(xi) > 0.45 ? 1e6 : -30.0 * xi * xi);
  }
  const double sigma = 0.1;
  CHECK(beamwidth_parabola<double>(x, spoiled, sigma).width ==
        doctest::Approx(beamwidth_parabola<double>(x, levels, sigma).width).epsilon(1e-15));
}

TEST_CASE("parabola gradient matches finite differences") {
  const auto x = grid(0.6, 0.02);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 0.3);
  std::vector<double> levels;
  for (double xi : x) levels.push_back(-40.0 * xi * xi + 5.0 * xi * xi * xi + n(rng));
  const ad::ScalarFunction f = [&](std::span<const ad::Var> l) {
    return beamwidth_parabola<ad::Var>(x, l, 0.15).width;
  };
  CHECK(ad::gradcheck(f, levels).max_error < 1e-5);
}

TEST_CASE("crossing oracle") {
  const std::vector<double> x{-3, -2, -1, 0, 1, 2, 3};
  const std::vector<double> l{-12, -8, -4, 0, -2, -4, -8};
  const auto c = beamwidth_oracle(x, l, 3, 6.0);
  CHECK_FALSE(c.capped);
  CHECK(c.width == doctest::Approx(1.5 + 2.5));
  const auto capped = beamwidth_oracle(x, l, 3, 20.0);
  CHECK(capped.capped);
  CHECK(capped.width == doctest::Approx(6.0));
}

TEST_CASE("sigma schedule clamps") {
  const SigmaSchedule s;
  CHECK(s(100.0, 0.4, 343.0).first == doctest::Approx(deg_to_rad(30.0)));
  CHECK(s(8000.0, 0.4, 343.0).first == doctest::Approx(deg_to_rad(4.91)).epsilon(1e-3));
  CHECK(s(1e6, 0.4, 343.0).second == doctest::Approx(deg_to_rad(4.0)));
}

TEST_CASE("azimuth cut runs through the DoA in order") {
  const Direction doa = Direction::from_degrees(45.0, 10.0);
  const auto [el, az] = doa_cuts(doa, MetricOptions{});
  const auto off = az.offsets();
  CHECK(off[az.doa_index] == doctest::Approx(0.0));
  for (std::size_t i = 1; i < off.size(); ++i) CHECK(off[i] > off[i - 1]);
  CHECK(el.angles[el.doa_index] == doctest::Approx(doa.elevation));
}

TEST_CASE("DAS beamwidth narrows with frequency") {
  const ArrayGeometry g = paper_array();
  const Direction doa = Direction::from_degrees(45.0, 45.0);
  double previous = 10.0;
  for (double f : {2000.0, 4000.0, 6000.0}) {
    const auto m = evaluate_filter(g, doa, f, das_filter(g, f, doa));
    CHECK(m.phi < previous);
    previous = m.phi;
    CHECK(m.wng == doctest::Approx(145.0));
  }
}

TEST_CASE("metrics csv") {
  MetricCurves c;
  c.push_back(1000.0, BandMetrics<double>{deg_to_rad(40.0), deg_to_rad(30.0), 10.0, 100.0});
  std::ostringstream out;
  write_metrics_csv(out, c);
  CHECK(out.str() == "frequency,DF_dB,WNG_dB,theta_deg,phi_deg\n1000.000000,10.000000,20.000000,40.000000,30.000000\n");
}
