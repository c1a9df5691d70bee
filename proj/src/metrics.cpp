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

#include "ccma/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ccma/error.hpp"

namespace ccma {

Eigen::MatrixXd gamma_matrix(const ArrayGeometry& geometry, double frequency) {
  if (!(frequency > 0.0)) throw ArgumentError("gamma_matrix: frequency must be > 0");
  const double scale = 2.0 * std::numbers::pi * frequency / geometry.sound_speed();
  return geometry.distances().unaryExpr([scale](double l) {
    const double x = scale * l;
    return x == 0.0 ? 1.0 : std::sin(x) / x;
  });
}

double directivity_factor(const Eigen::VectorXcd& filter, const Eigen::VectorXcd& steering_doa,
                          const Eigen::MatrixXd& gamma) {
  if (filter.size() != steering_doa.size() || gamma.rows() != filter.size() || gamma.cols() != filter.size())
    throw DimensionError("directivity_factor: dimension mismatch");
  const double numerator = std::norm(filter.dot(steering_doa));
  const double denominator = regularized_noise_power(
      (filter.adjoint() * gamma.cast<std::complex<double>>() * filter)(0).real(), filter.squaredNorm());
  if (!(denominator > 0.0)) throw NumericalError("directivity_factor: non-positive noise power");
  return numerator / denominator;
}

double directivity_factor_quadrature(const ArrayGeometry& geometry, double frequency, const Eigen::VectorXcd& filter,
                                     const Direction& doa, double resolution) {
  if (!(resolution > 0.0)) throw ArgumentError("directivity_factor_quadrature: resolution must be > 0");
  const auto n_theta = static_cast<std::size_t>(std::lround(std::numbers::pi / resolution));
  const auto n_phi = static_cast<std::size_t>(std::lround(2.0 * std::numbers::pi / resolution));
  const double dt = std::numbers::pi / static_cast<double>(n_theta);
  const double dp = 2.0 * std::numbers::pi / static_cast<double>(n_phi);
  double integral = 0.0;
  for (std::size_t i = 0; i < n_theta; ++i) {
    const double theta = (static_cast<double>(i) + 0.5) * dt;
    double ring = 0.0;
    for (std::size_t j = 0; j < n_phi; ++j) {
      const Direction dir{theta, (static_cast<double>(j) + 0.5) * dp};
      ring += std::norm(response(filter, steering_vector(geometry, frequency, dir)));
    }
    integral += ring * std::sin(theta) * dt * dp;
  }
  const double peak = std::norm(response(filter, steering_vector(geometry, frequency, doa)));
  return peak / (integral / (4.0 * std::numbers::pi));
}

double white_noise_gain(const Eigen::VectorXcd& filter, const Eigen::VectorXcd& steering_doa) {
  if (filter.size() != steering_doa.size()) throw DimensionError("white_noise_gain: dimension mismatch");
  const double power = filter.squaredNorm();
  if (!(power > 0.0)) throw NumericalError("white_noise_gain: zero filter");
  return std::norm(filter.dot(steering_doa)) / power;
}

std::vector<double> PatternCut::offsets() const {
  if (doa_index >= angles.size()) throw ArgumentError("PatternCut: DoA index out of range");
  std::vector<double> out(angles.size());
  const double origin = angles[doa_index];
  for (std::size_t i = 0; i < angles.size(); ++i)
    out[i] = periodic ? wrap_angle(angles[i] - origin) : angles[i] - origin;
  return out;
}

BeamwidthCrossing beamwidth_oracle(std::span<const double> offsets, std::span<const double> level_db,
                                   std::size_t doa_index, double level_drop_db) {
  if (offsets.size() != level_db.size()) throw DimensionError("beamwidth_oracle: size mismatch");
  if (doa_index >= offsets.size()) throw ArgumentError("beamwidth_oracle: DoA index out of range");
  const double threshold = -level_drop_db;
  BeamwidthCrossing result;

  auto half_width = [&](int direction) {
    const auto n = static_cast<long>(offsets.size());
    long prev = static_cast<long>(doa_index);
    for (long i = prev + direction; i >= 0 && i < n; prev = i, i += direction) {
      const auto ui = static_cast<std::size_t>(i);
      const auto up = static_cast<std::size_t>(prev);
      if (level_db[ui] <= threshold) {
        const double t = (threshold - level_db[up]) / (level_db[ui] - level_db[up]);
        return std::abs(offsets[up] + t * (offsets[ui] - offsets[up]) - offsets[doa_index]);
      }
    }
    result.capped = true;
    return std::abs(offsets[static_cast<std::size_t>(prev)] - offsets[doa_index]);
  };

  result.width = half_width(+1) + half_width(-1);
  return result;
}

std::pair<double, double> SigmaSchedule::operator()(double frequency, double diameter, double sound_speed) const {
  if (!(frequency > 0.0)) throw ArgumentError("SigmaSchedule: frequency must be > 0");
  if (!(lo > 0.0) || !(hi >= lo)) throw ArgumentError("SigmaSchedule: need 0 < lo <= hi");
  const double raw = diameter > 0.0 ? k * sound_speed / (frequency * diameter) : hi;
  const double sigma = std::clamp(raw, lo, hi);
  return {sigma, sigma};
}

std::pair<PatternCut, PatternCut> doa_cuts(const Direction& doa, const MetricOptions& options) {
  const AngularGrid grid = AngularGrid::make(options.grid_resolution, doa, options.elevation_min,
                                             options.elevation_max);
  PatternCut elevation{grid.elevations, grid.doa_elevation_index, false};

  // Order azimuths by wrapped offset so the cut runs monotonically through the DoA.
  std::vector<std::size_t> order(grid.azimuths.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto offset = [&](std::size_t i) { return wrap_angle(grid.azimuths[i] - doa.azimuth); };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return offset(a) < offset(b); });
  PatternCut azimuth;
  azimuth.periodic = true;
  for (std::size_t k = 0; k < order.size(); ++k) {
    azimuth.angles.push_back(grid.azimuths[order[k]]);
    if (order[k] == grid.doa_azimuth_index) azimuth.doa_index = k;
  }
  return {std::move(elevation), std::move(azimuth)};
}

namespace {

std::vector<double> cut_levels(const ArrayGeometry& geometry, double frequency, const Eigen::VectorXcd& filter,
                               const PatternCut& cut, bool azimuth_cut, const Direction& doa) {
  std::vector<double> power(cut.angles.size());
  for (std::size_t i = 0; i < cut.angles.size(); ++i) {
    const Direction dir = azimuth_cut ? Direction{doa.elevation, cut.angles[i]} : Direction{cut.angles[i], doa.azimuth};
    power[i] = std::norm(response(filter, steering_vector(geometry, frequency, dir)));
  }
  const double reference = power[cut.doa_index];
  if (!(reference > 0.0)) throw NumericalError("evaluate_filter: zero response at the DoA");
  std::vector<double> levels(power.size());
  for (std::size_t i = 0; i < power.size(); ++i) levels[i] = 10.0 * std::log10(std::max(power[i] / reference, kLevelFloor));
  return levels;
}

}  // namespace

BandMetrics<double> evaluate_filter(const ArrayGeometry& geometry, const Direction& doa, double frequency,
                                    const Eigen::VectorXcd& filter, const MetricOptions& options) {
  const auto [elevation, azimuth] = doa_cuts(doa, options);
  const auto [sigma_theta, sigma_phi] = options.schedule(frequency, geometry.diameter(), geometry.sound_speed());
  const Eigen::VectorXcd d = steering_vector(geometry, frequency, doa);

  const std::vector<double> elevation_levels = cut_levels(geometry, frequency, filter, elevation, false, doa);
  const std::vector<double> azimuth_levels = cut_levels(geometry, frequency, filter, azimuth, true, doa);
  const auto theta = beamwidth_parabola<double>(elevation, elevation_levels, sigma_theta, options.level_drop_db);
  const auto phi = beamwidth_parabola<double>(azimuth, azimuth_levels, sigma_phi, options.level_drop_db);

  BandMetrics<double> m;
  m.theta = theta.width;
  m.phi = phi.width;
  m.theta_concave = theta.concave;
  m.phi_concave = phi.concave;
  m.df = directivity_factor(filter, d, gamma_matrix(geometry, frequency));
  m.wng = white_noise_gain(filter, d);
  return m;
}

void MetricCurves::push_back(double frequency, const BandMetrics<double>& m) {
  frequencies.push_back(frequency);
  df.push_back(m.df);
  wng.push_back(m.wng);
  theta.push_back(m.theta);
  phi.push_back(m.phi);
}

void write_metrics_csv(std::ostream& out, const MetricCurves& curves) {
  out << "frequency,DF_dB,WNG_dB,theta_deg,phi_deg\n";
  for (std::size_t b = 0; b < curves.size(); ++b)
    fmt::print(out, "{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", curves.frequencies[b], to_db(curves.df[b]),
               to_db(curves.wng[b]), rad_to_deg(curves.theta[b]), rad_to_deg(curves.phi[b]));
}

}  // namespace ccma
