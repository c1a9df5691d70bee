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

#ifndef CCMA_METRICS_HPP
#define CCMA_METRICS_HPP

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ccma/autodiff.hpp"
#include "ccma/geometry.hpp"
#include "ccma/wavefield.hpp"

namespace ccma {

/// Diagonal loading applied to the coherence matrix inside the DF quadratic form.
inline constexpr double kGammaRegularization = 1e-10;
/// Level drop used by the optimizer's beamwidth estimate.
inline constexpr double kBeamwidthDropDb = 6.0;
/// Level drop of a half-amplitude crossing, 20 log10(2).
inline const double kHalfAmplitudeDropDb = 20.0 * std::log10(2.0);
/// Samples farther than this many mask widths from the DoA carry weight
/// below exp(-128) and are left out of the fit.
inline constexpr double kMaskSupport = 4.0;
/// Power floor relative to the DoA response before taking dB (-120 dB).
inline constexpr double kLevelFloor = 1e-12;

/// Diffuse-field coherence: sinc(2 pi f l_ij / c) with unnormalized sinc.
Eigen::MatrixXd gamma_matrix(const ArrayGeometry& geometry, double frequency);

/// Diffuse noise power h^H Gamma h, diagonally loaded with
/// kGammaRegularization h^H h only when it is not above that level.
template <class T>
T regularized_noise_power(const T& quadratic, const T& white_power) {
  if (ad::value_of(quadratic) > kGammaRegularization * ad::value_of(white_power)) return quadratic;
  return quadratic + kGammaRegularization * white_power;
}

/// |h^H d|^2 / regularized_noise_power.
double directivity_factor(const Eigen::VectorXcd& filter, const Eigen::VectorXcd& steering_doa,
                          const Eigen::MatrixXd& gamma);
/// Reference DF by midpoint quadrature of |B|^2 sin(theta) over the whole
/// sphere at `resolution` radians.
double directivity_factor_quadrature(const ArrayGeometry& geometry, double frequency, const Eigen::VectorXcd& filter,
                                     const Direction& doa, double resolution);

/// |h^H d|^2 / h^H h.
double white_noise_gain(const Eigen::VectorXcd& filter, const Eigen::VectorXcd& steering_doa);

/// exp(-(x / sigma)^4 / 2)
inline double super_gaussian(double offset, double sigma) {
  const double z = offset / sigma;
  return std::exp(-0.5 * (z * z) * (z * z));
}

/// One-dimensional cut through the DoA: sample angles and the DoA position.
struct PatternCut {
  std::vector<double> angles;
  std::size_t doa_index = 0;
  bool periodic = false;  // azimuth cuts wrap offsets into (-pi, pi]

  std::vector<double> offsets() const;
};

template <class T>
struct BeamwidthFit {
  T width;
  T curvature;  // fitted a in dB / rad^2
  bool concave = true;
};

/// Beamwidth from a super-Gaussian-weighted least-squares fit of
/// level ~ a x^2 + b around the DoA; width = 2 sqrt(drop / |a|).
/// A non-concave fit (a >= 0) returns width pi with `concave = false`.
/// Samples beyond kMaskSupport mask widths are ignored.
template <class T>
BeamwidthFit<T> beamwidth_parabola(std::span<const double> offsets, std::span<const T> level_db, double mask_width,
                                   double level_drop_db = kBeamwidthDropDb) {
  using std::sqrt;
  if (offsets.size() != level_db.size()) throw DimensionError("beamwidth_parabola: size mismatch");
  if (!(mask_width > 0.0) || !(level_drop_db > 0.0))
    throw ArgumentError("beamwidth_parabola: mask width and level drop must be > 0");

  std::vector<T> levels;
  std::vector<double> w;
  std::vector<double> wx2;
  double sw = 0.0, sx2 = 0.0, sx4 = 0.0;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const double x = offsets[i];
    if (std::abs(x) > kMaskSupport * mask_width) continue;
    const double wi = super_gaussian(x, mask_width);
    const double x2 = x * x;
    levels.push_back(level_db[i]);
    w.push_back(wi);
    wx2.push_back(wi * x2);
    sw += wi;
    sx2 += wi * x2;
    sx4 += wi * x2 * x2;
  }
  const double denominator = sw * sx4 - sx2 * sx2;
  if (!(denominator > 0.0)) throw NumericalError("beamwidth_parabola: fewer than two distinct offsets under the mask");

  const T sb = ad::dot(std::span<const T>(levels), std::span<const double>(w));
  const T sx2b = ad::dot(std::span<const T>(levels), std::span<const double>(wx2));
  const T a = (sw * sx2b - sx2 * sb) / denominator;
  if (!(ad::value_of(a) < 0.0)) return {T(std::numbers::pi), a, false};
  return {2.0 * sqrt(level_drop_db / (-a)), a, true};
}

/// Convenience overload taking a cut; `level_db` is indexed like `cut.angles`.
template <class T>
BeamwidthFit<T> beamwidth_parabola(const PatternCut& cut, std::span<const T> level_db, double mask_width,
                                   double level_drop_db = kBeamwidthDropDb) {
  const std::vector<double> offsets = cut.offsets();
  return beamwidth_parabola<T>(offsets, level_db, mask_width, level_drop_db);
}

struct BeamwidthCrossing {
  double width = 0.0;
  bool capped = false;  // no crossing on at least one side
};

/// Reference beamwidth: walks outward from the DoA sample to the first
/// samples at or below -drop dB on each side and interpolates linearly.
BeamwidthCrossing beamwidth_oracle(std::span<const double> offsets, std::span<const double> level_db,
                                   std::size_t doa_index, double level_drop_db = kHalfAmplitudeDropDb);

/// Mask width for the parabola fit: clamp(k c / (f D), lo, hi).
struct SigmaSchedule {
  double k = 0.8;
  double lo = deg_to_rad(4.0);
  double hi = deg_to_rad(30.0);

  /// Returns (sigma_theta, sigma_phi); both follow the same rule.
  std::pair<double, double> operator()(double frequency, double diameter, double sound_speed) const;
};

/// Settings shared by every beamwidth evaluation.
struct MetricOptions {
  double grid_resolution = deg_to_rad(1.0);
  double elevation_min = 0.0;
  double elevation_max = std::numbers::pi / 2.0;
  double level_drop_db = kBeamwidthDropDb;
  SigmaSchedule schedule;
};

/// Elevation cut (azimuth fixed at the DoA) and azimuth cut (elevation fixed).
std::pair<PatternCut, PatternCut> doa_cuts(const Direction& doa, const MetricOptions& options);

template <class T>
struct BandMetrics {
  T theta;  // elevation beamwidth, radians
  T phi;    // azimuth beamwidth, radians
  T df;
  T wng;
  bool theta_concave = true;
  bool phi_concave = true;
};

/// Metrics of an arbitrary filter at one frequency using the same cuts,
/// masks and level floor as the optimizer.
BandMetrics<double> evaluate_filter(const ArrayGeometry& geometry, const Direction& doa, double frequency,
                                    const Eigen::VectorXcd& filter, const MetricOptions& options = {});

/// Per-band metric curves. DF and WNG are linear, widths in radians.
struct MetricCurves {
  std::vector<double> frequencies;
  std::vector<double> df;
  std::vector<double> wng;
  std::vector<double> theta;
  std::vector<double> phi;

  std::size_t size() const noexcept { return frequencies.size(); }
  void push_back(double frequency, const BandMetrics<double>& m);
};

inline double to_db(double linear) { return 10.0 * std::log10(linear); }

/// Columns: frequency,DF_dB,WNG_dB,theta_deg,phi_deg (6 decimals).
void write_metrics_csv(std::ostream& out, const MetricCurves& curves);

}  // namespace ccma

#endif  // CCMA_METRICS_HPP
