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

#include "ccma/design_problem.hpp"

#include <algorithm>
#include <string>
#include <type_traits>

#include "ccma/error.hpp"

namespace ccma {

namespace {

template <class T>
T modulus_squared(const T& re, const T& im) {
  if constexpr (std::is_same_v<T, ad::Var>) {
    return ad::norm(ad::CVar{re, im});
  } else {
    return re * re + im * im;
  }
}

}  // namespace

DesignProblem::DesignProblem(ArrayGeometry geometry, const Direction& doa, std::vector<double> frequencies,
                             LossConfig loss, MetricOptions options)
    : geometry_(std::move(geometry)),
      doa_(doa),
      frequencies_(std::move(frequencies)),
      loss_(loss),
      options_(options) {
  doa_.validate();
  loss_.validate();
  if (frequencies_.empty()) throw ValidationError("frequencies", "at least one band is required");
  const double nyquist = 0.5 * geometry_.sample_rate();
  for (double f : frequencies_)
    if (!(f > 0.0 && f <= nyquist)) throw ValidationError("frequencies", "each frequency must lie in (0, fs/2]");
  if (loss_.variant == LossVariant::kL3 && frequencies_.size() < 2)
    throw ValidationError("frequencies", "L3 needs at least two bands");

  deltas_ = angular_distances(geometry_, doa_);
  const auto [elevation_cut, azimuth_cut] = doa_cuts(doa_, options_);
  const auto n = static_cast<Eigen::Index>(geometry_.total_mics());

  bands_.reserve(frequencies_.size());
  for (double f : frequencies_) {
    Band band;
    band.frequency = f;
    const Eigen::VectorXcd d = steering_vector(geometry_, f, doa_);
    const Eigen::MatrixXd gamma = gamma_matrix(geometry_, f);
    band.noise.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) band.noise(i, j) = (std::conj(d(i)) * gamma(i, j) * d(j)).real();

    const auto [sigma_theta, sigma_phi] = options_.schedule(f, geometry_.diameter(), geometry_.sound_speed());
    band.elevation = make_cut(f, d, elevation_cut, false, sigma_theta);
    band.azimuth = make_cut(f, d, azimuth_cut, true, sigma_phi);
    bands_.push_back(std::move(band));
  }
}

DesignProblem::Cut DesignProblem::make_cut(double frequency, const Eigen::VectorXcd& d_doa, const PatternCut& cut,
                                           bool azimuth_cut, double mask_width) const {
  Cut out;
  out.mask_width = mask_width;
  const std::vector<double> offsets = cut.offsets();
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < offsets.size(); ++i)
    if (std::abs(offsets[i]) <= kMaskSupport * mask_width) {
      if (i == cut.doa_index) out.doa_sample = kept.size();
      kept.push_back(i);
    }
  const auto n = static_cast<Eigen::Index>(geometry_.total_mics());
  out.re.resize(n, static_cast<Eigen::Index>(kept.size()));
  out.im.resize(n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const std::size_t i = kept[k];
    out.offsets.push_back(offsets[i]);
    const Direction dir =
        azimuth_cut ? Direction{doa_.elevation, cut.angles[i]} : Direction{cut.angles[i], doa_.azimuth};
    const Eigen::VectorXcd rotated = d_doa.conjugate().cwiseProduct(steering_vector(geometry_, frequency, dir));
    out.re.col(static_cast<Eigen::Index>(k)) = rotated.real();
    out.im.col(static_cast<Eigen::Index>(k)) = rotated.imag();
  }
  return out;
}

template <class T>
BeamwidthFit<T> DesignProblem::cut_width(const Cut& cut, std::span<const T> coeffs, std::size_t* floored) const {
  using std::log10;
  using std::max;
  const auto rows = static_cast<std::size_t>(cut.re.rows());
  std::vector<T> power;
  power.reserve(cut.offsets.size());
  for (std::size_t k = 0; k < cut.offsets.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    const T re = ad::dot(coeffs, std::span<const double>(cut.re.col(col).data(), rows));
    const T im = ad::dot(coeffs, std::span<const double>(cut.im.col(col).data(), rows));
    power.push_back(modulus_squared(re, im));
  }
  const T reference = power[cut.doa_sample];
  if (!(ad::value_of(reference) > 0.0)) throw NumericalError("zero response at the DoA");
  std::vector<T> levels;
  levels.reserve(power.size());
  for (const T& p : power) {
    const T ratio = p / reference;
    if (ad::value_of(ratio) < kLevelFloor) ++*floored;
    levels.push_back(10.0 * log10(max(ratio, T(kLevelFloor))));
  }
  return beamwidth_parabola<T>(cut.offsets, levels, cut.mask_width, options_.level_drop_db);
}

template <class T>
BandMetrics<T> DesignProblem::band_metrics(std::size_t band, std::span<const T> weights,
                                           std::span<const T> widths) const {
  std::size_t floored = 0;
  return band_metrics_impl<T>(band, weights, widths, &floored);
}

template <class T>
BandMetrics<T> DesignProblem::band_metrics_impl(std::size_t band, std::span<const T> weights,
                                                std::span<const T> widths, std::size_t* floored) const {
  const Band& b = bands_.at(band);
  const std::vector<T> c = filter_coefficients<T>(geometry_, deltas_, weights, widths);
  const std::span<const T> cs(c);

  const T gain = ad::sum(cs);
  const T gain_sq = gain * gain;
  BandMetrics<T> m;
  const T power = ad::squared_norm(cs);
  m.df = gain_sq / regularized_noise_power(ad::quadratic_form(cs, b.noise), power);
  m.wng = gain_sq / power;
  const BeamwidthFit<T> theta = cut_width<T>(b.elevation, cs, floored);
  const BeamwidthFit<T> phi = cut_width<T>(b.azimuth, cs, floored);
  m.theta = theta.width;
  m.phi = phi.width;
  m.theta_concave = theta.concave;
  m.phi_concave = phi.concave;
  return m;
}

template <class T>
Evaluation<T> DesignProblem::evaluate(std::span<const T> unconstrained) const {
  if (unconstrained.size() != parameter_count())
    throw DimensionError("DesignProblem::evaluate: expected " + std::to_string(parameter_count()) + " parameters");
  const std::size_t rings = ring_count();
  Evaluation<T> out;
  out.bands.reserve(band_count());
  std::vector<T> weights(rings), widths(rings);
  std::vector<std::size_t> floored(band_count(), 0);
  for (std::size_t b = 0; b < band_count(); ++b) {
    const auto block = unconstrained.subspan(2 * rings * b, 2 * rings);
    constrain<T>(block.first(rings), block.last(rings), weights, widths);
    out.bands.push_back(band_metrics_impl<T>(b, weights, widths, &floored[b]));
  }
  finish(out, floored);
  return out;
}

template <class T>
void DesignProblem::finish(Evaluation<T>& eval, const std::vector<std::size_t>& floored) const {
  eval.loss = total_loss<T>(eval.bands, loss_);
  std::vector<int>& sig = eval.signature;
  for (std::size_t b = 0; b < eval.bands.size(); ++b) {
    sig.push_back(static_cast<int>(eval.loss.branches[b]));
    sig.push_back(eval.bands[b].theta_concave ? 1 : 0);
    sig.push_back(eval.bands[b].phi_concave ? 1 : 0);
    sig.push_back(static_cast<int>(floored[b]));
  }
  const std::vector<T>& p = eval.loss.performance;
  for (std::size_t i = 2; i <= p.size() / 2; ++i) {
    const double d = ad::value_of(p[i - 1]) - ad::value_of(p[p.size() - i]);
    sig.push_back(d > 0.0 ? 1 : (d < 0.0 ? -1 : 0));
  }
}

void DesignProblem::check_params(const DesignParams& params) const {
  params.validate(ring_count());
  if (params.bands.size() != band_count())
    throw DimensionError("params have " + std::to_string(params.bands.size()) + " bands, config has " +
                         std::to_string(band_count()));
  for (std::size_t b = 0; b < band_count(); ++b)
    if (std::abs(params.frequencies[b] - frequencies_[b]) > 1e-9 * frequencies_[b])
      throw DimensionError("params band " + std::to_string(b) + " frequency does not match the config");
}

Evaluation<double> DesignProblem::evaluate_params(const DesignParams& params) const {
  check_params(params);
  Evaluation<double> out;
  std::vector<std::size_t> floored(band_count(), 0);
  for (std::size_t b = 0; b < band_count(); ++b)
    out.bands.push_back(
        band_metrics_impl<double>(b, params.bands[b].ring_weights, params.bands[b].window_widths, &floored[b]));
  finish(out, floored);
  return out;
}

MetricCurves DesignProblem::metric_curves(const DesignParams& params) const {
  const Evaluation<double> eval = evaluate_params(params);
  MetricCurves curves;
  for (std::size_t b = 0; b < band_count(); ++b) curves.push_back(frequencies_[b], eval.bands[b]);
  return curves;
}

DesignParams DesignProblem::to_params(std::span<const double> unconstrained) const {
  if (unconstrained.size() != parameter_count()) throw DimensionError("DesignProblem::to_params: size mismatch");
  const std::size_t rings = ring_count();
  DesignParams params;
  params.frequencies = frequencies_;
  for (std::size_t b = 0; b < band_count(); ++b) {
    BandParams band{std::vector<double>(rings), std::vector<double>(rings)};
    const auto block = unconstrained.subspan(2 * rings * b, 2 * rings);
    constrain<double>(block.first(rings), block.last(rings), band.ring_weights, band.window_widths);
    params.bands.push_back(std::move(band));
  }
  return params;
}

std::vector<double> DesignProblem::to_unconstrained(const DesignParams& params) const {
  check_params(params);
  const std::size_t rings = ring_count();
  std::vector<double> x(parameter_count());
  for (std::size_t b = 0; b < band_count(); ++b) {
    const std::span<double> block = std::span<double>(x).subspan(2 * rings * b, 2 * rings);
    unconstrain(params.bands[b].ring_weights, params.bands[b].window_widths, block.first(rings), block.last(rings));
  }
  return x;
}

template Evaluation<double> DesignProblem::evaluate<double>(std::span<const double>) const;
template Evaluation<ad::Var> DesignProblem::evaluate<ad::Var>(std::span<const ad::Var>) const;
template BandMetrics<double> DesignProblem::band_metrics<double>(std::size_t, std::span<const double>,
                                                                 std::span<const double>) const;
template BandMetrics<ad::Var> DesignProblem::band_metrics<ad::Var>(std::size_t, std::span<const ad::Var>,
                                                                   std::span<const ad::Var>) const;

}  // namespace ccma
