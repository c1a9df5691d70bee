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

#ifndef CCMA_DESIGN_PROBLEM_HPP
#define CCMA_DESIGN_PROBLEM_HPP

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ccma/geometry.hpp"
#include "ccma/loss.hpp"
#include "ccma/metrics.hpp"
#include "ccma/wavefield.hpp"
#include "ccma/weighting.hpp"

namespace ccma {

template <class T>
struct Evaluation {
  std::vector<BandMetrics<T>> bands;
  LossTerms<T> loss;
  /// Every discrete choice made on detached values: loss branches, fit
  /// concavity, floored level samples and the signs inside |P_i - P_j|.
  /// Equal signatures mean the same smooth piece of the loss.
  std::vector<int> signature;
};

/// The full differentiable map from design parameters to loss.
///
/// All quantities that do not depend on the parameters are precomputed per
/// band: the angular distances, the coherence matrix rotated into the
/// steering frame, and the cut responses of every masked sample. With
/// h = c .* d(DoA) and real c, the response at a cut sample is
/// B_i = sum_m c_m conj(d_m(DoA)) d_m(dir_i) and the DF denominator is
/// c^T Re(diag(conj d) Gamma diag(d)) c, so each band reduces to a handful
/// of dense dot products.
///
/// The unconstrained parameter vector is laid out band-major:
/// [u_0 .. u_{R-1}, v_0 .. v_{R-1}] for band 0, then band 1, ...
class DesignProblem {
 public:
  DesignProblem(ArrayGeometry geometry, const Direction& doa, std::vector<double> frequencies, LossConfig loss,
                MetricOptions options = {});

  const ArrayGeometry& geometry() const noexcept { return geometry_; }
  const Direction& doa() const noexcept { return doa_; }
  const std::vector<double>& frequencies() const noexcept { return frequencies_; }
  const LossConfig& loss_config() const noexcept { return loss_; }
  const MetricOptions& metric_options() const noexcept { return options_; }
  std::size_t band_count() const noexcept { return frequencies_.size(); }
  std::size_t ring_count() const noexcept { return geometry_.ring_count(); }
  std::size_t parameter_count() const noexcept { return 2 * ring_count() * band_count(); }

  /// Metrics and loss from unconstrained parameters.
  template <class T>
  Evaluation<T> evaluate(std::span<const T> unconstrained) const;

  /// Metrics of one band from constrained weights and widths.
  template <class T>
  BandMetrics<T> band_metrics(std::size_t band, std::span<const T> weights, std::span<const T> widths) const;

  /// Metrics and loss from constrained parameters (double only).
  Evaluation<double> evaluate_params(const DesignParams& params) const;
  MetricCurves metric_curves(const DesignParams& params) const;

  DesignParams to_params(std::span<const double> unconstrained) const;
  std::vector<double> to_unconstrained(const DesignParams& params) const;

 private:
  struct Cut {
    std::vector<double> offsets;  // masked samples only
    std::size_t doa_sample = 0;   // position of offset 0 within the masked samples
    double mask_width = 0.0;
    Eigen::MatrixXd re;  // M_T x samples
    Eigen::MatrixXd im;
  };
  struct Band {
    double frequency = 0.0;
    Eigen::MatrixXd noise;  // coherence rotated into the steering frame
    Cut elevation;
    Cut azimuth;
  };

  Cut make_cut(double frequency, const Eigen::VectorXcd& d_doa, const PatternCut& cut, bool azimuth_cut,
               double mask_width) const;
  template <class T>
  BeamwidthFit<T> cut_width(const Cut& cut, std::span<const T> coeffs, std::size_t* floored) const;
  template <class T>
  BandMetrics<T> band_metrics_impl(std::size_t band, std::span<const T> weights, std::span<const T> widths,
                                   std::size_t* floored) const;
  template <class T>
  void finish(Evaluation<T>& eval, const std::vector<std::size_t>& floored) const;
  void check_params(const DesignParams& params) const;

  ArrayGeometry geometry_;
  Direction doa_;
  std::vector<double> frequencies_;
  LossConfig loss_;
  MetricOptions options_;
  std::vector<double> deltas_;
  std::vector<Band> bands_;
};

}  // namespace ccma

#endif  // CCMA_DESIGN_PROBLEM_HPP
