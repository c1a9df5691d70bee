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

#include <sstream>
#include <string>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ccma/commands.hpp"
#include "ccma/error.hpp"
#include "ccma/version.hpp"

namespace py = pybind11;
using namespace ccma;

namespace {

RunConfig parse_config(const std::string& text) { return config_from_json(nlohmann::json::parse(text)); }

py::dict curves_to_dict(const MetricCurves& m) {
  py::dict d;
  d["frequencies"] = m.frequencies;
  d["df"] = m.df;
  d["wng"] = m.wng;
  d["theta"] = m.theta;
  d["phi"] = m.phi;
  return d;
}

std::string params_text(const DesignParams& p) { return params_to_json(p).dump(); }

DesignParams parse_params(const std::string& text) { return params_from_json(nlohmann::json::parse(text)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Concentric circular microphone array beamformer design";
  m.attr("__version__") = kVersion;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.def("mics_per_ring", &mics_per_ring, py::arg("radius"), py::arg("min_wavelength"));

  py::class_<ArrayGeometry>(m, "ArrayGeometry")
      .def(py::init([](std::vector<double> radii, double sample_rate, double sound_speed) {
             return build_geometry({std::move(radii), sample_rate, sound_speed});
           }),
           py::arg("ring_radii"), py::arg("sample_rate") = 16000.0, py::arg("sound_speed") = kDefaultSoundSpeed)
      .def_property_readonly("ring_count", &ArrayGeometry::ring_count)
      .def_property_readonly("total_mics", &ArrayGeometry::total_mics)
      .def_property_readonly("mic_counts",
                             [](const ArrayGeometry& g) {
                               std::vector<std::size_t> counts;
                               for (const Ring& r : g.rings()) counts.push_back(r.mic_count());
                               return counts;
                             })
      .def_property_readonly("positions", &ArrayGeometry::positions)
      .def_property_readonly("distances", &ArrayGeometry::distances)
      .def_property_readonly("diameter", &ArrayGeometry::diameter)
      .def_property_readonly("sample_rate", &ArrayGeometry::sample_rate)
      .def_property_readonly("sound_speed", &ArrayGeometry::sound_speed);

  m.def(
      "steering_vector",
      [](const ArrayGeometry& g, double f, double elevation_deg, double azimuth_deg) {
        return steering_vector(g, f, Direction::from_degrees(elevation_deg, azimuth_deg));
      },
      py::arg("geometry"), py::arg("frequency"), py::arg("elevation_deg"), py::arg("azimuth_deg"));
  m.def(
      "das_filter",
      [](const ArrayGeometry& g, double f, double elevation_deg, double azimuth_deg) {
        return das_filter(g, f, Direction::from_degrees(elevation_deg, azimuth_deg));
      },
      py::arg("geometry"), py::arg("frequency"), py::arg("elevation_deg"), py::arg("azimuth_deg"));
  m.def("gamma_matrix", &gamma_matrix, py::arg("geometry"), py::arg("frequency"));
  m.def("directivity_factor", &directivity_factor, py::arg("filter"), py::arg("steering"), py::arg("gamma"));
  m.def("white_noise_gain", &white_noise_gain, py::arg("filter"), py::arg("steering"));
  m.def(
      "beamwidth_parabola",
      [](std::vector<double> offsets, std::vector<double> levels, double mask_width, double drop) {
        const auto fit = beamwidth_parabola<double>(offsets, levels, mask_width, drop);
        return py::make_tuple(fit.width, fit.concave);
      },
      py::arg("offsets"), py::arg("levels_db"), py::arg("mask_width"), py::arg("level_drop_db") = kBeamwidthDropDb);
  m.def(
      "beamwidth_oracle",
      [](std::vector<double> offsets, std::vector<double> levels, std::size_t doa_index, double drop) {
        const auto c = beamwidth_oracle(offsets, levels, doa_index, drop);
        return py::make_tuple(c.width, c.capped);
      },
      py::arg("offsets"), py::arg("levels_db"), py::arg("doa_index"), py::arg("level_drop_db") = kBeamwidthDropDb);

  m.def("resolve_config", [](const std::string& text) { return config_to_json(parse_config(text)).dump(); },
        py::arg("config_json"));
  m.def(
      "design",
      [](const std::string& config_text, const std::string& out_dir) {
        const RunConfig config = parse_config(config_text);
        std::ostringstream log;
        DesignResult r;
        {
          py::gil_scoped_release release;
          if (out_dir.empty()) {
            r = optimize(make_problem(config), config.optimize_options());
          } else {
            r = run_design(config, out_dir, log);
          }
        }
        py::dict d;
        d["params"] = params_text(r.params);
        d["metrics"] = curves_to_dict(r.metrics);
        d["loss"] = r.loss;
        d["iterations"] = r.record.iteration_count();
        d["stop_reason"] = r.record.stop_reason;
        std::vector<double> best;
        for (const auto& it : r.record.iterations) best.push_back(it.best_loss);
        d["best_loss"] = best;
        return d;
      },
      py::arg("config_json"), py::arg("out_dir") = "");
  m.def(
      "evaluate",
      [](const std::string& config_text, const std::string& params) {
        const RunConfig config = parse_config(config_text);
        const DesignParams p = parse_params(params);
        return curves_to_dict(make_problem(config, p.frequencies).metric_curves(p));
      },
      py::arg("config_json"), py::arg("params_json"));
  m.def(
      "baseline",
      [](const std::string& config_text, const std::string& kind) {
        const RunConfig config = parse_config(config_text);
        return curves_to_dict(baseline_curves(baseline_from_string(kind), make_geometry(config), config.doa(),
                                              config.frequencies, config.metric_options()));
      },
      py::arg("config_json"), py::arg("kind") = "das");
  m.def(
      "gradcheck",
      [](const std::string& config_text, std::size_t points, std::uint64_t seed) {
        const RunConfig config = parse_config(config_text);
        std::ostringstream log;
        const auto s = run_gradcheck(make_problem(config), points, seed, log);
        return py::make_tuple(s.max_error, s.point_errors, s.excluded_coordinates);
      },
      py::arg("config_json"), py::arg("points") = 5, py::arg("seed") = 0);
}
