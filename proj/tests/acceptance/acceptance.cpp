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

// Acceptance checks. Prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ccma/commands.hpp"
#include "ccma/error.hpp"
#include "ccma/gradcheck.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ccma;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

RunConfig reference_config() {
  RunConfig c;
  c.array = {{0.0, 0.05, 0.10, 0.15, 0.20}, 16000.0, 343.0};
  c.doa_elevation_deg = 45.0;
  c.doa_azimuth_deg = 45.0;
  c.frequencies.clear();
  for (double f = 1000.0; f <= 6000.0; f += 500.0) c.frequencies.push_back(f);
  c.target_theta_deg = 40.0;
  c.target_phi_deg = 40.0;
  c.iterations = 2000;
  c.seed = 0;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome geometry_oracle() {
  const auto start = Clock::now();
  const std::vector<double> radii{0.0, 0.05, 0.10, 0.15, 0.20};
  const double fs = 16000.0, c = 343.0;
  const ArrayGeometry g = build_geometry({radii, fs, c});
  const double lambda = c / (fs / 2.0);
  std::vector<std::size_t> expected;
  for (double r : radii)
    expected.push_back(r == 0.0 ? 1 : static_cast<std::size_t>(std::floor(std::numbers::pi / std::asin(lambda / (4 * r)))));
  bool ok = g.ring_count() == radii.size();
  std::string counts;
  std::size_t total = 0;
  for (std::size_t r = 0; ok && r < radii.size(); ++r) {
    ok = ok && g.rings()[r].mic_count() == expected[r];
    counts += fmt::format("{}{}", r ? "," : "", g.rings()[r].mic_count());
    total += expected[r];
  }
  ok = ok && g.total_mics() == total && total == 145;
  const double t = seconds_since(start);
  return {ok && t < 1.0, fmt::format("counts [{}], M_T = {}, {:.3f} s", counts, g.total_mics(), t)};
}

Outcome gradient_correctness() {
  const auto start = Clock::now();
  RunConfig c;
  c.array.ring_radii = {0.05, 0.20};
  c.frequencies = {2000.0, 4000.0, 6000.0};
  c.variant = LossVariant::kL3;
  c.alpha = 0.5;
  c.lambda1 = 1.0;
  c.lambda2 = 1.0;
  c.lambda3 = 0.01;
  const DesignProblem problem = make_problem(c);
  std::ostringstream log;
  const GradcheckSummary s = run_gradcheck(problem, 20, 2024, log);
  const double t = seconds_since(start);
  std::size_t over = 0;
  for (double e : s.point_errors) over += e >= 1e-4;
  // Same points with a finer difference step, to separate truncation error from gradient error.
  const GradcheckSummary fine = run_gradcheck(problem, 20, 2024, log, 1e-6);
  return {s.points == 20 && s.max_error < 1e-4 && t < 60.0,
          fmt::format("max relative error {:.2e} over {} points ({} at or above 1e-4), {} coordinates excluded, "
                      "{:.2f} s; with step 1e-6 the max error is {:.2e}",
                      s.max_error, s.points, over, s.excluded_coordinates, t, fine.max_error)};
}

Outcome metric_identities() {
  const Direction doa = Direction::from_degrees(45.0, 45.0);
  const ArrayGeometry one = build_geometry({{0.0}, 16000.0, 343.0});
  const Eigen::VectorXcd h1 = Eigen::VectorXcd::Ones(1);
  const Eigen::VectorXcd d1 = steering_vector(one, 1000.0, doa);
  const double df1 = directivity_factor(h1, d1, gamma_matrix(one, 1000.0));
  const double wng1 = white_noise_gain(h1, d1);

  const ArrayGeometry g = build_geometry({{0.0, 0.05, 0.10, 0.15, 0.20}, 16000.0, 343.0});
  double wng_err = 0.0, scale_err = 0.0;
  for (double f : {500.0, 1000.0, 2000.0, 4000.0, 8000.0}) {
    const Eigen::VectorXcd d = steering_vector(g, f, doa);
    const Eigen::VectorXcd h = das_filter(g, f, doa);
    wng_err = std::max(wng_err, std::abs(white_noise_gain(h, d) - 145.0));
    const Eigen::MatrixXd gamma = gamma_matrix(g, f);
    const double df = directivity_factor(h, d, gamma);
    for (std::complex<double> k : {std::complex<double>(2.5, 0.0), std::complex<double>(-0.01, 3.0)})
      scale_err = std::max(scale_err, std::abs(directivity_factor(k * h, d, gamma) - df) / df);
  }
  const bool ok = std::abs(df1 - 1.0) <= 1e-12 && std::abs(wng1 - 1.0) <= 1e-12 && wng_err <= 1e-9 &&
                  scale_err <= 1e-12;
  return {ok, fmt::format("single mic |DF-1| = {:.1e}, |WNG-1| = {:.1e}; DAS |WNG-145| = {:.1e}; scaling {:.1e}",
                          std::abs(df1 - 1.0), std::abs(wng1 - 1.0), wng_err, scale_err)};
}

Outcome df_quadrature() {
  const auto start = Clock::now();
  const ArrayGeometry g = build_geometry({{0.0, 0.05, 0.10, 0.15, 0.20}, 16000.0, 343.0});
  const Direction doa = Direction::from_degrees(45.0, 45.0);
  double worst = 0.0;
  std::string detail;
  for (double f : {1000.0, 2000.0, 4000.0}) {
    const Eigen::VectorXcd h = das_filter(g, f, doa);
    const double closed = directivity_factor(h, steering_vector(g, f, doa), gamma_matrix(g, f));
    const double quad = directivity_factor_quadrature(g, f, h, doa, deg_to_rad(1.0));
    const double rel = std::abs(quad - closed) / closed;
    worst = std::max(worst, rel);
    detail += fmt::format("{:.0f} Hz {:.3f}/{:.3f} dB; ", f, to_db(closed), to_db(quad));
  }
  const double t = seconds_since(start);
  return {worst < 0.02 && t < 60.0, detail + fmt::format("worst {:.3f}%, {:.2f} s", 100.0 * worst, t)};
}

Outcome beamwidth_estimator() {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> x;
  for (int i = -360; i <= 360; ++i) x.push_back(deg_to_rad(0.25 * i));

  double exact_err = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double width = deg_to_rad(2.0 + 170.0 * uni(rng));
    const double sigma = deg_to_rad(2.0 + 40.0 * uni(rng));
    const double a = -kBeamwidthDropDb / (0.25 * width * width);
    std::vector<double> levels;
    for (double xi : x) levels.push_back(a * xi * xi);
    const auto fit = beamwidth_parabola<double>(x, levels, sigma);
    exact_err = std::max(exact_err, std::abs(fit.width - width) / width);
  }

  int accepted = 0;
  double oracle_err = 0.0;
  while (accepted < 200) {
    const double width = deg_to_rad(10.0 + 90.0 * uni(rng));
    const double half = 0.5 * width;
    const double a = -kBeamwidthDropDb / (half * half);
    const double c3 = 0.3 * (uni(rng) - 0.5), c4 = 0.3 * (uni(rng) - 0.5), nz = 0.2 * uni(rng);
    const double sigma = half;
    std::vector<double> levels;
    for (double xi : x) {
      const double z = xi / half;
      levels.push_back(a * xi * xi * (1.0 + c3 * z + c4 * z * z) + nz * noise(rng));
    }
    const std::size_t doa = x.size() / 2;
    levels[doa] = 0.0;
    // Quadratic-dominated: unweighted RMS residual of the fit within one mask width below 0.5 dB.
    const auto fit = beamwidth_parabola<double>(x, levels, sigma);
    double sw = 0.0, sb = 0.0, sx2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double w = super_gaussian(x[i], sigma);
      sw += w;
      sb += w * levels[i];
      sx2 += w * x[i] * x[i];
    }
    const double b = (sb - fit.curvature * sx2) / sw;
    double ss = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (std::abs(x[i]) <= sigma) {
        const double r = levels[i] - fit.curvature * x[i] * x[i] - b;
        ss += r * r;
        ++n;
      }
    if (!fit.concave || std::sqrt(ss / n) >= 0.5) continue;
    ++accepted;
    const auto oracle = beamwidth_oracle(x, levels, doa, kBeamwidthDropDb);
    oracle_err = std::max(oracle_err, std::abs(fit.width - oracle.width) / oracle.width);
  }

  double grad_err = 0.0;
  for (int k = 0; k < 10; ++k) {
    const double half = deg_to_rad(10.0 + 30.0 * uni(rng));
    std::vector<double> levels;
    for (double xi : x) levels.push_back(-kBeamwidthDropDb * xi * xi / (half * half) + 0.3 * noise(rng));
    const ad::ScalarFunction f = [&](std::span<const ad::Var> l) {
      return beamwidth_parabola<ad::Var>(x, l, half).width;
    };
    grad_err = std::max(grad_err, ad::gradcheck(f, levels).max_error);
  }
  return {exact_err <= 1e-9 && oracle_err <= 0.15 && grad_err <= 1e-5,
          fmt::format("exact {:.1e}; vs crossing oracle worst {:.1f}% over {} patterns; gradient {:.1e}", exact_err,
                      100.0 * oracle_err, accepted, grad_err)};
}

struct DesignRun {
  DesignResult result;
  double seconds;
};

DesignRun design(const RunConfig& c) {
  const auto start = Clock::now();
  const DesignProblem p = make_problem(c);
  DesignResult r = optimize(p, c.optimize_options());
  return {std::move(r), seconds_since(start)};
}

bool best_non_increasing(const RunRecord& r) {
  for (std::size_t k = 1; k < r.iterations.size(); ++k)
    if (r.iterations[k].best_loss > r.iterations[k - 1].best_loss) return false;
  return true;
}

Outcome end_to_end() {
  const RunConfig c = reference_config();
  const DesignRun run = design(c);
  const MetricCurves& m = run.result.metrics;
  bool widths_ok = true;
  std::string widths;
  for (std::size_t b = 0; b < m.size(); ++b) {
    const double th = rad_to_deg(m.theta[b]), ph = rad_to_deg(m.phi[b]);
    const bool ok = th >= 30.0 && th <= 45.0 && ph >= 30.0 && ph <= 45.0;
    widths_ok = widths_ok && ok;
    widths += fmt::format("{}{:.0f}:{:.1f}/{:.1f}{}", b ? " " : "", m.frequencies[b], th, ph, ok ? "" : "*");
  }
  const ArrayGeometry g = make_geometry(c);
  const MetricCurves das = baseline_curves(BaselineKind::kDelayAndSum, g, c.doa(), {1000.0}, c.metric_options());
  const double df_designed = to_db(m.df[0]), df_das = to_db(das.df[0]);
  const bool df_ok = df_designed >= df_das - 0.5;
  const bool mono = best_non_increasing(run.result.record);
  return {widths_ok && df_ok && mono && run.seconds < 600.0,
          fmt::format("widths theta/phi deg [{}] (* outside [30, 45]); DF@1k {:.2f} dB vs DAS {:.2f} dB; best loss "
                      "non-increasing {}; {} iterations ({}), {:.1f} s",
                      widths, df_designed, df_das, mono ? "yes" : "no", run.result.record.iteration_count(),
                      run.result.record.stop_reason, run.seconds)};
}

Outcome l3_reduction() {
  RunConfig c = reference_config();
  const DesignProblem l1 = make_problem(c);
  c.variant = LossVariant::kL3;
  c.alpha = 1.0;
  c.lambda1 = c.lambda2 = c.lambda3 = 0.0;
  const DesignProblem l3 = make_problem(c);
  std::mt19937_64 rng(99);
  int identical = 0;
  const int trials = 25;
  for (int k = 0; k < trials; ++k) {
    const auto x = random_interior_point(l1, rng);
    const double a = l1.evaluate<double>(std::span<const double>(x)).loss.total;
    const double b = l3.evaluate<double>(std::span<const double>(x)).loss.total;
    identical += std::memcmp(&a, &b, sizeof a) == 0;
  }
  return {identical == trials, fmt::format("{} of {} random points bit-identical", identical, trials)};
}

double df_db_std(const MetricCurves& m) {
  std::vector<double> db;
  for (double d : m.df) db.push_back(to_db(d));
  double mean = 0.0;
  for (double v : db) mean += v;
  mean /= db.size();
  double s = 0.0;
  for (double v : db) s += (v - mean) * (v - mean);
  return std::sqrt(s / db.size());
}

Outcome invariance_effect() {
  RunConfig c = reference_config();
  c.variant = LossVariant::kL3;
  c.alpha = 1.0;
  c.lambda2 = c.lambda3 = 0.0;
  c.lambda1 = 0.0;
  const DesignRun off = design(c);
  c.lambda1 = 1.0;
  const DesignRun on = design(c);
  const double s0 = df_db_std(off.result.metrics), s1 = df_db_std(on.result.metrics);
  return {s1 <= 1.05 * s0, fmt::format("std of DF across bands {:.3f} dB with lambda1 = 1 vs {:.3f} dB with "
                                       "lambda1 = 0 ({:.1f} s + {:.1f} s)",
                                       s1, s0, on.seconds, off.seconds)};
}

Outcome rprop_behavior() {
  RPropConfig cfg;
  RPropState bowl(1, cfg);
  std::vector<double> x{10.0};
  int steps = 0;
  while (steps < 200 && std::abs(x[0]) >= 1e-3) {
    bowl.step(std::vector<double>{2.0 * x[0]}, x);
    ++steps;
  }
  const bool converged = std::abs(x[0]) < 1e-3;

  // Coordinate 0: constant sign; 1: alternating; 2: zero; 3: random.
  RPropState s(4, cfg);
  std::vector<double> p(4, 0.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  bool bounds = true, growth = true, shrink = true, frozen = true;
  std::vector<double> previous_sign(4, 0.0);
  for (int k = 0; k < 400; ++k) {
    const std::vector<double> g{1.0, k % 2 ? -1.0 : 1.0, 0.0, n(rng)};
    const std::vector<double> before(s.step_sizes().begin(), s.step_sizes().end());
    const std::vector<double> p_before = p;
    s.step(g, p);
    for (std::size_t i = 0; i < 4; ++i) {
      const double step = s.step_sizes()[i];
      bounds = bounds && step >= cfg.min_step && step <= cfg.max_step;
      const double sign = g[i] > 0 ? 1.0 : (g[i] < 0 ? -1.0 : 0.0);
      const double agree = sign * previous_sign[i];
      if (agree > 0) growth = growth && step == std::min(before[i] * cfg.increase, cfg.max_step);
      if (agree < 0) shrink = shrink && step == std::max(before[i] * cfg.decrease, cfg.min_step) && p[i] == p_before[i];
      previous_sign[i] = agree < 0 ? 0.0 : sign;
    }
    frozen = frozen && p[2] == 0.0 && s.step_sizes()[2] == cfg.initial_step;
  }
  const bool ok = converged && steps <= 200 && bounds && growth && shrink && frozen;
  return {ok, fmt::format("bowl |x| = {:.1e} after {} steps; bounds {}, growth {}, shrink {}, zero-gradient {}",
                          std::abs(x[0]), steps, bounds, growth, shrink, frozen)};
}

Outcome determinism(const fs::path& workdir) {
  RunConfig c = reference_config();
  c.iterations = 150;
  c.beampattern_frequencies = {1000.0, 6000.0};
  fs::remove_all(workdir);
  std::ostringstream log;
  const DesignResult a = run_design(c, workdir / "run_a", log);
  run_design(c, workdir / "run_b", log);
  int same = 0, files = 0;
  for (const auto& entry : fs::directory_iterator(workdir / "run_a")) {
    ++files;
    same += slurp(entry.path()) == slurp(workdir / "run_b" / entry.path().filename());
  }
  const MetricCurves eval = run_eval(c, load_params(workdir / "run_a" / "params.json"), workdir / "eval", log);
  double worst = 0.0;
  for (std::size_t b = 0; b < eval.size(); ++b) {
    worst = std::max(worst, std::abs(eval.df[b] - a.metrics.df[b]) / a.metrics.df[b]);
    worst = std::max(worst, std::abs(eval.wng[b] - a.metrics.wng[b]) / a.metrics.wng[b]);
    worst = std::max(worst, std::abs(eval.theta[b] - a.metrics.theta[b]));
    worst = std::max(worst, std::abs(eval.phi[b] - a.metrics.phi[b]));
  }
  return {files > 0 && same == files && worst <= 1e-12,
          fmt::format("{} of {} artifacts byte-identical; eval round trip max deviation {:.1e}", same, files, worst)};
}

}  // namespace

int main(int argc, char** argv) {
  fs::path workdir = fs::temp_directory_path() / "ccma_acceptance";
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--workdir" && i + 1 < argc) {
      workdir = argv[++i];
    } else if (arg == "--only" && i + 1 < argc) {
      only = std::stoi(argv[++i]);
    } else {
      fmt::print(stderr, "usage: acceptance [--only N] [--workdir DIR]\n");
      return 1;
    }
  }

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"geometry oracle", geometry_oracle},
      {"gradient correctness", gradient_correctness},
      {"analytic metric identities", metric_identities},
      {"DF quadrature cross-check", df_quadrature},
      {"beamwidth estimator", beamwidth_estimator},
      {"end-to-end design", end_to_end},
      {"L3 reduction identity", l3_reduction},
      {"invariance regularizer effect", invariance_effect},
      {"RProp behavior", rprop_behavior},
      {"determinism and round trip", [&] { return determinism(workdir); }},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only != 0 && static_cast<std::size_t>(only) != k + 1) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    failures += !o.pass;
    fmt::print("{} criterion {:>2} ({}): {}\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
