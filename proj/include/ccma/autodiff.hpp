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

#ifndef CCMA_AUTODIFF_HPP
#define CCMA_AUTODIFF_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ccma/error.hpp"

/// Tape-based reverse-mode differentiation over real scalars.
///
/// A `Var` is either a leaf or intermediate recorded on a `Tape`, or a
/// detached constant (no tape). Operations on constants produce constants,
/// so the same templated code can run on `double` and on `Var`. Complex
/// quantities are carried as `CVar` pairs.
///
/// Each node stores its parents and the local partial derivative with
/// respect to each of them. Parents always precede their children, so a
/// single reverse sweep accumulates all adjoints.
namespace ccma::ad {

class Tape;

class Var {
 public:
  Var() noexcept = default;
  // Implicit so that literals mix freely with recorded values.
  Var(double constant) noexcept : value_(constant) {}  // NOLINT(google-explicit-constructor)

  double value() const noexcept { return value_; }
  bool is_constant() const noexcept { return tape_ == nullptr; }
  Tape* tape() const noexcept { return tape_; }
  std::uint32_t index() const noexcept { return index_; }

 private:
  friend class Tape;
  Var(Tape* tape, std::uint32_t index, double value) noexcept : value_(value), tape_(tape), index_(index) {}

  double value_ = 0.0;
  Tape* tape_ = nullptr;
  std::uint32_t index_ = 0;
};

/// Append-only record of scalar operations. Not copyable or movable since
/// every recorded Var points back at it. `clear()` invalidates all Vars.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var variable(double value);
  std::vector<Var> variables(std::span<const double> values);

  std::size_t size() const noexcept { return nodes_.size(); }
  void clear() noexcept;
  void reserve(std::size_t nodes, std::size_t edges);

  /// Adjoint of every node with respect to `root` (zeros for a constant root).
  std::vector<double> backward(const Var& root) const;
  /// Gradient of `root` with respect to `leaves`, in order.
  std::vector<double> gradient(const Var& root, std::span<const Var> leaves) const;

  // Recording primitives. Constant arguments are dropped from the parent list.
  static Var unary(const Var& x, double value, double dx);
  static Var binary(const Var& a, const Var& b, double value, double da, double db);
  static Var nary(std::span<const Var> xs, double value, std::span<const double> partials);

 private:
  struct Node {
    std::uint32_t first;
    std::uint32_t count;
  };

  Var push(double value, std::uint32_t count);
  static Tape* common_tape(const Var& a, const Var& b);

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> parents_;
  std::vector<double> partials_;
};

inline double value_of(double x) noexcept { return x; }
inline double value_of(const Var& x) noexcept { return x.value(); }

inline Var operator+(const Var& a, const Var& b) { return Tape::binary(a, b, a.value() + b.value(), 1.0, 1.0); }
inline Var operator-(const Var& a, const Var& b) { return Tape::binary(a, b, a.value() - b.value(), 1.0, -1.0); }
inline Var operator*(const Var& a, const Var& b) {
  return Tape::binary(a, b, a.value() * b.value(), b.value(), a.value());
}
inline Var operator/(const Var& a, const Var& b) {
  if (b.value() == 0.0) throw DomainError("ad: division by zero");
  const double inv = 1.0 / b.value();
  const double q = a.value() / b.value();
  return Tape::binary(a, b, q, inv, -q * inv);
}
inline Var operator-(const Var& x) { return Tape::unary(x, -x.value(), -1.0); }

inline Var& operator+=(Var& a, const Var& b) { return a = a + b; }
inline Var& operator-=(Var& a, const Var& b) { return a = a - b; }
inline Var& operator*=(Var& a, const Var& b) { return a = a * b; }
inline Var& operator/=(Var& a, const Var& b) { return a = a / b; }

inline Var exp(const Var& x) {
  const double e = std::exp(x.value());
  return Tape::unary(x, e, e);
}
inline Var log(const Var& x) {
  if (!(x.value() > 0.0)) throw DomainError("ad: log of non-positive value");
  return Tape::unary(x, std::log(x.value()), 1.0 / x.value());
}
inline Var log10(const Var& x) {
  if (!(x.value() > 0.0)) throw DomainError("ad: log10 of non-positive value");
  return Tape::unary(x, std::log10(x.value()), 1.0 / (x.value() * std::numbers::ln10));
}
/// The derivative at exactly 0 is taken as 0.
inline Var sqrt(const Var& x) {
  if (x.value() < 0.0) throw DomainError("ad: sqrt of negative value");
  const double s = std::sqrt(x.value());
  return Tape::unary(x, s, s > 0.0 ? 0.5 / s : 0.0);
}
inline Var sin(const Var& x) { return Tape::unary(x, std::sin(x.value()), std::cos(x.value())); }
inline Var cos(const Var& x) { return Tape::unary(x, std::cos(x.value()), -std::sin(x.value())); }
/// Subgradient 0 at x = 0.
inline Var abs(const Var& x) {
  const double v = x.value();
  return Tape::unary(x, std::abs(v), v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0));
}
inline Var pow(const Var& x, double p) {
  const double v = x.value();
  if (v < 0.0 && p != std::floor(p)) throw DomainError("ad: non-integer power of negative value");
  if (v == 0.0 && p < 1.0) throw DomainError("ad: pow derivative undefined at 0");
  return Tape::unary(x, std::pow(v, p), p * std::pow(v, p - 1.0));
}
inline Var pow(const Var& x, const Var& p) {
  const double v = x.value();
  if (!(v > 0.0)) throw DomainError("ad: pow with variable exponent needs a positive base");
  const double r = std::pow(v, p.value());
  return Tape::binary(x, p, r, p.value() * r / v, r * std::log(v));
}
/// Ties select the first argument.
inline Var max(const Var& a, const Var& b) { return a.value() >= b.value() ? a : b; }
inline Var min(const Var& a, const Var& b) { return a.value() <= b.value() ? a : b; }
inline Var clamp(const Var& x, double lo, double hi) {
  if (x.value() < lo) return Var(lo);
  if (x.value() > hi) return Var(hi);
  return x;
}

/// Complex value as a pair of real Vars.
struct CVar {
  Var re;
  Var im;
};

inline CVar operator+(const CVar& a, const CVar& b) { return {a.re + b.re, a.im + b.im}; }
inline CVar operator-(const CVar& a, const CVar& b) { return {a.re - b.re, a.im - b.im}; }
inline CVar operator*(const CVar& a, const CVar& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline CVar operator*(const CVar& a, std::complex<double> c) {
  return {a.re * c.real() - a.im * c.imag(), a.re * c.imag() + a.im * c.real()};
}
inline CVar operator*(const Var& s, const CVar& a) { return {s * a.re, s * a.im}; }
inline CVar conj(const CVar& a) { return {a.re, -a.im}; }
/// |a|^2 recorded as a single node.
inline Var norm(const CVar& a) {
  const double re = a.re.value();
  const double im = a.im.value();
  return Tape::binary(a.re, a.im, re * re + im * im, 2.0 * re, 2.0 * im);
}

// Reductions. The double overloads let templated code call the same names.
Var sum(std::span<const Var> xs);
double sum(std::span<const double> xs);
Var dot(std::span<const Var> xs, std::span<const double> coeffs);
double dot(std::span<const double> xs, std::span<const double> coeffs);
Var squared_norm(std::span<const Var> xs);
double squared_norm(std::span<const double> xs);
/// x^T Q x for a constant square matrix Q.
Var quadratic_form(std::span<const Var> xs, const Eigen::MatrixXd& q);
double quadratic_form(std::span<const double> xs, const Eigen::MatrixXd& q);

}  // namespace ccma::ad

#endif  // CCMA_AUTODIFF_HPP
