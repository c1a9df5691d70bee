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

#include "ccma/autodiff.hpp"

#include <limits>

namespace ccma::ad {

Var Tape::push(double value, std::uint32_t count) {
  if (nodes_.size() >= std::numeric_limits<std::uint32_t>::max()) throw NumericalError("ad: tape is full");
  nodes_.push_back({static_cast<std::uint32_t>(parents_.size() - count), count});
  return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1), value);
}

Tape* Tape::common_tape(const Var& a, const Var& b) {
  Tape* t = a.tape_ != nullptr ? a.tape_ : b.tape_;
  if (a.tape_ != nullptr && b.tape_ != nullptr && a.tape_ != b.tape_)
    throw ArgumentError("ad: operands recorded on different tapes");
  return t;
}

Var Tape::variable(double value) { return push(value, 0); }

std::vector<Var> Tape::variables(std::span<const double> values) {
  std::vector<Var> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(variable(v));
  return out;
}

void Tape::clear() noexcept {
  nodes_.clear();
  parents_.clear();
  partials_.clear();
}

void Tape::reserve(std::size_t nodes, std::size_t edges) {
  nodes_.reserve(nodes);
  parents_.reserve(edges);
  partials_.reserve(edges);
}

Var Tape::unary(const Var& x, double value, double dx) {
  Tape* t = x.tape_;
  if (t == nullptr) return Var(value);
  t->parents_.push_back(x.index_);
  t->partials_.push_back(dx);
  return t->push(value, 1);
}

Var Tape::binary(const Var& a, const Var& b, double value, double da, double db) {
  Tape* t = common_tape(a, b);
  if (t == nullptr) return Var(value);
  std::uint32_t count = 0;
  if (a.tape_ != nullptr) {
    t->parents_.push_back(a.index_);
    t->partials_.push_back(da);
    ++count;
  }
  if (b.tape_ != nullptr) {
    t->parents_.push_back(b.index_);
    t->partials_.push_back(db);
    ++count;
  }
  return t->push(value, count);
}

Var Tape::nary(std::span<const Var> xs, double value, std::span<const double> partials) {
  Tape* t = nullptr;
  for (const Var& x : xs) {
    if (x.tape_ == nullptr) continue;
    if (t != nullptr && x.tape_ != t) throw ArgumentError("ad: operands recorded on different tapes");
    t = x.tape_;
  }
  if (t == nullptr) return Var(value);
  std::uint32_t count = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].tape_ == nullptr) continue;
    t->parents_.push_back(xs[i].index_);
    t->partials_.push_back(partials[i]);
    ++count;
  }
  return t->push(value, count);
}

std::vector<double> Tape::backward(const Var& root) const {
  std::vector<double> adjoint(nodes_.size(), 0.0);
  if (root.tape_ == nullptr) return adjoint;
  if (root.tape_ != this || root.index_ >= nodes_.size()) throw ArgumentError("ad: root is not on this tape");
  adjoint[root.index_] = 1.0;
  for (std::size_t k = root.index_ + 1; k-- > 0;) {
    const double a = adjoint[k];
    if (a == 0.0) continue;
    const Node& node = nodes_[k];
    for (std::uint32_t e = node.first; e < node.first + node.count; ++e) adjoint[parents_[e]] += partials_[e] * a;
  }
  return adjoint;
}

std::vector<double> Tape::gradient(const Var& root, std::span<const Var> leaves) const {
  const std::vector<double> adjoint = backward(root);
  std::vector<double> g;
  g.reserve(leaves.size());
  for (const Var& leaf : leaves) {
    if (leaf.tape_ == nullptr) {
      g.push_back(0.0);
      continue;
    }
    if (leaf.tape_ != this) throw ArgumentError("ad: leaf is not on this tape");
    g.push_back(adjoint.at(leaf.index_));
  }
  return g;
}

Var sum(std::span<const Var> xs) {
  double total = 0.0;
  for (const Var& x : xs) total += x.value();
  const std::vector<double> ones(xs.size(), 1.0);
  return Tape::nary(xs, total, ones);
}

double sum(std::span<const double> xs) {
  double total = 0.0;
  for (double x : xs) total += x;
  return total;
}

Var dot(std::span<const Var> xs, std::span<const double> coeffs) {
  if (xs.size() != coeffs.size()) throw DimensionError("ad::dot: length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) total += xs[i].value() * coeffs[i];
  return Tape::nary(xs, total, coeffs);
}

double dot(std::span<const double> xs, std::span<const double> coeffs) {
  if (xs.size() != coeffs.size()) throw DimensionError("ad::dot: length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) total += xs[i] * coeffs[i];
  return total;
}

Var squared_norm(std::span<const Var> xs) {
  double total = 0.0;
  std::vector<double> partials(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    total += xs[i].value() * xs[i].value();
    partials[i] = 2.0 * xs[i].value();
  }
  return Tape::nary(xs, total, partials);
}

double squared_norm(std::span<const double> xs) {
  double total = 0.0;
  for (double x : xs) total += x * x;
  return total;
}

namespace {

// Returns x^T Q x and fills (Q + Q^T) x.
double quadratic_with_gradient(std::span<const double> x, const Eigen::MatrixXd& q, Eigen::VectorXd* grad) {
  const auto n = static_cast<Eigen::Index>(x.size());
  if (q.rows() != n || q.cols() != n) throw DimensionError("ad::quadratic_form: matrix size mismatch");
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), n);
  const Eigen::VectorXd qv = q * v;
  if (grad != nullptr) *grad = qv + q.transpose() * v;
  return v.dot(qv);
}

}  // namespace

Var quadratic_form(std::span<const Var> xs, const Eigen::MatrixXd& q) {
  std::vector<double> values(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) values[i] = xs[i].value();
  Eigen::VectorXd grad;
  const double total = quadratic_with_gradient(values, q, &grad);
  return Tape::nary(xs, total, std::span<const double>(grad.data(), xs.size()));
}

double quadratic_form(std::span<const double> xs, const Eigen::MatrixXd& q) {
  return quadratic_with_gradient(xs, q, nullptr);
}

}  // namespace ccma::ad
