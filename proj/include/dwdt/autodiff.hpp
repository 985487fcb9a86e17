#pragma once

// Reverse-mode automatic differentiation over scalars.
//
// A Tape records one evaluation as a DAG of primitive operations with at most
// two parents per node; Var is a value + node-index handle into the tape.
// Constants never allocate nodes. backward() runs one reverse sweep and
// leaves adjoints that can be read off at the leaves.
//
// Discrete choices (neighbor sets, argmins, containing faces) are made on
// plain double values before recording, so one tape always represents the
// piecewise-smooth branch containing the evaluation point.

#include <cmath>
#include <cstddef>
#include <vector>

#include "dwdt/error.hpp"
#include "dwdt/vec.hpp"

namespace dwdt::ad {

class Tape;

class Var {
 public:
  Var() = default;
  Var(double c) : val_(c) {}  // NOLINT: implicit constants are the point
  double value() const { return val_; }
  int index() const { return idx_; }
  bool is_const() const { return idx_ < 0; }
  Tape* tape() const { return tape_; }

 private:
  friend class Tape;
  Var(double v, int idx, Tape* tape) : val_(v), idx_(idx), tape_(tape) {}
  double val_ = 0.0;
  int idx_ = -1;
  Tape* tape_ = nullptr;
};

class Tape {
 public:
  Var leaf(double v) {
    nodes_.push_back(Node{0.0, 0.0, -1, -1});
    return Var(v, static_cast<int>(nodes_.size()) - 1, this);
  }

  Var node1(double v, int p0, double d0, const char* op) {
    if (!std::isfinite(v) || !std::isfinite(d0)) throw NumericFailureError(op);
    nodes_.push_back(Node{d0, 0.0, p0, -1});
    return Var(v, static_cast<int>(nodes_.size()) - 1, this);
  }

  Var node2(double v, int p0, double d0, int p1, double d1, const char* op) {
    if (!std::isfinite(v) || !std::isfinite(d0) || !std::isfinite(d1))
      throw NumericFailureError(op);
    nodes_.push_back(Node{d0, d1, p0, p1});
    return Var(v, static_cast<int>(nodes_.size()) - 1, this);
  }

  void clear() { nodes_.clear(); }
  std::size_t size() const { return nodes_.size(); }

  // Reverse sweep seeding d(output)/d(output) = 1.
  void backward(const Var& output) {
    adjoints_.assign(nodes_.size(), 0.0);
    if (output.is_const()) return;  // constant output: all gradients zero
    adjoints_[static_cast<std::size_t>(output.index())] = 1.0;
    for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
      const Node& n = nodes_[static_cast<std::size_t>(i)];
      const double a = adjoints_[static_cast<std::size_t>(i)];
      if (a == 0.0) continue;
      if (n.p0 >= 0) adjoints_[static_cast<std::size_t>(n.p0)] += a * n.d0;
      if (n.p1 >= 0) adjoints_[static_cast<std::size_t>(n.p1)] += a * n.d1;
    }
  }

  double adjoint(const Var& v) const {
    if (v.is_const()) return 0.0;
    return adjoints_[static_cast<std::size_t>(v.index())];
  }

 private:
  struct Node {
    double d0, d1;
    int p0, p1;
  };
  std::vector<Node> nodes_;
  std::vector<double> adjoints_;
};

namespace detail {
inline Tape* tape_of(const Var& a, const Var& b) {
  return a.tape() ? a.tape() : b.tape();
}
}  // namespace detail

inline Var operator+(const Var& a, const Var& b) {
  if (a.is_const() && b.is_const()) return Var(a.value() + b.value());
  Tape* t = detail::tape_of(a, b);
  const double v = a.value() + b.value();
  if (a.is_const()) return t->node1(v, b.index(), 1.0, "add");
  if (b.is_const()) return t->node1(v, a.index(), 1.0, "add");
  return t->node2(v, a.index(), 1.0, b.index(), 1.0, "add");
}

inline Var operator-(const Var& a, const Var& b) {
  if (a.is_const() && b.is_const()) return Var(a.value() - b.value());
  Tape* t = detail::tape_of(a, b);
  const double v = a.value() - b.value();
  if (a.is_const()) return t->node1(v, b.index(), -1.0, "sub");
  if (b.is_const()) return t->node1(v, a.index(), 1.0, "sub");
  return t->node2(v, a.index(), 1.0, b.index(), -1.0, "sub");
}

inline Var operator-(const Var& a) {
  if (a.is_const()) return Var(-a.value());
  return a.tape()->node1(-a.value(), a.index(), -1.0, "neg");
}

inline Var operator*(const Var& a, const Var& b) {
  if (a.is_const() && b.is_const()) return Var(a.value() * b.value());
  Tape* t = detail::tape_of(a, b);
  const double v = a.value() * b.value();
  if (a.is_const()) return t->node1(v, b.index(), a.value(), "mul");
  if (b.is_const()) return t->node1(v, a.index(), b.value(), "mul");
  return t->node2(v, a.index(), b.value(), b.index(), a.value(), "mul");
}

inline Var operator/(const Var& a, const Var& b) {
  if (a.is_const() && b.is_const()) return Var(a.value() / b.value());
  Tape* t = detail::tape_of(a, b);
  const double v = a.value() / b.value();
  const double inv = 1.0 / b.value();
  if (a.is_const()) return t->node1(v, b.index(), -v * inv, "div");
  if (b.is_const()) return t->node1(v, a.index(), inv, "div");
  return t->node2(v, a.index(), inv, b.index(), -v * inv, "div");
}

inline Var& operator+=(Var& a, const Var& b) { return a = a + b; }
inline Var& operator-=(Var& a, const Var& b) { return a = a - b; }
inline Var& operator*=(Var& a, const Var& b) { return a = a * b; }
inline Var& operator/=(Var& a, const Var& b) { return a = a / b; }

// Value comparisons: geometric branch decisions freeze on current values.
inline bool operator<(const Var& a, const Var& b) { return a.value() < b.value(); }
inline bool operator>(const Var& a, const Var& b) { return a.value() > b.value(); }
inline bool operator<=(const Var& a, const Var& b) { return a.value() <= b.value(); }
inline bool operator>=(const Var& a, const Var& b) { return a.value() >= b.value(); }

inline Var sqrt(const Var& a) {
  if (a.is_const()) return Var(std::sqrt(a.value()));
  const double r = std::sqrt(a.value());
  return a.tape()->node1(r, a.index(), 0.5 / r, "sqrt");
}

inline Var exp(const Var& a) {
  if (a.is_const()) return Var(std::exp(a.value()));
  const double e = std::exp(a.value());
  return a.tape()->node1(e, a.index(), e, "exp");
}

inline Var log(const Var& a) {
  if (a.is_const()) return Var(std::log(a.value()));
  return a.tape()->node1(std::log(a.value()), a.index(), 1.0 / a.value(), "log");
}

inline Var sin(const Var& a) {
  if (a.is_const()) return Var(std::sin(a.value()));
  return a.tape()->node1(std::sin(a.value()), a.index(), std::cos(a.value()), "sin");
}

inline Var cos(const Var& a) {
  if (a.is_const()) return Var(std::cos(a.value()));
  return a.tape()->node1(std::cos(a.value()), a.index(), -std::sin(a.value()), "cos");
}

// |x| with one-sided derivative sign(x) frozen at the evaluation point
// (derivative +1 at exactly zero).
inline Var abs(const Var& a) {
  if (a.is_const()) return Var(std::abs(a.value()));
  const double s = a.value() < 0.0 ? -1.0 : 1.0;
  return a.tape()->node1(std::abs(a.value()), a.index(), s, "abs");
}

// Hard min/max: the selected branch is frozen, the other argument does not
// enter the tape.
inline Var min(const Var& a, const Var& b) { return a.value() <= b.value() ? a : b; }
inline Var max(const Var& a, const Var& b) { return a.value() >= b.value() ? a : b; }

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline Var sigmoid(const Var& a) {
  const double s = sigmoid(a.value());
  if (a.is_const()) return Var(s);
  return a.tape()->node1(s, a.index(), s * (1.0 - s), "sigmoid");
}

// Generic first-order primitive: value and d(value)/d(x,y) supplied by the
// caller. Used to splice lifts, field samples, and boundary projections into
// the tape without re-deriving their closed forms in Var arithmetic.
inline Var custom_node2(Tape& t, double value, const Var& x, double dx,
                        const Var& y, double dy, const char* op) {
  if (x.is_const() && y.is_const()) return Var(value);
  if (x.is_const()) return t.node1(value, y.index(), dy, op);
  if (y.is_const()) return t.node1(value, x.index(), dx, op);
  return t.node2(value, x.index(), dx, y.index(), dy, op);
}

inline double value_of(const Var& v) { return v.value(); }

}  // namespace dwdt::ad

namespace dwdt {
using ad::value_of;  // so templated geometry finds both overloads
}
