#include "dwdt/gradient.hpp"

#include <algorithm>
#include <cmath>

namespace dwdt {

DiffPointSet::DiffPointSet(ad::Tape& tape, const WeightedPointSet& ps) : ps_(&ps) {
  const int n = ps.size();
  x_.reserve(static_cast<std::size_t>(n));
  y_.reserve(static_cast<std::size_t>(n));
  w_.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    x_.push_back(tape.leaf(ps.positions[static_cast<std::size_t>(j)].x));
    y_.push_back(tape.leaf(ps.positions[static_cast<std::size_t>(j)].y));
    w_.push_back(tape.leaf(ps.weights[static_cast<std::size_t>(j)]));
  }
}

GradientBundle DiffPointSet::gather(ad::Tape& tape, const ad::Var& output) const {
  tape.backward(output);
  GradientBundle bundle;
  bundle.value = output.value();
  const int n = size();
  bundle.d_positions.resize(static_cast<std::size_t>(n));
  bundle.d_weights.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    bundle.d_positions[static_cast<std::size_t>(j)] = {tape.adjoint(x_[static_cast<std::size_t>(j)]),
                                                       tape.adjoint(y_[static_cast<std::size_t>(j)])};
    bundle.d_weights[static_cast<std::size_t>(j)] = tape.adjoint(w_[static_cast<std::size_t>(j)]);
  }
  return bundle;
}

GradientBundle evaluate_with_gradient(const LossExpr& expr, const WeightedPointSet& ps) {
  ad::Tape tape;
  DiffPointSet dps(tape, ps);
  const ad::Var out = expr(tape, dps);
  if (!std::isfinite(out.value())) throw NumericFailureError("expression");
  return dps.gather(tape, out);
}

namespace {

double evaluate_value(const LossExpr& expr, const WeightedPointSet& ps) {
  ad::Tape tape;
  DiffPointSet dps(tape, ps);
  return expr(tape, dps).value();
}

}  // namespace

double finite_difference_check(const LossExpr& expr, const WeightedPointSet& ps, double h) {
  if (!(h > 0.0)) throw ValidationError("finite_difference_check: h must be > 0");
  const GradientBundle bundle = evaluate_with_gradient(expr, ps);
  const int n = ps.size();
  double worst = 0.0;
  constexpr double kFloor = 1e-8;

  auto probe = [&](auto&& set, double analytic) {
    WeightedPointSet plus = ps, minus = ps;
    set(plus, +h);
    set(minus, -h);
    const double fd = (evaluate_value(expr, plus) - evaluate_value(expr, minus)) / (2.0 * h);
    const double denom = std::max({kFloor, std::abs(fd), std::abs(analytic)});
    worst = std::max(worst, std::abs(fd - analytic) / denom);
  };

  for (int j = 0; j < n; ++j) {
    probe([j](WeightedPointSet& q, double d) { q.positions[static_cast<std::size_t>(j)].x += d; },
          bundle.d_positions[static_cast<std::size_t>(j)][0]);
    probe([j](WeightedPointSet& q, double d) { q.positions[static_cast<std::size_t>(j)].y += d; },
          bundle.d_positions[static_cast<std::size_t>(j)][1]);
    probe([j](WeightedPointSet& q, double d) { q.weights[static_cast<std::size_t>(j)] += d; },
          bundle.d_weights[static_cast<std::size_t>(j)]);
  }
  return worst;
}

}  // namespace dwdt
