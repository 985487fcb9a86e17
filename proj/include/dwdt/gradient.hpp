#pragma once

// Differentiation contract: evaluate scalar expressions over a
// WeightedPointSet together with exact partials w.r.t. every vertex
// coordinate and weight (exact for the piecewise-smooth branch containing
// the input; discrete selections are frozen per evaluation).

#include <functional>
#include <vector>

#include "dwdt/autodiff.hpp"
#include "dwdt/geometry.hpp"

namespace dwdt {

struct GradientBundle {
  double value = 0.0;
  std::vector<std::array<double, 2>> d_positions;  // n x (d/dx, d/dy)
  std::vector<double> d_weights;                   // n
};

// Registers the point set's coordinates and weights as tape leaves.
class DiffPointSet {
 public:
  DiffPointSet(ad::Tape& tape, const WeightedPointSet& ps);

  int size() const { return static_cast<int>(ps_->size()); }
  const WeightedPointSet& values() const { return *ps_; }

  Vec2T<ad::Var> position(int j) const {
    return {x_[static_cast<std::size_t>(j)], y_[static_cast<std::size_t>(j)]};
  }
  ad::Var x(int j) const { return x_[static_cast<std::size_t>(j)]; }
  ad::Var y(int j) const { return y_[static_cast<std::size_t>(j)]; }
  ad::Var weight(int j) const { return w_[static_cast<std::size_t>(j)]; }

  GradientBundle gather(ad::Tape& tape, const ad::Var& output) const;

 private:
  const WeightedPointSet* ps_;
  std::vector<ad::Var> x_, y_, w_;
};

// A differentiable scalar expression over the point set. The expression
// re-derives any discrete structure (neighbors, candidates, argmins) from
// the current values each time it is evaluated.
using LossExpr = std::function<ad::Var(ad::Tape&, DiffPointSet&)>;

GradientBundle evaluate_with_gradient(const LossExpr& expr, const WeightedPointSet& ps);

// Worst relative error between the analytic gradient and central finite
// differences over every coordinate and weight, with absolute floor 1e-8.
double finite_difference_check(const LossExpr& expr, const WeightedPointSet& ps, double h);

}  // namespace dwdt
