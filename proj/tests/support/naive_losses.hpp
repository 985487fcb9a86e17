#pragma once

// Literal re-implementations of the soft scores and the four losses, written
// straight from the formulas with no pruning, clamping, or early exits.
// These are the independent oracles the production losses are checked
// against.

#include <functional>
#include <map>
#include <vector>

#include "dwdt/geometry.hpp"
#include "dwdt/polygon.hpp"

namespace dwdt::testing {

using Lift = std::function<Vec3(const Vec2&)>;
using AreaTarget = std::function<double(const Vec2&)>;
using Direction = std::function<Vec3(const Vec2&)>;

struct NaiveTriangle {
  std::array<int, 3> v;
  std::array<double, 3> corner_score;
  double score;  // average
};

// Mutual-kNN candidates with sigmoid inclusion scores, computed from scratch
// (brute-force kNN, full min over exclusion lists, own circumcenter solve).
std::vector<NaiveTriangle> naive_soft_scores(const WeightedPointSet& ps, double alpha, int k);

double naive_size_loss(const WeightedPointSet& ps, const std::vector<NaiveTriangle>& tris,
                       const Lift& lift, const AreaTarget& target);
double naive_boundary_loss(const WeightedPointSet& ps, const Polygon& boundary, double eps);
double naive_angle_loss(const WeightedPointSet& ps, const std::vector<NaiveTriangle>& tris,
                        const Lift& lift);
double naive_curvature_loss(const WeightedPointSet& ps, const std::vector<NaiveTriangle>& tris,
                            const Lift& lift, const Direction& direction,
                            double adjacency_cutoff);

Lift planar_lift();

}  // namespace dwdt::testing
