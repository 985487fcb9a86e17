#include "support/instances.hpp"

#include <cmath>

namespace dwdt::testing {

WeightedPointSet random_instance(std::mt19937_64& rng, int n, double max_weight_sq) {
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::uniform_real_distribution<double> wsq(0.0, max_weight_sq);
  WeightedPointSet ps;
  ps.positions.resize(static_cast<std::size_t>(n));
  ps.weights.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    ps.positions[static_cast<std::size_t>(j)] = {coord(rng), coord(rng)};
    ps.weights[static_cast<std::size_t>(j)] = std::sqrt(wsq(rng));
  }
  return ps;
}

OracleInstance general_position_instance(std::mt19937_64& rng, int n, double max_weight_sq,
                                         double margin_rel) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    WeightedPointSet ps = random_instance(rng, n, max_weight_sq);
    try {
      DiscreteMesh wdt = brute_force_wdt(ps, margin_rel);
      return {std::move(ps), std::move(wdt)};
    } catch (const AmbiguousConfigurationError&) {
      continue;
    }
  }
  throw Error("general_position_instance: resampling failed 1000 times");
}

bool away_from_transitions(const WeightedPointSet& ps, const SoftTriangulation& soft,
                           const Polygon* boundary, double eps, double score_margin,
                           double min_margin) {
  for (int i = 0; i < soft.count(); ++i) {
    if (std::abs(soft.tri_score[static_cast<std::size_t>(i)] - 1e-3) < 1e-4)
      return false;  // curvature adjacency cutoff band
    for (int t = 0; t < 3; ++t) {
      const CornerScore& cs = soft.corners[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
      if (std::abs(cs.score - 0.5) <= score_margin) return false;
      if (soft.corner_active(i, t) && cs.argmin >= 0 &&
          cs.runner_up - cs.dist <= min_margin)
        return false;
    }
  }
  if (boundary) {
    for (const Vec2& p : ps.positions) {
      const double d = boundary->signed_inside_distance(p);
      if (std::abs(d - eps) <= 1e-3) return false;  // repulsion kink
      if (d <= 1e-3) return false;                  // closest-feature flips
    }
  }
  return true;
}

}  // namespace dwdt::testing
