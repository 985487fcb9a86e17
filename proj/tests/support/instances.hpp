#pragma once

// Seeded random instances for oracle/property tests.

#include <random>

#include "dwdt/geometry.hpp"
#include "dwdt/mesh.hpp"
#include "dwdt/oracle.hpp"
#include "dwdt/polygon.hpp"
#include "dwdt/soft_delaunay.hpp"

namespace dwdt::testing {

// Positions uniform in the unit square, squared weights uniform in
// [0, max_weight_sq].
WeightedPointSet random_instance(std::mt19937_64& rng, int n, double max_weight_sq);

// Resamples until brute_force_wdt succeeds with the given relative ambiguity
// margin (general position enforced). Returns the instance and its oracle.
struct OracleInstance {
  WeightedPointSet ps;
  DiscreteMesh wdt;
};
OracleInstance general_position_instance(std::mt19937_64& rng, int n, double max_weight_sq,
                                         double margin_rel = 1e-6);

// True when the configuration is away from every transition the loss tape
// freezes: corner scores off 0.5 and off the curvature adjacency cutoff,
// argmin margins above min_margin, and (when a boundary is given) vertex
// distances away from the repulsion kink at eps.
bool away_from_transitions(const WeightedPointSet& ps, const SoftTriangulation& soft,
                           const Polygon* boundary = nullptr, double eps = 0.01,
                           double score_margin = 0.05, double min_margin = 1e-4);

}  // namespace dwdt::testing
