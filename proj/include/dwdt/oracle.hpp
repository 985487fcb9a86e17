#pragma once

// Brute-force discrete weighted Delaunay triangulation via the empty
// power-circle test. Ground truth for the soft pipeline; O(n^4), intended
// for n <= ~100.

#include "dwdt/geometry.hpp"
#include "dwdt/mesh.hpp"

namespace dwdt {

// A triple (j,k,l) is a WDT face iff its weighted circumcenter c satisfies
// power(c, v_j) <= power(c, v_m) for every other site m. Margins below
// ambiguity_rel * scale^2 raise AmbiguousConfigurationError naming the
// 4-tuple (default 1e-9; tests enforce general position with larger margins).
DiscreteMesh brute_force_wdt(const WeightedPointSet& ps, double ambiguity_rel);
DiscreteMesh brute_force_wdt(const WeightedPointSet& ps);

// Discrete membership test for one triple; used to resolve soft scores that
// land exactly on the extraction threshold. Returns false for degenerate
// triples.
bool power_test(const WeightedPointSet& ps, int j, int k, int l);

// True iff vertex j appears in no face of brute_force_wdt(ps).
bool vertex_is_redundant(const WeightedPointSet& ps, int j);

}  // namespace dwdt
