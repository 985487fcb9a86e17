#include "dwdt/oracle.hpp"

#include <cmath>

namespace dwdt {

namespace {

constexpr double kAmbiguityRel = 1e-9;
constexpr double kDegenerateRel = 1e-10;

// Scan all other sites; 1 = face, 0 = not, throws on a borderline margin
// that would decide membership.
int classify_triple(const WeightedPointSet& ps, int j, int k, int l,
                    double margin, double degenerate_tol) {
  Vec2 c;
  try {
    c = weighted_circumcenter(ps.positions[static_cast<std::size_t>(j)], ps.weights[static_cast<std::size_t>(j)],
                              ps.positions[static_cast<std::size_t>(k)], ps.weights[static_cast<std::size_t>(k)],
                              ps.positions[static_cast<std::size_t>(l)], ps.weights[static_cast<std::size_t>(l)],
                              degenerate_tol);
  } catch (const DegenerateTriangleError&) {
    return 0;
  }
  const double rho = power_distance(c, ps.positions[static_cast<std::size_t>(j)], ps.weights[static_cast<std::size_t>(j)]);
  double min_delta = std::numeric_limits<double>::infinity();
  int min_m = -1;
  for (int m = 0; m < ps.size(); ++m) {
    if (m == j || m == k || m == l) continue;
    const double delta =
        power_distance(c, ps.positions[static_cast<std::size_t>(m)], ps.weights[static_cast<std::size_t>(m)]) - rho;
    if (delta < -margin) return 0;  // strongly rejected either way
    if (delta < min_delta) {
      min_delta = delta;
      min_m = m;
    }
  }
  if (min_m >= 0 && min_delta <= margin)
    throw AmbiguousConfigurationError(j, k, l, min_m, min_delta);
  return 1;
}

}  // namespace

bool power_test(const WeightedPointSet& ps, int j, int k, int l) {
  const double scale = ps.bbox_diagonal();
  // Margin 0: a raw test used only to break exact-threshold ties.
  Vec2 c;
  try {
    c = weighted_circumcenter(ps.positions[static_cast<std::size_t>(j)], ps.weights[static_cast<std::size_t>(j)],
                              ps.positions[static_cast<std::size_t>(k)], ps.weights[static_cast<std::size_t>(k)],
                              ps.positions[static_cast<std::size_t>(l)], ps.weights[static_cast<std::size_t>(l)],
                              kDegenerateRel * scale * scale);
  } catch (const DegenerateTriangleError&) {
    return false;
  }
  const double rho = power_distance(c, ps.positions[static_cast<std::size_t>(j)], ps.weights[static_cast<std::size_t>(j)]);
  for (int m = 0; m < ps.size(); ++m) {
    if (m == j || m == k || m == l) continue;
    if (power_distance(c, ps.positions[static_cast<std::size_t>(m)], ps.weights[static_cast<std::size_t>(m)]) < rho)
      return false;
  }
  return true;
}

DiscreteMesh brute_force_wdt(const WeightedPointSet& ps) {
  return brute_force_wdt(ps, kAmbiguityRel);
}

DiscreteMesh brute_force_wdt(const WeightedPointSet& ps, double ambiguity_rel) {
  if (ps.size() < 3) throw ValidationError("brute_force_wdt: need n >= 3");
  const double scale = ps.bbox_diagonal();
  const double margin = ambiguity_rel * scale * scale;
  const double degenerate_tol = kDegenerateRel * scale * scale;

  DiscreteMesh mesh = DiscreteMesh::from_2d([&] {
    std::vector<Vec2> pts(ps.positions.begin(), ps.positions.end());
    return pts;
  }());

  const int n = ps.size();
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      for (int l = k + 1; l < n; ++l)
        if (classify_triple(ps, j, k, l, margin, degenerate_tol)) {
          Face f{j, k, l};
          // orient CCW
          if (cross(ps.positions[static_cast<std::size_t>(k)] - ps.positions[static_cast<std::size_t>(j)],
                    ps.positions[static_cast<std::size_t>(l)] - ps.positions[static_cast<std::size_t>(j)]) < 0.0)
            std::swap(f[1], f[2]);
          mesh.faces.push_back(f);
        }
  mesh.recompute_used();
  return mesh;
}

bool vertex_is_redundant(const WeightedPointSet& ps, int j) {
  if (j < 0 || j >= ps.size()) throw ValidationError("vertex_is_redundant: index out of range");
  const DiscreteMesh mesh = brute_force_wdt(ps);
  return !mesh.used[static_cast<std::size_t>(j)];
}

}  // namespace dwdt
