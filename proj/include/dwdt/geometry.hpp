#pragma once

// 2D geometric kernel for power diagrams: power bisectors, weighted
// circumcenters, and exact k-nearest-neighbor queries.
//
// The bisector/circumcenter primitives are templated on the scalar type so
// they can be recorded on the autodiff tape unchanged; degeneracy tests
// always branch on plain double values.

#include <span>
#include <vector>

#include "dwdt/autodiff.hpp"
#include "dwdt/error.hpp"
#include "dwdt/vec.hpp"

namespace dwdt {

// Vertex positions V and per-vertex weights W (stored unsquared; only w^2
// enters the power distance).
struct WeightedPointSet {
  std::vector<Vec2> positions;
  std::vector<double> weights;

  int size() const { return static_cast<int>(positions.size()); }

  // Diagonal of the position bounding box; the length scale for tolerances.
  double bbox_diagonal() const;
};

// power(x, (v, w)) = |x - v|^2 - w^2
inline double power_distance(const Vec2& x, const Vec2& v, double w) {
  return norm2(x - v) - w * w;
}

// Oriented line of equal power distance between two weighted sites.
// signed_bisector_distance is positive on the v_j side.
template <class S>
struct BisectorT {
  Vec2T<S> normal;  // unit, points toward the v_j side
  S offset;
};
using Bisector = BisectorT<double>;

// The power inequality |x-vj|^2 - wj^2 <= |x-vk|^2 - wk^2 reduces to the
// half-plane 2(vk-vj).x <= |vk|^2 - |vj|^2 + wj^2 - wk^2. A larger wj moves
// the line away from vj.
template <class S>
BisectorT<S> power_bisector(const Vec2T<S>& vj, const S& wj, const Vec2T<S>& vk,
                            const S& wk, int idx_j = -1, int idx_k = -1) {
  const Vec2T<S> u = vk - vj;
  const S len2 = norm2(u);
  if (value_of(len2) == 0.0) throw DegeneratePairError(idx_j, idx_k);
  using std::sqrt;
  const S len = sqrt(len2);
  const S inv_len = S(1.0) / len;
  const S rhs = norm2(vk) - norm2(vj) + wj * wj - wk * wk;
  const S c = S(0.5) * rhs * inv_len;
  BisectorT<S> b;
  b.normal = Vec2T<S>{S(-1.0) * u.x * inv_len, S(-1.0) * u.y * inv_len};
  b.offset = S(-1.0) * c;
  return b;
}

// Positive on the v_j side, zero on the line, linear in x.
template <class S>
S signed_bisector_distance(const Vec2T<S>& x, const BisectorT<S>& b) {
  return dot(b.normal, x) - b.offset;
}

// Unique point with equal power distance to three weighted sites, from the
// 2x2 linear system of the two bisector equalities. Throws
// DegenerateTriangleError when the sites are collinear within
// |cross| <= degenerate_tol (caller supplies an absolute tolerance).
template <class S>
Vec2T<S> weighted_circumcenter(const Vec2T<S>& vj, const S& wj,
                               const Vec2T<S>& vk, const S& wk,
                               const Vec2T<S>& vl, const S& wl,
                               double degenerate_tol = 0.0) {
  const Vec2T<S> ejk = vk - vj;
  const Vec2T<S> ejl = vl - vj;
  const S det = cross(ejk, ejl);
  const double detv = value_of(det);
  if (std::abs(detv) <= degenerate_tol) throw DegenerateTriangleError(detv);
  // 2*ejk . c = |vk|^2 - |vj|^2 + wj^2 - wk^2   (and same for l)
  const S bk = S(0.5) * (norm2(vk) - norm2(vj) + wj * wj - wk * wk);
  const S bl = S(0.5) * (norm2(vl) - norm2(vj) + wj * wj - wl * wl);
  const S inv_det = S(1.0) / det;
  return Vec2T<S>{(bk * ejl.y - bl * ejk.y) * inv_det,
                  (bl * ejk.x - bk * ejl.x) * inv_det};
}

// Per-vertex lists of the k nearest other vertices, ascending by Euclidean
// distance, ties broken by lower index.
struct NeighborTable {
  int k = 0;
  std::vector<std::vector<int>> neighbors;

  bool contains(int vertex, int candidate) const;
};

// Exact kNN, grid-accelerated; identical output to the all-pairs sort.
NeighborTable knn(std::span<const Vec2> points, int k);

// Reference implementation for tests and tiny inputs.
NeighborTable knn_brute_force(std::span<const Vec2> points, int k);

}  // namespace dwdt
