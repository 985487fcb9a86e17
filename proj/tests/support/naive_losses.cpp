#include "support/naive_losses.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dwdt::testing {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Independent weighted circumcenter: solve the two power equalities
// directly.
Vec2 circumcenter(const WeightedPointSet& ps, int j, int k, int l) {
  const Vec2 vj = ps.positions[(std::size_t)j], vk = ps.positions[(std::size_t)k],
             vl = ps.positions[(std::size_t)l];
  const double wj = ps.weights[(std::size_t)j], wk = ps.weights[(std::size_t)k],
               wl = ps.weights[(std::size_t)l];
  const double a11 = 2 * (vk.x - vj.x), a12 = 2 * (vk.y - vj.y);
  const double a21 = 2 * (vl.x - vj.x), a22 = 2 * (vl.y - vj.y);
  const double b1 = (vk.x * vk.x + vk.y * vk.y) - (vj.x * vj.x + vj.y * vj.y) + wj * wj - wk * wk;
  const double b2 = (vl.x * vl.x + vl.y * vl.y) - (vj.x * vj.x + vj.y * vj.y) + wj * wj - wl * wl;
  const double det = a11 * a22 - a12 * a21;
  return {(b1 * a22 - b2 * a12) / det, (a11 * b2 - a21 * b1) / det};
}

// Signed Euclidean distance from x to the power bisector of (j, m), positive
// on the j side.
double bisector_distance(const WeightedPointSet& ps, int j, int m, const Vec2& x) {
  const Vec2 vj = ps.positions[(std::size_t)j], vm = ps.positions[(std::size_t)m];
  const double wj = ps.weights[(std::size_t)j], wm = ps.weights[(std::size_t)m];
  // power(x,j) - power(x,m) = |x-vj|^2 - wj^2 - |x-vm|^2 + wm^2; the
  // Euclidean distance is that divided by 2|vm-vj|, negative on the j side,
  // so flip the sign.
  const double pj = norm2(x - vj) - wj * wj;
  const double pm = norm2(x - vm) - wm * wm;
  return (pm - pj) / (2.0 * norm(vm - vj));
}

}  // namespace

std::vector<NaiveTriangle> naive_soft_scores(const WeightedPointSet& ps, double alpha, int k) {
  const int n = ps.size();
  const int keff = std::min(k, n - 1);
  const NeighborTable nt = knn_brute_force(ps.positions, keff);
  auto in_knn = [&](int of, int who) {
    const auto& list = nt.neighbors[(std::size_t)of];
    return std::find(list.begin(), list.end(), who) != list.end();
  };
  std::vector<NaiveTriangle> out;
  for (int j = 0; j < n; ++j)
    for (int k2 = j + 1; k2 < n; ++k2)
      for (int l = k2 + 1; l < n; ++l) {
        if (!(in_knn(j, k2) && in_knn(k2, j) && in_knn(j, l) && in_knn(l, j) &&
              in_knn(k2, l) && in_knn(l, k2)))
          continue;
        const Vec2 e1 = ps.positions[(std::size_t)k2] - ps.positions[(std::size_t)j];
        const Vec2 e2 = ps.positions[(std::size_t)l] - ps.positions[(std::size_t)j];
        const double diag = ps.bbox_diagonal();
        if (std::abs(cross(e1, e2)) <= 1e-10 * diag * diag) continue;
        const Vec2 c = circumcenter(ps, j, k2, l);
        NaiveTriangle tri;
        tri.v = {j, k2, l};
        for (int t = 0; t < 3; ++t) {
          const int corner = tri.v[(std::size_t)t];
          double d = 1e6;  // empty exclusion list sentinel
          for (int m : nt.neighbors[(std::size_t)corner]) {
            if (m == tri.v[0] || m == tri.v[1] || m == tri.v[2]) continue;
            d = std::min(d, bisector_distance(ps, corner, m, c));
          }
          tri.corner_score[(std::size_t)t] = sigmoid(alpha * d);
        }
        tri.score = (tri.corner_score[0] + tri.corner_score[1] + tri.corner_score[2]) / 3.0;
        out.push_back(tri);
      }
  return out;
}

double naive_size_loss(const WeightedPointSet& ps, const std::vector<NaiveTriangle>& tris,
                       const Lift& lift, const AreaTarget& target) {
  double num = 0.0, den = 0.0;
  for (const NaiveTriangle& tri : tris) {
    const Vec3 a = lift(ps.positions[(std::size_t)tri.v[0]]);
    const Vec3 b = lift(ps.positions[(std::size_t)tri.v[1]]);
    const Vec3 c = lift(ps.positions[(std::size_t)tri.v[2]]);
    const double area = 0.5 * norm(cross(b - a, c - a));
    for (int t = 0; t < 3; ++t) {
      const double s = tri.corner_score[(std::size_t)t];
      const double tgt = target(ps.positions[(std::size_t)tri.v[(std::size_t)t]]);
      num += s * (area - tgt) * (area - tgt);
      den += s;
    }
  }
  return num / den;
}

double naive_boundary_loss(const WeightedPointSet& ps, const Polygon& boundary, double eps) {
  double acc = 0.0;
  for (const Vec2& p : ps.positions) {
    const BoundaryProjection proj = boundary.closest_boundary(p);
    const double d = dot(p - proj.point, proj.inward_normal);
    acc += std::exp(eps - std::min(eps, d));
  }
  return acc / ps.size();
}

double naive_angle_loss(const WeightedPointSet& ps, const std::vector<NaiveTriangle>& tris,
                        const Lift& lift) {
  double num = 0.0, den = 0.0;
  for (const NaiveTriangle& tri : tris) {
    for (int t = 0; t < 3; ++t) {
      const Vec3 vj = lift(ps.positions[(std::size_t)tri.v[(std::size_t)t]]);
      const Vec3 u = lift(ps.positions[(std::size_t)tri.v[(std::size_t)((t + 1) % 3)]]) - vj;
      const Vec3 w = lift(ps.positions[(std::size_t)tri.v[(std::size_t)((t + 2) % 3)]]) - vj;
      const double cosang = dot(u, w) / (norm(u) * norm(w));
      const double s = tri.corner_score[(std::size_t)t];
      num += s * std::abs(cosang - 0.5);
      den += s;
    }
  }
  return num / den;
}

double naive_curvature_loss(const WeightedPointSet& ps, const std::vector<NaiveTriangle>& tris,
                            const Lift& lift, const Direction& direction,
                            double adjacency_cutoff) {
  double den = 0.0;
  for (const NaiveTriangle& tri : tris)
    for (int t = 0; t < 3; ++t) den += tri.corner_score[(std::size_t)t];

  auto lse = [](const std::vector<double>& xs) {
    const double m = *std::max_element(xs.begin(), xs.end());
    double sum = 0.0;
    for (double x : xs) sum += std::exp(x - m);
    return m + std::log(sum);
  };

  double acc = 0.0;
  for (int j = 0; j < ps.size(); ++j) {
    std::vector<double> pos, neg;
    const Vec3 cj = direction(ps.positions[(std::size_t)j]);
    const Vec3 vj = lift(ps.positions[(std::size_t)j]);
    for (const NaiveTriangle& tri : tris) {
      if (tri.score <= adjacency_cutoff) continue;
      int slot = -1;
      for (int t = 0; t < 3; ++t)
        if (tri.v[(std::size_t)t] == j) slot = t;
      if (slot < 0) continue;
      const double s = tri.corner_score[(std::size_t)slot];
      for (int off = 1; off <= 2; ++off) {
        const int m = tri.v[(std::size_t)((slot + off) % 3)];
        const Vec3 e = vj - lift(ps.positions[(std::size_t)m]);
        const Vec3 h = (1.0 / norm(e)) * e;
        pos.push_back(dot(cj, h) * s);
        neg.push_back(-dot(cj, h) * s);
      }
    }
    if (pos.empty()) continue;
    acc += lse(pos) + lse(neg);
  }
  return -acc / den;
}

Lift planar_lift() {
  return [](const Vec2& p) { return Vec3{p.x, p.y, 0.0}; };
}

}  // namespace dwdt::testing
