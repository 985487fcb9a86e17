#include "dwdt/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dwdt {

double Polygon::area() const {
  double a = 0.0;
  const int n = size();
  for (int i = 0; i < n; ++i) {
    const Vec2& p = pts_[static_cast<std::size_t>(i)];
    const Vec2& q = pts_[static_cast<std::size_t>((i + 1) % n)];
    a += cross(p, q);
  }
  return 0.5 * a;
}

bool Polygon::contains(const Vec2& p) const {
  // Winding number by signed crossings of the upward ray; points on the
  // boundary report inside.
  const int n = size();
  int winding = 0;
  for (int i = 0; i < n; ++i) {
    const Vec2& a = pts_[static_cast<std::size_t>(i)];
    const Vec2& b = pts_[static_cast<std::size_t>((i + 1) % n)];
    const double side = cross(b - a, p - a);
    if (side == 0.0 && dot(p - a, p - b) <= 0.0) return true;  // on segment
    if (a.y <= p.y) {
      if (b.y > p.y && side > 0.0) ++winding;
    } else {
      if (b.y <= p.y && side < 0.0) --winding;
    }
  }
  return winding != 0;
}

Vec2 Polygon::inward_normal(int segment) const {
  const Vec2 a = pts_[static_cast<std::size_t>(segment)];
  const Vec2 b = pts_[static_cast<std::size_t>((segment + 1) % size())];
  const Vec2 d = b - a;
  const double len = norm(d);
  return {-d.y / len, d.x / len};  // left of the edge = interior for CCW
}

BoundaryProjection Polygon::closest_boundary(const Vec2& p) const {
  const int n = size();
  double best_d2 = std::numeric_limits<double>::infinity();
  BoundaryProjection best;
  double best_t = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2& a = pts_[static_cast<std::size_t>(i)];
    const Vec2& b = pts_[static_cast<std::size_t>((i + 1) % n)];
    const Vec2 ab = b - a;
    double t = dot(p - a, ab) / norm2(ab);
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 proj = a + t * ab;
    const double d2 = norm2(p - proj);
    if (d2 < best_d2) {
      best_d2 = d2;
      best.point = proj;
      best.segment = i;
      best_t = t;
    }
  }
  if (best_t > 0.0 && best_t < 1.0) {
    best.inward_normal = inward_normal(best.segment);
  } else {
    // Corner: bisector of the two adjacent edge normals.
    const int seg_prev = best_t == 0.0 ? (best.segment + n - 1) % n : best.segment;
    const int seg_next = best_t == 0.0 ? best.segment : (best.segment + 1) % n;
    const Vec2 n0 = inward_normal(seg_prev);
    const Vec2 n1 = inward_normal(seg_next);
    Vec2 sum = n0 + n1;
    const double len = norm(sum);
    best.inward_normal = len > 1e-12 ? Vec2{sum.x / len, sum.y / len} : n1;
  }
  return best;
}

double Polygon::signed_inside_distance(const Vec2& p) const {
  const BoundaryProjection proj = closest_boundary(p);
  return dot(p - proj.point, proj.inward_normal);
}

Polygon Polygon::rectangle(double x0, double y0, double x1, double y1) {
  return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

}  // namespace dwdt
