#pragma once

#include <vector>

#include "dwdt/vec.hpp"

namespace dwdt {

// Closest boundary point b and inward normal n at b; the repulsion loss uses
// (v - b) . n, which is positive inside. At polygon corners the normal is the
// normalized bisector of the adjacent edge normals.
struct BoundaryProjection {
  Vec2 point{};
  Vec2 inward_normal{};
  int segment = -1;  // segment index of the closest feature
};

// Simple CCW polygon (interior on the left of each directed edge).
class Polygon {
 public:
  Polygon() = default;
  explicit Polygon(std::vector<Vec2> pts) : pts_(std::move(pts)) {}

  const std::vector<Vec2>& points() const { return pts_; }
  int size() const { return static_cast<int>(pts_.size()); }
  Vec2 point(int i) const { return pts_[static_cast<std::size_t>(i)]; }

  double area() const;  // signed; positive for CCW
  bool contains(const Vec2& p) const;  // winding number; boundary counts as inside
  Vec2 inward_normal(int segment) const;
  BoundaryProjection closest_boundary(const Vec2& p) const;  // brute force over segments

  // (p - b) . n at the closest feature: positive inside, negative outside.
  double signed_inside_distance(const Vec2& p) const;

  static Polygon rectangle(double x0, double y0, double x1, double y1);

 private:
  std::vector<Vec2> pts_;
};

}  // namespace dwdt
