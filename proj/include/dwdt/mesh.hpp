#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dwdt/vec.hpp"

namespace dwdt {

using Face = std::array<int, 3>;

// Hard triangulation. Planar meshes keep z = 0; faces are CCW in the xy
// plane for 2D meshes.
struct DiscreteMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  std::vector<std::uint8_t> used;  // appears in >= 1 face

  static DiscreteMesh from_2d(const std::vector<Vec2>& pts);
  void recompute_used();
  Vec2 vertex2(int i) const { return {vertices[static_cast<std::size_t>(i)].x,
                                      vertices[static_cast<std::size_t>(i)].y}; }
};

struct ManifoldReport {
  std::vector<std::array<int, 2>> overused_edges;       // > 2 incident faces
  std::vector<std::array<int, 2>> orientation_conflicts;  // same direction twice
  std::vector<int> nonmanifold_vertices;  // star not a single fan
  std::vector<int> isolated_used_vertices;

  bool ok() const {
    return overused_edges.empty() && orientation_conflicts.empty() &&
           nonmanifold_vertices.empty() && isolated_used_vertices.empty();
  }
  std::string summary() const;
};

// Manifold-with-boundary validation: every edge on at most two faces with
// opposite orientations, every used vertex star a single (open or closed)
// fan, no used vertex without a face.
ManifoldReport manifold_check(const DiscreteMesh& mesh);

// Canonical face-set comparison key: sorted vertex triples, sorted.
std::vector<Face> sorted_face_set(const DiscreteMesh& mesh);

}  // namespace dwdt
