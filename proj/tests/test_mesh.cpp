#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dwdt/mesh.hpp"

using namespace dwdt;

TEST_CASE("single triangle is manifold") {
  DiscreteMesh m = DiscreteMesh::from_2d({{0, 0}, {1, 0}, {0, 1}});
  m.faces = {{0, 1, 2}};
  m.recompute_used();
  CHECK(manifold_check(m).ok());
}

TEST_CASE("two triangles sharing an edge with consistent orientation") {
  DiscreteMesh m = DiscreteMesh::from_2d({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  m.faces = {{0, 1, 2}, {0, 2, 3}};
  m.recompute_used();
  CHECK(manifold_check(m).ok());
}

TEST_CASE("orientation conflict is flagged") {
  DiscreteMesh m = DiscreteMesh::from_2d({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  m.faces = {{0, 1, 2}, {0, 3, 2}};  // second face traverses 0->2... wait: edge (0,2)
  m.recompute_used();
  const ManifoldReport r = manifold_check(m);
  CHECK(!r.ok());
  CHECK(r.orientation_conflicts.size() == 1);
}

TEST_CASE("edge with three faces is flagged") {
  DiscreteMesh m = DiscreteMesh::from_2d({{0, 0}, {1, 0}, {0, 1}, {0, -1}, {-1, 0}});
  m.faces = {{0, 1, 2}, {0, 3, 1}, {0, 1, 4}};
  m.recompute_used();
  const ManifoldReport r = manifold_check(m);
  CHECK(!r.overused_edges.empty());
}

TEST_CASE("bowtie vertex is flagged") {
  DiscreteMesh m = DiscreteMesh::from_2d({{0, 0}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
  m.faces = {{0, 1, 3}, {0, 4, 2}};
  m.recompute_used();
  const ManifoldReport r = manifold_check(m);
  CHECK(!r.ok());
  REQUIRE(r.nonmanifold_vertices.size() == 1);
  CHECK(r.nonmanifold_vertices[0] == 0);
}

TEST_CASE("isolated used vertex is flagged") {
  DiscreteMesh m = DiscreteMesh::from_2d({{0, 0}, {1, 0}, {0, 1}, {5, 5}});
  m.faces = {{0, 1, 2}};
  m.used = {1, 1, 1, 1};  // claims vertex 3 is used
  const ManifoldReport r = manifold_check(m);
  CHECK(r.isolated_used_vertices == std::vector<int>{3});
}
