#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "dwdt/oracle.hpp"
#include "support/instances.hpp"

using namespace dwdt;
using dwdt::testing::general_position_instance;

namespace {

// Independent empty-circumcircle check for the unweighted case.
bool empty_circumcircle(const WeightedPointSet& ps, int j, int k, int l) {
  const Vec2 c = weighted_circumcenter<double>(ps.positions[(std::size_t)j], 0.0,
                                               ps.positions[(std::size_t)k], 0.0,
                                               ps.positions[(std::size_t)l], 0.0);
  const double r2 = norm2(ps.positions[(std::size_t)j] - c);
  for (int m = 0; m < ps.size(); ++m) {
    if (m == j || m == k || m == l) continue;
    if (norm2(ps.positions[(std::size_t)m] - c) < r2) return false;
  }
  return true;
}

// Unit square corners (slightly perturbed off cocircularity) plus center.
WeightedPointSet perturbed_square_plus_center(double center_weight_sq) {
  WeightedPointSet ps;
  ps.positions = {{0, 0}, {1.013, 0}, {1, 1.007}, {0, 0.991}, {0.501, 0.499}};
  ps.weights = {0, 0, 0, 0, std::sqrt(std::max(0.0, center_weight_sq))};
  return ps;
}

}  // namespace

TEST_CASE("three points give one triangle") {
  WeightedPointSet ps;
  ps.positions = {{0, 0}, {1, 0}, {0, 1}};
  ps.weights = {0, 0, 0};
  const DiscreteMesh mesh = brute_force_wdt(ps);
  REQUIRE(mesh.faces.size() == 1);
  CHECK(mesh.used == std::vector<std::uint8_t>{1, 1, 1});
  CHECK(!vertex_is_redundant(ps, 0));
  CHECK(!vertex_is_redundant(ps, 1));
  CHECK(!vertex_is_redundant(ps, 2));
}

TEST_CASE("square plus center fans into four triangles") {
  const WeightedPointSet ps = perturbed_square_plus_center(0.0);
  const DiscreteMesh mesh = brute_force_wdt(ps);
  CHECK(mesh.faces.size() == 4);
  for (const Face& f : mesh.faces)
    CHECK((f[0] == 4 || f[1] == 4 || f[2] == 4));
  CHECK(!vertex_is_redundant(ps, 4));
}

TEST_CASE("heavy corners exclude the center") {
  // Raising all corner weights is the shifted form of lowering the center's
  // squared weight below zero.
  WeightedPointSet ps = perturbed_square_plus_center(0.0);
  for (int c = 0; c < 4; ++c) ps.weights[(std::size_t)c] = std::sqrt(0.9);
  const DiscreteMesh mesh = brute_force_wdt(ps);
  CHECK(mesh.faces.size() == 2);
  CHECK(vertex_is_redundant(ps, 4));
  CHECK(!mesh.used[4]);
}

TEST_CASE("exact cocircular square is ambiguous") {
  WeightedPointSet ps;
  ps.positions = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  ps.weights = {0, 0, 0, 0};
  CHECK_THROWS_AS((void)brute_force_wdt(ps), AmbiguousConfigurationError);
}

TEST_CASE("unweighted output satisfies the empty circumcircle property") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> size(4, 60);
  for (int trial = 0; trial < 100; ++trial) {
    const auto [ps, wdt] = general_position_instance(rng, size(rng), 0.0);
    for (const Face& f : wdt.faces) CHECK(empty_circumcircle(ps, f[0], f[1], f[2]));
  }
}

TEST_CASE("planar triangulation Euler relation") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> size(4, 50);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [ps, wdt] = general_position_instance(rng, size(rng), 0.09);
    // F - E + V_used = 1 for a triangulated disk
    std::set<std::pair<int, int>> edges;
    for (const Face& f : wdt.faces)
      for (int e = 0; e < 3; ++e) {
        int a = f[(std::size_t)e], b = f[(std::size_t)((e + 1) % 3)];
        if (a > b) std::swap(a, b);
        edges.insert({a, b});
      }
    int used = 0;
    for (std::uint8_t u : wdt.used) used += u;
    CHECK(static_cast<int>(wdt.faces.size()) - static_cast<int>(edges.size()) + used == 1);
    CHECK(manifold_check(wdt).ok());
  }
}

TEST_CASE("shift of all squared weights leaves faces unchanged") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    auto [ps, wdt] = general_position_instance(rng, 20, 0.09);
    WeightedPointSet shifted = ps;
    for (double& w : shifted.weights) w = std::sqrt(w * w + 0.35);
    const DiscreteMesh wdt2 = brute_force_wdt(shifted);
    CHECK(sorted_face_set(wdt) == sorted_face_set(wdt2));
  }
}

TEST_CASE("out of range index is rejected") {
  WeightedPointSet ps;
  ps.positions = {{0, 0}, {1, 0}, {0, 1}};
  ps.weights = {0, 0, 0};
  CHECK_THROWS_AS((void)vertex_is_redundant(ps, 3), ValidationError);
}
