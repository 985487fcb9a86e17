#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "dwdt/oracle.hpp"
#include "dwdt/soft_delaunay.hpp"
#include "support/instances.hpp"
#include "support/naive_losses.hpp"

using namespace dwdt;
using dwdt::testing::general_position_instance;

namespace {

SoftParams params_with(double alpha, int k) {
  SoftParams p;
  p.alpha = alpha;
  p.k = k;
  return p;
}

WeightedPointSet square_points() {
  WeightedPointSet ps;
  ps.positions = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  ps.weights = {0, 0, 0, 0};
  return ps;
}

}  // namespace

TEST_CASE("four points with k=3 give all four triples") {
  WeightedPointSet ps = square_points();
  ps.positions[2] = {1.1, 1.0};  // break cocircularity
  const NeighborTable nt = knn(ps.positions, 3);
  const auto candidates = enumerate_candidates(ps, nt, 0.0);
  CHECK(candidates.size() == 4);
}

TEST_CASE("collinear triple is dropped and counted") {
  WeightedPointSet ps;
  ps.positions = {{0, 0}, {1, 0}, {2, 0}, {1, 1}};
  ps.weights = {0, 0, 0, 0};
  const NeighborTable nt = knn(ps.positions, 3);
  int dropped = 0;
  const auto candidates = enumerate_candidates(ps, nt, 1e-12, &dropped);
  CHECK(candidates.size() == 3);
  CHECK(dropped == 1);
}

TEST_CASE("candidates are sorted and pairwise mutual") {
  std::mt19937_64 rng(41);
  const WeightedPointSet ps = dwdt::testing::random_instance(rng, 60, 0.02);
  const SoftTriangulation soft = inclusion_scores(ps, params_with(1000, 8));
  const NeighborTable& nt = soft.neighbors;
  for (std::size_t i = 1; i < soft.candidates.size(); ++i)
    CHECK(soft.candidates[i - 1].v < soft.candidates[i].v);
  for (const CandidateTriangle& tri : soft.candidates)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b) CHECK(nt.contains(tri.v[(std::size_t)a], tri.v[(std::size_t)b]));
}

TEST_CASE("single triangle saturates every corner score") {
  WeightedPointSet ps;
  ps.positions = {{0, 0}, {1, 0}, {0.5, 0.866}};
  ps.weights = {0, 0, 0};
  const SoftTriangulation soft = inclusion_scores(ps, params_with(1000, 80));
  REQUIRE(soft.count() == 1);
  for (int t = 0; t < 3; ++t) {
    CHECK(soft.corners[0][(std::size_t)t].score == 1.0);
    CHECK(soft.corners[0][(std::size_t)t].argmin == -1);
  }
  CHECK(soft.tri_score[0] == 1.0);
  const DiscreteMesh mesh = extract_discrete(ps, soft);
  CHECK(mesh.faces.size() == 1);
}

TEST_CASE("cocircular square scores exactly 0.5 at the shared boundary") {
  const WeightedPointSet ps = square_points();
  const NeighborTable nt = knn(ps.positions, 3);
  // triangle (0,1,2): circumcenter (0.5, 0.5) sits exactly on the bisector
  // against vertex 3
  const CandidateTriangle tri{{0, 1, 2}};
  int argmin = -1;
  const double d = reduced_cell_signed_distance(ps, nt, tri, 0, &argmin);
  CHECK(d == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(argmin == 3);
  const SoftTriangulation soft = inclusion_scores(ps, params_with(1000, 3));
  for (int i = 0; i < soft.count(); ++i)
    CHECK(soft.tri_score[(std::size_t)i] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("pulling a square vertex outward opens the reduced cell") {
  WeightedPointSet ps = square_points();
  ps.positions[3] = {0.0, 1.2};
  const NeighborTable nt = knn(ps.positions, 3);
  const CandidateTriangle tri{{0, 1, 2}};
  const double d = reduced_cell_signed_distance(ps, nt, tri, 0);
  CHECK(d > 0.0);
}

TEST_CASE("corner scores cross 0.5 simultaneously") {
  // Move vertex 3 through the cocircular configuration; all three corner
  // scores of triangle (0,1,2) must cross 0.5 together.
  const double alpha = 1000.0;
  auto corner_scores = [&](double y3) {
    WeightedPointSet ps = square_points();
    ps.positions[3] = {0.0, y3};
    const SoftTriangulation soft = inclusion_scores(ps, params_with(alpha, 3));
    for (int i = 0; i < soft.count(); ++i) {
      const CandidateTriangle& tri = soft.candidates[(std::size_t)i];
      if (tri.v == std::array<int, 3>{0, 1, 2})
        return std::array<double, 3>{soft.corners[(std::size_t)i][0].score,
                                     soft.corners[(std::size_t)i][1].score,
                                     soft.corners[(std::size_t)i][2].score};
    }
    REQUIRE(false);
    return std::array<double, 3>{};
  };
  // bisect on the first corner score
  double lo = 0.9, hi = 1.1;  // score(lo) < 0.5 < score(hi)
  REQUIRE(corner_scores(lo)[0] < 0.5);
  REQUIRE(corner_scores(hi)[0] > 0.5);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (corner_scores(mid)[0] < 0.5 ? lo : hi) = mid;
  }
  const auto scores = corner_scores(hi);
  CHECK(std::abs(scores[0] - 0.5) < 1e-6);
  CHECK(std::abs(scores[1] - 0.5) < 1e-3);
  CHECK(std::abs(scores[2] - 0.5) < 1e-3);
}

TEST_CASE("extraction matches the oracle with k = n-1") {
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<int> size(4, 40);
  for (int trial = 0; trial < 60; ++trial) {
    const auto [ps, wdt] = general_position_instance(rng, size(rng), 0.09);
    const SoftTriangulation soft = inclusion_scores(ps, params_with(1000, ps.size() - 1));
    const DiscreteMesh mesh = extract_discrete(ps, soft);
    CHECK(sorted_face_set(mesh) == sorted_face_set(wdt));
    CHECK(manifold_check(mesh).ok());
  }
}

TEST_CASE("threshold crossing is alpha independent") {
  std::mt19937_64 rng(53);
  for (double alpha : {3.0, 50.0, 1000.0, 1e6}) {
    std::mt19937_64 rng_local = rng;
    const auto [ps, wdt] = general_position_instance(rng_local, 25, 0.09);
    const SoftTriangulation soft = inclusion_scores(ps, params_with(alpha, ps.size() - 1));
    const DiscreteMesh mesh = extract_discrete(ps, soft);
    CHECK(sorted_face_set(mesh) == sorted_face_set(wdt));
  }
}

TEST_CASE("candidate set covers the oracle faces at k=80") {
  std::mt19937_64 rng(59);
  const auto [ps, wdt] = general_position_instance(rng, 200, 0.002);
  const SoftTriangulation soft = inclusion_scores(ps, params_with(1000, 80));
  std::set<std::array<int, 3>> candidate_keys;
  for (const CandidateTriangle& tri : soft.candidates) candidate_keys.insert(tri.v);
  for (Face f : wdt.faces) {
    std::sort(f.begin(), f.end());
    CHECK(candidate_keys.count(f) == 1);
  }
  const DiscreteMesh mesh = extract_discrete(ps, soft);
  CHECK(sorted_face_set(mesh) == sorted_face_set(wdt));
}

TEST_CASE("increasing alpha pushes scores away from 0.5") {
  std::mt19937_64 rng(61);
  const auto [ps, wdt] = general_position_instance(rng, 20, 0.09);
  const SoftTriangulation a = inclusion_scores(ps, params_with(200, ps.size() - 1));
  const SoftTriangulation b = inclusion_scores(ps, params_with(900, ps.size() - 1));
  REQUIRE(a.count() == b.count());
  for (int i = 0; i < a.count(); ++i) {
    const double da = std::abs(a.tri_score[(std::size_t)i] - 0.5);
    const double db = std::abs(b.tri_score[(std::size_t)i] - 0.5);
    CHECK(db >= da - 1e-12);
    CHECK((a.tri_score[(std::size_t)i] > 0.5) == (b.tri_score[(std::size_t)i] > 0.5));
  }
}

TEST_CASE("weight shift leaves scores unchanged") {
  std::mt19937_64 rng(67);
  const auto [ps, wdt] = general_position_instance(rng, 25, 0.09);
  const SoftTriangulation a = inclusion_scores(ps, params_with(1000, 12));
  WeightedPointSet shifted = ps;
  for (double& w : shifted.weights) w = std::sqrt(w * w + 0.4);
  const SoftTriangulation b = inclusion_scores(shifted, params_with(1000, 12));
  REQUIRE(a.count() == b.count());
  for (int i = 0; i < a.count(); ++i)
    for (int t = 0; t < 3; ++t)
      CHECK(std::abs(a.corners[(std::size_t)i][(std::size_t)t].score -
                     b.corners[(std::size_t)i][(std::size_t)t].score) < 1e-12);
}

TEST_CASE("scores are continuous under small perturbations") {
  std::mt19937_64 rng(71);
  const auto [ps, wdt] = general_position_instance(rng, 30, 0.05);
  const SoftTriangulation a = inclusion_scores(ps, params_with(1000, ps.size() - 1));
  WeightedPointSet moved = ps;
  const double delta = 1e-7;
  moved.positions[7].x += delta;
  const SoftTriangulation b = inclusion_scores(moved, params_with(1000, ps.size() - 1));
  REQUIRE(a.count() == b.count());
  // |ds| <= L * delta with L bounded by alpha/4 * |d d/dx| ~ alpha
  for (int i = 0; i < a.count(); ++i)
    CHECK(std::abs(a.tri_score[(std::size_t)i] - b.tri_score[(std::size_t)i]) < 1000.0 * delta);
}

TEST_CASE("scores match the literal recomputation") {
  std::mt19937_64 rng(73);
  const auto [ps, wdt] = general_position_instance(rng, 30, 0.05);
  const SoftTriangulation soft = inclusion_scores(ps, params_with(1000, 10));
  const auto naive = dwdt::testing::naive_soft_scores(ps, 1000, 10);
  REQUIRE(static_cast<int>(naive.size()) == soft.count());
  for (std::size_t i = 0; i < naive.size(); ++i) {
    CHECK(naive[i].v == soft.candidates[i].v);
    // clamped magnitudes below the floor differ; both are numerically zero
    CHECK(std::abs(naive[i].score - soft.tri_score[i]) < 1e-12);
  }
}

TEST_CASE("redundant center drops out of the soft extraction") {
  WeightedPointSet ps;
  ps.positions = {{0, 0}, {1.013, 0}, {1, 1.007}, {0, 0.991}, {0.501, 0.499}};
  ps.weights = {0, 0, 0, 0, 0};
  for (int c = 0; c < 4; ++c) ps.weights[(std::size_t)c] = std::sqrt(0.9);
  const SoftTriangulation soft = inclusion_scores(ps, params_with(1000, 4));
  const DiscreteMesh mesh = extract_discrete(ps, soft);
  CHECK(!mesh.used[4]);
  CHECK(vertex_is_redundant(ps, 4));
  CHECK(mesh.faces.size() == 2);
}
