#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "dwdt/parameterization.hpp"

using namespace dwdt;

namespace {

// Two-triangle unit-square patch embedded with one raised corner (the lift
// is genuinely 3D but piecewise linear).
UvPatchMesh saddle_quad() {
  UvPatchMesh mesh;
  mesh.uv = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  mesh.positions = {{0, 0, 0}, {1, 0, 0}, {1, 1, 1}, {0, 1, 0}};
  mesh.faces = {{0, 1, 2}, {0, 2, 3}};
  return mesh;
}

// Identity patch: 3D = (u, v, 0).
UvPatchMesh identity_quad() {
  UvPatchMesh mesh;
  mesh.uv = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  mesh.positions = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  mesh.faces = {{0, 1, 2}, {0, 2, 3}};
  return mesh;
}

Mat32 fd_jacobian(const Parameterization& par, const Vec2& at, double h) {
  const Vec3 px1 = par.lift({at.x + h, at.y});
  const Vec3 px0 = par.lift({at.x - h, at.y});
  const Vec3 py1 = par.lift({at.x, at.y + h});
  const Vec3 py0 = par.lift({at.x, at.y - h});
  Mat32 jac;
  jac.col0 = (1.0 / (2 * h)) * (px1 - px0);
  jac.col1 = (1.0 / (2 * h)) * (py1 - py0);
  return jac;
}

void check_close(const Vec3& a, const Vec3& b, double tol) {
  CHECK(std::abs(a.x - b.x) < tol);
  CHECK(std::abs(a.y - b.y) < tol);
  CHECK(std::abs(a.z - b.z) < tol);
}

}  // namespace

TEST_CASE("identity patch lifts to itself with identity jacobian") {
  const UvPatchMesh mesh = identity_quad();
  mesh.validate();
  const UvPatchParameterization par(mesh);
  const Vec2 q{0.3, 0.4};
  const Vec3 p = par.lift(q);
  CHECK(p.x == doctest::Approx(q.x));
  CHECK(p.y == doctest::Approx(q.y));
  CHECK(p.z == 0.0);
  const Mat32 jac = par.lift_jacobian(q);
  CHECK(jac.col0.x == doctest::Approx(1.0));
  CHECK(jac.col0.y == doctest::Approx(0.0));
  CHECK(jac.col0.z == doctest::Approx(0.0));
  CHECK(jac.col1.x == doctest::Approx(0.0));
  CHECK(jac.col1.y == doctest::Approx(1.0));
  CHECK(jac.col1.z == doctest::Approx(0.0));
}

TEST_CASE("barycentric lift hits mesh vertices exactly") {
  const UvPatchMesh mesh = saddle_quad();
  const UvPatchParameterization par(mesh);
  for (int v = 0; v < mesh.vertex_count(); ++v)
    check_close(par.lift(mesh.uv[(std::size_t)v]), mesh.positions[(std::size_t)v], 1e-12);
}

TEST_CASE("uv face jacobian matches finite differences") {
  const UvPatchMesh mesh = saddle_quad();
  const UvPatchParameterization par(mesh);
  const Vec2 q{0.6, 0.3};  // interior of face 0
  const Mat32 jac = par.lift_jacobian(q);
  const Mat32 fd = fd_jacobian(par, q, 1e-7);
  check_close(jac.col0, fd.col0, 1e-6);
  check_close(jac.col1, fd.col1, 1e-6);
}

TEST_CASE("forward of lift round-trips interior points") {
  const UvPatchMesh mesh = saddle_quad();
  const UvPatchParameterization par(mesh);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec2 q{u(rng), u(rng)};
    const auto back = par.forward(par.lift(q));
    REQUIRE(back.has_value());
    CHECK(back->x == doctest::Approx(q.x).epsilon(1e-9));
    CHECK(back->y == doctest::Approx(q.y).epsilon(1e-9));
  }
}

TEST_CASE("outside-domain queries report the nearest boundary point") {
  const UvPatchMesh mesh = identity_quad();
  const UvPatchParameterization par(mesh);
  try {
    (void)par.lift({1.6, 0.5});
    CHECK(false);
  } catch (const OutsideDomainError& e) {
    CHECK(e.nearest.x == doctest::Approx(1.0));
    CHECK(e.nearest.y == doctest::Approx(0.5));
  }
}

TEST_CASE("catenoid closed forms") {
  const CatenoidSurface cat;
  const Vec3 p = cat.lift({0, 0});
  check_close(p, {1, 0, 0}, 1e-15);
  const Mat32 jac = cat.lift_jacobian({0, 0});
  check_close(jac.col0, {0, 1, 0}, 1e-15);
  check_close(jac.col1, {0, 0, 1}, 1e-15);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uu(0.1, 2 * std::numbers::pi - 0.1);
  std::uniform_real_distribution<double> vv(-0.9, 0.9);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec2 q{uu(rng), vv(rng)};
    const Mat32 a = cat.lift_jacobian(q);
    const Mat32 fd = fd_jacobian(cat, q, 1e-6);
    check_close(a.col0, fd.col0, 1e-5);
    check_close(a.col1, fd.col1, 1e-5);
  }
  const auto back = cat.forward(cat.lift({2.5, 0.3}));
  REQUIRE(back.has_value());
  CHECK(back->x == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(back->y == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("boundary polygon of a patch") {
  const UvPatchMesh mesh = identity_quad();
  const Polygon poly = boundary_polygon(mesh);
  CHECK(poly.size() == 4);
  CHECK(poly.area() == doctest::Approx(1.0));
  int bottom = -1;
  for (int i = 0; i < 4; ++i) {
    const Vec2 a = poly.point(i), b = poly.point((i + 1) % 4);
    if (a.y == 0.0 && b.y == 0.0) bottom = i;
  }
  REQUIRE(bottom >= 0);
  CHECK(poly.inward_normal(bottom).x == doctest::Approx(0.0));
  CHECK(poly.inward_normal(bottom).y == doctest::Approx(1.0));
}

TEST_CASE("closest boundary point matches brute-force segment projection") {
  const Polygon poly({{0, 0}, {2, 0}, {2, 1}, {1, 1.5}, {0, 1}});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.5, 2.5);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec2 q{u(rng), u(rng)};
    const BoundaryProjection proj = poly.closest_boundary(q);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < poly.size(); ++i) {
      const Vec2 a = poly.point(i), b = poly.point((i + 1) % poly.size());
      const Vec2 ab = b - a;
      const double t = std::clamp(dot(q - a, ab) / norm2(ab), 0.0, 1.0);
      best = std::min(best, norm(q - (a + t * ab)));
    }
    CHECK(norm(q - proj.point) == doctest::Approx(best).epsilon(1e-12));
    CHECK(std::abs(norm(proj.inward_normal) - 1.0) < 1e-12);
  }
}

TEST_CASE("scalar field sampling is barycentric") {
  UvPatchMesh mesh = saddle_quad();
  mesh.target_area = {0.0, 1.0, 0.0, 0.5};
  const UvPatchParameterization par(mesh);
  const UvMeshScalarField field(par);
  const Vec2 q{(0.0 + 1.0 + 1.0) / 3, (0.0 + 0.0 + 1.0) / 3};  // face-0 barycenter
  CHECK(field.value(q) == doctest::Approx(1.0 / 3));
  CHECK(field.value(mesh.uv[3]) == doctest::Approx(0.5));
  UvPatchMesh cmesh = saddle_quad();
  cmesh.target_area = {0.7, 0.7, 0.7, 0.7};
  const UvPatchParameterization cpar(cmesh);
  const UvMeshScalarField cfield(cpar);
  CHECK(cfield.value({0.11, 0.77}) == doctest::Approx(0.7));
  CHECK(cfield.gradient({0.11, 0.77}).x == doctest::Approx(0.0));
}

TEST_CASE("direction field interpolation stays unit length") {
  UvPatchMesh mesh = saddle_quad();
  const double s = 1.0 / std::sqrt(2.0);
  mesh.direction = {{1, 0, 0}, {s, s, 0}, {0, 1, 0}, {-s, s, 0}};
  const UvPatchParameterization par(mesh);
  const UvMeshDirectionField field(par);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec2 q{u(rng), u(rng)};
    CHECK(std::abs(norm(field.value(q)) - 1.0) < 1e-12);
  }
  const Vec2 q{0.61, 0.33};
  const Mat32 jac = field.jacobian(q);
  const double h = 1e-6;
  const Vec3 fx = (1.0 / (2 * h)) * (field.value({q.x + h, q.y}) - field.value({q.x - h, q.y}));
  const Vec3 fy = (1.0 / (2 * h)) * (field.value({q.x, q.y + h}) - field.value({q.x, q.y - h}));
  check_close(jac.col0, fx, 1e-6);
  check_close(jac.col1, fy, 1e-6);
}

TEST_CASE("patch validation rejects inverted and degenerate UV faces") {
  UvPatchMesh inverted = identity_quad();
  std::swap(inverted.faces[0][1], inverted.faces[0][2]);
  CHECK_THROWS_AS(inverted.validate(), InvalidPatchError);
  UvPatchMesh degenerate = identity_quad();
  degenerate.uv[2] = degenerate.uv[1];
  CHECK_THROWS_AS(degenerate.validate(), InvalidPatchError);
}

TEST_CASE("uv normalization fits the unit box") {
  UvPatchMesh mesh = saddle_quad();
  for (Vec2& p : mesh.uv) p = {p.x * 3.0 + 5.0, p.y * 3.0 - 2.0};
  mesh.normalize_uv();
  double hix = 0, hiy = 0;
  for (const Vec2& p : mesh.uv) {
    CHECK(p.x >= -1e-12);
    CHECK(p.y >= -1e-12);
    hix = std::max(hix, p.x);
    hiy = std::max(hiy, p.y);
  }
  CHECK(std::max(hix, hiy) == doctest::Approx(1.0));
}
