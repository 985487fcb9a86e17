#include "dwdt/parameterization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace dwdt {

Vec3T<ad::Var> Parameterization::lift_var(ad::Tape& tape, const Vec2& at,
                                          const ad::Var& u, const ad::Var& v) const {
  const Vec3 p = lift(at);
  const Mat32 jac = lift_jacobian(at);
  return {ad::custom_node2(tape, p.x, u, jac.col0.x, v, jac.col1.x, "lift"),
          ad::custom_node2(tape, p.y, u, jac.col0.y, v, jac.col1.y, "lift"),
          ad::custom_node2(tape, p.z, u, jac.col0.z, v, jac.col1.z, "lift")};
}

ad::Var ScalarField2::value_var(ad::Tape& tape, const Vec2& at, const ad::Var& u,
                                const ad::Var& v) const {
  const Vec2 g = gradient(at);
  return ad::custom_node2(tape, value(at), u, g.x, v, g.y, "field");
}

Vec3T<ad::Var> DirectionField2::value_var(ad::Tape& tape, const Vec2& at,
                                          const ad::Var& u, const ad::Var& v) const {
  const Vec3 c = value(at);
  const Mat32 jac = jacobian(at);
  return {ad::custom_node2(tape, c.x, u, jac.col0.x, v, jac.col1.x, "field"),
          ad::custom_node2(tape, c.y, u, jac.col0.y, v, jac.col1.y, "field"),
          ad::custom_node2(tape, c.z, u, jac.col0.z, v, jac.col1.z, "field")};
}

ConstantDirectionField::ConstantDirectionField(const Vec3& c) : c_(c) {
  const double len = norm(c_);
  if (len < 1e-12) throw ValidationError("direction field: zero vector");
  c_ = (1.0 / len) * c_;
}

// --- catenoid ---------------------------------------------------------------

CatenoidSurface::CatenoidSurface()
    : boundary_(Polygon::rectangle(0.0, -1.0, 2.0 * std::numbers::pi, 1.0)) {}

Vec3 CatenoidSurface::lift(const Vec2& uv) const {
  const double ch = std::cosh(uv.y);
  return {ch * std::cos(uv.x), ch * std::sin(uv.x), uv.y};
}

Mat32 CatenoidSurface::lift_jacobian(const Vec2& uv) const {
  const double ch = std::cosh(uv.y);
  const double sh = std::sinh(uv.y);
  Mat32 jac;
  jac.col0 = {-ch * std::sin(uv.x), ch * std::cos(uv.x), 0.0};
  jac.col1 = {sh * std::cos(uv.x), sh * std::sin(uv.x), 1.0};
  return jac;
}

std::optional<Vec2> CatenoidSurface::forward(const Vec3& p) const {
  double u = std::atan2(p.y, p.x);
  if (u < 0.0) u += 2.0 * std::numbers::pi;
  return Vec2{u, p.z};
}

double CatenoidSurface::principal_curvature_magnitude(double v) {
  const double ch = std::cosh(v);
  return 1.0 / (ch * ch);
}

// --- UV patch mesh -----------------------------------------------------------

void UvPatchMesh::validate() const {
  if (positions.size() != uv.size())
    throw InvalidPatchError("patch: position/uv count mismatch");
  const int n = vertex_count();
  for (const Face& f : faces)
    for (int v : f)
      if (v < 0 || v >= n) throw InvalidPatchError("patch: face index out of range");
  double uv_scale = 0.0;
  for (const Vec2& p : uv) uv_scale = std::max(uv_scale, std::abs(p.x) + std::abs(p.y));
  const double tol = 1e-12 * std::max(1.0, uv_scale * uv_scale);
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const Face& f = faces[fi];
    const double a2 = cross(uv[static_cast<std::size_t>(f[1])] - uv[static_cast<std::size_t>(f[0])],
                            uv[static_cast<std::size_t>(f[2])] - uv[static_cast<std::size_t>(f[0])]);
    if (a2 <= tol)
      throw InvalidPatchError("patch: UV face " + std::to_string(fi) +
                              (a2 < 0 ? " is inverted" : " is degenerate"));
  }
  if (!target_area.empty() && target_area.size() != positions.size())
    throw InvalidPatchError("patch: target-area field size mismatch");
  if (!direction.empty()) {
    if (direction.size() != positions.size())
      throw InvalidPatchError("patch: direction field size mismatch");
    for (const Vec3& c : direction)
      if (std::abs(norm(c) - 1.0) > 1e-6)
        throw InvalidPatchError("patch: direction field vector not unit length");
  }
  DiscreteMesh shell;
  shell.vertices = positions;
  shell.faces = faces;
  shell.recompute_used();
  const ManifoldReport report = manifold_check(shell);
  if (!report.ok()) throw InvalidPatchError("patch: " + report.summary());
}

double UvPatchMesh::normalize_uv() {
  double lox = uv[0].x, hix = uv[0].x, loy = uv[0].y, hiy = uv[0].y;
  for (const Vec2& p : uv) {
    lox = std::min(lox, p.x);
    hix = std::max(hix, p.x);
    loy = std::min(loy, p.y);
    hiy = std::max(hiy, p.y);
  }
  const double side = std::max(hix - lox, hiy - loy);
  const double s = side > 0.0 ? 1.0 / side : 1.0;
  for (Vec2& p : uv) p = {(p.x - lox) * s, (p.y - loy) * s};
  return s;
}

Polygon boundary_polygon(const UvPatchMesh& mesh) {
  // Directed boundary edges: those whose undirected edge has one incident
  // face, traversed with the face's (CCW) orientation.
  std::map<std::pair<int, int>, int> undirected;
  for (const Face& f : mesh.faces)
    for (int e = 0; e < 3; ++e) {
      int a = f[static_cast<std::size_t>(e)];
      int b = f[static_cast<std::size_t>((e + 1) % 3)];
      if (a > b) std::swap(a, b);
      undirected[{a, b}] += 1;
    }
  std::map<int, int> next;  // directed boundary edge a -> b
  int boundary_edges = 0;
  for (const Face& f : mesh.faces)
    for (int e = 0; e < 3; ++e) {
      const int a = f[static_cast<std::size_t>(e)];
      const int b = f[static_cast<std::size_t>((e + 1) % 3)];
      const int count = undirected[{std::min(a, b), std::max(a, b)}];
      if (count == 1) {
        if (next.count(a)) throw InvalidPatchError("patch boundary: non-manifold vertex");
        next[a] = b;
        ++boundary_edges;
      }
    }
  if (boundary_edges == 0) throw InvalidPatchError("patch has no boundary (closed surface)");

  std::vector<Vec2> loop;
  const int start = next.begin()->first;
  int cur = start;
  do {
    loop.push_back(mesh.uv[static_cast<std::size_t>(cur)]);
    auto it = next.find(cur);
    if (it == next.end()) throw InvalidPatchError("patch boundary: open chain");
    cur = it->second;
  } while (cur != start && static_cast<int>(loop.size()) <= boundary_edges);
  if (static_cast<int>(loop.size()) != boundary_edges)
    throw InvalidPatchError("patch boundary: multiple loops (not a disk)");

  Polygon poly(loop);
  if (poly.area() < 0)
    throw InvalidPatchError("patch boundary: negative orientation (inverted faces?)");
  return poly;
}

// --- point location ----------------------------------------------------------

UvPatchParameterization::UvPatchParameterization(const UvPatchMesh& mesh)
    : mesh_(&mesh), boundary_(boundary_polygon(mesh)) {
  double lox = mesh.uv[0].x, hix = mesh.uv[0].x;
  double loy = mesh.uv[0].y, hiy = mesh.uv[0].y;
  for (const Vec2& p : mesh.uv) {
    lox = std::min(lox, p.x);
    hix = std::max(hix, p.x);
    loy = std::min(loy, p.y);
    hiy = std::max(hiy, p.y);
  }
  scale_ = std::hypot(hix - lox, hiy - loy);
  const int target = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(mesh.faces.size()))));
  gx_ = gy_ = target;
  x0_ = lox;
  y0_ = loy;
  cw_ = std::max((hix - lox) / gx_, 1e-300);
  ch_ = std::max((hiy - loy) / gy_, 1e-300);
  cells_.assign(static_cast<std::size_t>(gx_ * gy_), {});
  for (int fi = 0; fi < static_cast<int>(mesh.faces.size()); ++fi) {
    const Face& f = mesh.faces[static_cast<std::size_t>(fi)];
    double flx = mesh.uv[static_cast<std::size_t>(f[0])].x, fhx = flx;
    double fly = mesh.uv[static_cast<std::size_t>(f[0])].y, fhy = fly;
    for (int t = 1; t < 3; ++t) {
      const Vec2& p = mesh.uv[static_cast<std::size_t>(f[static_cast<std::size_t>(t)])];
      flx = std::min(flx, p.x);
      fhx = std::max(fhx, p.x);
      fly = std::min(fly, p.y);
      fhy = std::max(fhy, p.y);
    }
    const double pad = 1e-9 * scale_;
    const int cx0 = std::clamp(static_cast<int>((flx - pad - x0_) / cw_), 0, gx_ - 1);
    const int cx1 = std::clamp(static_cast<int>((fhx + pad - x0_) / cw_), 0, gx_ - 1);
    const int cy0 = std::clamp(static_cast<int>((fly - pad - y0_) / ch_), 0, gy_ - 1);
    const int cy1 = std::clamp(static_cast<int>((fhy + pad - y0_) / ch_), 0, gy_ - 1);
    for (int cy = cy0; cy <= cy1; ++cy)
      for (int cx = cx0; cx <= cx1; ++cx)
        cells_[static_cast<std::size_t>(cy * gx_ + cx)].push_back(fi);
  }
}

int UvPatchParameterization::locate(const Vec2& uv, std::array<double, 3>* bary) const {
  const int cx = std::clamp(static_cast<int>((uv.x - x0_) / cw_), 0, gx_ - 1);
  const int cy = std::clamp(static_cast<int>((uv.y - y0_) / ch_), 0, gy_ - 1);
  const double tol = 1e-9;  // barycentric units; ties go to the lower face index
  int best_face = -1;
  std::array<double, 3> best_bary{};
  for (int fi : cells_[static_cast<std::size_t>(cy * gx_ + cx)]) {
    const Face& f = mesh_->faces[static_cast<std::size_t>(fi)];
    const Vec2& p0 = mesh_->uv[static_cast<std::size_t>(f[0])];
    const Vec2& p1 = mesh_->uv[static_cast<std::size_t>(f[1])];
    const Vec2& p2 = mesh_->uv[static_cast<std::size_t>(f[2])];
    const double a2 = cross(p1 - p0, p2 - p0);
    const double b1 = cross(uv - p0, p2 - p0) / a2;
    const double b2 = cross(p1 - p0, uv - p0) / a2;
    const double b0 = 1.0 - b1 - b2;
    if (b0 >= -tol && b1 >= -tol && b2 >= -tol) {
      if (best_face < 0 || fi < best_face) {
        best_face = fi;
        best_bary = {b0, b1, b2};
      }
    }
  }
  if (best_face < 0) {
    const BoundaryProjection proj = boundary_.closest_boundary(uv);
    throw OutsideDomainError(uv, proj.point);
  }
  if (bary) *bary = best_bary;
  return best_face;
}

std::array<Vec2, 3> UvPatchParameterization::bary_gradients(int face) const {
  const Face& f = mesh_->faces[static_cast<std::size_t>(face)];
  const Vec2& p0 = mesh_->uv[static_cast<std::size_t>(f[0])];
  const Vec2& p1 = mesh_->uv[static_cast<std::size_t>(f[1])];
  const Vec2& p2 = mesh_->uv[static_cast<std::size_t>(f[2])];
  const double a2 = cross(p1 - p0, p2 - p0);
  auto perp = [](const Vec2& v) { return Vec2{-v.y, v.x}; };
  return {(1.0 / a2) * perp(p2 - p1), (1.0 / a2) * perp(p0 - p2),
          (1.0 / a2) * perp(p1 - p0)};
}

Vec3 UvPatchParameterization::lift(const Vec2& uv) const {
  std::array<double, 3> bary{};
  const int face = locate(uv, &bary);
  const Face& f = mesh_->faces[static_cast<std::size_t>(face)];
  Vec3 out{};
  for (int t = 0; t < 3; ++t)
    out = out + bary[static_cast<std::size_t>(t)] *
                    mesh_->positions[static_cast<std::size_t>(f[static_cast<std::size_t>(t)])];
  return out;
}

Mat32 UvPatchParameterization::lift_jacobian(const Vec2& uv) const {
  const int face = locate(uv, nullptr);
  const Face& f = mesh_->faces[static_cast<std::size_t>(face)];
  const std::array<Vec2, 3> grads = bary_gradients(face);
  Mat32 jac;
  for (int t = 0; t < 3; ++t) {
    const Vec3& p = mesh_->positions[static_cast<std::size_t>(f[static_cast<std::size_t>(t)])];
    jac.col0 = jac.col0 + grads[static_cast<std::size_t>(t)].x * p;
    jac.col1 = jac.col1 + grads[static_cast<std::size_t>(t)].y * p;
  }
  return jac;
}

std::optional<Vec2> UvPatchParameterization::forward(const Vec3& p) const {
  // 3D point location by best barycentric fit over all faces (test support;
  // not a hot path).
  double best_err = std::numeric_limits<double>::infinity();
  Vec2 best{};
  for (const Face& f : mesh_->faces) {
    const Vec3& q0 = mesh_->positions[static_cast<std::size_t>(f[0])];
    const Vec3& q1 = mesh_->positions[static_cast<std::size_t>(f[1])];
    const Vec3& q2 = mesh_->positions[static_cast<std::size_t>(f[2])];
    const Vec3 e1 = q1 - q0, e2 = q2 - q0, d = p - q0;
    const double a11 = dot(e1, e1), a12 = dot(e1, e2), a22 = dot(e2, e2);
    const double det = a11 * a22 - a12 * a12;
    if (det <= 0.0) continue;
    const double r1 = dot(d, e1), r2 = dot(d, e2);
    const double b1 = (a22 * r1 - a12 * r2) / det;
    const double b2 = (a11 * r2 - a12 * r1) / det;
    const double b0 = 1.0 - b1 - b2;
    const Vec3 proj = q0 + b1 * e1 + b2 * e2;
    const double off_plane = norm2(p - proj);
    const double outside = std::max({0.0, -b0, -b1, -b2});
    const double err = off_plane + outside * outside;
    if (err < best_err) {
      best_err = err;
      const Vec2& u0 = mesh_->uv[static_cast<std::size_t>(f[0])];
      const Vec2& u1 = mesh_->uv[static_cast<std::size_t>(f[1])];
      const Vec2& u2 = mesh_->uv[static_cast<std::size_t>(f[2])];
      best = u0 + b1 * (u1 - u0) + b2 * (u2 - u0);
    }
  }
  if (!std::isfinite(best_err)) return std::nullopt;
  return best;
}

// --- mesh-backed fields -------------------------------------------------------

UvMeshScalarField::UvMeshScalarField(const UvPatchParameterization& par) : par_(&par) {
  if (!par.mesh().has_area_field())
    throw ValidationError("patch has no target-area field");
}

double UvMeshScalarField::value(const Vec2& uv) const {
  std::array<double, 3> bary{};
  const int face = par_->locate(uv, &bary);
  const Face& f = par_->mesh().faces[static_cast<std::size_t>(face)];
  double out = 0.0;
  for (int t = 0; t < 3; ++t)
    out += bary[static_cast<std::size_t>(t)] *
           par_->mesh().target_area[static_cast<std::size_t>(f[static_cast<std::size_t>(t)])];
  return out;
}

Vec2 UvMeshScalarField::gradient(const Vec2& uv) const {
  const int face = par_->locate(uv, nullptr);
  const Face& f = par_->mesh().faces[static_cast<std::size_t>(face)];
  const std::array<Vec2, 3> grads = par_->bary_gradients(face);
  Vec2 out{};
  for (int t = 0; t < 3; ++t)
    out = out + par_->mesh().target_area[static_cast<std::size_t>(f[static_cast<std::size_t>(t)])] *
                    grads[static_cast<std::size_t>(t)];
  return out;
}

UvMeshDirectionField::UvMeshDirectionField(const UvPatchParameterization& par) : par_(&par) {
  if (!par.mesh().has_direction_field())
    throw ValidationError("patch has no direction field");
}

Vec3 UvMeshDirectionField::value(const Vec2& uv) const {
  std::array<double, 3> bary{};
  const int face = par_->locate(uv, &bary);
  const Face& f = par_->mesh().faces[static_cast<std::size_t>(face)];
  Vec3 y{};
  for (int t = 0; t < 3; ++t)
    y = y + bary[static_cast<std::size_t>(t)] *
                par_->mesh().direction[static_cast<std::size_t>(f[static_cast<std::size_t>(t)])];
  const double len = norm(y);
  if (len < 1e-12) throw NumericFailureError("direction-field normalize");
  return (1.0 / len) * y;
}

Mat32 UvMeshDirectionField::jacobian(const Vec2& uv) const {
  std::array<double, 3> bary{};
  const int face = par_->locate(uv, &bary);
  const Face& f = par_->mesh().faces[static_cast<std::size_t>(face)];
  const std::array<Vec2, 3> grads = par_->bary_gradients(face);
  Vec3 y{};
  Mat32 dy;  // d(interpolated, unnormalized)/d(uv)
  for (int t = 0; t < 3; ++t) {
    const Vec3& c = par_->mesh().direction[static_cast<std::size_t>(f[static_cast<std::size_t>(t)])];
    y = y + bary[static_cast<std::size_t>(t)] * c;
    dy.col0 = dy.col0 + grads[static_cast<std::size_t>(t)].x * c;
    dy.col1 = dy.col1 + grads[static_cast<std::size_t>(t)].y * c;
  }
  const double len = norm(y);
  if (len < 1e-12) throw NumericFailureError("direction-field normalize");
  const Vec3 unit = (1.0 / len) * y;
  // d(y/|y|) = (I - unit unit^T) dy / |y|
  auto project = [&](const Vec3& col) {
    return (1.0 / len) * (col - dot(unit, col) * unit);
  };
  return Mat32{project(dy.col0), project(dy.col1)};
}

double sample_field_scalar(const UvPatchParameterization& par, const Vec2& uv) {
  return UvMeshScalarField(par).value(uv);
}

Vec3 sample_field_direction(const UvPatchParameterization& par, const Vec2& uv) {
  return UvMeshDirectionField(par).value(uv);
}

}  // namespace dwdt
