#pragma once

// Pluggable parameterizations m: 3D surface patch <-> 2D domain.
//
// The gradient engine only needs lift values and per-piece Jacobians: lifts
// are spliced into the tape as first-order primitives, so the chain rule
// through the parameterization is exactly J^T times the 3D gradient.

#include <memory>
#include <optional>
#include <vector>

#include "dwdt/autodiff.hpp"
#include "dwdt/error.hpp"
#include "dwdt/mesh.hpp"
#include "dwdt/polygon.hpp"
#include "dwdt/vec.hpp"

namespace dwdt {

class Parameterization {
 public:
  virtual ~Parameterization() = default;

  virtual Vec3 lift(const Vec2& uv) const = 0;
  virtual Mat32 lift_jacobian(const Vec2& uv) const = 0;
  // CCW boundary of the 2D parameter domain.
  virtual const Polygon& domain_boundary() const = 0;
  // Forward map m (3D -> 2D) where available.
  virtual std::optional<Vec2> forward(const Vec3& p) const { return std::nullopt; }

  // Tape-side lift at the frozen piece containing `at`.
  Vec3T<ad::Var> lift_var(ad::Tape& tape, const Vec2& at, const ad::Var& u,
                          const ad::Var& v) const;
};

// Identity embedding of a planar region: lift (x, y) -> (x, y, 0).
class PlanarDomain final : public Parameterization {
 public:
  explicit PlanarDomain(Polygon boundary) : boundary_(std::move(boundary)) {}
  Vec3 lift(const Vec2& uv) const override { return {uv.x, uv.y, 0.0}; }
  Mat32 lift_jacobian(const Vec2&) const override {
    return Mat32{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
  }
  const Polygon& domain_boundary() const override { return boundary_; }
  std::optional<Vec2> forward(const Vec3& p) const override { return Vec2{p.x, p.y}; }

 private:
  Polygon boundary_;
};

// Catenoid (cosh v cos u, cosh v sin u, v), u in [0, 2pi], v in [-1, 1],
// treated as a rectangular patch (the u seam is not glued).
class CatenoidSurface final : public Parameterization {
 public:
  CatenoidSurface();
  Vec3 lift(const Vec2& uv) const override;
  Mat32 lift_jacobian(const Vec2& uv) const override;
  const Polygon& domain_boundary() const override { return boundary_; }
  std::optional<Vec2> forward(const Vec3& p) const override;

  // Signed principal curvatures are +-sech^2(v); the minimum-curvature
  // direction is the u parameter line.
  static double principal_curvature_magnitude(double v);

 private:
  Polygon boundary_;
};

// A pre-parameterized patch: 3D triangle mesh with one UV per vertex and
// optional per-vertex fields (target area A; unit curvature directions C
// with signed magnitudes k1, k2).
struct UvPatchMesh {
  std::vector<Vec3> positions;
  std::vector<Vec2> uv;
  std::vector<Face> faces;
  std::vector<double> target_area;  // empty when absent
  std::vector<Vec3> direction;      // unit vectors; empty when absent
  std::vector<double> k1, k2;       // empty when absent

  int vertex_count() const { return static_cast<int>(positions.size()); }
  bool has_area_field() const { return !target_area.empty(); }
  bool has_direction_field() const { return !direction.empty(); }

  // Rejects degenerate/inverted UV faces and non-manifold connectivity.
  void validate() const;

  // Uniform rescale of the UV coordinates so the bounding box fits the unit
  // square (paper-scale hyperparameters assume a normalized domain).
  // Returns the applied scale factor.
  double normalize_uv();
};

// Ordered CCW boundary loop of the UV domain. Throws InvalidPatchError for
// non-manifold boundaries or multiple loops.
Polygon boundary_polygon(const UvPatchMesh& mesh);

// Point location + barycentric interpolation over the UV layout.
class UvPatchParameterization final : public Parameterization {
 public:
  explicit UvPatchParameterization(const UvPatchMesh& mesh);

  Vec3 lift(const Vec2& uv) const override;
  Mat32 lift_jacobian(const Vec2& uv) const override;
  const Polygon& domain_boundary() const override { return boundary_; }
  std::optional<Vec2> forward(const Vec3& p) const override;

  // Containing face (ties within tolerance to the lower-index face) and its
  // barycentric coordinates; throws OutsideDomainError beyond tolerance.
  int locate(const Vec2& uv, std::array<double, 3>* bary) const;

  const UvPatchMesh& mesh() const { return *mesh_; }
  // Barycentric gradient of each corner's hat function on a face.
  std::array<Vec2, 3> bary_gradients(int face) const;

 private:
  const UvPatchMesh* mesh_;
  Polygon boundary_;
  double scale_ = 1.0;
  // uniform grid over the UV bounding box
  int gx_ = 1, gy_ = 1;
  double x0_ = 0, y0_ = 0, cw_ = 1, ch_ = 1;
  std::vector<std::vector<int>> cells_;
};

// Scalar field over the 2D domain, differentiable within each piece.
class ScalarField2 {
 public:
  virtual ~ScalarField2() = default;
  virtual double value(const Vec2& uv) const = 0;
  virtual Vec2 gradient(const Vec2& uv) const = 0;
  ad::Var value_var(ad::Tape& tape, const Vec2& at, const ad::Var& u,
                    const ad::Var& v) const;
};

class ConstantField final : public ScalarField2 {
 public:
  explicit ConstantField(double c) : c_(c) {}
  double value(const Vec2&) const override { return c_; }
  Vec2 gradient(const Vec2&) const override { return {0.0, 0.0}; }

 private:
  double c_;
};

// Unit 3D direction field over the 2D domain.
class DirectionField2 {
 public:
  virtual ~DirectionField2() = default;
  virtual Vec3 value(const Vec2& uv) const = 0;
  virtual Mat32 jacobian(const Vec2& uv) const = 0;
  Vec3T<ad::Var> value_var(ad::Tape& tape, const Vec2& at, const ad::Var& u,
                           const ad::Var& v) const;
};

class ConstantDirectionField final : public DirectionField2 {
 public:
  explicit ConstantDirectionField(const Vec3& c);
  Vec3 value(const Vec2&) const override { return c_; }
  Mat32 jacobian(const Vec2&) const override { return Mat32{}; }

 private:
  Vec3 c_;
};

// Barycentric interpolation of the patch's per-vertex A field.
class UvMeshScalarField final : public ScalarField2 {
 public:
  explicit UvMeshScalarField(const UvPatchParameterization& par);
  double value(const Vec2& uv) const override;
  Vec2 gradient(const Vec2& uv) const override;

 private:
  const UvPatchParameterization* par_;
};

// Barycentric interpolation of the patch's per-vertex C field, renormalized
// to unit length after interpolation.
class UvMeshDirectionField final : public DirectionField2 {
 public:
  explicit UvMeshDirectionField(const UvPatchParameterization& par);
  Vec3 value(const Vec2& uv) const override;
  Mat32 jacobian(const Vec2& uv) const override;

 private:
  const UvPatchParameterization* par_;
};

// Convenience per-point field sampling (A or C with renormalization).
double sample_field_scalar(const UvPatchParameterization& par, const Vec2& uv);
Vec3 sample_field_direction(const UvPatchParameterization& par, const Vec2& uv);

}  // namespace dwdt
