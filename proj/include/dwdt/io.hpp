#pragma once

// Deterministic readers/writers: OBJ patches (v/vt/f), plain-text field
// tables, key=value configs, SVG renderings. All floats serialize with 17
// significant digits so round-trips are lossless.

#include <iosfwd>
#include <string>
#include <vector>

#include "dwdt/mesh.hpp"
#include "dwdt/parameterization.hpp"
#include "dwdt/soft_delaunay.hpp"

namespace dwdt {

struct RunConfig {
  std::string task = "size";  // size | align | blend | custom
  double weight_size = 0.5;
  double weight_boundary = 500.0;
  double weight_angle = 1e7;
  double weight_curvature = 0.0;
  double alpha = 1000.0;
  int k = 80;
  double epsilon = 0.01;
  double learning_rate = 1e-4;
  int iterations = 1500;
  unsigned seed = 1;
  int snapshot_every = 0;  // 0 = none
  double blend_t = 0.5;
  int n_vertices = 200;  // synthetic tasks
  int threads = 1;
  std::string input;
  std::string fields;
  std::string output_dir = ".";

  void validate() const;
  // Published task presets: size (0.5, 500, 1e7), align (1, 500),
  // blend (t L_a + (1-t) L_s), plus iteration defaults (1500 / 1000).
  void apply_task_defaults();
};

RunConfig read_config(const std::string& path);
void write_config(const RunConfig& cfg, std::ostream& os);
// Returns false for unknown keys.
bool apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

// --- meshes -------------------------------------------------------------------

// Parses v/vt/f with per-vertex vt (each vertex must pair with one vt);
// line-numbered diagnostics on malformed input.
UvPatchMesh read_obj_patch(const std::string& path);

// Deterministic OBJ: v (+ optional vt) + f records, 17 significant digits.
void write_obj(const DiscreteMesh& mesh, const std::string& path,
               const std::vector<Vec2>* uv = nullptr);
DiscreteMesh read_obj_mesh(const std::string& path);  // v/f (vt optional)

// --- fields -------------------------------------------------------------------

struct FieldTable {
  std::vector<double> area;
  std::vector<Vec3> direction;
  std::vector<double> k1, k2;
  int renormalized = 0;  // directions off unit length beyond 1e-3

  bool has_area() const { return !area.empty(); }
  bool has_direction() const { return !direction.empty(); }
  bool has_magnitudes() const { return !k1.empty(); }
};

// Header line declares the columns: "index" plus any of A Cx Cy Cz k1 k2.
// Row count must match; C is renormalized (zero vectors are an error).
FieldTable read_fields(const std::string& path, int expected_rows);
void write_fields(const FieldTable& table, const std::string& path);

// --- rendering ------------------------------------------------------------------

// Soft triangulation: faces with s_i > cutoff drawn, edges colored by the
// largest score of their adjacent faces, vertex markers sized by weight.
void write_svg_soft(const WeightedPointSet& ps, const SoftTriangulation& soft,
                    const std::string& path, double draw_cutoff = 0.001);
void write_svg_mesh(const DiscreteMesh& mesh, const std::string& path);

// --- misc ----------------------------------------------------------------------

WeightedPointSet read_points(const std::string& path);  // rows: x y [w]
void write_points(const WeightedPointSet& ps, const std::string& path);
void write_text(const std::string& path, const std::string& content);
std::string format_double(double v);  // %.17g

}  // namespace dwdt
