#pragma once

// Evaluation measures computed on discrete output meshes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dwdt/mesh.hpp"

namespace dwdt {

struct MetricsReport {
  int vertex_count = 0;  // used vertices
  int face_count = 0;
  double angle_mean_deg = 0.0;
  double angle_std_deg = 0.0;
  std::optional<double> size_rmse;
  std::optional<double> size_rmse_interior;
  std::optional<double> alignment_rmse_deg;
  std::optional<double> alignment_rmse_deg_interior;

  std::string to_key_values() const;
};

// Per-vertex achieved size: average area of adjacent triangles (3D areas).
// Unused vertices are skipped.
std::vector<double> per_vertex_sizes(const DiscreteMesh& mesh);

// RMSE between achieved and target per-vertex sizes after z-scoring both
// distributions (the scale-free comparison). A degenerate (constant) target
// falls back to RMSE(size - target)/mean(target); a degenerate achieved
// distribution in z-score mode raises UndefinedNormalizationError.
// include_mask (per vertex) restricts the statistic when given.
double size_rmse(const DiscreteMesh& mesh, const std::vector<double>& per_vertex_target,
                 const std::vector<std::uint8_t>* include_mask = nullptr);

// Weighted RMSE (degrees) of the angular error between the best-aligned
// incident edge and the +/- direction at each vertex, weighted by
// |k1-k2| / (0.5 (|k1|+|k2|)); near-umbilical vertices (|k1|+|k2| < 1e-12)
// are skipped.
double curvature_alignment_error(const DiscreteMesh& mesh, const std::vector<Vec3>& direction,
                                 const std::vector<double>& k1, const std::vector<double>& k2,
                                 const std::vector<std::uint8_t>* include_mask = nullptr);

// Mean best-edge angular error in degrees, unweighted (optimization-progress
// diagnostic for synthetic fields).
double mean_alignment_error_deg(const DiscreteMesh& mesh, const std::vector<Vec3>& direction,
                                const std::vector<std::uint8_t>* include_mask = nullptr);

// Mean and standard deviation of all corner angles, in degrees. The mean is
// 60 for any triangulation.
std::pair<double, double> angle_stats(const DiscreteMesh& mesh);

// Coefficient of variation (std/mean) of face areas.
double area_cov(const DiscreteMesh& mesh);

// Vertices farther than one edge from the mesh boundary (1 = interior).
std::vector<std::uint8_t> interior_vertex_mask(const DiscreteMesh& mesh);

}  // namespace dwdt
