#include "dwdt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "dwdt/error.hpp"

namespace dwdt {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double face_area3(const DiscreteMesh& mesh, const Face& f) {
  const Vec3& a = mesh.vertices[static_cast<std::size_t>(f[0])];
  const Vec3& b = mesh.vertices[static_cast<std::size_t>(f[1])];
  const Vec3& c = mesh.vertices[static_cast<std::size_t>(f[2])];
  return 0.5 * norm(cross(b - a, c - a));
}

struct Stats {
  double mean = 0.0;
  double std = 0.0;
};

Stats mean_std(const std::vector<double>& xs) {
  Stats s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  for (double x : xs) s.std += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(s.std / static_cast<double>(xs.size()));
  return s;
}

}  // namespace

std::string MetricsReport::to_key_values() const {
  std::ostringstream os;
  os.precision(17);
  os << "vertices = " << vertex_count << "\n";
  os << "faces = " << face_count << "\n";
  os << "angle_mean_deg = " << angle_mean_deg << "\n";
  os << "angle_std_deg = " << angle_std_deg << "\n";
  if (size_rmse) os << "size_rmse = " << *size_rmse << "\n";
  if (size_rmse_interior) os << "size_rmse_interior = " << *size_rmse_interior << "\n";
  if (alignment_rmse_deg) os << "alignment_rmse_deg = " << *alignment_rmse_deg << "\n";
  if (alignment_rmse_deg_interior)
    os << "alignment_rmse_deg_interior = " << *alignment_rmse_deg_interior << "\n";
  return os.str();
}

std::vector<double> per_vertex_sizes(const DiscreteMesh& mesh) {
  std::vector<double> sum(mesh.vertices.size(), 0.0);
  std::vector<int> count(mesh.vertices.size(), 0);
  for (const Face& f : mesh.faces) {
    const double a = face_area3(mesh, f);
    for (int v : f) {
      sum[static_cast<std::size_t>(v)] += a;
      count[static_cast<std::size_t>(v)] += 1;
    }
  }
  for (std::size_t v = 0; v < sum.size(); ++v)
    if (count[v] > 0) sum[v] /= count[v];
  return sum;
}

double size_rmse(const DiscreteMesh& mesh, const std::vector<double>& per_vertex_target,
                 const std::vector<std::uint8_t>* include_mask) {
  if (mesh.faces.empty()) throw EmptyTriangulationError("size_rmse: empty mesh");
  const std::vector<double> sizes = per_vertex_sizes(mesh);
  std::vector<double> achieved, target;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (!mesh.used.empty() && !mesh.used[v]) continue;
    if (include_mask && !(*include_mask)[v]) continue;
    achieved.push_back(sizes[v]);
    target.push_back(per_vertex_target[v]);
  }
  if (achieved.empty()) throw EmptyTriangulationError("size_rmse: no vertices selected");
  const Stats ts = mean_std(target);
  const double n = static_cast<double>(achieved.size());
  if (ts.std <= 1e-12 * std::max(1.0, std::abs(ts.mean))) {
    // Constant target: scale-free relative RMSE.
    if (ts.mean <= 0.0)
      throw UndefinedNormalizationError("size_rmse: constant non-positive target");
    double acc = 0.0;
    for (std::size_t i = 0; i < achieved.size(); ++i)
      acc += (achieved[i] - target[i]) * (achieved[i] - target[i]);
    return std::sqrt(acc / n) / ts.mean;
  }
  const Stats as = mean_std(achieved);
  if (as.std <= 1e-12 * std::max(1.0, std::abs(as.mean)))
    throw UndefinedNormalizationError("size_rmse: constant achieved size distribution");
  double acc = 0.0;
  for (std::size_t i = 0; i < achieved.size(); ++i) {
    const double za = (achieved[i] - as.mean) / as.std;
    const double zt = (target[i] - ts.mean) / ts.std;
    acc += (za - zt) * (za - zt);
  }
  return std::sqrt(acc / n);
}

namespace {

// Smallest angle (degrees) between `dir` and any edge leaving vertex j.
double best_edge_angle(const DiscreteMesh& mesh, const std::vector<std::vector<int>>& neighbors,
                       int j, const Vec3& dir) {
  double best = 180.0;
  const Vec3& vj = mesh.vertices[static_cast<std::size_t>(j)];
  for (int m : neighbors[static_cast<std::size_t>(j)]) {
    const Vec3 e = mesh.vertices[static_cast<std::size_t>(m)] - vj;
    const double c = std::clamp(dot(dir, e) / (norm(dir) * norm(e)), -1.0, 1.0);
    best = std::min(best, std::acos(c) * kRadToDeg);
  }
  return best;
}

std::vector<std::vector<int>> vertex_neighbors(const DiscreteMesh& mesh) {
  std::vector<std::vector<int>> out(mesh.vertices.size());
  for (const Face& f : mesh.faces)
    for (int t = 0; t < 3; ++t) {
      const int a = f[static_cast<std::size_t>(t)];
      const int b = f[static_cast<std::size_t>((t + 1) % 3)];
      out[static_cast<std::size_t>(a)].push_back(b);
      out[static_cast<std::size_t>(b)].push_back(a);
    }
  for (std::vector<int>& ns : out) {
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  }
  return out;
}

}  // namespace

double curvature_alignment_error(const DiscreteMesh& mesh, const std::vector<Vec3>& direction,
                                 const std::vector<double>& k1, const std::vector<double>& k2,
                                 const std::vector<std::uint8_t>* include_mask) {
  if (k1.size() != mesh.vertices.size() || k2.size() != mesh.vertices.size())
    throw ValidationError("curvature_alignment_error: principal magnitudes missing");
  const std::vector<std::vector<int>> neighbors = vertex_neighbors(mesh);
  double weight_sum = 0.0, acc = 0.0;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (!mesh.used.empty() && !mesh.used[v]) continue;
    if (include_mask && !(*include_mask)[v]) continue;
    if (neighbors[v].empty()) continue;
    const double denom = 0.5 * (std::abs(k1[v]) + std::abs(k2[v]));
    if (std::abs(k1[v]) + std::abs(k2[v]) < 1e-12) continue;  // umbilical/flat
    const double w = std::abs(k1[v] - k2[v]) / denom;
    if (w == 0.0) continue;
    const Vec3& dir = direction[v];
    const double err_pos = best_edge_angle(mesh, neighbors, static_cast<int>(v), dir);
    const double err_neg = best_edge_angle(mesh, neighbors, static_cast<int>(v), -1.0 * dir);
    const double err = 0.5 * (err_pos + err_neg);
    acc += w * err * err;
    weight_sum += w;
  }
  if (weight_sum == 0.0)
    throw UndefinedNormalizationError("curvature_alignment_error: all weights zero");
  return std::sqrt(acc / weight_sum);
}

double mean_alignment_error_deg(const DiscreteMesh& mesh, const std::vector<Vec3>& direction,
                                const std::vector<std::uint8_t>* include_mask) {
  const std::vector<std::vector<int>> neighbors = vertex_neighbors(mesh);
  double acc = 0.0;
  int count = 0;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (!mesh.used.empty() && !mesh.used[v]) continue;
    if (include_mask && !(*include_mask)[v]) continue;
    if (neighbors[v].empty()) continue;
    const double err_pos = best_edge_angle(mesh, neighbors, static_cast<int>(v), direction[v]);
    const double err_neg = best_edge_angle(mesh, neighbors, static_cast<int>(v), -1.0 * direction[v]);
    acc += 0.5 * (err_pos + err_neg);
    ++count;
  }
  if (count == 0) throw EmptyTriangulationError("mean_alignment_error: no vertices");
  return acc / count;
}

std::pair<double, double> angle_stats(const DiscreteMesh& mesh) {
  if (mesh.faces.empty()) throw EmptyTriangulationError("angle_stats: empty mesh");
  std::vector<double> angles;
  angles.reserve(mesh.faces.size() * 3);
  for (const Face& f : mesh.faces)
    for (int t = 0; t < 3; ++t) {
      const Vec3& vj = mesh.vertices[static_cast<std::size_t>(f[static_cast<std::size_t>(t)])];
      const Vec3 u = mesh.vertices[static_cast<std::size_t>(f[static_cast<std::size_t>((t + 1) % 3)])] - vj;
      const Vec3 w = mesh.vertices[static_cast<std::size_t>(f[static_cast<std::size_t>((t + 2) % 3)])] - vj;
      const double c = std::clamp(dot(u, w) / (norm(u) * norm(w)), -1.0, 1.0);
      angles.push_back(std::acos(c) * kRadToDeg);
    }
  const Stats s = mean_std(angles);
  return {s.mean, s.std};
}

double area_cov(const DiscreteMesh& mesh) {
  if (mesh.faces.empty()) throw EmptyTriangulationError("area_cov: empty mesh");
  std::vector<double> areas;
  areas.reserve(mesh.faces.size());
  for (const Face& f : mesh.faces) areas.push_back(face_area3(mesh, f));
  const Stats s = mean_std(areas);
  return s.std / s.mean;
}

std::vector<std::uint8_t> interior_vertex_mask(const DiscreteMesh& mesh) {
  std::map<std::pair<int, int>, int> edge_faces;
  for (const Face& f : mesh.faces)
    for (int t = 0; t < 3; ++t) {
      int a = f[static_cast<std::size_t>(t)], b = f[static_cast<std::size_t>((t + 1) % 3)];
      if (a > b) std::swap(a, b);
      edge_faces[{a, b}] += 1;
    }
  std::vector<std::uint8_t> boundary(mesh.vertices.size(), 0);
  for (const auto& [edge, count] : edge_faces)
    if (count == 1) {
      boundary[static_cast<std::size_t>(edge.first)] = 1;
      boundary[static_cast<std::size_t>(edge.second)] = 1;
    }
  const std::vector<std::vector<int>> neighbors = vertex_neighbors(mesh);
  std::vector<std::uint8_t> mask(mesh.vertices.size(), 1);
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (boundary[v]) {
      mask[v] = 0;
      continue;
    }
    for (int m : neighbors[v])
      if (boundary[static_cast<std::size_t>(m)]) mask[v] = 0;
  }
  return mask;
}

}  // namespace dwdt
