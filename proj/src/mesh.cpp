#include "dwdt/mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>

namespace dwdt {

DiscreteMesh DiscreteMesh::from_2d(const std::vector<Vec2>& pts) {
  DiscreteMesh m;
  m.vertices.reserve(pts.size());
  for (const Vec2& p : pts) m.vertices.push_back({p.x, p.y, 0.0});
  m.used.assign(pts.size(), 0);
  return m;
}

void DiscreteMesh::recompute_used() {
  used.assign(vertices.size(), 0);
  for (const Face& f : faces)
    for (int v : f) used[static_cast<std::size_t>(v)] = 1;
}

std::string ManifoldReport::summary() const {
  if (ok()) return "manifold";
  std::ostringstream os;
  os << "non-manifold:";
  if (!overused_edges.empty()) os << " " << overused_edges.size() << " overused edge(s)";
  if (!orientation_conflicts.empty())
    os << " " << orientation_conflicts.size() << " orientation conflict(s)";
  if (!nonmanifold_vertices.empty())
    os << " " << nonmanifold_vertices.size() << " non-manifold vertex(es)";
  if (!isolated_used_vertices.empty())
    os << " " << isolated_used_vertices.size() << " isolated used vertex(es)";
  return os.str();
}

namespace {

inline std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

ManifoldReport manifold_check(const DiscreteMesh& mesh) {
  ManifoldReport report;

  struct EdgeUse {
    int count = 0;
    int forward = 0;  // times seen as (min,max)
  };
  std::map<std::uint64_t, EdgeUse> edges;
  for (const Face& f : mesh.faces) {
    for (int e = 0; e < 3; ++e) {
      const int a = f[static_cast<std::size_t>(e)];
      const int b = f[static_cast<std::size_t>((e + 1) % 3)];
      EdgeUse& u = edges[edge_key(a, b)];
      u.count += 1;
      if (a < b) u.forward += 1;
    }
  }
  for (const auto& [key, use] : edges) {
    const int a = static_cast<int>(key >> 32);
    const int b = static_cast<int>(key & 0xffffffffu);
    if (use.count > 2) report.overused_edges.push_back({a, b});
    // Two faces must traverse a shared edge in opposite directions.
    if (use.count == 2 && use.forward != 1)
      report.orientation_conflicts.push_back({a, b});
  }

  // Vertex stars: faces incident to a vertex must form one edge-connected
  // component (a bowtie has two).
  std::vector<std::vector<int>> star(mesh.vertices.size());
  for (int fi = 0; fi < static_cast<int>(mesh.faces.size()); ++fi)
    for (int v : mesh.faces[static_cast<std::size_t>(fi)])
      star[static_cast<std::size_t>(v)].push_back(fi);

  std::vector<int> comp;
  for (int v = 0; v < static_cast<int>(mesh.vertices.size()); ++v) {
    const std::vector<int>& faces_v = star[static_cast<std::size_t>(v)];
    if (faces_v.empty()) {
      if (!mesh.used.empty() && mesh.used[static_cast<std::size_t>(v)])
        report.isolated_used_vertices.push_back(v);
      continue;
    }
    // Union faces sharing an edge through v.
    comp.assign(faces_v.size(), -1);
    std::map<std::uint64_t, int> spoke;  // edge (v,other) -> local face idx
    auto find = [&](int x) {
      while (comp[static_cast<std::size_t>(x)] >= 0) x = comp[static_cast<std::size_t>(x)];
      return x;
    };
    auto unite = [&](int a, int b) {
      a = find(a);
      b = find(b);
      if (a != b) comp[static_cast<std::size_t>(a)] = b;
    };
    for (std::size_t li = 0; li < faces_v.size(); ++li) {
      const Face& f = mesh.faces[static_cast<std::size_t>(faces_v[li])];
      for (int corner = 0; corner < 3; ++corner) {
        if (f[static_cast<std::size_t>(corner)] != v) continue;
        const int other[2] = {f[static_cast<std::size_t>((corner + 1) % 3)],
                              f[static_cast<std::size_t>((corner + 2) % 3)]};
        for (int o : other) {
          auto [it, inserted] = spoke.try_emplace(edge_key(v, o), static_cast<int>(li));
          if (!inserted) unite(static_cast<int>(li), it->second);
        }
      }
    }
    int roots = 0;
    for (std::size_t li = 0; li < faces_v.size(); ++li)
      if (comp[li] < 0) ++roots;
    if (roots > 1) report.nonmanifold_vertices.push_back(v);
  }

  return report;
}

std::vector<Face> sorted_face_set(const DiscreteMesh& mesh) {
  std::vector<Face> out;
  out.reserve(mesh.faces.size());
  for (Face f : mesh.faces) {
    std::sort(f.begin(), f.end());
    out.push_back(f);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dwdt
