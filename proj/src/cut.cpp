#include "dwdt/cut.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "dwdt/error.hpp"

namespace dwdt {

namespace {

inline double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  return cross(b - a, c - a);
}

// > 0 iff d lies strictly inside the circumcircle of CCW triangle (a,b,c).
double in_circle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double ax = a.x - d.x, ay = a.y - d.y;
  const double bx = b.x - d.x, by = b.y - d.y;
  const double cx = c.x - d.x, cy = c.y - d.y;
  const double a2 = ax * ax + ay * ay;
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
}

class CutWorkspace {
 public:
  CutWorkspace(const DiscreteMesh& mesh, const Polygon& boundary)
      : poly_(boundary) {
    if (poly_.size() < 3 || poly_.area() <= 0.0)
      throw ValidationError("cut_to_boundary: boundary polygon must be simple and CCW");
    pts_.reserve(mesh.vertices.size() + static_cast<std::size_t>(poly_.size()));
    for (const Vec3& v : mesh.vertices) pts_.push_back({v.x, v.y});
    for (const Face& f : mesh.faces) faces_.push_back(f);
    input_vertex_count_ = static_cast<int>(pts_.size());
    scale_ = 0.0;
    for (const Vec2& p : pts_) scale_ = std::max(scale_, std::abs(p.x) + std::abs(p.y));
    for (int i = 0; i < poly_.size(); ++i)
      scale_ = std::max(scale_, std::abs(poly_.point(i).x) + std::abs(poly_.point(i).y));
    match_tol_ = 1e-9 * std::max(scale_, 1e-12);
  }

  DiscreteMesh run(const DiscreteMesh& input) {
    validate_inside(input);
    map_polygon_vertices();
    if (conforms(input)) return input;

    if (faces_.empty()) bootstrap_from_polygon();
    for (int i = 0; i < poly_.size(); ++i)
      if (!vertex_exists(poly_vertex_[static_cast<std::size_t>(i)]))
        insert_point(poly_vertex_[static_cast<std::size_t>(i)]);
    fill_holes();
    for (int i = 0; i < poly_.size(); ++i)
      insert_segment(poly_vertex_[static_cast<std::size_t>(i)],
                     poly_vertex_[static_cast<std::size_t>((i + 1) % poly_.size())]);
    drop_outside_faces();
    return finish();
  }

 private:
  // --- setup -----------------------------------------------------------------

  void validate_inside(const DiscreteMesh& input) {
    std::vector<int> offenders;
    for (int v = 0; v < input_vertex_count_; ++v) {
      const bool used = input.used.empty() || input.used[static_cast<std::size_t>(v)];
      if (!used) continue;
      if (poly_.contains(pts_[static_cast<std::size_t>(v)])) continue;
      if (poly_.signed_inside_distance(pts_[static_cast<std::size_t>(v)]) >= -match_tol_) continue;
      offenders.push_back(v);
    }
    if (!offenders.empty()) {
      std::ostringstream os;
      os << "cut_to_boundary: " << offenders.size() << " vertex(es) outside the boundary:";
      for (std::size_t i = 0; i < offenders.size() && i < 16; ++i) os << " " << offenders[i];
      throw ValidationError(os.str());
    }
  }

  void map_polygon_vertices() {
    poly_vertex_.resize(static_cast<std::size_t>(poly_.size()));
    for (int i = 0; i < poly_.size(); ++i) {
      const Vec2 p = poly_.point(i);
      int found = -1;
      for (int v = 0; v < static_cast<int>(pts_.size()); ++v) {
        const Vec2 d = pts_[static_cast<std::size_t>(v)] - p;
        if (std::abs(d.x) <= match_tol_ && std::abs(d.y) <= match_tol_) {
          found = v;
          break;
        }
      }
      if (found < 0) {
        pts_.push_back(p);
        found = static_cast<int>(pts_.size()) - 1;
        appended_.insert(found);
      }
      poly_vertex_[static_cast<std::size_t>(i)] = found;
    }
  }

  bool conforms(const DiscreteMesh& input) const {
    for (int i = 0; i < poly_.size(); ++i)
      if (appended_.count(poly_vertex_[static_cast<std::size_t>(i)])) return false;
    std::set<std::pair<int, int>> edges;
    for (const Face& f : faces_)
      for (int e = 0; e < 3; ++e) {
        int a = f[static_cast<std::size_t>(e)], b = f[static_cast<std::size_t>((e + 1) % 3)];
        if (a > b) std::swap(a, b);
        edges.insert({a, b});
      }
    for (int i = 0; i < poly_.size(); ++i) {
      int a = poly_vertex_[static_cast<std::size_t>(i)];
      int b = poly_vertex_[static_cast<std::size_t>((i + 1) % poly_.size())];
      if (a > b) std::swap(a, b);
      if (!edges.count({a, b})) return false;
    }
    double covered = 0.0;
    for (const Face& f : faces_) {
      const Vec2 c = centroid(f);
      if (!poly_.contains(c)) return false;
      covered += 0.5 * orient(pts_[static_cast<std::size_t>(f[0])], pts_[static_cast<std::size_t>(f[1])],
                              pts_[static_cast<std::size_t>(f[2])]);
    }
    (void)input;
    return std::abs(covered - poly_.area()) <= 1e-9 * poly_.area();
  }

  // --- shared helpers ---------------------------------------------------------

  Vec2 centroid(const Face& f) const {
    const Vec2& a = pts_[static_cast<std::size_t>(f[0])];
    const Vec2& b = pts_[static_cast<std::size_t>(f[1])];
    const Vec2& c = pts_[static_cast<std::size_t>(f[2])];
    return {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
  }

  bool vertex_exists(int v) const {
    for (const Face& f : faces_)
      if (f[0] == v || f[1] == v || f[2] == v) return true;
    return false;
  }

  void add_face(int a, int b, int c) {
    if (orient(pts_[static_cast<std::size_t>(a)], pts_[static_cast<std::size_t>(b)],
               pts_[static_cast<std::size_t>(c)]) <= 0.0)
      throw Error("cut_to_boundary: internal error, non-CCW face produced");
    faces_.push_back({a, b, c});
  }

  // directed edge (a,b) -> face index whose boundary traverses a->b
  std::map<std::pair<int, int>, int> directed_edge_map() const {
    std::map<std::pair<int, int>, int> m;
    for (int fi = 0; fi < static_cast<int>(faces_.size()); ++fi)
      for (int e = 0; e < 3; ++e)
        m[{faces_[static_cast<std::size_t>(fi)][static_cast<std::size_t>(e)],
           faces_[static_cast<std::size_t>(fi)][static_cast<std::size_t>((e + 1) % 3)]}] = fi;
    return m;
  }

  bool edge_exists(int a, int b) const {
    for (const Face& f : faces_)
      for (int e = 0; e < 3; ++e) {
        const int u = f[static_cast<std::size_t>(e)], v = f[static_cast<std::size_t>((e + 1) % 3)];
        if ((u == a && v == b) || (u == b && v == a)) return true;
      }
    return false;
  }

  // Boundary loops of the current complex, traversed with interior on the
  // left. The outer loop is CCW; holes are CW.
  std::vector<std::vector<int>> boundary_loops() const {
    std::map<std::pair<int, int>, int> count;
    for (const Face& f : faces_)
      for (int e = 0; e < 3; ++e) {
        int a = f[static_cast<std::size_t>(e)], b = f[static_cast<std::size_t>((e + 1) % 3)];
        if (a > b) std::swap(a, b);
        count[{a, b}] += 1;
      }
    std::map<int, int> next;
    for (const Face& f : faces_)
      for (int e = 0; e < 3; ++e) {
        const int a = f[static_cast<std::size_t>(e)], b = f[static_cast<std::size_t>((e + 1) % 3)];
        if (count[{std::min(a, b), std::max(a, b)}] == 1) {
          if (next.count(a)) throw Error("cut_to_boundary: pinched boundary");
          next[a] = b;
        }
      }
    std::vector<std::vector<int>> loops;
    std::set<int> seen;
    for (const auto& [start, _] : next) {
      if (seen.count(start)) continue;
      std::vector<int> loop;
      int cur = start;
      do {
        loop.push_back(cur);
        seen.insert(cur);
        cur = next.at(cur);
      } while (cur != start);
      loops.push_back(std::move(loop));
    }
    return loops;
  }

  double loop_area(const std::vector<int>& loop) const {
    double a = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i)
      a += cross(pts_[static_cast<std::size_t>(loop[i])],
                 pts_[static_cast<std::size_t>(loop[(i + 1) % loop.size()])]);
    return 0.5 * a;
  }

  // --- point insertion ----------------------------------------------------------

  void bootstrap_from_polygon() {
    const int a = poly_vertex_[0];
    const int b = poly_vertex_[1];
    int c = -1;
    for (int i = 2; i < poly_.size(); ++i) {
      const int v = poly_vertex_[static_cast<std::size_t>(i)];
      if (std::abs(orient(pts_[static_cast<std::size_t>(a)], pts_[static_cast<std::size_t>(b)],
                          pts_[static_cast<std::size_t>(v)])) > 0.0) {
        c = v;
        break;
      }
    }
    if (c < 0) throw ValidationError("cut_to_boundary: boundary polygon is degenerate");
    if (orient(pts_[static_cast<std::size_t>(a)], pts_[static_cast<std::size_t>(b)],
               pts_[static_cast<std::size_t>(c)]) > 0.0)
      add_face(a, b, c);
    else
      add_face(a, c, b);
  }

  void insert_point(int p) {
    const Vec2 q = pts_[static_cast<std::size_t>(p)];
    const double eps = 1e-9;
    // interior / on-edge location
    for (int fi = 0; fi < static_cast<int>(faces_.size()); ++fi) {
      const Face f = faces_[static_cast<std::size_t>(fi)];
      const Vec2& p0 = pts_[static_cast<std::size_t>(f[0])];
      const Vec2& p1 = pts_[static_cast<std::size_t>(f[1])];
      const Vec2& p2 = pts_[static_cast<std::size_t>(f[2])];
      const double a2 = orient(p0, p1, p2);
      const double b0 = orient(p1, p2, q) / a2;
      const double b1 = orient(p2, p0, q) / a2;
      const double b2 = orient(p0, p1, q) / a2;
      if (b0 < -eps || b1 < -eps || b2 < -eps) continue;
      const int near_zero = (b0 <= eps) + (b1 <= eps) + (b2 <= eps);
      if (near_zero >= 2) throw Error("cut_to_boundary: duplicate vertex insertion");
      if (near_zero == 1) {
        const int e = b0 <= eps ? 1 : (b1 <= eps ? 2 : 0);  // edge opposite the zero
        split_edge(f[static_cast<std::size_t>(e)], f[static_cast<std::size_t>((e + 1) % 3)], p);
      } else {
        faces_.erase(faces_.begin() + fi);
        add_face(f[0], f[1], p);
        add_face(f[1], f[2], p);
        add_face(f[2], f[0], p);
      }
      return;
    }
    hull_insert(p);
  }

  void split_edge(int u, int v, int p) {
    std::vector<Face> incident;
    for (int fi = static_cast<int>(faces_.size()) - 1; fi >= 0; --fi) {
      const Face& f = faces_[static_cast<std::size_t>(fi)];
      bool has_u = false, has_v = false;
      for (int t : f) {
        has_u |= t == u;
        has_v |= t == v;
      }
      if (has_u && has_v) {
        incident.push_back(f);
        faces_.erase(faces_.begin() + fi);
      }
    }
    for (const Face& f : incident) {
      int w = -1;
      for (int t : f)
        if (t != u && t != v) w = t;
      // preserve orientation of the original face
      int a = u, b = v;
      for (int e = 0; e < 3; ++e)
        if (f[static_cast<std::size_t>(e)] == v && f[static_cast<std::size_t>((e + 1) % 3)] == u)
          std::swap(a, b);
      add_face(a, p, w);
      add_face(p, b, w);
    }
  }

  void hull_insert(int p) {
    const std::vector<std::vector<int>> loops = boundary_loops();
    const std::vector<int>* outer = nullptr;
    double best = -std::numeric_limits<double>::infinity();
    for (const std::vector<int>& loop : loops) {
      const double a = loop_area(loop);
      if (a > best) {
        best = a;
        outer = &loop;
      }
    }
    if (!outer) throw Error("cut_to_boundary: no boundary loop");
    const Vec2 q = pts_[static_cast<std::size_t>(p)];
    bool any = false;
    for (std::size_t i = 0; i < outer->size(); ++i) {
      const int a = (*outer)[i];
      const int b = (*outer)[(i + 1) % outer->size()];
      if (orient(pts_[static_cast<std::size_t>(a)], pts_[static_cast<std::size_t>(b)], q) < 0.0) {
        add_face(b, a, p);
        any = true;
      }
    }
    if (!any) throw Error("cut_to_boundary: hull insertion found no visible edge");
  }

  // --- hole filling ---------------------------------------------------------------

  void fill_holes() {
    for (const std::vector<int>& loop : boundary_loops()) {
      if (loop_area(loop) >= 0.0) continue;  // outer loop
      std::vector<int> ring(loop.rbegin(), loop.rend());  // CCW hole region
      Polygon hole([&] {
        std::vector<Vec2> ps;
        for (int v : ring) ps.push_back(pts_[static_cast<std::size_t>(v)]);
        return ps;
      }());
      for (int v = 0; v < static_cast<int>(pts_.size()); ++v) {
        if (std::find(ring.begin(), ring.end(), v) != ring.end()) continue;
        if (vertex_exists(v) && hole.contains(pts_[static_cast<std::size_t>(v)]))
          throw Error("cut_to_boundary: unsupported nested component inside a hole");
      }
      ear_clip(ring);
    }
  }

  void ear_clip(std::vector<int> ring) {
    const double eps_area = 0.0;
    while (ring.size() > 3) {
      bool clipped = false;
      for (std::size_t i = 0; i < ring.size(); ++i) {
        const int prev = ring[(i + ring.size() - 1) % ring.size()];
        const int cur = ring[i];
        const int next = ring[(i + 1) % ring.size()];
        const Vec2& a = pts_[static_cast<std::size_t>(prev)];
        const Vec2& b = pts_[static_cast<std::size_t>(cur)];
        const Vec2& c = pts_[static_cast<std::size_t>(next)];
        if (orient(a, b, c) <= eps_area) continue;
        bool blocked = false;
        for (int v : ring) {
          if (v == prev || v == cur || v == next) continue;
          const Vec2& q = pts_[static_cast<std::size_t>(v)];
          if (orient(a, b, q) >= 0.0 && orient(b, c, q) >= 0.0 && orient(c, a, q) >= 0.0) {
            blocked = true;
            break;
          }
        }
        if (blocked) continue;
        add_face(prev, cur, next);
        ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
        clipped = true;
        break;
      }
      if (!clipped) throw Error("cut_to_boundary: ear clipping failed");
    }
    if (ring.size() == 3 &&
        orient(pts_[static_cast<std::size_t>(ring[0])], pts_[static_cast<std::size_t>(ring[1])],
               pts_[static_cast<std::size_t>(ring[2])]) > 0.0)
      add_face(ring[0], ring[1], ring[2]);
  }

  // --- segment insertion ------------------------------------------------------------

  std::vector<int> vertex_neighbors(int a) const {
    std::set<int> out;
    for (const Face& f : faces_)
      for (int e = 0; e < 3; ++e) {
        if (f[static_cast<std::size_t>(e)] != a) continue;
        out.insert(f[static_cast<std::size_t>((e + 1) % 3)]);
        out.insert(f[static_cast<std::size_t>((e + 2) % 3)]);
      }
    return {out.begin(), out.end()};
  }

  void insert_segment(int a, int b) {
    if (a == b || edge_exists(a, b)) return;
    const Vec2 pa = pts_[static_cast<std::size_t>(a)];
    const Vec2 pb = pts_[static_cast<std::size_t>(b)];

    // A collinear vertex strictly between a and b splits the insertion.
    for (int m : vertex_neighbors(a)) {
      const Vec2 pm = pts_[static_cast<std::size_t>(m)];
      if (orient(pa, pb, pm) != 0.0) continue;
      const double t = dot(pm - pa, pb - pa);
      if (t > 0.0 && t < norm2(pb - pa)) {
        insert_segment(m, b);
        return;
      }
    }

    // Face at a whose angular sector strictly contains direction a->b.
    int start = -1, right = -1, left = -1;
    for (int fi = 0; fi < static_cast<int>(faces_.size()); ++fi) {
      const Face& f = faces_[static_cast<std::size_t>(fi)];
      for (int e = 0; e < 3; ++e) {
        if (f[static_cast<std::size_t>(e)] != a) continue;
        const int x = f[static_cast<std::size_t>((e + 1) % 3)];
        const int y = f[static_cast<std::size_t>((e + 2) % 3)];
        const Vec2& px = pts_[static_cast<std::size_t>(x)];
        const Vec2& py = pts_[static_cast<std::size_t>(y)];
        if (cross(px - pa, pb - pa) > 0.0 && cross(pb - pa, py - pa) > 0.0) {
          start = fi;
          right = x;  // x is to the right of a->b, y to the left
          left = y;
        }
      }
      if (start >= 0) break;
    }
    if (start < 0) throw Error("cut_to_boundary: segment start face not found");

    std::map<std::pair<int, int>, int> dmap = directed_edge_map();
    auto face_across = [&](int u, int v, int not_face) -> int {
      // face containing directed edge (v,u) that is not not_face
      auto it = dmap.find({v, u});
      if (it != dmap.end() && it->second != not_face) return it->second;
      it = dmap.find({u, v});
      if (it != dmap.end() && it->second != not_face) return it->second;
      return -1;
    };

    std::vector<int> right_chain{right}, left_chain{left};
    std::set<int> removed{start};
    int cur = face_across(right, left, start);
    int terminal = b;
    int cross_r = right, cross_l = left;
    while (true) {
      if (cur < 0) throw Error("cut_to_boundary: segment walk left the triangulation");
      const Face& f = faces_[static_cast<std::size_t>(cur)];
      int z = -1;
      for (int t : f)
        if (t != cross_r && t != cross_l) z = t;
      removed.insert(cur);
      if (z == b) break;
      const double side = orient(pa, pb, pts_[static_cast<std::size_t>(z)]);
      if (side == 0.0) {
        terminal = z;  // pass through a vertex: close here, then recurse
        break;
      }
      const int prev = cur;
      if (side > 0.0) {
        left_chain.push_back(z);
        cross_l = z;
      } else {
        right_chain.push_back(z);
        cross_r = z;
      }
      cur = face_across(cross_r, cross_l, prev);
    }

    // erase removed faces (descending indices)
    std::vector<int> dead(removed.begin(), removed.end());
    std::sort(dead.rbegin(), dead.rend());
    for (int fi : dead) faces_.erase(faces_.begin() + fi);

    // left chain lies left of a->terminal, right chain right of it
    triangulate_pocket(a, terminal, left_chain);
    std::reverse(right_chain.begin(), right_chain.end());
    triangulate_pocket(terminal, a, right_chain);

    if (terminal != b) insert_segment(terminal, b);
  }

  // Pseudo-polygon triangulation against base edge (u,w); chain runs from u
  // to w strictly left of u->w. Emits CCW faces.
  void triangulate_pocket(int u, int w, const std::vector<int>& chain) {
    if (chain.empty()) return;
    std::size_t pick = 0;
    for (std::size_t i = 1; i < chain.size(); ++i) {
      if (in_circle(pts_[static_cast<std::size_t>(u)], pts_[static_cast<std::size_t>(w)],
                    pts_[static_cast<std::size_t>(chain[pick])],
                    pts_[static_cast<std::size_t>(chain[i])]) > 0.0)
        pick = i;
    }
    const int c = chain[pick];
    add_face(u, w, c);
    triangulate_pocket(u, c, {chain.begin(), chain.begin() + static_cast<std::ptrdiff_t>(pick)});
    triangulate_pocket(c, w, {chain.begin() + static_cast<std::ptrdiff_t>(pick) + 1, chain.end()});
  }

  // --- final steps ----------------------------------------------------------------

  void drop_outside_faces() {
    std::vector<Face> kept;
    kept.reserve(faces_.size());
    for (const Face& f : faces_)
      if (poly_.contains(centroid(f))) kept.push_back(f);
    faces_ = std::move(kept);
  }

  DiscreteMesh finish() const {
    DiscreteMesh out = DiscreteMesh::from_2d(pts_);
    out.faces = faces_;
    out.recompute_used();
    return out;
  }

  Polygon poly_;
  std::vector<Vec2> pts_;
  std::vector<Face> faces_;
  std::vector<int> poly_vertex_;
  std::set<int> appended_;
  int input_vertex_count_ = 0;
  double scale_ = 0.0;
  double match_tol_ = 0.0;
};

}  // namespace

DiscreteMesh cut_to_boundary(const DiscreteMesh& mesh2d, const Polygon& boundary) {
  CutWorkspace ws(mesh2d, boundary);
  return ws.run(mesh2d);
}

}  // namespace dwdt
