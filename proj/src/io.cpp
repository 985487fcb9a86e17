#include "dwdt/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "dwdt/error.hpp"

namespace dwdt {

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& msg) {
  throw ValidationError(path + ":" + std::to_string(line) + ": " + msg);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  open_out(path) << content;
}

// --- config ---------------------------------------------------------------------

void RunConfig::validate() const {
  if (task != "size" && task != "align" && task != "blend" && task != "custom")
    throw ValidationError("config: unknown task '" + task + "'");
  if (!(alpha > 0)) throw ValidationError("config: alpha must be > 0");
  if (k < 3) throw ValidationError("config: k must be >= 3");
  if (!(epsilon > 0)) throw ValidationError("config: epsilon must be > 0");
  if (!(learning_rate > 0)) throw ValidationError("config: learning_rate must be > 0");
  if (iterations < 0) throw ValidationError("config: iterations must be >= 0");
  if (blend_t < 0 || blend_t > 1) throw ValidationError("config: blend_t must be in [0,1]");
  if (n_vertices < 3) throw ValidationError("config: n_vertices must be >= 3");
  if (threads < 1) throw ValidationError("config: threads must be >= 1");
}

void RunConfig::apply_task_defaults() {
  if (task == "size") {
    weight_size = 0.5;
    weight_boundary = 500.0;
    weight_angle = 1e7;
    weight_curvature = 0.0;
    iterations = 1500;
  } else if (task == "align") {
    weight_size = 0.0;
    weight_boundary = 500.0;
    weight_angle = 0.0;
    weight_curvature = 1.0;
    iterations = 1000;
  } else if (task == "blend") {
    weight_size = 1.0 - blend_t;
    weight_boundary = 500.0;
    weight_angle = blend_t;
    weight_curvature = 0.0;
  }
}

bool apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto as_double = [&] { return std::stod(value); };
  auto as_int = [&] { return std::stoi(value); };
  if (key == "task") {
    cfg.task = value;
    cfg.apply_task_defaults();
  } else if (key == "weight_size") {
    cfg.weight_size = as_double();
  } else if (key == "weight_boundary") {
    cfg.weight_boundary = as_double();
  } else if (key == "weight_angle") {
    cfg.weight_angle = as_double();
  } else if (key == "weight_curvature") {
    cfg.weight_curvature = as_double();
  } else if (key == "alpha") {
    cfg.alpha = as_double();
  } else if (key == "k") {
    cfg.k = as_int();
  } else if (key == "epsilon") {
    cfg.epsilon = as_double();
  } else if (key == "learning_rate") {
    cfg.learning_rate = as_double();
  } else if (key == "iterations") {
    cfg.iterations = as_int();
  } else if (key == "seed") {
    cfg.seed = static_cast<unsigned>(std::stoul(value));
  } else if (key == "snapshot_every") {
    cfg.snapshot_every = as_int();
  } else if (key == "blend_t") {
    cfg.blend_t = as_double();
    if (cfg.task == "blend") cfg.apply_task_defaults();
  } else if (key == "n_vertices") {
    cfg.n_vertices = as_int();
  } else if (key == "threads") {
    cfg.threads = as_int();
  } else if (key == "input") {
    cfg.input = value;
  } else if (key == "fields") {
    cfg.fields = value;
  } else if (key == "output_dir") {
    cfg.output_dir = value;
  } else {
    return false;
  }
  return true;
}

RunConfig read_config(const std::string& path) {
  std::ifstream in = open_in(path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        parse_fail(path, lineno, "expected key = value");
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (!apply_config_entry(cfg, key, value))
        parse_fail(path, lineno, "unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      parse_fail(path, lineno, "bad value for '" + key + "'");
    }
  }
  return cfg;
}

void write_config(const RunConfig& cfg, std::ostream& os) {
  os << "task = " << cfg.task << "\n";
  os << "weight_size = " << format_double(cfg.weight_size) << "\n";
  os << "weight_boundary = " << format_double(cfg.weight_boundary) << "\n";
  os << "weight_angle = " << format_double(cfg.weight_angle) << "\n";
  os << "weight_curvature = " << format_double(cfg.weight_curvature) << "\n";
  os << "alpha = " << format_double(cfg.alpha) << "\n";
  os << "k = " << cfg.k << "\n";
  os << "epsilon = " << format_double(cfg.epsilon) << "\n";
  os << "learning_rate = " << format_double(cfg.learning_rate) << "\n";
  os << "iterations = " << cfg.iterations << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "snapshot_every = " << cfg.snapshot_every << "\n";
  os << "blend_t = " << format_double(cfg.blend_t) << "\n";
  os << "n_vertices = " << cfg.n_vertices << "\n";
  os << "threads = " << cfg.threads << "\n";
  if (!cfg.input.empty()) os << "input = " << cfg.input << "\n";
  if (!cfg.fields.empty()) os << "fields = " << cfg.fields << "\n";
  os << "output_dir = " << cfg.output_dir << "\n";
}

// --- OBJ ------------------------------------------------------------------------

UvPatchMesh read_obj_patch(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<Vec3> v;
  std::vector<Vec2> vt;
  std::vector<std::array<int, 3>> faces_v, faces_t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x >> p.y >> p.z)) parse_fail(path, lineno, "bad v record");
      v.push_back(p);
    } else if (tag == "vt") {
      Vec2 p;
      if (!(ls >> p.x >> p.y)) parse_fail(path, lineno, "bad vt record");
      vt.push_back(p);
    } else if (tag == "f") {
      std::array<int, 3> fv{}, ft{};
      for (int t = 0; t < 3; ++t) {
        std::string tok;
        if (!(ls >> tok)) parse_fail(path, lineno, "face needs 3 vertices");
        const std::size_t slash = tok.find('/');
        if (slash == std::string::npos)
          parse_fail(path, lineno, "face vertex lacks a vt index (need v/vt)");
        try {
          fv[static_cast<std::size_t>(t)] = std::stoi(tok.substr(0, slash)) - 1;
          const std::string rest = tok.substr(slash + 1);
          const std::size_t slash2 = rest.find('/');
          ft[static_cast<std::size_t>(t)] =
              std::stoi(slash2 == std::string::npos ? rest : rest.substr(0, slash2)) - 1;
        } catch (const std::exception&) {
          parse_fail(path, lineno, "bad face token '" + tok + "'");
        }
      }
      std::string extra;
      if (ls >> extra) parse_fail(path, lineno, "only triangle faces are supported");
      faces_v.push_back(fv);
      faces_t.push_back(ft);
    } else if (tag == "vn" || tag == "o" || tag == "g" || tag == "s" || tag == "mtllib" ||
               tag == "usemtl") {
      continue;
    } else {
      parse_fail(path, lineno, "unsupported record '" + tag + "'");
    }
  }
  if (v.empty() || faces_v.empty()) throw ValidationError(path + ": no mesh data");

  // Bind one UV per vertex; a vertex paired with two different vt indices is
  // a seam, which a single patch must not contain.
  std::vector<int> uv_of(v.size(), -1);
  for (std::size_t fi = 0; fi < faces_v.size(); ++fi)
    for (int t = 0; t < 3; ++t) {
      const int vi = faces_v[fi][static_cast<std::size_t>(t)];
      const int ti = faces_t[fi][static_cast<std::size_t>(t)];
      if (vi < 0 || vi >= static_cast<int>(v.size()))
        throw ValidationError(path + ": face vertex index out of range");
      if (ti < 0 || ti >= static_cast<int>(vt.size()))
        throw ValidationError(path + ": face vt index out of range");
      int& bound = uv_of[static_cast<std::size_t>(vi)];
      if (bound < 0)
        bound = ti;
      else if (bound != ti)
        throw ValidationError(path + ": vertex " + std::to_string(vi + 1) +
                              " has multiple vt bindings (seam in patch)");
    }
  for (std::size_t vi = 0; vi < v.size(); ++vi)
    if (uv_of[vi] < 0 )
      uv_of[vi] = 0;  // unreferenced vertex; uv irrelevant

  UvPatchMesh mesh;
  mesh.positions = std::move(v);
  mesh.uv.resize(mesh.positions.size());
  for (std::size_t vi = 0; vi < mesh.positions.size(); ++vi)
    mesh.uv[vi] = vt[static_cast<std::size_t>(uv_of[vi])];
  mesh.faces = std::move(faces_v);
  mesh.validate();
  return mesh;
}

void write_obj(const DiscreteMesh& mesh, const std::string& path, const std::vector<Vec2>* uv) {
  std::ofstream out = open_out(path);
  for (const Vec3& p : mesh.vertices)
    out << "v " << format_double(p.x) << " " << format_double(p.y) << " "
        << format_double(p.z) << "\n";
  if (uv) {
    for (const Vec2& p : *uv)
      out << "vt " << format_double(p.x) << " " << format_double(p.y) << "\n";
    for (const Face& f : mesh.faces)
      out << "f " << f[0] + 1 << "/" << f[0] + 1 << " " << f[1] + 1 << "/" << f[1] + 1 << " "
          << f[2] + 1 << "/" << f[2] + 1 << "\n";
  } else {
    for (const Face& f : mesh.faces)
      out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
  }
}

DiscreteMesh read_obj_mesh(const std::string& path) {
  std::ifstream in = open_in(path);
  DiscreteMesh mesh;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x >> p.y >> p.z)) parse_fail(path, lineno, "bad v record");
      mesh.vertices.push_back(p);
    } else if (tag == "f") {
      Face f{};
      for (int t = 0; t < 3; ++t) {
        std::string tok;
        if (!(ls >> tok)) parse_fail(path, lineno, "face needs 3 vertices");
        f[static_cast<std::size_t>(t)] = std::stoi(tok.substr(0, tok.find('/'))) - 1;
      }
      mesh.faces.push_back(f);
    }
  }
  mesh.recompute_used();
  return mesh;
}

// --- fields ----------------------------------------------------------------------

FieldTable read_fields(const std::string& path, int expected_rows) {
  std::ifstream in = open_in(path);
  std::string line;
  int lineno = 0;
  std::vector<std::string> columns;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) columns.push_back(tok);
    if (!columns.empty()) break;
  }
  if (columns.empty() || columns[0] != "index")
    parse_fail(path, lineno, "header must start with 'index'");
  bool has_a = false, has_c = false, has_k = false;
  for (std::size_t i = 1; i < columns.size(); ++i) {
    if (columns[i] == "A") has_a = true;
    else if (columns[i] == "Cx" || columns[i] == "Cy" || columns[i] == "Cz") has_c = true;
    else if (columns[i] == "k1" || columns[i] == "k2") has_k = true;
    else parse_fail(path, lineno, "unknown column '" + columns[i] + "'");
  }

  FieldTable table;
  if (has_a) table.area.assign(static_cast<std::size_t>(expected_rows), 0.0);
  if (has_c) table.direction.assign(static_cast<std::size_t>(expected_rows), Vec3{});
  if (has_k) {
    table.k1.assign(static_cast<std::size_t>(expected_rows), 0.0);
    table.k2.assign(static_cast<std::size_t>(expected_rows), 0.0);
  }
  int rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    int index;
    if (!(ls >> index)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        parse_fail(path, lineno, "bad row");
      continue;
    }
    if (index < 0 || index >= expected_rows) parse_fail(path, lineno, "index out of range");
    for (std::size_t c = 1; c < columns.size(); ++c) {
      double val;
      if (!(ls >> val)) parse_fail(path, lineno, "missing value for " + columns[c]);
      const std::size_t row = static_cast<std::size_t>(index);
      if (columns[c] == "A") table.area[row] = val;
      else if (columns[c] == "Cx") table.direction[row].x = val;
      else if (columns[c] == "Cy") table.direction[row].y = val;
      else if (columns[c] == "Cz") table.direction[row].z = val;
      else if (columns[c] == "k1") table.k1[row] = val;
      else if (columns[c] == "k2") table.k2[row] = val;
    }
    ++rows;
  }
  if (rows != expected_rows)
    throw ValidationError(path + ": row count " + std::to_string(rows) +
                          " does not match vertex count " + std::to_string(expected_rows));
  for (Vec3& c : table.direction) {
    const double len = norm(c);
    if (len < 1e-12) throw ValidationError(path + ": zero direction vector");
    if (std::abs(len - 1.0) > 1e-3) ++table.renormalized;
    c = (1.0 / len) * c;
  }
  return table;
}

void write_fields(const FieldTable& table, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "index";
  if (table.has_area()) out << " A";
  if (table.has_direction()) out << " Cx Cy Cz";
  if (table.has_magnitudes()) out << " k1 k2";
  out << "\n";
  const std::size_t rows = table.has_area() ? table.area.size() : table.direction.size();
  for (std::size_t i = 0; i < rows; ++i) {
    out << i;
    if (table.has_area()) out << " " << format_double(table.area[i]);
    if (table.has_direction())
      out << " " << format_double(table.direction[i].x) << " "
          << format_double(table.direction[i].y) << " " << format_double(table.direction[i].z);
    if (table.has_magnitudes())
      out << " " << format_double(table.k1[i]) << " " << format_double(table.k2[i]);
    out << "\n";
  }
}

// --- SVG -------------------------------------------------------------------------

namespace {

struct SvgFrame {
  double x0, y0, w, h, pad;
};

SvgFrame frame_of(const std::vector<Vec2>& pts) {
  double lox = pts[0].x, hix = pts[0].x, loy = pts[0].y, hiy = pts[0].y;
  for (const Vec2& p : pts) {
    lox = std::min(lox, p.x);
    hix = std::max(hix, p.x);
    loy = std::min(loy, p.y);
    hiy = std::max(hiy, p.y);
  }
  const double pad = 0.05 * std::max(hix - lox, hiy - loy) + 1e-12;
  return {lox - pad, loy - pad, hix - lox + 2 * pad, hiy - loy + 2 * pad, pad};
}

std::string score_color(double s) {
  // light gray (0) -> orange (1)
  const auto channel = [](double a, double b, double t) {
    return static_cast<int>(std::lround(a + (b - a) * t));
  };
  std::ostringstream os;
  os << "rgb(" << channel(221, 217, s) << "," << channel(221, 95, s) << ","
     << channel(221, 2, s) << ")";
  return os.str();
}

class SvgWriter {
 public:
  SvgWriter(const std::string& path, const SvgFrame& f) : out_(open_out(path)), f_(f) {
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\""
         << static_cast<int>(800 * f_.h / f_.w) << "\" viewBox=\"0 0 " << f_.w << " " << f_.h
         << "\">\n";
  }
  ~SvgWriter() { out_ << "</svg>\n"; }

  // SVG y grows downward; flip.
  double tx(double x) const { return x - f_.x0; }
  double ty(double y) const { return f_.h - (y - f_.y0); }

  void line(const Vec2& a, const Vec2& b, const std::string& color, double width) {
    out_ << "<line x1=\"" << tx(a.x) << "\" y1=\"" << ty(a.y) << "\" x2=\"" << tx(b.x)
         << "\" y2=\"" << ty(b.y) << "\" stroke=\"" << color << "\" stroke-width=\"" << width
         << "\"/>\n";
  }
  void circle(const Vec2& c, double r, const std::string& color) {
    out_ << "<circle cx=\"" << tx(c.x) << "\" cy=\"" << ty(c.y) << "\" r=\"" << r
         << "\" fill=\"" << color << "\"/>\n";
  }

 private:
  std::ofstream out_;
  SvgFrame f_;
};

}  // namespace

void write_svg_soft(const WeightedPointSet& ps, const SoftTriangulation& soft,
                    const std::string& path, double draw_cutoff) {
  const SvgFrame frame = frame_of(ps.positions);
  SvgWriter svg(path, frame);
  const double stroke = 0.002 * std::max(frame.w, frame.h);
  // edge -> max adjacent triangle score
  std::map<std::pair<int, int>, double> edge_score;
  for (int i = 0; i < soft.count(); ++i) {
    const double s = soft.tri_score[static_cast<std::size_t>(i)];
    if (s <= draw_cutoff) continue;
    const CandidateTriangle& tri = soft.candidates[static_cast<std::size_t>(i)];
    for (int e = 0; e < 3; ++e) {
      int a = tri.v[static_cast<std::size_t>(e)], b = tri.v[static_cast<std::size_t>((e + 1) % 3)];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = edge_score.try_emplace({a, b}, s);
      if (!inserted) it->second = std::max(it->second, s);
    }
  }
  for (const auto& [edge, s] : edge_score)
    svg.line(ps.positions[static_cast<std::size_t>(edge.first)],
             ps.positions[static_cast<std::size_t>(edge.second)], score_color(s), stroke);
  double max_w = 0.0;
  for (double w : ps.weights) max_w = std::max(max_w, std::abs(w));
  const double r0 = 1.5 * stroke;
  for (int j = 0; j < ps.size(); ++j) {
    const double w = max_w > 0 ? std::abs(ps.weights[static_cast<std::size_t>(j)]) / max_w : 0.0;
    svg.circle(ps.positions[static_cast<std::size_t>(j)], r0 * (1.0 + 2.0 * w), "black");
  }
}

void write_svg_mesh(const DiscreteMesh& mesh, const std::string& path) {
  std::vector<Vec2> pts;
  pts.reserve(mesh.vertices.size());
  for (const Vec3& p : mesh.vertices) pts.push_back({p.x, p.y});
  const SvgFrame frame = frame_of(pts);
  SvgWriter svg(path, frame);
  const double stroke = 0.002 * std::max(frame.w, frame.h);
  std::map<std::pair<int, int>, bool> seen;
  for (const Face& f : mesh.faces)
    for (int e = 0; e < 3; ++e) {
      int a = f[static_cast<std::size_t>(e)], b = f[static_cast<std::size_t>((e + 1) % 3)];
      if (a > b) std::swap(a, b);
      if (!seen.emplace(std::pair{a, b}, true).second) continue;
      svg.line(pts[static_cast<std::size_t>(a)], pts[static_cast<std::size_t>(b)], "black", stroke);
    }
}

// --- points ----------------------------------------------------------------------

WeightedPointSet read_points(const std::string& path) {
  std::ifstream in = open_in(path);
  WeightedPointSet ps;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    double x, y;
    if (!(ls >> x >> y)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        parse_fail(path, lineno, "expected: x y [w]");
      continue;
    }
    double w = 0.0;
    ls >> w;
    ps.positions.push_back({x, y});
    ps.weights.push_back(w);
  }
  if (ps.size() == 0) throw ValidationError(path + ": no points");
  return ps;
}

void write_points(const WeightedPointSet& ps, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "# x y w\n";
  for (int j = 0; j < ps.size(); ++j)
    out << format_double(ps.positions[static_cast<std::size_t>(j)].x) << " "
        << format_double(ps.positions[static_cast<std::size_t>(j)].y) << " "
        << format_double(ps.weights[static_cast<std::size_t>(j)]) << "\n";
}

}  // namespace dwdt
