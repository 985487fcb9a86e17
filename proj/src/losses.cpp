#include "dwdt/losses.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

namespace dwdt {

void LossConfig::validate() const {
  if (weight_size < 0 || weight_boundary < 0 || weight_angle < 0 || weight_curvature < 0)
    throw ValidationError("loss config: negative term weight");
  if (weight_size + weight_boundary + weight_angle + weight_curvature <= 0.0)
    throw ValidationError("loss config: at least one term weight must be > 0");
  if (!(epsilon > 0.0)) throw ValidationError("loss config: epsilon must be > 0");
}

namespace {

using ad::Var;

constexpr double kCos60 = 0.5;

Var log_sum_exp(const std::vector<Var>& xs) {
  double m = xs[0].value();
  for (const Var& x : xs) m = std::max(m, x.value());
  Var sum = 0.0;
  for (const Var& x : xs) sum += ad::exp(x - m);
  return m + ad::log(sum);
}

// Per-evaluation workspace: memoized lifted vertices and field samples.
class LossBuilder {
 public:
  LossBuilder(ad::Tape& tape, DiffPointSet& dps, const SoftTriangulation& soft,
              const LossContextRefs& ctx)
      : tape_(tape), dps_(dps), soft_(soft), ctx_(ctx), lifted_(static_cast<std::size_t>(dps.size())) {}

  Vec3T<Var> lifted(int j) {
    std::optional<Vec3T<Var>>& slot = lifted_[static_cast<std::size_t>(j)];
    if (!slot) {
      const Vec2 at = dps_.values().positions[static_cast<std::size_t>(j)];
      if (ctx_.param)
        slot = ctx_.param->lift_var(tape_, at, dps_.x(j), dps_.y(j));
      else
        slot = Vec3T<Var>{dps_.x(j), dps_.y(j), Var(0.0)};
    }
    return *slot;
  }

  // Corner scores of one candidate, rebuilt on the tape at the frozen argmin.
  Var corner_score_var(int i, int t) {
    const CandidateTriangle& tri = soft_.candidates[static_cast<std::size_t>(i)];
    const CornerScore& cs = soft_.corners[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
    if (cs.argmin < 0) return Var(1.0);  // empty exclusion list: saturated
    const Vec2T<Var> cc = circumcenter_var(i);
    const int corner = tri.v[static_cast<std::size_t>(t)];
    const BisectorT<Var> bis =
        power_bisector<Var>(dps_.position(corner), dps_.weight(corner),
                            dps_.position(cs.argmin), dps_.weight(cs.argmin), corner, cs.argmin);
    const Var d = signed_bisector_distance<Var>(cc, bis);
    return ad::sigmoid(soft_.params.alpha * d);
  }

  Vec2T<Var> circumcenter_var(int i) {
    auto [it, inserted] = cc_cache_.try_emplace(i);
    if (inserted) {
      const CandidateTriangle& tri = soft_.candidates[static_cast<std::size_t>(i)];
      it->second = weighted_circumcenter<Var>(
          dps_.position(tri.v[0]), dps_.weight(tri.v[0]), dps_.position(tri.v[1]),
          dps_.weight(tri.v[1]), dps_.position(tri.v[2]), dps_.weight(tri.v[2]));
    }
    return it->second;
  }

  Var area3(int i) {
    auto [it, inserted] = area_cache_.try_emplace(i);
    if (inserted) {
      const CandidateTriangle& tri = soft_.candidates[static_cast<std::size_t>(i)];
      const Vec3T<Var> a = lifted(tri.v[0]);
      const Vec3T<Var> b = lifted(tri.v[1]);
      const Vec3T<Var> c = lifted(tri.v[2]);
      it->second = Var(0.5) * norm(cross(b - a, c - a));
    }
    return it->second;
  }

  ad::Tape& tape_;
  DiffPointSet& dps_;
  const SoftTriangulation& soft_;
  const LossContextRefs& ctx_;
  std::vector<std::optional<Vec3T<Var>>> lifted_;
  std::map<int, Vec2T<Var>> cc_cache_;
  std::map<int, Var> area_cache_;
};

}  // namespace

ad::Var total_loss_var(ad::Tape& tape, DiffPointSet& dps, const SoftTriangulation& soft,
                       const LossContextRefs& ctx, const LossConfig& cfg,
                       LossTerms* terms_out) {
  cfg.validate();
  const bool need_scores = cfg.weight_size > 0 || cfg.weight_angle > 0 || cfg.weight_curvature > 0;
  LossBuilder builder(tape, dps, soft, ctx);
  LossTerms terms;

  // Score vars for every active corner, plus their sum (the shared
  // normalization of L_s, L_a, L_c).
  struct ActiveCorner {
    int cand;
    int slot;
    Var score;
  };
  std::vector<ActiveCorner> active;
  std::vector<std::array<int, 3>> corner_index;  // candidate -> active slot or -1
  Var score_sum = 0.0;
  if (need_scores) {
    corner_index.assign(static_cast<std::size_t>(soft.count()), {-1, -1, -1});
    for (int i = 0; i < soft.count(); ++i)
      for (int t = 0; t < 3; ++t)
        if (soft.corner_active(i, t)) {
          Var s = builder.corner_score_var(i, t);
          corner_index[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] =
              static_cast<int>(active.size());
          active.push_back({i, t, s});
          score_sum += s;
        }
    terms.active_corners = static_cast<int>(active.size());
    if ((cfg.weight_size > 0 || cfg.weight_angle > 0 || cfg.weight_curvature > 0) &&
        score_sum.value() < 1e-12)
      throw EmptyTriangulationError("loss: total inclusion score below 1e-12");
  }

  Var total = 0.0;

  if (cfg.weight_size > 0) {
    if (!ctx.area_field) throw ValidationError("size loss requires a target-area field");
    Var acc = 0.0;
    for (const ActiveCorner& ac : active) {
      const CandidateTriangle& tri = soft.candidates[static_cast<std::size_t>(ac.cand)];
      const int j = tri.v[static_cast<std::size_t>(ac.slot)];
      const Vec2 at = dps.values().positions[static_cast<std::size_t>(j)];
      const Var target = ctx.area_field->value_var(tape, at, dps.x(j), dps.y(j));
      const Var diff = builder.area3(ac.cand) - target;
      acc += ac.score * diff * diff;
    }
    const Var loss = acc / score_sum;
    terms.size = loss.value();
    total += Var(cfg.weight_size) * loss;
  }

  if (cfg.weight_boundary > 0) {
    if (!ctx.boundary) throw ValidationError("boundary loss requires a boundary polygon");
    Var acc = 0.0;
    const int n = dps.size();
    for (int j = 0; j < n; ++j) {
      const Vec2 at = dps.values().positions[static_cast<std::size_t>(j)];
      const BoundaryProjection proj = ctx.boundary->closest_boundary(at);
      const double d_val = dot(at - proj.point, proj.inward_normal);
      if (d_val >= cfg.epsilon) {
        acc += Var(1.0);  // min clamps at eps: exp(0), no gradient
      } else {
        const Var d = ad::custom_node2(tape, d_val, dps.x(j), proj.inward_normal.x,
                                       dps.y(j), proj.inward_normal.y, "boundary-distance");
        acc += ad::exp(Var(cfg.epsilon) - d);
      }
    }
    const Var loss = acc / Var(static_cast<double>(n));
    terms.boundary = loss.value();
    total += Var(cfg.weight_boundary) * loss;
  }

  if (cfg.weight_angle > 0) {
    Var acc = 0.0;
    for (const ActiveCorner& ac : active) {
      const CandidateTriangle& tri = soft.candidates[static_cast<std::size_t>(ac.cand)];
      const Vec3T<Var> vj = builder.lifted(tri.v[static_cast<std::size_t>(ac.slot)]);
      const Vec3T<Var> vk = builder.lifted(tri.v[static_cast<std::size_t>((ac.slot + 1) % 3)]);
      const Vec3T<Var> vl = builder.lifted(tri.v[static_cast<std::size_t>((ac.slot + 2) % 3)]);
      const Vec3T<Var> u = vk - vj;
      const Vec3T<Var> w = vl - vj;
      const Var cos_angle = dot(u, w) / (norm(u) * norm(w));
      acc += ac.score * ad::abs(cos_angle - Var(kCos60));
    }
    const Var loss = acc / score_sum;
    terms.angle = loss.value();
    total += Var(cfg.weight_angle) * loss;
  }

  if (cfg.weight_curvature > 0) {
    if (!ctx.dir_field) throw ValidationError("curvature loss requires a direction field");
    // N_j: candidates containing j with s_i above the cutoff.
    std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(dps.size()));
    for (int i = 0; i < soft.count(); ++i) {
      if (soft.tri_score[static_cast<std::size_t>(i)] <= ctx.curvature_adjacency_cutoff) continue;
      for (int v : soft.candidates[static_cast<std::size_t>(i)].v)
        adjacency[static_cast<std::size_t>(v)].push_back(i);
    }
    Var acc = 0.0;
    std::vector<Var> pos_terms, neg_terms;
    for (int j = 0; j < dps.size(); ++j) {
      const std::vector<int>& adj = adjacency[static_cast<std::size_t>(j)];
      if (adj.empty()) {
        ++terms.isolated_vertices;
        continue;
      }
      const Vec2 at = dps.values().positions[static_cast<std::size_t>(j)];
      const Vec3T<Var> dir = ctx.dir_field->value_var(tape, at, dps.x(j), dps.y(j));
      const Vec3T<Var> vj = builder.lifted(j);
      pos_terms.clear();
      neg_terms.clear();
      for (int i : adj) {
        const CandidateTriangle& tri = soft.candidates[static_cast<std::size_t>(i)];
        int slot = 0;
        for (int t = 0; t < 3; ++t)
          if (tri.v[static_cast<std::size_t>(t)] == j) slot = t;
        const int ai = corner_index[static_cast<std::size_t>(i)][static_cast<std::size_t>(slot)];
        const Var s = ai >= 0 ? active[static_cast<std::size_t>(ai)].score
                              : Var(soft.corners[static_cast<std::size_t>(i)][static_cast<std::size_t>(slot)].score);
        for (int off = 1; off <= 2; ++off) {
          const int m = tri.v[static_cast<std::size_t>((slot + off) % 3)];
          const Vec3T<Var> e = vj - builder.lifted(m);
          const Vec3T<Var> h = (Var(1.0) / norm(e)) * e;
          const Var align = dot(dir, h) * s;
          pos_terms.push_back(align);
          neg_terms.push_back(Var(0.0) - align);
        }
      }
      acc += log_sum_exp(pos_terms) + log_sum_exp(neg_terms);
    }
    const Var loss = (Var(-1.0) * acc) / score_sum;
    terms.curvature = loss.value();
    total += Var(cfg.weight_curvature) * loss;
  }

  terms.total = total.value();
  if (terms_out) *terms_out = terms;
  return total;
}

LossTerms evaluate_losses(const WeightedPointSet& ps, const LossContextRefs& ctx,
                          const LossConfig& cfg) {
  ad::Tape tape;
  DiffPointSet dps(tape, ps);
  const SoftTriangulation soft = inclusion_scores(ps, ctx.soft);
  LossTerms terms;
  total_loss_var(tape, dps, soft, ctx, cfg, &terms);
  return terms;
}

LossExpr make_total_loss_expr(const LossContextRefs& ctx, const LossConfig& cfg) {
  return [ctx, cfg](ad::Tape& tape, DiffPointSet& dps) {
    const SoftTriangulation soft = inclusion_scores(dps.values(), ctx.soft);
    return total_loss_var(tape, dps, soft, ctx, cfg, nullptr);
  };
}

// --- discrete (hard-membership) versions for the SA baseline -------------------

double discrete_total_loss(const WeightedPointSet& ps, const DiscreteMesh& mesh,
                           const LossContextRefs& ctx, const LossConfig& cfg) {
  cfg.validate();
  double total = 0.0;
  const double corner_count = 3.0 * static_cast<double>(mesh.faces.size());

  auto lift3 = [&](int j) -> Vec3 {
    const Vec2 at = ps.positions[static_cast<std::size_t>(j)];
    return ctx.param ? ctx.param->lift(at) : Vec3{at.x, at.y, 0.0};
  };

  if (cfg.weight_size > 0) {
    if (mesh.faces.empty()) throw EmptyTriangulationError("discrete size loss: empty mesh");
    double acc = 0.0;
    for (const Face& f : mesh.faces) {
      const Vec3 a = lift3(f[0]), b = lift3(f[1]), c = lift3(f[2]);
      const double area = 0.5 * norm(cross(b - a, c - a));
      for (int t = 0; t < 3; ++t) {
        const double target =
            ctx.area_field->value(ps.positions[static_cast<std::size_t>(f[static_cast<std::size_t>(t)])]);
        acc += (area - target) * (area - target);
      }
    }
    total += cfg.weight_size * acc / corner_count;
  }

  if (cfg.weight_boundary > 0) {
    double acc = 0.0;
    for (const Vec2& p : ps.positions) {
      const double d = ctx.boundary->signed_inside_distance(p);
      acc += std::exp(cfg.epsilon - std::min(cfg.epsilon, d));
    }
    total += cfg.weight_boundary * acc / static_cast<double>(ps.size());
  }

  if (cfg.weight_angle > 0) {
    if (mesh.faces.empty()) throw EmptyTriangulationError("discrete angle loss: empty mesh");
    double acc = 0.0;
    for (const Face& f : mesh.faces)
      for (int t = 0; t < 3; ++t) {
        const Vec3 vj = lift3(f[static_cast<std::size_t>(t)]);
        const Vec3 u = lift3(f[static_cast<std::size_t>((t + 1) % 3)]) - vj;
        const Vec3 w = lift3(f[static_cast<std::size_t>((t + 2) % 3)]) - vj;
        acc += std::abs(dot(u, w) / (norm(u) * norm(w)) - kCos60);
      }
    total += cfg.weight_angle * acc / corner_count;
  }

  if (cfg.weight_curvature > 0) {
    if (mesh.faces.empty()) throw EmptyTriangulationError("discrete curvature loss: empty mesh");
    std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(ps.size()));
    for (int fi = 0; fi < static_cast<int>(mesh.faces.size()); ++fi)
      for (int v : mesh.faces[static_cast<std::size_t>(fi)])
        adjacency[static_cast<std::size_t>(v)].push_back(fi);
    double acc = 0.0;
    std::vector<double> pos_terms, neg_terms;
    for (int j = 0; j < ps.size(); ++j) {
      const std::vector<int>& adj = adjacency[static_cast<std::size_t>(j)];
      if (adj.empty()) continue;
      const Vec3 dir = ctx.dir_field->value(ps.positions[static_cast<std::size_t>(j)]);
      const Vec3 vj = lift3(j);
      pos_terms.clear();
      neg_terms.clear();
      for (int fi : adj) {
        const Face& f = mesh.faces[static_cast<std::size_t>(fi)];
        for (int t = 0; t < 3; ++t) {
          const int m = f[static_cast<std::size_t>(t)];
          if (m == j) continue;
          const Vec3 e = vj - lift3(m);
          const double align = dot(dir, e) / norm(e);
          pos_terms.push_back(align);
          neg_terms.push_back(-align);
        }
      }
      auto lse = [](const std::vector<double>& xs) {
        const double m = *std::max_element(xs.begin(), xs.end());
        double sum = 0.0;
        for (double x : xs) sum += std::exp(x - m);
        return m + std::log(sum);
      };
      acc += lse(pos_terms) + lse(neg_terms);
    }
    total += cfg.weight_curvature * -acc / corner_count;
  }

  return total;
}

}  // namespace dwdt
