#include "dwdt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace dwdt {

AdamState::AdamState(int parameter_count, const AdamParams& params)
    : p_(params),
      m_(static_cast<std::size_t>(parameter_count), 0.0),
      v_(static_cast<std::size_t>(parameter_count), 0.0) {}

void AdamState::step(std::span<double> parameters, std::span<const double> gradient) {
  ++t_;
  const double bc1 = 1.0 - std::pow(p_.beta1, t_);
  const double bc2 = 1.0 - std::pow(p_.beta2, t_);
  for (std::size_t i = 0; i < parameters.size(); ++i) {
    const double g = gradient[i];
    m_[i] = p_.beta1 * m_[i] + (1.0 - p_.beta1) * g;
    v_[i] = p_.beta2 * v_[i] + (1.0 - p_.beta2) * g * g;
    const double mhat = m_[i] / bc1;
    const double vhat = v_[i] / bc2;
    parameters[i] -= p_.learning_rate * mhat / (std::sqrt(vhat) + p_.eps);
  }
}

std::string RunLog::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "iteration,total,size,boundary,angle,curvature,candidates,active_corners,"
        "branch_switches\n";
  for (const IterationRecord& r : rows)
    os << r.iteration << "," << r.terms.total << "," << r.terms.size << ","
       << r.terms.boundary << "," << r.terms.angle << "," << r.terms.curvature << ","
       << r.candidates << "," << r.terms.active_corners << "," << r.branch_switches << "\n";
  return os.str();
}

WeightedPointSet init_from_patch(const UvPatchMesh& mesh, unsigned seed) {
  WeightedPointSet ps;
  ps.positions = mesh.uv;
  std::mt19937_64 rng(seed);
  const double diag = ps.bbox_diagonal();
  std::uniform_real_distribution<double> weight(0.0, 0.05 * diag);
  ps.weights.resize(ps.positions.size());
  for (double& w : ps.weights) w = weight(rng);
  return ps;
}

WeightedPointSet init_random_in_domain(const Polygon& domain, int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  double lox = domain.point(0).x, hix = lox, loy = domain.point(0).y, hiy = loy;
  for (int i = 0; i < domain.size(); ++i) {
    lox = std::min(lox, domain.point(i).x);
    hix = std::max(hix, domain.point(i).x);
    loy = std::min(loy, domain.point(i).y);
    hiy = std::max(hiy, domain.point(i).y);
  }
  std::uniform_real_distribution<double> ux(lox, hix), uy(loy, hiy);
  WeightedPointSet ps;
  while (ps.size() < n) {
    const Vec2 p{ux(rng), uy(rng)};
    if (domain.contains(p)) ps.positions.push_back(p);
  }
  const double diag = std::hypot(hix - lox, hiy - loy);
  std::uniform_real_distribution<double> weight(0.0, 0.05 * diag);
  ps.weights.resize(static_cast<std::size_t>(n));
  for (double& w : ps.weights) w = weight(rng);
  return ps;
}

namespace {

// Frozen-branch signature of the active candidates: triple key -> argmins.
std::map<std::uint64_t, std::array<int, 3>> branch_signature(const SoftTriangulation& soft) {
  std::map<std::uint64_t, std::array<int, 3>> sig;
  for (int i = 0; i < soft.count(); ++i) {
    bool any = false;
    for (int t = 0; t < 3; ++t) any |= soft.corner_active(i, t);
    if (!any) continue;
    const CandidateTriangle& tri = soft.candidates[static_cast<std::size_t>(i)];
    const std::uint64_t key = (static_cast<std::uint64_t>(tri.v[0]) << 42) |
                              (static_cast<std::uint64_t>(tri.v[1]) << 21) |
                              static_cast<std::uint64_t>(tri.v[2]);
    sig[key] = {soft.corners[static_cast<std::size_t>(i)][0].argmin,
                soft.corners[static_cast<std::size_t>(i)][1].argmin,
                soft.corners[static_cast<std::size_t>(i)][2].argmin};
  }
  return sig;
}

int count_branch_switches(const std::map<std::uint64_t, std::array<int, 3>>& prev,
                          const std::map<std::uint64_t, std::array<int, 3>>& cur) {
  int switches = 0;
  auto it_prev = prev.begin();
  auto it_cur = cur.begin();
  while (it_prev != prev.end() || it_cur != cur.end()) {
    if (it_cur == cur.end() || (it_prev != prev.end() && it_prev->first < it_cur->first)) {
      ++switches;  // candidate left the active set
      ++it_prev;
    } else if (it_prev == prev.end() || it_cur->first < it_prev->first) {
      ++switches;  // candidate entered the active set
      ++it_cur;
    } else {
      for (int t = 0; t < 3; ++t)
        if (it_prev->second[static_cast<std::size_t>(t)] != it_cur->second[static_cast<std::size_t>(t)])
          ++switches;
      ++it_prev;
      ++it_cur;
    }
  }
  return switches;
}

DiscreteMesh lift_mesh(const DiscreteMesh& mesh2d, const Parameterization* param) {
  DiscreteMesh out = mesh2d;
  if (!param) return out;
  for (std::size_t v = 0; v < out.vertices.size(); ++v) {
    if (!out.used.empty() && !out.used[v]) continue;
    out.vertices[v] = param->lift({mesh2d.vertices[v].x, mesh2d.vertices[v].y});
  }
  return out;
}

}  // namespace

OptimizeResult optimize(WeightedPointSet init, const OptimizeInputs& in, int iterations,
                        int snapshot_every, const SnapshotCallback& on_snapshot) {
  in.losses.validate();
  WeightedPointSet ps = std::move(init);
  const int n = ps.size();
  AdamState adam(3 * n, in.adam);
  RunLog log;
  log.rows.reserve(static_cast<std::size_t>(iterations));
  std::map<std::uint64_t, std::array<int, 3>> prev_sig;

  std::vector<double> flat(static_cast<std::size_t>(3 * n));
  std::vector<double> grad(static_cast<std::size_t>(3 * n));

  for (int it = 0; it < iterations; ++it) {
    const SoftTriangulation soft = inclusion_scores(ps, in.ctx.soft);

    LossTerms terms;
    GradientBundle bundle;
    try {
      ad::Tape tape;
      DiffPointSet dps(tape, ps);
      const ad::Var total = total_loss_var(tape, dps, soft, in.ctx, in.losses, &terms);
      bundle = dps.gather(tape, total);
    } catch (const NumericFailureError&) {
      log.aborted_at = it;  // keep the last good parameters
      break;
    }

    auto sig = branch_signature(soft);
    IterationRecord row;
    row.iteration = it;
    row.terms = terms;
    row.candidates = soft.count();
    row.branch_switches = it == 0 ? 0 : count_branch_switches(prev_sig, sig);
    log.rows.push_back(row);
    prev_sig = std::move(sig);

    if (snapshot_every > 0 && it % snapshot_every == 0 && on_snapshot)
      on_snapshot(it, ps, extract_discrete(ps, soft));

    bool grad_finite = true;
    for (int j = 0; j < n; ++j) {
      flat[static_cast<std::size_t>(2 * j)] = ps.positions[static_cast<std::size_t>(j)].x;
      flat[static_cast<std::size_t>(2 * j + 1)] = ps.positions[static_cast<std::size_t>(j)].y;
      flat[static_cast<std::size_t>(2 * n + j)] = ps.weights[static_cast<std::size_t>(j)];
      grad[static_cast<std::size_t>(2 * j)] = bundle.d_positions[static_cast<std::size_t>(j)][0];
      grad[static_cast<std::size_t>(2 * j + 1)] = bundle.d_positions[static_cast<std::size_t>(j)][1];
      grad[static_cast<std::size_t>(2 * n + j)] = bundle.d_weights[static_cast<std::size_t>(j)];
      grad_finite = grad_finite && std::isfinite(grad[static_cast<std::size_t>(2 * j)]) &&
                    std::isfinite(grad[static_cast<std::size_t>(2 * j + 1)]) &&
                    std::isfinite(grad[static_cast<std::size_t>(2 * n + j)]);
    }
    if (!grad_finite) {
      log.aborted_at = it;
      break;
    }
    adam.step(flat, grad);
    for (int j = 0; j < n; ++j) {
      ps.positions[static_cast<std::size_t>(j)] = {flat[static_cast<std::size_t>(2 * j)],
                                                   flat[static_cast<std::size_t>(2 * j + 1)]};
      ps.weights[static_cast<std::size_t>(j)] = flat[static_cast<std::size_t>(2 * n + j)];
    }
  }

  OptimizeResult result;
  const SoftTriangulation soft = inclusion_scores(ps, in.ctx.soft);
  result.raw2d = extract_discrete(ps, soft);
  result.cut2d = in.ctx.boundary ? cut_to_boundary(result.raw2d, *in.ctx.boundary) : result.raw2d;
  result.mesh3d = lift_mesh(result.cut2d, in.ctx.param);
  result.params = std::move(ps);
  result.log = std::move(log);
  return result;
}

SaResult simulated_annealing_baseline(WeightedPointSet init, const OptimizeInputs& in,
                                      int proposals, unsigned seed, SaParams sa) {
  in.losses.validate();
  WeightedPointSet ps = std::move(init);
  const double diag = ps.bbox_diagonal();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_vertex(0, ps.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SoftParams wdt = in.ctx.soft;
  wdt.k = ps.size() - 1;  // discrete WDT via the extract path

  auto energy = [&](const WeightedPointSet& q) {
    const DiscreteMesh mesh = extract_discrete(q, inclusion_scores(q, wdt));
    return discrete_total_loss(q, mesh, in.ctx, in.losses);
  };

  auto propose = [&](WeightedPointSet& q) {
    const int j = pick_vertex(rng);
    if (unit(rng) < 2.0 / 3.0) {
      q.positions[static_cast<std::size_t>(j)].x += sa.position_sigma_rel * diag * gauss(rng);
      q.positions[static_cast<std::size_t>(j)].y += sa.position_sigma_rel * diag * gauss(rng);
    } else {
      q.weights[static_cast<std::size_t>(j)] += sa.weight_sigma_rel * diag * gauss(rng);
    }
  };

  double current = energy(ps);

  double t0 = sa.initial_temperature;
  if (t0 < 0.0) {
    // Calibrate so roughly half of the initial worsening moves are accepted.
    std::vector<double> worsening;
    for (int i = 0; i < 64; ++i) {
      WeightedPointSet q = ps;
      propose(q);
      const double delta = energy(q) - current;
      if (delta > 0.0) worsening.push_back(delta);
    }
    if (worsening.empty()) {
      t0 = 0.0;
    } else {
      std::nth_element(worsening.begin(), worsening.begin() + static_cast<std::ptrdiff_t>(worsening.size() / 2),
                       worsening.end());
      t0 = worsening[worsening.size() / 2] / std::log(2.0);
    }
  }

  RunLog log;
  log.rows.reserve(static_cast<std::size_t>(proposals));
  double temperature = t0;
  for (int it = 0; it < proposals; ++it) {
    WeightedPointSet q = ps;
    propose(q);
    const double candidate = energy(q);
    const double delta = candidate - current;
    const bool accept =
        delta <= 0.0 || (temperature > 0.0 && unit(rng) < std::exp(-delta / temperature));
    if (accept) {
      ps = std::move(q);
      current = candidate;
    }
    IterationRecord row;
    row.iteration = it;
    row.terms.total = current;
    log.rows.push_back(row);
    temperature *= sa.cooling;
  }

  SaResult result;
  result.mesh2d = extract_discrete(ps, inclusion_scores(ps, wdt));
  result.params = std::move(ps);
  result.log = std::move(log);
  return result;
}

}  // namespace dwdt
