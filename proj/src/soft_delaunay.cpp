#include "dwdt/soft_delaunay.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <thread>

#include "dwdt/oracle.hpp"

namespace dwdt {

std::vector<CandidateTriangle> enumerate_candidates(const WeightedPointSet& ps,
                                                    const NeighborTable& nt,
                                                    double collinear_tol,
                                                    int* dropped_degenerate_out) {
  const int n = ps.size();
  const std::size_t words = static_cast<std::size_t>((n + 63) / 64);

  // mutual[j] bit m set iff m in kNN(j) and j in kNN(m)
  std::vector<std::uint64_t> directed(static_cast<std::size_t>(n) * words, 0);
  auto bit_set = [&](std::vector<std::uint64_t>& bits, int row, int col) {
    bits[static_cast<std::size_t>(row) * words + static_cast<std::size_t>(col >> 6)] |=
        (std::uint64_t{1} << (col & 63));
  };
  auto bit_get = [&](const std::vector<std::uint64_t>& bits, int row, int col) {
    return (bits[static_cast<std::size_t>(row) * words + static_cast<std::size_t>(col >> 6)] >>
            (col & 63)) & 1u;
  };
  for (int j = 0; j < n; ++j)
    for (int m : nt.neighbors[static_cast<std::size_t>(j)]) bit_set(directed, j, m);
  std::vector<std::uint64_t> mutual(directed.size(), 0);
  for (int j = 0; j < n; ++j)
    for (int m : nt.neighbors[static_cast<std::size_t>(j)])
      if (bit_get(directed, m, j)) bit_set(mutual, j, m);

  std::vector<CandidateTriangle> out;
  int dropped = 0;
  std::vector<std::uint64_t> common(words);
  for (int j = 0; j < n; ++j) {
    const std::uint64_t* row_j = mutual.data() + static_cast<std::size_t>(j) * words;
    for (int k : nt.neighbors[static_cast<std::size_t>(j)]) {
      if (k <= j || !bit_get(mutual, j, k)) continue;
      const std::uint64_t* row_k = mutual.data() + static_cast<std::size_t>(k) * words;
      for (std::size_t w = 0; w < words; ++w) common[w] = row_j[w] & row_k[w];
      // restrict to l > k
      const std::size_t wk = static_cast<std::size_t>(k >> 6);
      for (std::size_t w = 0; w < wk; ++w) common[w] = 0;
      common[wk] &= ~((std::uint64_t{2} << (k & 63)) - 1);
      for (std::size_t w = wk; w < words; ++w) {
        std::uint64_t bitsword = common[w];
        while (bitsword) {
          const int l = static_cast<int>(w * 64 + static_cast<std::size_t>(std::countr_zero(bitsword)));
          bitsword &= bitsword - 1;
          const Vec2 ejk = ps.positions[static_cast<std::size_t>(k)] - ps.positions[static_cast<std::size_t>(j)];
          const Vec2 ejl = ps.positions[static_cast<std::size_t>(l)] - ps.positions[static_cast<std::size_t>(j)];
          if (std::abs(cross(ejk, ejl)) <= collinear_tol) {
            ++dropped;
            continue;
          }
          out.push_back(CandidateTriangle{{j, k, l}});
        }
      }
    }
  }
  // (j,k) pairs were taken from the neighbor list, which is distance-sorted;
  // restore index order.
  std::sort(out.begin(), out.end(), [](const CandidateTriangle& a, const CandidateTriangle& b) {
    return a.v < b.v;
  });
  if (dropped_degenerate_out) *dropped_degenerate_out = dropped;
  return out;
}

namespace {

// Min over the exclusion list of bisector signed distances from c. Fills
// best/second/argmin; early_exit_floor < 0 allows abandoning the scan once
// the min is below it (the caller clamps there).
struct CornerScan {
  double best;
  double second;
  int argmin;
};

CornerScan scan_corner(const WeightedPointSet& ps, const NeighborTable& nt,
                       const Vec2& c, int corner, int other0, int other1,
                       double early_exit_floor, bool exact) {
  CornerScan scan{SoftParams::kEmptyCellSentinel, SoftParams::kEmptyCellSentinel, -1};
  const Vec2 vc = ps.positions[static_cast<std::size_t>(corner)];
  const double wc = ps.weights[static_cast<std::size_t>(corner)];
  bool any = false;
  for (int m : nt.neighbors[static_cast<std::size_t>(corner)]) {
    if (m == other0 || m == other1) continue;
    const Bisector b = power_bisector(vc, wc, ps.positions[static_cast<std::size_t>(m)],
                                      ps.weights[static_cast<std::size_t>(m)], corner, m);
    const double d = signed_bisector_distance(c, b);
    if (!any) {
      scan.best = d;
      scan.argmin = m;
      scan.second = SoftParams::kEmptyCellSentinel;
      any = true;
    } else if (d < scan.best) {
      scan.second = scan.best;
      scan.best = d;
      scan.argmin = m;
    } else if (d < scan.second) {
      scan.second = d;
    }
    if (!exact && scan.best < early_exit_floor) break;
  }
  return scan;
}

double score_floor(const SoftParams& p, double scale) {
  return -std::max(0.08 * scale, 40.0 / p.alpha);
}

}  // namespace

double reduced_cell_signed_distance(const WeightedPointSet& ps,
                                    const NeighborTable& nt,
                                    const CandidateTriangle& tri,
                                    int corner_vertex, int* argmin_out,
                                    double* runner_up_out) {
  int slot = -1;
  for (int t = 0; t < 3; ++t)
    if (tri.v[static_cast<std::size_t>(t)] == corner_vertex) slot = t;
  if (slot < 0) throw ValidationError("reduced_cell_signed_distance: corner not in triangle");
  const double scale = ps.bbox_diagonal();
  const Vec2 c = weighted_circumcenter(
      ps.positions[static_cast<std::size_t>(tri.v[0])], ps.weights[static_cast<std::size_t>(tri.v[0])],
      ps.positions[static_cast<std::size_t>(tri.v[1])], ps.weights[static_cast<std::size_t>(tri.v[1])],
      ps.positions[static_cast<std::size_t>(tri.v[2])], ps.weights[static_cast<std::size_t>(tri.v[2])],
      1e-10 * scale * scale);
  const int o0 = tri.v[static_cast<std::size_t>((slot + 1) % 3)];
  const int o1 = tri.v[static_cast<std::size_t>((slot + 2) % 3)];
  const CornerScan scan = scan_corner(ps, nt, c, corner_vertex, o0, o1, 0.0, true);
  if (argmin_out) *argmin_out = scan.argmin;
  if (runner_up_out) *runner_up_out = scan.second;
  return scan.best;
}

SoftTriangulation inclusion_scores(const WeightedPointSet& ps, const SoftParams& params) {
  if (ps.size() < 3) throw ValidationError("inclusion_scores: need n >= 3");
  if (!(params.alpha > 0.0)) throw ValidationError("inclusion_scores: alpha must be > 0");
  for (const Vec2& p : ps.positions)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw ValidationError("inclusion_scores: non-finite position");

  SoftTriangulation soft;
  soft.params = params;
  const double scale = ps.bbox_diagonal();
  soft.distance_floor = score_floor(params, scale);
  const int k_eff = std::min(params.k, ps.size() - 1);
  soft.neighbors = knn(ps.positions, k_eff);
  soft.candidates = enumerate_candidates(ps, soft.neighbors,
                                         params.collinear_rel_tol * scale * scale,
                                         &soft.dropped_degenerate);

  const std::size_t m = soft.candidates.size();
  soft.corners.resize(m);
  soft.tri_score.resize(m);
  soft.circumcenters.resize(m);

  auto score_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const CandidateTriangle& tri = soft.candidates[i];
      const Vec2 c = weighted_circumcenter(
          ps.positions[static_cast<std::size_t>(tri.v[0])], ps.weights[static_cast<std::size_t>(tri.v[0])],
          ps.positions[static_cast<std::size_t>(tri.v[1])], ps.weights[static_cast<std::size_t>(tri.v[1])],
          ps.positions[static_cast<std::size_t>(tri.v[2])], ps.weights[static_cast<std::size_t>(tri.v[2])]);
      soft.circumcenters[i] = c;
      double sum = 0.0;
      for (int t = 0; t < 3; ++t) {
        const int corner = tri.v[static_cast<std::size_t>(t)];
        const int o0 = tri.v[static_cast<std::size_t>((t + 1) % 3)];
        const int o1 = tri.v[static_cast<std::size_t>((t + 2) % 3)];
        CornerScan scan =
            scan_corner(ps, soft.neighbors, c, corner, o0, o1, soft.distance_floor, false);
        CornerScore& cs = soft.corners[i][static_cast<std::size_t>(t)];
        cs.dist = std::max(scan.best, soft.distance_floor);
        cs.argmin = scan.argmin;
        cs.runner_up = scan.second;
        cs.score = ad::sigmoid(params.alpha * cs.dist);
        sum += cs.score;
      }
      soft.tri_score[i] = sum / 3.0;
    }
  };

  const int threads = std::max(1, params.threads);
  if (threads == 1 || m < 4096) {
    score_range(0, m);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (m + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
    for (int t = 0; t < threads; ++t) {
      const std::size_t b = static_cast<std::size_t>(t) * chunk;
      if (b >= m) break;
      pool.emplace_back(score_range, b, std::min(m, b + chunk));
    }
    for (std::thread& th : pool) th.join();
  }
  return soft;
}

DiscreteMesh extract_discrete(const WeightedPointSet& ps, const SoftTriangulation& soft,
                              double threshold) {
  DiscreteMesh mesh = DiscreteMesh::from_2d(ps.positions);
  for (int i = 0; i < soft.count(); ++i) {
    const double s = soft.tri_score[static_cast<std::size_t>(i)];
    bool keep = s > threshold;
    if (s == threshold)
      keep = power_test(ps, soft.candidates[static_cast<std::size_t>(i)].v[0],
                        soft.candidates[static_cast<std::size_t>(i)].v[1],
                        soft.candidates[static_cast<std::size_t>(i)].v[2]);
    if (!keep) continue;
    Face f = {soft.candidates[static_cast<std::size_t>(i)].v[0],
              soft.candidates[static_cast<std::size_t>(i)].v[1],
              soft.candidates[static_cast<std::size_t>(i)].v[2]};
    if (cross(ps.positions[static_cast<std::size_t>(f[1])] - ps.positions[static_cast<std::size_t>(f[0])],
              ps.positions[static_cast<std::size_t>(f[2])] - ps.positions[static_cast<std::size_t>(f[0])]) < 0.0)
      std::swap(f[1], f[2]);
    mesh.faces.push_back(f);
  }
  mesh.recompute_used();
  return mesh;
}

}  // namespace dwdt
