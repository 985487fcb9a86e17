#pragma once

// Soft weighted Delaunay triangulation.
//
// Candidate triangles are the triples whose vertices are pairwise within each
// other's k-nearest neighbors. For a candidate t_i = (j,k,l) with weighted
// circumcenter c_i, each corner gets an inclusion score
//
//     s_{i|j} = sigmoid(alpha * d(c_i, a_{j|i}))
//
// where d is the signed distance from c_i to the boundary of the corner's
// reduced weighted Voronoi cell (the cell computed while ignoring the other
// two corners; positive inside). The triangle score s_i is the average of its
// three corner scores; thresholding s_i at 0.5 recovers the discrete WDT.
//
// d is computed as the minimum over the corner's exclusion list of signed
// distances to the pairwise power bisectors. The min is exact inside the
// (convex) cell and sign-preserving outside, which is what the 0.5 crossing
// requires; the argmin is frozen per evaluation for differentiation.

#include <array>
#include <vector>

#include "dwdt/geometry.hpp"
#include "dwdt/mesh.hpp"

namespace dwdt {

struct SoftParams {
  double alpha = 1000.0;  // sigmoid sharpness
  int k = 80;             // kNN candidate pruning, clamped to n-1
  int threads = 1;        // workers for candidate scoring
  double collinear_rel_tol = 1e-10;  // vs (bbox diagonal)^2

  // Distance sentinel when a corner has an empty exclusion list (n = 3):
  // the score saturates to 1.
  static constexpr double kEmptyCellSentinel = 1e6;
};

struct CandidateTriangle {
  std::array<int, 3> v;  // ascending
};

struct CornerScore {
  double dist = 0.0;       // signed distance, clamped below at the floor
  double score = 0.0;      // sigmoid(alpha * dist)
  int argmin = -1;         // competitor realizing the min; -1 = sentinel
  double runner_up = 0.0;  // second-best distance (transition diagnostics)
};

struct SoftTriangulation {
  SoftParams params;
  double distance_floor = 0.0;  // scores below sigmoid(alpha*floor) clamp here
  NeighborTable neighbors;
  std::vector<CandidateTriangle> candidates;  // sorted by (v0,v1,v2)
  std::vector<std::array<CornerScore, 3>> corners;
  std::vector<double> tri_score;  // s_i = mean of corner scores, exactly
  std::vector<Vec2> circumcenters;
  int dropped_degenerate = 0;

  int count() const { return static_cast<int>(candidates.size()); }

  // A corner enters losses and the gradient tape only when its score is
  // numerically relevant; everything below sigmoid(-36) ~ 2e-16 is not.
  double active_cutoff() const { return -36.0 / params.alpha; }
  bool corner_active(int i, int t) const {
    return corners[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)].dist > active_cutoff();
  }
};

// Every triple pairwise within each other's kNN lists, ascending, with
// collinear triples (|cross| <= tol) dropped and counted.
std::vector<CandidateTriangle> enumerate_candidates(const WeightedPointSet& ps,
                                                    const NeighborTable& nt,
                                                    double collinear_tol,
                                                    int* dropped_degenerate_out = nullptr);

// Exact signed distance from the candidate's weighted circumcenter to the
// reduced-cell boundary at the given corner vertex (one of tri.v). No
// clamping; optional argmin/runner-up output.
double reduced_cell_signed_distance(const WeightedPointSet& ps,
                                    const NeighborTable& nt,
                                    const CandidateTriangle& tri,
                                    int corner_vertex, int* argmin_out = nullptr,
                                    double* runner_up_out = nullptr);

// Full soft triangulation of the point set.
SoftTriangulation inclusion_scores(const WeightedPointSet& ps,
                                   const SoftParams& params);

// Faces with s_i strictly above the threshold, CCW. Scores exactly at the
// threshold (measure zero) are resolved by the discrete power test.
DiscreteMesh extract_discrete(const WeightedPointSet& ps,
                              const SoftTriangulation& soft,
                              double threshold = 0.5);

}  // namespace dwdt
