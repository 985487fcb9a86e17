#pragma once

// The four differentiable objectives and their weighted blending.
//
//   L_s = (1/sum s_{i|j}) sum_{i,j} s_{i|j} (0.5 |(v'_k-v'_j) x (v'_l-v'_j)| - A(v_j))^2
//   L_b = (1/|V|) sum_j exp(eps - min(eps, (v_j - b_j) . n_j))
//   L_a = (1/sum s_{i|j}) sum_{i,j} s_{i|j} |cos(angle_j) - cos(pi/3)|
//   L_c = -(1/sum s_{i|j}) sum_j [ LSE{ C(v_j).h_jm s_{i|j} } + LSE{ -C(v_j).h_jm s_{i|j} } ]
//
// with h_jm = (v'_j - v'_m)/|v'_j - v'_m| over the two edges each adjacent
// candidate triangle contributes at v_j. Size/angle/curvature operate on the
// lifted 3D vertices; the boundary repulsion acts on the 2D positions and
// ignores scores.

#include <memory>

#include "dwdt/gradient.hpp"
#include "dwdt/parameterization.hpp"
#include "dwdt/polygon.hpp"
#include "dwdt/soft_delaunay.hpp"

namespace dwdt {

struct LossConfig {
  double weight_size = 0.0;
  double weight_boundary = 0.0;
  double weight_angle = 0.0;
  double weight_curvature = 0.0;
  double epsilon = 0.01;  // repulsion margin, 2D domain units

  void validate() const;

  // Task presets with the published weights.
  static LossConfig size_task() { return {0.5, 500.0, 1e7, 0.0, 0.01}; }
  static LossConfig curvature_task() { return {0.0, 500.0, 0.0, 1.0, 0.01}; }
  // t * L_a + (1 - t) * L_s (+ boundary repulsion to keep vertices inside)
  static LossConfig blend_task(double t, double boundary_weight = 500.0) {
    return {1.0 - t, boundary_weight, t, 0.0, 0.01};
  }
};

// Everything a loss evaluation needs besides the point set. Pointed-to
// objects must outlive the evaluation.
struct LossContextRefs {
  SoftParams soft;
  const Parameterization* param = nullptr;      // nullptr = planar identity lift
  const ScalarField2* area_field = nullptr;     // required by L_s
  const DirectionField2* dir_field = nullptr;   // required by L_c
  const Polygon* boundary = nullptr;            // required by L_b
  double curvature_adjacency_cutoff = 1e-3;     // s_i cutoff defining N_j
};

struct LossTerms {
  double size = 0.0;
  double boundary = 0.0;
  double angle = 0.0;
  double curvature = 0.0;
  double total = 0.0;
  int isolated_vertices = 0;  // skipped by L_c
  int active_corners = 0;
};

// Tape-side total loss against a precomputed soft triangulation (its
// candidate set and argmin selections are the frozen branches).
ad::Var total_loss_var(ad::Tape& tape, DiffPointSet& dps, const SoftTriangulation& soft,
                       const LossContextRefs& ctx, const LossConfig& cfg,
                       LossTerms* terms_out = nullptr);

// Value-only convenience.
LossTerms evaluate_losses(const WeightedPointSet& ps, const LossContextRefs& ctx,
                          const LossConfig& cfg);

// Expression factory for the gradient engine; recomputes the soft
// triangulation from the current values on every evaluation.
LossExpr make_total_loss_expr(const LossContextRefs& ctx, const LossConfig& cfg);

// Discrete counterparts (scores replaced by hard membership of the given
// mesh); the objective of the simulated-annealing baseline.
double discrete_total_loss(const WeightedPointSet& ps, const DiscreteMesh& mesh,
                           const LossContextRefs& ctx, const LossConfig& cfg);

}  // namespace dwdt
