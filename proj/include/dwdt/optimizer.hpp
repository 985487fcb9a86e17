#pragma once

// Adam-driven optimization over (V, W) with per-iteration candidate refresh,
// plus the discrete simulated-annealing baseline.

#include <functional>
#include <random>
#include <span>
#include <string>

#include "dwdt/cut.hpp"
#include "dwdt/losses.hpp"

namespace dwdt {

struct AdamParams {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class AdamState {
 public:
  AdamState(int parameter_count, const AdamParams& params);
  // One bias-corrected update, in place.
  void step(std::span<double> parameters, std::span<const double> gradient);
  int step_count() const { return t_; }

 private:
  AdamParams p_;
  std::vector<double> m_, v_;
  int t_ = 0;
};

struct IterationRecord {
  int iteration = 0;
  LossTerms terms;
  int candidates = 0;
  int branch_switches = 0;
};

struct RunLog {
  std::vector<IterationRecord> rows;
  int aborted_at = -1;  // iteration where a non-finite gradient stopped the run
  std::string to_csv() const;
};

struct OptimizeInputs {
  LossContextRefs ctx;
  LossConfig losses;
  AdamParams adam;
};

struct OptimizeResult {
  WeightedPointSet params;
  DiscreteMesh raw2d;   // extraction at threshold 0.5, before the boundary cut
  DiscreteMesh cut2d;   // conformed to the boundary polygon when one is given
  DiscreteMesh mesh3d;  // cut mesh lifted through the parameterization
  RunLog log;
};

// Initial parameters: the patch's UVs as positions, or uniform samples of the
// domain; weights are uniform in [0, 0.05 * domain diagonal].
WeightedPointSet init_from_patch(const UvPatchMesh& mesh, unsigned seed);
WeightedPointSet init_random_in_domain(const Polygon& domain, int n, unsigned seed);

using SnapshotCallback =
    std::function<void(int iteration, const WeightedPointSet&, const DiscreteMesh& extracted)>;

OptimizeResult optimize(WeightedPointSet init, const OptimizeInputs& in, int iterations,
                        int snapshot_every = 0, const SnapshotCallback& on_snapshot = {});

struct SaParams {
  double position_sigma_rel = 0.03;  // vs domain diagonal
  double weight_sigma_rel = 0.03;
  double cooling = 0.999;
  double initial_temperature = -1.0;  // < 0: calibrate for ~50% acceptance
};

struct SaResult {
  WeightedPointSet params;
  DiscreteMesh mesh2d;
  RunLog log;
};

// Single-vertex random perturbations of position or weight, discrete WDT per
// proposal, Metropolis acceptance with geometric cooling on the discrete
// (hard-membership) losses.
SaResult simulated_annealing_baseline(WeightedPointSet init, const OptimizeInputs& in,
                                      int proposals, unsigned seed, SaParams sa = {});

}  // namespace dwdt
