#pragma once

// Canned experiment setups: desk-scale 2D tasks on square domains, the
// analytic catenoid, and UV-patch inputs. A Task owns the parameterization,
// fields, and boundary that its OptimizeInputs reference.

#include <memory>
#include <string>

#include "dwdt/io.hpp"
#include "dwdt/optimizer.hpp"

namespace dwdt {

struct Task {
  std::string name;
  WeightedPointSet init;
  OptimizeInputs inputs;
  int iterations = 0;
  int snapshot_every = 0;

  // owned context (inputs.ctx points here)
  std::unique_ptr<Parameterization> param;
  std::unique_ptr<ScalarField2> area_field;
  std::unique_ptr<DirectionField2> dir_field;
  std::unique_ptr<Polygon> boundary;
  std::unique_ptr<UvPatchMesh> patch;

  Task() = default;
  Task(Task&&) = default;
  Task& operator=(Task&&) = default;

  // Field samples at the current vertex positions (metric inputs).
  std::vector<double> targets_at(const WeightedPointSet& ps) const;
  std::vector<Vec3> directions_at(const WeightedPointSet& ps) const;
};

// Uniform-area task on the unit square; A = 1 / (2 n).
Task make_square_size_task(const RunConfig& cfg);

// Vector-field alignment on the unit square (constant 30-degree field).
Task make_square_align_task(const RunConfig& cfg);

// t L_a + (1-t) L_s on a square scaled so both terms have comparable
// magnitude (side chosen so the uniform target area is 0.9).
Task make_blend_task(const RunConfig& cfg);

// Catenoid, either equal triangle sizes or curvature-scaled sizes
// (A proportional to 1/|k| = cosh^2 v).
Task make_catenoid_task(const RunConfig& cfg, bool curvature_sized);

// UV patch from an OBJ file (plus optional sidecar fields); UVs are
// normalized to the unit box on load.
Task make_patch_task(const RunConfig& cfg);

// Dispatch on cfg.task / cfg.input for the CLI.
Task make_task(const RunConfig& cfg);

}  // namespace dwdt
