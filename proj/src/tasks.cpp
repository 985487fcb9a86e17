#include "dwdt/tasks.hpp"

#include <cmath>
#include <numbers>

namespace dwdt {

namespace {

// Target area proportional to 1/|k| on the catenoid, scaled so the expected
// triangle count is 2n: A(u,v) = (2 pi / n) cosh^2(v).
class CatenoidAreaField final : public ScalarField2 {
 public:
  explicit CatenoidAreaField(int n) : scale_(2.0 * std::numbers::pi / n) {}
  double value(const Vec2& uv) const override {
    const double ch = std::cosh(uv.y);
    return scale_ * ch * ch;
  }
  Vec2 gradient(const Vec2& uv) const override {
    return {0.0, scale_ * 2.0 * std::cosh(uv.y) * std::sinh(uv.y)};
  }

 private:
  double scale_;
};

// Minimum-curvature direction on the catenoid: the u parameter lines.
class CatenoidDirectionField final : public DirectionField2 {
 public:
  Vec3 value(const Vec2& uv) const override {
    return {-std::sin(uv.x), std::cos(uv.x), 0.0};
  }
  Mat32 jacobian(const Vec2& uv) const override {
    Mat32 jac;
    jac.col0 = {-std::cos(uv.x), -std::sin(uv.x), 0.0};
    return jac;
  }
};

LossConfig losses_from(const RunConfig& cfg) {
  LossConfig losses;
  losses.weight_size = cfg.weight_size;
  losses.weight_boundary = cfg.weight_boundary;
  losses.weight_angle = cfg.weight_angle;
  losses.weight_curvature = cfg.weight_curvature;
  losses.epsilon = cfg.epsilon;
  return losses;
}

void wire(Task& task, const RunConfig& cfg) {
  task.inputs.ctx.soft.alpha = cfg.alpha;
  task.inputs.ctx.soft.k = cfg.k;
  task.inputs.ctx.soft.threads = cfg.threads;
  task.inputs.ctx.param = task.param.get();
  task.inputs.ctx.area_field = task.area_field.get();
  task.inputs.ctx.dir_field = task.dir_field.get();
  task.inputs.ctx.boundary = task.boundary.get();
  task.inputs.losses = losses_from(cfg);
  task.inputs.adam.learning_rate = cfg.learning_rate;
  task.iterations = cfg.iterations;
  task.snapshot_every = cfg.snapshot_every;
}

}  // namespace

std::vector<double> Task::targets_at(const WeightedPointSet& ps) const {
  std::vector<double> out(static_cast<std::size_t>(ps.size()), 0.0);
  if (area_field)
    for (int j = 0; j < ps.size(); ++j)
      out[static_cast<std::size_t>(j)] = area_field->value(ps.positions[static_cast<std::size_t>(j)]);
  return out;
}

std::vector<Vec3> Task::directions_at(const WeightedPointSet& ps) const {
  std::vector<Vec3> out(static_cast<std::size_t>(ps.size()), Vec3{});
  if (dir_field)
    for (int j = 0; j < ps.size(); ++j)
      out[static_cast<std::size_t>(j)] = dir_field->value(ps.positions[static_cast<std::size_t>(j)]);
  return out;
}

Task make_square_size_task(const RunConfig& cfg) {
  Task task;
  task.name = "square-size";
  task.boundary = std::make_unique<Polygon>(Polygon::rectangle(0, 0, 1, 1));
  task.area_field = std::make_unique<ConstantField>(1.0 / (2.0 * cfg.n_vertices));
  task.init = init_random_in_domain(*task.boundary, cfg.n_vertices, cfg.seed);
  wire(task, cfg);
  return task;
}

Task make_square_align_task(const RunConfig& cfg) {
  Task task;
  task.name = "square-align";
  task.boundary = std::make_unique<Polygon>(Polygon::rectangle(0, 0, 1, 1));
  const double theta = std::numbers::pi / 6.0;
  task.dir_field =
      std::make_unique<ConstantDirectionField>(Vec3{std::cos(theta), std::sin(theta), 0.0});
  task.init = init_random_in_domain(*task.boundary, cfg.n_vertices, cfg.seed);
  wire(task, cfg);
  return task;
}

Task make_blend_task(const RunConfig& cfg) {
  Task task;
  task.name = "blend";
  const double target_area = 0.9;
  const double side = std::sqrt(2.0 * cfg.n_vertices * target_area);
  task.boundary = std::make_unique<Polygon>(Polygon::rectangle(0, 0, side, side));
  task.area_field = std::make_unique<ConstantField>(target_area);
  task.init = init_random_in_domain(*task.boundary, cfg.n_vertices, cfg.seed);
  wire(task, cfg);
  return task;
}

Task make_catenoid_task(const RunConfig& cfg, bool curvature_sized) {
  Task task;
  task.name = curvature_sized ? "catenoid-curvature" : "catenoid-equal";
  auto surface = std::make_unique<CatenoidSurface>();
  task.boundary = std::make_unique<Polygon>(surface->domain_boundary());
  if (curvature_sized) {
    task.area_field = std::make_unique<CatenoidAreaField>(cfg.n_vertices);
  } else {
    // surface area / (2 n); area of the catenoid band v in [-1,1] is
    // 2 pi (1 + sinh(2)/2)
    const double area = 2.0 * std::numbers::pi * (1.0 + 0.5 * std::sinh(2.0));
    task.area_field = std::make_unique<ConstantField>(area / (2.0 * cfg.n_vertices));
  }
  task.dir_field = std::make_unique<CatenoidDirectionField>();
  task.init = init_random_in_domain(*task.boundary, cfg.n_vertices, cfg.seed);
  task.param = std::move(surface);
  wire(task, cfg);
  return task;
}

Task make_patch_task(const RunConfig& cfg) {
  Task task;
  task.name = "patch";
  task.patch = std::make_unique<UvPatchMesh>(read_obj_patch(cfg.input));
  task.patch->normalize_uv();
  if (!cfg.fields.empty()) {
    const FieldTable fields = read_fields(cfg.fields, task.patch->vertex_count());
    if (fields.has_area()) task.patch->target_area = fields.area;
    if (fields.has_direction()) task.patch->direction = fields.direction;
    if (fields.has_magnitudes()) {
      task.patch->k1 = fields.k1;
      task.patch->k2 = fields.k2;
    }
  }
  auto par = std::make_unique<UvPatchParameterization>(*task.patch);
  task.boundary = std::make_unique<Polygon>(par->domain_boundary());
  if (task.patch->has_area_field()) {
    task.area_field = std::make_unique<UvMeshScalarField>(*par);
  } else {
    // uniform target from the patch's 3D area
    double area = 0.0;
    for (const Face& f : task.patch->faces) {
      const Vec3& a = task.patch->positions[static_cast<std::size_t>(f[0])];
      const Vec3& b = task.patch->positions[static_cast<std::size_t>(f[1])];
      const Vec3& c = task.patch->positions[static_cast<std::size_t>(f[2])];
      area += 0.5 * norm(cross(b - a, c - a));
    }
    task.area_field = std::make_unique<ConstantField>(area / (2.0 * task.patch->vertex_count()));
  }
  if (task.patch->has_direction_field())
    task.dir_field = std::make_unique<UvMeshDirectionField>(*par);
  task.init = init_from_patch(*task.patch, cfg.seed);
  task.param = std::move(par);
  wire(task, cfg);
  return task;
}

Task make_task(const RunConfig& cfg) {
  if (!cfg.input.empty()) return make_patch_task(cfg);
  if (cfg.task == "size") return make_square_size_task(cfg);
  if (cfg.task == "align") return make_square_align_task(cfg);
  if (cfg.task == "blend") return make_blend_task(cfg);
  throw ValidationError("task '" + cfg.task + "' needs --input (custom tasks run on patches)");
}

}  // namespace dwdt
