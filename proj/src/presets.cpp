#include "fraccon/cli.hpp"

#include "fraccon/error.hpp"

#include <cmath>
#include <numbers>

namespace fraccon {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

AxisSpec graded(double core, double h, double ratio, int n_grow) {
  AxisSpec a;
  a.kind = AxisSpec::Kind::Graded;
  a.center = 0.0;
  a.core = core;
  a.h = h;
  a.ratio = ratio;
  a.n_grow = n_grow;
  return a;
}

AxisSpec uniform(double lo, double length, int n) {
  AxisSpec a;
  a.kind = AxisSpec::Kind::Uniform;
  a.lo = lo;
  a.length = length;
  a.n = n;
  return a;
}

BoundaryCondition fix(BoundaryTarget target, std::optional<double> ux, std::optional<double> uy) {
  BoundaryCondition bc;
  bc.kind = BcKind::Dirichlet;
  bc.target = std::move(target);
  bc.displacement = {ux, uy};
  return bc;
}

BoundaryTarget point(double x, double y) {
  BoundaryTarget t;
  t.type = BoundaryTarget::Type::Point;
  t.point = {x, y};
  return t;
}

BoundaryTarget side(BoundarySide s) {
  BoundaryTarget t;
  t.type = BoundaryTarget::Type::Side;
  t.side = s;
  return t;
}

BoundaryCondition remote_stress(const Eigen::Matrix2d& sigma) {
  BoundaryCondition bc;
  bc.kind = BcKind::Neumann;
  bc.target.type = BoundaryTarget::Type::Boundary;
  bc.stress = sigma;
  return bc;
}

/// Uniaxial compression of magnitude s along the unit direction at angle theta.
Eigen::Matrix2d uniaxial(double s, double theta) {
  const Vec2 a{std::cos(theta), std::sin(theta)};
  return -s * a * a.transpose();
}

// Rigid-body pins of a symmetric graded square of half width w.
void pin_square(RunConfig& cfg, double w) {
  cfg.bcs.push_back(fix(point(-w, -w), 0.0, 0.0));
  cfg.bcs.push_back(fix(point(w, -w), std::nullopt, 0.0));
}

double graded_half_width(const AxisSpec& a) { return a.build().back(); }

// Square graded grid with a uniform core of spacing h.
GridConfig graded_square(double core, double h, double ratio, int n_grow) {
  GridConfig g;
  g.x = graded(core, h, ratio, n_grow);
  g.y = g.x;
  g.pattern = GridPattern::Diagonal;
  return g;
}

RunConfig inclined_crack() {
  RunConfig cfg;
  cfg.name = "inclined-crack";
  const double l = 1.0;
  const double h = std::numbers::sqrt2 / 20.0;  // 10 diagonal cells per half length
  const double a = l / std::numbers::sqrt2;
  GridConfig g = graded_square(13 * h, h, 1.3, 13);
  g.fractures.push_back({{-a, -a}, {a, a}, 0.0});
  cfg.mesh.grid = g;
  cfg.material = {25e9, 0.25};
  cfg.friction = {0.0, 30.0 * kDeg};
  cfg.bcs.push_back(remote_stress(uniaxial(10e6, 0.0)));
  pin_square(cfg, graded_half_width(g.x));
  cfg.reference.kind = ReferenceSpec::Kind::InclinedSlip;
  cfg.reference.alpha = 45.0 * kDeg;
  cfg.reference.sigma_inf = 10e6;
  cfg.reference.half_length = l;
  return cfg;
}

RunConfig shear_throughgoing() {
  RunConfig cfg;
  cfg.name = "shear-throughgoing";
  GridConfig g;
  g.x = uniform(0.0, 1.0, 20);
  g.y = g.x;
  g.fractures.push_back({{0.0, 0.0}, {1.0, 1.0}, 0.0});
  cfg.mesh.grid = g;
  cfg.material = {5e9, 0.3};
  cfg.friction = {0.0, std::atan(0.1)};
  // lower wedge clamped, upper wedge pushed 0.1 m to the right
  cfg.bcs.push_back(fix(side(BoundarySide::Bottom), 0.0, 0.0));
  cfg.bcs.push_back(fix(side(BoundarySide::Right), 0.0, 0.0));
  cfg.bcs.push_back(fix(side(BoundarySide::Top), 0.1, std::nullopt));
  cfg.bcs.push_back(fix(side(BoundarySide::Left), 0.1, std::nullopt));
  BoundaryCondition load;
  load.kind = BcKind::Neumann;
  load.target = side(BoundarySide::Top);
  load.traction = {0.0, -1e6};
  cfg.bcs.push_back(load);
  cfg.reference.kind = ReferenceSpec::Kind::ConstantSlip;
  return cfg;
}

RunConfig sneddon() {
  RunConfig cfg;
  cfg.name = "sneddon";
  const double h = 0.05;
  GridConfig g = graded_square(1.2, h, 1.3, 18);
  g.fractures.push_back({{-1.0, 0.0}, {1.0, 0.0}, 0.0});
  cfg.mesh.grid = g;
  cfg.material = {25e9, 0.25};
  cfg.friction = {0.0, 30.0 * kDeg};
  BoundaryCondition p;
  p.kind = BcKind::FractureFacePressure;
  p.fracture = 0;
  p.pressure = 10e6;
  cfg.bcs.push_back(p);
  pin_square(cfg, graded_half_width(g.x));
  cfg.reference.kind = ReferenceSpec::Kind::SneddonOpening;
  cfg.reference.half_length = 1.0;
  cfg.reference.pressure = 10e6;
  return cfg;
}

RunConfig crossing_single() {
  RunConfig cfg;
  cfg.name = "crossing-single";
  const double h = 0.05;
  GridConfig g = graded_square(1.2, h, 1.3, 14);
  const double a = 14 * h;  // "/" crack of half length 14 h sqrt 2
  g.fractures.push_back({{-a, -a}, {a, a}, 0.0});
  // off-centre on both cracks, so the two sides of the crossing differ
  g.fractures.push_back({{-1.0, 0.3}, {1.0, 0.3}, 0.0});
  cfg.mesh.grid = g;
  cfg.material = {25e9, 0.25};
  cfg.friction = {0.0, 30.0 * kDeg};
  cfg.bcs.push_back(remote_stress(uniaxial(10e6, 20.0 * kDeg)));
  pin_square(cfg, graded_half_width(g.x));
  return cfg;
}

RunConfig crossing_multi() {
  RunConfig cfg;
  cfg.name = "crossing-multi";
  const double h = 0.05;
  GridConfig g = graded_square(1.2, h, 1.3, 14);
  g.fractures.push_back({{-1.0, 0.3}, {1.0, 0.3}, 0.0});
  g.fractures.push_back({{-0.8, -0.4}, {0.9, -0.4}, 0.0});
  g.fractures.push_back({{0.2, -1.0}, {0.2, 0.9}, 0.0});
  g.fractures.push_back({{-0.9, -0.9}, {0.6, 0.6}, 0.0});
  g.fractures.push_back({{0.1, -0.9}, {0.9, -0.1}, 0.0});
  g.fractures.push_back({{-0.6, -0.2}, {-0.6, 0.8}, 0.0});
  cfg.mesh.grid = g;
  cfg.material = {25e9, 0.25};
  cfg.friction = {0.0, 30.0 * kDeg};
  cfg.bcs.push_back(remote_stress(uniaxial(10e6, 20.0 * kDeg)));
  pin_square(cfg, graded_half_width(g.x));
  return cfg;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"inclined-crack", "shear-throughgoing", "sneddon", "crossing-single", "crossing-multi"};
}

RunConfig preset_config(const std::string& name) {
  RunConfig cfg;
  if (name == "inclined-crack")
    cfg = inclined_crack();
  else if (name == "shear-throughgoing")
    cfg = shear_throughgoing();
  else if (name == "sneddon")
    cfg = sneddon();
  else if (name == "crossing-single")
    cfg = crossing_single();
  else if (name == "crossing-multi")
    cfg = crossing_multi();
  else
    throw ConfigError("unknown preset '" + name + "'");
  cfg.outputs.directory = "out/" + name;
  validate_config(cfg);
  return cfg;
}

RunConfig sif_sweep_config(double ratio, double pressure) {
  RunConfig cfg = inclined_crack();
  cfg.name = "sif-sweep";
  cfg.reference = {};
  cfg.bcs.clear();
  BoundaryCondition p;
  p.kind = BcKind::FractureFacePressure;
  p.fracture = 0;
  p.pressure = pressure;
  cfg.bcs.push_back(p);
  if (ratio > 0.0) cfg.bcs.push_back(remote_stress(uniaxial(ratio * pressure, 0.0)));
  pin_square(cfg, graded_half_width(cfg.mesh.grid->x));
  cfg.outputs.directory = "out/sif-sweep";
  validate_config(cfg);
  return cfg;
}

RunConfig patch_test_config(double traction) {
  RunConfig cfg;
  cfg.name = "patch";
  GridConfig g;
  g.x = uniform(0.0, 2.0, 8);
  g.y = uniform(0.0, 1.0, 5);
  g.pattern = GridPattern::Crossed;
  cfg.mesh.grid = g;
  cfg.material = {10e9, 0.3};
  cfg.bcs.push_back(fix(side(BoundarySide::Left), 0.0, std::nullopt));
  cfg.bcs.push_back(fix(point(0.0, 0.0), std::nullopt, 0.0));
  BoundaryCondition t;
  t.kind = BcKind::Neumann;
  t.target = side(BoundarySide::Right);
  t.traction = {traction, 0.0};
  cfg.bcs.push_back(t);
  cfg.outputs.directory = "out/patch";
  validate_config(cfg);
  return cfg;
}

}  // namespace fraccon
