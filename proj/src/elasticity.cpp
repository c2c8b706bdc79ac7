#include "fraccon/elasticity.hpp"

#include "fraccon/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <thread>

namespace fraccon {

void MaterialParams::validate() const {
  if (!(E > 0.0)) throw ConfigError("material.E must be positive");
  if (!(nu >= 0.0 && nu < 0.5)) throw ConfigError("material.nu must satisfy 0 <= nu < 0.5");
}

Matrix3 plane_strain_D(const MaterialParams& mat) {
  mat.validate();
  const double f = mat.E / ((1.0 + mat.nu) * (1.0 - 2.0 * mat.nu));
  Matrix3 D;
  D << 1.0 - mat.nu, mat.nu, 0.0,
       mat.nu, 1.0 - mat.nu, 0.0,
       0.0, 0.0, 0.5 * (1.0 - 2.0 * mat.nu);
  return f * D;
}

StrainOperator strain_operator(const Mesh& mesh, const Tri3& elem) {
  const double area = signed_area(mesh, elem);
  if (area < kAreaTolerance)
    throw MeshError("degenerate element " + std::to_string(elem.id));
  StrainOperator B = StrainOperator::Zero();
  for (int i = 0; i < 3; ++i) {
    const Vec2 pj = mesh.pos(elem.nodes[static_cast<std::size_t>((i + 1) % 3)]);
    const Vec2 pk = mesh.pos(elem.nodes[static_cast<std::size_t>((i + 2) % 3)]);
    const double b = (pj.y() - pk.y()) / (2.0 * area);
    const double c = (pk.x() - pj.x()) / (2.0 * area);
    B(0, 2 * i) = b;
    B(1, 2 * i + 1) = c;
    B(2, 2 * i) = c;
    B(2, 2 * i + 1) = b;
  }
  return B;
}

ElementMatrix element_stiffness(const Mesh& mesh, const Tri3& elem, const Matrix3& D) {
  const StrainOperator B = strain_operator(mesh, elem);
  return signed_area(mesh, elem) * B.transpose() * D * B;
}

SparseMatrix assemble_stiffness(const Mesh& mesh, const MaterialParams& mat, int threads) {
  const Matrix3 D = plane_strain_D(mat);
  const std::size_t n_elem = mesh.elements.size();
  std::vector<ElementMatrix> ke(n_elem);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) ke[e] = element_stiffness(mesh, mesh.elements[e], D);
  };
  const auto n_workers = static_cast<std::size_t>(std::max(1, threads));
  if (n_workers == 1 || n_elem < 2 * n_workers) {
    work(0, n_elem);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n_elem + n_workers - 1) / n_workers;
    for (std::size_t w = 0; w < n_workers; ++w)
      pool.emplace_back(work, std::min(n_elem, w * chunk), std::min(n_elem, (w + 1) * chunk));
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(36 * n_elem);
  for (std::size_t e = 0; e < n_elem; ++e) {
    const auto& nodes = mesh.elements[e].nodes;
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        triplets.emplace_back(2 * nodes[static_cast<std::size_t>(a / 2)] + a % 2,
                              2 * nodes[static_cast<std::size_t>(b / 2)] + b % 2, ke[e](a, b));
  }
  SparseMatrix K(2 * mesh.n_node(), 2 * mesh.n_node());
  K.setFromTriplets(triplets.begin(), triplets.end());
  return K;
}

Eigen::Vector3d element_stress(const Mesh& mesh, const Tri3& elem, const Matrix3& D,
                               const Vector& U) {
  Eigen::Matrix<double, 6, 1> ue;
  for (int a = 0; a < 3; ++a) {
    ue(2 * a) = U(2 * elem.nodes[static_cast<std::size_t>(a)]);
    ue(2 * a + 1) = U(2 * elem.nodes[static_cast<std::size_t>(a)] + 1);
  }
  return D * strain_operator(mesh, elem) * ue;
}

double BoundaryCondition::factor(int step, int n_steps) const {
  if (ramp.empty()) return static_cast<double>(step + 1) / n_steps;
  if (static_cast<int>(ramp.size()) != n_steps)
    throw ConfigError("ramp has " + std::to_string(ramp.size()) + " factors for " +
                      std::to_string(n_steps) + " load steps");
  return ramp[static_cast<std::size_t>(step)];
}

namespace {

struct Box {
  double xmin, xmax, ymin, ymax, tol;
};

Box bounding_box(const Mesh& mesh) {
  Box b{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest(),
        std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest(), 0.0};
  for (const auto& n : mesh.nodes) {
    b.xmin = std::min(b.xmin, n.x);
    b.xmax = std::max(b.xmax, n.x);
    b.ymin = std::min(b.ymin, n.y);
    b.ymax = std::max(b.ymax, n.y);
  }
  b.tol = 1e-9 * std::hypot(b.xmax - b.xmin, b.ymax - b.ymin);
  return b;
}

bool on_side(const Box& box, BoundarySide side, const Vec2& p) {
  switch (side) {
    case BoundarySide::Left: return std::abs(p.x() - box.xmin) <= box.tol;
    case BoundarySide::Right: return std::abs(p.x() - box.xmax) <= box.tol;
    case BoundarySide::Bottom: return std::abs(p.y() - box.ymin) <= box.tol;
    case BoundarySide::Top: return std::abs(p.y() - box.ymax) <= box.tol;
  }
  return false;
}

Vec2 outward_normal(const Mesh& mesh, const BoundaryEdge& e) {
  const Vec2 d = mesh.pos(e.b) - mesh.pos(e.a);
  return Vec2{d.y(), -d.x()}.normalized();
}

Vec2 edge_traction(const Mesh& mesh, const BoundaryCondition& bc, const BoundaryEdge& e) {
  if (bc.stress) return *bc.stress * outward_normal(mesh, e);
  return bc.traction;
}

Vector loads_with(const Mesh& mesh, const std::vector<BoundaryCondition>& bcs,
                  const std::function<double(const BoundaryCondition&)>& scale) {
  Vector F = Vector::Zero(2 * mesh.n_node());
  const double gp = 1.0 / std::sqrt(3.0);
  const std::array<double, 2> xi{0.5 * (1.0 - gp), 0.5 * (1.0 + gp)};

  auto add_segment = [&](int na, int nb, const Vec2& t, double length) {
    for (double s : xi) {
      const double w = 0.5 * length;
      F.segment<2>(2 * na) += w * (1.0 - s) * t;
      F.segment<2>(2 * nb) += w * s * t;
    }
  };

  std::vector<PathSegment> segments;
  for (const auto& bc : bcs) {
    const double f = scale(bc);
    if (bc.kind == BcKind::Neumann) {
      for (const auto& e : resolve_edges(mesh, bc.target)) {
        const double length = (mesh.pos(e.b) - mesh.pos(e.a)).norm();
        add_segment(e.a, e.b, f * edge_traction(mesh, bc, e), length);
      }
    } else if (bc.kind == BcKind::FractureFacePressure) {
      if (bc.fracture < 0 || bc.fracture >= mesh.n_frac())
        throw ConfigError("pressure targets missing fracture " + std::to_string(bc.fracture));
      if (segments.empty()) segments = segment_table(mesh);
      const auto& path = mesh.fractures[static_cast<std::size_t>(bc.fracture)];
      std::size_t k = 0;
      for (const auto& s : segments) {
        if (s.fracture != bc.fracture) continue;
        const int tip_a = path.nodes[k];
        const int tip_b = path.nodes[k + 1];
        ++k;
        auto plus = [&](int pair, int tip) {
          return pair < 0 ? tip : mesh.pairs[static_cast<std::size_t>(pair)].node_plus;
        };
        auto minus = [&](int pair, int tip) {
          return pair < 0 ? tip : mesh.pairs[static_cast<std::size_t>(pair)].node_minus;
        };
        const Vec2 d = (s.b - s.a).normalized();
        const Vec2 n{-d.y(), d.x()};
        const Vec2 t = f * bc.pressure * n;
        add_segment(plus(s.pair_a, tip_a), plus(s.pair_b, tip_b), t, s.length());
        add_segment(minus(s.pair_a, tip_a), minus(s.pair_b, tip_b), -t, s.length());
      }
    }
  }
  return F;
}

}  // namespace

std::vector<BoundaryEdge> resolve_edges(const Mesh& mesh, const BoundaryTarget& target) {
  auto edges = external_boundary(mesh);
  if (target.type == BoundaryTarget::Type::Boundary) return edges;
  if (target.type != BoundaryTarget::Type::Side)
    throw ConfigError("traction targets must be boundary edges (a side or the whole boundary)");
  const Box box = bounding_box(mesh);
  std::vector<BoundaryEdge> out;
  for (const auto& e : edges)
    if (on_side(box, target.side, mesh.pos(e.a)) && on_side(box, target.side, mesh.pos(e.b)))
      out.push_back(e);
  if (out.empty()) throw ConfigError("boundary side has no edges");
  return out;
}

std::vector<int> resolve_nodes(const Mesh& mesh, const BoundaryTarget& target) {
  switch (target.type) {
    case BoundaryTarget::Type::Nodes:
      for (int n : target.nodes)
        if (n < 0 || n >= mesh.n_node())
          throw ConfigError("boundary condition references missing node " + std::to_string(n));
      return target.nodes;
    case BoundaryTarget::Type::Point: {
      int best = -1;
      double best_d = std::numeric_limits<double>::max();
      for (const auto& n : mesh.nodes) {
        const double d = (n.pos() - target.point).norm();
        if (d < best_d) best_d = d, best = n.id;
      }
      if (best < 0) throw ConfigError("mesh has no nodes");
      return {best};
    }
    case BoundaryTarget::Type::Side:
    case BoundaryTarget::Type::Boundary: {
      std::set<int> nodes;
      for (const auto& e : resolve_edges(mesh, target)) nodes.insert({e.a, e.b});
      return {nodes.begin(), nodes.end()};
    }
  }
  return {};
}

void check_boundary_conditions(const Mesh& mesh, const std::vector<BoundaryCondition>& bcs) {
  std::map<int, std::array<bool, 2>> fixed;  // dof components prescribed per node
  std::set<std::pair<int, int>> fixed_edges[2];
  for (const auto& bc : bcs) {
    if (bc.kind != BcKind::Dirichlet) continue;
    const auto nodes = resolve_nodes(mesh, bc.target);
    if (nodes.empty()) throw ConfigError("Dirichlet condition has an empty target");
    const bool edge_target = bc.target.type == BoundaryTarget::Type::Side ||
                             bc.target.type == BoundaryTarget::Type::Boundary;
    for (int c = 0; c < 2; ++c) {
      if (!bc.displacement[static_cast<std::size_t>(c)]) continue;
      if (edge_target)
        for (const auto& e : resolve_edges(mesh, bc.target))
          fixed_edges[c].insert({std::min(e.a, e.b), std::max(e.a, e.b)});
    }
  }
  for (const auto& bc : bcs) {
    if (bc.kind == BcKind::FractureFacePressure) {
      if (bc.fracture < 0 || bc.fracture >= mesh.n_frac())
        throw ConfigError("pressure targets missing fracture " + std::to_string(bc.fracture));
      continue;
    }
    if (bc.kind != BcKind::Neumann) continue;
    for (const auto& e : resolve_edges(mesh, bc.target)) {
      const Vec2 t = edge_traction(mesh, bc, e);
      for (int c = 0; c < 2; ++c)
        if (t(c) != 0.0 && fixed_edges[c].contains({std::min(e.a, e.b), std::max(e.a, e.b)}))
          throw ConfigError("boundary edge " + std::to_string(e.a) + "-" + std::to_string(e.b) +
                            " has both a prescribed displacement and a traction in component " +
                            std::to_string(c));
    }
  }
}

DirichletSet dirichlet_set(const Mesh& mesh, const std::vector<BoundaryCondition>& bcs, int step,
                           int n_steps) {
  std::map<int, double> prescribed;
  for (const auto& bc : bcs) {
    if (bc.kind != BcKind::Dirichlet) continue;
    const double f = bc.factor(step, n_steps);
    for (int n : resolve_nodes(mesh, bc.target))
      for (int c = 0; c < 2; ++c)
        if (const auto& v = bc.displacement[static_cast<std::size_t>(c)]) prescribed[2 * n + c] = f * *v;
  }
  DirichletSet set;
  for (const auto& [dof, value] : prescribed) {
    set.dofs.push_back(dof);
    set.values.push_back(value);
  }
  return set;
}

Vector assemble_loads(const Mesh& mesh, const std::vector<BoundaryCondition>& bcs, int step,
                      int n_steps) {
  return loads_with(mesh, bcs, [&](const BoundaryCondition& bc) { return bc.factor(step, n_steps); });
}

Vector assemble_loads(const Mesh& mesh, const std::vector<BoundaryCondition>& bcs,
                      double step_scale) {
  return loads_with(mesh, bcs, [&](const BoundaryCondition&) { return step_scale; });
}

}  // namespace fraccon
