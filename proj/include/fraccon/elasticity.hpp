#pragma once

#include "fraccon/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <optional>
#include <vector>

namespace fraccon {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;
using Matrix3 = Eigen::Matrix3d;
using ElementMatrix = Eigen::Matrix<double, 6, 6>;
using StrainOperator = Eigen::Matrix<double, 3, 6>;

struct MaterialParams {
  double E = 1.0;   // Young's modulus [Pa]
  double nu = 0.0;  // Poisson ratio

  /// Throws ConfigError naming the offending field.
  void validate() const;
  double shear_modulus() const { return E / (2.0 * (1.0 + nu)); }
};

/// Plane-strain elasticity matrix in Voigt order (xx, yy, xy).
Matrix3 plane_strain_D(const MaterialParams& mat);

/// Constant strain operator of a linear triangle; throws on degenerate input.
StrainOperator strain_operator(const Mesh& mesh, const Tri3& elem);

ElementMatrix element_stiffness(const Mesh& mesh, const Tri3& elem, const Matrix3& D);

/// Global stiffness, DOF 2*n + c for node n and component c. Element
/// matrices are computed on `threads` workers and scattered in element order,
/// so the result does not depend on the thread count.
SparseMatrix assemble_stiffness(const Mesh& mesh, const MaterialParams& mat, int threads = 1);

/// Element stress (xx, yy, xy) for the nodal displacement vector U.
Eigen::Vector3d element_stress(const Mesh& mesh, const Tri3& elem, const Matrix3& D,
                               const Vector& U);

enum class BcKind { Dirichlet, Neumann, FractureFacePressure };

enum class BoundarySide { Left, Right, Bottom, Top };

struct BoundaryTarget {
  enum class Type { Nodes, Side, Point, Boundary };
  Type type = Type::Boundary;
  std::vector<int> nodes;            // Type::Nodes (ids of the split mesh)
  BoundarySide side = BoundarySide::Left;  // Type::Side
  Vec2 point{0.0, 0.0};              // Type::Point, nearest node
};

struct BoundaryCondition {
  BcKind kind = BcKind::Dirichlet;
  BoundaryTarget target;
  /// Dirichlet: prescribed components, std::nullopt leaves a component free.
  std::array<std::optional<double>, 2> displacement{};
  /// Neumann: constant traction [Pa], or a uniform stress state whose
  /// traction sigma * n_out is applied on every targeted edge.
  Vec2 traction{0.0, 0.0};
  std::optional<Eigen::Matrix2d> stress;
  /// FractureFacePressure: fracture id and pressure [Pa] pushing the faces apart.
  int fracture = -1;
  double pressure = 0.0;
  /// Per-step load factors; empty means a linear ramp reaching 1 at the last step.
  std::vector<double> ramp;

  double factor(int step, int n_steps) const;
};

/// Prescribed displacement DOFs and their values at one load step.
struct DirichletSet {
  std::vector<int> dofs;
  std::vector<double> values;
};

/// Targeted boundary edges after resolving a BoundaryTarget.
std::vector<BoundaryEdge> resolve_edges(const Mesh& mesh, const BoundaryTarget& target);
std::vector<int> resolve_nodes(const Mesh& mesh, const BoundaryTarget& target);

/// Checks target existence and that no DOF is both prescribed and loaded.
void check_boundary_conditions(const Mesh& mesh, const std::vector<BoundaryCondition>& bcs);

DirichletSet dirichlet_set(const Mesh& mesh, const std::vector<BoundaryCondition>& bcs,
                           int step, int n_steps);

/// Consistent load vector: edge tractions by two-point Gauss quadrature,
/// fracture pressure as +p n on the plus face and -p n on the minus face.
Vector assemble_loads(const Mesh& mesh, const std::vector<BoundaryCondition>& bcs, int step,
                      int n_steps);

/// Same, with every condition scaled by a single factor.
Vector assemble_loads(const Mesh& mesh, const std::vector<BoundaryCondition>& bcs,
                      double step_scale);

}  // namespace fraccon
