#pragma once

#include "fraccon/contact.hpp"
#include "fraccon/elasticity.hpp"
#include "fraccon/mesh.hpp"

#include <string>
#include <vector>

namespace fraccon {

struct LinearSolverConfig {
  enum class Kind { Direct, Iterative };
  Kind kind = Kind::Direct;
  int max_iterations = 2000;  // iterative only
  double tolerance = 1e-12;   // iterative only, relative residual of the scaled system
  double accept_absolute = 1e-6;  // ||J dx + R|| below this is accepted whatever ||R|| is
};

struct SolverConfig {
  double newton_tol = 1e-4;  // absolute residual 2-norm
  int max_newton = 50;
  int max_state_loops = 20;
  int n_load_steps = 1;
  LinearSolverConfig linear;
  bool precondition = true;
  StateTolerances state_tol;

  void validate() const;
};

/// Everything that stays fixed over a run: split mesh with pairs, material,
/// boundary conditions, and the cached stiffness matrix.
struct Problem {
  Mesh mesh;
  MaterialParams material;
  FrictionParams friction;
  std::vector<BoundaryCondition> bcs;
  SparseMatrix stiffness;
  std::vector<PathSegment> segments;
  /// Plus-face DOFs whose Dirichlet value is dropped because the same
  /// component is also prescribed on the minus face of that pair; the
  /// contact constraint decides the jump there instead.
  std::vector<int> released_dofs;

  /// Dirichlet set of a load step without the released DOFs.
  DirichletSet dirichlet(int step, int n_steps) const;

  /// `mesh` must already carry contact pairs (see prepare()).
  static Problem create(Mesh mesh, const MaterialParams& material, const FrictionParams& friction,
                        std::vector<BoundaryCondition> bcs, int threads = 1);
};

struct SolutionState {
  Vector U;       // 2 per node
  Vector Lambda;  // (normal, tangential) per pair
  std::vector<PairState> states;
  int step = 0;
  bool converged = false;
  int newton_iters = 0;
  int state_loops = 0;
  double residual_norm = 0.0;
  std::vector<double> residual_history;
  std::string message;

  /// Zero displacements and multipliers, every pair in stick.
  static SolutionState initial(const Mesh& mesh);
};

/// J dx = -R with J = [[K, C], [B, M]] after Dirichlet elimination
/// (identity rows, zero columns). DOFs: displacements, then multipliers.
struct SaddleSystem {
  SparseMatrix J;
  Vector R;
  int n_disp = 0;
  int n_mult = 0;
  std::vector<bool> prescribed;  // per displacement DOF
  ContactBlocks blocks;
  Vector load;  // F at this step

  int size() const { return n_disp + n_mult; }
};

/// Imposes the prescribed displacements of `step` on state.U.
void apply_dirichlet(const Problem& problem, SolutionState& state, int step, int n_steps);

SaddleSystem build_system(const Problem& problem, const SolutionState& state, int step,
                          int n_steps);

/// Left row scaling P = diag(1 / row 2-norm).
struct Preconditioner {
  Vector row_scale;  // entries of P

  Vector apply(const Vector& v) const { return row_scale.cwiseProduct(v); }
};

Preconditioner build_preconditioner(const SaddleSystem& sys);
Preconditioner identity_preconditioner(int size);

/// P * J.
SparseMatrix scaled_matrix(const SparseMatrix& J, const Preconditioner& pc);

struct LinearSolveResult {
  Vector dx;
  double relative_residual = 0.0;  // ||J dx + R|| / ||R||
  int iterations = 0;
};

/// Solves the row-scaled system P J dx = -P R. Throws SolverError.
LinearSolveResult linear_solve(const SaddleSystem& sys, const Preconditioner& pc,
                               const LinearSolverConfig& cfg = {});

/// sigma_max / sigma_min estimated by power iteration on J^T J and its inverse.
double condition_estimate(const SparseMatrix& J, int iterations = 200);

/// Newton iterations with state reclassification for one load step
/// (warm-started from `warm`). Never throws on non-convergence: the returned
/// state carries converged == false and a message.
SolutionState newton_loop(const Problem& problem, const SolverConfig& cfg,
                          const SolutionState& warm, int step = 0, int n_steps = 1);

/// All load steps in sequence; stops after the first failed step.
std::vector<SolutionState> run_load_steps(const Problem& problem, const SolverConfig& cfg);

/// Full displacement residual K U + C Lambda - F (reactions on prescribed DOFs).
Vector displacement_residual(const Problem& problem, const SolutionState& state, int step,
                             int n_steps);

}  // namespace fraccon
