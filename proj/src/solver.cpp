#include "fraccon/solver.hpp"

#include "fraccon/error.hpp"

#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

namespace fraccon {

void SolverConfig::validate() const {
  if (!(newton_tol > 0.0)) throw ConfigError("solver.tolerance must be positive");
  if (max_newton < 1) throw ConfigError("solver.max_newton must be at least 1");
  if (max_state_loops < 1) throw ConfigError("solver.max_state_loops must be at least 1");
  if (n_load_steps < 1) throw ConfigError("solver.load_steps must be at least 1");
  if (linear.kind == LinearSolverConfig::Kind::Iterative &&
      (linear.max_iterations < 1 || !(linear.tolerance > 0.0)))
    throw ConfigError("solver.linear_solver iterative settings must be positive");
}

Problem Problem::create(Mesh mesh, const MaterialParams& material, const FrictionParams& friction,
                        std::vector<BoundaryCondition> bcs, int threads) {
  material.validate();
  friction.validate();
  if (!mesh.is_split) throw MeshError("problem needs a split mesh with contact pairs");
  check_boundary_conditions(mesh, bcs);
  Problem p;
  p.stiffness = assemble_stiffness(mesh, material, threads);
  p.segments = segment_table(mesh);
  {
    std::set<int> fixed;
    for (int dof : dirichlet_set(mesh, bcs, 0, 1).dofs) fixed.insert(dof);
    for (const auto& pair : mesh.pairs)
      for (int c = 0; c < 2; ++c)
        if (fixed.contains(2 * pair.node_plus + c) && fixed.contains(2 * pair.node_minus + c))
          p.released_dofs.push_back(2 * pair.node_plus + c);
    std::sort(p.released_dofs.begin(), p.released_dofs.end());
    p.released_dofs.erase(std::unique(p.released_dofs.begin(), p.released_dofs.end()),
                          p.released_dofs.end());
  }
  p.mesh = std::move(mesh);
  p.material = material;
  p.friction = friction;
  p.bcs = std::move(bcs);
  return p;
}

DirichletSet Problem::dirichlet(int step, int n_steps) const {
  const auto all = dirichlet_set(mesh, bcs, step, n_steps);
  DirichletSet out;
  for (std::size_t i = 0; i < all.dofs.size(); ++i) {
    if (std::binary_search(released_dofs.begin(), released_dofs.end(), all.dofs[i])) continue;
    out.dofs.push_back(all.dofs[i]);
    out.values.push_back(all.values[i]);
  }
  return out;
}

SolutionState SolutionState::initial(const Mesh& mesh) {
  SolutionState s;
  s.U = Vector::Zero(2 * mesh.n_node());
  s.Lambda = Vector::Zero(2 * mesh.n_pair());
  s.states.assign(static_cast<std::size_t>(mesh.n_pair()), PairState::stick());
  return s;
}

void apply_dirichlet(const Problem& problem, SolutionState& state, int step, int n_steps) {
  const auto dir = problem.dirichlet(step, n_steps);
  for (std::size_t i = 0; i < dir.dofs.size(); ++i) state.U(dir.dofs[i]) = dir.values[i];
}

Vector displacement_residual(const Problem& problem, const SolutionState& state, int step,
                             int n_steps) {
  const auto blocks =
      assemble_contact_blocks(problem.mesh, state.states, problem.friction, problem.segments);
  return problem.stiffness * state.U + blocks.coupling * state.Lambda -
         assemble_loads(problem.mesh, problem.bcs, step, n_steps);
}

SaddleSystem build_system(const Problem& problem, const SolutionState& state, int step,
                          int n_steps) {
  SaddleSystem sys;
  sys.n_disp = 2 * problem.mesh.n_node();
  sys.n_mult = 2 * problem.mesh.n_pair();
  sys.blocks = assemble_contact_blocks(problem.mesh, state.states, problem.friction, problem.segments);
  sys.load = assemble_loads(problem.mesh, problem.bcs, step, n_steps);
  sys.prescribed.assign(static_cast<std::size_t>(sys.n_disp), false);
  for (int dof : problem.dirichlet(step, n_steps).dofs)
    sys.prescribed[static_cast<std::size_t>(dof)] = true;
  auto fixed = [&](int dof) { return sys.prescribed[static_cast<std::size_t>(dof)]; };

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(problem.stiffness.nonZeros() + 2 * sys.blocks.coupling.nonZeros() +
                                     sys.blocks.multiplier_block.nonZeros() + sys.n_disp));
  for (int k = 0; k < problem.stiffness.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(problem.stiffness, k); it; ++it)
      if (!fixed(static_cast<int>(it.row())) && !fixed(static_cast<int>(it.col())))
        t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int dof = 0; dof < sys.n_disp; ++dof)
    if (fixed(dof)) t.emplace_back(dof, dof, 1.0);
  for (int k = 0; k < sys.blocks.coupling.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(sys.blocks.coupling, k); it; ++it)
      if (!fixed(static_cast<int>(it.row())))
        t.emplace_back(static_cast<int>(it.row()), sys.n_disp + static_cast<int>(it.col()), it.value());
  for (int k = 0; k < sys.blocks.constraint.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(sys.blocks.constraint, k); it; ++it)
      if (!fixed(static_cast<int>(it.col())))
        t.emplace_back(sys.n_disp + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int k = 0; k < sys.blocks.multiplier_block.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(sys.blocks.multiplier_block, k); it; ++it)
      t.emplace_back(sys.n_disp + static_cast<int>(it.row()), sys.n_disp + static_cast<int>(it.col()),
                     it.value());
  sys.J.resize(sys.size(), sys.size());
  sys.J.setFromTriplets(t.begin(), t.end());

  const auto contact = contact_residuals(sys.blocks, state.U, state.Lambda);
  sys.R.resize(sys.size());
  sys.R.head(sys.n_disp) = problem.stiffness * state.U + contact.displacement - sys.load;
  for (int dof = 0; dof < sys.n_disp; ++dof)
    if (fixed(dof)) sys.R(dof) = 0.0;
  sys.R.tail(sys.n_mult) = contact.multiplier;
  return sys;
}

Preconditioner build_preconditioner(const SaddleSystem& sys) {
  Vector sq = Vector::Zero(sys.size());
  for (int k = 0; k < sys.J.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(sys.J, k); it; ++it) sq(it.row()) += it.value() * it.value();
  Preconditioner pc;
  pc.row_scale.resize(sys.size());
  for (int i = 0; i < sys.size(); ++i) {
    if (!(sq(i) > 0.0)) {
      std::ostringstream msg;
      msg << "singular row in the saddle-point system: "
          << (i < sys.n_disp ? "displacement DOF " + std::to_string(i)
                             : "multiplier DOF " + std::to_string(i - sys.n_disp));
      throw SolverError(msg.str());
    }
    pc.row_scale(i) = 1.0 / std::sqrt(sq(i));
  }
  return pc;
}

Preconditioner identity_preconditioner(int size) { return {Vector::Ones(size)}; }

SparseMatrix scaled_matrix(const SparseMatrix& J, const Preconditioner& pc) {
  return pc.row_scale.asDiagonal() * J;
}

LinearSolveResult linear_solve(const SaddleSystem& sys, const Preconditioner& pc,
                               const LinearSolverConfig& cfg) {
  LinearSolveResult res;
  res.dx = Vector::Zero(sys.size());
  const double r_norm = sys.R.norm();
  if (r_norm == 0.0) return res;

  SparseMatrix A = scaled_matrix(sys.J, pc);
  A.makeCompressed();
  const Vector b = -pc.apply(sys.R);

  if (cfg.kind == LinearSolverConfig::Kind::Direct) {
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
      throw SolverError("sparse LU factorization failed: " + lu.lastErrorMessage());
    res.dx = lu.solve(b);
    res.iterations = 1;
    // refinement judged on the row-equilibrated residual so that small
    // constraint rows are not drowned by the force rows
    const Vector eq = build_preconditioner(sys).row_scale;
    double last = std::numeric_limits<double>::infinity();
    for (int refine = 0; refine < 6; ++refine) {
      const Vector r = sys.J * res.dx + sys.R;
      const double e = r.cwiseProduct(eq).norm();
      if (!(e < 0.5 * last) || e == 0.0) break;
      last = e;
      res.dx += lu.solve(-pc.apply(r));
      ++res.iterations;
    }
  } else {
    Eigen::GMRES<SparseMatrix, Eigen::IncompleteLUT<double>> gmres;
    gmres.preconditioner().setDroptol(1e-6);
    gmres.preconditioner().setFillfactor(20);
    gmres.set_restart(200);
    gmres.setMaxIterations(cfg.max_iterations);
    gmres.setTolerance(cfg.tolerance);
    gmres.compute(A);
    if (gmres.info() != Eigen::Success) throw SolverError("incomplete LU setup failed");
    res.dx = gmres.solve(b);
    res.iterations = static_cast<int>(gmres.iterations());
    if (gmres.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "GMRES did not converge after " << gmres.iterations()
          << " iterations, scaled residual " << gmres.error();
      throw SolverError(msg.str());
    }
  }
  const double abs_res = (sys.J * res.dx + sys.R).norm();
  res.relative_residual = abs_res / r_norm;
  if (!(res.relative_residual < 1e-6 || abs_res < cfg.accept_absolute)) {
    std::ostringstream msg;
    msg << "linear solve is inaccurate (relative residual " << res.relative_residual
        << "); the saddle-point system is probably singular";
    throw SolverError(msg.str());
  }
  return res;
}

double condition_estimate(const SparseMatrix& J, int iterations) {
  SparseMatrix A = J;
  A.makeCompressed();
  SparseMatrix At = A.transpose();
  At.makeCompressed();
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector x(A.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = dist(rng);
  x.normalize();

  double sigma_max2 = 0.0;
  Vector y = x;
  for (int it = 0; it < iterations; ++it) {
    y = At * (A * y);
    sigma_max2 = y.norm();
    y /= sigma_max2;
  }

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu, lut;
  lu.compute(A);
  lut.compute(At);
  if (lu.info() != Eigen::Success || lut.info() != Eigen::Success)
    throw SolverError("condition estimate: matrix is singular");
  double inv_sigma_min2 = 0.0;
  y = x;
  for (int it = 0; it < iterations; ++it) {
    y = lu.solve(Vector(lut.solve(y)));
    inv_sigma_min2 = y.norm();
    y /= inv_sigma_min2;
  }
  return std::sqrt(sigma_max2 * inv_sigma_min2);
}

namespace {

std::vector<int> encode(const std::vector<PairState>& states) {
  std::vector<int> code;
  code.reserve(states.size());
  for (const auto& s : states) {
    switch (s.kind) {
      case PairState::Kind::Stick: code.push_back(0); break;
      case PairState::Kind::Open: code.push_back(1); break;
      case PairState::Kind::Slip: code.push_back(s.sign > 0 ? 2 : 3); break;
    }
  }
  return code;
}

}  // namespace

SolutionState newton_loop(const Problem& problem, const SolverConfig& cfg,
                          const SolutionState& warm, int step, int n_steps) {
  cfg.validate();
  SolutionState state = warm;
  state.step = step;
  state.converged = false;
  state.newton_iters = 0;
  state.state_loops = 0;
  state.residual_history.clear();
  state.message.clear();
  apply_dirichlet(problem, state, step, n_steps);

  std::vector<bool> flipped(state.states.size(), false);
  std::set<std::vector<int>> seen;
  seen.insert(encode(state.states));

  for (int loop = 0; loop < cfg.max_state_loops; ++loop) {
    ++state.state_loops;
    bool phase_ok = false;
    double first = -1.0;
    for (int it = 0; it <= cfg.max_newton; ++it) {
      const SaddleSystem sys = build_system(problem, state, step, n_steps);
      const double r = sys.R.norm();
      state.residual_norm = r;
      state.residual_history.push_back(r);
      // constraint rows are tiny in absolute terms, so each new state set gets a solve
      if (r < cfg.newton_tol && (it > 0 || r == 0.0)) {
        phase_ok = true;
        break;
      }
      if (first < 0.0) first = r;
      if (r > 1e3 * std::max(first, cfg.newton_tol)) {
        state.message = "residual diverged within a Newton phase";
        return state;
      }
      if (it == cfg.max_newton) break;
      try {
        const Preconditioner pc =
            cfg.precondition ? build_preconditioner(sys) : identity_preconditioner(sys.size());
        const auto sol = linear_solve(sys, pc, cfg.linear);
        state.U += sol.dx.head(sys.n_disp);
        state.Lambda += sol.dx.tail(sys.n_mult);
      } catch (const SolverError& e) {
        state.message = e.what();
        return state;
      }
      ++state.newton_iters;
    }
    if (!phase_ok) {
      std::ostringstream msg;
      msg << "Newton iteration cap (" << cfg.max_newton << ") reached, residual "
          << state.residual_norm;
      state.message = msg.str();
      return state;
    }

    std::vector<PairState> next(state.states.size());
    const auto kin = weighted_kinematics(problem.mesh, problem.segments, state.U, state.Lambda);
    StateTolerances tol = cfg.state_tol;
    double max_slip = 0.0;
    for (const auto& k : kin) max_slip = std::max(max_slip, std::abs(k.jump_tangent));
    tol.zero_slip = std::max(tol.zero_slip, tol.relative_slip * max_slip);
    // grazing contact (zero gap, round-off traction) is treated as open
    if (state.Lambda.size() > 0)
      tol.open = std::min(tol.open, -tol.relative_traction * state.Lambda.cwiseAbs().maxCoeff());
    for (std::size_t q = 0; q < next.size(); ++q) {
      const auto& cur = state.states[q];
      next[q] = classify_state(kin[q], cur, problem.friction, tol);
      // a reversed slip first tries the other direction, sticks only after that
      if (cur.kind == PairState::Kind::Slip && next[q].kind == PairState::Kind::Stick &&
          cur.sign * kin[q].jump_tangent < -tol.zero_slip && !flipped[q]) {
        next[q] = PairState::slip(-cur.sign);
        flipped[q] = true;
      }
    }
    if (next == state.states) {
      state.converged = true;
      return state;
    }
    state.states = std::move(next);
    if (!seen.insert(encode(state.states)).second) {
      state.message = "active set cycling: a previous state assignment came back";
      return state;
    }
  }
  state.message = "state loop cap (" + std::to_string(cfg.max_state_loops) + ") reached";
  return state;
}

std::vector<SolutionState> run_load_steps(const Problem& problem, const SolverConfig& cfg) {
  cfg.validate();
  std::vector<SolutionState> out;
  SolutionState state = SolutionState::initial(problem.mesh);
  for (int step = 0; step < cfg.n_load_steps; ++step) {
    state = newton_loop(problem, cfg, state, step, cfg.n_load_steps);
    out.push_back(state);
    if (!state.converged) {
      out.back().message = "load step " + std::to_string(step) + ": " + state.message;
      break;
    }
  }
  return out;
}

}  // namespace fraccon
