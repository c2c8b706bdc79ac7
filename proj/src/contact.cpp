#include "fraccon/contact.hpp"

#include "fraccon/error.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace fraccon {

void FrictionParams::validate() const {
  if (!(cohesion >= 0.0)) throw ConfigError("friction.cohesion must be non-negative");
  if (!(friction_angle >= 0.0 && friction_angle < 0.5 * std::numbers::pi))
    throw ConfigError("friction.friction_angle must lie in [0, 90) degrees");
}

double FrictionParams::tan_phi() const { return std::tan(friction_angle); }

std::string to_string(const PairState& state) {
  switch (state.kind) {
    case PairState::Kind::Stick: return "stick";
    case PairState::Kind::Open: return "open";
    case PairState::Kind::Slip: return state.sign > 0 ? "slip+" : "slip-";
  }
  return "?";
}

PairKinematics jump_displacement(const ContactPair& pair, const Vector& U) {
  PairKinematics kin;
  kin.jump_global = U.segment<2>(2 * pair.node_plus) - U.segment<2>(2 * pair.node_minus);
  kin.jump_normal = kin.jump_global.dot(pair.normal);
  kin.jump_tangent = kin.jump_global.dot(pair.tangent);
  kin.gap = pair.gap0;
  return kin;
}

PairKinematics pair_kinematics(const ContactPair& pair, const Vector& U, const Vector& Lambda) {
  PairKinematics kin = jump_displacement(pair, U);
  kin.lambda_normal = Lambda(2 * pair.id);
  kin.lambda_tangent = Lambda(2 * pair.id + 1);
  return kin;
}

std::vector<PairKinematics> weighted_kinematics(const Mesh& mesh,
                                                const std::vector<PathSegment>& segments,
                                                const Vector& U, const Vector& Lambda) {
  const auto np = static_cast<std::size_t>(mesh.n_pair());
  std::vector<Vec2> jump(np), acc(np, Vec2::Zero());
  std::vector<double> gap_acc(np, 0.0), wsum(np, 0.0);
  for (std::size_t q = 0; q < np; ++q) jump[q] = jump_displacement(mesh.pairs[q], U).jump_global;
  for (const auto& s : segments) {
    const double L = s.length();
    const std::array<int, 2> ends{s.pair_a, s.pair_b};
    for (int i = 0; i < 2; ++i) {
      const int q = ends[static_cast<std::size_t>(i)];
      if (q < 0) continue;
      const auto uq = static_cast<std::size_t>(q);
      wsum[uq] += L / 2.0;
      for (int j = 0; j < 2; ++j) {
        const int r = ends[static_cast<std::size_t>(j)];
        if (r < 0) continue;  // undoubled tip: zero jump
        const double w = i == j ? L / 3.0 : L / 6.0;
        acc[uq] += w * jump[static_cast<std::size_t>(r)];
        gap_acc[uq] += w * mesh.pairs[static_cast<std::size_t>(r)].gap0;
      }
    }
  }
  std::vector<PairKinematics> out(np);
  for (std::size_t q = 0; q < np; ++q) {
    const auto& p = mesh.pairs[q];
    auto& k = out[q];
    if (wsum[q] > 0.0) {
      k.jump_global = acc[q] / wsum[q];
      k.gap = gap_acc[q] / wsum[q];
    } else {
      k.jump_global = jump[q];
      k.gap = p.gap0;
    }
    k.jump_normal = k.jump_global.dot(p.normal);
    k.jump_tangent = k.jump_global.dot(p.tangent);
    k.lambda_normal = Lambda(2 * p.id);
    k.lambda_tangent = Lambda(2 * p.id + 1);
  }
  return out;
}

double mohr_coulomb_tau_c(double lambda_normal, const FrictionParams& fric) {
  return fric.cohesion - lambda_normal * fric.tan_phi();
}

int slip_sign(const PairKinematics& kin, const StateTolerances& tol) {
  if (std::abs(kin.jump_tangent) >= tol.zero_slip) return kin.jump_tangent > 0.0 ? 1 : -1;
  if (kin.lambda_tangent != 0.0) return kin.lambda_tangent > 0.0 ? 1 : -1;
  return 1;
}

PairState classify_state(const PairKinematics& kin, const PairState& current,
                         const FrictionParams& fric, const StateTolerances& tol) {
  // an open pair carries no traction, so only its gap can close it.
  // zero gap with zero traction satisfies both states; keep it open rather than chase round-off
  if (current.kind == PairState::Kind::Open) {
    if (kin.normal_gap() > -tol.penetration) return PairState::open();
  } else if (kin.lambda_normal > tol.open) {
    return PairState::open();
  }
  // slid against its assumed direction: friction is not exhausted there
  if (current.kind == PairState::Kind::Slip && current.sign * kin.jump_tangent < -tol.zero_slip)
    return PairState::stick();
  const double tau_c = mohr_coulomb_tau_c(kin.lambda_normal, fric);
  if (std::abs(kin.lambda_tangent) >= tau_c * (1.0 - tol.slip)) {
    // a stuck or open pair has no meaningful jump yet: the traction sets the direction
    if (current.kind != PairState::Kind::Slip && kin.lambda_tangent != 0.0)
      return PairState::slip(kin.lambda_tangent > 0.0 ? 1 : -1);
    return PairState::slip(slip_sign(kin, tol));
  }
  return PairState::stick();
}

ContactBlocks assemble_contact_blocks(const Mesh& mesh, const std::vector<PairState>& states,
                                      const FrictionParams& fric,
                                      const std::vector<PathSegment>& segments) {
  const int n_disp = 2 * mesh.n_node();
  const int n_mult = 2 * mesh.n_pair();
  if (static_cast<int>(states.size()) != mesh.n_pair())
    throw Error("state count does not match the number of contact pairs");

  using Kind = PairState::Kind;
  std::vector<Eigen::Triplet<double>> coupling, constraint, block;
  ContactBlocks out;
  out.constraint_rhs = Vector::Zero(n_mult);
  out.gap = Vector::Zero(n_mult);
  out.slip_force = Vector::Zero(n_disp);

  const double gp = 1.0 / std::sqrt(3.0);
  const std::array<double, 2> xi{0.5 * (1.0 - gp), 0.5 * (1.0 + gp)};

  for (const auto& s : segments) {
    if (s.fracture < 0 || s.fracture >= mesh.n_frac() || s.pair_a >= mesh.n_pair() ||
        s.pair_b >= mesh.n_pair())
      throw Error("inconsistent fracture segment table");
    const std::array<int, 2> ends{s.pair_a, s.pair_b};
    const double length = s.length();
    // w(i, j) = integral of N_i N_j over the segment
    Eigen::Matrix2d w = Eigen::Matrix2d::Zero();
    for (double x : xi) {
      const Eigen::Vector2d N{1.0 - x, x};
      w += 0.5 * length * N * N.transpose();
    }
    for (int i = 0; i < 2; ++i) {
      const int q = ends[static_cast<std::size_t>(i)];
      if (q < 0) continue;
      const auto& pq = mesh.pairs[static_cast<std::size_t>(q)];
      const auto& state = states[static_cast<std::size_t>(q)];
      if (state.kind == Kind::Open) continue;
      for (int j = 0; j < 2; ++j) {
        const int r = ends[static_cast<std::size_t>(j)];
        if (r < 0) continue;
        const auto& pr = mesh.pairs[static_cast<std::size_t>(r)];
        const double wij = w(i, j);
        for (int comp = 0; comp < 2; ++comp) {
          const Vec2 dir = comp == 0 ? pq.normal : pq.tangent;
          const int col = 2 * q + comp;
          const bool with_row = comp == 0 || state.kind == Kind::Stick;
          for (int d = 0; d < 2; ++d) {
            const double v = wij * dir(d);
            if (v == 0.0) continue;
            coupling.emplace_back(2 * pr.node_plus + d, col, v);
            coupling.emplace_back(2 * pr.node_minus + d, col, -v);
            if (with_row) {
              constraint.emplace_back(col, 2 * pr.node_plus + d, v);
              constraint.emplace_back(col, 2 * pr.node_minus + d, -v);
            }
          }
        }
        out.gap(2 * q) += wij * pr.gap0;
      }
    }
  }

  const double tan_phi = fric.tan_phi();
  for (const auto& p : mesh.pairs) {
    const auto& state = states[static_cast<std::size_t>(p.id)];
    const int rn = 2 * p.id, rt = 2 * p.id + 1;
    if (state.kind == Kind::Open) {
      block.emplace_back(rn, rn, 1.0);
      block.emplace_back(rt, rt, 1.0);
      out.gap(rn) = 0.0;
    } else {
      out.constraint_rhs(rn) = out.gap(rn);
      if (state.kind == Kind::Slip) {
        // lambda_T - sign (c - lambda_N tan phi) = 0
        block.emplace_back(rt, rt, 1.0);
        block.emplace_back(rt, rn, state.sign * tan_phi);
        out.constraint_rhs(rt) = -state.sign * fric.cohesion;
      }
    }
  }

  out.coupling.resize(n_disp, n_mult);
  out.coupling.setFromTriplets(coupling.begin(), coupling.end());
  out.constraint.resize(n_mult, n_disp);
  out.constraint.setFromTriplets(constraint.begin(), constraint.end());
  out.multiplier_block.resize(n_mult, n_mult);
  out.multiplier_block.setFromTriplets(block.begin(), block.end());

  for (const auto& p : mesh.pairs) {
    const auto& state = states[static_cast<std::size_t>(p.id)];
    if (state.kind == Kind::Slip)
      out.slip_force += out.coupling.col(2 * p.id + 1) * (state.sign * fric.cohesion);
  }
  return out;
}

Vector condensed_slip_column(const ContactBlocks& blocks, int pair, const FrictionParams& fric,
                             int sign) {
  return Vector(blocks.coupling.col(2 * pair)) -
         (sign * fric.tan_phi()) * Vector(blocks.coupling.col(2 * pair + 1));
}

ContactResiduals contact_residuals(const ContactBlocks& blocks, const Vector& U,
                                   const Vector& Lambda) {
  return {blocks.coupling * Lambda,
          blocks.constraint * U + blocks.multiplier_block * Lambda + blocks.constraint_rhs};
}

}  // namespace fraccon
