#pragma once

#include "fraccon/elasticity.hpp"
#include "fraccon/mesh.hpp"

#include <string>
#include <vector>

namespace fraccon {

/// Mohr-Coulomb constants of the fracture surfaces.
struct FrictionParams {
  double cohesion = 0.0;        // c [Pa]
  double friction_angle = 0.0;  // phi [rad]

  void validate() const;
  double tan_phi() const;
};

/// Contact state of one pair. `sign` is the slip direction along the pair
/// tangent and is only meaningful for Slip.
struct PairState {
  enum class Kind { Stick, Slip, Open };
  Kind kind = Kind::Stick;
  int sign = 1;

  static PairState stick() { return {Kind::Stick, 1}; }
  static PairState open() { return {Kind::Open, 1}; }
  static PairState slip(int sign) { return {Kind::Slip, sign >= 0 ? 1 : -1}; }

  bool operator==(const PairState& other) const {
    return kind == other.kind && (kind != Kind::Slip || sign == other.sign);
  }
};

/// "stick", "slip+", "slip-" or "open".
std::string to_string(const PairState& state);

/// Jumps and multipliers of one pair. Jumps are plus minus minus; local
/// components use the pair frame (normal, tangent). Tractions are negative in
/// compression.
struct PairKinematics {
  Vec2 jump_global{0.0, 0.0};
  double jump_normal = 0.0;
  double jump_tangent = 0.0;
  double lambda_normal = 0.0;
  double lambda_tangent = 0.0;
  double gap = 0.0;

  double normal_gap() const { return gap + jump_normal; }
};

/// Kinematic part only (multipliers left at zero).
PairKinematics jump_displacement(const ContactPair& pair, const Vector& U);

/// Kinematics with the multipliers of `pair` read from Lambda (2 per pair).
PairKinematics pair_kinematics(const ContactPair& pair, const Vector& U, const Vector& Lambda);

/// Kinematics of every pair with jumps and gaps averaged by the same
/// segment weights as the constraint rows: sum_r w_qr j_r / sum_r w_qr,
/// projected on the frame of q. Multipliers are the nodal values.
std::vector<PairKinematics> weighted_kinematics(const Mesh& mesh,
                                                const std::vector<PathSegment>& segments,
                                                const Vector& U, const Vector& Lambda);

/// Critical shear traction tau_c = c - lambda_N tan(phi).
double mohr_coulomb_tau_c(double lambda_normal, const FrictionParams& fric);

struct StateTolerances {
  double open = 0.0;          // lambda_N above this opens the pair
  double slip = 1e-8;         // relative margin below tau_c still counted as slip
  double zero_slip = 1e-12;   // [m] below this the traction decides the slip sign
  double relative_slip = 1e-2;  // solver: jumps below this share of the largest slip count as zero
  double penetration = 1e-12;   // [m] an open pair closes only below -penetration
  double relative_traction = 1e-9;  // solver: compression below this share of max |lambda| counts as zero
};

/// Slip direction: sign of the tangential jump, else of the tangential
/// traction, else +1.
int slip_sign(const PairKinematics& kin, const StateTolerances& tol = {});

PairState classify_state(const PairKinematics& kin, const PairState& current,
                         const FrictionParams& fric, const StateTolerances& tol = {});

/// Contact contributions to the saddle-point system. With n the node count
/// and p the pair count:
///   R^u contribution = coupling * Lambda
///   R^lambda         = constraint * U + multiplier_block * Lambda + constraint_rhs
/// Multiplier DOFs are (2q, 2q+1) = (normal, tangential) of pair q.
struct ContactBlocks {
  SparseMatrix coupling;          // 2n x 2p, displacement rows
  SparseMatrix constraint;        // 2p x 2n
  SparseMatrix multiplier_block;  // 2p x 2p, open and slip replacement rows only
  Vector constraint_rhs;          // 2p
  Vector gap;                     // 2p, weighted initial gaps (normal rows)
  Vector slip_force;              // 2n, cohesion share of the slip tractions
};

ContactBlocks assemble_contact_blocks(const Mesh& mesh, const std::vector<PairState>& states,
                                      const FrictionParams& fric,
                                      const std::vector<PathSegment>& segments);

/// Coupling column of the normal multiplier of a slip pair after the
/// tangential multiplier is eliminated with lambda_T = sign (c - lambda_N tan phi).
Vector condensed_slip_column(const ContactBlocks& blocks, int pair, const FrictionParams& fric,
                             int sign);

struct ContactResiduals {
  Vector displacement;  // 2n
  Vector multiplier;    // 2p
};

ContactResiduals contact_residuals(const ContactBlocks& blocks, const Vector& U,
                                   const Vector& Lambda);

}  // namespace fraccon
