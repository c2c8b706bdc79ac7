#pragma once

#include "fraccon/elasticity.hpp"
#include "fraccon/mesh.hpp"
#include "fraccon/solver.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace fraccon {

/// Single inclined crack of length 2l in an infinite plate under remote
/// uniaxial compression sigma_inf; alpha is measured from the load axis
/// normal, so the normal traction is -sigma_inf sin^2(alpha).
struct InclinedCrackCase {
  double alpha = 0.0;      // [rad]
  double sigma_inf = 0.0;  // [Pa], magnitude
  double half_length = 1.0;
  MaterialParams material;
  FrictionParams friction;

  void validate() const;
};

struct CrackTraction {
  double tangential = 0.0;
  double normal = 0.0;
};

/// Driving shear (after friction) and normal traction on the crack.
CrackTraction inclined_crack_traction(const InclinedCrackCase& c);

/// Elliptical slip at arc coordinate eta in [0, 2l].
double inclined_crack_slip(double eta, const InclinedCrackCase& c);

/// Opening of a pressurised crack at distance eta from its centre.
double sneddon_opening(double eta, double pressure, double half_length, const MaterialParams& mat);

/// Uniform slip of the through-going shear benchmark [m].
double constant_slip_reference();

enum class TipEnd { Start, End };

struct SifEstimate {
  double k_I = 0.0;
  double k_II = 0.0;
  double r = 0.0;
  double ratio = 0.0;  // (2/pi) atan(K_I / |K_II|), 1 when K_II vanishes
};

/// Displacement correlation at the pair nearest to the chosen path end.
SifEstimate sif_estimate(const Mesh& mesh, const SolutionState& state, int fracture, TipEnd tip,
                         const MaterialParams& mat);
double sif_ratio(const Mesh& mesh, const SolutionState& state, int fracture, TipEnd tip,
                 const MaterialParams& mat);

struct ProfileSample {
  double eta = 0.0;
  double value = 0.0;
};

struct ProfileError {
  double rel_L2 = 0.0;
  double window_lo = 0.1;  // fractions of the fracture length
  double window_hi = 0.9;
  int samples = 0;
};

/// sqrt(sum (num - ref)^2 / sum ref^2) over samples with eta inside
/// [lo, hi] * length. Needs at least 3 samples there.
ProfileError profile_error(const std::vector<ProfileSample>& numerical,
                           const std::function<double(double)>& analytical, double length,
                           double window_lo = 0.1, double window_hi = 0.9);

}  // namespace fraccon
