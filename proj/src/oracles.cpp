#include "fraccon/oracles.hpp"

#include "fraccon/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fraccon {

void InclinedCrackCase::validate() const {
  if (!(alpha > 0.0 && alpha < 0.5 * std::numbers::pi))
    throw ConfigError("inclined crack: alpha must lie in (0, pi/2)");
  if (!(sigma_inf > 0.0)) throw ConfigError("inclined crack: sigma_inf must be positive");
  if (!(half_length > 0.0)) throw ConfigError("inclined crack: half length must be positive");
  material.validate();
  friction.validate();
}

CrackTraction inclined_crack_traction(const InclinedCrackCase& c) {
  const double s = std::sin(c.alpha), co = std::cos(c.alpha);
  CrackTraction t;
  t.normal = -c.sigma_inf * s * s;
  t.tangential = c.sigma_inf * s * co - c.sigma_inf * s * s * c.friction.tan_phi() -
                 c.friction.cohesion;
  return t;
}

double inclined_crack_slip(double eta, const InclinedCrackCase& c) {
  const double l = c.half_length;
  if (!(eta >= 0.0 && eta <= 2.0 * l)) throw Error("inclined crack slip: eta outside [0, 2l]");
  const double tt = inclined_crack_traction(c).tangential;
  if (tt <= 0.0) return 0.0;  // friction holds
  const double nu = c.material.nu;
  const double d = eta - l;
  return 4.0 * tt * (1.0 - nu * nu) / c.material.E * std::sqrt(std::max(0.0, l * l - d * d));
}

double sneddon_opening(double eta, double pressure, double half_length, const MaterialParams& mat) {
  if (!(half_length > 0.0)) throw Error("sneddon opening: half length must be positive");
  if (std::abs(eta) > half_length) throw Error("sneddon opening: |eta| exceeds the half length");
  const double x = eta / half_length;
  return 2.0 * half_length * pressure * (1.0 - mat.nu) / mat.shear_modulus() *
         std::sqrt(std::max(0.0, 1.0 - x * x));
}

double constant_slip_reference() { return 0.1414; }

SifEstimate sif_estimate(const Mesh& mesh, const SolutionState& state, int fracture, TipEnd tip,
                         const MaterialParams& mat) {
  if (fracture < 0 || fracture >= mesh.n_frac()) throw Error("sif: unknown fracture id");
  const auto& path = mesh.fractures[static_cast<std::size_t>(fracture)];
  if (path.nodes.empty()) throw Error("sif: empty fracture path");
  const Vec2 x_tip = mesh.pos(tip == TipEnd::Start ? path.nodes.front() : path.nodes.back());

  const ContactPair* best = nullptr;
  double best_r = std::numeric_limits<double>::infinity();
  for (int q : pairs_along(mesh, fracture)) {
    const auto& p = mesh.pairs[static_cast<std::size_t>(q)];
    const double r = (mesh.pos(p.node_plus) - x_tip).norm();
    if (r > 1e-12 && r < best_r) {
      best_r = r;
      best = &p;
    }
  }
  if (best == nullptr) throw Error("sif: no contact pair next to the tip");

  const auto kin = jump_displacement(*best, state.U);
  const double kappa = 3.0 - 4.0 * mat.nu;
  const double coef = mat.shear_modulus() / (kappa + 1.0) * std::sqrt(2.0 * std::numbers::pi / best_r);
  SifEstimate out;
  out.r = best_r;
  out.k_I = coef * kin.jump_normal;
  out.k_II = coef * kin.jump_tangent;
  const double k1 = std::max(out.k_I, 0.0);
  const double k2 = std::abs(out.k_II);
  out.ratio = k2 == 0.0 ? 1.0 : 2.0 / std::numbers::pi * std::atan(k1 / k2);
  return out;
}

double sif_ratio(const Mesh& mesh, const SolutionState& state, int fracture, TipEnd tip,
                 const MaterialParams& mat) {
  return sif_estimate(mesh, state, fracture, tip, mat).ratio;
}

ProfileError profile_error(const std::vector<ProfileSample>& numerical,
                           const std::function<double(double)>& analytical, double length,
                           double window_lo, double window_hi) {
  if (!(window_lo >= 0.0 && window_hi <= 1.0 && window_lo < window_hi))
    throw Error("profile error: window bounds must satisfy 0 <= lo < hi <= 1");
  ProfileError e;
  e.window_lo = window_lo;
  e.window_hi = window_hi;
  double num = 0.0, den = 0.0;
  for (const auto& s : numerical) {
    if (s.eta < window_lo * length || s.eta > window_hi * length) continue;
    const double ref = analytical(s.eta);
    num += (s.value - ref) * (s.value - ref);
    den += ref * ref;
    ++e.samples;
  }
  if (e.samples < 3) throw Error("profile error: fewer than 3 samples inside the window");
  if (den == 0.0) throw Error("profile error: reference profile vanishes on the window");
  e.rel_L2 = std::sqrt(num / den);
  return e;
}

}  // namespace fraccon
