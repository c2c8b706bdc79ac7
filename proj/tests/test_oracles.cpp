#include "fraccon/error.hpp"
#include "fraccon/oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace fraccon;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

InclinedCrackCase benchmark(double alpha = 45 * kDeg) {
  return {alpha, 10e6, 1.0, {25e9, 0.25}, {0.0, 30 * kDeg}};
}

// synthetic state: every plus face moved by a along the normal and b along the tangent
SolutionState jumped(const Mesh& m, double a, double b) {
  SolutionState s = SolutionState::initial(m);
  for (const auto& p : m.pairs) {
    const Vec2 d = a * p.normal + b * p.tangent;
    s.U(2 * p.node_plus) = d.x();
    s.U(2 * p.node_plus + 1) = d.y();
  }
  return s;
}

}  // namespace

TEST(InclinedTraction, Benchmark) {
  const auto t = inclined_crack_traction(benchmark());
  EXPECT_NEAR(t.tangential, 2.1132e6, 50.0);
  EXPECT_NEAR(t.normal, -5e6, 1e-6);
}

TEST(InclinedTraction, SmallAngle) {
  const auto t = inclined_crack_traction(benchmark(1e-9));
  EXPECT_NEAR(t.tangential, 0.0, 1e-1);
  EXPECT_NEAR(t.normal, 0.0, 1e-9);
}

TEST(InclinedTraction, SteepCrackHasNoDrive) {
  // with t_N = -sigma sin^2(alpha) friction holds once tan(alpha) >= cot(phi)
  EXPECT_LT(inclined_crack_traction(benchmark(65 * kDeg)).tangential, 0.0);
  EXPECT_NEAR(inclined_crack_traction(benchmark(60 * kDeg)).tangential, 0.0, 1e-6);
  EXPECT_GT(inclined_crack_traction(benchmark(55 * kDeg)).tangential, 0.0);
}

TEST(InclinedSlip, CentreAndEnds) {
  const auto c = benchmark();
  EXPECT_NEAR(inclined_crack_slip(1.0, c), 3.170e-4, 1e-7);
  EXPECT_EQ(inclined_crack_slip(0.0, c), 0.0);
  EXPECT_EQ(inclined_crack_slip(2.0, c), 0.0);
  EXPECT_EQ(inclined_crack_slip(0.1, benchmark(65 * kDeg)), 0.0);
  EXPECT_THROW(inclined_crack_slip(2.1, c), Error);
}

TEST(InclinedSlip, SymmetricAndPeaked) {
  const auto c = benchmark();
  for (double d : {0.1, 0.37, 0.8}) {
    EXPECT_NEAR(inclined_crack_slip(1.0 - d, c), inclined_crack_slip(1.0 + d, c), 1e-18);
    EXPECT_GE(inclined_crack_slip(1.0 - d, c), 0.0);
    EXPECT_LT(inclined_crack_slip(1.0 - d, c), inclined_crack_slip(1.0, c));
  }
}

TEST(Sneddon, CentreOpening) {
  const MaterialParams mat{25e9, 0.25};
  EXPECT_NEAR(sneddon_opening(0.0, 10e6, 1.0, mat), 1.5e-3, 1e-12);
  EXPECT_EQ(sneddon_opening(1.0, 10e6, 1.0, mat), 0.0);
  EXPECT_EQ(sneddon_opening(-1.0, 10e6, 1.0, mat), 0.0);
  EXPECT_NEAR(sneddon_opening(0.3, 20e6, 1.0, mat), 2 * sneddon_opening(0.3, 10e6, 1.0, mat), 1e-18);
  EXPECT_EQ(sneddon_opening(0.4, 10e6, 1.0, mat), sneddon_opening(-0.4, 10e6, 1.0, mat));
  EXPECT_THROW(sneddon_opening(1.5, 10e6, 1.0, mat), Error);
}

TEST(ConstantSlip, Value) { EXPECT_EQ(constant_slip_reference(), 0.1414); }

TEST(ProfileError, IdenticalAndScaled) {
  std::vector<ProfileSample> exact, scaled;
  auto f = [](double x) { return std::sqrt(x * (2.0 - x)); };
  for (int i = 0; i <= 40; ++i) {
    const double x = 0.05 * i;
    exact.push_back({x, f(x)});
    scaled.push_back({x, 1.05 * f(x)});
  }
  EXPECT_EQ(profile_error(exact, f, 2.0).rel_L2, 0.0);
  EXPECT_NEAR(profile_error(scaled, f, 2.0).rel_L2, 0.05, 1e-12);
  EXPECT_EQ(profile_error(scaled, f, 2.0).samples, 33);
}

TEST(ProfileError, OrderInvariant) {
  std::vector<ProfileSample> s;
  auto f = [](double x) { return 1.0 + x; };
  for (int i = 0; i <= 20; ++i) s.push_back({0.1 * i, 1.0 + 0.1 * i + 0.01 * std::sin(i)});
  const double a = profile_error(s, f, 2.0).rel_L2;
  std::shuffle(s.begin(), s.end(), std::mt19937(3));
  EXPECT_NEAR(profile_error(s, f, 2.0).rel_L2, a, 1e-15);
}

TEST(ProfileError, Errors) {
  std::vector<ProfileSample> two{{0.5, 1.0}, {1.0, 1.0}};
  EXPECT_THROW(profile_error(two, [](double) { return 1.0; }, 2.0), Error);
  std::vector<ProfileSample> many{{0.5, 1.0}, {1.0, 1.0}, {1.5, 1.0}};
  EXPECT_THROW(profile_error(many, [](double) { return 0.0; }, 2.0), Error);
  EXPECT_THROW(profile_error(many, [](double) { return 1.0; }, 2.0, 0.6, 0.4), Error);
}

TEST(SifRatio, PureModes) {
  const Mesh m = prepare(generate_rect_mesh(4, 4, 16, 16, {{{1.0, 2.0}, {3.0, 2.0}, 0.0}}));
  const MaterialParams mat{25e9, 0.25};
  EXPECT_EQ(sif_ratio(m, jumped(m, 1e-4, 0.0), 0, TipEnd::Start, mat), 1.0);
  EXPECT_EQ(sif_ratio(m, jumped(m, 0.0, 1e-4), 0, TipEnd::End, mat), 0.0);
  const double mixed = sif_ratio(m, jumped(m, 1e-4, 1e-4), 0, TipEnd::End, mat);
  EXPECT_NEAR(mixed, 0.5, 1e-12);
  // closed tip: K_I clipped at zero
  EXPECT_EQ(sif_ratio(m, jumped(m, -1e-4, 1e-4), 0, TipEnd::End, mat), 0.0);
}

TEST(SifRatio, NearestPairAndErrors) {
  const Mesh m = prepare(generate_rect_mesh(4, 4, 16, 16, {{{1.0, 2.0}, {3.0, 2.0}, 0.0}}));
  const auto e = sif_estimate(m, jumped(m, 1e-4, 0.0), 0, TipEnd::Start, {25e9, 0.25});
  EXPECT_NEAR(e.r, 0.25, 1e-12);
  const double G = 1e10, kappa = 2.0;
  EXPECT_NEAR(e.k_I, G / (kappa + 1) * std::sqrt(2 * std::numbers::pi / 0.25) * 1e-4, 1e-3);
  EXPECT_THROW(sif_ratio(m, jumped(m, 0, 0), 3, TipEnd::Start, {25e9, 0.25}), Error);
}
