#include "fraccon/contact.hpp"
#include "fraccon/error.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

using namespace fraccon;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

ContactPair pair_with(Vec2 normal) {
  ContactPair p;
  p.node_plus = 0;
  p.node_minus = 1;
  p.normal = normal.normalized();
  p.tangent = {p.normal.y(), -p.normal.x()};
  return p;
}

Vector two_nodes(Vec2 plus, Vec2 minus) {
  Vector U(4);
  U << plus.x(), plus.y(), minus.x(), minus.y();
  return U;
}

PairKinematics traction(double ln, double lt, double ut = 0.0) {
  PairKinematics k;
  k.lambda_normal = ln;
  k.lambda_tangent = lt;
  k.jump_tangent = ut;
  return k;
}

// one cell wide, through-going horizontal crack: two pairs joined by one segment of length 1
Mesh two_pair_mesh(double gap0 = 0.0) {
  return prepare(generate_rect_mesh(1, 1, 1, 2, {{{0.0, 0.5}, {1.0, 0.5}, gap0}}));
}

}  // namespace

TEST(Friction, TauC) {
  EXPECT_EQ(mohr_coulomb_tau_c(0.0, {0.0, 30 * kDeg}), 0.0);
  EXPECT_NEAR(mohr_coulomb_tau_c(-10e6, {0.0, 30 * kDeg}), 5.7735e6, 50.0);
  EXPECT_NEAR(mohr_coulomb_tau_c(-10e6, {0.0, 5.71 * kDeg}), 1.0e6, 1e-3 * 1.0e6);
  EXPECT_NEAR(mohr_coulomb_tau_c(-10e6, {2e6, 30 * kDeg}), 7.7735e6, 50.0);
}

TEST(Friction, Validation) {
  EXPECT_THROW((FrictionParams{-1.0, 0.1}).validate(), ConfigError);
  EXPECT_THROW((FrictionParams{0.0, std::numbers::pi / 2}).validate(), ConfigError);
}

TEST(Jump, RigidTranslation) {
  const auto k = jump_displacement(pair_with({0, 1}), two_nodes({2e-3, -1e-3}, {2e-3, -1e-3}));
  EXPECT_EQ(k.jump_normal, 0.0);
  EXPECT_EQ(k.jump_tangent, 0.0);
}

TEST(Jump, AxisAligned) {
  const auto k = jump_displacement(pair_with({0, 1}), two_nodes({0, 1e-3}, {0, 0}));
  EXPECT_DOUBLE_EQ(k.jump_normal, 1e-3);
  EXPECT_EQ(k.jump_tangent, 0.0);
}

TEST(Jump, FortyFiveDegrees) {
  const ContactPair p = pair_with({-1, 1});
  const auto k = jump_displacement(p, two_nodes({1e-3, 0}, {0, 0}));
  const double r = std::sqrt(0.5) * 1e-3;
  EXPECT_NEAR(k.jump_normal, -r, 1e-18);
  EXPECT_NEAR(k.jump_tangent, r, 1e-18);
  // frame consistency
  const Vec2 back = k.jump_normal * p.normal + k.jump_tangent * p.tangent;
  EXPECT_LT((back - k.jump_global).norm(), 1e-12 * 1e-3);
}

TEST(Classify, Open) {
  EXPECT_EQ(classify_state(traction(1.0, 5e6), PairState::stick(), {0, 30 * kDeg}),
            PairState::open());
}

TEST(Classify, Stick) {
  EXPECT_EQ(classify_state(traction(-10e6, 3e6), PairState::stick(), {0, 30 * kDeg}),
            PairState::stick());
}

TEST(Classify, SlipPositive) {
  const FrictionParams f{0, 30 * kDeg};
  EXPECT_EQ(classify_state(traction(-10e6, 6e6, 1e-4), PairState::stick(), f), PairState::slip(1));
  EXPECT_EQ(classify_state(traction(-10e6, 6e6, 1e-4), PairState::slip(1), f), PairState::slip(1));
  EXPECT_EQ(classify_state(traction(-10e6, -6e6, -1e-4), PairState::stick(), f),
            PairState::slip(-1));
}

TEST(Classify, ReversedSlipSticks) {
  const FrictionParams f{0, 30 * kDeg};
  EXPECT_EQ(classify_state(traction(-10e6, 5.7735e6, -1e-4), PairState::slip(1), f),
            PairState::stick());
}

TEST(Classify, SlipSignFallbacks) {
  EXPECT_EQ(slip_sign(traction(-1, -2, 0.0)), -1);
  EXPECT_EQ(slip_sign(traction(-1, 0, 0.0)), 1);
  EXPECT_EQ(slip_sign(traction(-1, 2, -1e-6)), -1);
}

TEST(ContactBlocks, AllOpenDecouples) {
  const Mesh m = two_pair_mesh();
  const auto seg = segment_table(m);
  const auto b = assemble_contact_blocks(m, {PairState::open(), PairState::open()}, {0, 0.5}, seg);
  EXPECT_EQ(b.coupling.nonZeros(), 0);
  EXPECT_EQ(b.constraint.nonZeros(), 0);
  EXPECT_TRUE(Eigen::MatrixXd(b.multiplier_block).isIdentity());
}

TEST(ContactBlocks, StickMassPattern) {
  const Mesh m = two_pair_mesh();
  ASSERT_EQ(m.n_pair(), 2);
  const auto seg = segment_table(m);
  ASSERT_EQ(seg.size(), 1u);
  const double L = seg[0].length();
  const auto b = assemble_contact_blocks(m, {PairState::stick(), PairState::stick()}, {0, 0.5}, seg);
  const Eigen::MatrixXd C(b.coupling);
  for (int q = 0; q < 2; ++q) {
    const auto& pq = m.pairs[q];
    for (int r = 0; r < 2; ++r) {
      const auto& pr = m.pairs[r];
      const double w = q == r ? L / 3 : L / 6;
      for (int comp = 0; comp < 2; ++comp) {
        const Vec2 dir = comp == 0 ? pq.normal : pq.tangent;
        for (int d = 0; d < 2; ++d) {
          EXPECT_NEAR(C(2 * pr.node_plus + d, 2 * q + comp), w * dir(d), 1e-15);
          EXPECT_NEAR(C(2 * pr.node_minus + d, 2 * q + comp), -w * dir(d), 1e-15);
        }
      }
    }
  }
  EXPECT_EQ(Eigen::MatrixXd(SparseMatrix(b.constraint) - SparseMatrix(b.coupling.transpose()))
                .cwiseAbs()
                .maxCoeff(),
            0.0);
  EXPECT_EQ(b.multiplier_block.nonZeros(), 0);
}

TEST(ContactBlocks, SlipCondensedColumn) {
  const Mesh m = prepare(generate_rect_mesh(1, 1, 2, 2, {{{0.0, 0.0}, {1.0, 1.0}, 0.0}}));
  const auto seg = segment_table(m);
  const FrictionParams f{0, 30 * kDeg};
  std::vector<PairState> st(m.n_pair(), PairState::stick());
  st[1] = PairState::slip(1);
  const auto b = assemble_contact_blocks(m, st, f, seg);
  const Vector col = condensed_slip_column(b, 1, f, 1);
  const auto& p = m.pairs[1];
  int touched = 0;
  for (int n = 0; n < m.n_node(); ++n) {
    const Vec2 c(col(2 * n), col(2 * n + 1));
    if (c.norm() == 0.0) continue;
    ++touched;
    EXPECT_NEAR(c.dot(p.tangent), -f.tan_phi() * c.dot(p.normal), 1e-14);
  }
  EXPECT_GT(touched, 0);
  // slip row: lambda_T + tan(phi) lambda_N, no displacement entries
  const Eigen::MatrixXd M(b.multiplier_block);
  EXPECT_EQ(M(3, 3), 1.0);
  EXPECT_NEAR(M(3, 2), f.tan_phi(), 1e-15);
  EXPECT_EQ(Eigen::MatrixXd(b.constraint).row(3).norm(), 0.0);
  EXPECT_GT(Eigen::MatrixXd(b.constraint).row(2).norm(), 0.0);
}

TEST(ContactResiduals, ZeroState) {
  const Mesh m = two_pair_mesh();
  const auto b = assemble_contact_blocks(m, {PairState::stick(), PairState::stick()}, {0, 0.5},
                                         segment_table(m));
  const auto r = contact_residuals(b, Vector::Zero(2 * m.n_node()), Vector::Zero(4));
  EXPECT_EQ(r.displacement.norm(), 0.0);
  EXPECT_EQ(r.multiplier.norm(), 0.0);
}

TEST(ContactResiduals, RigidTranslationLeavesGap) {
  const Mesh m = two_pair_mesh(1e-3);
  const auto b = assemble_contact_blocks(m, {PairState::stick(), PairState::stick()}, {0, 0.5},
                                         segment_table(m));
  Vector U(2 * m.n_node());
  for (int n = 0; n < m.n_node(); ++n) U(2 * n) = 0.3, U(2 * n + 1) = -0.1;
  const auto r = contact_residuals(b, U, Vector::Zero(4));
  EXPECT_NEAR(r.multiplier(0), b.gap(0), 1e-15);
  EXPECT_NEAR(r.multiplier(0), 0.5e-3, 1e-15);  // (L/3 + L/6) g0
  EXPECT_NEAR(r.multiplier(1), 0.0, 1e-15);
}

TEST(WeightedKinematics, UniformJumpUnchanged) {
  const Mesh m = prepare(generate_rect_mesh(1, 1, 4, 4, {{{0.0, 0.5}, {1.0, 0.5}, 0.0}}));
  Vector U = Vector::Zero(2 * m.n_node());
  for (const auto& p : m.pairs) U(2 * p.node_plus) = 2e-4, U(2 * p.node_plus + 1) = 1e-4;
  const auto k = weighted_kinematics(m, segment_table(m), U, Vector::Zero(2 * m.n_pair()));
  for (const auto& x : k) {
    EXPECT_NEAR(x.jump_tangent, 2e-4, 1e-16);
    EXPECT_NEAR(x.jump_normal, 1e-4, 1e-16);
  }
}

TEST(PairState, Names) {
  EXPECT_EQ(to_string(PairState::stick()), "stick");
  EXPECT_EQ(to_string(PairState::slip(-1)), "slip-");
  EXPECT_EQ(to_string(PairState::open()), "open");
}
