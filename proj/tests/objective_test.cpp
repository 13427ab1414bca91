#include "coirs/manifold.hpp"
#include "coirs/objective.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace coirs;
using coirs::testing::SmallDims;

namespace {

IteratePoint on_manifold(std::mt19937_64 &rng, const SmallDims &d) {
  return manifold::retract(coirs::testing::random_ambient_point(rng, d));
}

double loop_objective(const ChannelSet &ch, const IteratePoint &pt,
                      const SystemConfig &cfg) {
  double f = 0;
  for (int k = 0; k < ch.n_sub(); ++k) {
    const CMatrix hb = coirs::testing::loop_effective_channel(
        ch.g_i1_b[k], ch.g_i2_b[k], ch.g_a_i1[k], ch.g_a_i2[k], ch.g_i1_i2[k],
        pt.phi1, pt.phi2);
    const CMatrix he = coirs::testing::loop_effective_channel(
        ch.g_i1_e[k], ch.g_i2_e[k], ch.g_a_i1[k], ch.g_a_i2[k], ch.g_i1_i2[k],
        pt.phi1, pt.phi2);
    auto ld = [&](const CMatrix &h, double noise) {
      const CMatrix hw = h * pt.w_blocks[k];
      const CMatrix g = CMatrix::Identity(h.rows(), h.rows()) +
                        (cfg.power_watts / noise) * hw * hw.adjoint();
      return std::log(g.determinant().real());
    };
    f += ld(he, cfg.noise_eve_watts) - ld(hb, cfg.noise_bob_watts);
  }
  return f;
}

} // namespace

TEST(EffectiveChannel, MatchesNestedSums) {
  std::mt19937_64 rng(21);
  SmallDims d{3, 1, 2, 3, 4, 5, 2};
  const ChannelSet ch = coirs::testing::random_channels(rng, d);
  const IteratePoint p = on_manifold(rng, d);
  for (int k = 0; k < d.k; ++k) {
    const auto eff = effective_channels(ch, p.phi1, p.phi2, k);
    const CMatrix hb = coirs::testing::loop_effective_channel(
        ch.g_i1_b[k], ch.g_i2_b[k], ch.g_a_i1[k], ch.g_a_i2[k], ch.g_i1_i2[k],
        p.phi1, p.phi2);
    const CMatrix he = coirs::testing::loop_effective_channel(
        ch.g_i1_e[k], ch.g_i2_e[k], ch.g_a_i1[k], ch.g_a_i2[k], ch.g_i1_i2[k],
        p.phi1, p.phi2);
    EXPECT_LT((eff.h_bob - hb).norm(), 1e-12 * hb.norm());
    EXPECT_LT((eff.h_eve - he).norm(), 1e-12 * he.norm());
  }
}

TEST(EffectiveChannel, ScalarExpansion) {
  ChannelSet ch = ChannelSet::zeros(1, 1, 1, 1, 1, 1);
  const Complex a1(0.3, -0.2), a2(1.1, 0.4), b1(-0.7, 0.5), b2(0.2, 0.9),
      c(0.6, -0.1);
  ch.g_a_i1[0](0, 0) = a1;
  ch.g_a_i2[0](0, 0) = a2;
  ch.g_i1_b[0](0, 0) = b1;
  ch.g_i2_b[0](0, 0) = b2;
  ch.g_i1_e[0](0, 0) = b1;
  ch.g_i2_e[0](0, 0) = b2;
  ch.g_i1_i2[0](0, 0) = c;
  const CVector p1 = CVector::Constant(1, std::polar(1.0, 0.4));
  const CVector p2 = CVector::Constant(1, std::polar(1.0, -1.3));
  const Complex expect = b1 * p1(0) * a1 + b2 * p2(0) * (a2 + c * p1(0) * a1);
  EXPECT_LT(std::abs(effective_channels(ch, p1, p2, 0).h_bob(0, 0) - expect),
            1e-15);
}

TEST(EffectiveChannel, AllOnesAndZeroCascade) {
  std::mt19937_64 rng(22);
  SmallDims d;
  ChannelSet ch = coirs::testing::random_channels(rng, d);
  const CVector ones1 = CVector::Ones(d.n1), ones2 = CVector::Ones(d.n2);
  const auto eff = effective_channels(ch, ones1, ones2, 1);
  const CMatrix expect =
      ch.g_i1_b[1] * ch.g_a_i1[1] +
      ch.g_i2_b[1] * (ch.g_a_i2[1] + ch.g_i1_i2[1] * ch.g_a_i1[1]);
  EXPECT_LT((eff.h_bob - expect).norm(), 1e-12 * expect.norm());

  for (auto &g : ch.g_i1_i2)
    g.setZero();
  const IteratePoint p = on_manifold(rng, d);
  const auto eff0 = effective_channels(ch, p.phi1, p.phi2, 0);
  const CMatrix expect0 = ch.g_i1_b[0] * p.phi1.asDiagonal() * ch.g_a_i1[0] +
                          ch.g_i2_b[0] * p.phi2.asDiagonal() * ch.g_a_i2[0];
  EXPECT_LT((eff0.h_bob - expect0).norm(), 1e-12 * expect0.norm());
}

TEST(EffectiveChannel, AffineInEachPhaseVector) {
  std::mt19937_64 rng(23);
  SmallDims d;
  const ChannelSet ch = coirs::testing::random_channels(rng, d);
  const CVector p1 = coirs::testing::random_vector(rng, d.n1);
  const CVector p2 = coirs::testing::random_vector(rng, d.n2);
  const CVector d1 = coirs::testing::random_vector(rng, d.n1);
  const CVector d2 = coirs::testing::random_vector(rng, d.n2);
  auto h = [&](double s, double t) {
    return effective_channels(ch, p1 + s * d1, p2 + t * d2, 0).h_bob;
  };
  const double scale = h(0, 0).norm();
  EXPECT_LT((h(1, 0) - 2.0 * h(0, 0) + h(-1, 0)).norm(), 1e-12 * scale);
  EXPECT_LT((h(0, 1) - 2.0 * h(0, 0) + h(0, -1)).norm(), 1e-12 * scale);
  // The mixed term is the cascade G_i2_b diag(d2) G_i1_i2 diag(d1) G_a_i1.
  const CMatrix mixed = h(1, 1) - h(1, 0) - h(0, 1) + h(0, 0);
  const CMatrix expect = ch.g_i2_b[0] * d2.asDiagonal() * ch.g_i1_i2[0] *
                         d1.asDiagonal() * ch.g_a_i1[0];
  EXPECT_LT((mixed - expect).norm(), 1e-11 * expect.norm());
  const CVector z1 = CVector::Zero(d.n1), z2 = CVector::Zero(d.n2);
  EXPECT_EQ(effective_channels(ch, z1, z2, 0).h_bob.norm(), 0.0);
}

TEST(EffectiveChannel, OutOfRangeSubcarrier) {
  std::mt19937_64 rng(24);
  SmallDims d;
  const ChannelSet ch = coirs::testing::random_channels(rng, d);
  const IteratePoint p = on_manifold(rng, d);
  EXPECT_THROW(effective_channels(ch, p.phi1, p.phi2, d.k), std::out_of_range);
  EXPECT_THROW(effective_channels(ch, p.phi1, p.phi2, -1), std::out_of_range);
}

TEST(Objective, MatchesDeterminantOracle) {
  std::mt19937_64 rng(25);
  SmallDims d;
  const ChannelSet ch = coirs::testing::random_channels(rng, d);
  SystemConfig cfg = coirs::testing::unit_snr_config(d);
  cfg.noise_eve_watts = 3.0;
  for (int trial = 0; trial < 5; ++trial) {
    const IteratePoint p = on_manifold(rng, d);
    const double expect = loop_objective(ch, p, cfg);
    EXPECT_NEAR(objective(ch, p, cfg), expect, 1e-10 * (1 + std::abs(expect)));
  }
}

TEST(Objective, ScalarClosedForm) {
  // M = 2, one stream, one antenna per receiver, one element per IRS.
  std::mt19937_64 rng(26);
  SmallDims d{2, 1, 1, 1, 1, 1, 1};
  const ChannelSet ch = coirs::testing::random_channels(rng, d);
  SystemConfig cfg = coirs::testing::unit_snr_config(d);
  cfg.noise_bob_watts = 0.5;
  cfg.noise_eve_watts = 2.0;
  const IteratePoint p = on_manifold(rng, d);
  auto h_row = [&](const CMatrix &g1, const CMatrix &g2) {
    const Complex f1 = p.phi1(0), f2 = p.phi2(0);
    Eigen::RowVector2cd h;
    for (int m = 0; m < 2; ++m)
      h(m) = g1(0, 0) * f1 * ch.g_a_i1[0](0, m) +
             g2(0, 0) * f2 *
                 (ch.g_a_i2[0](0, m) + ch.g_i1_i2[0](0, 0) * f1 * ch.g_a_i1[0](0, m));
    return h;
  };
  const Complex gb = (h_row(ch.g_i1_b[0], ch.g_i2_b[0]) * p.w_blocks[0])(0, 0);
  const Complex ge = (h_row(ch.g_i1_e[0], ch.g_i2_e[0]) * p.w_blocks[0])(0, 0);
  const double expect =
      std::log(1 + std::norm(ge) / 2.0) - std::log(1 + std::norm(gb) / 0.5);
  EXPECT_NEAR(objective(ch, p, cfg), expect, 1e-13);
}

TEST(Objective, ZeroPrecoderAndSilentEve) {
  std::mt19937_64 rng(27);
  SmallDims d;
  ChannelSet ch = coirs::testing::random_channels(rng, d);
  const SystemConfig cfg = coirs::testing::unit_snr_config(d);
  IteratePoint p = on_manifold(rng, d);
  IteratePoint zero = p;
  for (auto &b : zero.w_blocks)
    b.setZero();
  EXPECT_EQ(objective(ch, zero, cfg), 0.0);

  for (auto *fam : {&ch.g_i1_e, &ch.g_i2_e})
    for (auto &g : *fam)
      g.setZero();
  double expect = 0;
  for (int k = 0; k < d.k; ++k) {
    const CMatrix hw = effective_channels(ch, p.phi1, p.phi2, k).h_bob * p.w_blocks[k];
    expect -= std::log(
        (CMatrix::Identity(d.nb, d.nb) + hw * hw.adjoint()).determinant().real());
  }
  EXPECT_NEAR(objective(ch, p, cfg), expect, 1e-10);
}

TEST(Objective, StreamRotationInvariance) {
  std::mt19937_64 rng(28);
  SmallDims d;
  const ChannelSet ch = coirs::testing::random_channels(rng, d);
  const SystemConfig cfg = coirs::testing::unit_snr_config(d);
  const IteratePoint p = on_manifold(rng, d);
  IteratePoint rotated = p;
  for (auto &b : rotated.w_blocks) {
    const CMatrix q =
        coirs::testing::random_matrix(rng, d.ns, d.ns).householderQr().householderQ();
    b = b * q;
  }
  EXPECT_NEAR(objective(ch, p, cfg), objective(ch, rotated, cfg), 1e-12);
}

TEST(Objective, ShapeErrors) {
  std::mt19937_64 rng(29);
  SmallDims d;
  const ChannelSet ch = coirs::testing::random_channels(rng, d);
  const SystemConfig cfg = coirs::testing::unit_snr_config(d);
  IteratePoint p = on_manifold(rng, d);
  IteratePoint bad = p;
  bad.w_blocks.pop_back();
  EXPECT_THROW(objective(ch, bad, cfg), DimensionError);
  bad = p;
  bad.phi2.conservativeResize(d.n2 - 1);
  EXPECT_THROW(objective(ch, bad, cfg), DimensionError);
}

TEST(LogDet, MatchesDeterminant) {
  std::mt19937_64 rng(30);
  const CMatrix a = coirs::testing::random_matrix(rng, 5, 5);
  const CMatrix hpd = a * a.adjoint() + CMatrix::Identity(5, 5);
  EXPECT_NEAR(logdet_hpd(hpd), std::log(hpd.determinant().real()), 1e-12);
  EXPECT_THROW(logdet_hpd(-hpd), NumericError);
}

TEST(Gradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(31);
  SmallDims d;
  for (bool zero_cascade : {false, true}) {
    for (int trial = 0; trial < 5; ++trial) {
      ChannelSet ch = coirs::testing::random_channels(rng, d);
      if (zero_cascade)
        for (auto &g : ch.g_i1_i2)
          g.setZero();
      const SystemConfig cfg = coirs::testing::unit_snr_config(d);
      const IteratePoint p = on_manifold(rng, d);
      const TangentVector g = euclidean_gradient(ch, p, cfg).first;
      const TangentVector fd = coirs::testing::fd_gradient(
          [&](const IteratePoint &q) { return objective(ch, q, cfg); }, p);
      for (int k = 0; k < d.k; ++k)
        EXPECT_LT(coirs::testing::block_rel_error(g.xi_blocks[k], fd.xi_blocks[k]),
                  1e-5);
      EXPECT_LT(coirs::testing::block_rel_error(g.psi1, fd.psi1), 1e-5);
      EXPECT_LT(coirs::testing::block_rel_error(g.psi2, fd.psi2), 1e-5);
    }
  }
}

TEST(Gradient, DirectionalDerivative) {
  std::mt19937_64 rng(32);
  SmallDims d;
  const ChannelSet ch = coirs::testing::random_channels(rng, d);
  const SystemConfig cfg = coirs::testing::unit_snr_config(d);
  const IteratePoint p = on_manifold(rng, d);
  const TangentVector g = euclidean_gradient(ch, p, cfg).first;
  for (int trial = 0; trial < 5; ++trial) {
    const TangentVector u = coirs::testing::random_direction(rng, p);
    const double h = 1e-6;
    const double fd = (objective(ch, displaced(p, u, h), cfg) -
                       objective(ch, displaced(p, u, -h), cfg)) /
                      (2 * h);
    EXPECT_NEAR(manifold::inner(g, u), fd, 1e-6 * (1 + std::abs(fd)));
  }
}

TEST(Gradient, KernelMatchesReference) {
  std::mt19937_64 rng(33);
  SmallDims d{5, 2, 3, 2, 7, 4, 3};
  const ChannelSet ch = coirs::testing::random_channels(rng, d);
  SystemConfig cfg = coirs::testing::unit_snr_config(d);
  cfg.noise_bob_watts = 0.1;
  const SecrecyProblem prob = SecrecyProblem::make(ch, cfg);
  const IteratePoint p = on_manifold(rng, d);
  const Evaluation fast = evaluate(prob, p, true);
  const Evaluation ref = reference::evaluate(prob, p, true);
  EXPECT_NEAR(fast.value, ref.value, 1e-10 * (1 + std::abs(ref.value)));
  const double scale = manifold::norm(ref.gradient);
  EXPECT_LT(manifold::norm(fast.gradient - ref.gradient), 1e-10 * scale);
  EXPECT_TRUE(evaluate(prob, p, false).gradient.xi_blocks.empty());
}

TEST(Gradient, WorkspaceHoldsDenseIntermediates) {
  std::mt19937_64 rng(34);
  SmallDims d;
  const ChannelSet ch = coirs::testing::random_channels(rng, d);
  const SystemConfig cfg = coirs::testing::unit_snr_config(d);
  const IteratePoint p = on_manifold(rng, d);
  const auto [grad, ws] = euclidean_gradient(ch, p, cfg);
  ASSERT_EQ(ws.p_b.size(), static_cast<std::size_t>(d.k));
  for (int k = 0; k < d.k; ++k) {
    const auto eff = effective_channels(ch, p.phi1, p.phi2, k);
    const CMatrix &w = p.w_blocks[k];
    const CMatrix pb = CMatrix::Identity(d.nb, d.nb) +
                       eff.h_bob * w * w.adjoint() * eff.h_bob.adjoint();
    EXPECT_LT((ws.p_b[k] - pb).norm(), 1e-12 * pb.norm());
    EXPECT_LT((ws.q_b[k] - pb.inverse() * eff.h_bob).norm(),
              1e-10 * eff.h_bob.norm());
    EXPECT_LT((ws.m_i1[k] - w * w.adjoint() * ch.g_a_i1[k].adjoint()).norm(),
              1e-12 * ws.m_i1[k].norm());
    // dW block from the workspace: 2 (H_e^H Q_e - H_b^H Q_b) W
    const CMatrix gw = 2.0 * (eff.h_eve.adjoint() * ws.q_e[k] -
                              eff.h_bob.adjoint() * ws.q_b[k]) * w;
    EXPECT_LT((gw - grad.xi_blocks[k]).norm(), 1e-10 * gw.norm());
  }
}

TEST(SecrecyRates, ClippedPerSubcarrierAndMatchObjective) {
  std::mt19937_64 rng(35);
  SmallDims d{4, 2, 2, 2, 6, 6, 3};
  ChannelSet ch = coirs::testing::random_channels(rng, d);
  for (auto *fam : {&ch.g_i1_e, &ch.g_i2_e})
    for (auto &g : *fam)
      g *= 0.01;
  SystemConfig cfg = coirs::testing::unit_snr_config(d);
  cfg.power_watts = 4.0;
  const IteratePoint p = on_manifold(rng, d);
  std::vector<CMatrix> wp;
  for (const auto &w : p.w_blocks)
    wp.push_back(2.0 * w);
  const SecrecyRates r = secrecy_rates(ch, wp, p.phi1, p.phi2, cfg);
  ASSERT_EQ(r.per_k.size(), 3u);
  double sum = 0;
  for (double x : r.per_k) {
    EXPECT_GT(x, 0.0);
    sum += x;
  }
  EXPECT_NEAR(r.total, sum, 1e-12);
  EXPECT_NEAR(r.total, -objective(ch, p, cfg) / std::numbers::ln2, 1e-9);

  // Eve far stronger than Bob: every term clips to zero.
  for (auto *fam : {&ch.g_i1_e, &ch.g_i2_e})
    for (auto &g : *fam)
      g *= 1e4;
  const SecrecyRates clipped = secrecy_rates(ch, wp, p.phi1, p.phi2, cfg);
  for (double x : clipped.per_k)
    EXPECT_EQ(x, 0.0);
  EXPECT_EQ(clipped.total, 0.0);
}
