#include "coirs/baselines.hpp"
#include "coirs/manifold.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace coirs;

namespace {

SystemConfig small_config() {
  SystemConfig cfg;
  cfg.m_tx = 4;
  cfg.n_irs1 = 6;
  cfg.n_irs2 = 6;
  cfg.n_sub = 2;
  return cfg;
}

SchemeContext context(const SystemConfig &cfg) {
  return {cfg, SceneGeometry{}, 101, 202};
}

OptimizerConfig short_run(int iters = 60) {
  OptimizerConfig o;
  o.max_iters = iters;
  return o;
}

} // namespace

TEST(Schemes, NamesRoundTrip) {
  for (SchemeKind k : kAllSchemes)
    EXPECT_EQ(parse_scheme(to_string(k)), k);
  EXPECT_THROW(parse_scheme("bogus"), std::invalid_argument);
}

TEST(Restricted, SchemeViews) {
  const SystemConfig cfg = small_config();
  const ChannelSet ch = generate(cfg, SceneGeometry{}, 3);
  const SchemeContext ctx = context(cfg);

  const auto dd = restricted_problem(ch, SchemeKind::dd_irs, ctx);
  for (const auto &g : dd.channels.g_i1_i2)
    EXPECT_EQ(g.norm(), 0.0);
  EXPECT_EQ(dd.channels.g_a_i1[0], ch.g_a_i1[0]);

  const auto sb = restricted_problem(ch, SchemeKind::sbob_irs, ctx);
  EXPECT_EQ(sb.channels.n_irs1, cfg.n_irs1 + cfg.n_irs2);
  EXPECT_EQ(sb.channels.n_irs2, 0);
  const auto sa = restricted_problem(ch, SchemeKind::salice_irs, ctx);
  EXPECT_EQ(sa.channels.n_irs1, cfg.n_irs1 + cfg.n_irs2);

  const auto r = restricted_problem(ch, SchemeKind::r_irs, ctx);
  ASSERT_TRUE(r.fixed_phi1 && r.fixed_phi2);
  EXPECT_FALSE(r.free.phi1 || r.free.phi2);
  EXPECT_TRUE(r.free.w);
  for (int n = 0; n < cfg.n_irs1; ++n)
    EXPECT_NEAR(std::abs((*r.fixed_phi1)(n)), 1.0, 1e-15);
}

TEST(Restricted, SingleIrsUsesSiteExponents) {
  // Near Bob the Alice link is as lossy as Alice -> IRS 2 in the double-IRS
  // scene; near Alice it matches Alice -> IRS 1.
  SystemConfig cfg = small_config();
  cfg.n_sub = 40;
  const SceneGeometry geo;
  const ChannelSet ch = generate(cfg, geo, 4);
  const SchemeContext ctx = context(cfg);
  auto power = [](const std::vector<CMatrix> &fam) {
    double s = 0, n = 0;
    for (const auto &g : fam) {
      s += g.squaredNorm();
      n += static_cast<double>(g.size());
    }
    return s / n;
  };
  const auto sb = restricted_problem(ch, SchemeKind::sbob_irs, ctx);
  const double want_b = path_loss_linear(distance(geo.pos_alice, kNearBobIrs),
                                         geo.exponents.a_i2, geo);
  EXPECT_NEAR(power(sb.channels.g_a_i1) / want_b, 1.0, 0.05);
  const auto sa = restricted_problem(ch, SchemeKind::salice_irs, ctx);
  const double want_a = path_loss_linear(distance(kNearAliceIrs, geo.pos_bob),
                                         geo.exponents.i1_b, geo);
  EXPECT_NEAR(power(sa.channels.g_i1_b) / want_a, 1.0, 0.1);
}

TEST(DdIrs, MatchesProposedWithoutCascade) {
  const SystemConfig cfg = small_config();
  ChannelSet ch = generate(cfg, SceneGeometry{}, 5);
  for (auto &g : ch.g_i1_i2)
    g.setZero();
  const SchemeContext ctx = context(cfg);
  const auto a = solve_scheme({SchemeKind::proposed}, ch, ctx, short_run(), 9);
  const auto b = solve_scheme({SchemeKind::dd_irs}, ch, ctx, short_run(), 9);
  EXPECT_EQ(a.run.objective_trace, b.run.objective_trace);
  EXPECT_EQ(a.rates.total, b.rates.total);
}

TEST(RIrs, PhasesStayFixed) {
  const SystemConfig cfg = small_config();
  const ChannelSet ch = generate(cfg, SceneGeometry{}, 6);
  const SchemeContext ctx = context(cfg);
  const auto rp = restricted_problem(ch, SchemeKind::r_irs, ctx);
  const auto out = solve_scheme({SchemeKind::r_irs}, ch, ctx, short_run(), 9);
  EXPECT_EQ(out.run.final_point.phi1, *rp.fixed_phi1);
  EXPECT_EQ(out.run.final_point.phi2, *rp.fixed_phi2);
  EXPECT_GT(out.run.iterations_used, 0);
}

TEST(Aom, WithPhasesFixedEqualsSphereOnlyDescent) {
  const SystemConfig cfg = small_config();
  const ChannelSet ch = generate(cfg, SceneGeometry{}, 7);
  const Problem p = Problem::secrecy(SecrecyProblem::make(ch, cfg),
                                     {true, false, false});
  const IteratePoint init = random_point(4, 2, 2, 6, 6, 8);
  SchemeSpec spec{SchemeKind::aom_irs};
  spec.ao_inner_iters = 40;
  spec.ao_outer_cycles = 1;
  OptimizerConfig opt = short_run(40);
  spec.ao_inner_tol = opt.grad_tol;
  const RunResult ao = aom_irs_solve(p, init, opt, spec);
  const RunResult sphere = solve(p, init, opt);
  EXPECT_EQ(ao.objective_trace, sphere.objective_trace);
  EXPECT_EQ(ao.final_point.w_blocks[1], sphere.final_point.w_blocks[1]);
}

TEST(Aom, MonotoneAcrossBlockUpdates) {
  const SystemConfig cfg = small_config();
  const ChannelSet ch = generate(cfg, SceneGeometry{}, 8);
  const Problem p = Problem::secrecy(SecrecyProblem::make(ch, cfg));
  SchemeSpec spec{SchemeKind::aom_irs};
  spec.ao_inner_iters = 10;
  spec.ao_outer_cycles = 5;
  const RunResult r = aom_irs_solve(p, random_point(4, 2, 2, 6, 6, 1),
                                    short_run(), spec);
  ASSERT_GT(r.objective_trace.size(), 2u);
  for (std::size_t q = 0; q + 1 < r.objective_trace.size(); ++q)
    EXPECT_LE(r.objective_trace[q + 1], r.objective_trace[q]);
  for (double c : r.constraint_trace)
    EXPECT_LE(c, 1e-10);
  EXPECT_EQ(r.grad_norm_trace.size(), 6u);
}

TEST(GdIrs, ProjectsBackOntoManifold) {
  const SystemConfig cfg = small_config();
  const ChannelSet ch = generate(cfg, SceneGeometry{}, 9);
  const SchemeContext ctx = context(cfg);
  const auto out = solve_scheme({SchemeKind::gd_irs}, ch, ctx, short_run(), 3);
  for (double c : out.run.constraint_trace)
    EXPECT_LE(c, 1e-12);
  EXPECT_GT(out.run.iterations_used, 0);
  EXPECT_LT(out.run.objective_trace.back(), out.run.objective_trace.front());
}

TEST(SolveScheme, PowerAndTruthEvaluation) {
  SystemConfig cfg = small_config();
  cfg.power_watts = 2.0;
  const ChannelSet ch = generate(cfg, SceneGeometry{}, 10);
  const SchemeContext ctx = context(cfg);
  for (SchemeKind k : kAllSchemes) {
    SchemeSpec spec{k};
    spec.ao_outer_cycles = 2;
    spec.ao_inner_iters = 5;
    const auto out = solve_scheme(spec, ch, ctx, short_run(20), 4, {0.05}, 5);
    double power = 0;
    for (const auto &w : out.w_physical)
      power += w.squaredNorm();
    EXPECT_NEAR(power, 2.0, 1e-9) << to_string(k);
    EXPECT_GE(out.rates.total, 0.0);
    EXPECT_TRUE(std::isfinite(out.rates.total));
  }
}
