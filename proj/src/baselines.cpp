#include "coirs/baselines.hpp"

#include "coirs/manifold.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace coirs {

std::string_view to_string(SchemeKind k) {
  switch (k) {
  case SchemeKind::proposed:
    return "proposed";
  case SchemeKind::gd_irs:
    return "gd_irs";
  case SchemeKind::aom_irs:
    return "aom_irs";
  case SchemeKind::dd_irs:
    return "dd_irs";
  case SchemeKind::sbob_irs:
    return "sbob_irs";
  case SchemeKind::salice_irs:
    return "salice_irs";
  case SchemeKind::r_irs:
    return "r_irs";
  }
  return "unknown";
}

SchemeKind parse_scheme(std::string_view name) {
  for (SchemeKind k : kAllSchemes)
    if (to_string(k) == name)
      return k;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

RestrictedProblem restricted_problem(const ChannelSet &ch, SchemeKind kind,
                                     const SchemeContext &ctx) {
  RestrictedProblem rp{ch, BlockMask{}, std::nullopt, std::nullopt};
  switch (kind) {
  case SchemeKind::proposed:
  case SchemeKind::gd_irs:
  case SchemeKind::aom_irs:
    break;
  case SchemeKind::dd_irs:
    for (auto &m : rp.channels.g_i1_i2)
      m.setZero();
    break;
  case SchemeKind::sbob_irs:
  case SchemeKind::salice_irs: {
    // The relocated IRS takes the exponents of the double-IRS slot at the
    // same site: near Bob like IRS 2, near Alice like IRS 1.
    const auto &ex = ctx.geo.exponents;
    const bool near_bob = kind == SchemeKind::sbob_irs;
    const SingleIrsExponents zeta =
        near_bob ? SingleIrsExponents{ex.a_i2, ex.i2_b, ex.i2_e}
                 : SingleIrsExponents{ex.a_i1, ex.i1_b, ex.i1_e};
    rp.channels = generate_single_irs(
        ctx.cfg, ctx.geo, near_bob ? kNearBobIrs : kNearAliceIrs,
        ctx.cfg.n_irs1 + ctx.cfg.n_irs2, zeta, ctx.single_irs_seed);
    break;
  }
  case SchemeKind::r_irs: {
    std::mt19937_64 rng(ctx.phase_seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    CVector p1(ch.n_irs1), p2(ch.n_irs2);
    for (auto &z : p1)
      z = std::polar(1.0, angle(rng));
    for (auto &z : p2)
      z = std::polar(1.0, angle(rng));
    rp.fixed_phi1 = std::move(p1);
    rp.fixed_phi2 = std::move(p2);
    rp.free = BlockMask{true, false, false};
    break;
  }
  }
  return rp;
}

RunResult gd_irs_solve(const Problem &problem, const IteratePoint &init,
                       const OptimizerConfig &cfg) {
  cfg.validate();
  RunResult res;
  IteratePoint x = init;
  Evaluation ev = problem.evaluate(x, true);
  for (;;) {
    const TangentVector rgrad = riemannian_gradient(problem, x, ev.gradient);
    const double gnorm = manifold::norm(rgrad);
    res.objective_trace.push_back(ev.value);
    res.grad_norm_trace.push_back(gnorm);
    res.constraint_trace.push_back(manifold::constraint_residual(x));
    res.tangency_trace.push_back(manifold::tangency_residual(x, rgrad));
    if (gnorm <= cfg.grad_tol) {
      res.converged = true;
      res.stop = StopReason::converged;
      break;
    }
    if (res.iterations_used >= cfg.max_iters) {
      res.stop = StopReason::max_iters;
      break;
    }

    TangentVector egrad = ev.gradient;
    if (!problem.free.w)
      for (auto &b : egrad.xi_blocks)
        b.setZero();
    if (!problem.free.phi1)
      egrad.psi1.setZero();
    if (!problem.free.phi2)
      egrad.psi2.setZero();
    const double sq_norm = manifold::inner(egrad, egrad);

    // Armijo on the ambient objective; the accepted raw point is projected.
    std::optional<IteratePoint> accepted;
    double alpha = cfg.armijo_init;
    for (int j = 0; j <= cfg.armijo_max_backtracks; ++j, alpha *= cfg.armijo_shrink) {
      IteratePoint raw = displaced(x, egrad, -alpha);
      if (problem.evaluate(raw, false).value - ev.value <= -0.5 * alpha * sq_norm) {
        accepted = std::move(raw);
        break;
      }
    }
    if (!accepted) {
      res.stop = StopReason::line_search_failed;
      res.failure = "ambient Armijo search exhausted its backtracking budget";
      break;
    }
    x = manifold::retract(*accepted);
    res.step_trace.push_back(alpha);
    ++res.iterations_used;
    ev = problem.evaluate(x, true);
  }
  res.final_point = std::move(x);
  return res;
}

RunResult aom_irs_solve(const Problem &problem, const IteratePoint &init,
                        const OptimizerConfig &cfg, const SchemeSpec &spec) {
  cfg.validate();
  OptimizerConfig inner = cfg;
  inner.max_iters = spec.ao_inner_iters;
  inner.grad_tol = spec.ao_inner_tol;

  const BlockMask blocks[] = {{true, false, false},
                              {false, true, false},
                              {false, false, true}};
  auto joint_norm = [&](const IteratePoint &x) {
    return manifold::norm(riemannian_gradient(problem, x));
  };

  RunResult res;
  IteratePoint x = init;
  res.objective_trace.push_back(problem.evaluate(x, false).value);
  res.grad_norm_trace.push_back(joint_norm(x));
  res.constraint_trace.push_back(manifold::constraint_residual(x));

  for (int cycle = 0; cycle < spec.ao_outer_cycles; ++cycle) {
    if (res.grad_norm_trace.back() <= cfg.grad_tol) {
      res.converged = true;
      res.stop = StopReason::converged;
      break;
    }
    int moved = 0;
    for (const BlockMask &b : blocks) {
      Problem sub = problem;
      sub.free = {b.w && problem.free.w, b.phi1 && problem.free.phi1,
                  b.phi2 && problem.free.phi2};
      if (!sub.free.w && !sub.free.phi1 && !sub.free.phi2)
        continue;
      RunResult r = solve(sub, x, inner);
      res.objective_trace.insert(res.objective_trace.end(),
                                 r.objective_trace.begin() + 1,
                                 r.objective_trace.end());
      res.constraint_trace.insert(res.constraint_trace.end(),
                                  r.constraint_trace.begin() + 1,
                                  r.constraint_trace.end());
      res.tangency_trace.insert(res.tangency_trace.end(),
                                r.tangency_trace.begin(),
                                r.tangency_trace.end());
      res.step_trace.insert(res.step_trace.end(), r.step_trace.begin(),
                            r.step_trace.end());
      res.iterations_used += r.iterations_used;
      moved += r.iterations_used;
      x = std::move(r.final_point);
    }
    res.grad_norm_trace.push_back(joint_norm(x));
    if (moved == 0) {
      // Every block is either stationary or stuck in its line search.
      res.converged = res.grad_norm_trace.back() <= cfg.grad_tol;
      res.stop = res.converged ? StopReason::converged
                               : StopReason::line_search_failed;
      if (!res.converged)
        res.failure = "no block made progress in a full cycle";
      break;
    }
  }
  if (!res.converged && res.stop != StopReason::line_search_failed) {
    res.converged = res.grad_norm_trace.back() <= cfg.grad_tol;
    res.stop = res.converged ? StopReason::converged : StopReason::max_iters;
  }
  res.final_point = std::move(x);
  return res;
}

SchemeOutcome solve_scheme(const SchemeSpec &spec, const ChannelSet &true_ch,
                           const SchemeContext &ctx,
                           const OptimizerConfig &opt, std::uint64_t init_seed,
                           const CeeConfig &cee, std::uint64_t cee_seed) {
  RestrictedProblem rp = restricted_problem(true_ch, spec.kind, ctx);
  const ChannelSet &truth = rp.channels;
  ChannelSet estimate = inject_cee(truth, cee, cee_seed);

  IteratePoint init = random_point(truth.m_tx, ctx.cfg.n_streams,
                                   truth.n_sub(), truth.n_irs1, truth.n_irs2,
                                   init_seed);
  if (rp.fixed_phi1)
    init.phi1 = *rp.fixed_phi1;
  if (rp.fixed_phi2)
    init.phi2 = *rp.fixed_phi2;

  Problem problem =
      Problem::secrecy(SecrecyProblem::make(std::move(estimate), ctx.cfg),
                       rp.free);
  SchemeOutcome out;
  switch (spec.kind) {
  case SchemeKind::gd_irs:
    out.run = gd_irs_solve(problem, init, opt);
    break;
  case SchemeKind::aom_irs:
    out.run = aom_irs_solve(problem, init, opt, spec);
    break;
  default:
    out.run = solve(problem, init, opt);
    break;
  }
  const double scale = std::sqrt(ctx.cfg.power_watts);
  for (const auto &w : out.run.final_point.w_blocks)
    out.w_physical.push_back(scale * w);
  out.rates = secrecy_rates(truth, out.w_physical, out.run.final_point.phi1,
                            out.run.final_point.phi2, ctx.cfg);
  return out;
}

} // namespace coirs
