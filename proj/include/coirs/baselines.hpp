#pragma once

#include "coirs/channel.hpp"
#include "coirs/objective.hpp"
#include "coirs/optimizer.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace coirs {

enum class SchemeKind {
  proposed,
  gd_irs,
  aom_irs,
  dd_irs,
  sbob_irs,
  salice_irs,
  r_irs,
};

inline constexpr std::array<SchemeKind, 7> kAllSchemes = {
    SchemeKind::proposed, SchemeKind::aom_irs,    SchemeKind::gd_irs,
    SchemeKind::dd_irs,   SchemeKind::sbob_irs,   SchemeKind::salice_irs,
    SchemeKind::r_irs};

std::string_view to_string(SchemeKind k);
/// Throws std::invalid_argument for an unknown name.
SchemeKind parse_scheme(std::string_view name);

struct SchemeSpec {
  SchemeKind kind = SchemeKind::proposed;
  // Alternating-optimization schedule (aom_irs only).
  int ao_inner_iters = 50;
  double ao_inner_tol = 1e-4;
  int ao_outer_cycles = 100;
};

/// Everything needed to rebuild scheme-specific channels for one realization.
struct SchemeContext {
  SystemConfig cfg;
  SceneGeometry geo;
  std::uint64_t single_irs_seed = 0; // fading draws for relocated single IRS
  std::uint64_t phase_seed = 0;      // fixed random phases for r_irs
};

/// A scheme's view of a realization: the (true) channels it operates on,
/// which factors it may move, and any phases it must hold fixed.
struct RestrictedProblem {
  ChannelSet channels;
  BlockMask free;
  std::optional<CVector> fixed_phi1;
  std::optional<CVector> fixed_phi2;
};

/// Positions of the relocated single IRS.
inline constexpr Point2 kNearBobIrs{50.0, 10.0};
inline constexpr Point2 kNearAliceIrs{10.0, 10.0};

RestrictedProblem restricted_problem(const ChannelSet &ch, SchemeKind kind,
                                     const SchemeContext &ctx);

/// Euclidean gradient step on the raw variables, Armijo on the unconstrained
/// objective, then projection back onto the manifold. Not monotone.
RunResult gd_irs_solve(const Problem &problem, const IteratePoint &init,
                       const OptimizerConfig &cfg);

/// Cyclic block RGD over W, phi1, phi2 (only the factors free in
/// `problem.free`). objective_trace has one entry per inner iterate;
/// grad_norm_trace holds the joint Riemannian gradient norm at the start and
/// after every cycle.
RunResult aom_irs_solve(const Problem &problem, const IteratePoint &init,
                        const OptimizerConfig &cfg, const SchemeSpec &spec);

/// Outcome of one scheme on one realization.
struct SchemeOutcome {
  RunResult run;
  SecrecyRates rates;       // on the true channels
  std::vector<CMatrix> w_physical;
};

/// Builds the restricted problem on the true channels, optionally optimizes
/// on CEE-corrupted estimates, and evaluates secrecy on the true channels.
SchemeOutcome solve_scheme(const SchemeSpec &spec, const ChannelSet &true_ch,
                           const SchemeContext &ctx,
                           const OptimizerConfig &opt, std::uint64_t init_seed,
                           const CeeConfig &cee = {},
                           std::uint64_t cee_seed = 0);

} // namespace coirs
