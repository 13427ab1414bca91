#include "coirs/objective.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace coirs {

namespace {

std::shared_ptr<const ChannelSet> borrow(const ChannelSet &ch) {
  return std::shared_ptr<const ChannelSet>(&ch, [](const ChannelSet *) {});
}

SecrecyProblem borrowed_problem(const ChannelSet &ch, const SystemConfig &cfg) {
  SecrecyProblem p;
  p.channels = borrow(ch);
  p.snr_bob = cfg.power_watts / cfg.noise_bob_watts;
  p.snr_eve = cfg.power_watts / cfg.noise_eve_watts;
  return p;
}

void check_point(const ChannelSet &ch, const IteratePoint &pt) {
  if (static_cast<int>(pt.w_blocks.size()) != ch.n_sub())
    throw DimensionError("point has " + std::to_string(pt.w_blocks.size()) +
                         " precoder blocks, channels have " +
                         std::to_string(ch.n_sub()) + " subcarriers");
  if (pt.phi1.size() != ch.n_irs1 || pt.phi2.size() != ch.n_irs2)
    throw DimensionError("phase vector lengths do not match IRS sizes");
  for (const auto &w : pt.w_blocks)
    if (w.rows() != ch.m_tx)
      throw DimensionError("precoder block row count does not match m_tx");
}

// Everything one subcarrier contributes. The transmit-side products are
// reused between Bob and Eve; no N x M effective channel is ever formed.
struct SubcarrierTerms {
  double value = 0.0;
  CMatrix grad_w;
  CVector grad_phi1;
  CVector grad_phi2;
};

struct LinkSolve {
  double logdet = 0.0;
  CMatrix z; // (snr) P^{-1} H W
};

LinkSolve solve_link(const CMatrix &hw, double snr) {
  const auto n = hw.rows();
  CMatrix gram = CMatrix::Identity(n, n);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(hw, snr);
  Eigen::LLT<CMatrix> llt(gram);
  if (llt.info() != Eigen::Success)
    throw NumericError("Cholesky factorization of regularized Gram failed");
  LinkSolve out;
  out.logdet = 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
  out.z = snr * llt.solve(hw);
  return out;
}

SubcarrierTerms subcarrier_terms(const SecrecyProblem &prob,
                                 const IteratePoint &pt, int k,
                                 bool with_gradient) {
  const ChannelSet &ch = prob.ch();
  const CMatrix &w = pt.w_blocks[k];
  const auto phi1 = pt.phi1.array();
  const auto phi2 = pt.phi2.array();

  // T = G_a_i1 W, V = (G_a_i2 + G_i1_i2 diag(phi1) G_a_i1) W
  const CMatrix t = ch.g_a_i1[k] * w;
  const CMatrix s1 = t.array().colwise() * phi1;
  const CMatrix v = ch.g_a_i2[k] * w + ch.g_i1_i2[k] * s1;
  const CMatrix s2 = v.array().colwise() * phi2;

  const CMatrix hbw = ch.g_i1_b[k] * s1 + ch.g_i2_b[k] * s2;
  const CMatrix hew = ch.g_i1_e[k] * s1 + ch.g_i2_e[k] * s2;

  const LinkSolve bob = solve_link(hbw, prob.snr_bob);
  const LinkSolve eve = solve_link(hew, prob.snr_eve);

  SubcarrierTerms out;
  out.value = eve.logdet - bob.logdet;
  if (!with_gradient)
    return out;

  const CMatrix u = ch.g_i2_e[k].adjoint() * eve.z -
                    ch.g_i2_b[k].adjoint() * bob.z;
  const CMatrix u_rot = u.array().colwise() * phi2.conjugate();
  const CMatrix r = ch.g_i1_e[k].adjoint() * eve.z -
                    ch.g_i1_b[k].adjoint() * bob.z +
                    ch.g_i1_i2[k].adjoint() * u_rot;
  const CMatrix r_rot = r.array().colwise() * phi1.conjugate();

  out.grad_w = 2.0 * (ch.g_a_i1[k].adjoint() * r_rot +
                      ch.g_a_i2[k].adjoint() * u_rot);
  out.grad_phi1 = 2.0 * (r.array() * t.array().conjugate()).rowwise().sum();
  out.grad_phi2 = 2.0 * (u.array() * v.array().conjugate()).rowwise().sum();
  return out;
}

} // namespace

SecrecyProblem SecrecyProblem::make(ChannelSet ch, const SystemConfig &cfg) {
  cfg.validate();
  ch.validate();
  SecrecyProblem p;
  p.channels = std::make_shared<const ChannelSet>(std::move(ch));
  p.snr_bob = cfg.power_watts / cfg.noise_bob_watts;
  p.snr_eve = cfg.power_watts / cfg.noise_eve_watts;
  return p;
}

double logdet_hpd(const CMatrix &a) {
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success)
    throw NumericError("matrix is not Hermitian positive definite");
  return 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
}

EffectiveChannels effective_channels(const ChannelSet &ch, const CVector &phi1,
                                     const CVector &phi2, int k) {
  if (k < 0 || k >= ch.n_sub())
    throw std::out_of_range("subcarrier index " + std::to_string(k) +
                            " out of range");
  if (phi1.size() != ch.n_irs1 || phi2.size() != ch.n_irs2)
    throw DimensionError("phase vector lengths do not match IRS sizes");
  // diag(phi1) G_a_i1 and the transmit side of the IRS 2 reflection.
  const CMatrix d1_a = ch.g_a_i1[k].array().colwise() * phi1.array();
  const CMatrix to_irs2 = ch.g_a_i2[k] + ch.g_i1_i2[k] * d1_a;
  const CMatrix d2_b = to_irs2.array().colwise() * phi2.array();
  return {ch.g_i1_b[k] * d1_a + ch.g_i2_b[k] * d2_b,
          ch.g_i1_e[k] * d1_a + ch.g_i2_e[k] * d2_b};
}

Evaluation evaluate(const SecrecyProblem &prob, const IteratePoint &pt,
                    bool with_gradient) {
  const ChannelSet &ch = prob.ch();
  check_point(ch, pt);
  const int n_sub = ch.n_sub();
  std::vector<SubcarrierTerms> terms(static_cast<std::size_t>(n_sub));

  // Subcarriers are independent; each thread writes its own slot.
#pragma omp parallel for schedule(static) if (n_sub > 1)
  for (int k = 0; k < n_sub; ++k)
    terms[static_cast<std::size_t>(k)] =
        subcarrier_terms(prob, pt, k, with_gradient);

  Evaluation out;
  for (const auto &t : terms)
    out.value += t.value;
  if (!with_gradient)
    return out;

  out.gradient.psi1 = CVector::Zero(ch.n_irs1);
  out.gradient.psi2 = CVector::Zero(ch.n_irs2);
  out.gradient.xi_blocks.reserve(terms.size());
  for (auto &t : terms) {
    out.gradient.xi_blocks.push_back(std::move(t.grad_w));
    out.gradient.psi1 += t.grad_phi1;
    out.gradient.psi2 += t.grad_phi2;
  }
  return out;
}

double objective(const SecrecyProblem &prob, const IteratePoint &pt) {
  return evaluate(prob, pt, false).value;
}

double objective(const ChannelSet &ch, const IteratePoint &pt,
                 const SystemConfig &cfg) {
  return objective(borrowed_problem(ch, cfg), pt);
}

std::pair<TangentVector, GradientWorkspace>
euclidean_gradient(const SecrecyProblem &prob, const IteratePoint &pt) {
  Evaluation ev = evaluate(prob, pt, true);
  const ChannelSet &ch = prob.ch();
  GradientWorkspace ws;
  for (int k = 0; k < ch.n_sub(); ++k) {
    const auto eff = effective_channels(ch, pt.phi1, pt.phi2, k);
    const CMatrix &w = pt.w_blocks[k];
    const CMatrix wwh = w * w.adjoint();
    auto gram = [&](const CMatrix &h, double snr) {
      return CMatrix(CMatrix::Identity(h.rows(), h.rows()) +
                     snr * h * wwh * h.adjoint());
    };
    ws.p_b.push_back(gram(eff.h_bob, prob.snr_bob));
    ws.p_e.push_back(gram(eff.h_eve, prob.snr_eve));
    ws.q_b.push_back(prob.snr_bob * ws.p_b.back().llt().solve(eff.h_bob));
    ws.q_e.push_back(prob.snr_eve * ws.p_e.back().llt().solve(eff.h_eve));
    ws.m_i1.push_back(wwh * ch.g_a_i1[k].adjoint());
    ws.m_i2.push_back(wwh * ch.g_a_i2[k].adjoint());
  }
  return {std::move(ev.gradient), std::move(ws)};
}

std::pair<TangentVector, GradientWorkspace>
euclidean_gradient(const ChannelSet &ch, const IteratePoint &pt,
                   const SystemConfig &cfg) {
  return euclidean_gradient(borrowed_problem(ch, cfg), pt);
}

SecrecyRates secrecy_rates(const ChannelSet &ch,
                           const std::vector<CMatrix> &w_physical,
                           const CVector &phi1, const CVector &phi2,
                           const SystemConfig &cfg) {
  if (static_cast<int>(w_physical.size()) != ch.n_sub())
    throw DimensionError("precoder count does not match subcarrier count");
  SecrecyRates out;
  out.per_k.reserve(w_physical.size());
  for (int k = 0; k < ch.n_sub(); ++k) {
    const auto eff = effective_channels(ch, phi1, phi2, k);
    const CMatrix &w = w_physical[static_cast<std::size_t>(k)];
    if (w.rows() != ch.m_tx)
      throw DimensionError("precoder row count does not match m_tx");
    auto rate = [&](const CMatrix &h, double noise) {
      const CMatrix hw = h * w;
      CMatrix gram = CMatrix::Identity(h.rows(), h.rows()) +
                     (1.0 / noise) * hw * hw.adjoint();
      return logdet_hpd(gram) / std::numbers::ln2;
    };
    const double diff =
        rate(eff.h_bob, cfg.noise_bob_watts) - rate(eff.h_eve, cfg.noise_eve_watts);
    out.per_k.push_back(std::max(0.0, diff));
    out.total += out.per_k.back();
  }
  return out;
}

} // namespace coirs
