#pragma once

#include "coirs/types.hpp"

#include <memory>
#include <vector>

namespace coirs {

/// Effective Alice->Bob and Alice->Eve channels on one subcarrier.
struct EffectiveChannels {
  CMatrix h_bob; // N_b x M
  CMatrix h_eve; // N_e x M
};

/// Dense per-subcarrier intermediates of the gradient. Only built on request
/// since the optimizer never needs them.
struct GradientWorkspace {
  std::vector<CMatrix> p_b, p_e; // regularized Gram matrices, N x N
  std::vector<CMatrix> q_b, q_e; // (P/sigma^2) P^{-1} H, N x M
  std::vector<CMatrix> m_i1;     // W W^H G_a_i1^H, M x N_i1
  std::vector<CMatrix> m_i2;     // W W^H G_a_i2^H, M x N_i2
};

struct SecrecyRates {
  std::vector<double> per_k; // bits/s/Hz, clipped at zero
  double total = 0.0;
};

/// A channel realization plus the two link SNR scales P/sigma_b^2 and
/// P/sigma_e^2. Cheap to copy; the channels are shared read-only.
struct SecrecyProblem {
  std::shared_ptr<const ChannelSet> channels;
  double snr_bob = 1.0;
  double snr_eve = 1.0;

  static SecrecyProblem make(ChannelSet ch, const SystemConfig &cfg);

  const ChannelSet &ch() const { return *channels; }
};

/// Objective value and (optionally) the Euclidean gradient for one point.
struct Evaluation {
  double value = 0.0;
  TangentVector gradient; // empty when not requested
};

EffectiveChannels effective_channels(const ChannelSet &ch, const CVector &phi1,
                                     const CVector &phi2, int k);

/// Sum over subcarriers of logdet(P_e,k) - logdet(P_b,k), natural log. Equals
/// -ln(2) times the unclipped secrecy sum rate.
double objective(const SecrecyProblem &prob, const IteratePoint &pt);
double objective(const ChannelSet &ch, const IteratePoint &pt,
                 const SystemConfig &cfg);

/// Gradient in the 2 d f / d conj(z) convention, so that the real directional
/// derivative along u is Re<grad, u>.
std::pair<TangentVector, GradientWorkspace>
euclidean_gradient(const SecrecyProblem &prob, const IteratePoint &pt);
std::pair<TangentVector, GradientWorkspace>
euclidean_gradient(const ChannelSet &ch, const IteratePoint &pt,
                   const SystemConfig &cfg);

/// Per-subcarrier kernel, parallel over subcarriers. Reduction order is
/// fixed, so results do not depend on the thread count.
Evaluation evaluate(const SecrecyProblem &prob, const IteratePoint &pt,
                    bool with_gradient);

/// `w_physical` are the de-normalized precoders sqrt(P) * W_hat blocks.
SecrecyRates secrecy_rates(const ChannelSet &ch,
                           const std::vector<CMatrix> &w_physical,
                           const CVector &phi1, const CVector &phi2,
                           const SystemConfig &cfg);

/// log det of a Hermitian positive definite matrix via Cholesky.
double logdet_hpd(const CMatrix &a);

namespace reference {

/// Serial dense evaluation that forms every matrix in the gradient formulas
/// explicitly (effective channels, explicit inverses, diag extraction). Slow;
/// kept as a cross-check for `evaluate`.
Evaluation evaluate(const SecrecyProblem &prob, const IteratePoint &pt,
                    bool with_gradient);

} // namespace reference

} // namespace coirs
