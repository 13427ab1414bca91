#include "coirs/objective.hpp"

#include <cmath>

namespace coirs::reference {

namespace {

CMatrix diag(const CVector &v) { return v.asDiagonal(); }

} // namespace

Evaluation evaluate(const SecrecyProblem &prob, const IteratePoint &pt,
                    bool with_gradient) {
  const ChannelSet &ch = prob.ch();
  const CMatrix d1 = diag(pt.phi1);
  const CMatrix d2 = diag(pt.phi2);

  Evaluation out;
  if (with_gradient) {
    out.gradient = TangentVector::zeros_like(pt);
  }
  for (int k = 0; k < ch.n_sub(); ++k) {
    const CMatrix &w = pt.w_blocks[k];
    const CMatrix hb = ch.g_i1_b[k] * d1 * ch.g_a_i1[k] +
                       ch.g_i2_b[k] * d2 * ch.g_a_i2[k] +
                       ch.g_i2_b[k] * d2 * ch.g_i1_i2[k] * d1 * ch.g_a_i1[k];
    const CMatrix he = ch.g_i1_e[k] * d1 * ch.g_a_i1[k] +
                       ch.g_i2_e[k] * d2 * ch.g_a_i2[k] +
                       ch.g_i2_e[k] * d2 * ch.g_i1_i2[k] * d1 * ch.g_a_i1[k];
    const CMatrix wwh = w * w.adjoint();
    const CMatrix pb = CMatrix::Identity(ch.n_bob, ch.n_bob) +
                       prob.snr_bob * hb * wwh * hb.adjoint();
    const CMatrix pe = CMatrix::Identity(ch.n_eve, ch.n_eve) +
                       prob.snr_eve * he * wwh * he.adjoint();
    // Determinant of a Hermitian matrix is real; take log of its real part.
    out.value += std::log(pe.determinant().real()) -
                 std::log(pb.determinant().real());
    if (!with_gradient)
      continue;

    const CMatrix qb = prob.snr_bob * pb.inverse() * hb;
    const CMatrix qe = prob.snr_eve * pe.inverse() * he;
    const CMatrix m1 = wwh * ch.g_a_i1[k].adjoint();
    const CMatrix m2 = wwh * ch.g_a_i2[k].adjoint();

    out.gradient.xi_blocks[k] =
        2.0 * (he.adjoint() * qe - hb.adjoint() * qb) * w;

    const CMatrix irs2_diff =
        ch.g_i2_e[k].adjoint() * qe - ch.g_i2_b[k].adjoint() * qb;
    const CMatrix g1 = (ch.g_i1_e[k].adjoint() * qe -
                        ch.g_i1_b[k].adjoint() * qb +
                        ch.g_i1_i2[k].adjoint() * d2.adjoint() * irs2_diff) *
                       m1;
    const CMatrix g2 =
        irs2_diff * (m2 + m1 * d1.adjoint() * ch.g_i1_i2[k].adjoint());
    out.gradient.psi1 += 2.0 * g1.diagonal();
    out.gradient.psi2 += 2.0 * g2.diagonal();
  }
  return out;
}

} // namespace coirs::reference
