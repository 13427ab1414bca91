#include "coirs/manifold.hpp"

#include <algorithm>
#include <cmath>

namespace coirs::manifold {

namespace {

// Re{Tr(A^H B)} summed over blocks.
double real_trace_inner(const std::vector<CMatrix> &a,
                        const std::vector<CMatrix> &b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    s += (a[k].array().conjugate() * b[k].array()).real().sum();
  return s;
}

CVector project_circle(const CVector &phi, const CVector &d) {
  const Eigen::ArrayXd radial = (d.array().conjugate() * phi.array()).real();
  return (d.array() - radial.cast<Complex>() * phi.array()).matrix();
}

CVector normalize_phases(const CVector &raw, const char *which) {
  CVector out(raw.size());
  for (Eigen::Index n = 0; n < raw.size(); ++n) {
    const double r = std::abs(raw[n]);
    if (!(r > 0.0) || !std::isfinite(r))
      throw DegenerateRetractionError(std::string("cannot retract ") + which +
                                      ": entry " + std::to_string(n) +
                                      " has modulus " + std::to_string(r));
    out[n] = raw[n] / r;
  }
  return out;
}

} // namespace

TangentVector project_to_tangent(const IteratePoint &base,
                                 const TangentVector &ambient) {
  check_same_shape(base, ambient);
  TangentVector out;
  const double radial = real_trace_inner(ambient.xi_blocks, base.w_blocks);
  out.xi_blocks.reserve(base.w_blocks.size());
  for (std::size_t k = 0; k < base.w_blocks.size(); ++k)
    out.xi_blocks.push_back(ambient.xi_blocks[k] - radial * base.w_blocks[k]);
  out.psi1 = project_circle(base.phi1, ambient.psi1);
  out.psi2 = project_circle(base.phi2, ambient.psi2);
  return out;
}

IteratePoint retract(const IteratePoint &raw) {
  const double nrm = std::sqrt(raw.w_squared_norm());
  if (!(nrm > 0.0) || !std::isfinite(nrm))
    throw DegenerateRetractionError(
        "cannot retract precoder stack with Frobenius norm " +
        std::to_string(nrm));
  IteratePoint out;
  out.w_blocks.reserve(raw.w_blocks.size());
  for (const auto &w : raw.w_blocks)
    out.w_blocks.push_back(w / nrm);
  out.phi1 = normalize_phases(raw.phi1, "phi1");
  out.phi2 = normalize_phases(raw.phi2, "phi2");
  return out;
}

double inner(const TangentVector &u, const TangentVector &v) {
  check_same_shape(u, v);
  return real_trace_inner(u.xi_blocks, v.xi_blocks) +
         u.psi1.dot(v.psi1).real() + u.psi2.dot(v.psi2).real();
}

double norm(const TangentVector &v) { return std::sqrt(inner(v, v)); }

double constraint_residual(const IteratePoint &p) {
  double r = std::abs(std::sqrt(p.w_squared_norm()) - 1.0);
  for (const CVector *phi : {&p.phi1, &p.phi2})
    if (phi->size() > 0)
      r = std::max(r, (phi->array().abs() - 1.0).abs().maxCoeff());
  return r;
}

double tangency_residual(const IteratePoint &base, const TangentVector &v) {
  check_same_shape(base, v);
  double r = std::abs(real_trace_inner(v.xi_blocks, base.w_blocks));
  auto circle = [](const CVector &psi, const CVector &phi) {
    if (psi.size() == 0)
      return 0.0;
    return (psi.array().conjugate() * phi.array()).real().abs().maxCoeff();
  };
  r = std::max(r, circle(v.psi1, base.phi1));
  r = std::max(r, circle(v.psi2, base.phi2));
  return r;
}

} // namespace coirs::manifold
