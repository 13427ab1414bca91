#pragma once

#include "coirs/channel.hpp"
#include "coirs/objective.hpp"
#include "coirs/types.hpp"

#include <random>

namespace coirs::testing {

inline CMatrix random_matrix(std::mt19937_64 &rng, int rows, int cols,
                             double var = 1.0) {
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i)
      m(i, j) = complex_normal(rng, var);
  return m;
}

inline CVector random_vector(std::mt19937_64 &rng, int n, double var = 1.0) {
  CVector v(n);
  for (int i = 0; i < n; ++i)
    v(i) = complex_normal(rng, var);
  return v;
}

struct SmallDims {
  int m = 4, ns = 2, nb = 2, ne = 2, n1 = 6, n2 = 6, k = 2;
};

inline ChannelSet random_channels(std::mt19937_64 &rng, const SmallDims &d,
                                  double var = 1.0) {
  ChannelSet ch = ChannelSet::zeros(d.m, d.nb, d.ne, d.n1, d.n2, d.k);
  ch.for_each_matrix([&](CMatrix &g) {
    g = random_matrix(rng, static_cast<int>(g.rows()),
                      static_cast<int>(g.cols()), var);
  });
  return ch;
}

inline IteratePoint random_ambient_point(std::mt19937_64 &rng,
                                         const SmallDims &d) {
  IteratePoint p;
  for (int k = 0; k < d.k; ++k)
    p.w_blocks.push_back(random_matrix(rng, d.m, d.ns));
  p.phi1 = random_vector(rng, d.n1);
  p.phi2 = random_vector(rng, d.n2);
  return p;
}

inline TangentVector random_direction(std::mt19937_64 &rng,
                                      const IteratePoint &like) {
  TangentVector v = TangentVector::zeros_like(like);
  for (auto &b : v.xi_blocks)
    b = random_matrix(rng, static_cast<int>(b.rows()),
                      static_cast<int>(b.cols()));
  v.psi1 = random_vector(rng, static_cast<int>(v.psi1.size()));
  v.psi2 = random_vector(rng, static_cast<int>(v.psi2.size()));
  return v;
}

inline SystemConfig unit_snr_config(const SmallDims &d) {
  SystemConfig cfg;
  cfg.m_tx = d.m;
  cfg.n_streams = d.ns;
  cfg.n_bob = d.nb;
  cfg.n_eve = d.ne;
  cfg.n_irs1 = d.n1;
  cfg.n_irs2 = d.n2;
  cfg.n_sub = d.k;
  cfg.power_watts = 1.0;
  cfg.noise_bob_watts = 1.0;
  cfg.noise_eve_watts = 1.0;
  return cfg;
}

/// Effective channel written out entry by entry as nested sums.
inline CMatrix loop_effective_channel(const CMatrix &g1r, const CMatrix &g2r,
                                      const CMatrix &ga1, const CMatrix &ga2,
                                      const CMatrix &g12, const CVector &phi1,
                                      const CVector &phi2) {
  CMatrix h = CMatrix::Zero(g1r.rows(), ga1.cols());
  for (int r = 0; r < h.rows(); ++r)
    for (int m = 0; m < h.cols(); ++m) {
      Complex acc = 0;
      for (int n = 0; n < phi1.size(); ++n)
        acc += g1r(r, n) * phi1(n) * ga1(n, m);
      for (int j = 0; j < phi2.size(); ++j) {
        Complex into2 = ga2(j, m);
        for (int n = 0; n < phi1.size(); ++n)
          into2 += g12(j, n) * phi1(n) * ga1(n, m);
        acc += g2r(r, j) * phi2(j) * into2;
      }
      h(r, m) = acc;
    }
  return h;
}

/// Central-difference Wirtinger gradient d/dRe + i d/dIm, entry by entry.
template <typename F>
TangentVector fd_gradient(F &&f, const IteratePoint &p, double h = 1e-6) {
  TangentVector g = TangentVector::zeros_like(p);
  auto entry = [&](auto &&slot, Complex &out) {
    for (int part = 0; part < 2; ++part) {
      const Complex step = part == 0 ? Complex(h, 0) : Complex(0, h);
      IteratePoint a = p, b = p;
      slot(a) += step;
      slot(b) -= step;
      const double d = (f(a) - f(b)) / (2 * h);
      out += part == 0 ? Complex(d, 0) : Complex(0, d);
    }
  };
  for (std::size_t k = 0; k < p.w_blocks.size(); ++k)
    for (int j = 0; j < p.w_blocks[k].cols(); ++j)
      for (int i = 0; i < p.w_blocks[k].rows(); ++i)
        entry([&](IteratePoint &q) -> Complex & { return q.w_blocks[k](i, j); },
              g.xi_blocks[k](i, j));
  for (int n = 0; n < p.phi1.size(); ++n)
    entry([&](IteratePoint &q) -> Complex & { return q.phi1(n); }, g.psi1(n));
  for (int n = 0; n < p.phi2.size(); ++n)
    entry([&](IteratePoint &q) -> Complex & { return q.phi2(n); }, g.psi2(n));
  return g;
}

inline double block_rel_error(const CMatrix &a, const CMatrix &b) {
  const double scale = std::max(b.norm(), 1e-12);
  return (a - b).norm() / scale;
}

} // namespace coirs::testing
