#include "coirs/types.hpp"

#include <cmath>
#include <sstream>

namespace coirs {

void SystemConfig::validate() const {
  auto fail = [](const std::string &what) {
    throw std::invalid_argument("invalid SystemConfig: " + what);
  };
  if (m_tx < 1 || n_bob < 1 || n_eve < 1 || n_streams < 1 || n_sub < 1 ||
      n_irs1 < 1 || n_irs2 < 1)
    fail("all counts must be >= 1");
  if (n_streams > std::min(m_tx, n_bob))
    fail("n_streams must not exceed min(m_tx, n_bob)");
  if (!(power_watts > 0) || !(noise_bob_watts > 0) || !(noise_eve_watts > 0))
    fail("powers must be strictly positive");
}

double IteratePoint::w_squared_norm() const {
  double s = 0.0;
  for (const auto &w : w_blocks)
    s += w.squaredNorm();
  return s;
}

CMatrix IteratePoint::stacked_w() const {
  if (w_blocks.empty())
    return {};
  const auto rows = w_blocks.front().rows();
  const auto cols = w_blocks.front().cols();
  CMatrix out(rows, cols * static_cast<Eigen::Index>(w_blocks.size()));
  for (std::size_t k = 0; k < w_blocks.size(); ++k)
    out.middleCols(static_cast<Eigen::Index>(k) * cols, cols) = w_blocks[k];
  return out;
}

TangentVector TangentVector::zeros_like(const IteratePoint &p) {
  TangentVector v;
  v.xi_blocks.reserve(p.w_blocks.size());
  for (const auto &w : p.w_blocks)
    v.xi_blocks.push_back(CMatrix::Zero(w.rows(), w.cols()));
  v.psi1 = CVector::Zero(p.phi1.size());
  v.psi2 = CVector::Zero(p.phi2.size());
  return v;
}

TangentVector &TangentVector::operator+=(const TangentVector &o) {
  check_same_shape(*this, o);
  for (std::size_t k = 0; k < xi_blocks.size(); ++k)
    xi_blocks[k] += o.xi_blocks[k];
  psi1 += o.psi1;
  psi2 += o.psi2;
  return *this;
}

TangentVector &TangentVector::operator-=(const TangentVector &o) {
  check_same_shape(*this, o);
  for (std::size_t k = 0; k < xi_blocks.size(); ++k)
    xi_blocks[k] -= o.xi_blocks[k];
  psi1 -= o.psi1;
  psi2 -= o.psi2;
  return *this;
}

TangentVector &TangentVector::operator*=(double s) {
  for (auto &x : xi_blocks)
    x *= s;
  psi1 *= s;
  psi2 *= s;
  return *this;
}

TangentVector operator+(TangentVector a, const TangentVector &b) {
  return a += b;
}
TangentVector operator-(TangentVector a, const TangentVector &b) {
  return a -= b;
}
TangentVector operator*(double s, TangentVector v) { return v *= s; }

namespace {

template <typename A, typename B>
void check_blocks(const std::vector<A> &a, const std::vector<B> &b,
                  const CVector &a1, const CVector &b1, const CVector &a2,
                  const CVector &b2) {
  std::ostringstream err;
  if (a.size() != b.size())
    err << "block count " << a.size() << " vs " << b.size();
  else if (a1.size() != b1.size())
    err << "phi1 length " << a1.size() << " vs " << b1.size();
  else if (a2.size() != b2.size())
    err << "phi2 length " << a2.size() << " vs " << b2.size();
  else
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a[k].rows() != b[k].rows() || a[k].cols() != b[k].cols()) {
        err << "block " << k << " shape " << a[k].rows() << "x" << a[k].cols()
            << " vs " << b[k].rows() << "x" << b[k].cols();
        break;
      }
  if (!err.str().empty())
    throw DimensionError("shape mismatch: " + err.str());
}

} // namespace

void check_same_shape(const IteratePoint &p, const TangentVector &v) {
  check_blocks(p.w_blocks, v.xi_blocks, p.phi1, v.psi1, p.phi2, v.psi2);
}

void check_same_shape(const TangentVector &u, const TangentVector &v) {
  check_blocks(u.xi_blocks, v.xi_blocks, u.psi1, v.psi1, u.psi2, v.psi2);
}

IteratePoint displaced(const IteratePoint &p, const TangentVector &v,
                       double step) {
  check_same_shape(p, v);
  IteratePoint out = p;
  for (std::size_t k = 0; k < out.w_blocks.size(); ++k)
    out.w_blocks[k] += step * v.xi_blocks[k];
  out.phi1 += step * v.psi1;
  out.phi2 += step * v.psi2;
  return out;
}

TangentVector as_direction(const IteratePoint &p) {
  return TangentVector{p.w_blocks, p.phi1, p.phi2};
}

ChannelSet ChannelSet::zeros(int m_tx, int n_bob, int n_eve, int n_irs1,
                             int n_irs2, int n_sub) {
  ChannelSet ch;
  ch.m_tx = m_tx;
  ch.n_bob = n_bob;
  ch.n_eve = n_eve;
  ch.n_irs1 = n_irs1;
  ch.n_irs2 = n_irs2;
  const auto K = static_cast<std::size_t>(n_sub);
  ch.g_a_i1.assign(K, CMatrix::Zero(n_irs1, m_tx));
  ch.g_a_i2.assign(K, CMatrix::Zero(n_irs2, m_tx));
  ch.g_i1_b.assign(K, CMatrix::Zero(n_bob, n_irs1));
  ch.g_i1_e.assign(K, CMatrix::Zero(n_eve, n_irs1));
  ch.g_i2_b.assign(K, CMatrix::Zero(n_bob, n_irs2));
  ch.g_i2_e.assign(K, CMatrix::Zero(n_eve, n_irs2));
  ch.g_i1_i2.assign(K, CMatrix::Zero(n_irs2, n_irs1));
  return ch;
}

void ChannelSet::validate() const {
  const std::size_t K = g_a_i1.size();
  struct Family {
    const char *name;
    const std::vector<CMatrix> *mats;
    int rows, cols;
  };
  const Family families[] = {
      {"g_a_i1", &g_a_i1, n_irs1, m_tx}, {"g_a_i2", &g_a_i2, n_irs2, m_tx},
      {"g_i1_b", &g_i1_b, n_bob, n_irs1}, {"g_i1_e", &g_i1_e, n_eve, n_irs1},
      {"g_i2_b", &g_i2_b, n_bob, n_irs2}, {"g_i2_e", &g_i2_e, n_eve, n_irs2},
      {"g_i1_i2", &g_i1_i2, n_irs2, n_irs1}};
  for (const auto &f : families) {
    if (f.mats->size() != K)
      throw DimensionError(std::string("channel family ") + f.name +
                           " has wrong subcarrier count");
    for (const auto &m : *f.mats) {
      if (m.rows() != f.rows || m.cols() != f.cols)
        throw DimensionError(std::string("channel family ") + f.name +
                             " has wrong shape");
      if (!m.allFinite())
        throw NumericError(std::string("channel family ") + f.name +
                           " has a non-finite entry");
    }
  }
}

} // namespace coirs
