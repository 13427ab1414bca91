#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace coirs {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Raised when two operands disagree on block counts or matrix shapes.
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a retraction input has a zero-norm precoder stack or a zero
/// phase coefficient.
class DegenerateRetractionError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Raised for non-finite channel data or a failed Hermitian factorization.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Scalar system parameters. Powers are linear (watts).
struct SystemConfig {
  int m_tx = 16;
  int n_bob = 2;
  int n_eve = 2;
  int n_streams = 2;
  int n_sub = 10;
  int n_irs1 = 48;
  int n_irs2 = 48;
  double power_watts = 1.0;
  double noise_bob_watts = 1e-11;
  double noise_eve_watts = 1e-11;

  /// Throws std::invalid_argument when a count or power is out of range.
  void validate() const;
};

/// A point on the product of the unit Frobenius sphere (precoder stack) and
/// two complex circle manifolds (IRS phases).
///
/// The precoder stack is stored as one M x N_s block per subcarrier. The
/// stacked matrix [W_1, ..., W_K] is only ever formed on demand.
struct IteratePoint {
  std::vector<CMatrix> w_blocks;
  CVector phi1;
  CVector phi2;

  std::size_t n_sub() const { return w_blocks.size(); }
  /// Sum over blocks of the squared Frobenius norm.
  double w_squared_norm() const;
  CMatrix stacked_w() const;
};

/// Direction in the product tangent space; same shapes as IteratePoint.
struct TangentVector {
  std::vector<CMatrix> xi_blocks;
  CVector psi1;
  CVector psi2;

  static TangentVector zeros_like(const IteratePoint &p);

  TangentVector &operator+=(const TangentVector &o);
  TangentVector &operator-=(const TangentVector &o);
  TangentVector &operator*=(double s);
};

TangentVector operator+(TangentVector a, const TangentVector &b);
TangentVector operator-(TangentVector a, const TangentVector &b);
TangentVector operator*(double s, TangentVector v);

/// Throws DimensionError unless `v` has the block structure of `p`.
void check_same_shape(const IteratePoint &p, const TangentVector &v);
void check_same_shape(const TangentVector &u, const TangentVector &v);

/// Moves `p` along `v`: returns p + step * v without retracting.
IteratePoint displaced(const IteratePoint &p, const TangentVector &v,
                       double step);

/// Reinterprets a point as an ambient direction (used for radial tests and
/// for Euclidean baselines that step in the ambient space).
TangentVector as_direction(const IteratePoint &p);

/// Seven channel families per subcarrier, stored receiver-rows by
/// transmitter-columns.
struct ChannelSet {
  int m_tx = 0;
  int n_bob = 0;
  int n_eve = 0;
  int n_irs1 = 0;
  int n_irs2 = 0;

  std::vector<CMatrix> g_a_i1;  // N_i1 x M
  std::vector<CMatrix> g_a_i2;  // N_i2 x M
  std::vector<CMatrix> g_i1_b;  // N_b x N_i1
  std::vector<CMatrix> g_i1_e;  // N_e x N_i1
  std::vector<CMatrix> g_i2_b;  // N_b x N_i2
  std::vector<CMatrix> g_i2_e;  // N_e x N_i2
  std::vector<CMatrix> g_i1_i2; // N_i2 x N_i1

  int n_sub() const { return static_cast<int>(g_a_i1.size()); }

  /// Allocates all families as zero matrices of the right shapes.
  static ChannelSet zeros(int m_tx, int n_bob, int n_eve, int n_irs1,
                          int n_irs2, int n_sub);

  /// Throws DimensionError on a shape mismatch and NumericError on a
  /// non-finite entry.
  void validate() const;

  /// Applies `fn(CMatrix&)` to every matrix of every family in a fixed order.
  template <typename Fn> void for_each_matrix(Fn &&fn) {
    for (auto *family : {&g_a_i1, &g_a_i2, &g_i1_b, &g_i1_e, &g_i2_b, &g_i2_e,
                         &g_i1_i2})
      for (auto &m : *family)
        fn(m);
  }
  template <typename Fn> void for_each_matrix(Fn &&fn) const {
    for (auto *family : {&g_a_i1, &g_a_i2, &g_i1_b, &g_i1_e, &g_i2_b, &g_i2_e,
                         &g_i1_i2})
      for (const auto &m : *family)
        fn(m);
  }
};

} // namespace coirs
