#pragma once

#include "coirs/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>

namespace coirs {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point2 a, Point2 b);

/// Path-loss exponents for the seven link families.
struct LinkExponents {
  double a_i1 = 2.5;
  double a_i2 = 3.0;
  double i1_b = 3.0;
  double i1_e = 3.0;
  double i2_b = 2.5;
  double i2_e = 2.5;
  double i1_i2 = 1.1;
};

/// Exponents of the three links of a single relocated IRS.
struct SingleIrsExponents {
  double alice_irs;
  double irs_bob;
  double irs_eve;
};

struct SceneGeometry {
  Point2 pos_alice{0.0, 0.0};
  Point2 pos_irs1{10.0, 10.0};
  Point2 pos_irs2{50.0, 10.0};
  Point2 pos_bob{60.0, 0.0};
  Point2 pos_eve{40.0, 0.0};
  double pl0_db = -30.0;
  double d0_m = 1.0;
  LinkExponents exponents;

  /// Throws std::invalid_argument on coincident nodes or bad exponents.
  void validate() const;
};

struct CeeConfig {
  double delta = 0.0; // NMSE
};

/// Linear power gain 10^(PL/10) with PL = PL0 - 10 zeta log10(d / d0).
double path_loss_linear(double d, double zeta, const SceneGeometry &geo);

/// Mixes a master seed with any number of keys into one 64-bit stream seed.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> keys);

/// Draws one CN(0, variance) sample.
Complex complex_normal(std::mt19937_64 &rng, double variance = 1.0);

/// Rayleigh-faded channels with distance-based path loss, i.i.d. across
/// subcarriers and entries.
ChannelSet generate(const SystemConfig &cfg, const SceneGeometry &geo,
                    std::uint64_t seed);

/// Channels of a single IRS with `n_elements` at `irs_pos`. The IRS occupies
/// the IRS 1 slot; the IRS 2 and inter-IRS families are empty.
ChannelSet generate_single_irs(const SystemConfig &cfg,
                               const SceneGeometry &geo, Point2 irs_pos,
                               int n_elements, SingleIrsExponents zeta,
                               std::uint64_t seed);

/// Returns H - E with E_ij ~ CN(0, delta * |H|_F^2 / numel(H)) drawn per
/// matrix. delta = 0 returns an exact copy.
ChannelSet inject_cee(const ChannelSet &ch, const CeeConfig &cee,
                      std::uint64_t seed);

/// Plain-text channel dump: a header line, a dims line, then per matrix a
/// `family <name> <k> <rows> <cols>` header followed by one `re im` pair per
/// line in column-major order. Values round-trip exactly.
void write_channels(std::ostream &os, const ChannelSet &ch);
ChannelSet read_channels(std::istream &is);

} // namespace coirs
