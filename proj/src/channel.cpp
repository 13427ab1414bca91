#include "coirs/channel.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace coirs {

namespace {

constexpr const char *kDumpHeader = "# coirs-channels v1";

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void fill_rayleigh(std::vector<CMatrix> &family, double gain,
                   std::mt19937_64 &rng) {
  const double amp = std::sqrt(gain);
  for (auto &m : family)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        m(i, j) = amp * complex_normal(rng);
}

struct FamilyRef {
  const char *name;
  std::vector<CMatrix> ChannelSet::*member;
};

constexpr FamilyRef kFamilies[] = {
    {"g_a_i1", &ChannelSet::g_a_i1}, {"g_a_i2", &ChannelSet::g_a_i2},
    {"g_i1_b", &ChannelSet::g_i1_b}, {"g_i1_e", &ChannelSet::g_i1_e},
    {"g_i2_b", &ChannelSet::g_i2_b}, {"g_i2_e", &ChannelSet::g_i2_e},
    {"g_i1_i2", &ChannelSet::g_i1_i2}};

} // namespace

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

void SceneGeometry::validate() const {
  const Point2 nodes[] = {pos_alice, pos_irs1, pos_irs2, pos_bob, pos_eve};
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j)
      if (!(distance(nodes[i], nodes[j]) > 0.0))
        throw std::invalid_argument("scene nodes must be at distinct positions");
  const double ex[] = {exponents.a_i1, exponents.a_i2, exponents.i1_b,
                       exponents.i1_e, exponents.i2_b, exponents.i2_e,
                       exponents.i1_i2};
  for (double e : ex)
    if (!(e > 0.0))
      throw std::invalid_argument("path-loss exponents must be positive");
  if (!(d0_m > 0.0))
    throw std::invalid_argument("reference distance must be positive");
}

double path_loss_linear(double d, double zeta, const SceneGeometry &geo) {
  if (!(d > 0.0))
    throw std::domain_error("path loss needs a positive distance, got " +
                            std::to_string(d));
  const double pl_db = geo.pl0_db - 10.0 * zeta * std::log10(d / geo.d0_m);
  return std::pow(10.0, pl_db / 10.0);
}

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t k : keys)
    h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

Complex complex_normal(std::mt19937_64 &rng, double variance) {
  std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

ChannelSet generate(const SystemConfig &cfg, const SceneGeometry &geo,
                    std::uint64_t seed) {
  cfg.validate();
  geo.validate();
  ChannelSet ch = ChannelSet::zeros(cfg.m_tx, cfg.n_bob, cfg.n_eve,
                                    cfg.n_irs1, cfg.n_irs2, cfg.n_sub);
  const auto &ex = geo.exponents;
  auto gain = [&](Point2 a, Point2 b, double zeta) {
    return path_loss_linear(distance(a, b), zeta, geo);
  };
  std::mt19937_64 rng(seed);
  fill_rayleigh(ch.g_a_i1, gain(geo.pos_alice, geo.pos_irs1, ex.a_i1), rng);
  fill_rayleigh(ch.g_a_i2, gain(geo.pos_alice, geo.pos_irs2, ex.a_i2), rng);
  fill_rayleigh(ch.g_i1_b, gain(geo.pos_irs1, geo.pos_bob, ex.i1_b), rng);
  fill_rayleigh(ch.g_i1_e, gain(geo.pos_irs1, geo.pos_eve, ex.i1_e), rng);
  fill_rayleigh(ch.g_i2_b, gain(geo.pos_irs2, geo.pos_bob, ex.i2_b), rng);
  fill_rayleigh(ch.g_i2_e, gain(geo.pos_irs2, geo.pos_eve, ex.i2_e), rng);
  fill_rayleigh(ch.g_i1_i2, gain(geo.pos_irs1, geo.pos_irs2, ex.i1_i2), rng);
  return ch;
}

ChannelSet generate_single_irs(const SystemConfig &cfg,
                               const SceneGeometry &geo, Point2 irs_pos,
                               int n_elements, SingleIrsExponents zeta,
                               std::uint64_t seed) {
  cfg.validate();
  if (n_elements < 1)
    throw std::invalid_argument("single IRS needs at least one element");
  ChannelSet ch = ChannelSet::zeros(cfg.m_tx, cfg.n_bob, cfg.n_eve,
                                    n_elements, 0, cfg.n_sub);
  if (!(zeta.alice_irs > 0 && zeta.irs_bob > 0 && zeta.irs_eve > 0))
    throw std::invalid_argument("path-loss exponents must be positive");
  auto gain = [&](Point2 a, Point2 b, double z) {
    return path_loss_linear(distance(a, b), z, geo);
  };
  std::mt19937_64 rng(seed);
  fill_rayleigh(ch.g_a_i1, gain(geo.pos_alice, irs_pos, zeta.alice_irs), rng);
  fill_rayleigh(ch.g_i1_b, gain(irs_pos, geo.pos_bob, zeta.irs_bob), rng);
  fill_rayleigh(ch.g_i1_e, gain(irs_pos, geo.pos_eve, zeta.irs_eve), rng);
  return ch;
}

ChannelSet inject_cee(const ChannelSet &ch, const CeeConfig &cee,
                      std::uint64_t seed) {
  if (!(cee.delta >= 0.0))
    throw std::invalid_argument("NMSE delta must be non-negative");
  ChannelSet out = ch;
  if (cee.delta == 0.0)
    return out;
  std::mt19937_64 rng(seed);
  out.for_each_matrix([&](CMatrix &m) {
    if (m.size() == 0)
      return;
    const double var = cee.delta * m.squaredNorm() / static_cast<double>(m.size());
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        m(i, j) -= complex_normal(rng, var);
  });
  return out;
}

void write_channels(std::ostream &os, const ChannelSet &ch) {
  os << kDumpHeader << '\n'
     << "dims " << ch.m_tx << ' ' << ch.n_bob << ' ' << ch.n_eve << ' '
     << ch.n_irs1 << ' ' << ch.n_irs2 << ' ' << ch.n_sub() << '\n';
  os << std::setprecision(17);
  for (const auto &f : kFamilies) {
    const auto &family = ch.*(f.member);
    for (std::size_t k = 0; k < family.size(); ++k) {
      const CMatrix &m = family[k];
      os << "family " << f.name << ' ' << k << ' ' << m.rows() << ' '
         << m.cols() << '\n';
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
          os << m(i, j).real() << ' ' << m(i, j).imag() << '\n';
    }
  }
}

ChannelSet read_channels(std::istream &is) {
  auto fail = [](const std::string &what) -> void {
    throw std::runtime_error("malformed channel dump: " + what);
  };
  std::string line;
  if (!std::getline(is, line) || line != kDumpHeader)
    fail("missing header");
  std::string tag;
  int m_tx = 0, n_bob = 0, n_eve = 0, n1 = 0, n2 = 0, n_sub = 0;
  if (!(is >> tag >> m_tx >> n_bob >> n_eve >> n1 >> n2 >> n_sub) ||
      tag != "dims")
    fail("bad dims line");
  ChannelSet ch = ChannelSet::zeros(m_tx, n_bob, n_eve, n1, n2, n_sub);
  for (const auto &f : kFamilies) {
    auto &family = ch.*(f.member);
    for (std::size_t k = 0; k < family.size(); ++k) {
      std::string name;
      std::size_t kk = 0;
      Eigen::Index rows = 0, cols = 0;
      if (!(is >> tag >> name >> kk >> rows >> cols) || tag != "family" ||
          name != f.name || kk != k)
        fail(std::string("expected family ") + f.name + " " +
             std::to_string(k));
      CMatrix &m = family[k];
      if (rows != m.rows() || cols != m.cols())
        fail(std::string("shape mismatch in ") + f.name);
      for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
          double re = 0, im = 0;
          if (!(is >> re >> im))
            fail(std::string("truncated data in ") + f.name);
          m(i, j) = {re, im};
        }
    }
  }
  ch.validate();
  return ch;
}

} // namespace coirs
