#pragma once

#include "coirs/baselines.hpp"
#include "coirs/channel.hpp"
#include "coirs/optimizer.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace coirs {

enum class SweepAxis { iterations, m_tx, n_elements, nmse, irs_positions, n_sub };

std::string_view to_string(SweepAxis a);
SweepAxis parse_axis(std::string_view name);

/// One point on the sweep axis. Scalar axes use `a`; the position sweep uses
/// (a, b) = (x of IRS 1, x of IRS 2). For `iterations` the value is M.
struct AxisValue {
  double a = 0.0;
  double b = 0.0;

  std::string label(SweepAxis axis) const;
};

struct ExperimentSpec {
  SweepAxis sweep_axis = SweepAxis::m_tx;
  std::vector<AxisValue> axis_values;
  std::vector<SchemeSpec> schemes;
  int n_realizations = 1;
  SystemConfig base_config;
  SceneGeometry geometry;
  OptimizerConfig optimizer;
  CeeConfig cee; // baseline NMSE for axes other than nmse
  std::uint64_t master_seed = 1;
  std::string output_path;

  /// Throws std::invalid_argument if the spec cannot be run.
  void validate() const;

  /// System, geometry and CEE settings after applying one axis value.
  void apply(const AxisValue &v, SystemConfig &cfg, SceneGeometry &geo,
             CeeConfig &cee) const;
};

struct ResultRow {
  std::string scheme;
  std::string axis;
  std::string axis_value;
  int realization_index = 0;
  std::uint64_t seed = 0;
  double ssr_total_bits = 0.0;
  std::vector<double> per_subcarrier_ssr;
  int iterations_used = 0;
  double final_grad_norm = 0.0;
  double wall_time_ms = 0.0;
  std::string status; // stop reason, or "error: ..."
  /// Power of the de-normalized precoders, sum_k |W_k|_F^2.
  double power_used = 0.0;
  // Filled for the iterations axis only.
  std::vector<double> objective_trace;
  std::vector<double> grad_norm_trace;
};

struct RunOptions {
  int threads = 1;
  /// Record wall-clock time per row. Off by default so that output is
  /// byte-reproducible.
  bool timing = false;
  bool progress = false;
};

/// Every (axis value x scheme x realization) as one row, in that nesting
/// order regardless of thread count. Per-row failures land in the row.
std::vector<ResultRow> run(const ExperimentSpec &spec,
                           const RunOptions &opts = {});

inline constexpr const char *kResultsSchema = "# coirs-results v1";
inline constexpr const char *kSummarySchema = "# coirs-summary v1";
inline constexpr const char *kTracesSchema = "# coirs-traces v1";

void write_results_csv(std::ostream &os, const std::vector<ResultRow> &rows);
/// Throws std::runtime_error on a schema mismatch or malformed line.
std::vector<ResultRow> read_results_csv(std::istream &is);
void write_traces_csv(std::ostream &os, const std::vector<ResultRow> &rows);

struct SummaryLine {
  std::string scheme;
  std::string axis;
  std::string axis_value;
  int n = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct Summary {
  std::vector<SummaryLine> lines;
  std::vector<std::string> warnings;
};

/// Groups by (scheme, axis value) in first-appearance order; bootstrap
/// percentile intervals use `bootstrap_seed`.
Summary summarize(const std::vector<ResultRow> &rows, int n_resamples = 1000,
                  std::uint64_t bootstrap_seed = 12345);

/// Percentile bootstrap interval of the mean.
std::pair<double, double> bootstrap_mean_ci(const std::vector<double> &xs,
                                            int n_resamples, double level,
                                            std::uint64_t seed);

void write_summary_csv(std::ostream &os, const Summary &s);

/// Named experiment presets. `desk` shrinks a full-scale preset to
/// M=8, N=16, K=4 with 50 realizations; the `desk` preset is itself a single
/// desk-scale point with every scheme.
ExperimentSpec preset(std::string_view name, bool desk = false);
std::vector<std::string> preset_names();

} // namespace coirs
