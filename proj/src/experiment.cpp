#include "coirs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include <omp.h>

namespace coirs {

namespace {

// Purpose keys for child streams of one realization seed.
enum : std::uint64_t {
  kChannelStream = 1,
  kSingleIrsStream = 2,
  kPhaseStream = 3,
  kInitStream = 4,
  kCeeStream = 5,
};

std::string format_number(double v) {
  if (std::isnan(v))
    return "nan";
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::vector<std::string> split(const std::string &line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep))
    out.push_back(cur);
  if (!line.empty() && line.back() == sep)
    out.emplace_back();
  return out;
}

double parse_double(const std::string &s) {
  if (s == "nan")
    return std::numeric_limits<double>::quiet_NaN();
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size())
    throw std::runtime_error("bad number '" + s + "'");
  return v;
}

ResultRow run_item(const ExperimentSpec &spec, std::size_t axis_idx,
                   const SchemeSpec &scheme, int realization,
                   const RunOptions &opts) {
  ResultRow row;
  const AxisValue &v = spec.axis_values[axis_idx];
  row.scheme = std::string(to_string(scheme.kind));
  row.axis = std::string(to_string(spec.sweep_axis));
  row.axis_value = v.label(spec.sweep_axis);
  row.realization_index = realization;
  // Keyed by realization only: every scheme and axis value of realization r
  // sees the same fading draws (common random numbers).
  row.seed = derive_seed(spec.master_seed,
                         {static_cast<std::uint64_t>(realization)});

  const auto t0 = std::chrono::steady_clock::now();
  try {
    SystemConfig cfg;
    SceneGeometry geo;
    CeeConfig cee;
    spec.apply(v, cfg, geo, cee);
    const ChannelSet ch =
        generate(cfg, geo, derive_seed(row.seed, {kChannelStream}));
    const SchemeContext ctx{cfg, geo, derive_seed(row.seed, {kSingleIrsStream}),
                            derive_seed(row.seed, {kPhaseStream})};
    const SchemeOutcome out =
        solve_scheme(scheme, ch, ctx, spec.optimizer,
                     derive_seed(row.seed, {kInitStream}), cee,
                     derive_seed(row.seed, {kCeeStream}));
    row.ssr_total_bits = out.rates.total;
    row.per_subcarrier_ssr = out.rates.per_k;
    row.iterations_used = out.run.iterations_used;
    row.final_grad_norm = out.run.final_grad_norm();
    row.status = to_string(out.run.stop);
    for (const auto &w : out.w_physical)
      row.power_used += w.squaredNorm();
    if (spec.sweep_axis == SweepAxis::iterations) {
      row.objective_trace = out.run.objective_trace;
      row.grad_norm_trace = out.run.grad_norm_trace;
    }
  } catch (const std::exception &e) {
    row.ssr_total_bits = std::numeric_limits<double>::quiet_NaN();
    row.final_grad_norm = std::numeric_limits<double>::quiet_NaN();
    row.iterations_used = -1;
    row.status = std::string("error: ") + e.what();
  }
  if (opts.timing)
    row.wall_time_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
  return row;
}

} // namespace

std::string_view to_string(SweepAxis a) {
  switch (a) {
  case SweepAxis::iterations:
    return "iterations";
  case SweepAxis::m_tx:
    return "m_tx";
  case SweepAxis::n_elements:
    return "n_elements";
  case SweepAxis::nmse:
    return "nmse";
  case SweepAxis::irs_positions:
    return "irs_positions";
  case SweepAxis::n_sub:
    return "n_sub";
  }
  return "unknown";
}

SweepAxis parse_axis(std::string_view name) {
  for (SweepAxis a : {SweepAxis::iterations, SweepAxis::m_tx,
                      SweepAxis::n_elements, SweepAxis::nmse,
                      SweepAxis::irs_positions, SweepAxis::n_sub})
    if (to_string(a) == name)
      return a;
  throw std::invalid_argument("unknown sweep axis '" + std::string(name) + "'");
}

std::string AxisValue::label(SweepAxis axis) const {
  if (axis == SweepAxis::irs_positions)
    return format_number(a) + ";" + format_number(b);
  return format_number(a);
}

void ExperimentSpec::validate() const {
  if (axis_values.empty())
    throw std::invalid_argument("axis_values must be nonempty");
  if (schemes.empty())
    throw std::invalid_argument("schemes must be nonempty");
  if (n_realizations < 1)
    throw std::invalid_argument("n_realizations must be >= 1");
  base_config.validate();
  geometry.validate();
  optimizer.validate();
  if (!(cee.delta >= 0.0))
    throw std::invalid_argument("nmse must be non-negative");
  for (const auto &v : axis_values) {
    const bool integral = std::floor(v.a) == v.a && v.a >= 1;
    switch (sweep_axis) {
    case SweepAxis::iterations:
    case SweepAxis::m_tx:
    case SweepAxis::n_elements:
    case SweepAxis::n_sub:
      if (!integral)
        throw std::invalid_argument("axis value " + v.label(sweep_axis) +
                                    " must be a positive integer");
      break;
    case SweepAxis::nmse:
      if (!(v.a >= 0.0))
        throw std::invalid_argument("nmse axis values must be >= 0");
      break;
    case SweepAxis::irs_positions:
      break;
    }
  }
}

void ExperimentSpec::apply(const AxisValue &v, SystemConfig &cfg,
                           SceneGeometry &geo, CeeConfig &c) const {
  cfg = base_config;
  geo = geometry;
  c = cee;
  switch (sweep_axis) {
  case SweepAxis::iterations:
  case SweepAxis::m_tx:
    cfg.m_tx = static_cast<int>(v.a);
    break;
  case SweepAxis::n_elements:
    cfg.n_irs1 = cfg.n_irs2 = static_cast<int>(v.a);
    break;
  case SweepAxis::nmse:
    c.delta = v.a;
    break;
  case SweepAxis::irs_positions:
    geo.pos_irs1.x = v.a;
    geo.pos_irs2.x = v.b;
    break;
  case SweepAxis::n_sub:
    cfg.n_sub = static_cast<int>(v.a);
    break;
  }
  cfg.validate();
  geo.validate();
}

std::vector<ResultRow> run(const ExperimentSpec &spec, const RunOptions &opts) {
  spec.validate();
  const std::size_t n_axis = spec.axis_values.size();
  const std::size_t n_schemes = spec.schemes.size();
  const std::size_t n_real = static_cast<std::size_t>(spec.n_realizations);
  const std::size_t total = n_axis * n_schemes * n_real;
  std::vector<ResultRow> rows(total);
  std::atomic<std::size_t> done{0};

  const int threads = std::max(1, opts.threads);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t r = i % n_real;
    const std::size_t s = (i / n_real) % n_schemes;
    const std::size_t a = i / (n_real * n_schemes);
    rows[i] = run_item(spec, a, spec.schemes[s], static_cast<int>(r), opts);
    const std::size_t finished = ++done;
    if (opts.progress) {
#pragma omp critical(coirs_progress)
      std::cerr << "[" << finished << "/" << total << "] " << rows[i].scheme
                << " " << rows[i].axis << "=" << rows[i].axis_value << " r"
                << rows[i].realization_index << " ssr="
                << format_number(rows[i].ssr_total_bits) << "\n";
    }
  }
  return rows;
}

void write_results_csv(std::ostream &os, const std::vector<ResultRow> &rows) {
  os << kResultsSchema << '\n'
     << "scheme,axis,value,realization,seed,ssr_bits,iters,grad_norm,wall_ms\n";
  for (const auto &r : rows)
    os << r.scheme << ',' << r.axis << ',' << r.axis_value << ','
       << r.realization_index << ',' << r.seed << ','
       << format_number(r.ssr_total_bits) << ',' << r.iterations_used << ','
       << format_number(r.final_grad_norm) << ','
       << format_number(r.wall_time_ms) << '\n';
}

std::vector<ResultRow> read_results_csv(std::istream &is) {
  std::string line;
  if (!std::getline(is, line) || line != kResultsSchema)
    throw std::runtime_error("results CSV schema mismatch: expected '" +
                             std::string(kResultsSchema) + "'");
  if (!std::getline(is, line) ||
      line != "scheme,axis,value,realization,seed,ssr_bits,iters,grad_norm,wall_ms")
    throw std::runtime_error("results CSV has an unexpected column header");
  std::vector<ResultRow> rows;
  int line_no = 2;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty())
      continue;
    const auto f = split(line, ',');
    if (f.size() != 9)
      throw std::runtime_error("results CSV line " + std::to_string(line_no) +
                               ": expected 9 fields");
    try {
      ResultRow r;
      r.scheme = f[0];
      r.axis = f[1];
      r.axis_value = f[2];
      r.realization_index = std::stoi(f[3]);
      r.seed = std::stoull(f[4]);
      r.ssr_total_bits = parse_double(f[5]);
      r.iterations_used = std::stoi(f[6]);
      r.final_grad_norm = parse_double(f[7]);
      r.wall_time_ms = parse_double(f[8]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error &e) {
      throw std::runtime_error("results CSV line " + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return rows;
}

void write_traces_csv(std::ostream &os, const std::vector<ResultRow> &rows) {
  os << kTracesSchema << '\n'
     << "scheme,axis,value,realization,iteration,objective,grad_norm\n";
  for (const auto &r : rows)
    for (std::size_t q = 0; q < r.objective_trace.size(); ++q)
      os << r.scheme << ',' << r.axis << ',' << r.axis_value << ','
         << r.realization_index << ',' << q << ','
         << format_number(r.objective_trace[q]) << ','
         << format_number(q < r.grad_norm_trace.size() ? r.grad_norm_trace[q]
                                                      : std::nan(""))
         << '\n';
}

std::pair<double, double> bootstrap_mean_ci(const std::vector<double> &xs,
                                            int n_resamples, double level,
                                            std::uint64_t seed) {
  if (xs.empty())
    throw std::invalid_argument("bootstrap of an empty sample");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
  std::vector<double> means(static_cast<std::size_t>(n_resamples));
  for (auto &m : means) {
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      s += xs[pick(rng)];
    m = s / static_cast<double>(xs.size());
  }
  std::sort(means.begin(), means.end());
  const double tail = (1.0 - level) / 2.0;
  auto at = [&](double q) {
    const auto idx = static_cast<std::size_t>(
        std::clamp(q * static_cast<double>(means.size() - 1), 0.0,
                   static_cast<double>(means.size() - 1)));
    return means[idx];
  };
  return {at(tail), at(1.0 - tail)};
}

Summary summarize(const std::vector<ResultRow> &rows, int n_resamples,
                  std::uint64_t bootstrap_seed) {
  Summary out;
  if (rows.empty()) {
    out.warnings.push_back("no rows to summarize");
    return out;
  }
  // First-appearance order of (scheme, axis, value).
  std::vector<std::tuple<std::string, std::string, std::string>> keys;
  std::map<std::tuple<std::string, std::string, std::string>,
           std::vector<double>>
      groups;
  for (const auto &r : rows) {
    auto key = std::make_tuple(r.scheme, r.axis, r.axis_value);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted)
      keys.push_back(key);
    if (std::isfinite(r.ssr_total_bits))
      it->second.push_back(r.ssr_total_bits);
  }
  std::uint64_t group_idx = 0;
  for (const auto &key : keys) {
    const auto &xs = groups[key];
    const auto &[scheme, axis, value] = key;
    ++group_idx;
    if (xs.empty()) {
      out.warnings.push_back("group " + scheme + " " + axis + "=" + value +
                             " has no successful rows");
      continue;
    }
    SummaryLine l{scheme, axis, value, static_cast<int>(xs.size())};
    l.mean = std::accumulate(xs.begin(), xs.end(), 0.0) /
             static_cast<double>(xs.size());
    if (xs.size() > 1) {
      double ss = 0.0;
      for (double x : xs)
        ss += (x - l.mean) * (x - l.mean);
      l.std_error = std::sqrt(ss / static_cast<double>(xs.size() - 1) /
                              static_cast<double>(xs.size()));
      std::tie(l.ci_low, l.ci_high) = bootstrap_mean_ci(
          xs, n_resamples, 0.95, bootstrap_seed + group_idx);
    } else {
      l.ci_low = l.ci_high = l.mean;
    }
    out.lines.push_back(std::move(l));
  }
  return out;
}

void write_summary_csv(std::ostream &os, const Summary &s) {
  os << kSummarySchema << '\n'
     << "scheme,axis,value,n,mean,std_error,ci_low,ci_high\n";
  for (const auto &l : s.lines)
    os << l.scheme << ',' << l.axis << ',' << l.axis_value << ',' << l.n << ','
       << format_number(l.mean) << ',' << format_number(l.std_error) << ','
       << format_number(l.ci_low) << ',' << format_number(l.ci_high) << '\n';
}

std::vector<std::string> preset_names() {
  return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "desk"};
}

ExperimentSpec preset(std::string_view name, bool desk) {
  ExperimentSpec spec;
  spec.master_seed = 20251019;
  spec.n_realizations = 100;
  for (SchemeKind k : kAllSchemes)
    spec.schemes.push_back({k});
  auto scalars = [](std::initializer_list<double> vs) {
    std::vector<AxisValue> out;
    for (double v : vs)
      out.push_back({v, 0.0});
    return out;
  };
  const bool desk_point = name == "desk";
  if (desk || desk_point) {
    spec.base_config.m_tx = 8;
    spec.base_config.n_irs1 = spec.base_config.n_irs2 = 16;
    spec.base_config.n_sub = 4;
    spec.n_realizations = 50;
  }

  if (name == "fig2") {
    spec.sweep_axis = SweepAxis::iterations;
    spec.axis_values = desk ? scalars({2, 4, 8}) : scalars({4, 8, 16});
    spec.schemes = {{SchemeKind::proposed}};
  } else if (name == "fig3") {
    spec.sweep_axis = SweepAxis::m_tx;
    spec.axis_values = desk ? scalars({2, 4, 6, 8}) : scalars({4, 8, 12, 16});
  } else if (name == "fig4") {
    spec.sweep_axis = SweepAxis::n_elements;
    spec.axis_values = desk ? scalars({8, 16, 24}) : scalars({16, 32, 48, 64});
  } else if (name == "fig5") {
    spec.sweep_axis = SweepAxis::nmse;
    spec.axis_values = scalars({0.0, 0.01, 0.05, 0.1});
  } else if (name == "fig6") {
    spec.sweep_axis = SweepAxis::irs_positions;
    spec.schemes = {{SchemeKind::proposed}};
    spec.n_realizations = 20;
    for (double x1 : {0.0, 15.0, 30.0, 45.0, 60.0})
      for (double x2 : {0.0, 15.0, 30.0, 45.0, 60.0})
        spec.axis_values.push_back({x1, x2});
  } else if (name == "fig7") {
    spec.sweep_axis = SweepAxis::n_sub;
    spec.axis_values = scalars({1, 6, 11, 16, 21});
  } else if (desk_point) {
    spec.sweep_axis = SweepAxis::m_tx;
    spec.axis_values = scalars({8});
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
  }
  spec.output_path = std::string(name) + (desk ? "_desk" : "") + ".csv";
  return spec;
}

} // namespace coirs
