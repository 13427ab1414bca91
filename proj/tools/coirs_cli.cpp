// coirs: run secrecy-rate sweeps, summarize their CSV output, or self-test.

#include "coirs/experiment.hpp"
#include "coirs/manifold.hpp"
#include "coirs/spec_file.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace coirs;

struct CliError : std::runtime_error {
  CliError(std::string code, const std::string &msg)
      : std::runtime_error(msg), code(std::move(code)) {}
  std::string code;
};

int report_error(const std::string &code, const std::string &message) {
  nlohmann::json j{{"error", code}, {"message", message}};
  std::cerr << j.dump() << std::endl;
  return code == "usage" ? 2 : 1;
}

std::ofstream open_out(const std::string &path) {
  std::ofstream os(path);
  if (!os)
    throw CliError("io", "cannot open '" + path + "' for writing");
  return os;
}

void print_summary(std::ostream &os, const Summary &s) {
  for (const auto &w : s.warnings)
    std::cerr << "warning: " << w << "\n";
  write_summary_csv(os, s);
}

int cmd_run(const std::string &spec_path, const std::string &preset_name,
            bool desk, std::string out_path, const std::string &traces_path,
            int realizations, const RunOptions &opts, bool dry_run) {
  if (spec_path.empty() == preset_name.empty())
    throw CliError("usage", "run needs exactly one of --spec or --preset");
  ExperimentSpec spec;
  try {
    spec = spec_path.empty() ? preset(preset_name, desk)
                             : load_spec_file(spec_path);
    if (realizations > 0)
      spec.n_realizations = realizations;
    spec.validate();
  } catch (const std::invalid_argument &e) {
    throw CliError("spec", e.what());
  }
  if (dry_run) {
    std::cout << dump_spec_yaml(spec);
    return 0;
  }
  if (out_path.empty())
    out_path = spec.output_path.empty() ? "results.csv" : spec.output_path;

  const std::vector<ResultRow> rows = run(spec, opts);
  int failed = 0;
  for (const auto &r : rows)
    if (r.status.rfind("error", 0) == 0) {
      ++failed;
      std::cerr << "warning: " << r.scheme << " " << r.axis << "="
                << r.axis_value << " r" << r.realization_index << ": "
                << r.status << "\n";
    }
  {
    auto os = open_out(out_path);
    write_results_csv(os, rows);
  }
  if (spec.sweep_axis == SweepAxis::iterations) {
    const std::string tp =
        traces_path.empty() ? out_path + ".traces.csv" : traces_path;
    auto os = open_out(tp);
    write_traces_csv(os, rows);
  }
  print_summary(std::cout, summarize(rows));
  std::cerr << "wrote " << rows.size() << " rows to " << out_path;
  if (failed)
    std::cerr << " (" << failed << " failed)";
  std::cerr << "\n";
  return 0;
}

int cmd_summarize(const std::string &in_path, const std::string &out_path) {
  std::ifstream in(in_path);
  if (!in)
    throw CliError("io", "cannot open '" + in_path + "'");
  std::vector<ResultRow> rows;
  try {
    rows = read_results_csv(in);
  } catch (const std::runtime_error &e) {
    throw CliError("schema", e.what());
  }
  const Summary s = summarize(rows);
  if (out_path.empty()) {
    print_summary(std::cout, s);
  } else {
    auto os = open_out(out_path);
    print_summary(os, s);
  }
  return 0;
}

// Quick end-to-end sanity checks on a tiny system; writes the results CSV of
// the tiny sweep as a fixture when --out is given.
int cmd_selftest(const std::string &out_path) {
  int failures = 0;
  auto check = [&](bool ok, const std::string &name) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    failures += ok ? 0 : 1;
  };

  ExperimentSpec spec;
  spec.sweep_axis = SweepAxis::m_tx;
  spec.axis_values = {{4, 0}};
  spec.base_config.m_tx = 4;
  spec.base_config.n_irs1 = spec.base_config.n_irs2 = 6;
  spec.base_config.n_sub = 2;
  spec.n_realizations = 2;
  spec.optimizer.max_iters = 60;
  for (SchemeKind k : kAllSchemes) {
    SchemeSpec s{k};
    s.ao_outer_cycles = 3;
    s.ao_inner_iters = 10;
    spec.schemes.push_back(s);
  }

  // Gradient against central differences on one instance.
  {
    const SystemConfig &cfg = spec.base_config;
    const auto prob =
        SecrecyProblem::make(generate(cfg, spec.geometry, 7), cfg);
    const IteratePoint x = random_point(cfg.m_tx, cfg.n_streams, cfg.n_sub,
                                        cfg.n_irs1, cfg.n_irs2, 8);
    const TangentVector g = evaluate(prob, x, true).gradient;
    const double h = 1e-6;
    double worst = 0.0;
    for (int n = 0; n < cfg.n_irs1; ++n) {
      IteratePoint p = x, m = x;
      p.phi1[n] += h;
      m.phi1[n] -= h;
      const double fd = (objective(prob, p) - objective(prob, m)) / (2 * h);
      worst = std::max(worst, std::abs(fd - g.psi1[n].real()) /
                                  std::max(1.0, std::abs(fd)));
    }
    check(worst < 1e-5, "phi1 gradient matches central differences");
  }

  std::ostringstream a, b;
  const auto rows = run(spec);
  write_results_csv(a, rows);
  write_results_csv(b, run(spec));
  check(a.str() == b.str(), "two runs with one seed give identical CSV");
  bool ok = rows.size() == 14;
  for (const auto &r : rows)
    ok = ok && std::isfinite(r.ssr_total_bits) && r.ssr_total_bits >= 0 &&
         std::abs(r.power_used - spec.base_config.power_watts) < 1e-9;
  check(ok, "every scheme yields a finite SSR at full power");

  if (!out_path.empty()) {
    auto os = open_out(out_path);
    os << a.str();
  }
  return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Cooperative double-IRS secrecy-rate optimizer and sweeps"};
  app.require_subcommand(1);

  std::string spec_path, preset_name, out_path, traces_path, in_path;
  bool desk = false, dry_run = false;
  int realizations = 0;
  RunOptions opts;

  auto *run_cmd = app.add_subcommand("run", "run a sweep and write CSV");
  run_cmd->add_option("--spec", spec_path, "YAML experiment spec");
  run_cmd->add_option("--preset", preset_name, "named preset")
      ->check(CLI::IsMember(preset_names()));
  run_cmd->add_flag("--desk", desk, "shrink a preset to desk scale");
  run_cmd->add_option("--out", out_path, "results CSV path");
  run_cmd->add_option("--traces", traces_path,
                      "trace CSV path (iterations axis)");
  run_cmd->add_option("--threads", opts.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--realizations", realizations,
                      "override the realization count");
  run_cmd->add_flag("--timing", opts.timing,
                    "record wall time (output no longer reproducible)");
  run_cmd->add_flag("--progress", opts.progress, "per-row progress on stderr");
  run_cmd->add_flag("--dry-run", dry_run, "print the resolved spec as YAML");

  auto *sum_cmd = app.add_subcommand("summarize", "aggregate a results CSV");
  sum_cmd->add_option("--in,input", in_path, "results CSV")->required();
  sum_cmd->add_option("--out", out_path, "summary CSV (default stdout)");

  auto *self_cmd = app.add_subcommand("selftest", "run built-in checks");
  self_cmd->add_option("--out", out_path, "write the fixture CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    return report_error("usage", e.what());
  }

  try {
    if (*run_cmd)
      return cmd_run(spec_path, preset_name, desk, out_path, traces_path,
                     realizations, opts, dry_run);
    if (*sum_cmd)
      return cmd_summarize(in_path, out_path);
    return cmd_selftest(out_path);
  } catch (const CliError &e) {
    return report_error(e.code, e.what());
  } catch (const std::exception &e) {
    return report_error("runtime", e.what());
  }
}
