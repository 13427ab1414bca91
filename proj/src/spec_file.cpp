#include "coirs/spec_file.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace coirs {

namespace {

template <typename T>
void read_opt(const YAML::Node &node, const char *key, T &out,
              const std::string &where) {
  const YAML::Node v = node[key];
  if (!v)
    return;
  try {
    out = v.as<T>();
  } catch (const YAML::Exception &) {
    throw std::invalid_argument("spec key '" + where + key +
                                "' has the wrong type");
  }
}

Point2 read_point(const YAML::Node &node, const char *key, Point2 def) {
  const YAML::Node v = node[key];
  if (!v)
    return def;
  if (!v.IsSequence() || v.size() != 2)
    throw std::invalid_argument(std::string("geometry.") + key +
                                " must be a two-element list [x, y]");
  return {v[0].as<double>(), v[1].as<double>()};
}

void check_keys(const YAML::Node &node, std::initializer_list<const char *> known,
                const std::string &where) {
  if (!node.IsMap())
    throw std::invalid_argument("spec section '" + where + "' must be a mapping");
  for (const auto &kv : node) {
    const auto key = kv.first.as<std::string>();
    bool ok = false;
    for (const char *k : known)
      ok = ok || key == k;
    if (!ok)
      throw std::invalid_argument("unknown spec key '" + where + key + "'");
  }
}

} // namespace

double db_to_watts(double db) { return std::pow(10.0, db / 10.0); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

ExperimentSpec parse_spec_yaml(const std::string &text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception &e) {
    throw std::invalid_argument(std::string("spec is not valid YAML: ") +
                                e.what());
  }
  check_keys(root,
             {"sweep_axis", "axis_values", "schemes", "n_realizations",
              "master_seed", "output_path", "system", "geometry", "optimizer",
              "ao", "nmse"},
             "");

  ExperimentSpec spec;
  if (const auto ax = root["sweep_axis"])
    spec.sweep_axis = parse_axis(ax.as<std::string>());
  read_opt(root, "n_realizations", spec.n_realizations, "");
  read_opt(root, "master_seed", spec.master_seed, "");
  read_opt(root, "output_path", spec.output_path, "");
  read_opt(root, "nmse", spec.cee.delta, "");

  if (const auto vals = root["axis_values"]) {
    if (!vals.IsSequence())
      throw std::invalid_argument("axis_values must be a list");
    for (const auto &v : vals) {
      if (v.IsSequence()) {
        if (v.size() != 2)
          throw std::invalid_argument("position axis values must be [x1, x2]");
        spec.axis_values.push_back({v[0].as<double>(), v[1].as<double>()});
      } else {
        spec.axis_values.push_back({v.as<double>(), 0.0});
      }
    }
  }

  SchemeSpec ao_defaults;
  if (const auto ao = root["ao"]) {
    check_keys(ao, {"inner_iters", "inner_tol", "outer_cycles"}, "ao.");
    read_opt(ao, "inner_iters", ao_defaults.ao_inner_iters, "ao.");
    read_opt(ao, "inner_tol", ao_defaults.ao_inner_tol, "ao.");
    read_opt(ao, "outer_cycles", ao_defaults.ao_outer_cycles, "ao.");
  }
  if (const auto schemes = root["schemes"]) {
    for (const auto &s : schemes) {
      SchemeSpec sp = ao_defaults;
      sp.kind = parse_scheme(s.as<std::string>());
      spec.schemes.push_back(sp);
    }
  } else {
    for (SchemeKind k : kAllSchemes) {
      SchemeSpec sp = ao_defaults;
      sp.kind = k;
      spec.schemes.push_back(sp);
    }
  }

  if (const auto sys = root["system"]) {
    check_keys(sys,
               {"m_tx", "n_bob", "n_eve", "n_streams", "n_sub", "n_irs1",
                "n_irs2", "power_watts", "power_db", "noise_bob_watts",
                "noise_eve_watts", "noise_dbm"},
               "system.");
    SystemConfig &c = spec.base_config;
    read_opt(sys, "m_tx", c.m_tx, "system.");
    read_opt(sys, "n_bob", c.n_bob, "system.");
    read_opt(sys, "n_eve", c.n_eve, "system.");
    read_opt(sys, "n_streams", c.n_streams, "system.");
    read_opt(sys, "n_sub", c.n_sub, "system.");
    read_opt(sys, "n_irs1", c.n_irs1, "system.");
    read_opt(sys, "n_irs2", c.n_irs2, "system.");
    if (sys["power_db"])
      c.power_watts = db_to_watts(sys["power_db"].as<double>());
    read_opt(sys, "power_watts", c.power_watts, "system.");
    if (sys["noise_dbm"])
      c.noise_bob_watts = c.noise_eve_watts =
          dbm_to_watts(sys["noise_dbm"].as<double>());
    read_opt(sys, "noise_bob_watts", c.noise_bob_watts, "system.");
    read_opt(sys, "noise_eve_watts", c.noise_eve_watts, "system.");
  }

  if (const auto geo = root["geometry"]) {
    check_keys(geo,
               {"alice", "irs1", "irs2", "bob", "eve", "pl0_db", "d0_m",
                "exponents"},
               "geometry.");
    SceneGeometry &g = spec.geometry;
    g.pos_alice = read_point(geo, "alice", g.pos_alice);
    g.pos_irs1 = read_point(geo, "irs1", g.pos_irs1);
    g.pos_irs2 = read_point(geo, "irs2", g.pos_irs2);
    g.pos_bob = read_point(geo, "bob", g.pos_bob);
    g.pos_eve = read_point(geo, "eve", g.pos_eve);
    read_opt(geo, "pl0_db", g.pl0_db, "geometry.");
    read_opt(geo, "d0_m", g.d0_m, "geometry.");
    if (const auto ex = geo["exponents"]) {
      check_keys(ex,
                 {"a_i1", "a_i2", "i1_b", "i1_e", "i2_b", "i2_e", "i1_i2"},
                 "geometry.exponents.");
      auto &e = g.exponents;
      const std::string w = "geometry.exponents.";
      read_opt(ex, "a_i1", e.a_i1, w);
      read_opt(ex, "a_i2", e.a_i2, w);
      read_opt(ex, "i1_b", e.i1_b, w);
      read_opt(ex, "i1_e", e.i1_e, w);
      read_opt(ex, "i2_b", e.i2_b, w);
      read_opt(ex, "i2_e", e.i2_e, w);
      read_opt(ex, "i1_i2", e.i1_i2, w);
    }
  }

  if (const auto opt = root["optimizer"]) {
    check_keys(opt,
               {"max_iters", "grad_tol", "armijo_init", "armijo_shrink",
                "armijo_max_backtracks"},
               "optimizer.");
    OptimizerConfig &o = spec.optimizer;
    read_opt(opt, "max_iters", o.max_iters, "optimizer.");
    read_opt(opt, "grad_tol", o.grad_tol, "optimizer.");
    read_opt(opt, "armijo_init", o.armijo_init, "optimizer.");
    read_opt(opt, "armijo_shrink", o.armijo_shrink, "optimizer.");
    read_opt(opt, "armijo_max_backtracks", o.armijo_max_backtracks,
             "optimizer.");
  }

  spec.validate();
  return spec;
}

ExperimentSpec load_spec_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open spec file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spec_yaml(buf.str());
}

std::string dump_spec_yaml(const ExperimentSpec &spec) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "sweep_axis" << YAML::Value
      << std::string(to_string(spec.sweep_axis));
  out << YAML::Key << "axis_values" << YAML::Value << YAML::Flow
      << YAML::BeginSeq;
  for (const auto &v : spec.axis_values) {
    if (spec.sweep_axis == SweepAxis::irs_positions)
      out << YAML::Flow << YAML::BeginSeq << v.a << v.b << YAML::EndSeq;
    else
      out << v.a;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "schemes" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto &s : spec.schemes)
    out << std::string(to_string(s.kind));
  out << YAML::EndSeq;
  out << YAML::Key << "n_realizations" << YAML::Value << spec.n_realizations;
  out << YAML::Key << "master_seed" << YAML::Value << spec.master_seed;
  out << YAML::Key << "output_path" << YAML::Value << spec.output_path;
  out << YAML::Key << "nmse" << YAML::Value << spec.cee.delta;

  const SystemConfig &c = spec.base_config;
  out << YAML::Key << "system" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "m_tx" << YAML::Value << c.m_tx;
  out << YAML::Key << "n_bob" << YAML::Value << c.n_bob;
  out << YAML::Key << "n_eve" << YAML::Value << c.n_eve;
  out << YAML::Key << "n_streams" << YAML::Value << c.n_streams;
  out << YAML::Key << "n_sub" << YAML::Value << c.n_sub;
  out << YAML::Key << "n_irs1" << YAML::Value << c.n_irs1;
  out << YAML::Key << "n_irs2" << YAML::Value << c.n_irs2;
  out << YAML::Key << "power_watts" << YAML::Value << c.power_watts;
  out << YAML::Key << "noise_bob_watts" << YAML::Value << c.noise_bob_watts;
  out << YAML::Key << "noise_eve_watts" << YAML::Value << c.noise_eve_watts;
  out << YAML::EndMap;

  const SceneGeometry &g = spec.geometry;
  auto point = [&](const char *key, Point2 p) {
    out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq
        << p.x << p.y << YAML::EndSeq;
  };
  out << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap;
  point("alice", g.pos_alice);
  point("irs1", g.pos_irs1);
  point("irs2", g.pos_irs2);
  point("bob", g.pos_bob);
  point("eve", g.pos_eve);
  out << YAML::Key << "pl0_db" << YAML::Value << g.pl0_db;
  out << YAML::Key << "d0_m" << YAML::Value << g.d0_m;
  out << YAML::Key << "exponents" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "a_i1" << YAML::Value << g.exponents.a_i1;
  out << YAML::Key << "a_i2" << YAML::Value << g.exponents.a_i2;
  out << YAML::Key << "i1_b" << YAML::Value << g.exponents.i1_b;
  out << YAML::Key << "i1_e" << YAML::Value << g.exponents.i1_e;
  out << YAML::Key << "i2_b" << YAML::Value << g.exponents.i2_b;
  out << YAML::Key << "i2_e" << YAML::Value << g.exponents.i2_e;
  out << YAML::Key << "i1_i2" << YAML::Value << g.exponents.i1_i2;
  out << YAML::EndMap << YAML::EndMap;

  const OptimizerConfig &o = spec.optimizer;
  out << YAML::Key << "optimizer" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "max_iters" << YAML::Value << o.max_iters;
  out << YAML::Key << "grad_tol" << YAML::Value << o.grad_tol;
  out << YAML::Key << "armijo_init" << YAML::Value << o.armijo_init;
  out << YAML::Key << "armijo_shrink" << YAML::Value << o.armijo_shrink;
  out << YAML::Key << "armijo_max_backtracks" << YAML::Value
      << o.armijo_max_backtracks;
  out << YAML::EndMap;

  const SchemeSpec ao = spec.schemes.empty() ? SchemeSpec{} : spec.schemes[0];
  out << YAML::Key << "ao" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "inner_iters" << YAML::Value << ao.ao_inner_iters;
  out << YAML::Key << "inner_tol" << YAML::Value << ao.ao_inner_tol;
  out << YAML::Key << "outer_cycles" << YAML::Value << ao.ao_outer_cycles;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

} // namespace coirs
