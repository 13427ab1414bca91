#pragma once

#include "coirs/experiment.hpp"

#include <string>

namespace coirs {

/// Parses an experiment spec from YAML text. Missing keys keep the defaults
/// of the full-scale setup. Throws std::invalid_argument with the offending
/// key on bad input.
ExperimentSpec parse_spec_yaml(const std::string &text);
ExperimentSpec load_spec_file(const std::string &path);

/// Serializes a spec back to YAML (round-trips through parse_spec_yaml).
std::string dump_spec_yaml(const ExperimentSpec &spec);

double db_to_watts(double db);
double dbm_to_watts(double dbm);

} // namespace coirs
