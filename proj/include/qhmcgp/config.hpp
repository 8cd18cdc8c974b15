#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "qhmcgp/experiment.hpp"

namespace qhmcgp {

/// A fully resolved run configuration.
///
/// Read from a JSON document whose top-level keys are `experiment_id`,
/// `method`, `seed`, `output_dir`, and the sections `benchmark`, `qhmc`,
/// `constraints`, `adaptive` and `sweep`. Every key is optional; an empty file
/// yields the arctan2d reference experiment. Unknown keys are errors.
struct RunConfig {
  ExperimentSettings settings;
  std::string output_dir = ".";
  std::vector<int> sweep_n_train;
  std::vector<double> sweep_snr_percent;

  /// The resolved configuration as JSON (the manifest format).
  nlohmann::json to_json() const;
};

/// Parse configuration text. Throws ConfigError naming the line (syntax
/// errors) or the dotted field path (type, range and unknown-key errors).
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::string& path);

std::string to_string(ConstraintKind k);
std::string to_string(ConstraintMode m);

}  // namespace qhmcgp
