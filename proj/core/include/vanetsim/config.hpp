// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "vanetsim/montecarlo.hpp"

namespace vanetsim {

/// Reads a JSON experiment config. Unknown keys are rejected with the key
/// name; values are range-checked through ExperimentConfig::validate(). An
/// empty (or whitespace-only) file yields all defaults. A run manifest file
/// is accepted transparently: its embedded config snapshot is loaded, which
/// makes any past run replayable.
ExperimentConfig parse_config(const std::string& path);

/// Same, from in-memory text.
ExperimentConfig parse_config_text(const std::string& text);

std::string config_to_json(const ExperimentConfig& cfg);

/// Reproducibility record written next to every output file.
struct RunManifest {
  std::string version;
  std::uint64_t master_seed = 0;
  std::string timestamp_utc;
  ExperimentConfig config;
  std::vector<std::string> outputs;
};

void write_manifest(const RunManifest& manifest, const std::string& path);

/// Library version (git describe when built from a checkout).
std::string version_string();

}  // namespace vanetsim
