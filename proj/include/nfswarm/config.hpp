// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nfswarm/simulation.hpp"
#include "nfswarm/snr.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace nfswarm {

// Raised for malformed, unreadable or inconsistent configuration input; the
// CLI maps it to the usage-error exit code.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  std::vector<double> spacing_factors;  // UAV spacing sweep, units of d
  std::vector<double> uav_counts;       // element sweep, UAV count per row
};

struct ToolConfig {
  ArrayConfig array;
  ExperimentSpec experiment;  // carries the grid and estimator selection
  SnrScenario scenario;       // single-point scenario for snr commands
  SweepSpec sweep;
  std::string canonical;      // canonical JSON echo of the parsed input
  std::string hash;           // sha256 of the canonical form
};

// Parses a single JSON document. Unknown keys anywhere are rejected.
ToolConfig load_config(const std::string& path);
ToolConfig parse_config(const std::string& json_text);

}  // namespace nfswarm
