// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nfswarm/config.hpp"

#include <string>
#include <vector>

namespace nfswarm {

struct ValidationCheck {
  std::string name;
  double measured = 0.0;   // observed error/figure of merit
  double threshold = 0.0;  // pass when measured <= threshold
  bool pass = false;
};

// Cross-checks the closed forms against their independent evaluation routes on
// the configured array: analytical SNR forms vs the exact sums, the cross-field
// vs spherical-model gap, the flattening/compression identities, measurement
// design invariants, and the kernel derivative.
std::vector<ValidationCheck> run_validation(const ToolConfig& cfg);

}  // namespace nfswarm
