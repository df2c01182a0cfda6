// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace nfswarm {

// SHA-256 hex digest, used for content-addressed cache keys and run manifests.
std::string sha256_hex(std::string_view data);

}  // namespace nfswarm
