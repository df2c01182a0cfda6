// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nfswarm/sensing.hpp"

#include <string>

namespace nfswarm {

// Versioned binary cache for built dictionaries. Layout: magic + version,
// the content key, grid arrays, then the factor/column payloads as row-major
// complex128. Loading verifies magic, version and key.
void save_sd_dictionary(const std::string& path, const SdDictionary& dict,
                        const std::string& content_key);
SdDictionary load_sd_dictionary(const std::string& path,
                                const std::string& content_key);

void save_tensor_dictionary(const std::string& path, const TensorDictionary& dict,
                            const std::string& content_key);
TensorDictionary load_tensor_dictionary(const std::string& path,
                                        const std::string& content_key);

bool cache_file_exists(const std::string& path);

}  // namespace nfswarm
