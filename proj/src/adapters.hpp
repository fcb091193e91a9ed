#pragma once

#include "jdiv/backend.hpp"

#include <vector>

namespace jdiv {

/// nlohmann/json and RapidJSON, both isolated in worker processes.
std::vector<AdapterInfo> standard_adapters();

}  // namespace jdiv
