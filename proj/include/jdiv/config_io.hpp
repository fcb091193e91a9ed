#pragma once

#include "jdiv/json_value.hpp"
#include "jdiv/parser.hpp"

#include <string>
#include <string_view>

namespace jdiv {

// Config documents are flat strict-JSON objects naming every LenienceConfig
// field. Missing and unknown keys are both errors (FormatError).
//
//   {"allow_trailing_commas":false, ..., "object_order":"shuffled",
//    "shuffle_seed":7, "depth_limit":512, "depth_overflow":"checked-error"}

JsonValue config_to_value(const LenienceConfig& cfg);
LenienceConfig config_from_value(const JsonValue& doc);

std::string config_to_json(const LenienceConfig& cfg);
LenienceConfig config_from_json(std::string_view text);

}  // namespace jdiv
