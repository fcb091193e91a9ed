#pragma once

// Binary framing for results crossing the worker-process boundary.

#include "jdiv/backend.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace jdiv::wire {

std::string encode(const JsonValue& v);
std::optional<JsonValue> decode_value(std::string_view bytes);

std::string encode(const BackendParseResult& r);
std::optional<BackendParseResult> decode_parse(std::string_view bytes);

std::string encode(const BackendSerializeResult& r);
std::optional<BackendSerializeResult> decode_serialize(std::string_view bytes);

/// Frame for an exception that escaped the backend inside the worker.
std::string encode_fault(std::string_view what);
std::optional<std::string> decode_fault(std::string_view bytes);

}  // namespace jdiv::wire
