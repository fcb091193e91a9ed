#pragma once

#include "jdiv/json_value.hpp"

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

namespace jdiv {

/// A document that parsed but does not have the expected shape.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Strict parse of a document this tool reads or writes itself.
JsonValue parse_document(std::string_view text, std::string_view what);

const JsonObject& require_object(const JsonValue& v, std::string_view what);
const JsonValue& require_field(const JsonValue& obj, std::string_view key);
std::string require_string(const JsonValue& obj, std::string_view key);
bool require_bool(const JsonValue& obj, std::string_view key);
std::int64_t require_int(const JsonValue& obj, std::string_view key);
double require_real(const JsonValue& obj, std::string_view key);

/// Fails when `obj` has a key outside `allowed`.
void reject_unknown_keys(const JsonValue& obj, std::initializer_list<std::string_view> allowed,
                         std::string_view what);

}  // namespace jdiv
