#pragma once

#include "jdiv/number.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

namespace jdiv {

class JsonValue;
struct JsonMember;

/// How an object's pair sequence was produced. Hashed objects come from a
/// backend simulating an unordered map: pairs sit in seeded-hash order.
struct ObjectOrdering {
    enum class Mode { insertion, hashed };
    Mode mode = Mode::insertion;
    std::uint64_t seed = 0;

    friend bool operator==(const ObjectOrdering&, const ObjectOrdering&) = default;
};

struct JsonObject {
    std::vector<JsonMember> members;
    ObjectOrdering ordering;
};

using JsonArray = std::vector<JsonValue>;

struct JsonNull {
    friend bool operator==(JsonNull, JsonNull) { return true; }
};

enum class ValueKind { null, boolean, number, string, array, object };

/// Immutable JSON document node.
class JsonValue {
public:
    using Storage = std::variant<JsonNull, bool, JsonNumber, std::string, JsonArray, JsonObject>;

    JsonValue() : data_(JsonNull{}) {}
    JsonValue(JsonNull) : data_(JsonNull{}) {}
    JsonValue(bool b) : data_(b) {}
    // Without these an int or double literal would convert to bool.
    template <class T>
        requires(std::is_integral_v<T> && !std::is_same_v<T, bool>)
    JsonValue(T v) : data_(integral_number(v)) {}
    JsonValue(JsonNumber n) : data_(std::move(n)) {}
    JsonValue(double d) : data_(JsonNumber(d)) {}
    JsonValue(std::string s) : data_(std::move(s)) {}
    JsonValue(const char* s) : data_(std::string(s)) {}
    JsonValue(JsonArray a) : data_(std::move(a)) {}
    JsonValue(JsonObject o) : data_(std::move(o)) {}

    // Integers select the Int64 variant; doubles select Float64.
    static JsonValue integer(std::int64_t v) { return JsonValue(JsonNumber(v)); }
    static JsonValue float64(double v) { return JsonValue(JsonNumber(v)); }

    ValueKind kind() const { return static_cast<ValueKind>(data_.index()); }
    bool is_null() const { return kind() == ValueKind::null; }
    bool is_scalar() const { return kind() != ValueKind::array && kind() != ValueKind::object; }

    const bool* as_bool() const { return std::get_if<bool>(&data_); }
    const JsonNumber* as_number() const { return std::get_if<JsonNumber>(&data_); }
    const std::string* as_string() const { return std::get_if<std::string>(&data_); }
    const JsonArray* as_array() const { return std::get_if<JsonArray>(&data_); }
    const JsonObject* as_object() const { return std::get_if<JsonObject>(&data_); }

    const Storage& storage() const { return data_; }

    /// Value of the last pair named `key`, or nullptr.
    const JsonValue* find(std::string_view key) const;

private:
    template <class T>
    static JsonNumber integral_number(T v) {
        if constexpr (std::is_unsigned_v<T> && sizeof(T) >= sizeof(std::int64_t)) {
            if (v > static_cast<std::uint64_t>(INT64_MAX)) return JsonNumber(BigInteger{cpp_int(v)});
        }
        return JsonNumber(static_cast<std::int64_t>(v));
    }

    Storage data_;
};

struct JsonMember {
    std::string key;
    JsonValue value;
};

JsonObject make_object(std::vector<JsonMember> members);

/// Structural equivalence: arrays in order, objects as key sets (pair order
/// and ordering tag ignored, last pair wins for repeated keys), strings by
/// exact bytes, numbers by variant and value, literals by identity.
bool equivalent(const JsonValue& a, const JsonValue& b);

/// Greatest array/object nesting depth; scalars have depth 0.
std::size_t nesting_depth(const JsonValue& v);

}  // namespace jdiv
