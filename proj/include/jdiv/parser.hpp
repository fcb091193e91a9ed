#pragma once

#include "jdiv/json_value.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace jdiv {

enum class LonelyValues { rfc8259, rfc4627 };
enum class DuplicateKeys { keep_last, keep_first, reject };
enum class NumberPolicy { lossy64, extended, raw };
enum class OverflowMode { error, round_silently };
enum class DepthOverflow { checked_error, crash };

/// One point in the parser design space. Every flag widens the accepted
/// language in exactly one dimension or changes how values are represented.
struct LenienceConfig {
    bool allow_trailing_commas = false;
    bool allow_unquoted_keys = false;
    bool allow_hex_numbers = false;
    bool allow_comments = false;
    bool allow_invalid_escapes = false;
    LonelyValues lonely_values = LonelyValues::rfc8259;
    DuplicateKeys duplicate_keys = DuplicateKeys::keep_last;
    NumberPolicy number_policy = NumberPolicy::extended;
    OverflowMode overflow_mode = OverflowMode::error;
    ObjectOrdering object_order;
    bool drop_null_entries_on_serialize = false;
    std::size_t depth_limit = 512;
    DepthOverflow depth_overflow = DepthOverflow::checked_error;

    static LenienceConfig strict() { return {}; }

    friend bool operator==(const LenienceConfig&, const LenienceConfig&) = default;
};

struct ParseError {
    enum class Kind {
        syntax,
        number_overflow,
        duplicate_key,
        depth_exceeded,
        trailing_content,
        lonely_value_rejected,
    };
    Kind kind;
    std::size_t byte_offset;
    std::string message;
};

std::string_view to_string(ParseError::Kind kind);

struct SerializeError {
    std::string message;
};

/// Raised instead of returning when a config with DepthOverflow::crash runs
/// past its depth limit. It deliberately bypasses the ParseError channel so
/// callers see an unanticipated failure.
class ParserFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using ParseResult = std::variant<JsonValue, ParseError>;
using SerializeResult = std::variant<std::string, SerializeError>;

/// Parses decoded UTF-8 text. Under LenienceConfig::strict() this accepts
/// exactly the RFC 8259 grammar.
///
/// Number representation by policy:
///   lossy64  - Int64 for in-range integers, Float64 otherwise; out-of-range
///              values fail or round per overflow_mode.
///   extended - Int64 / BigInt for integers, BigDecimal for anything with a
///              fraction or exponent.
///   raw      - RawLexeme for every number.
/// The integer lexeme "-0" becomes Float64(-0.0) under lossy64 and extended.
///
/// Throws ParserFault only when depth_overflow is crash.
ParseResult parse(std::string_view input, const LenienceConfig& config);

/// Renders `v` the way a backend configured by `config` would. An RFC 4627
/// backend refuses to print a scalar at top level.
SerializeResult serialize(const JsonValue& v, const LenienceConfig& config);

/// Pair order a hashed object takes under `seed`. Depends only on the key set.
std::uint64_t key_hash(std::string_view key, std::uint64_t seed);

}  // namespace jdiv
