#pragma once

#include "jdiv/json_value.hpp"

#include <string>
#include <string_view>

namespace jdiv {

struct SerializeStyle {
    enum class KeyOrder { insertion, lexicographic };
    enum class Escape { minimal, ascii_only };

    char exponent_marker = 'E';
    KeyOrder key_order = KeyOrder::insertion;
    Escape escape = Escape::minimal;
};

/// Compact deterministic rendering. Int64/BigInt print as plain digits,
/// Float64 as its shortest round-trip decimal, BigDecimal in scientific or
/// plain notation, RawLexeme verbatim.
std::string canonical_serialize(const JsonValue& v, const SerializeStyle& style = {});

/// Quoted string literal. Always escapes quote, backslash and C0 controls;
/// ascii_only additionally escapes everything above U+007F. Code points
/// U+D800..U+DFFF carried as three-byte sequences come back out as \u escapes.
std::string quote_string(std::string_view text, SerializeStyle::Escape escape);

}  // namespace jdiv
