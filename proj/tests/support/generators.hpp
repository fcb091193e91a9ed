#pragma once

// Random inputs for the property tests. Everything is driven by an explicit
// std::mt19937_64 so failures reproduce from the printed seed.

#include "jdiv/json_value.hpp"
#include "jdiv/parser.hpp"
#include "jdiv/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iterator>
#include <random>
#include <string>
#include <vector>

namespace jdiv::testgen {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline void append_utf8(std::string& out, unsigned cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

/// Valid UTF-8 text: mostly ASCII, with controls, quotes, backslashes and
/// multi-byte code points mixed in.
inline std::string random_text(Rng& rng, std::size_t max_len = 8) {
    static const std::vector<unsigned> specials{'"', '\\', '/', 0x00, 0x07, 0x1F, '\n', '\t', 0x7F,
                                                0xE9, 0x2064, 0xFFFF, 0x1F600, 0x10FFFF};
    std::string s;
    const std::size_t len = pick(rng, max_len + 1);
    for (std::size_t k = 0; k < len; ++k) {
        if (coin(rng, 0.25))
            append_utf8(s, specials[pick(rng, specials.size())]);
        else
            s += static_cast<char>('a' + pick(rng, 26));
    }
    return s;
}

inline std::string random_key(Rng& rng) {
    // A small alphabet so repeats and collisions across objects are common.
    static const char* keys[] = {"a", "b", "c", "id", "x_1", "$k", "\xC3\xA9", "k\"q", ""};
    return keys[pick(rng, std::size(keys))];
}

inline cpp_int random_big(Rng& rng) {
    cpp_int v = 1;
    const std::size_t limbs = 2 + pick(rng, 3);
    for (std::size_t k = 0; k < limbs; ++k) v = (v << 64) + rng();
    return coin(rng) ? v : cpp_int(-v);
}

/// A number the strict parser could have produced: Int64, BigInt outside
/// the int64 range, BigDecimal, or Float64 negative zero.
inline JsonNumber random_strict_number(Rng& rng) {
    switch (pick(rng, 5)) {
    case 0: return JsonNumber(static_cast<std::int64_t>(rng()));
    case 1: return JsonNumber(static_cast<std::int64_t>(pick(rng, 2001)) - 1000);
    case 2: return JsonNumber(BigInteger{random_big(rng)});
    case 3: {
        cpp_int unscaled = static_cast<std::int64_t>(rng() >> pick(rng, 64)) * (coin(rng) ? 1 : -1);
        cpp_int exponent = static_cast<std::int64_t>(pick(rng, 81)) - 40;
        if (coin(rng, 0.1)) exponent = random_big(rng);
        return JsonNumber(BigDecimal{std::move(unscaled), std::move(exponent)});
    }
    default: return JsonNumber(-0.0);
    }
}

/// Any representable number, including every Float64 and RawLexeme.
inline JsonNumber random_number(Rng& rng) {
    switch (pick(rng, 4)) {
    case 0: {
        double d;
        do {
            const std::uint64_t bits = rng();
            std::memcpy(&d, &bits, sizeof d);
        } while (!std::isfinite(d));
        return JsonNumber(d);
    }
    case 1: {
        static const char* lexemes[] = {"0", "-0", "1.50", "1e2", "1E+2", "-0.0e-0", "123456789012345678901234567890"};
        return JsonNumber(RawNumber{lexemes[pick(rng, std::size(lexemes))]});
    }
    default: return random_strict_number(rng);
    }
}

struct ValueOptions {
    std::size_t max_depth = 4;
    bool strict_numbers = true;
    bool unique_keys = false;
    bool hashed_objects = false;
};

inline JsonValue random_value(Rng& rng, const ValueOptions& opt = {}, std::size_t depth = 0) {
    const std::size_t kinds = depth >= opt.max_depth ? 4 : 6;
    switch (pick(rng, kinds)) {
    case 0: return JsonValue(JsonNull{});
    case 1: return JsonValue(coin(rng));
    case 2: return JsonValue(opt.strict_numbers ? random_strict_number(rng) : random_number(rng));
    case 3: return JsonValue(random_text(rng));
    case 4: {
        JsonArray items;
        const std::size_t n = pick(rng, 4);
        for (std::size_t k = 0; k < n; ++k) items.push_back(random_value(rng, opt, depth + 1));
        return JsonValue(std::move(items));
    }
    default: {
        JsonObject o;
        const std::size_t n = pick(rng, 5);
        for (std::size_t k = 0; k < n; ++k) {
            std::string key = random_key(rng);
            if (opt.unique_keys) {
                bool dup = false;
                for (const auto& m : o.members) dup = dup || m.key == key;
                if (dup) continue;
            }
            o.members.push_back(JsonMember{std::move(key), random_value(rng, opt, depth + 1)});
        }
        if (opt.hashed_objects && coin(rng)) o.ordering = ObjectOrdering{ObjectOrdering::Mode::hashed, rng()};
        return JsonValue(std::move(o));
    }
    }
}

/// Same document with object pairs permuted (last occurrence of each key
/// kept so the permutation cannot change which duplicate wins).
inline JsonValue permuted(const JsonValue& v, Rng& rng) {
    if (const auto* a = v.as_array()) {
        JsonArray items;
        for (const auto& e : *a) items.push_back(permuted(e, rng));
        return JsonValue(std::move(items));
    }
    if (const auto* o = v.as_object()) {
        JsonObject out;
        for (const auto& m : o->members) {
            bool later = false;
            for (auto it = o->members.rbegin(); &*it != &m; ++it) later = later || it->key == m.key;
            if (!later) out.members.push_back(JsonMember{m.key, permuted(m.value, rng)});
        }
        std::shuffle(out.members.begin(), out.members.end(), rng);
        return JsonValue(std::move(out));
    }
    return v;
}

inline SerializeStyle random_style(Rng& rng) {
    SerializeStyle s;
    s.exponent_marker = coin(rng) ? 'E' : 'e';
    s.key_order = coin(rng) ? SerializeStyle::KeyOrder::insertion : SerializeStyle::KeyOrder::lexicographic;
    s.escape = coin(rng) ? SerializeStyle::Escape::minimal : SerializeStyle::Escape::ascii_only;
    return s;
}

/// RFC 8259 number lexeme, covering leading "-0", fractions and every
/// exponent sign/marker form.
inline std::string random_number_lexeme(Rng& rng) {
    std::string s;
    if (coin(rng)) s += '-';
    if (coin(rng, 0.3)) {
        s += '0';
    } else {
        s += static_cast<char>('1' + pick(rng, 9));
        for (std::size_t k = pick(rng, coin(rng, 0.2) ? 40 : 6); k > 0; --k)
            s += static_cast<char>('0' + pick(rng, 10));
    }
    if (coin(rng, 0.4)) {
        s += '.';
        for (std::size_t k = 1 + pick(rng, 8); k > 0; --k) s += static_cast<char>('0' + pick(rng, 10));
    }
    if (coin(rng, 0.3)) {
        s += coin(rng) ? 'e' : 'E';
        if (const auto sign = pick(rng, 3); sign > 0) s += sign == 1 ? '+' : '-';
        for (std::size_t k = 1 + pick(rng, 3); k > 0; --k) s += static_cast<char>('0' + pick(rng, 10));
    }
    return s;
}

inline std::string random_ws(Rng& rng) {
    static const char ws[] = {' ', '\t', '\n', '\r'};
    std::string s;
    if (coin(rng, 0.7)) return s;
    for (std::size_t k = 1 + pick(rng, 3); k > 0; --k) s += ws[pick(rng, 4)];
    return s;
}

/// String literal with raw UTF-8 and every escape form, including surrogate
/// pairs spelled as two \u escapes.
inline std::string random_string_literal(Rng& rng) {
    static const char* escapes[] = {"\\\"", "\\\\", "\\/", "\\b", "\\f", "\\n", "\\r", "\\t",
                                    "\\u0041", "\\u00e9", "\\u0000", "\\uD83D\\uDE00", "\\u2064"};
    std::string s = "\"";
    for (std::size_t k = pick(rng, 6); k > 0; --k) {
        switch (pick(rng, 4)) {
        case 0: s += escapes[pick(rng, std::size(escapes))]; break;
        case 1: append_utf8(s, coin(rng) ? 0xE9 : 0x1F600); break;
        default: s += static_cast<char>('a' + pick(rng, 26));
        }
    }
    return s + '"';
}

/// Strictly valid JSON text with random insignificant whitespace. Keys come
/// from a small pool so duplicates show up.
inline std::string random_json_text(Rng& rng, std::size_t max_depth = 4, std::size_t depth = 0) {
    std::string s = depth == 0 ? random_ws(rng) : std::string();
    switch (pick(rng, depth >= max_depth ? 4 : 6)) {
    case 0: s += coin(rng) ? "null" : (coin(rng) ? "true" : "false"); break;
    case 1:
    case 2: s += random_number_lexeme(rng); break;
    case 3: s += random_string_literal(rng); break;
    case 4: {
        s += '[' + random_ws(rng);
        const std::size_t n = pick(rng, 4);
        for (std::size_t k = 0; k < n; ++k) {
            if (k) s += ',' + random_ws(rng);
            s += random_json_text(rng, max_depth, depth + 1) + random_ws(rng);
        }
        s += ']';
        break;
    }
    default: {
        s += '{' + random_ws(rng);
        const std::size_t n = pick(rng, 4);
        for (std::size_t k = 0; k < n; ++k) {
            if (k) s += ',' + random_ws(rng);
            s += quote_string(random_key(rng), SerializeStyle::Escape::minimal) + random_ws(rng) + ':' + random_ws(rng);
            s += random_json_text(rng, max_depth, depth + 1) + random_ws(rng);
        }
        s += '}';
    }
    }
    return depth == 0 ? s + random_ws(rng) : s;
}

}  // namespace jdiv::testgen
