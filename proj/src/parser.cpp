#include "jdiv/parser.hpp"

#include "jdiv/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

namespace jdiv {

namespace {

struct Failure {
    ParseError error;
};

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_hex_digit(char c) {
    return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

unsigned hex_value(char c) {
    if (is_digit(c)) return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    return static_cast<unsigned>(c - 'A' + 10);
}

bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$';
}

bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

void append_utf8(std::string& out, unsigned cp) {
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

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Decimal value to the nearest double. Sets `overflow` when the magnitude
// exceeds the double range; values below it flush toward zero silently.
double to_double(const ExactDecimal& d, bool& overflow) {
    overflow = false;
    if (d.coefficient == 0) return 0.0;
    const bool negative = d.coefficient < 0;
    std::string digits = to_decimal_string(boost::multiprecision::abs(d.coefficient));
    const cpp_int adjusted = d.exponent + static_cast<long>(digits.size() - 1);
    if (adjusted > 309) {
        overflow = true;
        return negative ? -std::numeric_limits<double>::infinity()
                        : std::numeric_limits<double>::infinity();
    }
    if (adjusted < -400) return negative ? -0.0 : 0.0;
    std::string text = negative ? "-" : "";
    text += digits;
    text += 'e';
    text += to_decimal_string(d.exponent);
    double value = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec == std::errc::result_out_of_range) {
        if (adjusted > 0) {
            overflow = true;
            return negative ? -std::numeric_limits<double>::infinity()
                            : std::numeric_limits<double>::infinity();
        }
        return negative ? -0.0 : 0.0;
    }
    if (std::isinf(value)) overflow = true;
    return value;
}

class Parser {
public:
    Parser(std::string_view input, const LenienceConfig& config) : in_(input), cfg_(config) {}

    JsonValue run() {
        skip_ws();
        if (at_end()) fail(ParseError::Kind::syntax, pos_, "empty input");
        const std::size_t start = pos_;
        JsonValue v = value();
        if (cfg_.lonely_values == LonelyValues::rfc4627 && v.is_scalar())
            fail(ParseError::Kind::lonely_value_rejected, start,
                 "top-level value must be an object or an array");
        skip_ws();
        if (!at_end()) fail(ParseError::Kind::trailing_content, pos_, "unexpected content after value");
        return v;
    }

private:
    [[noreturn]] void fail(ParseError::Kind kind, std::size_t offset, std::string message) {
        throw Failure{ParseError{kind, std::min(offset, in_.size()), std::move(message)}};
    }

    bool at_end() const { return pos_ >= in_.size(); }
    char peek() const { return in_[pos_]; }

    void skip_ws() {
        while (!at_end()) {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                ++pos_;
            } else if (cfg_.allow_comments && c == '/' && pos_ + 1 < in_.size() && in_[pos_ + 1] == '/') {
                pos_ += 2;
                while (!at_end() && peek() != '\n') ++pos_;
            } else if (cfg_.allow_comments && c == '/' && pos_ + 1 < in_.size() && in_[pos_ + 1] == '*') {
                const std::size_t close = in_.find("*/", pos_ + 2);
                if (close == std::string_view::npos) fail(ParseError::Kind::syntax, in_.size(), "unterminated comment");
                pos_ = close + 2;
            } else {
                break;
            }
        }
    }

    void enter_container() {
        ++depth_;
        if (depth_ <= cfg_.depth_limit) return;
        if (cfg_.depth_overflow == DepthOverflow::crash)
            throw ParserFault("nesting depth " + std::to_string(depth_) + " exhausted parser stack");
        fail(ParseError::Kind::depth_exceeded, pos_,
             "nesting deeper than " + std::to_string(cfg_.depth_limit));
    }

    JsonValue value() {
        if (at_end()) fail(ParseError::Kind::syntax, pos_, "expected a value");
        switch (peek()) {
        case '{': return object();
        case '[': return array();
        case '"': return JsonValue(string_literal());
        case 't': literal("true"); return JsonValue(true);
        case 'f': literal("false"); return JsonValue(false);
        case 'n': literal("null"); return JsonValue(JsonNull{});
        default: break;
        }
        if (peek() == '-' || is_digit(peek())) return JsonValue(number());
        fail(ParseError::Kind::syntax, pos_, std::string("unexpected character '") + peek() + "'");
    }

    void literal(std::string_view word) {
        for (char expected : word) {
            if (at_end() || peek() != expected)
                fail(ParseError::Kind::syntax, pos_, "invalid literal, expected " + std::string(word));
            ++pos_;
        }
    }

    JsonValue array() {
        enter_container();
        ++pos_;  // '['
        JsonArray items;
        skip_ws();
        if (!at_end() && peek() == ']') {
            ++pos_;
            --depth_;
            return JsonValue(std::move(items));
        }
        while (true) {
            items.push_back(value());
            skip_ws();
            if (at_end()) fail(ParseError::Kind::syntax, pos_, "unterminated array");
            if (peek() == ',') {
                ++pos_;
                skip_ws();
                if (cfg_.allow_trailing_commas && !at_end() && peek() == ']') {
                    ++pos_;
                    break;
                }
                continue;
            }
            if (peek() == ']') {
                ++pos_;
                break;
            }
            fail(ParseError::Kind::syntax, pos_, "expected ',' or ']'");
        }
        --depth_;
        return JsonValue(std::move(items));
    }

    std::string key() {
        if (at_end()) fail(ParseError::Kind::syntax, pos_, "expected a key");
        if (peek() == '"') return string_literal();
        if (cfg_.allow_unquoted_keys && is_ident_start(peek())) {
            const std::size_t start = pos_;
            while (!at_end() && is_ident_char(peek())) ++pos_;
            return std::string(in_.substr(start, pos_ - start));
        }
        fail(ParseError::Kind::syntax, pos_, "expected a string key");
    }

    JsonValue object() {
        enter_container();
        ++pos_;  // '{'
        JsonObject obj;
        std::unordered_map<std::string, std::size_t> seen;
        skip_ws();
        if (!at_end() && peek() == '}') {
            ++pos_;
            --depth_;
            return finish_object(std::move(obj));
        }
        while (true) {
            const std::size_t key_offset = pos_;
            std::string k = key();
            skip_ws();
            if (at_end() || peek() != ':') fail(ParseError::Kind::syntax, pos_, "expected ':'");
            ++pos_;
            skip_ws();
            JsonValue v = value();

            auto [it, inserted] = seen.try_emplace(k, obj.members.size());
            if (inserted) {
                obj.members.push_back(JsonMember{std::move(k), std::move(v)});
            } else {
                switch (cfg_.duplicate_keys) {
                case DuplicateKeys::keep_last: obj.members[it->second].value = std::move(v); break;
                case DuplicateKeys::keep_first: break;
                case DuplicateKeys::reject:
                    fail(ParseError::Kind::duplicate_key, key_offset, "duplicate key \"" + k + "\"");
                }
            }

            skip_ws();
            if (at_end()) fail(ParseError::Kind::syntax, pos_, "unterminated object");
            if (peek() == ',') {
                ++pos_;
                skip_ws();
                if (cfg_.allow_trailing_commas && !at_end() && peek() == '}') {
                    ++pos_;
                    break;
                }
                continue;
            }
            if (peek() == '}') {
                ++pos_;
                break;
            }
            fail(ParseError::Kind::syntax, pos_, "expected ',' or '}'");
        }
        --depth_;
        return finish_object(std::move(obj));
    }

    JsonValue finish_object(JsonObject obj) {
        obj.ordering = cfg_.object_order;
        if (obj.ordering.mode == ObjectOrdering::Mode::hashed) {
            const std::uint64_t seed = obj.ordering.seed;
            std::stable_sort(obj.members.begin(), obj.members.end(),
                             [seed](const JsonMember& a, const JsonMember& b) {
                                 const auto ha = key_hash(a.key, seed);
                                 const auto hb = key_hash(b.key, seed);
                                 return ha != hb ? ha < hb : a.key < b.key;
                             });
        }
        return JsonValue(std::move(obj));
    }

    unsigned hex4() {
        unsigned cp = 0;
        for (int k = 0; k < 4; ++k) {
            if (at_end() || !is_hex_digit(peek())) fail(ParseError::Kind::syntax, pos_, "invalid \\u escape");
            cp = (cp << 4) | hex_value(peek());
            ++pos_;
        }
        return cp;
    }

    // Copies one strictly valid UTF-8 sequence starting at pos_.
    void utf8_sequence(std::string& out) {
        const auto b0 = static_cast<unsigned char>(peek());
        std::size_t len = 0;
        unsigned cp = 0;
        unsigned min = 0;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2, cp = b0 & 0x1F, min = 0x80;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3, cp = b0 & 0x0F, min = 0x800;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4, cp = b0 & 0x07, min = 0x10000;
        } else {
            fail(ParseError::Kind::syntax, pos_, "invalid UTF-8 lead byte");
        }
        for (std::size_t k = 1; k < len; ++k) {
            if (pos_ + k >= in_.size() || (static_cast<unsigned char>(in_[pos_ + k]) & 0xC0) != 0x80)
                fail(ParseError::Kind::syntax, pos_ + k, "truncated UTF-8 sequence");
            cp = (cp << 6) | (static_cast<unsigned char>(in_[pos_ + k]) & 0x3F);
        }
        if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
            fail(ParseError::Kind::syntax, pos_, "invalid UTF-8 code point");
        out.append(in_.substr(pos_, len));
        pos_ += len;
    }

    std::string string_literal() {
        ++pos_;  // opening quote
        std::string out;
        while (true) {
            if (at_end()) fail(ParseError::Kind::syntax, pos_, "unterminated string");
            const char c = peek();
            if (c == '"') {
                ++pos_;
                return out;
            }
            if (c == '\\') {
                ++pos_;
                escape(out);
                continue;
            }
            const auto byte = static_cast<unsigned char>(c);
            if (byte < 0x20) fail(ParseError::Kind::syntax, pos_, "unescaped control character in string");
            if (byte < 0x80) {
                out += c;
                ++pos_;
            } else {
                utf8_sequence(out);
            }
        }
    }

    void escape(std::string& out) {
        if (at_end()) fail(ParseError::Kind::syntax, pos_, "unterminated escape");
        const char c = peek();
        switch (c) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case '/': out += '/'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 't': out += '\t'; break;
        case 'u': {
            ++pos_;
            unsigned cp = hex4();
            if (cp >= 0xD800 && cp <= 0xDBFF && pos_ + 1 < in_.size() && in_[pos_] == '\\' &&
                in_[pos_ + 1] == 'u') {
                const std::size_t save = pos_;
                pos_ += 2;
                const unsigned low = hex4();
                if (low >= 0xDC00 && low <= 0xDFFF) {
                    cp = 0x10000 + ((cp - 0xD800) << 10) + (low - 0xDC00);
                } else {
                    pos_ = save;  // lone high surrogate; the next escape stands alone
                }
            }
            append_utf8(out, cp);
            return;
        }
        default:
            // Unknown escape: the escaped character is read as itself.
            if (cfg_.allow_invalid_escapes) return;
            fail(ParseError::Kind::syntax, pos_, std::string("invalid escape '\\") + c + "'");
        }
        ++pos_;
    }

    JsonNumber number() {
        const std::size_t start = pos_;
        bool negative = false;
        if (peek() == '-') {
            negative = true;
            ++pos_;
        }
        if (cfg_.allow_hex_numbers && pos_ + 1 < in_.size() && in_[pos_] == '0' &&
            (in_[pos_ + 1] == 'x' || in_[pos_ + 1] == 'X')) {
            return hex_number(start, negative);
        }

        if (at_end()) fail(ParseError::Kind::syntax, pos_, "truncated number");
        if (peek() == '0') {
            ++pos_;
        } else if (peek() >= '1' && peek() <= '9') {
            while (!at_end() && is_digit(peek())) ++pos_;
        } else {
            fail(ParseError::Kind::syntax, pos_, "expected digit");
        }
        bool integral = true;
        if (!at_end() && peek() == '.') {
            integral = false;
            ++pos_;
            if (at_end() || !is_digit(peek())) fail(ParseError::Kind::syntax, pos_, "expected fraction digit");
            while (!at_end() && is_digit(peek())) ++pos_;
        }
        if (!at_end() && (peek() == 'e' || peek() == 'E')) {
            integral = false;
            ++pos_;
            if (!at_end() && (peek() == '+' || peek() == '-')) ++pos_;
            if (at_end() || !is_digit(peek())) fail(ParseError::Kind::syntax, pos_, "expected exponent digit");
            while (!at_end() && is_digit(peek())) ++pos_;
        }
        const std::string_view lexeme = in_.substr(start, pos_ - start);

        if (cfg_.number_policy == NumberPolicy::raw) return JsonNumber(RawNumber{std::string(lexeme)});
        if (lexeme == "-0") return JsonNumber(-0.0);

        if (integral) {
            std::int64_t small = 0;
            auto res = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), small);
            if (res.ec == std::errc() && res.ptr == lexeme.data() + lexeme.size()) return JsonNumber(small);
            return out_of_range_integer(decimal_from_lexeme(lexeme)->unscaled, start);
        }

        if (cfg_.number_policy == NumberPolicy::extended) return JsonNumber(*decimal_from_lexeme(lexeme));

        bool overflow = false;
        double d = to_double(*exact_from_lexeme(lexeme), overflow);
        if (overflow) {
            if (cfg_.overflow_mode == OverflowMode::error)
                fail(ParseError::Kind::number_overflow, start, "number out of 64-bit floating-point range");
            d = d < 0 ? -std::numeric_limits<double>::max() : std::numeric_limits<double>::max();
        }
        return JsonNumber(d);
    }

    JsonNumber hex_number(std::size_t start, bool negative) {
        pos_ += 2;  // "0x"
        const std::size_t digits_at = pos_;
        cpp_int v = 0;
        while (!at_end() && is_hex_digit(peek())) {
            v = v * 16 + hex_value(peek());
            ++pos_;
        }
        if (pos_ == digits_at) fail(ParseError::Kind::syntax, pos_, "expected hex digit");
        if (negative) v = -v;
        if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
            return JsonNumber(static_cast<std::int64_t>(v));
        return out_of_range_integer(std::move(v), start);
    }

    JsonNumber out_of_range_integer(cpp_int v, std::size_t start) {
        if (cfg_.number_policy != NumberPolicy::lossy64) return JsonNumber(BigInteger{std::move(v)});
        if (cfg_.overflow_mode == OverflowMode::error)
            fail(ParseError::Kind::number_overflow, start, "integer out of signed 64-bit range");
        bool overflow = false;
        double d = to_double(normalize(std::move(v), 0), overflow);
        if (overflow) d = d < 0 ? -std::numeric_limits<double>::max() : std::numeric_limits<double>::max();
        return JsonNumber(d);
    }

    std::string_view in_;
    const LenienceConfig& cfg_;
    std::size_t pos_ = 0;
    std::size_t depth_ = 0;
};

JsonValue drop_null_members(const JsonValue& v) {
    if (const auto* arr = v.as_array()) {
        JsonArray out;
        out.reserve(arr->size());
        for (const auto& e : *arr) out.push_back(drop_null_members(e));
        return JsonValue(std::move(out));
    }
    if (const auto* obj = v.as_object()) {
        JsonObject out;
        out.ordering = obj->ordering;
        for (const auto& m : obj->members)
            if (!m.value.is_null()) out.members.push_back(JsonMember{m.key, drop_null_members(m.value)});
        return JsonValue(std::move(out));
    }
    return v;
}

}  // namespace

std::string_view to_string(ParseError::Kind kind) {
    switch (kind) {
    case ParseError::Kind::syntax: return "syntax";
    case ParseError::Kind::number_overflow: return "number-overflow";
    case ParseError::Kind::duplicate_key: return "duplicate-key";
    case ParseError::Kind::depth_exceeded: return "depth-exceeded";
    case ParseError::Kind::trailing_content: return "trailing-content";
    case ParseError::Kind::lonely_value_rejected: return "lonely-value-rejected";
    }
    return "?";
}

std::uint64_t key_hash(std::string_view key, std::uint64_t seed) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : key) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return splitmix64(h ^ splitmix64(seed));
}

ParseResult parse(std::string_view input, const LenienceConfig& config) {
    try {
        return Parser(input, config).run();
    } catch (Failure& f) {
        return std::move(f.error);
    }
}

SerializeResult serialize(const JsonValue& v, const LenienceConfig& config) {
    if (config.lonely_values == LonelyValues::rfc4627 && v.is_scalar())
        return SerializeError{"top-level value must be an object or an array"};
    if (config.drop_null_entries_on_serialize) return canonical_serialize(drop_null_members(v));
    return canonical_serialize(v);
}

}  // namespace jdiv
