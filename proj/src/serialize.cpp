#include "jdiv/serialize.hpp"

#include <algorithm>
#include <cstdio>

namespace jdiv {

namespace {

void append_u_escape(std::string& out, unsigned cp) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "\\u%04x", cp);
    out += buf;
}

// Decodes one UTF-8 sequence starting at text[i], accepting encoded
// surrogates. Returns the sequence length, or 0 for a malformed byte.
std::size_t decode_utf8(std::string_view text, std::size_t i, unsigned& cp) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    if (b0 < 0x80) {
        cp = b0;
        return 1;
    } else if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        return 0;
    }
    if (i + len > text.size()) return 0;
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(text[i + k]);
        if ((b & 0xC0) != 0x80) return 0;
        cp = (cp << 6) | (b & 0x3F);
    }
    return len;
}

void write_value(std::string& out, const JsonValue& v, const SerializeStyle& style);

void write_number(std::string& out, const JsonNumber& n, const SerializeStyle& style) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::int64_t>) {
                out += std::to_string(x);
            } else if constexpr (std::is_same_v<T, BigInteger>) {
                out += to_decimal_string(x.value);
            } else if constexpr (std::is_same_v<T, double>) {
                out += render_float64(x, style.exponent_marker);
            } else if constexpr (std::is_same_v<T, BigDecimal>) {
                out += render_big_decimal(x, style.exponent_marker);
            } else {
                out += x.lexeme;
            }
        },
        n.storage());
}

void write_object(std::string& out, const JsonObject& o, const SerializeStyle& style) {
    std::vector<const JsonMember*> order;
    order.reserve(o.members.size());
    for (const auto& m : o.members) order.push_back(&m);
    if (style.key_order == SerializeStyle::KeyOrder::lexicographic) {
        std::stable_sort(order.begin(), order.end(),
                         [](const JsonMember* a, const JsonMember* b) { return a->key < b->key; });
    }
    out += '{';
    bool first = true;
    for (const JsonMember* m : order) {
        if (!first) out += ',';
        first = false;
        out += quote_string(m->key, style.escape);
        out += ':';
        write_value(out, m->value, style);
    }
    out += '}';
}

void write_value(std::string& out, const JsonValue& v, const SerializeStyle& style) {
    switch (v.kind()) {
    case ValueKind::null: out += "null"; break;
    case ValueKind::boolean: out += *v.as_bool() ? "true" : "false"; break;
    case ValueKind::number: write_number(out, *v.as_number(), style); break;
    case ValueKind::string: out += quote_string(*v.as_string(), style.escape); break;
    case ValueKind::array: {
        out += '[';
        bool first = true;
        for (const auto& e : *v.as_array()) {
            if (!first) out += ',';
            first = false;
            write_value(out, e, style);
        }
        out += ']';
        break;
    }
    case ValueKind::object: write_object(out, *v.as_object(), style); break;
    }
}

}  // namespace

std::string quote_string(std::string_view text, SerializeStyle::Escape escape) {
    std::string out;
    out.reserve(text.size() + 2);
    out += '"';
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        switch (c) {
        case '"': out += "\\\""; ++i; continue;
        case '\\': out += "\\\\"; ++i; continue;
        case '\b': out += "\\b"; ++i; continue;
        case '\f': out += "\\f"; ++i; continue;
        case '\n': out += "\\n"; ++i; continue;
        case '\r': out += "\\r"; ++i; continue;
        case '\t': out += "\\t"; ++i; continue;
        default: break;
        }
        const auto byte = static_cast<unsigned char>(c);
        if (byte < 0x20) {
            append_u_escape(out, byte);
            ++i;
            continue;
        }
        if (byte < 0x80) {
            out += c;
            ++i;
            continue;
        }
        unsigned cp = 0;
        const std::size_t len = decode_utf8(text, i, cp);
        if (len == 0) {
            out += c;
            ++i;
            continue;
        }
        const bool surrogate = cp >= 0xD800 && cp <= 0xDFFF;
        if (surrogate || escape == SerializeStyle::Escape::ascii_only) {
            if (cp >= 0x10000) {
                const unsigned v = cp - 0x10000;
                append_u_escape(out, 0xD800 + (v >> 10));
                append_u_escape(out, 0xDC00 + (v & 0x3FF));
            } else {
                append_u_escape(out, cp);
            }
        } else {
            out.append(text.substr(i, len));
        }
        i += len;
    }
    out += '"';
    return out;
}

std::string canonical_serialize(const JsonValue& v, const SerializeStyle& style) {
    std::string out;
    write_value(out, v, style);
    return out;
}

}  // namespace jdiv
