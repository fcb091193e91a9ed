#include "jdiv/json_access.hpp"

#include "jdiv/parser.hpp"

#include <algorithm>
#include <charconv>

namespace jdiv {

JsonValue parse_document(std::string_view text, std::string_view what) {
    LenienceConfig cfg = LenienceConfig::strict();
    cfg.duplicate_keys = DuplicateKeys::reject;
    auto result = parse(text, cfg);
    if (auto* err = std::get_if<ParseError>(&result)) {
        throw FormatError(std::string(what) + ": " + std::string(to_string(err->kind)) + " at byte " +
                          std::to_string(err->byte_offset) + ": " + err->message);
    }
    return std::get<JsonValue>(std::move(result));
}

const JsonObject& require_object(const JsonValue& v, std::string_view what) {
    const auto* o = v.as_object();
    if (!o) throw FormatError(std::string(what) + ": expected an object");
    return *o;
}

const JsonValue& require_field(const JsonValue& obj, std::string_view key) {
    const JsonValue* v = obj.find(key);
    if (!v) throw FormatError("missing field \"" + std::string(key) + "\"");
    return *v;
}

std::string require_string(const JsonValue& obj, std::string_view key) {
    const auto* s = require_field(obj, key).as_string();
    if (!s) throw FormatError("field \"" + std::string(key) + "\" must be a string");
    return *s;
}

bool require_bool(const JsonValue& obj, std::string_view key) {
    const auto* b = require_field(obj, key).as_bool();
    if (!b) throw FormatError("field \"" + std::string(key) + "\" must be a boolean");
    return *b;
}

std::int64_t require_int(const JsonValue& obj, std::string_view key) {
    const auto* n = require_field(obj, key).as_number();
    const auto* i = n ? n->get_if<std::int64_t>() : nullptr;
    if (!i) throw FormatError("field \"" + std::string(key) + "\" must be a 64-bit integer");
    return *i;
}

double require_real(const JsonValue& obj, std::string_view key) {
    const auto* n = require_field(obj, key).as_number();
    if (!n) throw FormatError("field \"" + std::string(key) + "\" must be a number");
    if (const auto* i = n->get_if<std::int64_t>()) return static_cast<double>(*i);
    if (const auto* d = n->get_if<double>()) return *d;
    if (const auto* b = n->get_if<BigDecimal>()) {
        const std::string text = render_big_decimal(*b, 'e');
        double d = 0.0;
        auto res = std::from_chars(text.data(), text.data() + text.size(), d);
        if (res.ec == std::errc()) return d;
    }
    throw FormatError("field \"" + std::string(key) + "\" is out of range");
}

void reject_unknown_keys(const JsonValue& obj, std::initializer_list<std::string_view> allowed,
                         std::string_view what) {
    for (const auto& m : require_object(obj, what).members) {
        if (std::find(allowed.begin(), allowed.end(), m.key) == allowed.end())
            throw FormatError(std::string(what) + ": unknown key \"" + m.key + "\"");
    }
}

}  // namespace jdiv
