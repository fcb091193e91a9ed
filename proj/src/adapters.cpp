#include "adapters.hpp"

#include "jdiv/serialize.hpp"

#include <json.hpp>
#include <rapidjson/document.h>
#include <rapidjson/error/en.h>
#include <rapidjson/stringbuffer.h>
#include <rapidjson/writer.h>

#include <charconv>
#include <limits>

namespace jdiv {

namespace {

constexpr auto kInt64Max = std::numeric_limits<std::int64_t>::max();

double decimal_to_double(const JsonNumber& n) {
    const std::string text = canonical_serialize(JsonValue(n), SerializeStyle{'e', {}, {}});
    double d = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), d);
    return d;
}

// nlohmann/json
//
// Native model -> JsonValue:
//   number_integer             -> Int64
//   number_unsigned <= 2^63-1  -> Int64, above -> BigInt
//   number_float               -> Float64
//   object (std::map)          -> Object, keys in lexicographic order;
//                                 a repeated key keeps its last value
// Back: BigInt beyond uint64 and BigDecimal/RawLexeme go through double.
class NlohmannBackend final : public ParserBackend {
public:
    using json = nlohmann::json;

    BackendParseResult parse(std::string_view text) const override {
        json doc;
        try {
            doc = json::parse(text.begin(), text.end());
        } catch (const json::parse_error& e) {
            const auto offset = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
            return ParseError{ParseError::Kind::syntax, offset, e.what()};
        } catch (const json::out_of_range& e) {
            return ParseError{ParseError::Kind::number_overflow, 0, e.what()};
        }
        ParsedDocument out;
        out.value = to_value(doc, out.number_tags);
        return out;
    }

    BackendSerializeResult serialize(const JsonValue& value) const override {
        try {
            return from_value(value).dump();
        } catch (const json::type_error& e) {
            return SerializeError{e.what()};
        }
    }

private:
    static JsonValue to_value(const json& j, std::vector<std::string>& tags) {
        switch (j.type()) {
        case json::value_t::null: return JsonValue(JsonNull{});
        case json::value_t::boolean: return JsonValue(j.get<bool>());
        case json::value_t::string: return JsonValue(j.get<std::string>());
        case json::value_t::number_integer:
            tags.emplace_back("number_integer");
            return JsonValue(JsonNumber(j.get<std::int64_t>()));
        case json::value_t::number_unsigned: {
            tags.emplace_back("number_unsigned");
            const auto u = j.get<std::uint64_t>();
            if (u <= static_cast<std::uint64_t>(kInt64Max))
                return JsonValue(JsonNumber(static_cast<std::int64_t>(u)));
            return JsonValue(JsonNumber(BigInteger{cpp_int(u)}));
        }
        case json::value_t::number_float:
            tags.emplace_back("number_float");
            return JsonValue(JsonNumber(j.get<double>()));
        case json::value_t::array: {
            JsonArray items;
            for (const auto& e : j) items.push_back(to_value(e, tags));
            return JsonValue(std::move(items));
        }
        case json::value_t::object: {
            JsonObject o;
            for (const auto& [k, v] : j.items()) o.members.push_back(JsonMember{k, to_value(v, tags)});
            return JsonValue(std::move(o));
        }
        default: throw std::runtime_error("unsupported nlohmann value type");
        }
    }

    static json from_value(const JsonValue& v) {
        switch (v.kind()) {
        case ValueKind::null: return nullptr;
        case ValueKind::boolean: return *v.as_bool();
        case ValueKind::string: return *v.as_string();
        case ValueKind::number: {
            const JsonNumber& n = *v.as_number();
            if (const auto* i = n.get_if<std::int64_t>()) return *i;
            if (const auto* d = n.get_if<double>()) return *d;
            if (const auto* b = n.get_if<BigInteger>()) {
                if (b->value >= 0 && b->value <= std::numeric_limits<std::uint64_t>::max())
                    return static_cast<std::uint64_t>(b->value);
            }
            return decimal_to_double(n);
        }
        case ValueKind::array: {
            json arr = json::array();
            for (const auto& e : *v.as_array()) arr.push_back(from_value(e));
            return arr;
        }
        case ValueKind::object: {
            json obj = json::object();
            for (const auto& m : v.as_object()->members) obj[m.key] = from_value(m.value);
            return obj;
        }
        }
        return nullptr;
    }
};

// RapidJSON, full-precision parsing with encoding validation.
//
// Native model -> JsonValue:
//   Int64                 -> Int64
//   Uint64 above 2^63-1   -> BigInt
//   Double                -> Float64
//   object                -> Object in document order, repeated keys kept
// Back: BigDecimal and RawLexeme are written as raw number tokens, so they
// survive; BigInt beyond uint64 goes through double.
class RapidjsonBackend final : public ParserBackend {
public:
    BackendParseResult parse(std::string_view text) const override {
        rapidjson::Document doc;
        doc.Parse<rapidjson::kParseFullPrecisionFlag | rapidjson::kParseValidateEncodingFlag>(text.data(),
                                                                                               text.size());
        if (doc.HasParseError()) {
            const auto code = doc.GetParseError();
            const auto kind =
                code == rapidjson::kParseErrorNumberTooBig ? ParseError::Kind::number_overflow
                : code == rapidjson::kParseErrorDocumentRootNotSingular ? ParseError::Kind::trailing_content
                                                                          : ParseError::Kind::syntax;
            return ParseError{kind, std::min<std::size_t>(doc.GetErrorOffset(), text.size()),
                              rapidjson::GetParseError_En(code)};
        }
        ParsedDocument out;
        out.value = to_value(doc, out.number_tags);
        return out;
    }

    BackendSerializeResult serialize(const JsonValue& value) const override {
        rapidjson::StringBuffer buffer;
        rapidjson::Writer<rapidjson::StringBuffer> writer(buffer);
        if (!write(writer, value) || !writer.IsComplete()) return SerializeError{"writer rejected value"};
        return std::string(buffer.GetString(), buffer.GetSize());
    }

private:
    static JsonValue to_value(const rapidjson::Value& v, std::vector<std::string>& tags) {
        if (v.IsNull()) return JsonValue(JsonNull{});
        if (v.IsBool()) return JsonValue(v.GetBool());
        if (v.IsString()) return JsonValue(std::string(v.GetString(), v.GetStringLength()));
        if (v.IsInt64()) {
            tags.emplace_back("Int64");
            return JsonValue(JsonNumber(static_cast<std::int64_t>(v.GetInt64())));
        }
        if (v.IsUint64()) {
            tags.emplace_back("Uint64");
            return JsonValue(JsonNumber(BigInteger{cpp_int(v.GetUint64())}));
        }
        if (v.IsDouble()) {
            tags.emplace_back("Double");
            return JsonValue(JsonNumber(v.GetDouble()));
        }
        if (v.IsArray()) {
            JsonArray items;
            for (const auto& e : v.GetArray()) items.push_back(to_value(e, tags));
            return JsonValue(std::move(items));
        }
        JsonObject o;
        for (const auto& m : v.GetObject())
            o.members.push_back(JsonMember{std::string(m.name.GetString(), m.name.GetStringLength()),
                                           to_value(m.value, tags)});
        return JsonValue(std::move(o));
    }

    template <class Writer>
    static bool write(Writer& w, const JsonValue& v) {
        using rapidjson::SizeType;
        switch (v.kind()) {
        case ValueKind::null: return w.Null();
        case ValueKind::boolean: return w.Bool(*v.as_bool());
        case ValueKind::string: return w.String(v.as_string()->data(), static_cast<SizeType>(v.as_string()->size()));
        case ValueKind::number: {
            const JsonNumber& n = *v.as_number();
            if (const auto* i = n.get_if<std::int64_t>()) return w.Int64(*i);
            if (const auto* d = n.get_if<double>()) return w.Double(*d);
            if (const auto* b = n.get_if<BigInteger>()) {
                if (b->value >= 0 && b->value <= std::numeric_limits<std::uint64_t>::max())
                    return w.Uint64(static_cast<std::uint64_t>(b->value));
                return w.Double(decimal_to_double(n));
            }
            const std::string lexeme = canonical_serialize(v);
            return w.RawNumber(lexeme.data(), static_cast<SizeType>(lexeme.size()), true);
        }
        case ValueKind::array:
            if (!w.StartArray()) return false;
            for (const auto& e : *v.as_array())
                if (!write(w, e)) return false;
            return w.EndArray();
        case ValueKind::object:
            if (!w.StartObject()) return false;
            for (const auto& m : v.as_object()->members) {
                if (!w.Key(m.key.data(), static_cast<SizeType>(m.key.size()))) return false;
                if (!write(w, m.value)) return false;
            }
            return w.EndObject();
        }
        return false;
    }
};

std::string nlohmann_version() {
    return std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
           std::to_string(NLOHMANN_JSON_VERSION_PATCH);
}

}  // namespace

std::vector<AdapterInfo> standard_adapters() {
    std::vector<AdapterInfo> out;
    out.push_back(AdapterInfo{"nlohmann", nlohmann_version(),
                              [] { return std::make_shared<NlohmannBackend>(); }, Isolation::subprocess});
    out.push_back(AdapterInfo{"rapidjson", RAPIDJSON_VERSION_STRING,
                              [] { return std::make_shared<RapidjsonBackend>(); }, Isolation::subprocess});
    return out;
}

}  // namespace jdiv
