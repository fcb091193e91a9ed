#include "jdiv/wire.hpp"

#include <bit>
#include <cstring>

namespace jdiv::wire {

namespace {

struct Truncated {};

class Writer {
public:
    void byte(char c) { out_ += c; }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out_ += static_cast<char>((v >> (8 * i)) & 0xFF);
    }
    void str(std::string_view s) {
        u64(s.size());
        out_.append(s);
    }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view in) : in_(in) {}
    char byte() {
        if (pos_ >= in_.size()) throw Truncated{};
        return in_[pos_++];
    }
    std::uint64_t u64() {
        if (in_.size() - pos_ < 8) throw Truncated{};
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }
    std::string str() {
        const std::uint64_t n = u64();
        if (in_.size() - pos_ < n) throw Truncated{};
        std::string s(in_.substr(pos_, n));
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == in_.size(); }

private:
    std::string_view in_;
    std::size_t pos_ = 0;
};

void put_value(Writer& w, const JsonValue& v) {
    switch (v.kind()) {
    case ValueKind::null: w.byte('n'); break;
    case ValueKind::boolean: w.byte(*v.as_bool() ? 't' : 'f'); break;
    case ValueKind::string:
        w.byte('s');
        w.str(*v.as_string());
        break;
    case ValueKind::array:
        w.byte('a');
        w.u64(v.as_array()->size());
        for (const auto& e : *v.as_array()) put_value(w, e);
        break;
    case ValueKind::object: {
        const auto& o = *v.as_object();
        w.byte('o');
        w.byte(o.ordering.mode == ObjectOrdering::Mode::hashed ? 'h' : 'i');
        w.u64(o.ordering.seed);
        w.u64(o.members.size());
        for (const auto& m : o.members) {
            w.str(m.key);
            put_value(w, m.value);
        }
        break;
    }
    case ValueKind::number:
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, std::int64_t>) {
                    w.byte('i');
                    w.u64(static_cast<std::uint64_t>(x));
                } else if constexpr (std::is_same_v<T, BigInteger>) {
                    w.byte('b');
                    w.str(to_decimal_string(x.value));
                } else if constexpr (std::is_same_v<T, double>) {
                    w.byte('d');
                    w.u64(std::bit_cast<std::uint64_t>(x));
                } else if constexpr (std::is_same_v<T, BigDecimal>) {
                    w.byte('m');
                    w.str(to_decimal_string(x.unscaled));
                    w.str(to_decimal_string(x.exponent));
                } else {
                    w.byte('r');
                    w.str(x.lexeme);
                }
            },
            v.as_number()->storage());
        break;
    }
}

cpp_int read_integer(Reader& r) {
    const std::string s = r.str();
    if (s.empty()) throw Truncated{};
    return cpp_int(s);
}

JsonValue get_value(Reader& r, int depth = 0) {
    if (depth > 100000) throw Truncated{};
    switch (r.byte()) {
    case 'n': return JsonValue(JsonNull{});
    case 't': return JsonValue(true);
    case 'f': return JsonValue(false);
    case 's': return JsonValue(r.str());
    case 'a': {
        const std::uint64_t n = r.u64();
        JsonArray items;
        for (std::uint64_t k = 0; k < n; ++k) items.push_back(get_value(r, depth + 1));
        return JsonValue(std::move(items));
    }
    case 'o': {
        JsonObject o;
        o.ordering.mode = r.byte() == 'h' ? ObjectOrdering::Mode::hashed : ObjectOrdering::Mode::insertion;
        o.ordering.seed = r.u64();
        const std::uint64_t n = r.u64();
        for (std::uint64_t k = 0; k < n; ++k) {
            std::string key = r.str();
            o.members.push_back(JsonMember{std::move(key), get_value(r, depth + 1)});
        }
        return JsonValue(std::move(o));
    }
    case 'i': return JsonValue(JsonNumber(static_cast<std::int64_t>(r.u64())));
    case 'b': return JsonValue(JsonNumber(BigInteger{read_integer(r)}));
    case 'd': return JsonValue(JsonNumber(std::bit_cast<double>(r.u64())));
    case 'm': {
        cpp_int unscaled = read_integer(r);
        cpp_int exponent = read_integer(r);
        return JsonValue(JsonNumber(BigDecimal{std::move(unscaled), std::move(exponent)}));
    }
    case 'r': return JsonValue(JsonNumber(RawNumber{r.str()}));
    default: throw Truncated{};
    }
}

template <class F>
auto guarded(std::string_view bytes, F&& f) -> std::optional<decltype(f(std::declval<Reader&>()))> {
    try {
        Reader r(bytes);
        auto value = f(r);
        if (!r.done()) return std::nullopt;
        return value;
    } catch (const Truncated&) {
        return std::nullopt;
    } catch (const std::exception&) {
        return std::nullopt;  // malformed integer text
    }
}

}  // namespace

std::string encode(const JsonValue& v) {
    Writer w;
    put_value(w, v);
    return w.take();
}

std::optional<JsonValue> decode_value(std::string_view bytes) {
    return guarded(bytes, [](Reader& r) { return get_value(r); });
}

std::string encode(const BackendParseResult& result) {
    Writer w;
    w.byte('P');
    if (const auto* doc = std::get_if<ParsedDocument>(&result)) {
        w.byte('D');
        put_value(w, doc->value);
        w.u64(doc->number_tags.size());
        for (const auto& t : doc->number_tags) w.str(t);
    } else if (std::holds_alternative<NoValue>(result)) {
        w.byte('N');
    } else {
        const auto& e = std::get<ParseError>(result);
        w.byte('E');
        w.byte(static_cast<char>(e.kind));
        w.u64(e.byte_offset);
        w.str(e.message);
    }
    return w.take();
}

std::optional<BackendParseResult> decode_parse(std::string_view bytes) {
    return guarded(bytes, [](Reader& r) -> BackendParseResult {
        if (r.byte() != 'P') throw Truncated{};
        switch (r.byte()) {
        case 'D': {
            ParsedDocument doc{get_value(r), {}};
            const std::uint64_t n = r.u64();
            for (std::uint64_t k = 0; k < n; ++k) doc.number_tags.push_back(r.str());
            return doc;
        }
        case 'N': return NoValue{};
        case 'E': {
            const auto kind = static_cast<unsigned char>(r.byte());
            if (kind > static_cast<unsigned char>(ParseError::Kind::lonely_value_rejected)) throw Truncated{};
            ParseError e{static_cast<ParseError::Kind>(kind), 0, {}};
            e.byte_offset = r.u64();
            e.message = r.str();
            return e;
        }
        default: throw Truncated{};
        }
    });
}

std::string encode(const BackendSerializeResult& result) {
    Writer w;
    w.byte('S');
    if (const auto* text = std::get_if<std::string>(&result)) {
        w.byte('T');
        w.str(*text);
    } else {
        w.byte('E');
        w.str(std::get<SerializeError>(result).message);
    }
    return w.take();
}

std::optional<BackendSerializeResult> decode_serialize(std::string_view bytes) {
    return guarded(bytes, [](Reader& r) -> BackendSerializeResult {
        if (r.byte() != 'S') throw Truncated{};
        switch (r.byte()) {
        case 'T': return r.str();
        case 'E': return SerializeError{r.str()};
        default: throw Truncated{};
        }
    });
}

std::string encode_fault(std::string_view what) {
    Writer w;
    w.byte('F');
    w.str(what);
    return w.take();
}

std::optional<std::string> decode_fault(std::string_view bytes) {
    return guarded(bytes, [](Reader& r) {
        if (r.byte() != 'F') throw Truncated{};
        return r.str();
    });
}

}  // namespace jdiv::wire
