#include "jdiv/typeprobe.hpp"

#include "jdiv/parser.hpp"

namespace jdiv {

namespace {

constexpr std::string_view kRoundTripNames[] = {"EQ", "EV", "lossy", "error"};

// The serialized document must be a one-element array holding a number.
std::optional<ExactDecimal> written_value(std::string_view text) {
    LenienceConfig raw;
    raw.number_policy = NumberPolicy::raw;
    ParseResult parsed = parse(text, raw);
    const auto* v = std::get_if<JsonValue>(&parsed);
    if (!v || !v->as_array() || v->as_array()->size() != 1) return std::nullopt;
    const JsonNumber* n = v->as_array()->front().as_number();
    if (!n) return std::nullopt;
    return exact_value(*n);
}

ProbeRow probe_one(const Backend& backend, const std::string& lexeme, Budget budget) {
    ProbeRow row{lexeme, "none", RoundTrip::error};
    const std::string input = "[" + lexeme + "]";
    ParseInvocation p = invoke_parse(backend, input, budget);
    const auto* doc = std::get_if<ParsedDocument>(&p.outcome);
    if (!doc) return row;
    const JsonValue& v = doc->value;
    const JsonNumber* n = v.as_array() && v.as_array()->size() == 1 ? v.as_array()->front().as_number() : nullptr;
    if (!n) return row;
    row.representation = doc->number_tags.empty() ? std::string(to_string(n->kind())) : doc->number_tags.front();

    SerializeInvocation s = invoke_serialize(backend, v, budget);
    const auto* text = std::get_if<std::string>(&s.outcome);
    if (!text) return row;
    if (*text == input) {
        row.round_trip = RoundTrip::EQ;
        return row;
    }
    const auto written = written_value(*text);
    if (!written) return row;
    row.round_trip = *written == *exact_from_lexeme(lexeme) ? RoundTrip::EV : RoundTrip::lossy;
    return row;
}

// Compared against a strict reading of the probe so that a backend with a
// lossy number model still gets a fair verdict on key order alone.
RoundTrip probe_ordering(const Backend& backend, Budget budget) {
    const std::string_view input = ordering_probe_document();
    ParseInvocation p = invoke_parse(backend, input, budget);
    const auto* doc = std::get_if<ParsedDocument>(&p.outcome);
    if (!doc) return RoundTrip::error;
    SerializeInvocation s = invoke_serialize(backend, doc->value, budget);
    const auto* text = std::get_if<std::string>(&s.outcome);
    if (!text) return RoundTrip::error;
    if (*text == input) return RoundTrip::EQ;
    const ParseResult expected = parse(input, LenienceConfig::strict());
    const ParseResult again = parse(*text, LenienceConfig::strict());
    const auto* v = std::get_if<JsonValue>(&again);
    if (!v) return RoundTrip::error;
    return equivalent(*v, std::get<JsonValue>(expected)) ? RoundTrip::EV : RoundTrip::lossy;
}

}  // namespace

std::string_view to_string(RoundTrip r) { return kRoundTripNames[static_cast<int>(r)]; }

const std::vector<std::string>& probe_lexemes() {
    static const std::vector<std::string> lexemes{
        "-2147483648",
        "2147483647",
        "4.9E-324",
        "2.2250738585072014E-308",
        "1.7976931348623157E308",
        "9223372036854775807",
        "9223372036854775808",
        "-0",
        "1E22",
        "1e+2",
        "0.4e0066999999999999999999999999999999999999999999999999999999999999999999999999999999999999999999999999"
        "9999999999999999999969999999006",
    };
    return lexemes;
}

std::string_view ordering_probe_document() { return R"({"h":1,"c":2,"f":3,"a":4,"g":5,"b":6,"e":7,"d":8})"; }

ProbeReport probe_number_types(const Backend& backend, Budget budget) {
    ProbeReport report;
    report.backend_id = backend.descriptor.id;
    for (const auto& lexeme : probe_lexemes()) report.rows.push_back(probe_one(backend, lexeme, budget));
    report.ordering = probe_ordering(backend, budget);
    return report;
}

std::string to_csv(const std::vector<ProbeReport>& reports) {
    std::string out = "backend,probe,representation,round_trip\n";
    for (const auto& r : reports) {
        for (const auto& row : r.rows)
            out += r.backend_id + "," + row.lexeme + "," + row.representation + "," +
                   std::string(to_string(row.round_trip)) + "\n";
        out += r.backend_id + ",object-order,object," + std::string(to_string(r.ordering)) + "\n";
    }
    return out;
}

}  // namespace jdiv
