#include "jdiv/typeprobe.hpp"
#include "support/helpers.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace jdiv;
using namespace jdiv::testsupport;

namespace {

const ProbeRow& row(const ProbeReport& r, std::string_view lexeme) {
    for (const auto& x : r.rows)
        if (x.lexeme == lexeme) return x;
    throw std::logic_error("no probe row " + std::string(lexeme));
}

const std::string& long_decimal() { return probe_lexemes().back(); }

using Expected = std::vector<std::pair<std::string, RoundTrip>>;  // per probe, in probe order

void expect_rows(const ProbeReport& r, const Expected& want) {
    ASSERT_EQ(r.rows.size(), want.size());
    for (std::size_t k = 0; k < want.size(); ++k) {
        EXPECT_EQ(r.rows[k].representation, want[k].first) << r.backend_id << " " << r.rows[k].lexeme;
        EXPECT_EQ(r.rows[k].round_trip, want[k].second)
            << r.backend_id << " " << r.rows[k].lexeme << " got " << to_string(r.rows[k].round_trip);
    }
}

}  // namespace

TEST(Probe, LexemeSet) {
    const auto& p = probe_lexemes();
    EXPECT_EQ(p.size(), 11u);
    for (const char* need : {"-2147483648", "2147483647", "4.9E-324", "2.2250738585072014E-308",
                             "1.7976931348623157E308", "9223372036854775807", "9223372036854775808", "-0", "1E22",
                             "1e+2"})
        EXPECT_NE(std::find(p.begin(), p.end(), need), p.end()) << need;
    // The long decimal matches the bundled fixture byte for byte.
    const Corpus c = fixture_corpus();
    EXPECT_EQ(fixture(c, "wellformed/huge_exponent.json").decoded, "[" + long_decimal() + "]");
}

TEST(Probe, Examples) {
    const auto strict = probe_number_types(builtin("strict"));
    EXPECT_EQ(row(strict, "9223372036854775808").representation, "BigInt");
    EXPECT_EQ(row(strict, "9223372036854775808").round_trip, RoundTrip::EQ);
    EXPECT_EQ(row(strict, "2147483647").representation, "Int64");
    EXPECT_EQ(row(strict, "2147483647").round_trip, RoundTrip::EQ);

    const auto rounding = probe_number_types(builtin("lossy64-rounding"));
    EXPECT_EQ(row(rounding, long_decimal()).representation, "Float64");
    EXPECT_EQ(row(rounding, long_decimal()).round_trip, RoundTrip::lossy);
}

TEST(Probe, BuiltinTagsFollowNumberPolicy) {
    using R = RoundTrip;
    // Hand-derived from each policy's representation and canonical rendering.
    // 2^63 is exact in binary64, so rounding it is EV rather than lossy.
    const Expected extended{{"Int64", R::EQ},      {"Int64", R::EQ},      {"BigDecimal", R::EQ}, {"BigDecimal", R::EQ},
                            {"BigDecimal", R::EV}, {"Int64", R::EQ},      {"BigInt", R::EQ},     {"Float64", R::EQ},
                            {"BigDecimal", R::EV}, {"BigDecimal", R::EV}, {"BigDecimal", R::EV}};
    const Expected lossy{{"Int64", R::EQ},   {"Int64", R::EQ},   {"Float64", R::lossy}, {"Float64", R::EQ},
                         {"Float64", R::EV}, {"Int64", R::EQ},   {"none", R::error},    {"Float64", R::EQ},
                         {"Float64", R::EV}, {"Float64", R::EV}, {"none", R::error}};
    const Expected rounding{{"Int64", R::EQ},   {"Int64", R::EQ},   {"Float64", R::lossy}, {"Float64", R::EQ},
                            {"Float64", R::EV}, {"Int64", R::EQ},   {"Float64", R::EV},    {"Float64", R::EQ},
                            {"Float64", R::EV}, {"Float64", R::EV}, {"Float64", R::lossy}};
    const Expected raw(11, {"RawLexeme", R::EQ});

    for (const auto& d : builtin_registry()) {
        const auto& cfg = std::get<BuiltinKind>(d.kind).config;
        const auto report = probe_number_types(make_backend(d));
        EXPECT_EQ(report.backend_id, d.id);
        if (cfg.lonely_values == LonelyValues::rfc4627) {
            // Probes are wrapped in arrays, so 4627 behaves like strict.
            expect_rows(report, extended);
        } else if (cfg.number_policy == NumberPolicy::raw) {
            expect_rows(report, raw);
        } else if (cfg.number_policy == NumberPolicy::lossy64) {
            expect_rows(report, cfg.overflow_mode == OverflowMode::error ? lossy : rounding);
        } else {
            expect_rows(report, extended);
        }
    }
}

TEST(Probe, OrderingProbe) {
    EXPECT_EQ(probe_number_types(builtin("strict")).ordering, RoundTrip::EQ);
    EXPECT_EQ(probe_number_types(builtin("shuffled-keys")).ordering, RoundTrip::EV);
    const Backend nl = make_backend(BackendDescriptor{"nlohmann", ExternalKind{"nlohmann"}, ""});
    EXPECT_EQ(probe_number_types(nl).ordering, RoundTrip::EV);
    const Backend rj = make_backend(BackendDescriptor{"rapidjson", ExternalKind{"rapidjson"}, ""});
    EXPECT_EQ(probe_number_types(rj).ordering, RoundTrip::EQ);
}

TEST(Probe, ExternalAdaptersUseNativeTags) {
    const Backend nl = make_backend(BackendDescriptor{"nlohmann", ExternalKind{"nlohmann"}, ""});
    const auto n = probe_number_types(nl);
    // nlohmann stores every non-negative integer as unsigned.
    EXPECT_EQ(row(n, "2147483647").representation, "number_unsigned");
    EXPECT_EQ(row(n, "-2147483648").representation, "number_integer");
    EXPECT_EQ(row(n, "9223372036854775808").representation, "number_unsigned");
    EXPECT_EQ(row(n, "1E22").representation, "number_float");

    const Backend rj = make_backend(BackendDescriptor{"rapidjson", ExternalKind{"rapidjson"}, ""});
    const auto r = probe_number_types(rj);
    EXPECT_EQ(row(r, "-2147483648").representation, "Int64");
    EXPECT_EQ(row(r, "9223372036854775808").representation, "Uint64");
    EXPECT_EQ(row(r, "9223372036854775808").round_trip, RoundTrip::EQ);
    EXPECT_EQ(row(r, "4.9E-324").representation, "Double");
    for (const auto* rep : {&n, &r}) {
        EXPECT_EQ(row(*rep, long_decimal()).representation, "none");
        EXPECT_EQ(row(*rep, long_decimal()).round_trip, RoundTrip::error);
    }
}

TEST(Probe, ExhaustiveRowsForEveryBackend) {
    std::vector<ProbeReport> all;
    for (const auto& b : select_backends("builtin:*,external:*")) {
        all.push_back(probe_number_types(b));
        ASSERT_EQ(all.back().rows.size(), probe_lexemes().size()) << b.descriptor.id;
        for (std::size_t k = 0; k < probe_lexemes().size(); ++k)
            EXPECT_EQ(all.back().rows[k].lexeme, probe_lexemes()[k]);
    }
    const std::string csv = to_csv(all);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "backend,probe,representation,round_trip");
    const auto lines = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
    EXPECT_EQ(lines, 1 + all.size() * (probe_lexemes().size() + 1));
    EXPECT_NE(csv.find("\nstrict,9223372036854775808,BigInt,EQ\n"), std::string::npos);
    EXPECT_NE(csv.find("\nshuffled-keys,object-order,object,EV\n"), std::string::npos);
}

TEST(Probe, Names) {
    EXPECT_EQ(to_string(RoundTrip::EQ), "EQ");
    EXPECT_EQ(to_string(RoundTrip::lossy), "lossy");
    EXPECT_EQ(to_string(RoundTrip::error), "error");
}
