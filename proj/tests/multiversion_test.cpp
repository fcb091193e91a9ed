#include "jdiv/multiversion.hpp"
#include "support/generators.hpp"
#include "support/helpers.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace jdiv;
using namespace jdiv::testsupport;

namespace {

std::vector<Backend> builtins(std::initializer_list<const char*> ids) {
    std::vector<Backend> out;
    for (const char* id : ids) out.push_back(builtin(id));
    return out;
}

JsonValue strict_value(std::string_view text) { return std::get<JsonValue>(parse(text, LenienceConfig::strict())); }

std::vector<MvStrategy> every_strategy(const std::vector<Backend>& bs) {
    std::vector<std::string> order;
    for (const auto& b : bs) order.push_back(b.descriptor.id);
    return {StrictFirst{bs.front().descriptor.id}, Majority{}, FirstAccepting{order}, UnanimousReject{}};
}

// Synthetic voter: returns one of a few values, rejects, or crashes.
Backend voter(std::string id, int choice) {
    return fn_backend(std::move(id), [choice](std::string_view) -> BackendParseResult {
        if (choice == -1) return ParseError{ParseError::Kind::syntax, 0, "no"};
        if (choice == -2) return NoValue{};
        if (choice == -3) throw std::runtime_error("crash");
        return ParsedDocument{JsonValue(JsonArray{JsonValue(choice)}), {}};
    });
}

void check_partition(const MvResult& r, const std::vector<Backend>& bs) {
    std::multiset<std::string> seen;
    for (const auto& c : r.clusters) {
        EXPECT_TRUE(std::is_sorted(c.backends.begin(), c.backends.end()));
        seen.insert(c.backends.begin(), c.backends.end());
    }
    seen.insert(r.rejecting.begin(), r.rejecting.end());
    seen.insert(r.crashing.begin(), r.crashing.end());
    std::multiset<std::string> want;
    for (const auto& b : bs) want.insert(b.descriptor.id);
    EXPECT_EQ(seen, want);
    for (std::size_t k = 1; k < r.clusters.size(); ++k)
        EXPECT_LT(r.clusters[k - 1].backends.front(), r.clusters[k].backends.front());
    if (r.accepted) {
        bool is_rep = false;
        for (const auto& c : r.clusters) is_rep = is_rep || equivalent(c.representative, *r.accepted);
        EXPECT_TRUE(is_rep);
    }
    const bool mixed = !r.clusters.empty() && (!r.rejecting.empty() || !r.crashing.empty());
    EXPECT_EQ(r.divergent, r.clusters.size() > 1 || mixed);
}

}  // namespace

TEST(MvParse, AllBuiltinsMajorityOnWellFormed) {
    std::vector<Backend> all;
    for (const auto& d : builtin_registry()) all.push_back(make_backend(d));
    const auto r = mv_parse("[1]", all, Majority{});
    ASSERT_TRUE(r.accepted.has_value());
    EXPECT_TRUE(equivalent(*r.accepted, strict_value("[1]")));
    check_partition(r, all);
    // A raw lexeme is a different number variant from Int64, so raw-numbers
    // forms its own cluster and the run counts as divergent.
    ASSERT_EQ(r.clusters.size(), 2u);
    EXPECT_EQ(r.clusters[1].backends, std::vector<std::string>{"raw-numbers"});
    EXPECT_TRUE(r.divergent);

    std::vector<Backend> typed;
    for (const auto& b : all)
        if (b.descriptor.id != "raw-numbers") typed.push_back(b);
    const auto t = mv_parse("[1]", typed, Majority{});
    ASSERT_TRUE(t.accepted.has_value());
    EXPECT_FALSE(t.divergent);
}

TEST(MvParse, TrailingCommaMajorityRejects) {
    const auto bs = builtins({"strict", "strict-4627", "trailing-comma"});
    const auto r = mv_parse("[1,]", bs, Majority{});
    EXPECT_FALSE(r.accepted.has_value());
    EXPECT_TRUE(r.divergent);
    ASSERT_EQ(r.clusters.size(), 1u);
    EXPECT_EQ(r.clusters[0].backends, std::vector<std::string>{"trailing-comma"});
    EXPECT_EQ(r.rejecting, (std::vector<std::string>{"strict", "strict-4627"}));
    check_partition(r, bs);
}

TEST(MvParse, FirstAcceptingTakesTrailingComma) {
    const auto bs = builtins({"strict", "strict-4627", "trailing-comma"});
    const auto r = mv_parse("[1,]", bs, FirstAccepting{{"trailing-comma", "strict"}});
    ASSERT_TRUE(r.accepted.has_value());
    EXPECT_TRUE(equivalent(*r.accepted, strict_value("[1]")));
    EXPECT_TRUE(r.divergent);
    // Order matters: strict first rejects, the next accepting backend decides.
    EXPECT_TRUE(mv_parse("[1,]", bs, FirstAccepting{{"strict", "trailing-comma"}}).accepted.has_value());
    EXPECT_FALSE(mv_parse("[1,]", bs, FirstAccepting{{"strict", "strict-4627"}}).accepted.has_value());
}

TEST(MvParse, StrictFirstAndUnanimousReject) {
    const auto bs = builtins({"strict", "trailing-comma"});
    EXPECT_FALSE(mv_parse("[1,]", bs, StrictFirst{}).accepted.has_value());
    EXPECT_FALSE(mv_parse("[1,]", bs, UnanimousReject{}).accepted.has_value());
    EXPECT_TRUE(mv_parse("[1]", bs, UnanimousReject{}).accepted.has_value());
    EXPECT_TRUE(mv_parse("[1,]", bs, StrictFirst{"trailing-comma"}).accepted.has_value());
}

TEST(MvParse, RepresentativeFromLowestId) {
    // Equivalent values, different pair order: the lowest id's value wins.
    const auto bs = builtins({"strict", "shuffled-keys"});
    const std::string doc = R"({"h":1,"c":2,"f":3,"a":4,"g":5,"b":6,"e":7,"d":8})";
    const auto r = mv_parse(doc, bs, Majority{});
    ASSERT_EQ(r.clusters.size(), 1u);
    EXPECT_EQ(r.clusters[0].backends, (std::vector<std::string>{"shuffled-keys", "strict"}));
    EXPECT_EQ(r.clusters[0].representative.as_object()->ordering.mode, ObjectOrdering::Mode::hashed);
}

TEST(MvParse, CrashersCountTowardsN) {
    const std::vector<Backend> bs{voter("a", 1), voter("b", 1), voter("c", -3), voter("d", -3)};
    const auto r = mv_parse("x", bs, Majority{});
    EXPECT_FALSE(r.accepted.has_value());  // 2 of 4 is a tie
    EXPECT_EQ(r.crashing, (std::vector<std::string>{"c", "d"}));
    const std::vector<Backend> three{voter("a", 1), voter("b", 1), voter("c", -3)};
    EXPECT_TRUE(mv_parse("x", three, Majority{}).accepted.has_value());
}

TEST(MvParse, CrasherDeepIsAbsorbed) {
    const auto bs = builtins({"strict", "crasher-deep"});
    const auto r = mv_parse(std::string(1000, '['), bs, Majority{});
    EXPECT_EQ(r.crashing, std::vector<std::string>{"crasher-deep"});
    EXPECT_EQ(r.rejecting, std::vector<std::string>{"strict"});
    EXPECT_FALSE(r.divergent);  // no value at all: nothing to diverge from
}

TEST(MvParse, UnknownIdsAndEmptySetThrow) {
    const auto bs = builtins({"strict"});
    EXPECT_THROW(mv_parse("[1]", {}, Majority{}), std::invalid_argument);
    EXPECT_THROW(mv_parse("[1]", bs, StrictFirst{"nope"}), std::invalid_argument);
    EXPECT_THROW(mv_parse("[1]", bs, FirstAccepting{{"strict", "nope"}}), std::invalid_argument);
}

TEST(MvParse, DecisionDocument) {
    const auto bs = builtins({"strict", "trailing-comma"});
    const auto doc = canonical_serialize(to_value(mv_parse("[1,]", bs, Majority{})));
    EXPECT_EQ(doc, R"({"strategy":"majority","decision":"rejected","value":null,"divergent":true,)"
                   R"("clusters":[{"representative":[1],"backends":["trailing-comma"]}],)"
                   R"("rejecting":["strict"],"crashing":[]})");
}

TEST(MvParse, UnanimousRejectRefusesIllFormedFixtures) {
    std::vector<Backend> all;
    for (const auto& d : builtin_registry()) all.push_back(make_backend(d));
    const Corpus c = fixture_corpus();
    for (const auto& e : c.entries) {
        if (e.label != Label::ill_formed) continue;
        EXPECT_FALSE(mv_parse(e.decoded, all, UnanimousReject{}).accepted.has_value()) << e.relative_path;
    }
}

// ---- properties --------------------------------------------------------------

TEST(MvProperty, Unanimity) {
    // Variants that accept every strict text with an equivalent value.
    const auto bs = builtins({"strict", "trailing-comma", "unquoted-keys", "hex-numbers", "comments",
                              "invalid-escapes", "null-dropper", "shuffled-keys", "crasher-deep"});
    testgen::Rng rng(51);
    for (int trial = 0; trial < 150; ++trial) {
        const std::string text = testgen::random_json_text(rng, 3);
        const JsonValue want = strict_value(text);
        for (const auto& s : every_strategy(bs)) {
            const auto r = mv_parse(text, bs, s);
            ASSERT_TRUE(r.accepted.has_value()) << strategy_name(s) << " " << text;
            ASSERT_TRUE(equivalent(*r.accepted, want));
            ASSERT_FALSE(r.divergent);
        }
    }
}

TEST(MvProperty, MajorityIsSafe) {
    testgen::Rng rng(52);
    for (int trial = 0; trial < 400; ++trial) {
        std::vector<Backend> bs;
        const std::size_t n = 1 + testgen::pick(rng, 7);
        for (std::size_t k = 0; k < n; ++k)
            bs.push_back(voter("v" + std::to_string(k), static_cast<int>(testgen::pick(rng, 6)) - 3));
        const auto r = mv_parse("x", bs, Majority{});
        check_partition(r, bs);
        if (r.accepted) {
            std::size_t support = 0;
            for (const auto& c : r.clusters)
                if (equivalent(c.representative, *r.accepted)) support = c.backends.size();
            ASSERT_GT(2 * support, n);
        } else {
            for (const auto& c : r.clusters) ASSERT_LE(2 * c.backends.size(), n);
        }
    }
}

TEST(MvProperty, AddingStrictNeverUndoesUnanimousRejection) {
    testgen::Rng rng(53);
    const Corpus c = fixture_corpus();
    std::vector<Backend> pool;
    for (const auto& d : builtin_registry())
        if (d.id != "strict") pool.push_back(make_backend(d));
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Backend> bs;
        for (const auto& b : pool)
            if (testgen::coin(rng, 0.3)) bs.push_back(b);
        if (bs.empty()) bs.push_back(pool[testgen::pick(rng, pool.size())]);
        std::string input;
        if (testgen::coin(rng)) {
            input = c.entries[testgen::pick(rng, c.entries.size())].decoded;
        } else {
            input = testgen::random_json_text(rng, 3);
            if (!input.empty() && testgen::coin(rng)) input[testgen::pick(rng, input.size())] = ',';
        }
        const auto before = mv_parse(input, bs, UnanimousReject{});
        bs.push_back(builtin("strict"));
        const auto after = mv_parse(input, bs, UnanimousReject{});
        if (!before.accepted) ASSERT_FALSE(after.accepted.has_value()) << input;
        check_partition(after, bs);
    }
}
