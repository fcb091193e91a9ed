#include "jdiv/wire.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace jdiv;
using namespace jdiv::testgen;

TEST(WireProperty, ValuesRoundTripExactly) {
    Rng rng(17);
    ValueOptions opt;
    opt.strict_numbers = false;
    opt.hashed_objects = true;
    for (int trial = 0; trial < 5000; ++trial) {
        const JsonValue v = random_value(rng, opt);
        const std::string bytes = wire::encode(v);
        const auto back = wire::decode_value(bytes);
        ASSERT_TRUE(back.has_value());
        // Re-encoding is byte-identical, so variants, duplicate pairs, order
        // tags and the sign of zero all survived.
        ASSERT_EQ(wire::encode(*back), bytes);
        ASSERT_TRUE(equivalent(*back, v));
    }
}

TEST(WireProperty, TruncatedFramesRejected) {
    Rng rng(18);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::string bytes = wire::encode(random_value(rng));
        const std::size_t cut = pick(rng, bytes.size());
        EXPECT_FALSE(wire::decode_value(std::string_view(bytes.data(), cut)).has_value());
        EXPECT_FALSE(wire::decode_value(bytes + "x").has_value());
    }
}

TEST(Wire, ParseResultsRoundTrip) {
    ParsedDocument doc{JsonValue(JsonArray{JsonValue(1), JsonValue(-0.0)}), {"Int64", "Double"}};
    auto back = wire::decode_parse(wire::encode(BackendParseResult(doc)));
    ASSERT_TRUE(back && std::holds_alternative<ParsedDocument>(*back));
    EXPECT_EQ(std::get<ParsedDocument>(*back).number_tags, doc.number_tags);
    EXPECT_TRUE(std::signbit(*std::get<ParsedDocument>(*back).value.as_array()->at(1).as_number()->get_if<double>()));

    back = wire::decode_parse(wire::encode(BackendParseResult(NoValue{})));
    ASSERT_TRUE(back && std::holds_alternative<NoValue>(*back));

    ParseError e{ParseError::Kind::depth_exceeded, 7, "deep"};
    back = wire::decode_parse(wire::encode(BackendParseResult(e)));
    ASSERT_TRUE(back && std::holds_alternative<ParseError>(*back));
    EXPECT_EQ(std::get<ParseError>(*back).kind, e.kind);
    EXPECT_EQ(std::get<ParseError>(*back).byte_offset, 7u);
    EXPECT_EQ(std::get<ParseError>(*back).message, "deep");
}

TEST(Wire, SerializeResultsAndFaults) {
    auto s = wire::decode_serialize(wire::encode(BackendSerializeResult(std::string("[1]"))));
    ASSERT_TRUE(s && std::holds_alternative<std::string>(*s));
    EXPECT_EQ(std::get<std::string>(*s), "[1]");
    s = wire::decode_serialize(wire::encode(BackendSerializeResult(SerializeError{"no"})));
    ASSERT_TRUE(s && std::holds_alternative<SerializeError>(*s));

    EXPECT_EQ(wire::decode_fault(wire::encode_fault("boom")), "boom");
    EXPECT_FALSE(wire::decode_fault(wire::encode(BackendSerializeResult(std::string("x")))).has_value());
    EXPECT_FALSE(wire::decode_parse("").has_value());
    EXPECT_FALSE(wire::decode_serialize(wire::encode_fault("boom")).has_value());
}
