#include "jdiv/config_io.hpp"

#include "jdiv/json_access.hpp"
#include "jdiv/serialize.hpp"

#include <array>
#include <utility>

namespace jdiv {

namespace {

template <class E, std::size_t N>
using Names = std::array<std::pair<E, std::string_view>, N>;

constexpr Names<LonelyValues, 2> kLonely{{{LonelyValues::rfc8259, "rfc8259"}, {LonelyValues::rfc4627, "rfc4627"}}};
constexpr Names<DuplicateKeys, 3> kDuplicates{{{DuplicateKeys::keep_last, "keep-last"},
                                               {DuplicateKeys::keep_first, "keep-first"},
                                               {DuplicateKeys::reject, "reject"}}};
constexpr Names<NumberPolicy, 3> kNumbers{
    {{NumberPolicy::lossy64, "lossy64"}, {NumberPolicy::extended, "extended"}, {NumberPolicy::raw, "raw"}}};
constexpr Names<OverflowMode, 2> kOverflow{
    {{OverflowMode::error, "error"}, {OverflowMode::round_silently, "round-silently"}}};
constexpr Names<DepthOverflow, 2> kDepth{
    {{DepthOverflow::checked_error, "checked-error"}, {DepthOverflow::crash, "crash"}}};
constexpr Names<ObjectOrdering::Mode, 2> kOrder{
    {{ObjectOrdering::Mode::insertion, "insertion"}, {ObjectOrdering::Mode::hashed, "shuffled"}}};

template <class E, std::size_t N>
std::string name_of(const Names<E, N>& names, E e) {
    for (const auto& [value, name] : names)
        if (value == e) return std::string(name);
    return "?";
}

template <class E, std::size_t N>
E value_of(const Names<E, N>& names, const JsonValue& doc, std::string_view key) {
    const std::string text = require_string(doc, key);
    for (const auto& [value, name] : names)
        if (name == text) return value;
    throw FormatError("field \"" + std::string(key) + "\" has unknown value \"" + text + "\"");
}

}  // namespace

JsonValue config_to_value(const LenienceConfig& cfg) {
    std::vector<JsonMember> m;
    m.push_back({"allow_trailing_commas", cfg.allow_trailing_commas});
    m.push_back({"allow_unquoted_keys", cfg.allow_unquoted_keys});
    m.push_back({"allow_hex_numbers", cfg.allow_hex_numbers});
    m.push_back({"allow_comments", cfg.allow_comments});
    m.push_back({"allow_invalid_escapes", cfg.allow_invalid_escapes});
    m.push_back({"lonely_values", name_of(kLonely, cfg.lonely_values)});
    m.push_back({"duplicate_keys", name_of(kDuplicates, cfg.duplicate_keys)});
    m.push_back({"number_policy", name_of(kNumbers, cfg.number_policy)});
    m.push_back({"overflow_mode", name_of(kOverflow, cfg.overflow_mode)});
    m.push_back({"object_order", name_of(kOrder, cfg.object_order.mode)});
    // Seeds are stored as their two's-complement signed value.
    m.push_back({"shuffle_seed", JsonValue::integer(static_cast<std::int64_t>(cfg.object_order.seed))});
    m.push_back({"drop_null_entries_on_serialize", cfg.drop_null_entries_on_serialize});
    m.push_back({"depth_limit", JsonValue::integer(static_cast<std::int64_t>(cfg.depth_limit))});
    m.push_back({"depth_overflow", name_of(kDepth, cfg.depth_overflow)});
    return JsonValue(make_object(std::move(m)));
}

LenienceConfig config_from_value(const JsonValue& doc) {
    reject_unknown_keys(doc,
                        {"allow_trailing_commas", "allow_unquoted_keys", "allow_hex_numbers", "allow_comments",
                         "allow_invalid_escapes", "lonely_values", "duplicate_keys", "number_policy",
                         "overflow_mode", "object_order", "shuffle_seed", "drop_null_entries_on_serialize",
                         "depth_limit", "depth_overflow"},
                        "config");
    LenienceConfig cfg;
    cfg.allow_trailing_commas = require_bool(doc, "allow_trailing_commas");
    cfg.allow_unquoted_keys = require_bool(doc, "allow_unquoted_keys");
    cfg.allow_hex_numbers = require_bool(doc, "allow_hex_numbers");
    cfg.allow_comments = require_bool(doc, "allow_comments");
    cfg.allow_invalid_escapes = require_bool(doc, "allow_invalid_escapes");
    cfg.lonely_values = value_of(kLonely, doc, "lonely_values");
    cfg.duplicate_keys = value_of(kDuplicates, doc, "duplicate_keys");
    cfg.number_policy = value_of(kNumbers, doc, "number_policy");
    cfg.overflow_mode = value_of(kOverflow, doc, "overflow_mode");
    cfg.object_order.mode = value_of(kOrder, doc, "object_order");
    cfg.object_order.seed = static_cast<std::uint64_t>(require_int(doc, "shuffle_seed"));
    cfg.drop_null_entries_on_serialize = require_bool(doc, "drop_null_entries_on_serialize");
    const std::int64_t depth = require_int(doc, "depth_limit");
    if (depth <= 0) throw FormatError("depth_limit must be positive");
    cfg.depth_limit = static_cast<std::size_t>(depth);
    cfg.depth_overflow = value_of(kDepth, doc, "depth_overflow");
    return cfg;
}

std::string config_to_json(const LenienceConfig& cfg) { return canonical_serialize(config_to_value(cfg)); }

LenienceConfig config_from_json(std::string_view text) {
    return config_from_value(parse_document(text, "config"));
}

}  // namespace jdiv
