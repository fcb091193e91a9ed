#pragma once

#include "jdiv/backend.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace jdiv {

/// Accept only if the designated backend produces a value.
struct StrictFirst {
    std::string strict_id = "strict";
};

/// Accept when one equivalence cluster holds more than half of all
/// backends, crashers included in the count. A tie rejects.
struct Majority {};

/// The first listed backend that produces a value decides.
struct FirstAccepting {
    std::vector<std::string> order;
};

/// Any rejection, crash or disagreement rejects.
struct UnanimousReject {};

using MvStrategy = std::variant<StrictFirst, Majority, FirstAccepting, UnanimousReject>;

std::string_view strategy_name(const MvStrategy& s);

struct MvCluster {
    JsonValue representative;           // value of the lowest-id member
    std::vector<std::string> backends;  // sorted
};

struct MvResult {
    std::string strategy;
    std::optional<JsonValue> accepted;
    std::vector<MvCluster> clusters;  // ordered by lowest member id
    std::vector<std::string> rejecting;
    std::vector<std::string> crashing;
    bool divergent = false;
};

/// Runs every backend on `input` concurrently and applies `strategy`.
/// Throws std::invalid_argument for an empty backend list or when the
/// strategy names a backend that is not among `backends`.
MvResult mv_parse(std::string_view input, const std::vector<Backend>& backends, const MvStrategy& strategy,
                  Budget budget = kDefaultBudget);

JsonValue to_value(const MvResult& r);

}  // namespace jdiv
