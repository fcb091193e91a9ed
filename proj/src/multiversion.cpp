#include "jdiv/multiversion.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <stdexcept>

namespace jdiv {

namespace {

void require_known(const std::vector<Backend>& all, const std::string& id) {
    for (const auto& b : all)
        if (b.descriptor.id == id) return;
    throw std::invalid_argument("strategy names unknown backend \"" + id + "\"");
}

}  // namespace

std::string_view strategy_name(const MvStrategy& s) {
    constexpr std::string_view names[] = {"strict-first", "majority", "first-accepting", "unanimous-reject"};
    return names[s.index()];
}

MvResult mv_parse(std::string_view input, const std::vector<Backend>& backends, const MvStrategy& strategy,
                  Budget budget) {
    if (backends.empty()) throw std::invalid_argument("mv_parse: no backends");

    std::vector<const Backend*> sorted;
    for (const auto& b : backends) sorted.push_back(&b);
    std::sort(sorted.begin(), sorted.end(),
              [](const Backend* a, const Backend* b) { return a->descriptor.id < b->descriptor.id; });

    std::vector<std::future<ParseInvocation>> pending;
    for (const Backend* b : sorted)
        pending.push_back(
            std::async(std::launch::async, [b, input, budget] { return invoke_parse(*b, input, budget); }));

    MvResult result;
    result.strategy = std::string(strategy_name(strategy));
    std::map<std::string, std::size_t> cluster_of;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        const std::string& id = sorted[k]->descriptor.id;
        ParseInvocation inv = pending[k].get();
        if (auto* doc = std::get_if<ParsedDocument>(&inv.outcome)) {
            auto it = std::find_if(result.clusters.begin(), result.clusters.end(),
                                   [&](const MvCluster& c) { return equivalent(c.representative, doc->value); });
            if (it == result.clusters.end()) {
                result.clusters.push_back(MvCluster{std::move(doc->value), {}});
                it = std::prev(result.clusters.end());
            }
            it->backends.push_back(id);
            cluster_of[id] = static_cast<std::size_t>(it - result.clusters.begin());
        } else if (std::holds_alternative<NoValue>(inv.outcome) || std::holds_alternative<CheckedError>(inv.outcome)) {
            result.rejecting.push_back(id);
        } else {
            result.crashing.push_back(id);
        }
    }

    const std::size_t n = sorted.size();
    result.divergent = result.clusters.size() > 1 ||
                       (result.clusters.size() == 1 && (!result.rejecting.empty() || !result.crashing.empty()));

    auto accept_from = [&](const std::string& id) {
        if (auto it = cluster_of.find(id); it != cluster_of.end())
            result.accepted = result.clusters[it->second].representative;
    };

    if (const auto* s = std::get_if<StrictFirst>(&strategy)) {
        require_known(backends, s->strict_id);
        accept_from(s->strict_id);
    } else if (std::holds_alternative<Majority>(strategy)) {
        for (const auto& c : result.clusters)
            if (2 * c.backends.size() > n) result.accepted = c.representative;
    } else if (const auto* s = std::get_if<FirstAccepting>(&strategy)) {
        for (const auto& id : s->order) require_known(backends, id);
        for (const auto& id : s->order) {
            accept_from(id);
            if (result.accepted) break;
        }
    } else {
        if (result.clusters.size() == 1 && result.clusters.front().backends.size() == n)
            result.accepted = result.clusters.front().representative;
    }
    return result;
}

JsonValue to_value(const MvResult& r) {
    auto ids = [](const std::vector<std::string>& v) {
        JsonArray out;
        for (const auto& id : v) out.emplace_back(id);
        return JsonValue(std::move(out));
    };
    JsonArray clusters;
    for (const auto& c : r.clusters)
        clusters.push_back(make_object({{"representative", c.representative}, {"backends", ids(c.backends)}}));
    return make_object({{"strategy", r.strategy},
                        {"decision", r.accepted ? "accepted" : "rejected"},
                        {"value", r.accepted ? *r.accepted : JsonValue(JsonNull{})},
                        {"divergent", r.divergent},
                        {"clusters", std::move(clusters)},
                        {"rejecting", ids(r.rejecting)},
                        {"crashing", ids(r.crashing)}});
}

}  // namespace jdiv
