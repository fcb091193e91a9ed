#include "jdiv/harness.hpp"

#include "jdiv/config_io.hpp"
#include "jdiv/json_access.hpp"
#include "jdiv/serialize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

namespace jdiv {

namespace {

constexpr std::string_view kFineNames[] = {"EQ", "EV", "NE", "NO", "PA", "PR", "CR", "UO"};
constexpr std::string_view kClassNames[] = {"Conform", "Silent", "Error"};
constexpr std::string_view kStepNames[] = {"parse1", "serialize", "parse2"};

template <class E, std::size_t N>
std::optional<E> lookup(const std::string_view (&names)[N], std::string_view text) {
    for (std::size_t k = 0; k < N; ++k)
        if (names[k] == text) return static_cast<E>(k);
    return std::nullopt;
}

double to_ms(std::chrono::nanoseconds d) {
    // Microsecond resolution keeps the report readable.
    return std::round(static_cast<double>(d.count()) / 1000.0) / 1000.0;
}

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::string_view trim_json_ws(std::string_view s) {
    while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
    return s;
}

BehaviorRecord make_record(const Backend& backend, const CorpusEntry& entry, FineLabel fine, Step step,
                           const StepTimes& times) {
    BehaviorRecord r;
    r.backend_id = backend.descriptor.id;
    r.file_id = entry.id;
    r.label = entry.label;
    r.fine = fine;
    r.outcome = *classify(entry.label, fine);
    r.step = step;
    r.elapsed = times;
    return r;
}

}  // namespace

std::string_view to_string(FineLabel f) { return kFineNames[static_cast<int>(f)]; }
std::string_view to_string(OutcomeClass c) { return kClassNames[static_cast<int>(c)]; }
std::string_view to_string(Step s) { return kStepNames[static_cast<int>(s)]; }

std::optional<FineLabel> fine_label_from_string(std::string_view text) {
    return lookup<FineLabel>(kFineNames, text);
}
std::optional<OutcomeClass> outcome_class_from_string(std::string_view text) {
    return lookup<OutcomeClass>(kClassNames, text);
}
std::optional<Step> step_from_string(std::string_view text) { return lookup<Step>(kStepNames, text); }

std::optional<OutcomeClass> classify(Label label, FineLabel fine) {
    if (label == Label::well_formed) {
        switch (fine) {
        case FineLabel::EQ:
        case FineLabel::EV: return OutcomeClass::Conform;
        case FineLabel::NE: return OutcomeClass::Silent;
        case FineLabel::NO:
        case FineLabel::PA:
        case FineLabel::PR:
        case FineLabel::CR: return OutcomeClass::Error;
        case FineLabel::UO: return std::nullopt;
        }
        return std::nullopt;
    }
    switch (fine) {
    case FineLabel::PA:
    case FineLabel::NO: return OutcomeClass::Conform;
    case FineLabel::UO: return OutcomeClass::Silent;
    case FineLabel::CR: return OutcomeClass::Error;
    default: return std::nullopt;
    }
}

BehaviorRecord assess_wellformed(const Backend& backend, const CorpusEntry& entry, Budget budget) {
    StepTimes times;

    ParseInvocation first = invoke_parse(backend, entry.decoded, budget);
    times.parse1_ms = to_ms(first.elapsed);
    JsonValue value;
    if (auto* doc = std::get_if<ParsedDocument>(&first.outcome)) {
        value = std::move(doc->value);
    } else if (std::holds_alternative<NoValue>(first.outcome)) {
        // A null object is only legitimate when the document is the literal.
        if (trim_json_ws(entry.decoded) != "null")
            return make_record(backend, entry, FineLabel::NO, Step::parse1, times);
        value = JsonValue(JsonNull{});
    } else if (std::holds_alternative<CheckedError>(first.outcome)) {
        return make_record(backend, entry, FineLabel::PA, Step::parse1, times);
    } else {
        return make_record(backend, entry, FineLabel::CR, Step::parse1, times);
    }

    SerializeInvocation out = invoke_serialize(backend, value, budget);
    times.serialize_ms = to_ms(out.elapsed);
    const auto* text = std::get_if<std::string>(&out.outcome);
    if (!text) {
        const FineLabel fine = std::holds_alternative<CheckedError>(out.outcome) ? FineLabel::PR : FineLabel::CR;
        return make_record(backend, entry, fine, Step::serialize, times);
    }
    if (*text == entry.decoded) return make_record(backend, entry, FineLabel::EQ, Step::serialize, times);

    // The re-parse shares the serializer's exception handler: a checked
    // failure here is a print exception.
    ParseInvocation second = invoke_parse(backend, *text, budget);
    times.parse2_ms = to_ms(second.elapsed);
    if (auto* doc = std::get_if<ParsedDocument>(&second.outcome)) {
        const FineLabel fine = equivalent(value, doc->value) ? FineLabel::EV : FineLabel::NE;
        return make_record(backend, entry, fine, Step::parse2, times);
    }
    if (std::holds_alternative<NoValue>(second.outcome)) {
        const bool both_null = value.is_null() && trim_json_ws(*text) == "null";
        return make_record(backend, entry, both_null ? FineLabel::EV : FineLabel::NE, Step::parse2, times);
    }
    if (std::holds_alternative<CheckedError>(second.outcome))
        return make_record(backend, entry, FineLabel::PR, Step::parse2, times);
    return make_record(backend, entry, FineLabel::CR, Step::parse2, times);
}

BehaviorRecord assess_illformed(const Backend& backend, const CorpusEntry& entry, Budget budget) {
    StepTimes times;
    ParseInvocation first = invoke_parse(backend, entry.decoded, budget);
    times.parse1_ms = to_ms(first.elapsed);
    FineLabel fine;
    if (std::holds_alternative<ParsedDocument>(first.outcome))
        fine = FineLabel::UO;
    else if (std::holds_alternative<NoValue>(first.outcome))
        fine = FineLabel::NO;
    else if (std::holds_alternative<CheckedError>(first.outcome))
        fine = FineLabel::PA;
    else
        fine = FineLabel::CR;
    return make_record(backend, entry, fine, Step::parse1, times);
}

BehaviorRecord assess(const Backend& backend, const CorpusEntry& entry, Budget budget) {
    return entry.label == Label::well_formed ? assess_wellformed(backend, entry, budget)
                                             : assess_illformed(backend, entry, budget);
}

std::vector<std::string> RunReport::backend_ids() const {
    std::vector<std::string> ids;
    for (const auto& r : records)
        if (ids.empty() || ids.back() != r.backend_id) ids.push_back(r.backend_id);
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

RunReport run_corpus(const std::vector<Backend>& backends, const Corpus& corpus, const RunOptions& options) {
    if (backends.empty()) throw std::invalid_argument("run_corpus: no backends");
    std::vector<const CorpusEntry*> entries;
    for (const auto& e : corpus.entries)
        if (!options.only || e.label == *options.only) entries.push_back(&e);
    if (entries.empty()) throw std::invalid_argument("run_corpus: no corpus entries");

    RunReport report;
    auto& h = report.header;
    for (const auto& b : backends) h.registry.push_back(b.descriptor);
    h.corpus_digest = corpus.digest();
    h.well_formed = corpus.count(Label::well_formed);
    h.ill_formed = corpus.count(Label::ill_formed);
    h.seed = options.seed;
    h.workers = std::max<std::size_t>(options.workers, 1);
    if (options.budget) h.budget_ms = options.budget->count();
    h.only = options.only;

    const std::size_t cells = backends.size() * entries.size();
    report.records.resize(cells);
    std::vector<std::mutex> serial_locks(backends.size());
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < cells; i = next.fetch_add(1)) {
            const std::size_t b = i / entries.size();
            const CorpusEntry& entry = *entries[i % entries.size()];
            if (backends[b].impl && backends[b].impl->serial()) {
                std::lock_guard lock(serial_locks[b]);
                report.records[i] = assess(backends[b], entry, options.budget);
            } else {
                report.records[i] = assess(backends[b], entry, options.budget);
            }
        }
    };
    const std::size_t threads = std::min(h.workers, cells);
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    std::stable_sort(report.records.begin(), report.records.end(), [](const auto& a, const auto& b) {
        return std::tie(a.backend_id, a.file_id) < std::tie(b.backend_id, b.file_id);
    });
    return report;
}

// ---- report I/O -----------------------------------------------------------

JsonValue descriptor_to_value(const BackendDescriptor& d) {
    std::vector<JsonMember> m{{"id", d.id}, {"version", d.version}};
    if (const auto* b = std::get_if<BuiltinKind>(&d.kind)) {
        m.push_back({"kind", "builtin"});
        m.push_back({"config", config_to_value(b->config)});
    } else {
        m.push_back({"kind", "external"});
        m.push_back({"adapter", std::get<ExternalKind>(d.kind).adapter});
    }
    return make_object(std::move(m));
}

BackendDescriptor descriptor_from_value(const JsonValue& v) {
    require_object(v, "backend descriptor");
    BackendDescriptor d;
    d.id = require_string(v, "id");
    d.version = require_string(v, "version");
    const std::string kind = require_string(v, "kind");
    if (kind == "builtin") {
        reject_unknown_keys(v, {"id", "version", "kind", "config"}, "backend descriptor");
        d.kind = BuiltinKind{config_from_value(require_field(v, "config"))};
    } else if (kind == "external") {
        reject_unknown_keys(v, {"id", "version", "kind", "adapter"}, "backend descriptor");
        d.kind = ExternalKind{require_string(v, "adapter")};
    } else {
        throw FormatError("unknown backend kind \"" + kind + "\"");
    }
    return d;
}

namespace {

JsonValue optional_ms(const std::optional<double>& ms) {
    return ms ? JsonValue::float64(*ms) : JsonValue(JsonNull{});
}

std::optional<double> read_optional_ms(const JsonValue& obj, std::string_view key) {
    const JsonValue& v = require_field(obj, key);
    if (v.is_null()) return std::nullopt;
    return require_real(obj, key);
}

JsonValue header_to_value(const ReportHeader& h) {
    JsonArray registry;
    for (const auto& d : h.registry) registry.push_back(descriptor_to_value(d));
    JsonValue corpus = make_object({{"digest", h.corpus_digest},
                                    {"well_formed", JsonValue::integer(static_cast<std::int64_t>(h.well_formed))},
                                    {"ill_formed", JsonValue::integer(static_cast<std::int64_t>(h.ill_formed))}});
    JsonValue config = make_object(
        {{"seed", JsonValue::integer(static_cast<std::int64_t>(h.seed))},
         {"workers", JsonValue::integer(static_cast<std::int64_t>(h.workers))},
         {"budget_ms", h.budget_ms ? JsonValue::integer(*h.budget_ms) : JsonValue(JsonNull{})},
         {"label", h.only ? JsonValue(std::string(to_string(*h.only))) : JsonValue(JsonNull{})}});
    return make_object({{"type", "header"},
                        {"registry", std::move(registry)},
                        {"corpus", std::move(corpus)},
                        {"config", std::move(config)}});
}

ReportHeader header_from_value(const JsonValue& v) {
    reject_unknown_keys(v, {"type", "registry", "corpus", "config"}, "report header");
    ReportHeader h;
    const JsonValue& registry = require_field(v, "registry");
    if (!registry.as_array()) throw FormatError("registry must be an array");
    for (const auto& d : *registry.as_array()) h.registry.push_back(descriptor_from_value(d));

    const JsonValue& corpus = require_field(v, "corpus");
    require_object(corpus, "corpus");
    reject_unknown_keys(corpus, {"digest", "well_formed", "ill_formed"}, "corpus");
    h.corpus_digest = require_string(corpus, "digest");
    h.well_formed = static_cast<std::size_t>(require_int(corpus, "well_formed"));
    h.ill_formed = static_cast<std::size_t>(require_int(corpus, "ill_formed"));

    const JsonValue& config = require_field(v, "config");
    require_object(config, "config");
    reject_unknown_keys(config, {"seed", "workers", "budget_ms", "label"}, "config");
    h.seed = static_cast<std::uint64_t>(require_int(config, "seed"));
    h.workers = static_cast<std::size_t>(require_int(config, "workers"));
    if (!require_field(config, "budget_ms").is_null()) h.budget_ms = require_int(config, "budget_ms");
    if (!require_field(config, "label").is_null()) {
        const std::string label = require_string(config, "label");
        h.only = label_from_string(label);
        if (!h.only) throw FormatError("unknown label \"" + label + "\"");
    }
    return h;
}

JsonValue record_to_value(const BehaviorRecord& r) {
    return make_object({{"type", "record"},
                        {"backend_id", r.backend_id},
                        {"file_id", r.file_id},
                        {"label", std::string(to_string(r.label))},
                        {"fine", std::string(to_string(r.fine))},
                        {"outcome", std::string(to_string(r.outcome))},
                        {"step", std::string(to_string(r.step))},
                        {"elapsed_ms", make_object({{"parse1", optional_ms(r.elapsed.parse1_ms)},
                                                    {"serialize", optional_ms(r.elapsed.serialize_ms)},
                                                    {"parse2", optional_ms(r.elapsed.parse2_ms)}})}});
}

BehaviorRecord record_from_value(const JsonValue& v) {
    reject_unknown_keys(v, {"type", "backend_id", "file_id", "label", "fine", "outcome", "step", "elapsed_ms"},
                        "report record");
    BehaviorRecord r;
    r.backend_id = require_string(v, "backend_id");
    r.file_id = require_string(v, "file_id");
    auto field = [&](std::string_view key, auto parse) {
        const std::string text = require_string(v, key);
        auto parsed = parse(text);
        if (!parsed) throw FormatError("bad " + std::string(key) + " \"" + text + "\"");
        return *parsed;
    };
    r.label = field("label", label_from_string);
    r.fine = field("fine", fine_label_from_string);
    r.outcome = field("outcome", outcome_class_from_string);
    r.step = field("step", step_from_string);
    if (classify(r.label, r.fine) != r.outcome)
        throw FormatError("record outcome inconsistent with " + std::string(to_string(r.fine)));
    const JsonValue& elapsed = require_field(v, "elapsed_ms");
    require_object(elapsed, "elapsed_ms");
    reject_unknown_keys(elapsed, {"parse1", "serialize", "parse2"}, "elapsed_ms");
    r.elapsed.parse1_ms = read_optional_ms(elapsed, "parse1");
    r.elapsed.serialize_ms = read_optional_ms(elapsed, "serialize");
    r.elapsed.parse2_ms = read_optional_ms(elapsed, "parse2");
    return r;
}

}  // namespace

std::string write_report(const RunReport& report) {
    std::string out = canonical_serialize(header_to_value(report.header));
    out += '\n';
    for (const auto& r : report.records) {
        out += canonical_serialize(record_to_value(r));
        out += '\n';
    }
    return out;
}

RunReport read_report(std::string_view text) {
    RunReport report;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (line.empty()) continue;
        try {
            const JsonValue v = parse_document(line, "report line");
            require_object(v, "report line");
            const std::string type = require_string(v, "type");
            if (type == "header") {
                if (have_header) throw FormatError("second header");
                report.header = header_from_value(v);
                have_header = true;
            } else if (type == "record") {
                if (!have_header) throw FormatError("record before header");
                report.records.push_back(record_from_value(v));
            } else {
                throw FormatError("unknown line type \"" + type + "\"");
            }
        } catch (const FormatError& e) {
            throw FormatError("report line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!have_header) throw FormatError("report has no header");
    return report;
}

RunReport merge_reports(const std::vector<RunReport>& reports) {
    if (reports.empty()) throw FormatError("no reports to merge");
    RunReport merged;
    merged.header = reports.front().header;
    auto ids = [](const ReportHeader& h) {
        std::vector<std::string> out;
        for (const auto& d : h.registry) out.push_back(d.id);
        return out;
    };
    std::set<std::pair<std::string, std::string>> cells;
    for (const auto& r : reports) {
        if (ids(r.header) != ids(merged.header)) throw FormatError("reports cover different backends");
        if (r.header.corpus_digest != merged.header.corpus_digest)
            throw FormatError("reports come from different corpora");
        if (r.header.only != merged.header.only) merged.header.only.reset();
        for (const auto& rec : r.records) {
            if (!cells.emplace(rec.backend_id, rec.file_id).second)
                throw FormatError("cell " + rec.backend_id + "/" + rec.file_id + " appears twice");
            merged.records.push_back(rec);
        }
    }
    std::stable_sort(merged.records.begin(), merged.records.end(), [](const auto& a, const auto& b) {
        return std::tie(a.backend_id, a.file_id) < std::tie(b.backend_id, b.file_id);
    });
    return merged;
}

}  // namespace jdiv
