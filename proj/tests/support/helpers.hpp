#pragma once

#include "jdiv/backend.hpp"
#include "jdiv/corpus.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

namespace jdiv::testsupport {

/// Backend whose behaviour is given as two lambdas. Lets a test steer every
/// branch of the assessment algorithms.
class FnBackend final : public ParserBackend {
public:
    using ParseFn = std::function<BackendParseResult(std::string_view)>;
    using PrintFn = std::function<BackendSerializeResult(const JsonValue&)>;

    FnBackend(ParseFn p, PrintFn s) : parse_(std::move(p)), print_(std::move(s)) {}
    BackendParseResult parse(std::string_view text) const override { return parse_(text); }
    BackendSerializeResult serialize(const JsonValue& v) const override { return print_(v); }

private:
    ParseFn parse_;
    PrintFn print_;
};

inline Backend fn_backend(std::string id, FnBackend::ParseFn p, FnBackend::PrintFn s = nullptr) {
    if (!s) s = [](const JsonValue&) -> BackendSerializeResult { return std::string("[]"); };
    Backend b;
    b.descriptor = BackendDescriptor{id, ExternalKind{id}, "test"};
    b.impl = std::make_shared<FnBackend>(std::move(p), std::move(s));
    b.isolation = Isolation::in_process;
    return b;
}

inline Backend builtin(std::string_view id, std::uint64_t seed = kDefaultSeed) {
    for (const auto& d : builtin_registry(seed))
        if (d.id == id) return make_backend(d);
    throw std::logic_error("no built-in " + std::string(id));
}

inline CorpusEntry entry(std::string text, Label label = Label::well_formed, std::string name = {}) {
    CorpusEntry e;
    e.id = content_id(text);
    e.source = "test";
    e.relative_path = name.empty() ? e.id.substr(0, 8) : std::move(name);
    e.bytes = text;
    e.decoded = std::move(text);
    e.label = label;
    return e;
}

inline Corpus fixture_corpus() {
    auto r = ingest_file(std::filesystem::path(JDIV_FIXTURE_DIR) / "fixtures.manifest");
    if (!r.issues.empty()) throw std::runtime_error("fixture manifest has issues");
    return std::move(r.corpus);
}

inline const CorpusEntry& fixture(const Corpus& c, std::string_view relative_path) {
    for (const auto& e : c.entries)
        if (e.relative_path == relative_path) return e;
    throw std::logic_error("no fixture " + std::string(relative_path));
}

}  // namespace jdiv::testsupport
