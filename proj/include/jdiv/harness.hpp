#pragma once

#include "jdiv/backend.hpp"
#include "jdiv/corpus.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jdiv {

enum class FineLabel { EQ, EV, NE, NO, PA, PR, CR, UO };
enum class OutcomeClass { Conform, Silent, Error };
enum class Step { parse1, serialize, parse2 };

inline constexpr FineLabel kAllFineLabels[] = {FineLabel::EQ, FineLabel::EV, FineLabel::NE, FineLabel::NO,
                                               FineLabel::PA, FineLabel::PR, FineLabel::CR, FineLabel::UO};
inline constexpr OutcomeClass kAllOutcomeClasses[] = {OutcomeClass::Conform, OutcomeClass::Silent,
                                                      OutcomeClass::Error};

std::string_view to_string(FineLabel f);
std::string_view to_string(OutcomeClass c);
std::string_view to_string(Step s);
std::optional<FineLabel> fine_label_from_string(std::string_view text);
std::optional<OutcomeClass> outcome_class_from_string(std::string_view text);
std::optional<Step> step_from_string(std::string_view text);

/// Outcome class for a fine label under a corpus label; nullopt for pairs
/// that cannot occur (EQ on an ill-formed file, UO on a well-formed one...).
std::optional<OutcomeClass> classify(Label label, FineLabel fine);

struct StepTimes {
    std::optional<double> parse1_ms;
    std::optional<double> serialize_ms;
    std::optional<double> parse2_ms;
};

struct BehaviorRecord {
    std::string backend_id;
    std::string file_id;
    Label label = Label::well_formed;
    FineLabel fine = FineLabel::EQ;
    OutcomeClass outcome = OutcomeClass::Conform;
    Step step = Step::parse1;
    StepTimes elapsed;
};

BehaviorRecord assess_wellformed(const Backend& backend, const CorpusEntry& entry, Budget budget = kDefaultBudget);
BehaviorRecord assess_illformed(const Backend& backend, const CorpusEntry& entry, Budget budget = kDefaultBudget);
/// Dispatches on entry.label.
BehaviorRecord assess(const Backend& backend, const CorpusEntry& entry, Budget budget = kDefaultBudget);

struct RunOptions {
    Budget budget = kDefaultBudget;
    std::size_t workers = 1;
    std::uint64_t seed = kDefaultSeed;
    /// Restricts the run to one corpus label.
    std::optional<Label> only;
};

struct ReportHeader {
    std::vector<BackendDescriptor> registry;
    std::string corpus_digest;
    std::size_t well_formed = 0;
    std::size_t ill_formed = 0;
    std::uint64_t seed = kDefaultSeed;
    std::size_t workers = 1;
    std::optional<std::int64_t> budget_ms;
    std::optional<Label> only;
};

struct RunReport {
    ReportHeader header;
    std::vector<BehaviorRecord> records;  // sorted by (backend_id, file_id)

    std::vector<std::string> backend_ids() const;
};

/// One record per (backend, entry). Throws std::invalid_argument when either
/// side is empty.
RunReport run_corpus(const std::vector<Backend>& backends, const Corpus& corpus, const RunOptions& options = {});

/// Line-delimited strict JSON: one header line, then one line per record.
std::string write_report(const RunReport& report);
/// Throws FormatError on anything write_report would not produce.
RunReport read_report(std::string_view text);

/// Concatenates reports over the same registry (e.g. a well-formed and an
/// ill-formed run). Throws FormatError if the registries differ or a cell
/// appears twice.
RunReport merge_reports(const std::vector<RunReport>& reports);

JsonValue descriptor_to_value(const BackendDescriptor& d);
BackendDescriptor descriptor_from_value(const JsonValue& v);

}  // namespace jdiv
