#pragma once

#include "jdiv/harness.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jdiv {

enum class Granularity { outcome_class, fine_label };

/// Fraction of files on which the two backends' outcomes differ, over the
/// files of `label` (all files when unset). Throws std::invalid_argument
/// when the backends do not cover the same, non-empty file set.
double behavioral_distance(std::string_view l1, std::string_view l2, const RunReport& report,
                           std::optional<Label> label = std::nullopt,
                           Granularity granularity = Granularity::outcome_class);

struct DistanceSummary {
    std::size_t pairs = 0;
    double min = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double max = 0.0;
};

struct DistanceMatrix {
    std::vector<std::string> ids;
    std::vector<std::vector<double>> values;

    /// Upper-triangle entries, row-major.
    std::vector<double> pairwise() const;
    DistanceSummary summary() const;
};

DistanceMatrix distance_matrix(const RunReport& report, Label label,
                               Granularity granularity = Granularity::outcome_class);

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
};

/// Two-sided Welch test. Throws std::invalid_argument for samples with
/// fewer than two values, or when both variances vanish but the means differ.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

/// Regularized incomplete beta I_x(a, b), continued fraction to 1e-12.
double regularized_incomplete_beta(double a, double b, double x);
/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_tailed(double t, double df);

struct ConsensusBucket {
    std::size_t k = 0;
    OutcomeClass outcome = OutcomeClass::Conform;
    std::size_t files = 0;
    double share = 0.0;
};

struct ConsensusHistogram {
    std::size_t backends = 0;
    std::size_t files = 0;
    std::vector<ConsensusBucket> buckets;  // sorted by (k, outcome), empty buckets omitted
};

/// Throws std::invalid_argument unless every backend covers every file.
ConsensusHistogram consensus_distribution(const RunReport& report, Label label);

struct OutcomeRow {
    std::string name;
    std::array<std::size_t, 8> fine{};   // indexed by FineLabel
    std::array<std::size_t, 3> outcome{};  // indexed by OutcomeClass
    std::size_t total = 0;
};

struct OutcomeTable {
    Label label = Label::well_formed;
    std::vector<OutcomeRow> rows;
    /// Per column, files where at least one backend shows that outcome.
    OutcomeRow population;
};

OutcomeTable outcome_table(const RunReport& report, Label label);

/// Fine labels that can occur under `label`, in column order.
std::vector<FineLabel> fine_columns(Label label);

/// Percentage rounded to one decimal.
double percent(std::size_t part, std::size_t whole);

std::string to_csv(const DistanceMatrix& m);
std::string to_csv(const DistanceSummary& s);
std::string to_csv(const WelchResult& w);
std::string to_csv(const ConsensusHistogram& h);
std::string to_csv(const OutcomeTable& t);
std::string to_text(const OutcomeTable& t);

/// Shortest round-trip decimal for a double.
std::string format_real(double v);

}  // namespace jdiv
