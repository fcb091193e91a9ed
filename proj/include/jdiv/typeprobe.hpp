#pragma once

#include "jdiv/backend.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jdiv {

enum class RoundTrip { EQ, EV, lossy, error };

std::string_view to_string(RoundTrip r);

struct ProbeRow {
    std::string lexeme;
    // Native tag reported by the adapter when it has one, otherwise the
    // NumberKind name; "none" when no number came back.
    std::string representation;
    RoundTrip round_trip = RoundTrip::error;
};

struct ProbeReport {
    std::string backend_id;
    std::vector<ProbeRow> rows;  // one per probe_lexemes() entry, same order
    // Serializing the 8-key ordering document: EQ keeps key order, EV
    // reorders, lossy/error otherwise.
    RoundTrip ordering = RoundTrip::error;
};

const std::vector<std::string>& probe_lexemes();
std::string_view ordering_probe_document();

/// Each lexeme is parsed wrapped in a one-element array, then serialized.
/// EQ: identical text; EV: same decimal value written differently; lossy:
/// the written value changed; error: any step failed.
ProbeReport probe_number_types(const Backend& backend, Budget budget = kDefaultBudget);

/// Columns: backend,probe,representation,round_trip. The ordering probe is
/// the row whose probe column is "object-order".
std::string to_csv(const std::vector<ProbeReport>& reports);

}  // namespace jdiv
