#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace jdiv {

enum class Label { well_formed, ill_formed };

std::string_view to_string(Label label);
std::optional<Label> label_from_string(std::string_view text);

struct CorpusEntry {
    std::string id;  // SHA-256 of bytes, lowercase hex
    std::string source;
    std::string relative_path;
    std::string bytes;
    Label label = Label::well_formed;
    std::string decoded;  // UTF-8
};

struct Corpus {
    std::vector<CorpusEntry> entries;

    std::size_t count(Label label) const;
    /// Digest over entry ids and labels in order; identifies the corpus in
    /// run reports.
    std::string digest() const;
    const CorpusEntry* find(std::string_view id) const;
};

struct EncodingError {
    std::string message;
};

/// Strict UTF-8 first, then UTF-16 (BOM honoured, big-endian without one).
/// Returns UTF-8 text.
std::variant<std::string, EncodingError> decode_check(std::string_view bytes);

std::string content_id(std::string_view bytes);

struct ManifestRecord {
    std::string path;
    std::string source;
    Label label = Label::well_formed;
};

struct IngestIssue {
    enum class Kind { malformed_record, missing_file, undecodable, duplicate };
    Kind kind;
    std::size_t line = 0;  // 1-based manifest line
    std::string path;
    std::string message;
};

std::string_view to_string(IngestIssue::Kind kind);

struct IngestResult {
    Corpus corpus;
    std::vector<IngestIssue> issues;
};

/// Manifest text is one strict-JSON object per line; blank lines are
/// skipped. Relative paths resolve against `base_dir`.
IngestResult ingest(std::string_view manifest_text, const std::filesystem::path& base_dir);

/// Reads the manifest from disk. Throws std::runtime_error if the manifest
/// itself cannot be read; per-file problems land in `issues`.
IngestResult ingest_file(const std::filesystem::path& manifest);

}  // namespace jdiv
