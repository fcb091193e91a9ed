#include "jdiv/corpus.hpp"

#include "jdiv/io.hpp"
#include "jdiv/json_access.hpp"

#include <openssl/evp.h>

#include <unordered_set>

namespace jdiv {

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

// Rejects overlong forms, encoded surrogates and anything past U+10FFFF.
bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto b0 = static_cast<unsigned char>(s[i]);
        if (b0 < 0x80) {
            ++i;
            continue;
        }
        std::size_t len;
        std::uint32_t cp;
        std::uint32_t min;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2, cp = b0 & 0x1F, min = 0x80;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3, cp = b0 & 0x0F, min = 0x800;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4, cp = b0 & 0x07, min = 0x10000;
        } else {
            return false;
        }
        if (s.size() - i < len) return false;
        for (std::size_t k = 1; k < len; ++k) {
            const auto b = static_cast<unsigned char>(s[i + k]);
            if ((b & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (b & 0x3F);
        }
        if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
        i += len;
    }
    return true;
}

std::optional<std::string> decode_utf16(std::string_view s) {
    if (s.size() % 2 != 0) return std::nullopt;
    bool big_endian = true;
    std::size_t i = 0;
    if (s.size() >= 2) {
        const auto a = static_cast<unsigned char>(s[0]);
        const auto b = static_cast<unsigned char>(s[1]);
        if (a == 0xFE && b == 0xFF) {
            i = 2;
        } else if (a == 0xFF && b == 0xFE) {
            big_endian = false;
            i = 2;
        }
    }
    auto unit = [&](std::size_t at) -> std::uint32_t {
        const auto a = static_cast<unsigned char>(s[at]);
        const auto b = static_cast<unsigned char>(s[at + 1]);
        return big_endian ? (std::uint32_t(a) << 8 | b) : (std::uint32_t(b) << 8 | a);
    };
    std::string out;
    while (i < s.size()) {
        const std::uint32_t u = unit(i);
        i += 2;
        if (u >= 0xDC00 && u <= 0xDFFF) return std::nullopt;
        if (u >= 0xD800 && u <= 0xDBFF) {
            if (i >= s.size()) return std::nullopt;
            const std::uint32_t lo = unit(i);
            if (lo < 0xDC00 || lo > 0xDFFF) return std::nullopt;
            i += 2;
            append_utf8(out, 0x10000 + ((u - 0xD800) << 10) + (lo - 0xDC00));
        } else {
            append_utf8(out, u);
        }
    }
    return out;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int k = 0; k < len; ++k) {
        out += hex[md[k] >> 4];
        out += hex[md[k] & 0xF];
    }
    return out;
}

ManifestRecord parse_record(std::string_view line) {
    const JsonValue doc = parse_document(line, "manifest record");
    require_object(doc, "manifest record");
    reject_unknown_keys(doc, {"path", "source", "label"}, "manifest record");
    ManifestRecord rec;
    rec.path = require_string(doc, "path");
    rec.source = require_string(doc, "source");
    const std::string label = require_string(doc, "label");
    const auto parsed = label_from_string(label);
    if (!parsed) throw FormatError("unknown label \"" + label + "\"");
    rec.label = *parsed;
    if (rec.path.empty()) throw FormatError("empty path");
    return rec;
}

}  // namespace

std::string_view to_string(Label label) {
    return label == Label::well_formed ? "well-formed" : "ill-formed";
}

std::optional<Label> label_from_string(std::string_view text) {
    if (text == "well-formed") return Label::well_formed;
    if (text == "ill-formed") return Label::ill_formed;
    return std::nullopt;
}

std::string_view to_string(IngestIssue::Kind kind) {
    switch (kind) {
    case IngestIssue::Kind::malformed_record: return "malformed-record";
    case IngestIssue::Kind::missing_file: return "missing-file";
    case IngestIssue::Kind::undecodable: return "undecodable";
    case IngestIssue::Kind::duplicate: return "duplicate";
    }
    return "unknown";
}

std::size_t Corpus::count(Label label) const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.label == label;
    return n;
}

std::string Corpus::digest() const {
    std::string material;
    for (const auto& e : entries) {
        material += e.id;
        material += ':';
        material += to_string(e.label);
        material += '\n';
    }
    return sha256_hex(material);
}

const CorpusEntry* Corpus::find(std::string_view id) const {
    for (const auto& e : entries)
        if (e.id == id) return &e;
    return nullptr;
}

std::variant<std::string, EncodingError> decode_check(std::string_view bytes) {
    if (valid_utf8(bytes)) return std::string(bytes);
    if (auto text = decode_utf16(bytes)) return std::move(*text);
    return EncodingError{"neither valid UTF-8 nor valid UTF-16"};
}

std::string content_id(std::string_view bytes) { return sha256_hex(bytes); }

IngestResult ingest(std::string_view manifest_text, const std::filesystem::path& base_dir) {
    IngestResult result;
    std::unordered_set<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= manifest_text.size()) {
        const std::size_t nl = manifest_text.find('\n', pos);
        std::string_view line = manifest_text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        pos = nl == std::string_view::npos ? manifest_text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

        ManifestRecord rec;
        try {
            rec = parse_record(line);
        } catch (const FormatError& e) {
            result.issues.push_back({IngestIssue::Kind::malformed_record, line_no, {}, e.what()});
            continue;
        }

        const std::filesystem::path full = base_dir / rec.path;  // an absolute rec.path replaces base_dir
        std::string bytes;
        try {
            bytes = read_file(full);
        } catch (const IoError& e) {
            result.issues.push_back({IngestIssue::Kind::missing_file, line_no, rec.path, e.what()});
            continue;
        }
        auto decoded = decode_check(bytes);
        if (auto* err = std::get_if<EncodingError>(&decoded)) {
            result.issues.push_back({IngestIssue::Kind::undecodable, line_no, rec.path, err->message});
            continue;
        }
        std::string id = content_id(bytes);
        if (!seen.insert(id).second) {
            result.issues.push_back({IngestIssue::Kind::duplicate, line_no, rec.path, "same content as entry " + id});
            continue;
        }
        result.corpus.entries.push_back(CorpusEntry{std::move(id), std::move(rec.source), std::move(rec.path),
                                                    std::move(bytes), rec.label,
                                                    std::get<std::string>(std::move(decoded))});
    }
    return result;
}

IngestResult ingest_file(const std::filesystem::path& manifest) {
    const std::string text = read_file(manifest);
    return ingest(text, manifest.parent_path());
}

}  // namespace jdiv
