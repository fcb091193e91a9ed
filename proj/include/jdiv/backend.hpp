#pragma once

#include "jdiv/json_value.hpp"
#include "jdiv/parser.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace jdiv {

struct BuiltinKind {
    LenienceConfig config;
};

struct ExternalKind {
    std::string adapter;
};

/// Identity of one parser under test. Ids are unique within a registry and
/// stable across runs.
struct BackendDescriptor {
    std::string id;
    std::variant<BuiltinKind, ExternalKind> kind;
    std::string version;

    bool is_builtin() const { return std::holds_alternative<BuiltinKind>(kind); }
};

/// Backend signalled success but handed back no object.
struct NoValue {};

struct ParsedDocument {
    JsonValue value;
    // Native representation of each number, in document order. Only
    // external adapters fill this in.
    std::vector<std::string> number_tags;
};

using BackendParseResult = std::variant<ParsedDocument, NoValue, ParseError>;
using BackendSerializeResult = std::variant<std::string, SerializeError>;

/// What an adapter implements. Any exception escaping parse() or
/// serialize() other than through the returned error channel counts as a
/// crash, as does abnormal process termination under subprocess isolation.
class ParserBackend {
public:
    virtual ~ParserBackend() = default;
    virtual BackendParseResult parse(std::string_view text) const = 0;
    virtual BackendSerializeResult serialize(const JsonValue& value) const = 0;
    /// True when concurrent calls are unsafe; the harness then queues them.
    virtual bool serial() const { return false; }
};

enum class Isolation { in_process, subprocess };

struct Backend {
    BackendDescriptor descriptor;
    std::shared_ptr<const ParserBackend> impl;
    Isolation isolation = Isolation::in_process;
};

// ---- invocation results -------------------------------------------------

struct CheckedError {
    std::string kind;  // "syntax", "print", ...
    std::string message;
};

struct Crash {
    std::string diagnostic;
};

struct Timeout {};

struct ParseInvocation {
    std::variant<ParsedDocument, NoValue, CheckedError, Crash, Timeout> outcome;
    std::chrono::nanoseconds elapsed{0};
};

struct SerializeInvocation {
    std::variant<std::string, CheckedError, Crash, Timeout> outcome;
    std::chrono::nanoseconds elapsed{0};
};

using Budget = std::optional<std::chrono::milliseconds>;

inline constexpr std::chrono::milliseconds kDefaultBudget{10'000};

/// Never lets a backend failure escape: crashes, aborts and hangs all come
/// back as values. Under in-process isolation the budget can only be checked
/// after the call returns.
ParseInvocation invoke_parse(const Backend& backend, std::string_view input, Budget budget = kDefaultBudget);
SerializeInvocation invoke_serialize(const Backend& backend, const JsonValue& value,
                                     Budget budget = kDefaultBudget);

// ---- registry -----------------------------------------------------------

inline constexpr std::uint64_t kDefaultSeed = 20201124;

/// Built-in lenience variants, in fixed order. `seed` feeds the
/// shuffled-keys variant.
std::vector<BackendDescriptor> builtin_registry(std::uint64_t seed = kDefaultSeed);

using AdapterFactory = std::function<std::shared_ptr<const ParserBackend>()>;

struct AdapterInfo {
    std::string name;
    std::string version;
    AdapterFactory factory;
    Isolation isolation = Isolation::subprocess;
};

/// Registers an external adapter under `info.name`; replaces an existing
/// entry with the same name. The standard adapters (nlohmann, rapidjson)
/// are present from startup.
void register_adapter(AdapterInfo info);
std::vector<std::string> adapter_names();

/// Instantiates a descriptor. Throws std::invalid_argument for an unknown
/// external adapter.
Backend make_backend(const BackendDescriptor& descriptor);

/// Resolves a comma-separated selection such as "builtin:*,external:nlohmann".
/// A bare name ("strict", "rapidjson") picks whichever family owns it.
/// Throws std::invalid_argument on unknown names or an empty selection.
std::vector<Backend> select_backends(std::string_view selection, std::uint64_t seed = kDefaultSeed);

}  // namespace jdiv
