#include "jdiv/backend.hpp"

#include "adapters.hpp"
#include "jdiv/wire.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace jdiv {

namespace {

using Clock = std::chrono::steady_clock;

class BuiltinBackend final : public ParserBackend {
public:
    explicit BuiltinBackend(LenienceConfig cfg) : cfg_(std::move(cfg)) {}

    BackendParseResult parse(std::string_view text) const override {
        auto r = jdiv::parse(text, cfg_);  // ParserFault propagates: that is the crash
        if (auto* err = std::get_if<ParseError>(&r)) return std::move(*err);
        return ParsedDocument{std::get<JsonValue>(std::move(r)), {}};
    }

    BackendSerializeResult serialize(const JsonValue& value) const override {
        return jdiv::serialize(value, cfg_);
    }

private:
    LenienceConfig cfg_;
};

// ---- worker process -----------------------------------------------------

struct WorkerOutcome {
    std::variant<std::string, Crash, Timeout> result;
};

void write_all(int fd, std::string_view data) {
    while (!data.empty()) {
        const ssize_t n = ::write(fd, data.data(), data.size());
        if (n < 0) {
            if (errno == EINTR) continue;
            return;
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

template <class Body>
WorkerOutcome run_in_worker(Body&& body, Budget budget) {
    int fds[2];
    if (::pipe(fds) != 0) return {Crash{std::string("pipe failed: ") + std::strerror(errno)}};
    const pid_t pid = ::fork();
    if (pid < 0) {
        ::close(fds[0]);
        ::close(fds[1]);
        return {Crash{std::string("fork failed: ") + std::strerror(errno)}};
    }
    if (pid == 0) {
        ::close(fds[0]);
        std::string frame;
        try {
            frame = body();
        } catch (const std::exception& e) {
            frame = wire::encode_fault(e.what());
        } catch (...) {
            frame = wire::encode_fault("non-standard exception");
        }
        write_all(fds[1], frame);
        ::close(fds[1]);
        ::_exit(0);
    }

    ::close(fds[1]);
    const auto deadline = budget ? std::optional(Clock::now() + *budget) : std::nullopt;
    std::string frame;
    char buf[65536];
    bool timed_out = false;
    while (true) {
        int wait_ms = -1;
        if (deadline) {
            const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(*deadline - Clock::now());
            if (left.count() <= 0) {
                timed_out = true;
                break;
            }
            wait_ms = static_cast<int>(std::min<long long>(left.count(), 1'000'000));
        }
        pollfd p{fds[0], POLLIN, 0};
        const int ready = ::poll(&p, 1, wait_ms);
        if (ready < 0 && errno == EINTR) continue;
        if (ready == 0) continue;  // re-check the deadline
        const ssize_t n = ::read(fds[0], buf, sizeof(buf));
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) break;
        frame.append(buf, static_cast<std::size_t>(n));
    }
    ::close(fds[0]);

    if (timed_out) {
        ::kill(pid, SIGKILL);
        ::waitpid(pid, nullptr, 0);
        return {Timeout{}};
    }
    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (WIFSIGNALED(status)) {
        const int sig = WTERMSIG(status);
        return {Crash{"worker terminated by signal " + std::to_string(sig) + " (" + ::strsignal(sig) + ")"}};
    }
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
        return {Crash{"worker exited with status " + std::to_string(WEXITSTATUS(status))}};
    if (auto fault = wire::decode_fault(frame)) return {Crash{*fault}};
    return {std::move(frame)};
}

template <class Outcome>
bool over_budget(const Outcome& o, Budget budget) {
    return budget && o.elapsed > *budget;
}

ParseInvocation from_backend(BackendParseResult r) {
    ParseInvocation inv;
    if (auto* doc = std::get_if<ParsedDocument>(&r)) {
        inv.outcome = std::move(*doc);
    } else if (std::holds_alternative<NoValue>(r)) {
        inv.outcome = NoValue{};
    } else {
        auto& e = std::get<ParseError>(r);
        inv.outcome = CheckedError{std::string(to_string(e.kind)), std::move(e.message)};
    }
    return inv;
}

SerializeInvocation from_backend(BackendSerializeResult r) {
    SerializeInvocation inv;
    if (auto* text = std::get_if<std::string>(&r)) {
        inv.outcome = std::move(*text);
    } else {
        inv.outcome = CheckedError{"print", std::get<SerializeError>(r).message};
    }
    return inv;
}

// ---- adapter registry ---------------------------------------------------

struct AdapterTable {
    std::mutex mutex;
    std::map<std::string, AdapterInfo> entries;
    std::vector<std::string> order;

    AdapterTable() {
        for (auto& info : standard_adapters()) {
            order.push_back(info.name);
            entries.emplace(info.name, std::move(info));
        }
    }
};

AdapterTable& adapters() {
    static AdapterTable table;
    return table;
}

BackendDescriptor builtin(std::string id, LenienceConfig cfg) {
    return BackendDescriptor{std::move(id), BuiltinKind{std::move(cfg)}, "1"};
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

ParseInvocation invoke_parse(const Backend& backend, std::string_view input, Budget budget) {
    const auto start = Clock::now();
    ParseInvocation inv;
    if (backend.isolation == Isolation::subprocess) {
        auto impl = backend.impl;
        WorkerOutcome w = run_in_worker([&] { return wire::encode(impl->parse(input)); }, budget);
        if (auto* frame = std::get_if<std::string>(&w.result)) {
            if (auto decoded = wire::decode_parse(*frame)) {
                inv = from_backend(std::move(*decoded));
            } else {
                inv.outcome = Crash{"worker produced an unreadable result"};
            }
        } else if (auto* crash = std::get_if<Crash>(&w.result)) {
            inv.outcome = std::move(*crash);
        } else {
            inv.outcome = Timeout{};
        }
    } else {
        try {
            inv = from_backend(backend.impl->parse(input));
        } catch (const std::exception& e) {
            inv.outcome = Crash{e.what()};
        } catch (...) {
            inv.outcome = Crash{"non-standard exception"};
        }
    }
    inv.elapsed = Clock::now() - start;
    if (backend.isolation == Isolation::in_process && over_budget(inv, budget)) inv.outcome = Timeout{};
    return inv;
}

SerializeInvocation invoke_serialize(const Backend& backend, const JsonValue& value, Budget budget) {
    const auto start = Clock::now();
    SerializeInvocation inv;
    if (backend.isolation == Isolation::subprocess) {
        auto impl = backend.impl;
        WorkerOutcome w = run_in_worker([&] { return wire::encode(impl->serialize(value)); }, budget);
        if (auto* frame = std::get_if<std::string>(&w.result)) {
            if (auto decoded = wire::decode_serialize(*frame)) {
                inv = from_backend(std::move(*decoded));
            } else {
                inv.outcome = Crash{"worker produced an unreadable result"};
            }
        } else if (auto* crash = std::get_if<Crash>(&w.result)) {
            inv.outcome = std::move(*crash);
        } else {
            inv.outcome = Timeout{};
        }
    } else {
        try {
            inv = from_backend(backend.impl->serialize(value));
        } catch (const std::exception& e) {
            inv.outcome = Crash{e.what()};
        } catch (...) {
            inv.outcome = Crash{"non-standard exception"};
        }
    }
    inv.elapsed = Clock::now() - start;
    if (backend.isolation == Isolation::in_process && over_budget(inv, budget)) inv.outcome = Timeout{};
    return inv;
}

std::vector<BackendDescriptor> builtin_registry(std::uint64_t seed) {
    std::vector<BackendDescriptor> out;
    const LenienceConfig strict = LenienceConfig::strict();
    auto with = [&](auto&& tweak) {
        LenienceConfig c = strict;
        tweak(c);
        return c;
    };

    out.push_back(builtin("strict", strict));
    out.push_back(builtin("strict-4627", with([](auto& c) { c.lonely_values = LonelyValues::rfc4627; })));
    out.push_back(builtin("trailing-comma", with([](auto& c) { c.allow_trailing_commas = true; })));
    out.push_back(builtin("unquoted-keys", with([](auto& c) { c.allow_unquoted_keys = true; })));
    out.push_back(builtin("hex-numbers", with([](auto& c) { c.allow_hex_numbers = true; })));
    out.push_back(builtin("comments", with([](auto& c) { c.allow_comments = true; })));
    out.push_back(builtin("invalid-escapes", with([](auto& c) { c.allow_invalid_escapes = true; })));
    out.push_back(builtin("keep-first", with([](auto& c) { c.duplicate_keys = DuplicateKeys::keep_first; })));
    out.push_back(builtin("reject-duplicates", with([](auto& c) { c.duplicate_keys = DuplicateKeys::reject; })));
    out.push_back(builtin("lossy64", with([](auto& c) { c.number_policy = NumberPolicy::lossy64; })));
    out.push_back(builtin("lossy64-rounding", with([](auto& c) {
                              c.number_policy = NumberPolicy::lossy64;
                              c.overflow_mode = OverflowMode::round_silently;
                          })));
    out.push_back(builtin("raw-numbers", with([](auto& c) { c.number_policy = NumberPolicy::raw; })));
    out.push_back(builtin("null-dropper", with([](auto& c) { c.drop_null_entries_on_serialize = true; })));
    out.push_back(builtin("shuffled-keys", with([seed](auto& c) {
                              c.object_order = ObjectOrdering{ObjectOrdering::Mode::hashed, seed};
                          })));
    out.push_back(builtin("crasher-deep", with([](auto& c) {
                              c.depth_limit = 32;
                              c.depth_overflow = DepthOverflow::crash;
                          })));
    return out;
}

void register_adapter(AdapterInfo info) {
    auto& table = adapters();
    std::lock_guard lock(table.mutex);
    if (!table.entries.count(info.name)) table.order.push_back(info.name);
    std::string name = info.name;
    table.entries.insert_or_assign(std::move(name), std::move(info));
}

std::vector<std::string> adapter_names() {
    auto& table = adapters();
    std::lock_guard lock(table.mutex);
    return table.order;
}

Backend make_backend(const BackendDescriptor& descriptor) {
    if (const auto* b = std::get_if<BuiltinKind>(&descriptor.kind))
        return Backend{descriptor, std::make_shared<BuiltinBackend>(b->config), Isolation::in_process};
    const auto& name = std::get<ExternalKind>(descriptor.kind).adapter;
    auto& table = adapters();
    std::lock_guard lock(table.mutex);
    auto it = table.entries.find(name);
    if (it == table.entries.end()) throw std::invalid_argument("unknown adapter \"" + name + "\"");
    return Backend{descriptor, it->second.factory(), it->second.isolation};
}

std::vector<Backend> select_backends(std::string_view selection, std::uint64_t seed) {
    std::vector<BackendDescriptor> chosen;
    auto add = [&](BackendDescriptor d) {
        for (const auto& c : chosen) {
            if (c.id != d.id) continue;
            if (c.kind.index() != d.kind.index())
                throw std::invalid_argument("backend id \"" + d.id + "\" is ambiguous");
            return;
        }
        chosen.push_back(std::move(d));
    };
    const auto builtins = builtin_registry(seed);

    std::size_t start = 0;
    while (start <= selection.size()) {
        std::size_t comma = selection.find(',', start);
        if (comma == std::string_view::npos) comma = selection.size();
        const std::string_view token = trim(selection.substr(start, comma - start));
        start = comma + 1;
        if (token.empty()) continue;

        const std::size_t colon = token.find(':');
        std::string_view family;
        std::string_view name = token;
        if (colon != std::string_view::npos) {
            family = token.substr(0, colon);
            name = token.substr(colon + 1);
        } else {
            // A bare name is a built-in id or an adapter name, never both.
            const bool is_builtin = std::any_of(builtins.begin(), builtins.end(),
                                                [&](const auto& d) { return d.id == name; });
            const auto names = adapter_names();
            const bool is_external = std::find(names.begin(), names.end(), name) != names.end();
            if (is_builtin && is_external)
                throw std::invalid_argument("backend name \"" + std::string(name) + "\" is ambiguous");
            if (!is_builtin && !is_external)
                throw std::invalid_argument("unknown backend \"" + std::string(name) + "\"");
            family = is_builtin ? "builtin" : "external";
        }
        if (family == "builtin") {
            bool found = false;
            for (const auto& d : builtins) {
                if (name == "*" || d.id == name) {
                    add(d);
                    found = true;
                }
            }
            if (!found) throw std::invalid_argument("unknown built-in backend \"" + std::string(name) + "\"");
        } else if (family == "external") {
            std::vector<std::pair<std::string, std::string>> known;
            {
                auto& table = adapters();
                std::lock_guard lock(table.mutex);
                for (const auto& n : table.order) known.emplace_back(n, table.entries.at(n).version);
            }
            bool found = false;
            for (const auto& [adapter, version] : known) {
                if (name == "*" || adapter == name) {
                    add(BackendDescriptor{adapter, ExternalKind{adapter}, version});
                    found = true;
                }
            }
            if (!found) throw std::invalid_argument("unknown external adapter \"" + std::string(name) + "\"");
        } else {
            throw std::invalid_argument("unknown backend family \"" + std::string(family) + "\"");
        }
    }
    if (chosen.empty()) throw std::invalid_argument("no backends selected");

    std::vector<Backend> out;
    out.reserve(chosen.size());
    for (const auto& d : chosen) out.push_back(make_backend(d));
    return out;
}

}  // namespace jdiv
