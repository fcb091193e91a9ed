// jdiv: differential testing of JSON parsers.

#include "jdiv/analysis.hpp"
#include "jdiv/corpus.hpp"
#include "jdiv/harness.hpp"
#include "jdiv/io.hpp"
#include "jdiv/json_access.hpp"
#include "jdiv/multiversion.hpp"
#include "jdiv/serialize.hpp"
#include "jdiv/typeprobe.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace jdiv;

namespace {

constexpr int kUsage = 1;
constexpr int kIo = 2;
constexpr int kRejected = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string manifest = "fixtures/fixtures.manifest";
    std::string backends = "builtin:*";
    std::string out;
    std::size_t workers = 1;
    std::int64_t budget_ms = kDefaultBudget.count();
    std::uint64_t seed = kDefaultSeed;
    bool isolate = false;
    std::vector<std::string> reports;
    std::string label;
    bool fine = false;
    bool welch = false;
    std::string strategy = "majority";
    std::vector<std::string> order;
    std::string strict_id = "strict";
    bool fail_on_reject = false;
    std::string input;
};

fs::path out_dir(const Options& o) {
    if (!o.out.empty()) return o.out;
    if (const char* env = std::getenv("JDIV_OUT_DIR"); env && *env) return env;
    return ".";
}

Budget budget(const Options& o) {
    if (o.budget_ms <= 0) return std::nullopt;
    return std::chrono::milliseconds(o.budget_ms);
}

Label parse_label(const std::string& text) {
    auto label = label_from_string(text);
    if (!label) throw UsageError("--label must be well-formed or ill-formed");
    return *label;
}

std::vector<Backend> backends(const Options& o) {
    std::vector<Backend> out;
    try {
        out = select_backends(o.backends, o.seed);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (o.isolate)
        for (auto& b : out) b.isolation = Isolation::subprocess;
    return out;
}

Corpus load_corpus(const Options& o, bool report_issues) {
    IngestResult r = ingest_file(o.manifest);
    if (report_issues)
        for (const auto& issue : r.issues)
            std::cerr << o.manifest << ":" << issue.line << ": " << to_string(issue.kind) << ": " << issue.message
                      << "\n";
    return std::move(r.corpus);
}

RunReport load_reports(const Options& o) {
    if (o.reports.empty()) throw UsageError("at least one --report is required");
    std::vector<RunReport> reports;
    for (const auto& path : o.reports) reports.push_back(read_report(read_file(path)));
    return merge_reports(reports);
}

void emit(const fs::path& path, const std::string& content) {
    write_file(path, content);
    std::cerr << "wrote " << path.string() << "\n";
}

std::string label_slug(Label l) { return l == Label::well_formed ? "wellformed" : "illformed"; }

int cmd_ingest(const Options& o) {
    IngestResult r = ingest_file(o.manifest);
    JsonArray entries;
    for (const auto& e : r.corpus.entries)
        entries.push_back(make_object({{"id", e.id},
                                       {"source", e.source},
                                       {"path", e.relative_path},
                                       {"label", std::string(to_string(e.label))}}));
    JsonArray issues;
    for (const auto& i : r.issues)
        issues.push_back(make_object({{"kind", std::string(to_string(i.kind))},
                                      {"line", JsonValue::integer(static_cast<std::int64_t>(i.line))},
                                      {"path", i.path},
                                      {"message", i.message}}));
    const JsonValue doc = make_object(
        {{"digest", r.corpus.digest()},
         {"well_formed", JsonValue::integer(static_cast<std::int64_t>(r.corpus.count(Label::well_formed)))},
         {"ill_formed", JsonValue::integer(static_cast<std::int64_t>(r.corpus.count(Label::ill_formed)))},
         {"entries", std::move(entries)},
         {"issues", std::move(issues)}});
    emit(out_dir(o) / "corpus.json", canonical_serialize(doc) + "\n");
    std::cout << r.corpus.count(Label::well_formed) << " well-formed, " << r.corpus.count(Label::ill_formed)
              << " ill-formed, " << r.issues.size() << " excluded\n";
    return 0;
}

int cmd_run(const Options& o, Label label) {
    const auto selected = backends(o);
    const Corpus corpus = load_corpus(o, true);
    RunOptions ro;
    ro.budget = budget(o);
    ro.workers = o.workers;
    ro.seed = o.seed;
    ro.only = label;
    RunReport report;
    try {
        report = run_corpus(selected, corpus, ro);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    emit(out_dir(o) / (label_slug(label) + ".jsonl"), write_report(report));
    return 0;
}

int cmd_distances(const Options& o) {
    const RunReport report = load_reports(o);
    const Granularity g = o.fine ? Granularity::fine_label : Granularity::outcome_class;
    std::vector<Label> labels;
    if (!o.label.empty())
        labels.push_back(parse_label(o.label));
    else
        labels = {Label::well_formed, Label::ill_formed};
    if (o.welch && labels.size() != 2) throw UsageError("--welch compares both labels; drop --label");

    std::vector<DistanceMatrix> matrices;
    for (Label l : labels) {
        DistanceMatrix m = distance_matrix(report, l, g);
        const std::string stem = "distances-" + label_slug(l);
        emit(out_dir(o) / (stem + ".csv"), to_csv(m));
        emit(out_dir(o) / (stem + "-summary.csv"), to_csv(m.summary()));
        std::cout << to_string(l) << ":\n" << to_csv(m.summary());
        matrices.push_back(std::move(m));
    }
    if (o.welch) {
        const WelchResult w = welch_t_test(matrices[0].pairwise(), matrices[1].pairwise());
        emit(out_dir(o) / "welch.csv", to_csv(w));
        std::cout << "welch:\n" << to_csv(w);
    }
    return 0;
}

int cmd_consensus(const Options& o) {
    const RunReport report = load_reports(o);
    const Label l = parse_label(o.label);
    const ConsensusHistogram h = consensus_distribution(report, l);
    emit(out_dir(o) / ("consensus-" + label_slug(l) + ".csv"), to_csv(h));
    std::cout << to_csv(h);
    return 0;
}

int cmd_tables(const Options& o) {
    const RunReport report = load_reports(o);
    std::vector<Label> labels;
    if (!o.label.empty())
        labels.push_back(parse_label(o.label));
    else
        labels = {Label::well_formed, Label::ill_formed};
    for (Label l : labels) {
        const OutcomeTable t = outcome_table(report, l);
        if (t.rows.empty()) continue;
        emit(out_dir(o) / ("table-" + label_slug(l) + ".csv"), to_csv(t));
        emit(out_dir(o) / ("table-" + label_slug(l) + ".txt"), to_text(t));
        std::cout << to_string(l) << "\n" << to_text(t) << "\n";
    }
    return 0;
}

int cmd_probe(const Options& o) {
    std::vector<ProbeReport> reports;
    for (const auto& b : backends(o)) reports.push_back(probe_number_types(b, budget(o)));
    const std::string csv = to_csv(reports);
    emit(out_dir(o) / "probe-types.csv", csv);
    std::cout << csv;
    return 0;
}

MvStrategy strategy(const Options& o) {
    if (o.strategy == "majority") return Majority{};
    if (o.strategy == "strict-first") return StrictFirst{o.strict_id};
    if (o.strategy == "unanimous-reject") return UnanimousReject{};
    if (o.strategy == "first-accepting") {
        if (o.order.empty()) throw UsageError("first-accepting needs --order");
        return FirstAccepting{o.order};
    }
    throw UsageError("unknown strategy \"" + o.strategy + "\"");
}

int cmd_mv_parse(const Options& o) {
    const MvStrategy s = strategy(o);
    const auto selected = backends(o);
    auto decoded = decode_check(read_file(o.input));
    if (auto* err = std::get_if<EncodingError>(&decoded)) throw IoError(o.input + ": " + err->message);
    MvResult r;
    try {
        r = mv_parse(std::get<std::string>(decoded), selected, s, budget(o));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::cout << canonical_serialize(to_value(r)) << "\n";
    return o.fail_on_reject && !r.accepted ? kRejected : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Differential testing of JSON parsers"};
    app.require_subcommand(1);
    Options o;

    auto manifest = [&](CLI::App* c) { c->add_option("--manifest", o.manifest, "Corpus manifest (JSON lines)"); };
    auto out = [&](CLI::App* c) {
        c->add_option("--out", o.out, "Output directory (default: $JDIV_OUT_DIR or .)");
    };
    auto selection = [&](CLI::App* c) {
        c->add_option("--backends", o.backends, "Backend selection, e.g. builtin:*,external:nlohmann");
        c->add_option("--seed", o.seed, "Seed for the shuffled-keys backend");
        c->add_option("--budget-ms", o.budget_ms, "Per-call time budget; 0 disables it");
        c->add_flag("--isolate", o.isolate, "Run built-in backends in worker processes too");
    };
    auto reports = [&](CLI::App* c) {
        c->add_option("--report", o.reports, "Run report (repeatable)")->required();
    };

    auto* ingest = app.add_subcommand("ingest", "Ingest a manifest and summarise the corpus");
    manifest(ingest);
    out(ingest);

    auto* run_wf = app.add_subcommand("run-wellformed", "Run backends over the well-formed files");
    auto* run_if = app.add_subcommand("run-illformed", "Run backends over the ill-formed files");
    for (auto* c : {run_wf, run_if}) {
        manifest(c);
        out(c);
        selection(c);
        c->add_option("--workers", o.workers, "Parallel cells")->check(CLI::PositiveNumber);
    }

    auto* distances = app.add_subcommand("distances", "Pairwise behavioral distances");
    reports(distances);
    out(distances);
    distances->add_option("--label", o.label, "well-formed or ill-formed (default: both)");
    distances->add_flag("--fine", o.fine, "Compare fine labels instead of outcome classes");
    distances->add_flag("--welch", o.welch, "Welch test between the two labels' distance samples");

    auto* consensus = app.add_subcommand("consensus", "Agreement-size histogram");
    reports(consensus);
    out(consensus);
    consensus->add_option("--label", o.label, "well-formed or ill-formed")->required();

    auto* tables = app.add_subcommand("tables", "Per-backend outcome tables");
    reports(tables);
    out(tables);
    tables->add_option("--label", o.label, "well-formed or ill-formed (default: both)");

    auto* probe = app.add_subcommand("probe-types", "Probe number representations");
    out(probe);
    selection(probe);

    auto* mv = app.add_subcommand("mv-parse", "Parse one file with several backends and vote");
    selection(mv);
    mv->add_option("file", o.input, "Input file")->required();
    mv->add_option("--strategy", o.strategy, "majority, strict-first, first-accepting or unanimous-reject");
    mv->add_option("--order", o.order, "Backend order for first-accepting")->delimiter(',');
    mv->add_option("--strict-id", o.strict_id, "Designated backend for strict-first");
    mv->add_flag("--fail-on-reject", o.fail_on_reject, "Exit 3 when the decision is a rejection");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*ingest) return cmd_ingest(o);
        if (*run_wf) return cmd_run(o, Label::well_formed);
        if (*run_if) return cmd_run(o, Label::ill_formed);
        if (*distances) return cmd_distances(o);
        if (*consensus) return cmd_consensus(o);
        if (*tables) return cmd_tables(o);
        if (*probe) return cmd_probe(o);
        if (*mv) return cmd_mv_parse(o);
    } catch (const UsageError& e) {
        std::cerr << "jdiv: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "jdiv: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "jdiv: " << e.what() << "\n";
        return kIo;
    }
    return kUsage;
}
