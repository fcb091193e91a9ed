#include "jdiv/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace jdiv {

namespace {

// file_id -> record, for one backend.
using Column = std::map<std::string, const BehaviorRecord*>;

Column column(const RunReport& report, std::string_view backend, std::optional<Label> label) {
    Column out;
    for (const auto& r : report.records) {
        if (r.backend_id != backend || (label && r.label != *label)) continue;
        if (!out.emplace(r.file_id, &r).second)
            throw std::invalid_argument("backend " + r.backend_id + " has two records for file " + r.file_id);
    }
    return out;
}

bool same_outcome(const BehaviorRecord& a, const BehaviorRecord& b, Granularity g) {
    return g == Granularity::outcome_class ? a.outcome == b.outcome : a.fine == b.fine;
}

double distance(const Column& a, const Column& b, Granularity g, std::string_view l1, std::string_view l2) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("no records for " + std::string(a.empty() ? l1 : l2));
    if (a.size() != b.size())
        throw std::invalid_argument(std::string(l1) + " and " + std::string(l2) + " cover different files");
    std::size_t differ = 0;
    auto ib = b.begin();
    for (auto ia = a.begin(); ia != a.end(); ++ia, ++ib) {
        if (ia->first != ib->first)
            throw std::invalid_argument(std::string(l1) + " and " + std::string(l2) + " cover different files");
        differ += !same_outcome(*ia->second, *ib->second, g);
    }
    return static_cast<double>(differ) / static_cast<double>(a.size());
}

std::vector<std::string> backends_with(const RunReport& report, Label label) {
    std::vector<std::string> ids;
    for (const auto& r : report.records)
        if (r.label == label && std::find(ids.begin(), ids.end(), r.backend_id) == ids.end())
            ids.push_back(r.backend_id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-12;
    constexpr int max_iter = 100000;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw std::runtime_error("incomplete beta continued fraction did not converge");
}

double mean_of(std::span<const double> xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance_of(std::span<const double> xs, double mean) {
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(xs.size() - 1);
}

std::string fixed1(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 1);
    return std::string(buf, res.ptr);
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

double behavioral_distance(std::string_view l1, std::string_view l2, const RunReport& report,
                           std::optional<Label> label, Granularity granularity) {
    return distance(column(report, l1, label), column(report, l2, label), granularity, l1, l2);
}

std::vector<double> DistanceMatrix::pairwise() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j) out.push_back(values[i][j]);
    return out;
}

DistanceSummary DistanceMatrix::summary() const {
    std::vector<double> xs = pairwise();
    DistanceSummary s;
    s.pairs = xs.size();
    if (xs.empty()) return s;
    std::sort(xs.begin(), xs.end());
    s.min = xs.front();
    s.max = xs.back();
    const std::size_t n = xs.size();
    s.median = n % 2 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
    s.mean = mean_of(xs);
    return s;
}

DistanceMatrix distance_matrix(const RunReport& report, Label label, Granularity granularity) {
    DistanceMatrix m;
    m.ids = backends_with(report, label);
    if (m.ids.empty()) throw std::invalid_argument("report has no " + std::string(to_string(label)) + " records");
    std::vector<Column> cols;
    for (const auto& id : m.ids) cols.push_back(column(report, id, label));
    const std::size_t n = m.ids.size();
    m.values.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            m.values[i][j] = m.values[j][i] = distance(cols[i], cols[j], granularity, m.ids[i], m.ids[j]);
    return m;
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete beta needs a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                            b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_tailed(double t, double df) {
    if (!(df > 0.0)) throw std::invalid_argument("degrees of freedom must be positive");
    if (std::isinf(t)) return 0.0;
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("Welch test needs at least two values per sample");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    // A constant sample has exactly zero variance; summing would leave
    // rounding noise in its mean.
    auto constant = [](std::span<const double> s) {
        return std::adjacent_find(s.begin(), s.end(), std::not_equal_to<>()) == s.end();
    };
    const bool ca = constant(a);
    const bool cb = constant(b);
    const double ma = ca ? a.front() : mean_of(a);
    const double mb = cb ? b.front() : mean_of(b);
    const double qa = ca ? 0.0 : variance_of(a, ma) / na;
    const double qb = cb ? 0.0 : variance_of(b, mb) / nb;
    const double se2 = qa + qb;
    WelchResult r;
    if (se2 == 0.0) {
        if (ma != mb) throw std::invalid_argument("both samples are constant with different means");
        r.t = 0.0;
        r.df = na + nb - 2.0;
        r.p = 1.0;
        return r;
    }
    r.t = (ma - mb) / std::sqrt(se2);
    r.df = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
    r.p = student_t_two_tailed(r.t, r.df);
    return r;
}

ConsensusHistogram consensus_distribution(const RunReport& report, Label label) {
    const std::vector<std::string> ids = backends_with(report, label);
    if (ids.empty()) throw std::invalid_argument("report has no " + std::string(to_string(label)) + " records");

    // file_id -> per-class backend count
    std::map<std::string, std::array<std::size_t, 3>> per_file;
    std::map<std::string, std::size_t> coverage;
    for (const auto& id : ids) {
        for (const auto& [file, rec] : column(report, id, label)) {
            per_file[file][static_cast<std::size_t>(rec->outcome)] += 1;
            coverage[file] += 1;
        }
    }
    for (const auto& [file, n] : coverage)
        if (n != ids.size()) throw std::invalid_argument("file " + file + " is not covered by every backend");

    ConsensusHistogram h;
    h.backends = ids.size();
    h.files = per_file.size();
    std::map<std::pair<std::size_t, int>, std::size_t> buckets;
    for (const auto& [file, counts] : per_file)
        for (std::size_t c = 0; c < counts.size(); ++c)
            if (counts[c] > 0) buckets[{counts[c], static_cast<int>(c)}] += 1;
    for (const auto& [key, files] : buckets)
        h.buckets.push_back(ConsensusBucket{key.first, static_cast<OutcomeClass>(key.second), files,
                                            static_cast<double>(files) / static_cast<double>(h.files)});
    return h;
}

std::vector<FineLabel> fine_columns(Label label) {
    std::vector<FineLabel> out;
    for (FineLabel f : kAllFineLabels)
        if (classify(label, f)) out.push_back(f);
    return out;
}

double percent(std::size_t part, std::size_t whole) {
    if (whole == 0) return 0.0;
    return std::round(1000.0 * static_cast<double>(part) / static_cast<double>(whole)) / 10.0;
}

OutcomeTable outcome_table(const RunReport& report, Label label) {
    OutcomeTable t;
    t.label = label;
    t.population.name = "Population";
    std::map<std::string, std::pair<std::array<bool, 8>, std::array<bool, 3>>> seen;
    for (const auto& id : backends_with(report, label)) {
        OutcomeRow row;
        row.name = id;
        for (const auto& [file, rec] : column(report, id, label)) {
            row.fine[static_cast<std::size_t>(rec->fine)] += 1;
            row.outcome[static_cast<std::size_t>(rec->outcome)] += 1;
            row.total += 1;
            auto& s = seen[file];
            s.first[static_cast<std::size_t>(rec->fine)] = true;
            s.second[static_cast<std::size_t>(rec->outcome)] = true;
        }
        t.rows.push_back(std::move(row));
    }
    t.population.total = seen.size();
    for (const auto& [file, s] : seen) {
        for (std::size_t k = 0; k < 8; ++k) t.population.fine[k] += s.first[k];
        for (std::size_t k = 0; k < 3; ++k) t.population.outcome[k] += s.second[k];
    }
    return t;
}

std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string to_csv(const DistanceMatrix& m) {
    std::string out = "backend";
    for (const auto& id : m.ids) out += "," + csv_field(id);
    out += '\n';
    for (std::size_t i = 0; i < m.ids.size(); ++i) {
        out += csv_field(m.ids[i]);
        for (double v : m.values[i]) out += "," + format_real(v);
        out += '\n';
    }
    return out;
}

std::string to_csv(const DistanceSummary& s) {
    return "pairs,min,median,mean,max\n" + std::to_string(s.pairs) + "," + format_real(s.min) + "," +
           format_real(s.median) + "," + format_real(s.mean) + "," + format_real(s.max) + "\n";
}

std::string to_csv(const WelchResult& w) {
    return "t,df,p\n" + format_real(w.t) + "," + format_real(w.df) + "," + format_real(w.p) + "\n";
}

std::string to_csv(const ConsensusHistogram& h) {
    std::string out = "k,class,share\n";
    for (const auto& b : h.buckets)
        out += std::to_string(b.k) + "," + std::string(to_string(b.outcome)) + "," + format_real(b.share) + "\n";
    return out;
}

namespace {

std::vector<std::vector<std::string>> table_cells(const OutcomeTable& t) {
    const auto fines = fine_columns(t.label);
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> head{"backend"};
    for (FineLabel f : fines) head.emplace_back(to_string(f));
    for (OutcomeClass c : kAllOutcomeClasses) {
        head.emplace_back(to_string(c));
        head.emplace_back(std::string(to_string(c)) + "%");
    }
    head.emplace_back("files");
    rows.push_back(std::move(head));
    auto emit = [&](const OutcomeRow& r) {
        std::vector<std::string> cells{r.name};
        for (FineLabel f : fines) cells.push_back(std::to_string(r.fine[static_cast<std::size_t>(f)]));
        for (OutcomeClass c : kAllOutcomeClasses) {
            const std::size_t n = r.outcome[static_cast<std::size_t>(c)];
            cells.push_back(std::to_string(n));
            cells.push_back(fixed1(percent(n, r.total)));
        }
        cells.push_back(std::to_string(r.total));
        rows.push_back(std::move(cells));
    };
    for (const auto& r : t.rows) emit(r);
    emit(t.population);
    return rows;
}

}  // namespace

std::string to_csv(const OutcomeTable& t) {
    std::string out;
    for (const auto& row : table_cells(t)) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            out += csv_field(row[k]);
        }
        out += '\n';
    }
    return out;
}

std::string to_text(const OutcomeTable& t) {
    const auto rows = table_cells(t);
    std::vector<std::size_t> width(rows.front().size(), 0);
    for (const auto& row : rows)
        for (std::size_t k = 0; k < row.size(); ++k) width[k] = std::max(width[k], row[k].size());
    std::string out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r + 1 == rows.size()) {
            std::size_t line = 0;
            for (std::size_t w : width) line += w + 2;
            out += std::string(line - 2, '-') + '\n';
        }
        for (std::size_t k = 0; k < rows[r].size(); ++k) {
            const std::string& cell = rows[r][k];
            if (k == 0) {
                out += cell + std::string(width[k] - cell.size(), ' ');
            } else {
                out += "  " + std::string(width[k] - cell.size(), ' ') + cell;
            }
        }
        out += '\n';
    }
    return out;
}

}  // namespace jdiv
