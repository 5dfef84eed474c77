#include "gti/evaluation.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "gti/batch.hpp"

namespace gti {

namespace {

    auto split_ws(std::string const& line) -> std::vector<std::string>
    {
        std::istringstream in(line);
        std::vector<std::string> out;
        std::string tok;
        while (in >> tok) {
            out.push_back(tok);
        }
        return out;
    }

    template <typename T>
    auto parse_field(std::string const& s, T& out) -> bool
    {
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc() && ptr == s.data() + s.size();
    }

    auto open_in(std::filesystem::path const& path, char const* what) -> std::ifstream
    {
        std::ifstream in(path);
        if (!in) {
            throw Error(std::string("cannot open ") + what + " " + path.string());
        }
        return in;
    }

}  // namespace

auto latency_stats(std::span<double const> samples) -> LatencyStats
{
    if (samples.empty()) {
        throw DomainError("latency statistics need at least one sample");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    LatencyStats s;
    s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(sorted.size())));
    s.p99 = sorted[std::max<std::size_t>(rank, 1) - 1];
    return s;
}

auto read_qrels(std::istream& in) -> Qrels
{
    Qrels qrels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto f = split_ws(line);
        if (f.empty()) {
            continue;
        }
        int grade = 0;
        if (f.size() != 4 || !parse_field(f[3], grade) || grade < 0) {
            throw ParseError("qrels line " + std::to_string(lineno), "expected 'qid 0 docid grade'");
        }
        qrels[f[0]][f[2]] = grade;
    }
    return qrels;
}

auto read_qrels(std::filesystem::path const& path) -> Qrels
{
    auto in = open_in(path, "qrels");
    return read_qrels(in);
}

void write_qrels(std::ostream& out, Qrels const& qrels)
{
    for (auto const& [qid, docs] : qrels) {
        std::vector<std::pair<std::string, int>> sorted(docs.begin(), docs.end());
        std::sort(sorted.begin(), sorted.end());
        for (auto const& [doc, grade] : sorted) {
            out << qid << " 0 " << doc << ' ' << grade << '\n';
        }
    }
}

auto read_run(std::istream& in) -> std::vector<RunLine>
{
    std::vector<RunLine> lines;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto f = split_ws(line);
        if (f.empty()) {
            continue;
        }
        RunLine r;
        if (f.size() != 6 || !parse_field(f[3], r.rank) || !parse_field(f[4], r.score)) {
            throw ParseError(
                "run line " + std::to_string(lineno), "expected 'qid Q0 docid rank score tag'");
        }
        r.query_id = f[0];
        r.doc = f[2];
        r.tag = f[5];
        lines.push_back(std::move(r));
    }
    return lines;
}

auto read_run(std::filesystem::path const& path) -> std::vector<RunLine>
{
    auto in = open_in(path, "run");
    return read_run(in);
}

void write_run(std::ostream& out, std::span<RunLine const> lines)
{
    auto old = out.precision(std::numeric_limits<double>::max_digits10);
    for (auto const& r : lines) {
        out << r.query_id << " Q0 " << r.doc << ' ' << r.rank << ' ' << r.score << ' ' << r.tag << '\n';
    }
    out.precision(old);
}

auto to_run_lines(std::span<QueryRun const> runs, std::string const& tag) -> std::vector<RunLine>
{
    std::vector<RunLine> lines;
    for (auto const& run : runs) {
        for (std::size_t i = 0; i < run.results.size(); ++i) {
            lines.push_back(
                {run.query_id, std::to_string(run.results[i].doc), i + 1, run.results[i].score, tag});
        }
    }
    return lines;
}

auto MetricSpec::name() const -> std::string
{
    switch (kind) {
    case MetricKind::Mrr: return "mrr@" + std::to_string(k);
    case MetricKind::Recall: return "recall@" + std::to_string(k);
    case MetricKind::Ndcg: return "ndcg@" + std::to_string(k);
    }
    return "unknown";
}

auto parse_metric(std::string const& text) -> MetricSpec
{
    auto at = text.find('@');
    if (at == std::string::npos) {
        throw DomainError("metric must look like name@K, got '" + text + "'");
    }
    auto name = text.substr(0, at);
    MetricSpec spec;
    if (!parse_field(text.substr(at + 1), spec.k) || spec.k == 0) {
        throw DomainError("bad cutoff in metric '" + text + "'");
    }
    if (name == "mrr") {
        spec.kind = MetricKind::Mrr;
    } else if (name == "recall") {
        spec.kind = MetricKind::Recall;
    } else if (name == "ndcg") {
        if (spec.k != 10) {
            throw DomainError("only ndcg@10 is supported");
        }
        spec.kind = MetricKind::Ndcg;
    } else {
        throw DomainError("unknown metric '" + name + "'");
    }
    return spec;
}

auto evaluate(std::span<RunLine const> run, Qrels const& qrels, std::span<MetricSpec const> metrics)
    -> EvalReport
{
    std::map<std::string, std::vector<RunLine const*>> by_query;
    for (auto const& line : run) {
        by_query[line.query_id].push_back(&line);
    }
    EvalReport report;
    report.metrics.assign(metrics.begin(), metrics.end());
    report.aggregate.assign(metrics.size(), 0.0);
    report.evaluated.assign(metrics.size(), 0);

    for (auto& [qid, lines] : by_query) {
        auto judged = qrels.find(qid);
        if (judged == qrels.end()) {
            continue;
        }
        std::stable_sort(lines.begin(), lines.end(), [](auto const* a, auto const* b) {
            return a->rank < b->rank;
        });
        std::vector<std::string> docs;
        docs.reserve(lines.size());
        for (auto const* l : lines) {
            docs.push_back(l->doc);
        }
        std::unordered_set<std::string> relevant;
        for (auto const& [doc, grade] : judged->second) {
            if (grade > 0) {
                relevant.insert(doc);
            }
        }
        std::span<std::string const> ranked(docs);
        std::vector<std::optional<double>> values;
        for (auto const& m : metrics) {
            std::optional<double> v;
            if (!relevant.empty()) {
                switch (m.kind) {
                case MetricKind::Mrr: v = mrr_at_k(ranked, relevant, m.k); break;
                case MetricKind::Recall: v = recall_at_k(ranked, relevant, m.k); break;
                case MetricKind::Ndcg: v = ndcg_at_k(ranked, judged->second, m.k); break;
                }
            }
            values.push_back(v);
        }
        report.per_query.emplace(qid, std::move(values));
    }
    if (report.per_query.empty()) {
        throw Error("no evaluable queries: run and qrels share no query id");
    }
    for (auto const& [qid, values] : report.per_query) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i]) {
                report.aggregate[i] += *values[i];
                ++report.evaluated[i];
            }
        }
    }
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        if (report.evaluated[i] > 0) {
            report.aggregate[i] /= static_cast<double>(report.evaluated[i]);
        }
    }
    return report;
}

void write_report_csv(std::ostream& out, EvalReport const& report)
{
    auto old = out.precision(10);
    std::vector<std::pair<std::string, std::vector<std::optional<double>> const*>> rows;
    for (auto const& [qid, values] : report.per_query) {
        rows.emplace_back(qid, &values);
    }
    std::stable_sort(rows.begin(), rows.end(), [](auto const& a, auto const& b) {
        return query_id_less(a.first, b.first);
    });
    out << "query_id";
    for (auto const& m : report.metrics) {
        out << ',' << m.name();
    }
    out << '\n';
    for (auto const& [qid, values] : rows) {
        out << qid;
        for (auto const& v : *values) {
            out << ',';
            if (v) {
                out << *v;
            }
        }
        out << '\n';
    }
    out << "all";
    for (double a : report.aggregate) {
        out << ',' << a;
    }
    out << '\n';
    out.precision(old);
}

void write_report_table(std::ostream& out, EvalReport const& report)
{
    auto flags = out.flags();
    for (std::size_t i = 0; i < report.metrics.size(); ++i) {
        out << std::left << std::setw(14) << report.metrics[i].name() << std::right << std::fixed
            << std::setprecision(4) << report.aggregate[i] << "  (" << report.evaluated[i] << " queries)\n";
    }
    if (report.latency) {
        out << std::left << std::setw(14) << "MRT ms" << std::right << std::setprecision(3)
            << report.latency->mean << '\n';
        out << std::left << std::setw(14) << "P99 ms" << std::right << report.latency->p99 << '\n';
    }
    out.flags(flags);
}

}  // namespace gti
