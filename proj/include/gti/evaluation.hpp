#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gti/common.hpp"
#include "gti/query.hpp"

namespace gti {

/// Reciprocal rank of the first relevant document within the top k, else 0.
template <typename Id>
[[nodiscard]] auto mrr_at_k(std::span<Id const> run, std::unordered_set<Id> const& relevant, std::size_t k)
    -> double
{
    if (k == 0) {
        throw DomainError("k must be at least 1");
    }
    auto n = std::min(k, run.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (relevant.count(run[i]) > 0) {
            return 1.0 / static_cast<double>(i + 1);
        }
    }
    return 0.0;
}

/// Fraction of the relevant documents found in the top k. Throws DomainError
/// when nothing is relevant.
template <typename Id>
[[nodiscard]] auto recall_at_k(std::span<Id const> run, std::unordered_set<Id> const& relevant, std::size_t k)
    -> double
{
    if (relevant.empty()) {
        throw DomainError("recall undefined without relevant documents");
    }
    auto n = std::min(k, run.size());
    std::unordered_set<Id> found;
    for (std::size_t i = 0; i < n; ++i) {
        if (relevant.count(run[i]) > 0) {
            found.insert(run[i]);
        }
    }
    return static_cast<double>(found.size()) / static_cast<double>(relevant.size());
}

/// nDCG@k with gain 2^grade - 1 and discount log2(rank + 1), normalised by the
/// ideal ordering of all judged documents. Throws DomainError without a positive grade.
template <typename Id>
[[nodiscard]] auto ndcg_at_k(std::span<Id const> run, std::unordered_map<Id, int> const& grades, std::size_t k)
    -> double
{
    std::vector<int> ideal;
    for (auto const& [id, g] : grades) {
        if (g > 0) {
            ideal.push_back(g);
        }
    }
    if (ideal.empty()) {
        throw DomainError("nDCG undefined without a positive grade");
    }
    auto gain = [](int g) { return std::exp2(static_cast<double>(g)) - 1.0; };
    auto discount = [](std::size_t rank) { return std::log2(static_cast<double>(rank) + 1.0); };
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    double idcg = 0.0;
    for (std::size_t i = 0; i < std::min(k, ideal.size()); ++i) {
        idcg += gain(ideal[i]) / discount(i + 1);
    }
    double dcg = 0.0;
    for (std::size_t i = 0; i < std::min(k, run.size()); ++i) {
        auto it = grades.find(run[i]);
        if (it != grades.end() && it->second > 0) {
            dcg += gain(it->second) / discount(i + 1);
        }
    }
    return dcg / idcg;
}

template <typename Id>
[[nodiscard]] auto ndcg_at_10(std::span<Id const> run, std::unordered_map<Id, int> const& grades) -> double
{
    return ndcg_at_k(run, grades, 10);
}

struct LatencyStats {
    double mean = 0.0;
    double p99 = 0.0;
};

/// Arithmetic mean and nearest-rank 99th percentile. Throws DomainError when empty.
[[nodiscard]] auto latency_stats(std::span<double const> samples) -> LatencyStats;

/// qid -> (docid -> grade).
using Qrels = std::map<std::string, std::unordered_map<std::string, int>>;

struct RunLine {
    std::string query_id;
    std::string doc;
    std::size_t rank = 0;
    double score = 0.0;
    std::string tag;

    friend auto operator==(RunLine const&, RunLine const&) -> bool = default;
};

/// Qrels in TREC format: `qid 0 docid grade`.
[[nodiscard]] auto read_qrels(std::istream& in) -> Qrels;
[[nodiscard]] auto read_qrels(std::filesystem::path const& path) -> Qrels;
void write_qrels(std::ostream& out, Qrels const& qrels);

/// Run in TREC format: `qid Q0 docid rank score tag`.
[[nodiscard]] auto read_run(std::istream& in) -> std::vector<RunLine>;
[[nodiscard]] auto read_run(std::filesystem::path const& path) -> std::vector<RunLine>;
void write_run(std::ostream& out, std::span<RunLine const> lines);

/// Flatten query results into TREC lines with 1-based ranks.
[[nodiscard]] auto to_run_lines(std::span<QueryRun const> runs, std::string const& tag) -> std::vector<RunLine>;

enum class MetricKind { Mrr, Recall, Ndcg };

struct MetricSpec {
    MetricKind kind = MetricKind::Mrr;
    std::size_t k = 10;

    [[nodiscard]] auto name() const -> std::string;
};

/// Parses `mrr@K`, `recall@K` and `ndcg@10`.
[[nodiscard]] auto parse_metric(std::string const& text) -> MetricSpec;

struct EvalReport {
    std::vector<MetricSpec> metrics;
    /// Per query, one value per metric; nullopt where the metric is undefined.
    std::map<std::string, std::vector<std::optional<double>>> per_query;
    /// Mean over the queries where the metric is defined.
    std::vector<double> aggregate;
    std::vector<std::size_t> evaluated;
    std::optional<LatencyStats> latency;
    std::optional<EffortCounters> counters;
};

/// Evaluate every query present in both the run and the qrels. Throws Error
/// ("no evaluable queries") when the two share no query.
[[nodiscard]] auto evaluate(
    std::span<RunLine const> run, Qrels const& qrels, std::span<MetricSpec const> metrics) -> EvalReport;

void write_report_csv(std::ostream& out, EvalReport const& report);
void write_report_table(std::ostream& out, EvalReport const& report);

}  // namespace gti
