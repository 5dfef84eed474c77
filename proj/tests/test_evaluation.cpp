#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "gti/batch.hpp"
#include "gti/evaluation.hpp"
#include "support.hpp"

using namespace gti;

namespace {

using Ids = std::vector<std::string>;

auto span_of(Ids const& v) -> std::span<std::string const>
{
    return v;
}

}  // namespace

TEST_CASE("MRR fixtures")
{
    Ids run = {"a", "b", "c", "d"};
    CHECK(mrr_at_k(span_of(run), {"c"}, 10) == doctest::Approx(1.0 / 3.0));
    CHECK(mrr_at_k(span_of(run), {"b", "d"}, 10) == 0.5);
    CHECK(mrr_at_k(span_of(run), {"d"}, 3) == 0.0);
    CHECK(mrr_at_k(span_of(run), {"x"}, 10) == 0.0);
    CHECK_THROWS_AS((void)mrr_at_k(span_of(run), {"a"}, 0), DomainError);
}

TEST_CASE("recall fixtures")
{
    Ids run = {"a", "b", "c", "d"};
    CHECK(recall_at_k(span_of(run), {"a", "d", "z"}, 2) == doctest::Approx(1.0 / 3.0));
    CHECK(recall_at_k(span_of(run), {"a", "d", "z"}, 1000) == doctest::Approx(2.0 / 3.0));
    Ids dup = {"a", "a"};
    CHECK(recall_at_k(span_of(dup), {"a", "b"}, 10) == 0.5);
    CHECK_THROWS_AS((void)recall_at_k(span_of(run), {}, 10), DomainError);
}

TEST_CASE("nDCG fixtures")
{
    std::unordered_map<std::string, int> grades = {{"A", 3}, {"B", 1}};
    Ids run = {"B", "A"};
    // Written out: DCG = 1/log2(2) + 7/log2(3); ideal = 7/log2(2) + 1/log2(3).
    double dcg = 1.0 + 7.0 / std::log2(3.0);
    double idcg = 7.0 + 1.0 / std::log2(3.0);
    CHECK(ndcg_at_10(span_of(run), grades) == doctest::Approx(dcg / idcg).epsilon(1e-12));
    CHECK(ndcg_at_10(span_of(run), grades) == doctest::Approx(0.7098).epsilon(1e-4));
    Ids ideal = {"A", "B"};
    CHECK(ndcg_at_10(span_of(ideal), grades) == doctest::Approx(1.0));
    Ids none = {"C"};
    CHECK(ndcg_at_10(span_of(none), grades) == 0.0);
    std::unordered_map<std::string, int> zero = {{"A", 0}};
    CHECK_THROWS_AS((void)ndcg_at_10(span_of(run), zero), DomainError);
}

TEST_CASE("nDCG stays in [0, 1] and is 1 for the ideal order")
{
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 300; ++trial) {
        std::unordered_map<std::string, int> grades;
        Ids pool;
        for (int i = 0; i < 15; ++i) {
            pool.push_back("d" + std::to_string(i));
            grades[pool.back()] = std::uniform_int_distribution<int>(0, 3)(rng);
        }
        grades["d0"] = 2;
        std::shuffle(pool.begin(), pool.end(), rng);
        auto v = ndcg_at_10(span_of(pool), grades);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-12);
        std::stable_sort(pool.begin(), pool.end(), [&](auto const& a, auto const& b) { return grades[a] > grades[b]; });
        CHECK(ndcg_at_10(span_of(pool), grades) == doctest::Approx(1.0));
    }
}

TEST_CASE("latency statistics against a sorted reference")
{
    std::vector<double> one = {4.0};
    CHECK(latency_stats(one).mean == 4.0);
    CHECK(latency_stats(one).p99 == 4.0);
    std::vector<double> hundred(100);
    for (int i = 0; i < 100; ++i) {
        hundred[i] = 100.0 - i;
    }
    CHECK(latency_stats(hundred).p99 == 99.0);
    CHECK(latency_stats(hundred).mean == doctest::Approx(50.5));

    std::mt19937_64 rng(62);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> s(std::uniform_int_distribution<int>(1, 400)(rng));
        for (auto& x : s) {
            x = std::uniform_real_distribution<double>(0.0, 10.0)(rng);
        }
        auto sorted = s;
        std::sort(sorted.begin(), sorted.end());
        // Nearest rank: smallest value with at least 99% of samples at or below it.
        std::size_t idx = 0;
        while (100 * (idx + 1) < 99 * sorted.size()) {
            ++idx;
        }
        CHECK(latency_stats(s).p99 == sorted[idx]);
    }
    CHECK_THROWS_AS((void)latency_stats(std::vector<double>{}), DomainError);
}

TEST_CASE("TREC run and qrels round trips")
{
    std::vector<RunLine> lines = {
        {"1", "10", 1, 3.25, "bmw-2gti"},
        {"1", "7", 2, 0.1 + 0.2, "bmw-2gti"},
        {"2", "3", 1, -1e-300, "bmw-2gti"},
    };
    std::stringstream s;
    write_run(s, lines);
    auto back = read_run(s);
    CHECK(back == lines);

    Qrels qrels = {{"1", {{"10", 2}, {"11", 0}}}, {"q2", {{"3", 1}}}};
    std::stringstream q;
    write_qrels(q, qrels);
    CHECK(read_qrels(q) == qrels);

    std::istringstream bad("1 Q0 10 x 1.0 t\n");
    CHECK_THROWS_AS((void)read_run(bad), ParseError);
    std::istringstream badq("1 0 10\n");
    CHECK_THROWS_AS((void)read_qrels(badq), ParseError);
}

TEST_CASE("to_run_lines numbers ranks from one")
{
    QueryRun r;
    r.query_id = "5";
    r.results = {{42, 2.0}, {7, 1.0}};
    std::vector<QueryRun> runs = {r};
    auto lines = to_run_lines(runs, "tag");
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == RunLine{"5", "42", 1, 2.0, "tag"});
    CHECK(lines[1].rank == 2);
}

TEST_CASE("metric parsing")
{
    CHECK(parse_metric("mrr@10").kind == MetricKind::Mrr);
    CHECK(parse_metric("recall@1000").k == 1000);
    CHECK(parse_metric("ndcg@10").kind == MetricKind::Ndcg);
    CHECK(parse_metric("recall@5").name() == "recall@5");
    CHECK_THROWS_AS((void)parse_metric("ndcg@5"), DomainError);
    CHECK_THROWS_AS((void)parse_metric("map@10"), DomainError);
    CHECK_THROWS_AS((void)parse_metric("mrr"), DomainError);
    CHECK_THROWS_AS((void)parse_metric("mrr@0"), DomainError);
}

TEST_CASE("evaluate aggregates over evaluable queries")
{
    std::vector<RunLine> run = {
        {"1", "b", 2, 1.0, "t"}, {"1", "a", 1, 2.0, "t"},  // out of order on purpose
        {"2", "x", 1, 1.0, "t"},
        {"3", "y", 1, 1.0, "t"},
    };
    Qrels qrels = {{"1", {{"b", 1}}}, {"2", {{"x", 0}}}, {"9", {{"z", 1}}}};
    std::vector<MetricSpec> metrics = {parse_metric("mrr@10"), parse_metric("recall@1")};
    auto report = evaluate(run, qrels, metrics);
    CHECK(report.per_query.size() == 2);
    CHECK(report.evaluated[0] == 1);
    CHECK(report.aggregate[0] == 0.5);
    CHECK(report.aggregate[1] == 0.0);
    CHECK_FALSE(report.per_query.at("2")[0].has_value());

    Qrels other = {{"7", {{"a", 1}}}};
    CHECK_THROWS_WITH_AS((void)evaluate(run, other, metrics), doctest::Contains("no evaluable queries"), Error);
}
