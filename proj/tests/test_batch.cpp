#include <doctest.h>

#include <algorithm>

#include "gti/batch.hpp"
#include "gti/synthetic.hpp"
#include "support.hpp"

using namespace gti;

namespace {

void check_same(std::vector<QueryRun> const& a, std::vector<QueryRun> const& b)
{
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].query_id == b[i].query_id);
        CHECK(a[i].results == b[i].results);
        CHECK(a[i].counters.docs_fully_scored == b[i].counters.docs_fully_scored);
        CHECK(a[i].counters.docs_locally_pruned == b[i].counters.docs_locally_pruned);
        CHECK(a[i].counters.postings_touched == b[i].counters.postings_touched);
    }
}

}  // namespace

TEST_CASE("query id ordering")
{
    CHECK(query_id_less("2", "10"));
    CHECK_FALSE(query_id_less("10", "2"));
    CHECK(query_id_less("10", "a"));
    CHECK(query_id_less("abc", "abd"));
    CHECK_FALSE(query_id_less("7", "7"));
}

TEST_CASE("parallel batch equals the serial reference")
{
    ZipfCorpusSpec spec;
    spec.num_docs = 3000;
    spec.vocab = 2000;
    spec.topics = 40;
    auto index = build_index(zipf_corpus(spec), BuildOptions{});
    auto queries = zipf_queries(spec, 60, 6, 3);
    std::reverse(queries.begin(), queries.end());

    for (auto algo : {Algorithm::MaxScore2Gti, Algorithm::Bmw2Gti, Algorithm::Exhaustive}) {
        TraversalConfig config;
        config.algorithm = algo;
        config.coeffs = {1.0, 0.3, 0.05};
        auto serial = run_batch_serial(queries, index, config);
        for (std::size_t i = 1; i < serial.size(); ++i) {
            CHECK(query_id_less(serial[i - 1].query_id, serial[i].query_id));
        }
        for (int threads : {0, 2, 4}) {
            check_same(run_batch(queries, index, config, threads), serial);
        }
    }
}

TEST_CASE("exhaustive dispatch ranks by the gamma combination")
{
    std::mt19937_64 rng(71);
    auto index = build_index(test::small_random_corpus(rng, 200, 8), BuildOptions{});
    TraversalConfig config;
    config.algorithm = Algorithm::Exhaustive;
    config.coeffs = {0.2, 0.9, 0.5};
    config.k = 7;
    auto exh = run_traversal(test::query({1, 2, 3}), index, config);
    config.algorithm = Algorithm::MaxScore2Gti;
    config.coeffs = {0.5, 0.5, 0.5};
    auto ms = run_traversal(test::query({1, 2, 3}), index, config);
    CHECK(exh.results == ms.results);
    CHECK(run_batch(std::vector<Query>{}, index, config, 2).empty());
}
