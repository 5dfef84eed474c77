#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "gti/batch.hpp"
#include "gti/oracle.hpp"
#include "gti/synthetic.hpp"
#include "support.hpp"

using namespace gti;
using test::doc;

namespace {

/// Accumulate straight off the posting records, one doc at a time.
auto brute_ranking(Query const& q, DualIndex const& index, double x) -> RankedList
{
    std::map<DocId, double> acc;
    for (auto t : q.terms) {
        if (auto const* list = index.find(t)) {
            for (auto const& r : list->records) {
                acc[r.doc] += x * r.bm25 + (1.0 - x) * r.learned;
            }
        }
    }
    RankedList out;
    for (auto const& [d, s] : acc) {
        out.push_back({d, s});
    }
    std::sort(out.begin(), out.end(), ranks_before);
    return out;
}

auto entries(std::vector<std::pair<DocId, double>> const& v) -> RankedList
{
    RankedList out;
    for (auto const& [d, s] : v) {
        out.push_back({d, s});
    }
    return out;
}

/// Pairwise definition: every pair y orders correctly, x orders correctly too.
auto outmatches_pairs(RankedList const& x, RankedList const& y, std::unordered_set<DocId> const& rel) -> bool
{
    auto pos = [](RankedList const& r, DocId d) {
        return std::find_if(r.begin(), r.end(), [&](auto const& e) { return e.doc == d; }) - r.begin();
    };
    for (auto const& a : y) {
        for (auto const& b : y) {
            if (rel.count(a.doc) && !rel.count(b.doc) && pos(y, a.doc) < pos(y, b.doc)
                && pos(x, a.doc) > pos(x, b.doc)) {
                return false;
            }
        }
    }
    return true;
}

auto fixture() -> DualIndex
{
    // Learned weights reverse the BM25 order, so the combinations disagree.
    Corpus c = {
        doc(0, {{0, 3, 0.1}}),
        doc(1, {{0, 2, 0.8}}),
        doc(2, {{0, 1, 1.5}, {1, 1, 0.2}}),
        doc(3, {{1, 2, 2.5}}),
        doc(4, {{2, 1, 1.0}}),
    };
    return build_index(c, BuildOptions{});
}

}  // namespace

TEST_CASE("exhaustive_topk on a fixture")
{
    auto index = fixture();
    auto q = test::query({0, 1});
    auto want = brute_ranking(q, index, 0.0);
    REQUIRE(want.size() == 4);
    // Learned only: 3 (2.5), 2 (1.7), 1 (0.8), 0 (0.1).
    CHECK(want[0].doc == 3);
    CHECK(want[1].doc == 2);
    CHECK(want[1].score == doctest::Approx(1.7));
    auto top2 = exhaustive_topk(q, index, 0.0, 2);
    REQUIRE(top2.size() == 2);
    CHECK(top2[0] == want[0]);
    CHECK(top2[1].doc == 2);
    CHECK(exhaustive_topk(q, index, 0.0, 50).size() == 4);
    CHECK(document_score(q, index, 4, 0.5) == 0.0);
    CHECK(exhaustive_topk(test::query({99}), index, 0.5, 3).empty());
}

TEST_CASE("full_ranking and document_score agree with brute force")
{
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 200; ++trial) {
        auto index = build_index(test::small_random_corpus(rng, 80, 10), BuildOptions{});
        auto q = random_query(rng, 10, 5);
        double x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        auto want = brute_ranking(q, index, x);
        auto got = full_ranking(q, index, x);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(test::rel_close(got[i].score, want[i].score, 1e-12));
            CHECK(test::rel_close(document_score(q, index, want[i].doc, x), want[i].score, 1e-12));
        }
    }
}

TEST_CASE("two-stage retrieval")
{
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 200; ++trial) {
        auto index = build_index(test::small_random_corpus(rng, 80, 10), BuildOptions{});
        auto q = random_query(rng, 10, 5);
        auto k = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
        double a = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        double g = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        // Same coefficient on both stages is plain exhaustive retrieval.
        auto same = two_stage(q, index, a, a, k);
        auto exh = exhaustive_topk(q, index, a, k);
        REQUIRE(same.size() == exh.size());
        for (std::size_t i = 0; i < same.size(); ++i) {
            CHECK(same[i].doc == exh[i].doc);
        }
        // The re-ranked set is the alpha top k, scored by gamma, in gamma order.
        auto ts = two_stage(q, index, a, g, k);
        std::unordered_set<DocId> first;
        for (auto const& e : exh) {
            first.insert(e.doc);
        }
        REQUIRE(ts.size() == exh.size());
        for (std::size_t i = 0; i < ts.size(); ++i) {
            CHECK(first.count(ts[i].doc) == 1);
            CHECK(test::rel_close(ts[i].score, document_score(q, index, ts[i].doc, g), 1e-12));
            if (i > 0) {
                CHECK_FALSE(ranks_before(ts[i], ts[i - 1]));
            }
        }
    }
}

TEST_CASE("topk_set_unique")
{
    auto r = entries({{1, 5.0}, {2, 4.0}, {3, 4.0}, {4, 1.0}});
    CHECK(topk_set_unique(r, 1));
    CHECK_FALSE(topk_set_unique(r, 2));
    CHECK(topk_set_unique(r, 3));
    CHECK(topk_set_unique(r, 4));
    CHECK(topk_set_unique(r, 10));
    auto near = entries({{1, 1.0}, {2, 1.0 - 1e-15}});
    CHECK_FALSE(topk_set_unique(near, 1));
}

TEST_CASE("outmatches examples and pairwise definition")
{
    auto x = entries({{1, 2.0}, {2, 1.0}});
    auto y = entries({{2, 2.0}, {1, 1.0}});
    std::unordered_set<DocId> rel = {1};
    CHECK(outmatches(x, y, rel));
    CHECK_FALSE(outmatches(y, x, rel));
    CHECK(outmatches(x, x, rel));
    CHECK(outmatches(y, x, {}));

    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 500; ++trial) {
        auto n = std::uniform_int_distribution<int>(1, 7)(rng);
        std::vector<DocId> ids(n);
        std::iota(ids.begin(), ids.end(), 0);
        RankedList a;
        RankedList b;
        std::shuffle(ids.begin(), ids.end(), rng);
        for (int i = 0; i < n; ++i) {
            a.push_back({ids[i], double(n - i)});
        }
        std::shuffle(ids.begin(), ids.end(), rng);
        for (int i = 0; i < n; ++i) {
            b.push_back({ids[i], double(n - i)});
        }
        std::unordered_set<DocId> labels;
        for (auto d : ids) {
            if (std::bernoulli_distribution(0.4)(rng)) {
                labels.insert(d);
            }
        }
        CHECK(outmatches(a, b, labels) == outmatches_pairs(a, b, labels));
    }
}

TEST_CASE("property checks report their status")
{
    auto index = fixture();
    TraversalConfig config;
    config.k = 2;

    // All three coefficients different: mean-score check does not apply.
    config.coeffs = {1.0, 0.5, 0.0};
    CHECK(check_mean_score(test::query({0, 1}), index, config).status == CheckStatus::NotApplicable);

    // A tie across the boundary: two identical documents competing for one slot.
    Corpus tied = {doc(0, {{0, 1, 1.0}}), doc(1, {{0, 1, 1.0}}), doc(2, {{1, 1, 0.1}})};
    auto tie_index = build_index(tied, BuildOptions{});
    config.k = 1;
    config.coeffs = {1.0, 0.3, 0.05};
    CHECK(check_containment(test::query({0}), tie_index, config).status == CheckStatus::AssumptionUnmet);

    // Without any relevant document the chain holds trivially and the counts tie.
    config.k = 2;
    config.coeffs = {1.0, 0.3, 0.05};
    auto p3 = check_relevant_count(test::query({0, 1}), index, config, {});
    CHECK(p3.status == CheckStatus::Holds);
    CHECK(p3.gap == 0.0);
    CHECK(check_containment(test::query({0, 1}), index, config).status == CheckStatus::Holds);
    config.coeffs = {1.0, 1.0, 0.0};
    auto p2 = check_mean_score(test::query({0, 1}), index, config);
    CHECK(p2.status == CheckStatus::Holds);
    CHECK(p2.gap >= -1e-9);
    CHECK(std::string(check_status_name(CheckStatus::Violated)) == "violated");
}

TEST_CASE("containment holds on random instances for both traversals")
{
    std::mt19937_64 rng(54);
    std::size_t tested = 0;
    for (int trial = 0; trial < 200; ++trial) {
        RandomCorpusSpec spec;
        spec.max_docs = 300;
        auto inst = random_instance(rng, spec);
        auto index = build_index(inst.corpus, inst.build);
        auto q = random_query(rng, inst.vocab, 6);
        TraversalConfig config;
        config.k = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
        config.coeffs = {1.0, 0.3, 0.05};
        for (auto algo : {Algorithm::MaxScore2Gti, Algorithm::Bmw2Gti}) {
            config.algorithm = algo;
            auto out = check_containment(q, index, config);
            CHECK(out.status != CheckStatus::Violated);
            tested += out.status == CheckStatus::Holds ? 1 : 0;
        }
    }
    CHECK(tested > 100);
}
