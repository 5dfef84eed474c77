#include <doctest.h>

#include <algorithm>
#include <random>

#include "gti/blockmax.hpp"
#include "gti/oracle.hpp"
#include "gti/synthetic.hpp"
#include "support.hpp"

using namespace gti;
using test::doc;

namespace {

auto config(double a, double b, double g, std::size_t k, Algorithm algo = Algorithm::Bmw2Gti) -> TraversalConfig
{
    TraversalConfig c;
    c.coeffs = {a, b, g};
    c.k = k;
    c.algorithm = algo;
    return c;
}

}  // namespace

TEST_CASE("bmw_find_pivot examples")
{
    std::vector<Score> m = {3.0, 1.0};
    std::vector<DocId> d = {4, 9};
    CHECK(bmw_find_pivot(m, d, 2.5) == std::optional<std::size_t>(0));
    CHECK(bmw_find_pivot(m, d, 3.5) == std::optional<std::size_t>(1));
    CHECK(bmw_find_pivot(m, d, 4.5) == std::nullopt);
    CHECK(bmw_find_pivot(m, d, kNegInf) == std::optional<std::size_t>(0));
    std::vector<DocId> done = {4, kEndDoc};
    CHECK(bmw_find_pivot(m, done, 3.5) == std::nullopt);
}

TEST_CASE("bmw_find_pivot matches a prefix scan")
{
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 2000; ++trial) {
        auto n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
        std::vector<Score> m(n);
        std::vector<DocId> d(n);
        for (std::size_t i = 0; i < n; ++i) {
            m[i] = std::uniform_int_distribution<int>(0, 5)(rng);
            d[i] = std::bernoulli_distribution(0.15)(rng) ? kEndDoc : std::uniform_int_distribution<DocId>(0, 50)(rng);
        }
        std::sort(d.begin(), d.end());
        double theta = std::uniform_int_distribution<int>(-1, 25)(rng) + 0.5;
        std::optional<std::size_t> want;
        for (std::size_t p = 0; p < n && d[p] != kEndDoc; ++p) {
            double prefix = 0.0;
            for (std::size_t j = 0; j <= p; ++j) {
                prefix += m[j];
            }
            if (prefix > theta) {
                want = p;
                break;
            }
        }
        REQUIRE(bmw_find_pivot(m, d, theta) == want);
    }
}

TEST_CASE("bmw_local_check: no covering block prunes, open threshold scores")
{
    // Term 0 has docs 0 and 5 in one block of 2; the pivot doc 3 sits between them.
    Corpus c = {doc(0, {{0, 1, 1.0}}), doc(1, {}), doc(2, {}), doc(3, {{1, 1, 1.0}}), doc(4, {}),
                doc(5, {{0, 1, 1.0}})};
    BuildOptions o;
    o.block_size = 1;
    auto index = build_index(c, o);
    MixCoefficients mc{0.0, 0.0, 0.0};
    auto states = make_term_states(test::query({0}), index, mc);
    states[0].cursor.next();  // now at doc 5, block 1
    ScoringScratch scratch;
    EffortCounters counters;
    // The cursor is past doc 3, so no block covers it: bound 0 against theta 0.5.
    auto out = bmw_local_check(3, states, 0.5, mc, scratch, counters);
    CHECK(out.pruned);
    CHECK(out.pruned_by_blocks);
    CHECK(out.skip_to == 5);

    auto states2 = make_term_states(test::query({0, 1}), index, mc);
    auto open = bmw_local_check(0, states2, kNegInf, mc, scratch, counters);
    CHECK_FALSE(open.pruned);
    CHECK(open.complete);
    CHECK(open.scores.local == 1.0);
}

TEST_CASE("bmw_local_check is safe against a full-scoring reference")
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 400; ++trial) {
        auto corpus = test::small_random_corpus(rng, 120, 8);
        BuildOptions o;
        o.block_size = std::uniform_int_distribution<std::uint32_t>(1, 8)(rng);
        auto index = build_index(corpus, o);
        Query q;
        for (int i = 0; i < 4; ++i) {
            q.terms.push_back(std::uniform_int_distribution<TermId>(0, 7)(rng));
        }
        MixCoefficients mc{unit(rng), unit(rng), unit(rng)};
        auto states = make_term_states(q, index, mc);
        if (states.empty()) {
            continue;
        }
        // Pivot: the smallest current doc.
        DocId d = kEndDoc;
        for (auto const& s : states) {
            d = std::min(d, s.cursor.doc());
        }
        if (d == kEndDoc) {
            continue;
        }
        double local = document_score(q, index, d, mc.beta);
        double theta = local * (0.5 + unit(rng));
        ScoringScratch scratch;
        EffortCounters counters;
        auto out = bmw_local_check(d, states, theta, mc, scratch, counters);
        if (local > theta * (1 + 1e-9)) {
            CHECK_FALSE(out.pruned);
        }
        if (!out.pruned) {
            CHECK(test::rel_close(out.scores.local, local, 1e-12));
            CHECK(test::rel_close(out.scores.rank, document_score(q, index, d, mc.gamma), 1e-12));
        }
        if (out.pruned_by_blocks) {
            // Nothing in [d, skip_to) may beat theta.
            for (DocId x = d; x < std::min<DocId>(out.skip_to, static_cast<DocId>(index.num_docs)); ++x) {
                CHECK(document_score(q, index, x, mc.beta) <= theta * (1 + 1e-9));
            }
        }
    }
}

TEST_CASE("single-term query returns the k largest combined weights of its list")
{
    std::mt19937_64 rng(43);
    auto corpus = test::small_random_corpus(rng, 300, 5);
    BuildOptions o;
    o.block_size = 7;
    auto index = build_index(corpus, o);
    auto const* list = index.find(2);
    REQUIRE(list != nullptr);
    RankedList want;
    for (auto const& r : list->records) {
        want.push_back({r.doc, 0.4 * r.bm25 + 0.6 * r.learned});
    }
    sort_ranked(want);
    want.resize(std::min<std::size_t>(want.size(), 10));
    auto got = bmw_2gti(test::query({2}), index, config(0.4, 0.4, 0.4, 10));
    REQUIRE(got.results.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(got.results[i].doc == want[i].doc);
        CHECK(test::rel_close(got.results[i].score, want[i].score, 1e-12));
    }
}

TEST_CASE("random corpora: rank safety and agreement with MaxScore")
{
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        RandomCorpusSpec spec;
        spec.max_docs = 500;
        auto inst = random_instance(rng, spec);
        auto index = build_index(inst.corpus, inst.build);
        auto q = random_query(rng, inst.vocab, 8);
        auto k = std::uniform_int_distribution<std::size_t>(1, 15)(rng);
        double x = unit(rng);
        CAPTURE(trial);
        auto bmw = bmw_2gti(q, index, config(x, x, x, k));
        auto ms = maxscore_2gti(q, index, config(x, x, x, k, Algorithm::MaxScore2Gti));
        auto want = exhaustive_topk(q, index, x, k);
        REQUIRE(bmw.results.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i) {
            REQUIRE(bmw.results[i].doc == want[i].doc);
            REQUIRE(test::rel_close(bmw.results[i].score, want[i].score, 1e-9));
        }
        CHECK(bmw.results == ms.results);
        auto const& n = bmw.counters;
        auto candidates = candidate_count(make_term_states(q, index, MixCoefficients{x, x, x}));
        CHECK(n.docs_fully_scored + n.docs_locally_pruned + n.docs_globally_skipped == candidates);
    }
}
