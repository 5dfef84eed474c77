#pragma once

// Shared fixtures and straight-line reference computations for the tests.

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "gti/index.hpp"
#include "gti/query.hpp"

namespace gti::test {

/// Okapi BM25 written out longhand, independent of the library.
inline auto ref_bm25(double tf, double df, double dl, double avgdl, double n, double k1, double b) -> double
{
    double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    double norm = k1 * (1.0 - b + b * dl / avgdl);
    return idf * tf * (k1 + 1.0) / (tf + norm);
}

inline auto rel_close(double a, double b, double tol) -> bool
{
    return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

inline auto doc(DocId id, std::vector<CorpusPosting> postings) -> CorpusDocument
{
    return {id, std::move(postings)};
}

inline auto query(std::vector<TermId> terms, std::string id = "q") -> Query
{
    return {std::move(id), std::move(terms)};
}

/// Fresh per-test directory under the build tree.
inline auto temp_dir(std::string const& name) -> std::filesystem::path
{
    auto dir = std::filesystem::path(GTI_TEST_TMP) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Hand-rolled random corpus: continuous learned weights, some learned-only
/// postings, dense ids.
inline auto small_random_corpus(std::mt19937_64& rng, std::size_t docs, std::size_t vocab) -> Corpus
{
    Corpus corpus(docs);
    std::uniform_int_distribution<TermId> term(0, static_cast<TermId>(vocab - 1));
    std::uniform_int_distribution<std::uint32_t> tf(0, 4);
    std::uniform_real_distribution<double> w(0.05, 3.0);
    for (std::size_t d = 0; d < docs; ++d) {
        corpus[d].id = static_cast<DocId>(d);
        std::vector<bool> used(vocab, false);
        for (int j = 0; j < 6; ++j) {
            auto t = term(rng);
            if (used[t]) {
                continue;
            }
            used[t] = true;
            auto f = tf(rng);
            corpus[d].postings.push_back({t, f, w(rng)});
        }
    }
    return corpus;
}

}  // namespace gti::test
