#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gti/index.hpp"
#include "gti/query.hpp"

namespace gti {

/// Small randomized corpora for property campaigns.
struct RandomCorpusSpec {
    std::size_t max_docs = 2000;
    std::size_t max_vocab = 50;
    std::size_t max_terms_per_doc = 12;
};

struct RandomInstance {
    Corpus corpus;
    BuildOptions build;
    std::size_t vocab = 0;
};

/// Draws corpus size, vocabulary, weight style (continuous or small integers,
/// the latter to provoke score ties), fill mode and block size.
[[nodiscard]] auto random_instance(std::mt19937_64& rng, RandomCorpusSpec const& spec) -> RandomInstance;

/// 1..max_len terms drawn from [0, vocab), repeats allowed; occasionally an
/// out-of-vocabulary term.
[[nodiscard]] auto random_query(std::mt19937_64& rng, std::size_t vocab, std::size_t max_len) -> Query;

/// Larger corpus with Zipf-distributed term occurrences. Each document belongs to
/// a topic and draws a share of its tokens from that topic's vocabulary. Learned
/// weights follow tf loosely, with heavy-tailed noise, and each document gets a
/// few learned-only expansion terms.
struct ZipfCorpusSpec {
    std::size_t num_docs = 100000;
    std::size_t vocab = 20000;
    double zipf_exponent = 1.0;
    std::size_t min_doc_len = 20;
    std::size_t max_doc_len = 80;
    std::size_t topics = 500;
    std::size_t topic_terms = 40;
    /// Topic vocabularies avoid the most frequent ranks.
    std::size_t topic_head_skip = 100;
    double topic_share = 0.3;
    std::size_t expansion_terms = 8;
    double expansion_scale = 0.3;
    double learned_noise_sigma = 0.8;
    /// Learned term importance is log(2 + frequency rank)^exponent; 0 makes it flat.
    double learned_idf_exponent = 1.0;
    /// Chance that a query term is a frequent background word instead of a topic term.
    double query_head_share = 0.2;
    std::uint64_t seed = 42;
};

[[nodiscard]] auto zipf_corpus(ZipfCorpusSpec const& spec) -> Corpus;

/// Queries of 2..max_len distinct terms, drawn mostly from one topic's vocabulary.
[[nodiscard]] auto zipf_queries(ZipfCorpusSpec const& spec, std::size_t count, std::size_t max_len, std::uint64_t seed)
    -> std::vector<Query>;

}  // namespace gti
