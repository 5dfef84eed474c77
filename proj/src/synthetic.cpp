#include "gti/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace gti {

namespace {

    auto uniform_index(std::mt19937_64& rng, std::size_t lo, std::size_t hi) -> std::size_t
    {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    }

    auto chance(std::mt19937_64& rng, double p) -> bool
    {
        return std::bernoulli_distribution(p)(rng);
    }

    auto zipf_weights(std::size_t n, double s) -> std::vector<double>
    {
        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = 1.0 / std::pow(static_cast<double>(i + 1), s);
        }
        return w;
    }

}  // namespace

auto random_instance(std::mt19937_64& rng, RandomCorpusSpec const& spec) -> RandomInstance
{
    RandomInstance inst;
    // Favour small corpora but reach the cap regularly.
    auto n_docs = chance(rng, 0.3) ? uniform_index(rng, 1, std::min<std::size_t>(spec.max_docs, 40))
                                   : uniform_index(rng, 1, spec.max_docs);
    inst.vocab = uniform_index(rng, 1, spec.max_vocab);
    bool integer_weights = chance(rng, 0.25);
    double p_learned_only = std::uniform_real_distribution<double>(0.0, 0.4)(rng);
    double p_bm25_only = std::uniform_real_distribution<double>(0.0, 0.2)(rng);
    auto terms_per_doc = std::min(inst.vocab, spec.max_terms_per_doc);

    auto weights = zipf_weights(inst.vocab, 0.8);
    std::shuffle(weights.begin(), weights.end(), rng);
    std::discrete_distribution<std::size_t> term_dist(weights.begin(), weights.end());

    std::uniform_real_distribution<double> cont(0.01, 5.0);
    std::lognormal_distribution<double> heavy(0.0, 1.0);
    bool heavy_tail = chance(rng, 0.5);

    inst.corpus.resize(n_docs);
    for (std::size_t d = 0; d < n_docs; ++d) {
        auto& doc = inst.corpus[d];
        doc.id = static_cast<DocId>(d);
        auto m = uniform_index(rng, 0, terms_per_doc);
        std::unordered_set<TermId> used;
        for (std::size_t j = 0; j < m * 3 && used.size() < m; ++j) {
            auto t = static_cast<TermId>(term_dist(rng));
            if (!used.insert(t).second) {
                continue;
            }
            CorpusPosting p;
            p.term = t;
            p.tf = chance(rng, p_learned_only) ? 0 : static_cast<std::uint32_t>(uniform_index(rng, 1, 5));
            if (p.tf > 0 && chance(rng, p_bm25_only)) {
                p.learned = 0.0;
            } else if (integer_weights) {
                p.learned = static_cast<double>(uniform_index(rng, 1, 5));
            } else {
                p.learned = heavy_tail ? heavy(rng) : cont(rng);
            }
            doc.postings.push_back(p);
        }
    }
    // Shuffle document order so the builder sees unsorted input.
    std::shuffle(inst.corpus.begin(), inst.corpus.end(), rng);

    static constexpr std::uint32_t kBlockSizes[] = {1, 2, 3, 8, 64};
    inst.build.block_size = kBlockSizes[uniform_index(rng, 0, 4)];
    inst.build.alignment.fill = static_cast<FillMode>(uniform_index(rng, 0, 2));
    inst.build.alignment.include_learned_zero = chance(rng, 0.5);
    if (chance(rng, 0.3)) {
        inst.build.bm25.k1 = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
        inst.build.bm25.b = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    }
    if (inst.build.alignment.fill == FillMode::Scaled) {
        bool has_b = false;
        bool has_l = false;
        for (auto const& doc : inst.corpus) {
            for (auto const& p : doc.postings) {
                has_b = has_b || p.tf > 0;
                has_l = has_l || p.learned > 0.0;
            }
        }
        if (!has_b || !has_l) {
            inst.build.alignment.fill = FillMode::Zero;
        }
    }
    return inst;
}

auto random_query(std::mt19937_64& rng, std::size_t vocab, std::size_t max_len) -> Query
{
    Query q;
    auto len = uniform_index(rng, 1, max_len);
    for (std::size_t i = 0; i < len; ++i) {
        if (chance(rng, 0.05)) {
            q.terms.push_back(static_cast<TermId>(vocab + 7));
        } else {
            q.terms.push_back(static_cast<TermId>(uniform_index(rng, 0, vocab - 1)));
        }
    }
    return q;
}

namespace {

    /// Topic vocabularies: each topic owns a fixed set of non-head terms.
    auto make_topics(ZipfCorpusSpec const& spec) -> std::vector<std::vector<TermId>>
    {
        std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
        auto lo = std::min(spec.topic_head_skip, spec.vocab - 1);
        std::vector<std::vector<TermId>> topics(spec.topics);
        for (auto& topic : topics) {
            std::unordered_set<TermId> used;
            while (used.size() < std::min(spec.topic_terms, spec.vocab - lo)) {
                auto t = static_cast<TermId>(uniform_index(rng, lo, spec.vocab - 1));
                if (used.insert(t).second) {
                    topic.push_back(t);
                }
            }
        }
        return topics;
    }

}  // namespace

auto zipf_corpus(ZipfCorpusSpec const& spec) -> Corpus
{
    std::mt19937_64 rng(spec.seed);
    auto weights = zipf_weights(spec.vocab, spec.zipf_exponent);
    std::discrete_distribution<std::size_t> term_dist(weights.begin(), weights.end());
    auto topics = make_topics(spec);
    // Within a topic, terms are themselves Zipf-skewed.
    auto topic_weights = zipf_weights(spec.topic_terms, spec.zipf_exponent);
    std::discrete_distribution<std::size_t> topic_term_dist(topic_weights.begin(), topic_weights.end());
    std::normal_distribution<double> noise(0.0, spec.learned_noise_sigma);
    auto importance = [&](std::size_t rank) {
        return std::pow(std::log(2.0 + static_cast<double>(rank)), spec.learned_idf_exponent);
    };

    Corpus corpus(spec.num_docs);
    std::unordered_map<TermId, std::uint32_t> counts;
    for (std::size_t d = 0; d < spec.num_docs; ++d) {
        auto& doc = corpus[d];
        doc.id = static_cast<DocId>(d);
        counts.clear();
        auto const& topic = topics[uniform_index(rng, 0, topics.size() - 1)];
        auto len = uniform_index(rng, spec.min_doc_len, spec.max_doc_len);
        for (std::size_t i = 0; i < len; ++i) {
            auto t = chance(rng, spec.topic_share) ? topic[topic_term_dist(rng)] : static_cast<TermId>(term_dist(rng));
            ++counts[t];
        }
        std::vector<TermId> terms;
        terms.reserve(counts.size());
        for (auto const& [t, c] : counts) {
            terms.push_back(t);
        }
        std::sort(terms.begin(), terms.end());
        for (auto t : terms) {
            auto tf = counts[t];
            double learned = importance(t) * (1.0 + std::log(static_cast<double>(tf))) * std::exp(noise(rng));
            if (chance(rng, 0.05)) {
                learned = 0.0;
            }
            doc.postings.push_back({t, tf, learned});
        }
        for (std::size_t e = 0; e < spec.expansion_terms; ++e) {
            auto t = chance(rng, 0.5) ? topic[topic_term_dist(rng)] : static_cast<TermId>(term_dist(rng));
            if (counts.count(t) > 0) {
                continue;
            }
            counts[t] = 0;
            doc.postings.push_back({t, 0, spec.expansion_scale * importance(t) * std::exp(noise(rng))});
        }
    }
    return corpus;
}

auto zipf_queries(ZipfCorpusSpec const& spec, std::size_t count, std::size_t max_len, std::uint64_t seed)
    -> std::vector<Query>
{
    std::mt19937_64 rng(seed);
    auto topics = make_topics(spec);
    auto topic_weights = zipf_weights(spec.topic_terms, spec.zipf_exponent);
    std::discrete_distribution<std::size_t> topic_term_dist(topic_weights.begin(), topic_weights.end());
    auto head = zipf_weights(std::min<std::size_t>(spec.vocab, 100), spec.zipf_exponent);
    std::discrete_distribution<std::size_t> head_dist(head.begin(), head.end());
    std::vector<Query> queries;
    for (std::size_t q = 0; q < count; ++q) {
        Query query;
        query.id = std::to_string(q + 1);
        auto const& topic = topics[uniform_index(rng, 0, topics.size() - 1)];
        auto len = uniform_index(rng, 2, std::max<std::size_t>(max_len, 2));
        std::unordered_set<TermId> used;
        while (used.size() < len) {
            // Mostly topic terms, with the odd frequent background word.
            auto t = chance(rng, spec.query_head_share) ? static_cast<TermId>(head_dist(rng))
                                                         : topic[topic_term_dist(rng)];
            if (used.insert(t).second) {
                query.terms.push_back(t);
            }
        }
        queries.push_back(std::move(query));
    }
    return queries;
}

}  // namespace gti
