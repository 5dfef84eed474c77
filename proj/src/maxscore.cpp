#include "gti/maxscore.hpp"

#include <algorithm>

namespace gti {

void ScoringScratch::reset(std::size_t n)
{
    bm25.assign(n, 0.0);
    learned.assign(n, 0.0);
}

auto accumulate_triple(ScoringScratch const& scratch, MixCoefficients const& coeffs) -> ScoreTriple
{
    ScoreTriple t;
    for (std::size_t i = 0; i < scratch.bm25.size(); ++i) {
        t.global += mix(scratch.bm25[i], scratch.learned[i], coeffs.alpha);
        t.local += mix(scratch.bm25[i], scratch.learned[i], coeffs.beta);
        t.rank += mix(scratch.bm25[i], scratch.learned[i], coeffs.gamma);
    }
    return t;
}

auto partition_terms(std::span<Score const> sorted_max_alpha, Score theta) -> std::size_t
{
    if (sorted_max_alpha.empty()) {
        throw DomainError("cannot partition an empty term list");
    }
    std::size_t pivot = 0;
    Score prefix = 0.0;
    for (std::size_t p = 1; p < sorted_max_alpha.size(); ++p) {
        prefix += sorted_max_alpha[p - 1];
        if (!bound_below(prefix, theta)) {
            break;
        }
        pivot = p;
    }
    return pivot;
}

auto next_pivot_doc(std::span<QueryTermState> states, std::size_t pivot) -> DocId
{
    DocId d = kEndDoc;
    for (auto i = pivot; i < states.size(); ++i) {
        d = std::min(d, states[i].cursor.doc());
    }
    if (d == kEndDoc) {
        return d;
    }
    for (std::size_t i = 0; i < pivot; ++i) {
        states[i].cursor.next_geq(d);
    }
    return d;
}

auto local_prune_and_score(
    DocId doc,
    std::span<QueryTermState const> states,
    std::size_t pivot,
    std::span<Score const> beta_prefix,
    Score theta_local,
    MixCoefficients const& coeffs,
    ScoringScratch& scratch) -> LocalOutcome
{
    scratch.reset(states.size());
    Score partial = 0.0;
    auto take = [&](QueryTermState const& s) {
        if (s.cursor.doc() == doc) {
            auto const& r = s.cursor.record();
            scratch.bm25[s.position] = r.bm25;
            scratch.learned[s.position] = r.learned;
            partial += mix(r.bm25, r.learned, coeffs.beta);
        }
    };
    for (auto i = pivot; i < states.size(); ++i) {
        take(states[i]);
    }
    for (auto x = pivot;; --x) {
        if (x == 0) {
            // Everything examined: decide on the exact score, summed the same way
            // the queues see it.
            auto scores = accumulate_triple(scratch, coeffs);
            return {scores.local <= theta_local, true, scores};
        }
        if (bound_below(beta_prefix[x] + partial, theta_local)) {
            return {true, false, accumulate_triple(scratch, coeffs)};
        }
        take(states[x - 1]);
    }
}

auto candidate_count(std::span<QueryTermState const> states) -> std::uint64_t
{
    std::vector<DocId> docs;
    for (auto const& s : states) {
        for (auto const& r : s.cursor.list().records) {
            docs.push_back(r.doc);
        }
    }
    std::sort(docs.begin(), docs.end());
    return static_cast<std::uint64_t>(std::unique(docs.begin(), docs.end()) - docs.begin());
}

auto maxscore_2gti(Query const& query, DualIndex const& index, TraversalConfig const& config) -> QueryRun
{
    config.validate();
    QueryRun run;
    run.query_id = query.id;
    auto states = make_term_states(query, index, config.coeffs);
    if (states.empty()) {
        return run;
    }
    std::stable_sort(states.begin(), states.end(), [](auto const& a, auto const& b) {
        return a.max_alpha < b.max_alpha;
    });
    auto n = states.size();
    std::vector<Score> max_alpha(n);
    std::vector<Score> beta_prefix(n + 1, 0.0);
    Score alpha_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        max_alpha[i] = states[i].max_alpha;
        alpha_total += states[i].max_alpha;
        beta_prefix[i + 1] = beta_prefix[i] + states[i].max_beta;
    }

    TripleTopK queues(config.k, config.factor_f);
    ScoringScratch scratch;
    EffortCounters& counters = run.counters;
    std::size_t pivot = 0;
    Score partitioned_at = 0.0;
    bool partitioned = false;
    std::uint64_t examined = 0;

    while (true) {
        Score theta_gl = queues.skip_global();
        if (!partitioned || theta_gl != partitioned_at) {
            pivot = partition_terms(max_alpha, theta_gl);
            partitioned_at = theta_gl;
            partitioned = true;
            ++counters.repartition_count;
            // No document can exceed the global threshold any more.
            if (bound_below(alpha_total, theta_gl)) {
                break;
            }
        }
        DocId d = next_pivot_doc(states, pivot);
        if (d == kEndDoc) {
            break;
        }
        ++examined;
        auto outcome = local_prune_and_score(
            d, states, pivot, beta_prefix, queues.skip_local(), config.coeffs, scratch);
        if (outcome.complete) {
            ++counters.docs_fully_scored;
        } else {
            ++counters.docs_locally_pruned;
        }
        if (outcome.pruned) {
            queues.offer(d, outcome.scores, Eligibility::RankOnly);
            if (config.trace_pruned) {
                run.pruned.push_back({d, outcome.scores.rank});
            }
        } else {
            queues.offer(d, outcome.scores, Eligibility::All);
        }
        for (auto i = pivot; i < n; ++i) {
            if (states[i].cursor.doc() == d) {
                states[i].cursor.next();
            }
        }
    }

    run.results = final_topk(queues);
    run.final_theta_global = queues.theta_global();
    run.final_theta_local = queues.theta_local();
    run.final_theta_rank = queues.theta_rank();
    for (auto const& s : states) {
        counters.postings_touched += s.cursor.postings_touched();
    }
    if (config.counters_enabled) {
        counters.docs_globally_skipped = candidate_count(states) - examined;
    }
    return run;
}

}  // namespace gti
