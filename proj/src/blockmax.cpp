#include "gti/blockmax.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace gti {

auto bmw_find_pivot(std::span<Score const> max_alpha, std::span<DocId const> docs, Score theta)
    -> std::optional<std::size_t>
{
    Score prefix = 0.0;
    for (std::size_t p = 0; p < max_alpha.size(); ++p) {
        if (docs[p] == kEndDoc) {
            break;
        }
        prefix += max_alpha[p];
        if (!bound_below(prefix, theta)) {
            return p;
        }
    }
    return std::nullopt;
}

namespace {

    struct BlockView {
        std::size_t state = 0;
        Score max_beta = 0.0;
    };

}  // namespace

auto bmw_local_check(
    DocId doc,
    std::span<QueryTermState> states,
    Score theta_local,
    MixCoefficients const& coeffs,
    ScoringScratch& scratch,
    EffortCounters& counters) -> BmwLocalOutcome
{
    scratch.reset(states.size());
    std::vector<BlockView> covering;
    covering.reserve(states.size());
    DocId skip_to = kEndDoc;

    for (std::size_t i = 0; i < states.size(); ++i) {
        auto const& cur = states[i].cursor;
        auto const& list = cur.list();
        if (cur.doc() > doc) {
            skip_to = std::min(skip_to, cur.doc());
            continue;
        }
        auto b = cur.block_covering(doc);
        if (!b) {
            // doc falls in a gap or past the end; the next block starts the next candidate.
            auto nb = cur.block();
            while (nb < list.blocks.size() && list.blocks[nb].max_doc < doc) {
                ++nb;
            }
            if (nb < list.blocks.size()) {
                skip_to = std::min(skip_to, list.records[list.blocks[nb].first].doc);
            }
            continue;
        }
        auto const& meta = list.blocks[*b];
        skip_to = std::min(skip_to, meta.max_doc + 1);
        covering.push_back({i, mix(meta.max_bm25, meta.max_learned, coeffs.beta)});
    }

    Score bound = 0.0;
    for (auto const& c : covering) {
        bound += c.max_beta;
    }
    if (bound_below(bound, theta_local)) {
        BmwLocalOutcome out;
        out.pruned = true;
        out.pruned_by_blocks = true;
        out.skip_to = skip_to;
        return out;
    }

    std::stable_sort(covering.begin(), covering.end(), [](auto const& a, auto const& b) {
        return a.max_beta < b.max_beta;
    });
    // remaining[j]: block-max bound of the lists not yet inspected at step j.
    std::vector<Score> remaining(covering.size() + 1, 0.0);
    for (auto j = covering.size(); j-- > 0;) {
        remaining[j] = remaining[j + 1] + covering[j].max_beta;
    }

    Score actual = 0.0;
    for (std::size_t j = 0; j < covering.size(); ++j) {
        auto& s = states[covering[j].state];
        s.cursor.next_geq(doc);
        ++counters.blocks_opened;
        if (s.cursor.doc() == doc) {
            auto const& r = s.cursor.record();
            scratch.bm25[s.position] = r.bm25;
            scratch.learned[s.position] = r.learned;
            actual += mix(r.bm25, r.learned, coeffs.beta);
        }
        if (j + 1 < covering.size() && bound_below(actual + remaining[j + 1], theta_local)) {
            return {true, false, false, accumulate_triple(scratch, coeffs), doc + 1};
        }
    }
    auto scores = accumulate_triple(scratch, coeffs);
    return {scores.local <= theta_local, false, true, scores, doc + 1};
}

auto bmw_2gti(Query const& query, DualIndex const& index, TraversalConfig const& config) -> QueryRun
{
    config.validate();
    QueryRun run;
    run.query_id = query.id;
    auto states = make_term_states(query, index, config.coeffs);
    if (states.empty()) {
        return run;
    }
    auto n = states.size();
    TripleTopK queues(config.k, config.factor_f);
    ScoringScratch scratch;
    EffortCounters& counters = run.counters;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<Score> max_alpha(n);
    std::vector<DocId> docs(n);
    std::uint64_t examined = 0;
    Score last_theta = 0.0;
    bool first = true;

    while (true) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return states[a].cursor.doc() < states[b].cursor.doc();
        });
        for (std::size_t i = 0; i < n; ++i) {
            max_alpha[i] = states[order[i]].max_alpha;
            docs[i] = states[order[i]].cursor.doc();
            assert(i == 0 || docs[i - 1] <= docs[i]);
        }
        Score theta_gl = queues.skip_global();
        if (first || theta_gl != last_theta) {
            ++counters.repartition_count;
            last_theta = theta_gl;
            first = false;
        }
        auto pivot = bmw_find_pivot(max_alpha, docs, theta_gl);
        if (!pivot) {
            break;
        }
        DocId d = docs[*pivot];
        ++examined;
        auto outcome = bmw_local_check(d, states, queues.skip_local(), config.coeffs, scratch, counters);
        if (outcome.pruned_by_blocks) {
            ++counters.docs_locally_pruned;
            for (auto& s : states) {
                s.cursor.next_geq(outcome.skip_to);
            }
            continue;
        }
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
        for (auto& s : states) {
            if (s.cursor.doc() == d) {
                s.cursor.next();
            } else if (s.cursor.doc() < d) {
                s.cursor.next_geq(d + 1);
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
