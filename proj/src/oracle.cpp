#include "gti/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "gti/batch.hpp"

namespace gti {

auto full_ranking(Query const& query, DualIndex const& index, double x) -> RankedList
{
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("combination coefficient must lie in [0,1]");
    }
    // Sums accumulate in query order, matching the traversals bit for bit.
    std::unordered_map<DocId, Score> acc;
    for (auto term : query.terms) {
        auto const* list = index.find(term);
        if (list == nullptr) {
            continue;
        }
        for (auto const& r : list->records) {
            acc[r.doc] += mix(r.bm25, r.learned, x);
        }
    }
    RankedList out;
    out.reserve(acc.size());
    for (auto const& [doc, score] : acc) {
        out.push_back({doc, score});
    }
    sort_ranked(out);
    return out;
}

auto exhaustive_topk(Query const& query, DualIndex const& index, double x, std::size_t k) -> RankedList
{
    if (k == 0) {
        throw DomainError("k must be at least 1");
    }
    auto out = full_ranking(query, index, x);
    if (out.size() > k) {
        out.resize(k);
    }
    return out;
}

auto document_score(Query const& query, DualIndex const& index, DocId doc, double x) -> Score
{
    Score s = 0.0;
    for (auto term : query.terms) {
        auto const* list = index.find(term);
        if (list == nullptr) {
            continue;
        }
        auto it = std::lower_bound(
            list->records.begin(), list->records.end(), doc, [](PostingRecord const& r, DocId d) {
                return r.doc < d;
            });
        if (it != list->records.end() && it->doc == doc) {
            s += mix(it->bm25, it->learned, x);
        }
    }
    return s;
}

auto two_stage(Query const& query, DualIndex const& index, double alpha, double gamma, std::size_t k)
    -> RankedList
{
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw DomainError("gamma must lie in [0,1]");
    }
    auto first = exhaustive_topk(query, index, alpha, k);
    for (auto& e : first) {
        e.score = document_score(query, index, e.doc, gamma);
    }
    sort_ranked(first);
    return first;
}

auto topk_set_unique(RankedList const& ranking, std::size_t k) -> bool
{
    if (ranking.size() <= k) {
        return true;
    }
    Score a = ranking[k - 1].score;
    Score b = ranking[k].score;
    return a - b > 1e-12 * std::max(1.0, std::abs(a));
}

auto check_status_name(CheckStatus s) -> char const*
{
    switch (s) {
    case CheckStatus::Holds: return "holds";
    case CheckStatus::Violated: return "violated";
    case CheckStatus::AssumptionUnmet: return "assumption_unmet";
    case CheckStatus::NotApplicable: return "not_applicable";
    }
    return "unknown";
}

namespace {

    struct ThreeRankings {
        RankedList alpha;
        RankedList beta;
        RankedList gamma;
    };

    auto rankings(Query const& query, DualIndex const& index, MixCoefficients const& c) -> ThreeRankings
    {
        return {full_ranking(query, index, c.alpha),
                full_ranking(query, index, c.beta),
                full_ranking(query, index, c.gamma)};
    }

    auto unique_tops(ThreeRankings const& r, std::size_t k) -> bool
    {
        return topk_set_unique(r.alpha, k) && topk_set_unique(r.beta, k) && topk_set_unique(r.gamma, k);
    }

    auto top_set(RankedList const& r, std::size_t k) -> std::unordered_set<DocId>
    {
        std::unordered_set<DocId> s;
        for (std::size_t i = 0; i < std::min(k, r.size()); ++i) {
            s.insert(r[i].doc);
        }
        return s;
    }

    auto mean_score(RankedList const& r) -> double
    {
        if (r.empty()) {
            return 0.0;
        }
        double sum = 0.0;
        for (auto const& e : r) {
            sum += e.score;
        }
        return sum / static_cast<double>(r.size());
    }

    auto count_relevant(RankedList const& r, std::unordered_set<DocId> const& relevant) -> std::size_t
    {
        return static_cast<std::size_t>(std::count_if(
            r.begin(), r.end(), [&](RankedEntry const& e) { return relevant.count(e.doc) > 0; }));
    }

}  // namespace

auto check_containment(Query const& query, DualIndex const& index, TraversalConfig const& config) -> CheckOutcome
{
    auto r = rankings(query, index, config.coeffs);
    if (!unique_tops(r, config.k)) {
        return {CheckStatus::AssumptionUnmet, std::nullopt, 0.0};
    }
    auto out = run_traversal(query, index, config);
    auto got = top_set(out.results, config.k);
    auto in_beta = top_set(r.beta, config.k);
    auto in_gamma = top_set(r.gamma, config.k);
    for (std::size_t i = 0; i < std::min(config.k, r.alpha.size()); ++i) {
        auto d = r.alpha[i].doc;
        if (in_beta.count(d) && in_gamma.count(d) && !got.count(d)) {
            return {CheckStatus::Violated, d, 0.0};
        }
    }
    return {CheckStatus::Holds, std::nullopt, 0.0};
}

auto check_mean_score(Query const& query, DualIndex const& index, TraversalConfig const& config) -> CheckOutcome
{
    auto const& c = config.coeffs;
    if (c.alpha != c.beta && c.beta != c.gamma) {
        return {CheckStatus::NotApplicable, std::nullopt, 0.0};
    }
    auto r = rankings(query, index, c);
    if (!unique_tops(r, config.k)) {
        return {CheckStatus::AssumptionUnmet, std::nullopt, 0.0};
    }
    auto out = run_traversal(query, index, config);
    auto baseline = two_stage(query, index, c.alpha, c.gamma, config.k);
    double gap = mean_score(out.results) - mean_score(baseline);
    auto status = gap >= -1e-9 ? CheckStatus::Holds : CheckStatus::Violated;
    return {status, std::nullopt, gap};
}

auto outmatches(RankedList const& x, RankedList const& y, std::unordered_set<DocId> const& relevant) -> bool
{
    std::unordered_map<DocId, std::size_t> pos_x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        pos_x[x[i].doc] = i;
    }
    // Walk y in order: every relevant doc seen after an irrelevant one is a pair y
    // gets wrong; pairs y gets right are (relevant earlier, irrelevant later).
    std::vector<std::size_t> relevant_seen;
    for (auto const& e : y) {
        auto px = pos_x.at(e.doc);
        if (relevant.count(e.doc)) {
            relevant_seen.push_back(px);
        } else {
            for (auto pr : relevant_seen) {
                if (pr > px) {
                    return false;
                }
            }
        }
    }
    return true;
}

auto check_relevant_count(
    Query const& query,
    DualIndex const& index,
    TraversalConfig const& config,
    std::unordered_set<DocId> const& relevant) -> CheckOutcome
{
    auto const& c = config.coeffs;
    auto r = rankings(query, index, c);
    if (!unique_tops(r, config.k)) {
        return {CheckStatus::AssumptionUnmet, std::nullopt, 0.0};
    }
    if (!outmatches(r.gamma, r.beta, relevant) || !outmatches(r.beta, r.alpha, relevant)) {
        return {CheckStatus::AssumptionUnmet, std::nullopt, 0.0};
    }
    auto out = run_traversal(query, index, config);
    auto baseline = two_stage(query, index, c.alpha, c.gamma, config.k);
    auto got = count_relevant(out.results, relevant);
    auto base = count_relevant(baseline, relevant);
    double gap = static_cast<double>(got) - static_cast<double>(base);
    return {got >= base ? CheckStatus::Holds : CheckStatus::Violated, std::nullopt, gap};
}

}  // namespace gti
