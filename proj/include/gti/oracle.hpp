#pragma once

#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "gti/query.hpp"

namespace gti {

/// Every document containing at least one query term, scored by
/// sum over query terms of x * bm25 + (1 - x) * learned, in ranking order.
[[nodiscard]] auto full_ranking(Query const& query, DualIndex const& index, double x) -> RankedList;

/// Brute-force top-k under the x-combination. Ground truth for rank safety.
[[nodiscard]] auto exhaustive_topk(Query const& query, DualIndex const& index, double x, std::size_t k)
    -> RankedList;

/// Score of a single document under the x-combination (0 when it has no query term).
[[nodiscard]] auto document_score(Query const& query, DualIndex const& index, DocId doc, double x) -> Score;

/// Retrieve the top k by the alpha-combination, then re-rank them by gamma.
[[nodiscard]] auto two_stage(Query const& query, DualIndex const& index, double alpha, double gamma, std::size_t k)
    -> RankedList;

/// True when the top-k set of a full ranking is the same under any reordering of
/// equal scores: no tie (or near-tie within 1e-12) across the k/k+1 boundary.
[[nodiscard]] auto topk_set_unique(RankedList const& ranking, std::size_t k) -> bool;

enum class CheckStatus { Holds, Violated, AssumptionUnmet, NotApplicable };

[[nodiscard]] auto check_status_name(CheckStatus s) -> char const*;

struct CheckOutcome {
    CheckStatus status = CheckStatus::Holds;
    /// Violated containment: a document agreed by all three rankings but missing.
    std::optional<DocId> witness;
    /// Mean-score check: 2GTI mean minus two-stage mean. Relevant-count check: count difference.
    double gap = 0.0;
};

/// Binary relevance labels per query id.
using RelevanceLabels = std::unordered_map<std::string, std::unordered_set<DocId>>;

/// Documents in the top k of all of R_alpha, R_beta and R_gamma must appear in the
/// 2GTI output. `config.coeffs` and `config.k` select the instance.
[[nodiscard]] auto check_containment(Query const& query, DualIndex const& index, TraversalConfig const& config)
    -> CheckOutcome;

/// With alpha == beta or beta == gamma, the mean gamma-score of the 2GTI top k is
/// no less than that of two-stage retrieval (within 1e-9).
[[nodiscard]] auto check_mean_score(Query const& query, DualIndex const& index, TraversalConfig const& config)
    -> CheckOutcome;

/// True when ranking x orders every (relevant, irrelevant) pair correctly that
/// ranking y orders correctly. Rankings are full rankings over the same documents.
[[nodiscard]] auto outmatches(
    RankedList const& x, RankedList const& y, std::unordered_set<DocId> const& relevant) -> bool;

/// When R_gamma outmatches R_beta and R_beta outmatches R_alpha, 2GTI retrieves at
/// least as many relevant documents in its top k as two-stage retrieval.
[[nodiscard]] auto check_relevant_count(
    Query const& query,
    DualIndex const& index,
    TraversalConfig const& config,
    std::unordered_set<DocId> const& relevant) -> CheckOutcome;

}  // namespace gti
