#pragma once

#include <span>
#include <vector>

#include "gti/query.hpp"

namespace gti {

/// Term partitioning for global pruning. `sorted_max_alpha` holds the
/// alpha-combined list maxima in ascending order. Returns the 0-based index p of
/// the first essential term: the largest p whose prefix sum over [0, p) stays
/// within `theta`. With theta = -inf every term is essential (p = 0).
[[nodiscard]] auto partition_terms(std::span<Score const> sorted_max_alpha, Score theta) -> std::size_t;

/// Smallest current doc over the essential cursors [pivot, N), or kEndDoc when
/// they are all exhausted. Non-essential cursors are moved to the first doc >= it.
[[nodiscard]] auto next_pivot_doc(std::span<QueryTermState> states, std::size_t pivot) -> DocId;

struct LocalOutcome {
    bool pruned = false;
    /// Every list was examined, so the scores are exact. A complete document can
    /// still be pruned by the final comparison against theta_local.
    bool complete = false;
    /// Fully accumulated scores, or for a pruned doc a rank score over the lists
    /// examined before the prune.
    ScoreTriple scores;
};

/// Scratch space reused across documents of one query.
struct ScoringScratch {
    std::vector<Score> bm25;
    std::vector<Score> learned;
    void reset(std::size_t n);
};

/// Local pruning of the pivot document. Essential lists are scored first, then
/// non-essential lists from position pivot-1 down to 0, replacing each list's
/// beta-combined maximum with the actual weight; the doc is pruned as soon as
/// bound + partial local score <= theta_local. `beta_prefix[i]` is the sum of the
/// beta-combined maxima of sorted positions [0, i). Cursors are not moved.
[[nodiscard]] auto local_prune_and_score(
    DocId doc,
    std::span<QueryTermState const> states,
    std::size_t pivot,
    std::span<Score const> beta_prefix,
    Score theta_local,
    MixCoefficients const& coeffs,
    ScoringScratch& scratch) -> LocalOutcome;

/// Sum the per-position weights in query order into the three combinations.
/// Positions never filled in contribute zero.
[[nodiscard]] auto accumulate_triple(ScoringScratch const& scratch, MixCoefficients const& coeffs)
    -> ScoreTriple;

/// MaxScore with two-level guidance: alpha-guided term partitioning, beta-guided
/// local pruning, gamma-ranked output.
[[nodiscard]] auto maxscore_2gti(Query const& query, DualIndex const& index, TraversalConfig const& config)
    -> QueryRun;

/// Number of distinct documents that contain at least one of the query's terms.
[[nodiscard]] auto candidate_count(std::span<QueryTermState const> states) -> std::uint64_t;

}  // namespace gti
