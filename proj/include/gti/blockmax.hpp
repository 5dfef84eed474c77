#pragma once

#include <optional>
#include <span>

#include "gti/maxscore.hpp"
#include "gti/query.hpp"

namespace gti {

/// Pivot selection over cursors sorted by current doc. `max_alpha` and `docs`
/// are in cursor order. Returns the smallest 0-based position whose prefix sum of
/// alpha-combined maxima exceeds `theta`, or nullopt when no live cursor reaches it.
[[nodiscard]] auto bmw_find_pivot(std::span<Score const> max_alpha, std::span<DocId const> docs, Score theta)
    -> std::optional<std::size_t>;

struct BmwLocalOutcome {
    bool pruned = false;
    /// True when the block-max bound alone pruned the doc; no posting was read.
    bool pruned_by_blocks = false;
    /// Every covering list was read, so the scores are exact.
    bool complete = false;
    ScoreTriple scores;
    /// With pruned_by_blocks: every doc in [doc, skip_to) is pruned by the same bound.
    DocId skip_to = 0;
};

/// Block-max local check of pivot document `doc` against theta_local: starts from
/// the beta-combined block maxima of the blocks covering `doc` (zero where no
/// block does) and replaces them one list at a time, in ascending order of their
/// combined block maximum, by the actual weights. Cursors of inspected lists are
/// moved to the first doc >= `doc`.
[[nodiscard]] auto bmw_local_check(
    DocId doc,
    std::span<QueryTermState> states,
    Score theta_local,
    MixCoefficients const& coeffs,
    ScoringScratch& scratch,
    EffortCounters& counters) -> BmwLocalOutcome;

/// Block-Max WAND with two-level guidance.
[[nodiscard]] auto bmw_2gti(Query const& query, DualIndex const& index, TraversalConfig const& config)
    -> QueryRun;

}  // namespace gti
