#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "gti/hybrid.hpp"
#include "gti/index.hpp"

namespace gti {

/// A query as a multiset of terms; a repeated term contributes once per occurrence.
struct Query {
    std::string id;
    std::vector<TermId> terms;
};

enum class Algorithm { MaxScore2Gti, Bmw2Gti, Exhaustive };

[[nodiscard]] auto algorithm_name(Algorithm a) -> char const*;
/// Accepts "maxscore-2gti", "bmw-2gti" and "exhaustive".
[[nodiscard]] auto parse_algorithm(std::string const& name) -> Algorithm;

struct TraversalConfig {
    MixCoefficients coeffs;
    std::size_t k = 10;
    double factor_f = 1.0;
    Algorithm algorithm = Algorithm::MaxScore2Gti;
    bool counters_enabled = true;
    /// Record the partial score of every locally pruned document in QueryRun::pruned.
    bool trace_pruned = false;

    void validate() const;
};

struct EffortCounters {
    std::uint64_t docs_fully_scored = 0;
    std::uint64_t docs_locally_pruned = 0;
    /// Candidate documents (containing any query term) never examined as a pivot.
    std::uint64_t docs_globally_skipped = 0;
    std::uint64_t postings_touched = 0;
    std::uint64_t repartition_count = 0;
    std::uint64_t blocks_opened = 0;

    auto operator+=(EffortCounters const& o) -> EffortCounters&;
};

struct QueryRun {
    std::string query_id;
    RankedList results;
    EffortCounters counters;
    double latency_ms = 0.0;
    Score final_theta_global = kNegInf;
    Score final_theta_local = kNegInf;
    Score final_theta_rank = kNegInf;
    /// Locally pruned documents with the rank score they carried into the rank queue.
    RankedList pruned;
};

inline constexpr DocId kEndDoc = std::numeric_limits<DocId>::max();

/// Relative slack on prune comparisons. Bounds are summed in a different order
/// from the scores they bound, so equal real values may differ by a few ulps.
inline constexpr double kBoundSlack = 1e-12;

/// bound <= theta, with the bound required to undercut theta by the slack.
[[nodiscard]] inline auto bound_below(Score bound, Score theta) -> bool
{
    return bound <= theta - kBoundSlack * std::abs(theta);
}

/// Forward cursor over a posting list with block-metadata skipping.
class PostingCursor {
  public:
    explicit PostingCursor(PostingList const& list) : m_list(&list) {}

    [[nodiscard]] auto doc() const -> DocId
    {
        return m_pos < m_list->records.size() ? m_list->records[m_pos].doc : kEndDoc;
    }
    [[nodiscard]] auto record() const -> PostingRecord const& { return m_list->records[m_pos]; }
    [[nodiscard]] auto exhausted() const -> bool { return m_pos >= m_list->records.size(); }
    [[nodiscard]] auto list() const -> PostingList const& { return *m_list; }
    [[nodiscard]] auto block() const -> std::size_t { return m_block; }

    void next();
    /// Move to the first posting with doc >= target, skipping whole blocks whose
    /// max doc is below the target.
    void next_geq(DocId target);
    /// Index of the block whose doc range [first doc, max doc] covers target, at or
    /// after the current block; reads metadata only.
    [[nodiscard]] auto block_covering(DocId target) const -> std::optional<std::size_t>;

    [[nodiscard]] auto postings_touched() const -> std::uint64_t { return m_touched; }

  private:
    PostingList const* m_list;
    std::size_t m_pos = 0;
    std::size_t m_block = 0;
    std::uint64_t m_touched = 0;
};

/// Per-occurrence traversal state of a query term.
struct QueryTermState {
    /// Position of the term in the query; scores are summed in this order.
    std::size_t position = 0;
    PostingCursor cursor;
    Score max_alpha = 0.0;
    Score max_beta = 0.0;
};

/// One state per query-term occurrence found in the index, in query order.
/// Unknown terms are dropped.
[[nodiscard]] auto make_term_states(Query const& query, DualIndex const& index, MixCoefficients const& coeffs)
    -> std::vector<QueryTermState>;

/// Query file: `qid<TAB>term term ...`.
[[nodiscard]] auto read_queries(std::istream& in) -> std::vector<Query>;
[[nodiscard]] auto read_queries(std::filesystem::path const& path) -> std::vector<Query>;

}  // namespace gti
