#pragma once

#include <cstddef>
#include <vector>

#include "gti/common.hpp"

namespace gti {

/// Coefficients of the three BM25/learned combinations: alpha drives global
/// pruning, beta local pruning, gamma the final ranking.
struct MixCoefficients {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    void validate() const;
};

/// coeff * bm25 + (1 - coeff) * learned. Throws DomainError if coeff is outside [0,1].
[[nodiscard]] auto combine(Score bm25, Score learned, double coeff) -> Score;

/// Unchecked combine for inner loops; coefficients are validated once per query.
[[nodiscard]] inline auto mix(Score bm25, Score learned, double coeff) -> Score
{
    return coeff * bm25 + (1.0 - coeff) * learned;
}

struct ScoreTriple {
    Score global = 0.0;
    Score local = 0.0;
    Score rank = 0.0;
};

struct RankedEntry {
    DocId doc = 0;
    Score score = 0.0;

    friend auto operator==(RankedEntry const&, RankedEntry const&) -> bool = default;
};

/// Higher score first; equal scores ordered by ascending doc id.
[[nodiscard]] inline auto ranks_before(RankedEntry const& a, RankedEntry const& b) -> bool
{
    return a.score > b.score || (a.score == b.score && a.doc < b.doc);
}

using RankedList = std::vector<RankedEntry>;

/// Sort into the composite ranking order.
void sort_ranked(RankedList& list);

/// Bounded queue keeping the k best entries under `ranks_before`.
class TopKQueue {
  public:
    explicit TopKQueue(std::size_t k);

    /// Returns true if the entry was retained.
    auto offer(DocId doc, Score score) -> bool;

    /// k-th best score once full, -inf before.
    [[nodiscard]] auto threshold() const -> Score { return m_threshold; }
    [[nodiscard]] auto full() const -> bool { return m_heap.size() == m_k; }
    [[nodiscard]] auto size() const -> std::size_t { return m_heap.size(); }
    [[nodiscard]] auto capacity() const -> std::size_t { return m_k; }

    /// Contents in ranking order.
    [[nodiscard]] auto sorted() const -> RankedList;

  private:
    std::size_t m_k;
    // Heap with the worst-ranked entry on top.
    std::vector<RankedEntry> m_heap;
    Score m_threshold = kNegInf;
};

enum class Eligibility { All, RankOnly };

/// The global, local and final-ranking queues with their thresholds.
/// Each queue evicts independently of the other two.
class TripleTopK {
  public:
    TripleTopK(std::size_t k, double factor_f = 1.0);

    void offer(DocId doc, ScoreTriple const& triple, Eligibility eligibility);

    [[nodiscard]] auto theta_global() const -> Score { return m_global.threshold(); }
    [[nodiscard]] auto theta_local() const -> Score { return m_local.threshold(); }
    [[nodiscard]] auto theta_rank() const -> Score { return m_rank.threshold(); }

    /// Skip thresholds handed to the traversal: F * theta for the global and local queues.
    [[nodiscard]] auto skip_global() const -> Score { return scaled(m_global.threshold()); }
    [[nodiscard]] auto skip_local() const -> Score { return scaled(m_local.threshold()); }
    [[nodiscard]] auto factor() const -> double { return m_factor; }

    [[nodiscard]] auto global_queue() const -> TopKQueue const& { return m_global; }
    [[nodiscard]] auto local_queue() const -> TopKQueue const& { return m_local; }
    [[nodiscard]] auto rank_queue() const -> TopKQueue const& { return m_rank; }

  private:
    [[nodiscard]] auto scaled(Score theta) const -> Score
    {
        return theta == kNegInf ? kNegInf : m_factor * theta;
    }

    TopKQueue m_global;
    TopKQueue m_local;
    TopKQueue m_rank;
    double m_factor;
};

/// Final top-k: the rank queue's contents in ranking order.
[[nodiscard]] auto final_topk(TripleTopK const& queues) -> RankedList;

}  // namespace gti
