#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gti/bm25.hpp"
#include "gti/common.hpp"

namespace gti {

/// One (term, tf, learned weight) entry of a tokenized document.
/// tf == 0 marks a term that only the learned model assigns to the document.
struct CorpusPosting {
    TermId term = 0;
    std::uint32_t tf = 0;
    double learned = 0.0;
};

struct CorpusDocument {
    DocId id = 0;
    std::vector<CorpusPosting> postings;
};

using Corpus = std::vector<CorpusDocument>;

/// How a missing BM25 weight is filled for a posting that only the learned side has.
enum class FillMode : std::uint8_t { Zero = 0, One = 1, Scaled = 2 };

struct AlignmentMode {
    FillMode fill = FillMode::Zero;
    /// Keep postings with a BM25 weight but a zero learned weight.
    bool include_learned_zero = false;

    friend auto operator==(AlignmentMode const&, AlignmentMode const&) -> bool = default;
};

/// Means of the nonzero weights on each side, used by scaled filling.
struct AlignmentStats {
    double mean_bm25 = 0.0;
    double mean_learned = 0.0;
    double scale_ratio = 0.0;
    std::uint64_t filled_count = 0;

    friend auto operator==(AlignmentStats const&, AlignmentStats const&) -> bool = default;
};

struct PostingRecord {
    DocId doc = 0;
    std::uint32_t tf = 0;
    double bm25 = 0.0;
    double learned = 0.0;

    friend auto operator==(PostingRecord const&, PostingRecord const&) -> bool = default;
};

/// Contiguous record range [first, last] of a posting list with its weight maxima.
struct BlockMeta {
    std::uint64_t first = 0;
    std::uint64_t last = 0;
    DocId max_doc = 0;
    double max_bm25 = 0.0;
    double max_learned = 0.0;

    friend auto operator==(BlockMeta const&, BlockMeta const&) -> bool = default;
};

struct PostingList {
    TermId term = 0;
    std::vector<PostingRecord> records;
    double max_bm25 = 0.0;
    double max_learned = 0.0;
    std::vector<BlockMeta> blocks;

    [[nodiscard]] auto size() const -> std::size_t { return records.size(); }

    friend auto operator==(PostingList const&, PostingList const&) -> bool = default;
};

/// Immutable dual-weight inverted index: every posting carries a BM25 and a learned weight.
struct DualIndex {
    std::uint64_t num_docs = 0;
    std::vector<std::uint32_t> doc_lengths;
    double avg_doc_length = 0.0;
    Bm25Params bm25;
    std::uint32_t block_size = 64;
    AlignmentMode alignment;
    AlignmentStats alignment_stats;
    /// Sorted by term id.
    std::vector<PostingList> lists;

    /// nullptr when the term has no postings.
    [[nodiscard]] auto find(TermId term) const -> PostingList const*;
    [[nodiscard]] auto posting_count() const -> std::uint64_t;

    friend auto operator==(DualIndex const& a, DualIndex const& b) -> bool
    {
        return a.num_docs == b.num_docs && a.doc_lengths == b.doc_lengths
            && a.avg_doc_length == b.avg_doc_length && a.bm25.k1 == b.bm25.k1
            && a.bm25.b == b.bm25.b && a.block_size == b.block_size
            && a.alignment == b.alignment && a.alignment_stats == b.alignment_stats
            && a.lists == b.lists;
    }
};

struct BuildOptions {
    Bm25Params bm25;
    std::uint32_t block_size = 64;
    AlignmentMode alignment;
};

/// Means over the nonzero entries of each sample. Throws AlignmentError if either
/// side has no nonzero weight.
[[nodiscard]] auto compute_alignment_stats(
    std::span<double const> bm25_weights, std::span<double const> learned_weights)
    -> AlignmentStats;

/// Alignment statistics of a corpus: BM25 weights of every posting with tf > 0
/// and learned weights of every posting with a nonzero learned weight.
[[nodiscard]] auto compute_alignment_stats(Corpus const& corpus, Bm25Params const& params)
    -> AlignmentStats;

/// BM25 weight substituted for a learned-only posting under scaled filling.
[[nodiscard]] inline auto scaled_fill_weight(double learned, AlignmentStats const& stats) -> double
{
    return stats.scale_ratio * learned;
}

/// Build the merged index. Throws BuildError on duplicate documents, duplicate
/// (doc, term) pairs, non-dense document ids or invalid weights; AlignmentError
/// when scaled filling has no statistics to work from.
[[nodiscard]] auto build_index(Corpus const& corpus, BuildOptions const& options) -> DualIndex;

/// Split a sorted record sequence into fixed-size blocks with exact maxima.
[[nodiscard]] auto make_blocks(std::span<PostingRecord const> records, std::uint32_t block_size)
    -> std::vector<BlockMeta>;

}  // namespace gti
