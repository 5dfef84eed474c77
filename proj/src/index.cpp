#include "gti/index.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace gti {

namespace {

    struct CorpusShape {
        std::vector<std::uint32_t> doc_lengths;
        double avg_doc_length = 0.0;
        std::unordered_map<TermId, std::uint64_t> bm25_df;
    };

    void check_weight(double w, DocId doc, TermId term)
    {
        if (std::isnan(w) || w < 0.0 || std::isinf(w)) {
            throw BuildError(
                "invalid learned weight " + std::to_string(w) + " for doc " + std::to_string(doc)
                + " term " + std::to_string(term));
        }
    }

    /// Validates ids and weights, and gathers document lengths and BM25 document frequencies.
    auto scan_corpus(Corpus const& corpus) -> CorpusShape
    {
        CorpusShape shape;
        auto n = corpus.size();
        shape.doc_lengths.assign(n, 0);
        std::vector<bool> seen(n, false);
        std::unordered_set<TermId> terms;
        std::uint64_t total = 0;
        for (auto const& doc : corpus) {
            if (doc.id >= n) {
                throw BuildError(
                    "doc id " + std::to_string(doc.id) + " outside dense range [0, "
                    + std::to_string(n) + ")");
            }
            if (seen[doc.id]) {
                throw BuildError("duplicate doc id " + std::to_string(doc.id));
            }
            seen[doc.id] = true;
            terms.clear();
            std::uint64_t len = 0;
            for (auto const& p : doc.postings) {
                if (!terms.insert(p.term).second) {
                    throw BuildError(
                        "duplicate (doc, term) pair (" + std::to_string(doc.id) + ", "
                        + std::to_string(p.term) + ")");
                }
                check_weight(p.learned, doc.id, p.term);
                len += p.tf;
                if (p.tf > 0) {
                    ++shape.bm25_df[p.term];
                }
            }
            if (len > std::numeric_limits<std::uint32_t>::max()) {
                throw BuildError("document " + std::to_string(doc.id) + " too long");
            }
            shape.doc_lengths[doc.id] = static_cast<std::uint32_t>(len);
            total += len;
        }
        shape.avg_doc_length = n == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(n);
        return shape;
    }

    auto mean_of_nonzero(std::span<double const> xs) -> std::optional<double>
    {
        double sum = 0.0;
        std::uint64_t count = 0;
        for (double x : xs) {
            if (x != 0.0) {
                sum += x;
                ++count;
            }
        }
        if (count == 0) {
            return std::nullopt;
        }
        return sum / static_cast<double>(count);
    }

    void collect_weights(
        Corpus const& corpus,
        CorpusShape const& shape,
        Bm25Params const& params,
        std::vector<double>& bm25,
        std::vector<double>& learned)
    {
        auto n = corpus.size();
        for (auto const& doc : corpus) {
            for (auto const& p : doc.postings) {
                if (p.tf > 0) {
                    bm25.push_back(bm25_weight(
                        p.tf,
                        shape.bm25_df.at(p.term),
                        shape.doc_lengths[doc.id],
                        shape.avg_doc_length,
                        n,
                        params));
                }
                if (p.learned != 0.0) {
                    learned.push_back(p.learned);
                }
            }
        }
    }

}  // namespace

auto DualIndex::find(TermId term) const -> PostingList const*
{
    auto it = std::lower_bound(
        lists.begin(), lists.end(), term, [](PostingList const& l, TermId t) { return l.term < t; });
    if (it == lists.end() || it->term != term) {
        return nullptr;
    }
    return &*it;
}

auto DualIndex::posting_count() const -> std::uint64_t
{
    std::uint64_t total = 0;
    for (auto const& l : lists) {
        total += l.records.size();
    }
    return total;
}

auto compute_alignment_stats(
    std::span<double const> bm25_weights, std::span<double const> learned_weights)
    -> AlignmentStats
{
    auto mean_b = mean_of_nonzero(bm25_weights);
    auto mean_l = mean_of_nonzero(learned_weights);
    if (!mean_b) {
        throw AlignmentError("no posting has a nonzero BM25 weight");
    }
    if (!mean_l) {
        throw AlignmentError("no posting has a nonzero learned weight");
    }
    AlignmentStats stats;
    stats.mean_bm25 = *mean_b;
    stats.mean_learned = *mean_l;
    stats.scale_ratio = *mean_b / *mean_l;
    return stats;
}

auto compute_alignment_stats(Corpus const& corpus, Bm25Params const& params) -> AlignmentStats
{
    params.validate();
    auto shape = scan_corpus(corpus);
    std::vector<double> bm25;
    std::vector<double> learned;
    collect_weights(corpus, shape, params, bm25, learned);
    return compute_alignment_stats(bm25, learned);
}

auto make_blocks(std::span<PostingRecord const> records, std::uint32_t block_size)
    -> std::vector<BlockMeta>
{
    if (block_size == 0) {
        throw DomainError("block size must be at least 1");
    }
    std::vector<BlockMeta> blocks;
    blocks.reserve((records.size() + block_size - 1) / block_size);
    for (std::size_t first = 0; first < records.size(); first += block_size) {
        auto last = std::min(records.size(), first + block_size) - 1;
        BlockMeta meta;
        meta.first = first;
        meta.last = last;
        meta.max_doc = records[last].doc;
        for (auto i = first; i <= last; ++i) {
            meta.max_bm25 = std::max(meta.max_bm25, records[i].bm25);
            meta.max_learned = std::max(meta.max_learned, records[i].learned);
        }
        blocks.push_back(meta);
    }
    return blocks;
}

auto build_index(Corpus const& corpus, BuildOptions const& options) -> DualIndex
{
    options.bm25.validate();
    if (options.block_size == 0) {
        throw DomainError("block size must be at least 1");
    }
    auto shape = scan_corpus(corpus);
    auto n = static_cast<std::uint64_t>(corpus.size());

    DualIndex index;
    index.num_docs = n;
    index.avg_doc_length = shape.avg_doc_length;
    index.bm25 = options.bm25;
    index.block_size = options.block_size;
    index.alignment = options.alignment;

    {
        std::vector<double> bm25;
        std::vector<double> learned;
        collect_weights(corpus, shape, options.bm25, bm25, learned);
        if (options.alignment.fill == FillMode::Scaled) {
            index.alignment_stats = compute_alignment_stats(bm25, learned);
        } else {
            // Informational only; nothing reads the ratio outside scaled filling.
            index.alignment_stats.mean_bm25 = mean_of_nonzero(bm25).value_or(0.0);
            index.alignment_stats.mean_learned = mean_of_nonzero(learned).value_or(0.0);
        }
    }

    std::map<TermId, std::vector<PostingRecord>> by_term;
    std::uint64_t filled = 0;
    for (auto const& doc : corpus) {
        auto len = shape.doc_lengths[doc.id];
        for (auto const& p : doc.postings) {
            PostingRecord rec{doc.id, p.tf, 0.0, p.learned};
            if (p.tf > 0) {
                if (p.learned == 0.0 && !options.alignment.include_learned_zero) {
                    continue;
                }
                rec.bm25 = bm25_weight(
                    p.tf, shape.bm25_df.at(p.term), len, shape.avg_doc_length, n, options.bm25);
            } else {
                if (p.learned == 0.0) {
                    continue;
                }
                switch (options.alignment.fill) {
                case FillMode::Zero:
                    rec.bm25 = 0.0;
                    break;
                case FillMode::One: {
                    // A filled token counts as present once: a document with no
                    // BM25 tokens gets length 1, a term unseen by BM25 gets df 1.
                    auto df_it = shape.bm25_df.find(p.term);
                    std::uint64_t df = df_it == shape.bm25_df.end() ? 1 : df_it->second;
                    double avg = shape.avg_doc_length > 0.0 ? shape.avg_doc_length : 1.0;
                    rec.tf = 1;
                    rec.bm25 = bm25_weight(1, df, std::max<std::uint64_t>(len, 1), avg, n, options.bm25);
                    break;
                }
                case FillMode::Scaled:
                    rec.bm25 = scaled_fill_weight(p.learned, index.alignment_stats);
                    break;
                }
                ++filled;
            }
            by_term[p.term].push_back(rec);
        }
    }
    index.alignment_stats.filled_count = filled;

    index.doc_lengths = std::move(shape.doc_lengths);
    index.lists.reserve(by_term.size());
    for (auto& [term, records] : by_term) {
        std::sort(records.begin(), records.end(), [](auto const& a, auto const& b) {
            return a.doc < b.doc;
        });
        PostingList list;
        list.term = term;
        for (auto const& r : records) {
            list.max_bm25 = std::max(list.max_bm25, r.bm25);
            list.max_learned = std::max(list.max_learned, r.learned);
        }
        list.blocks = make_blocks(records, options.block_size);
        list.records = std::move(records);
        index.lists.push_back(std::move(list));
    }
    return index;
}

}  // namespace gti
