#pragma once

#include <cstdint>

#include "gti/common.hpp"

namespace gti {

/// Okapi BM25 parameters. Defaults follow common passage-retrieval settings.
struct Bm25Params {
    double k1 = 0.9;
    double b = 0.4;

    /// Throws DomainError unless k1 > 0 and 0 <= b <= 1.
    void validate() const;
};

/// ln(1 + (N - df + 0.5) / (df + 0.5)); always positive for 1 <= df <= N.
[[nodiscard]] auto bm25_idf(std::uint64_t df, std::uint64_t num_docs) -> double;

/// Lexical weight of a term occurring `tf` times in a document of length `doc_len`.
/// The query-side term weight is fixed to 1.
[[nodiscard]] auto bm25_weight(
    std::uint32_t tf,
    std::uint64_t df,
    std::uint64_t doc_len,
    double avg_doc_len,
    std::uint64_t num_docs,
    Bm25Params const& params) -> double;

}  // namespace gti
