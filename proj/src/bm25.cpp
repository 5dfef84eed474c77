#include "gti/bm25.hpp"

#include <cmath>
#include <string>

namespace gti {

void Bm25Params::validate() const
{
    if (!(k1 > 0.0)) {
        throw DomainError("bm25 k1 must be positive, got " + std::to_string(k1));
    }
    if (!(b >= 0.0 && b <= 1.0)) {
        throw DomainError("bm25 b must lie in [0,1], got " + std::to_string(b));
    }
}

auto bm25_idf(std::uint64_t df, std::uint64_t num_docs) -> double
{
    if (df == 0) {
        throw DomainError("bm25 document frequency must be positive");
    }
    if (df > num_docs) {
        throw DomainError("bm25 document frequency exceeds collection size");
    }
    auto n = static_cast<double>(num_docs);
    auto f = static_cast<double>(df);
    return std::log(1.0 + (n - f + 0.5) / (f + 0.5));
}

auto bm25_weight(
    std::uint32_t tf,
    std::uint64_t df,
    std::uint64_t doc_len,
    double avg_doc_len,
    std::uint64_t num_docs,
    Bm25Params const& params) -> double
{
    if (tf == 0) {
        throw DomainError("bm25 term frequency must be at least 1");
    }
    if (doc_len == 0) {
        throw DomainError("bm25 document length must be positive");
    }
    if (!(avg_doc_len > 0.0)) {
        throw DomainError("bm25 average document length must be positive");
    }
    params.validate();
    double idf = bm25_idf(df, num_docs);
    double f = tf;
    double norm = params.k1 * (1.0 - params.b + params.b * static_cast<double>(doc_len) / avg_doc_len);
    return idf * f * (params.k1 + 1.0) / (f + norm);
}

}  // namespace gti
