#include "gti/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gti {

namespace {

    void check_coeff(double c, char const* name)
    {
        if (!(c >= 0.0 && c <= 1.0)) {
            throw DomainError(std::string(name) + " must lie in [0,1], got " + std::to_string(c));
        }
    }

    // Heap comparator: the worst-ranked entry rises to the top.
    auto heap_less(RankedEntry const& a, RankedEntry const& b) -> bool { return ranks_before(a, b); }

}  // namespace

void MixCoefficients::validate() const
{
    check_coeff(alpha, "alpha");
    check_coeff(beta, "beta");
    check_coeff(gamma, "gamma");
}

auto combine(Score bm25, Score learned, double coeff) -> Score
{
    check_coeff(coeff, "combination coefficient");
    return mix(bm25, learned, coeff);
}

void sort_ranked(RankedList& list) { std::sort(list.begin(), list.end(), ranks_before); }

TopKQueue::TopKQueue(std::size_t k) : m_k(k)
{
    if (k == 0) {
        throw DomainError("k must be at least 1");
    }
    m_heap.reserve(k);
}

auto TopKQueue::offer(DocId doc, Score score) -> bool
{
    RankedEntry e{doc, score};
    if (m_heap.size() < m_k) {
        m_heap.push_back(e);
        std::push_heap(m_heap.begin(), m_heap.end(), heap_less);
    } else if (ranks_before(e, m_heap.front())) {
        std::pop_heap(m_heap.begin(), m_heap.end(), heap_less);
        m_heap.back() = e;
        std::push_heap(m_heap.begin(), m_heap.end(), heap_less);
    } else {
        return false;
    }
    if (m_heap.size() == m_k) {
        m_threshold = m_heap.front().score;
    }
    return true;
}

auto TopKQueue::sorted() const -> RankedList
{
    RankedList out(m_heap.begin(), m_heap.end());
    sort_ranked(out);
    return out;
}

TripleTopK::TripleTopK(std::size_t k, double factor_f)
    : m_global(k), m_local(k), m_rank(k), m_factor(factor_f)
{
    if (!(factor_f > 0.0) || std::isinf(factor_f)) {
        throw DomainError("threshold factor F must be positive");
    }
}

void TripleTopK::offer(DocId doc, ScoreTriple const& triple, Eligibility eligibility)
{
    if (eligibility == Eligibility::All) {
        m_global.offer(doc, triple.global);
        m_local.offer(doc, triple.local);
    }
    m_rank.offer(doc, triple.rank);
}

auto final_topk(TripleTopK const& queues) -> RankedList { return queues.rank_queue().sorted(); }

}  // namespace gti
