#include "gti/query.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace gti {

auto algorithm_name(Algorithm a) -> char const*
{
    switch (a) {
    case Algorithm::MaxScore2Gti: return "maxscore-2gti";
    case Algorithm::Bmw2Gti: return "bmw-2gti";
    case Algorithm::Exhaustive: return "exhaustive";
    }
    return "unknown";
}

auto parse_algorithm(std::string const& name) -> Algorithm
{
    if (name == "maxscore-2gti") {
        return Algorithm::MaxScore2Gti;
    }
    if (name == "bmw-2gti") {
        return Algorithm::Bmw2Gti;
    }
    if (name == "exhaustive") {
        return Algorithm::Exhaustive;
    }
    throw DomainError("unknown algorithm '" + name + "'");
}

void TraversalConfig::validate() const
{
    coeffs.validate();
    if (k == 0) {
        throw DomainError("k must be at least 1");
    }
    if (!(factor_f > 0.0) || std::isinf(factor_f)) {
        throw DomainError("threshold factor F must be positive and finite");
    }
}

auto EffortCounters::operator+=(EffortCounters const& o) -> EffortCounters&
{
    docs_fully_scored += o.docs_fully_scored;
    docs_locally_pruned += o.docs_locally_pruned;
    docs_globally_skipped += o.docs_globally_skipped;
    postings_touched += o.postings_touched;
    repartition_count += o.repartition_count;
    blocks_opened += o.blocks_opened;
    return *this;
}

void PostingCursor::next()
{
    ++m_pos;
    ++m_touched;
    auto const& blocks = m_list->blocks;
    if (m_block < blocks.size() && m_pos > blocks[m_block].last) {
        ++m_block;
    }
}

void PostingCursor::next_geq(DocId target)
{
    auto const& records = m_list->records;
    if (m_pos >= records.size() || records[m_pos].doc >= target) {
        return;
    }
    auto const& blocks = m_list->blocks;
    while (m_block < blocks.size() && blocks[m_block].max_doc < target) {
        ++m_block;
    }
    if (m_block == blocks.size()) {
        m_pos = records.size();
        return;
    }
    auto begin = std::max<std::size_t>(m_pos, blocks[m_block].first);
    auto end = blocks[m_block].last + 1;
    auto it = std::lower_bound(
        records.begin() + static_cast<std::ptrdiff_t>(begin),
        records.begin() + static_cast<std::ptrdiff_t>(end),
        target,
        [](PostingRecord const& r, DocId d) { return r.doc < d; });
    m_pos = static_cast<std::size_t>(it - records.begin());
    ++m_touched;
}

auto PostingCursor::block_covering(DocId target) const -> std::optional<std::size_t>
{
    auto const& blocks = m_list->blocks;
    auto b = m_block;
    while (b < blocks.size() && blocks[b].max_doc < target) {
        ++b;
    }
    if (b == blocks.size() || m_list->records[blocks[b].first].doc > target) {
        return std::nullopt;
    }
    return b;
}

auto make_term_states(Query const& query, DualIndex const& index, MixCoefficients const& coeffs)
    -> std::vector<QueryTermState>
{
    std::vector<QueryTermState> states;
    states.reserve(query.terms.size());
    for (auto term : query.terms) {
        auto const* list = index.find(term);
        if (list == nullptr) {
            continue;
        }
        states.push_back(QueryTermState{
            states.size(),
            PostingCursor(*list),
            mix(list->max_bm25, list->max_learned, coeffs.alpha),
            mix(list->max_bm25, list->max_learned, coeffs.beta)});
    }
    return states;
}

auto read_queries(std::istream& in) -> std::vector<Query>
{
    std::vector<Query> queries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto where = "query line " + std::to_string(lineno);
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0) {
            throw ParseError(where, "expected qid<TAB>terms");
        }
        Query q;
        q.id = line.substr(0, tab);
        std::istringstream fields(line.substr(tab + 1));
        std::string tok;
        while (fields >> tok) {
            TermId t = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), t);
            if (ec != std::errc() || ptr != tok.data() + tok.size()) {
                throw ParseError(where, "bad term id '" + tok + "'");
            }
            q.terms.push_back(t);
        }
        queries.push_back(std::move(q));
    }
    return queries;
}

auto read_queries(std::filesystem::path const& path) -> std::vector<Query>
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open queries " + path.string());
    }
    return read_queries(in);
}

}  // namespace gti
