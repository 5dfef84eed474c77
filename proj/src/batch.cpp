#include "gti/batch.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <exception>

#include <omp.h>

#include "gti/blockmax.hpp"
#include "gti/maxscore.hpp"
#include "gti/oracle.hpp"

namespace gti {

namespace {

    auto as_integer(std::string const& s) -> std::optional<unsigned long long>
    {
        unsigned long long v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
            return std::nullopt;
        }
        return v;
    }

    void sort_runs(std::vector<QueryRun>& runs)
    {
        std::stable_sort(runs.begin(), runs.end(), [](QueryRun const& a, QueryRun const& b) {
            return query_id_less(a.query_id, b.query_id);
        });
    }

}  // namespace

auto query_id_less(std::string const& a, std::string const& b) -> bool
{
    auto na = as_integer(a);
    auto nb = as_integer(b);
    if (na && nb && *na != *nb) {
        return *na < *nb;
    }
    return a < b;
}

auto run_traversal(Query const& query, DualIndex const& index, TraversalConfig const& config) -> QueryRun
{
    switch (config.algorithm) {
    case Algorithm::MaxScore2Gti: return maxscore_2gti(query, index, config);
    case Algorithm::Bmw2Gti: return bmw_2gti(query, index, config);
    case Algorithm::Exhaustive: {
        config.validate();
        QueryRun run;
        run.query_id = query.id;
        run.results = exhaustive_topk(query, index, config.coeffs.gamma, config.k);
        if (config.counters_enabled) {
            auto states = make_term_states(query, index, config.coeffs);
            run.counters.docs_fully_scored = candidate_count(states);
            for (auto const& s : states) {
                run.counters.postings_touched += s.cursor.list().size();
            }
        }
        return run;
    }
    }
    throw DomainError("unknown algorithm");
}

auto run_query(Query const& query, DualIndex const& index, TraversalConfig const& config) -> QueryRun
{
    auto start = std::chrono::steady_clock::now();
    auto run = run_traversal(query, index, config);
    auto stop = std::chrono::steady_clock::now();
    run.latency_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return run;
}

auto run_batch_serial(std::span<Query const> queries, DualIndex const& index, TraversalConfig const& config)
    -> std::vector<QueryRun>
{
    config.validate();
    std::vector<QueryRun> runs;
    runs.reserve(queries.size());
    for (auto const& q : queries) {
        runs.push_back(run_query(q, index, config));
    }
    sort_runs(runs);
    return runs;
}

auto run_batch(
    std::span<Query const> queries, DualIndex const& index, TraversalConfig const& config, int threads)
    -> std::vector<QueryRun>
{
    config.validate();
    std::vector<QueryRun> runs(queries.size());
    std::exception_ptr failure;
    auto n = static_cast<std::ptrdiff_t>(queries.size());
    if (threads <= 0) {
        threads = omp_get_max_threads();
    }
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            runs[static_cast<std::size_t>(i)] = run_query(queries[static_cast<std::size_t>(i)], index, config);
        } catch (...) {
#pragma omp critical
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    sort_runs(runs);
    return runs;
}

}  // namespace gti
