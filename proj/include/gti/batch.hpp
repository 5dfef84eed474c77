#pragma once

#include <span>
#include <vector>

#include "gti/query.hpp"

namespace gti {

/// Dispatch to the traversal named by config.algorithm. The exhaustive
/// algorithm ranks by the gamma-combination.
[[nodiscard]] auto run_traversal(Query const& query, DualIndex const& index, TraversalConfig const& config)
    -> QueryRun;

/// run_traversal with wall-clock latency recorded around the traversal only.
[[nodiscard]] auto run_query(Query const& query, DualIndex const& index, TraversalConfig const& config)
    -> QueryRun;

/// Reference batch: one query after another, results sorted by query id.
[[nodiscard]] auto run_batch_serial(
    std::span<Query const> queries, DualIndex const& index, TraversalConfig const& config)
    -> std::vector<QueryRun>;

/// OpenMP batch over queries; each traversal stays single-threaded. Output is
/// identical to run_batch_serial apart from latencies. threads == 0 uses the
/// OpenMP default.
[[nodiscard]] auto run_batch(
    std::span<Query const> queries, DualIndex const& index, TraversalConfig const& config, int threads = 0)
    -> std::vector<QueryRun>;

/// Query id order: numeric when both ids are integers, lexicographic otherwise.
[[nodiscard]] auto query_id_less(std::string const& a, std::string const& b) -> bool;

}  // namespace gti
