#pragma once

// Brute-force ground truth over all subsets of small databases.

#include <cstddef>
#include <vector>

#include "repairkit/hypergraph.hpp"
#include "repairkit/relational.hpp"
#include "repairkit/repair_count.hpp"

namespace repairkit {

inline constexpr std::size_t kDefaultOracleLimit = 20;

/// Subset-maximal consistent subsets of db, in canonical (lexicographic) order.
using RepairList = std::vector<FactSet>;

/// Throws SizeGuardError when |db| > limit.
RepairList enumerate_repairs(const Database& db, const ConstraintSet& constraints,
                             std::size_t limit = kDefaultOracleLimit);

struct OracleCounts {
    RepairCount total;
    RepairCount falsifying;
    RepairCount satisfying;
};

OracleCounts oracle_counts(const Database& db, const ConstraintSet& constraints, const Query& query,
                           std::size_t limit = kDefaultOracleLimit);

/// Maximal node sets containing no hyperedge, in canonical order.
std::vector<FactSet> maximal_independent_sets(const LabeledHypergraph& h,
                                              std::size_t limit = kDefaultOracleLimit);

/// Repairs of db coincide with the maximal independent sets of its conflict
/// hypergraph.
bool check_mis_correspondence(const Database& db, const ConstraintSet& constraints,
                              std::size_t limit = kDefaultOracleLimit);

/// Worker threads for parallel loops: REPAIRKIT_THREADS, or the hardware
/// concurrency when unset or 0.
std::size_t worker_threads();

}  // namespace repairkit
