#pragma once

// Conflict and solution-conflict hypergraphs over the facts of a database.

#include <cstddef>
#include <vector>

#include "repairkit/graph.hpp"
#include "repairkit/relational.hpp"

namespace repairkit {

enum class EdgeLabel { conflict, solution };

/// Nodes are the fact ids 0..node_count-1 of one database. Edge lists are
/// sorted by (size, lexicographic) and duplicate-free.
struct LabeledHypergraph {
    std::size_t node_count = 0;
    std::vector<FactSet> conflict_edges;
    std::vector<FactSet> solution_edges;

    std::size_t edge_count() const noexcept {
        return conflict_edges.size() + solution_edges.size();
    }
    /// The conflict hypergraph underlying this one.
    LabeledHypergraph conflicts_only() const { return {node_count, conflict_edges, {}}; }

    bool operator==(const LabeledHypergraph&) const = default;
};

/// Keeps the subset-minimal sets of a family; output in canonical edge order.
std::vector<FactSet> minimize_sets(std::vector<FactSet> family);

/// Subset-minimal inconsistent subsets of db.
std::vector<FactSet> minimal_conflicts(const Database& db, const ConstraintSet& constraints);

/// Subset-minimal subsets of db satisfying q; empty for the false query.
std::vector<FactSet> minimal_solutions(const Database& db, const Query& query);

LabeledHypergraph build_solution_conflict(const Database& db, const ConstraintSet& constraints,
                                          const Query& query);

/// Same nodes; u and v adjacent iff they are distinct and share a hyperedge.
Graph primal_graph(const LabeledHypergraph& h);

/// Largest node set containing no hyperedge, by exhaustive search.
/// Throws SizeGuardError when node_count > limit.
std::size_t max_independent_set_size(const LabeledHypergraph& h, std::size_t limit = 24);

}  // namespace repairkit
