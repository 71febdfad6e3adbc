#pragma once

// Tree decompositions: elimination-order heuristics, validation, rooting,
// and exact treewidth for small graphs.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "repairkit/graph.hpp"
#include "repairkit/hypergraph.hpp"

namespace repairkit {

enum class Heuristic { min_fill, min_degree };

std::optional<Heuristic> parse_heuristic(const std::string& name);
std::string to_string(Heuristic h);

using BagIndex = std::uint32_t;

/// Bags over node ids, tree edges between bag indices, a root, and for every
/// bag the ordered list of its children.
struct RootedDecomposition {
    std::vector<FactSet> bags;
    std::vector<std::pair<BagIndex, BagIndex>> tree_edges;
    BagIndex root = 0;
    std::vector<std::vector<BagIndex>> children;

    std::size_t max_bag_size() const;
    /// Largest bag size minus one; 0 for a decomposition whose bags are all empty.
    std::size_t width() const;
    /// Parent of every bag; nullopt for the root.
    std::vector<std::optional<BagIndex>> parents() const;
    /// Bags listed so that every child precedes its parent.
    std::vector<BagIndex> post_order() const;

    bool operator==(const RootedDecomposition&) const = default;
};

/// Order in which vertices are eliminated; ties break towards the smaller id.
std::vector<Vertex> elimination_order(const Graph& g, Heuristic heuristic);

/// Decomposition of g from the elimination order, with subsumed bags
/// contracted, components hung below the root bag, rooted at bag 0.
/// An empty graph yields one empty bag.
RootedDecomposition decompose(const Graph& g, Heuristic heuristic = Heuristic::min_fill);
RootedDecomposition decompose(const LabeledHypergraph& h,
                              Heuristic heuristic = Heuristic::min_fill);

/// First violated condition (tree shape, coverage, edge containment,
/// connectedness, child lists), or nullopt when t is valid for h.
std::optional<std::string> find_violation(const RootedDecomposition& t,
                                          const LabeledHypergraph& h);
std::optional<std::string> find_violation(const RootedDecomposition& t, const Graph& g);

inline bool validate(const RootedDecomposition& t, const LabeledHypergraph& h) {
    return !find_violation(t, h);
}
inline bool validate(const RootedDecomposition& t, const Graph& g) { return !find_violation(t, g); }

/// Re-roots t at `root` and orders each child list by bag index. Throws
/// PreconditionError when the tree edges do not form a tree or root is out
/// of range.
RootedDecomposition root_and_order(RootedDecomposition t, BagIndex root);

/// Treewidth computed exactly per connected component. Throws SizeGuardError
/// when a component has more than `limit` vertices.
std::size_t exact_treewidth(const Graph& g, std::size_t limit = 12);

}  // namespace repairkit
