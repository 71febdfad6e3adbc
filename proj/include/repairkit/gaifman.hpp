#pragma once

// The first-order structure encoding (db, Σ, q) for MSO model checking, its
// Gaifman graph, and the MSO sentence text.

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "repairkit/graph.hpp"
#include "repairkit/relational.hpp"
#include "repairkit/treedec.hpp"

namespace repairkit {

/// 0-based atom index pairs (i, j) of one disjunct whose atoms are q-linked:
/// i = j, a shared variable, or an inequality between a variable of each.
using LinkIndex = std::set<std::pair<std::size_t, std::size_t>>;

LinkIndex q_linked(const Disjunct& disjunct);

/// Some assignment maps atom i onto fi and atom j onto fj and satisfies every
/// inequality of the disjunct whose terms it binds. False unless (i, j) is
/// q-linked.
bool q_consistent(const Fact& fi, const Fact& fj, const Disjunct& disjunct, std::size_t i,
                  std::size_t j);

struct LinkedSymbol {
    std::size_t disjunct = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    auto operator<=>(const LinkedSymbol&) const = default;
};

/// Domain = fact ids of the database.
///
/// `depfails` is stored by element set: a tuple of `depfails_arity` facts
/// belongs to the relation iff the set of its entries is listed. Pure FD/key
/// constraint sets use arity 2; any denial constraint switches to arity
/// max(2, atoms per constraint).
struct GaifmanStructure {
    std::size_t domain_size = 0;
    std::size_t depfails_arity = 2;
    bool dc_encoding = false;
    std::vector<FactSet> depfails;
    std::map<LinkedSymbol, std::vector<std::pair<FactId, FactId>>> linked;
};

GaifmanStructure build_structure(const Database& db, const ConstraintSet& constraints,
                                 const Query& query);

/// Vertices = domain; an edge joins distinct facts that co-occur in a
/// depfails tuple or a linked pair.
Graph gaifman_graph(const GaifmanStructure& structure);

struct MsoEncoding {
    bool dc = false;
    std::size_t depfails_arity = 2;
};

MsoEncoding mso_encoding_for(const ConstraintSet& constraints);

/// S-expression text of the sentence that holds iff every repair satisfies q.
/// Depends only on the encoding and the query.
std::string emit_mso(const MsoEncoding& encoding, const Query& query);

struct TwMeasures {
    std::size_t tw_h_upper = 0;
    std::size_t tw_g_upper = 0;
    std::optional<std::size_t> tw_h_exact;
    std::optional<std::size_t> tw_g_exact;
};

/// Heuristic widths of the solution-conflict primal graph and the Gaifman
/// graph, with exact values when every component fits `exact_limit`.
TwMeasures tw_measures(const Database& db, const ConstraintSet& constraints, const Query& query,
                       Heuristic heuristic = Heuristic::min_fill, std::size_t exact_limit = 12);

}  // namespace repairkit
