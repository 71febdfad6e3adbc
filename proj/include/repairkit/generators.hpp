#pragma once

// Instance families: the bipartite and chain witnesses separating the two
// treewidth measures, key-conflict paths, and seeded random instances.

#include <cstdint>
#include <optional>
#include <string>

#include "repairkit/relational.hpp"

namespace repairkit {

struct Instance {
    Database db;
    ConstraintSet constraints;
    Query query = Query::falsum();
};

/// {R(1..n), S(1..n)}, no constraints, q = R(?x), S(?y).
Instance gen_bipartite(std::size_t n);

/// {R(i,*), S(*,i), T(neg<i>)} for i = 1..n, no constraints,
/// q = R(?x,?y), S(?y,?z), T(?z).
Instance gen_chain(std::size_t n);

/// N binary R-facts whose conflict graph under keys R:1 and R:2 is a path.
/// Constants are a..z, then k26, k27, ...; N = 5 gives
/// R(a,b), R(c,b), R(c,d), R(e,d), R(e,f). The query is false.
Instance gen_path(std::size_t n);

enum class Family { bipartite, chain, path, random };
enum class ConstraintKind { primary_key, fd, dc };
enum class QueryKind { bcq, bucq };

std::optional<Family> parse_family(const std::string& name);
std::optional<ConstraintKind> parse_constraint_kind(const std::string& name);

struct GenSpec {
    Family family = Family::random;
    /// Family parameter; for random instances an upper bound on |db|.
    std::size_t n = 8;
    /// Largest block for primary-key instances; 1 gives a consistent db.
    std::size_t block_size = 2;
    ConstraintKind constraint_kind = ConstraintKind::primary_key;
    QueryKind query_kind = QueryKind::bcq;
    /// Relational atoms per disjunct and per denial constraint, at most.
    std::size_t max_atoms = 3;
    /// Constants per attribute; small values make conflicts likely.
    std::size_t domain_size = 3;
    std::uint64_t seed = 0;
};

/// Throws PreconditionError for a zero size parameter.
Instance gen_random(const GenSpec& spec);

/// Dispatches on spec.family.
Instance generate(const GenSpec& spec);

}  // namespace repairkit
