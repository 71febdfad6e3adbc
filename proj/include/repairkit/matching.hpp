#pragma once

// Backtracking homomorphism search of conjunctions into a set of facts.

#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "repairkit/relational.hpp"

namespace repairkit {

/// Per-relation and per-(relation, position, value) lookup over a subset of a
/// database. Holds a reference to the database.
class FactIndex {
public:
    explicit FactIndex(const Database& db);
    FactIndex(const Database& db, const FactSet& subset);

    const Database& db() const noexcept { return *db_; }

    std::span<const FactId> facts_of(const std::string& relation) const;
    /// Facts of `relation` whose 0-based `position` holds `value`.
    std::span<const FactId> lookup(const std::string& relation, std::size_t position,
                                   const std::string& value) const;

private:
    void add(FactId id);

    const Database* db_;
    std::unordered_map<std::string, std::vector<FactId>> by_relation_;
    std::unordered_map<std::string, std::vector<FactId>> by_value_;
};

/// Called with the fact matched by each atom (in the caller's atom order) and
/// the assignment. Return false to stop the search.
using MatchVisitor = std::function<bool(std::span<const FactId>, const Assignment&)>;

/// Enumerates every assignment h with h(atom) in the index for all atoms and
/// all comparisons true under h. Comparisons over variables that no atom
/// binds are skipped. Returns false iff the visitor stopped the search.
bool for_each_match(const FactIndex& index, std::span<const Atom> atoms,
                    std::span<const Comparison> comparisons, const MatchVisitor& visit);

/// True iff some assignment satisfies the conjunction.
bool has_match(const FactIndex& index, std::span<const Atom> atoms,
               std::span<const Comparison> comparisons);

}  // namespace repairkit
