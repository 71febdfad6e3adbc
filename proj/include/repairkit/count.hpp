#pragma once

// Counting repairs that falsify a Boolean query by dynamic programming over
// a rooted tree decomposition of the solution-conflict hypergraph.
//
// For a bag b, a child prefix C of child(b) and r ⊆ s ⊆ b, f(r, s, b, C)
// counts the extensions of r into the facts of b and the subtrees below C
// that repair exactly s plus those facts and contain no solution edge inside
// any bag. g(r, s, b, c) with r ⊆ s ⊆ b ∩ c sums f over the choices inside
// c \ b. The count for the whole database is the sum of f(r, a, a, child(a))
// over r ⊆ a for the root bag a.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "repairkit/hypergraph.hpp"
#include "repairkit/relational.hpp"
#include "repairkit/repair_count.hpp"
#include "repairkit/treedec.hpp"

namespace repairkit {

/// Bags larger than this are refused unless forced; tables grow as 3^|bag|.
inline constexpr std::size_t kDefaultMaxBagSize = 25;
/// Bag-local masks are 32-bit.
inline constexpr std::size_t kHardMaxBagSize = 30;

/// r ∪ {A ∈ d | r ∪ {A} violates Σ}: the set that r max-repairs inside d.
/// Throws PreconditionError when r ⊄ d or r is inconsistent.
FactSet max_rep(const Database& db, const FactSet& r, const FactSet& d,
                const ConstraintSet& constraints);

/// r consistent, r ⊆ s ⊆ b, and max_rep(r, b) = s.
bool is_max_repair(const Database& db, const FactSet& r, const FactSet& s, const FactSet& b,
                   const ConstraintSet& constraints);

/// A subset of one bag as a bitmask over the bag's facts in ascending id order.
struct BagLocalSubset {
    BagIndex bag = 0;
    std::uint32_t mask = 0;
};

/// Bitmask ↔ fact set conversion for one bag.
std::uint32_t to_mask(const FactSet& bag, const FactSet& subset);
FactSet from_mask(const FactSet& bag, std::uint32_t mask);

/// Dense table over pairs r ⊆ s of a ground set of `size` elements, one
/// entry per element state (absent, in s only, in r). Holds 3^size entries.
class PairTable {
public:
    PairTable() = default;
    explicit PairTable(std::size_t size);

    std::size_t ground_size() const noexcept { return size_; }
    std::size_t entries() const noexcept { return values_.size(); }

    static std::uint64_t index(std::uint32_t r, std::uint32_t s);

    const RepairCount& at(std::uint32_t r, std::uint32_t s) const { return values_[index(r, s)]; }
    RepairCount& at(std::uint32_t r, std::uint32_t s) { return values_[index(r, s)]; }

private:
    std::size_t size_ = 0;
    std::vector<RepairCount> values_;
};

/// Retained f and g tables of one run, keyed the way the recursion is.
struct MemoTables {
    /// f[bag][k] is f(·, ·, bag, first k children); masks are over the bag.
    std::vector<std::vector<PairTable>> f;
    /// g[child] is g(·, ·, parent(child), child); masks are over
    /// parent ∩ child in ascending id order.
    std::vector<PairTable> g;

    /// Lookups by fact sets; throws PreconditionError when r ⊄ s or s is
    /// not inside the relevant ground set.
    RepairCount f_value(const RootedDecomposition& t, BagIndex bag, std::size_t prefix,
                        const FactSet& r, const FactSet& s) const;
    RepairCount g_value(const RootedDecomposition& t, BagIndex child, const FactSet& r,
                        const FactSet& s) const;
};

struct CountOptions {
    std::size_t max_bag_size = kDefaultMaxBagSize;
    bool force = false;
    /// Keep every f table (all child prefixes) and g table in the result.
    bool retain_tables = false;
    /// When set, every stored f and g entry is printed here.
    std::ostream* trace = nullptr;
};

struct DpStats {
    std::size_t bags = 0;
    std::size_t max_bag_size = 0;
    /// Table entries per bag (f tables over the bag, g tables over the
    /// separator to its parent), largest over all prefixes.
    std::vector<std::size_t> memo_entries;
    /// memo_entries[b] <= 3^|bag b| for every bag.
    bool within_bound = true;
};

struct DpResult {
    RepairCount count;
    DpStats stats;
    std::optional<MemoTables> tables;
};

/// Number of repairs of db over Σ that falsify q, where h is the
/// solution-conflict hypergraph of (db, Σ, q) and t decomposes it. Throws
/// PreconditionError for an invalid decomposition and SizeGuardError for
/// oversized bags.
DpResult number_falsify(const Database& db, const LabeledHypergraph& h,
                        const RootedDecomposition& t, const CountOptions& options = {});

/// Builds the solution-conflict hypergraph itself.
DpResult number_falsify(const Database& db, const ConstraintSet& constraints, const Query& query,
                        const RootedDecomposition& t, const CountOptions& options = {});

struct RepairCounts {
    RepairCount total;
    RepairCount falsifying;
    RepairCount satisfying;
};

/// Counts for (db, Σ, q): one decomposition of the solution-conflict
/// hypergraph serves both the q and the false-query run.
RepairCounts count_repairs(const Database& db, const ConstraintSet& constraints,
                           const Query& query, Heuristic heuristic = Heuristic::min_fill,
                           const CountOptions& options = {});

/// Repairs satisfying q: total minus falsifying.
RepairCount count_satisfying(const Database& db, const ConstraintSet& constraints,
                             const Query& query, Heuristic heuristic = Heuristic::min_fill);

/// True iff every repair satisfies q.
bool cqa_decide(const Database& db, const ConstraintSet& constraints, const Query& query,
                Heuristic heuristic = Heuristic::min_fill);

}  // namespace repairkit
