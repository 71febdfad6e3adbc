#include "repairkit/count.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <ostream>

#include "repairkit/errors.hpp"

namespace repairkit {

namespace {

// Σ 3^i over the set bits i of a 10-bit chunk.
constexpr std::array<std::uint64_t, 1024> make_ternary_chunk() {
    std::array<std::uint64_t, 1024> out{};
    for (std::uint32_t m = 0; m < 1024; ++m) {
        std::uint64_t value = 0;
        std::uint64_t power = 1;
        for (int i = 0; i < 10; ++i) {
            if (m & (1u << i)) value += power;
            power *= 3;
        }
        out[m] = value;
    }
    return out;
}

constexpr auto kTernaryChunk = make_ternary_chunk();
constexpr std::uint64_t kPow3_10 = 59049;
constexpr std::uint64_t kPow3_20 = kPow3_10 * kPow3_10;

std::uint64_t ternary(std::uint32_t m) {
    return kTernaryChunk[m & 1023] + kTernaryChunk[(m >> 10) & 1023] * kPow3_10 +
           kTernaryChunk[(m >> 20) & 1023] * kPow3_20;
}

std::uint64_t pow3(std::size_t k) {
    std::uint64_t p = 1;
    for (std::size_t i = 0; i < k; ++i) p *= 3;
    return p;
}

std::uint32_t low_bits(std::size_t k) { return k >= 32 ? ~0u : (1u << k) - 1; }

// Calls fn(sub) for every submask of `mask`, including 0 and mask itself.
template <class Fn>
void for_each_submask(std::uint32_t mask, Fn&& fn) {
    std::uint32_t sub = mask;
    while (true) {
        fn(sub);
        if (sub == 0) break;
        sub = (sub - 1) & mask;
    }
}

// Positions of b ∩ c inside b and inside c.
struct Separator {
    std::size_t size = 0;
    std::vector<std::uint32_t> in_parent;  // separator mask -> parent-local mask
    std::vector<std::uint32_t> in_child;   // separator mask -> child-local mask
    std::vector<std::size_t> parent_pos;
    std::uint32_t parent_mask = 0;     // b ∩ c inside b
    std::uint32_t child_only_mask = 0; // c \ b inside c

    Separator(const FactSet& parent, const FactSet& child) {
        std::vector<std::size_t> child_pos;
        for (std::size_t j = 0; j < child.size(); ++j) {
            auto it = std::lower_bound(parent.begin(), parent.end(), child[j]);
            if (it != parent.end() && *it == child[j]) {
                parent_pos.push_back(static_cast<std::size_t>(it - parent.begin()));
                child_pos.push_back(j);
            } else {
                child_only_mask |= 1u << j;
            }
        }
        size = parent_pos.size();
        in_parent.assign(std::size_t{1} << size, 0);
        in_child.assign(std::size_t{1} << size, 0);
        for (std::uint32_t m = 1; m < in_parent.size(); ++m) {
            const int low = std::countr_zero(m);
            const std::uint32_t rest = m & (m - 1);
            in_parent[m] = in_parent[rest] | (1u << parent_pos[low]);
            in_child[m] = in_child[rest] | (1u << child_pos[low]);
        }
        parent_mask = in_parent.back();
    }

    std::uint32_t from_parent(std::uint32_t parent_local) const {
        std::uint32_t out = 0;
        for (std::size_t i = 0; i < size; ++i) {
            if (parent_local & (1u << parent_pos[i])) out |= 1u << i;
        }
        return out;
    }
};

struct BagEdges {
    std::vector<std::uint32_t> conflicts;
    std::vector<std::uint32_t> solutions;
};

std::vector<BagEdges> edges_per_bag(const LabeledHypergraph& h, const RootedDecomposition& t) {
    std::vector<std::vector<BagIndex>> bags_of(h.node_count);
    for (BagIndex b = 0; b < t.bags.size(); ++b) {
        for (FactId v : t.bags[b]) bags_of[v].push_back(b);
    }
    std::vector<BagEdges> out(t.bags.size());
    auto place = [&](const std::vector<FactSet>& edges, auto member) {
        for (const auto& e : edges) {
            if (e.empty()) continue;
            for (BagIndex b : bags_of[e.front()]) {
                if (is_subset(e, t.bags[b])) (out[b].*member).push_back(to_mask(t.bags[b], e));
            }
        }
    };
    place(h.conflict_edges, &BagEdges::conflicts);
    place(h.solution_edges, &BagEdges::solutions);
    return out;
}

// f(r, s, b, ()) = 1 iff r is consistent, its max-repair inside b is s, and r
// holds no solution edge.
PairTable leaf_table(std::size_t k, const BagEdges& edges) {
    PairTable table(k);
    auto contains_any = [](const std::vector<std::uint32_t>& masks, std::uint32_t r) {
        return std::any_of(masks.begin(), masks.end(), [r](std::uint32_t e) { return (e & r) == e; });
    };
    for (std::uint32_t r = 0; r <= low_bits(k); ++r) {
        if (!contains_any(edges.conflicts, r) && !contains_any(edges.solutions, r)) {
            std::uint32_t s = r;
            for (std::uint32_t e : edges.conflicts) {
                const std::uint32_t missing = e & ~r;
                if (std::popcount(missing) == 1) s |= missing;
            }
            table.at(r, s) = 1;
        }
        if (r == low_bits(k)) break;
    }
    return table;
}

// g(R, S, b, c) = Σ_{r' ⊆ c \ b} f(R ∪ r', S ∪ (c \ b), c, child(c)).
PairTable g_table(const Separator& sep, const PairTable& child_f) {
    PairTable g(sep.size);
    const std::uint32_t full = low_bits(sep.size);
    for (std::uint32_t s = 0;; ++s) {
        const std::uint32_t s_child = sep.in_child[s] | sep.child_only_mask;
        for_each_submask(s, [&](std::uint32_t r) {
            RepairCount sum = 0;
            const std::uint32_t r_child = sep.in_child[r];
            for_each_submask(sep.child_only_mask, [&](std::uint32_t extra) {
                const RepairCount& v = child_f.at(r_child | extra, s_child);
                if (!v.is_zero()) sum += v;
            });
            g.at(r, s) = std::move(sum);
        });
        if (s == full) break;
    }
    return g;
}

// f(r, s, b, C·c) = Σ_{s' ∪ s'' = s ∩ c, r ∩ c ⊆ s' ∩ s''}
//                     f(r, (s \ c) ∪ s', b, C) · g(r ∩ c, s'', b, c).
PairTable extend_table(std::size_t k, const PairTable& f, const Separator& sep, const PairTable& g) {
    PairTable out(k);
    const std::uint32_t full = low_bits(k);
    for (std::uint32_t s = 0;; ++s) {
        const std::uint32_t s_sep = sep.from_parent(s & sep.parent_mask);
        const std::uint32_t s_outside = s & ~sep.parent_mask;
        for_each_submask(s, [&](std::uint32_t r) {
            const std::uint32_t r_sep = sep.from_parent(r & sep.parent_mask);
            RepairCount sum = 0;
            for_each_submask(s_sep & ~r_sep, [&](std::uint32_t x) {
                const std::uint32_t s1 = r_sep | x;
                const RepairCount& left = f.at(r, s_outside | sep.in_parent[s1]);
                if (left.is_zero()) return;
                const std::uint32_t forced = (s_sep & ~s1) | r_sep;
                for_each_submask(x, [&](std::uint32_t y) {
                    const RepairCount& right = g.at(r_sep, forced | y);
                    if (!right.is_zero()) sum += left * right;
                });
            });
            out.at(r, s) = std::move(sum);
        });
        if (s == full) break;
    }
    return out;
}

std::string bag_name(BagIndex b) { return "b" + std::to_string(b); }

void trace_f(std::ostream& os, const Database& db, const RootedDecomposition& t, BagIndex b,
             std::size_t prefix, const PairTable& table) {
    const FactSet& bag = t.bags[b];
    std::string children = "(";
    for (std::size_t i = 0; i < prefix; ++i) {
        if (i) children += ", ";
        children += bag_name(t.children[b][i]);
    }
    children += ")";
    const std::uint32_t full = low_bits(bag.size());
    for (std::uint32_t s = 0;; ++s) {
        for_each_submask(s, [&](std::uint32_t r) {
            os << "f(" << db.describe(from_mask(bag, r)) << ", " << db.describe(from_mask(bag, s))
               << ", " << bag_name(b) << ", " << children << ") = " << table.at(r, s) << '\n';
        });
        if (s == full) break;
    }
}

void trace_g(std::ostream& os, const Database& db, const FactSet& sep_facts, BagIndex parent,
             BagIndex child, const PairTable& table) {
    const std::uint32_t full = low_bits(sep_facts.size());
    for (std::uint32_t s = 0;; ++s) {
        for_each_submask(s, [&](std::uint32_t r) {
            os << "g(" << db.describe(from_mask(sep_facts, r)) << ", "
               << db.describe(from_mask(sep_facts, s)) << ", " << bag_name(parent) << ", "
               << bag_name(child) << ") = " << table.at(r, s) << '\n';
        });
        if (s == full) break;
    }
}

FactSet intersect(const FactSet& a, const FactSet& b) {
    FactSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

PairTable::PairTable(std::size_t size) : size_(size), values_(pow3(size)) {}

std::uint64_t PairTable::index(std::uint32_t r, std::uint32_t s) { return ternary(s) + ternary(r); }

std::uint32_t to_mask(const FactSet& bag, const FactSet& subset) {
    std::uint32_t mask = 0;
    for (FactId id : subset) {
        auto it = std::lower_bound(bag.begin(), bag.end(), id);
        if (it == bag.end() || *it != id) throw PreconditionError("fact is not in the bag");
        mask |= 1u << static_cast<std::uint32_t>(it - bag.begin());
    }
    return mask;
}

FactSet from_mask(const FactSet& bag, std::uint32_t mask) {
    FactSet out;
    for (std::size_t i = 0; i < bag.size(); ++i) {
        if (mask & (1u << i)) out.push_back(bag[i]);
    }
    return out;
}

RepairCount MemoTables::f_value(const RootedDecomposition& t, BagIndex bag, std::size_t prefix,
                                const FactSet& r, const FactSet& s) const {
    if (!is_subset(r, s)) throw PreconditionError("f requires r ⊆ s");
    return f.at(bag).at(prefix).at(to_mask(t.bags[bag], r), to_mask(t.bags[bag], s));
}

RepairCount MemoTables::g_value(const RootedDecomposition& t, BagIndex child, const FactSet& r,
                                const FactSet& s) const {
    if (!is_subset(r, s)) throw PreconditionError("g requires r ⊆ s");
    const auto parent = t.parents().at(child);
    if (!parent) throw PreconditionError("the root bag has no g table");
    const FactSet sep = intersect(t.bags[*parent], t.bags[child]);
    return g.at(child).at(to_mask(sep, r), to_mask(sep, s));
}

FactSet max_rep(const Database& db, const FactSet& r, const FactSet& d,
                const ConstraintSet& constraints) {
    if (!is_subset(r, d)) throw PreconditionError("max_rep requires r ⊆ d");
    if (!satisfies_constraints(db, r, constraints)) {
        throw PreconditionError("max_rep requires a consistent r");
    }
    FactSet out = r;
    for (FactId a : d) {
        if (std::binary_search(r.begin(), r.end(), a)) continue;
        FactSet with = r;
        with.insert(std::lower_bound(with.begin(), with.end(), a), a);
        if (!satisfies_constraints(db, with, constraints)) out.push_back(a);
    }
    return make_fact_set(std::move(out));
}

bool is_max_repair(const Database& db, const FactSet& r, const FactSet& s, const FactSet& b,
                   const ConstraintSet& constraints) {
    if (!is_subset(r, s) || !is_subset(s, b)) return false;
    if (!satisfies_constraints(db, r, constraints)) return false;
    return max_rep(db, r, b, constraints) == s;
}

DpResult number_falsify(const Database& db, const LabeledHypergraph& h,
                        const RootedDecomposition& t, const CountOptions& options) {
    if (h.node_count != db.size()) {
        throw PreconditionError("hypergraph does not belong to the database");
    }
    if (auto problem = find_violation(t, h)) {
        throw PreconditionError("invalid tree decomposition: " + *problem);
    }
    const std::size_t k = t.max_bag_size();
    if (k > kHardMaxBagSize || (k > options.max_bag_size && !options.force)) {
        throw SizeGuardError("largest bag has " + std::to_string(k) + " facts; limit is " +
                             std::to_string(options.force ? kHardMaxBagSize
                                                          : options.max_bag_size) +
                             (options.force ? "" : " (use --force to raise it)"));
    }

    const auto bag_edges = edges_per_bag(h, t);
    DpResult result;
    result.stats.bags = t.bags.size();
    result.stats.max_bag_size = k;
    result.stats.memo_entries.assign(t.bags.size(), 0);
    if (options.retain_tables) {
        result.tables.emplace();
        result.tables->f.resize(t.bags.size());
        result.tables->g.resize(t.bags.size());
    }

    auto note_entries = [&](BagIndex b, std::size_t entries) {
        auto& slot = result.stats.memo_entries[b];
        slot = std::max(slot, entries);
        if (entries > pow3(t.bags[b].size())) result.stats.within_bound = false;
    };

    std::vector<PairTable> finished(t.bags.size());
    for (BagIndex b : t.post_order()) {
        const FactSet& bag = t.bags[b];
        PairTable table = leaf_table(bag.size(), bag_edges[b]);
        note_entries(b, table.entries());
        if (options.trace) trace_f(*options.trace, db, t, b, 0, table);
        if (result.tables) result.tables->f[b].push_back(table);

        for (std::size_t i = 0; i < t.children[b].size(); ++i) {
            const BagIndex c = t.children[b][i];
            const Separator sep(bag, t.bags[c]);
            PairTable g = g_table(sep, finished[c]);
            finished[c] = PairTable();
            note_entries(c, g.entries());
            if (options.trace) trace_g(*options.trace, db, intersect(bag, t.bags[c]), b, c, g);

            table = extend_table(bag.size(), table, sep, g);
            note_entries(b, table.entries());
            if (options.trace) trace_f(*options.trace, db, t, b, i + 1, table);
            if (result.tables) {
                result.tables->g[c] = std::move(g);
                result.tables->f[b].push_back(table);
            }
        }
        finished[b] = std::move(table);
    }

    const std::uint32_t root_full = low_bits(t.bags[t.root].size());
    RepairCount total = 0;
    for_each_submask(root_full, [&](std::uint32_t r) { total += finished[t.root].at(r, root_full); });
    result.count = std::move(total);
    return result;
}

DpResult number_falsify(const Database& db, const ConstraintSet& constraints, const Query& query,
                        const RootedDecomposition& t, const CountOptions& options) {
    return number_falsify(db, build_solution_conflict(db, constraints, query), t, options);
}

RepairCounts count_repairs(const Database& db, const ConstraintSet& constraints,
                           const Query& query, Heuristic heuristic, const CountOptions& options) {
    const LabeledHypergraph h = build_solution_conflict(db, constraints, query);
    const RootedDecomposition t = decompose(h, heuristic);
    RepairCounts counts;
    counts.falsifying = number_falsify(db, h, t, options).count;
    counts.total = number_falsify(db, h.conflicts_only(), t, options).count;
    counts.satisfying = counts.total - counts.falsifying;
    return counts;
}

RepairCount count_satisfying(const Database& db, const ConstraintSet& constraints,
                             const Query& query, Heuristic heuristic) {
    return count_repairs(db, constraints, query, heuristic).satisfying;
}

bool cqa_decide(const Database& db, const ConstraintSet& constraints, const Query& query,
                Heuristic heuristic) {
    const LabeledHypergraph h = build_solution_conflict(db, constraints, query);
    return number_falsify(db, h, decompose(h, heuristic)).count.is_zero();
}

}  // namespace repairkit
