#include "repairkit/hypergraph.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <unordered_set>

#include "repairkit/errors.hpp"
#include "repairkit/matching.hpp"

namespace repairkit {

namespace {

struct FactSetHash {
    std::size_t operator()(const FactSet& s) const noexcept {
        std::size_t h = s.size();
        for (FactId id : s) h ^= id + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

bool canonical_less(const FactSet& a, const FactSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

std::vector<std::string> project(const Fact& f, const std::vector<std::size_t>& positions) {
    std::vector<std::string> out;
    out.reserve(positions.size());
    for (auto p : positions) {
        if (p < 1 || p > f.arity()) {
            throw SchemaError("position " + std::to_string(p) + " out of range for " +
                              f.to_string());
        }
        out.push_back(f.tuple[p - 1]);
    }
    return out;
}

// Pairs of facts that agree on `lhs` but differ on `rhs` (keys: rhs = all positions).
void fd_conflicts(const Database& db, const FactIndex& index, const std::string& relation,
                  const std::vector<std::size_t>& lhs, const std::vector<std::size_t>* rhs,
                  std::vector<FactSet>& out) {
    std::map<std::vector<std::string>, std::vector<FactId>> groups;
    for (FactId id : index.facts_of(relation)) groups[project(db.fact(id), lhs)].push_back(id);
    for (const auto& [_, group] : groups) {
        for (std::size_t i = 0; i < group.size(); ++i) {
            for (std::size_t j = i + 1; j < group.size(); ++j) {
                const Fact& a = db.fact(group[i]);
                const Fact& b = db.fact(group[j]);
                if (rhs == nullptr || project(a, *rhs) != project(b, *rhs)) {
                    out.push_back({group[i], group[j]});
                }
            }
        }
    }
}

void collect_images(const FactIndex& index, std::span<const Atom> atoms,
                    std::span<const Comparison> comparisons, std::vector<FactSet>& out) {
    for_each_match(index, atoms, comparisons, [&](std::span<const FactId> image, const Assignment&) {
        out.push_back(make_fact_set({image.begin(), image.end()}));
        return true;
    });
}

}  // namespace

std::vector<FactSet> minimize_sets(std::vector<FactSet> family) {
    std::sort(family.begin(), family.end(), canonical_less);
    family.erase(std::unique(family.begin(), family.end()), family.end());

    std::vector<FactSet> kept;
    std::unordered_set<FactSet, FactSetHash> kept_set;
    for (auto& candidate : family) {
        bool minimal = true;
        const std::size_t m = candidate.size();
        if (m <= 16) {
            // Every proper nonempty subset, by bitmask over the candidate's elements.
            const std::uint32_t full = (1u << m) - 1;
            FactSet probe;
            for (std::uint32_t mask = 1; mask < full && minimal; ++mask) {
                probe.clear();
                for (std::size_t i = 0; i < m; ++i) {
                    if (mask & (1u << i)) probe.push_back(candidate[i]);
                }
                minimal = !kept_set.contains(probe);
            }
        } else {
            minimal = std::none_of(kept.begin(), kept.end(),
                                   [&](const FactSet& k) { return is_subset(k, candidate); });
        }
        if (minimal) {
            kept_set.insert(candidate);
            kept.push_back(std::move(candidate));
        }
    }
    return kept;
}

std::vector<FactSet> minimal_conflicts(const Database& db, const ConstraintSet& constraints) {
    validate_constraints(constraints, db);
    FactIndex index(db);
    std::vector<FactSet> candidates;
    for (const auto& c : constraints) {
        if (const auto* fd = std::get_if<FunctionalDependency>(&c)) {
            fd_conflicts(db, index, fd->relation, fd->lhs, &fd->rhs, candidates);
        } else if (const auto* key = std::get_if<Key>(&c)) {
            fd_conflicts(db, index, key->relation, key->positions, nullptr, candidates);
        } else {
            const auto& dc = std::get<DenialConstraint>(c);
            collect_images(index, dc.atoms, dc.comparisons, candidates);
        }
    }
    return minimize_sets(std::move(candidates));
}

std::vector<FactSet> minimal_solutions(const Database& db, const Query& query) {
    if (query.is_false()) return {};
    validate_query(query, db);
    FactIndex index(db);
    std::vector<FactSet> candidates;
    for (const auto& d : query.disjuncts()) collect_images(index, d.atoms, d.inequalities, candidates);
    return minimize_sets(std::move(candidates));
}

LabeledHypergraph build_solution_conflict(const Database& db, const ConstraintSet& constraints,
                                          const Query& query) {
    LabeledHypergraph h;
    h.node_count = db.size();
    h.conflict_edges = minimal_conflicts(db, constraints);
    h.solution_edges = minimal_solutions(db, query);
    return h;
}

Graph primal_graph(const LabeledHypergraph& h) {
    Graph g(h.node_count);
    for (const auto* edges : {&h.conflict_edges, &h.solution_edges}) {
        for (const auto& e : *edges) {
            for (std::size_t i = 0; i < e.size(); ++i) {
                for (std::size_t j = i + 1; j < e.size(); ++j) g.add_edge(e[i], e[j]);
            }
        }
    }
    return g;
}

std::size_t max_independent_set_size(const LabeledHypergraph& h, std::size_t limit) {
    if (h.node_count > limit || h.node_count > 63) {
        throw SizeGuardError("maximum independent set search limited to " + std::to_string(limit) +
                             " nodes, got " + std::to_string(h.node_count));
    }
    const std::size_t n = h.node_count;
    // Edges indexed by their largest node: a set stays independent when each
    // added node completes no edge.
    std::vector<std::vector<std::uint64_t>> closing(n);
    for (const auto* edges : {&h.conflict_edges, &h.solution_edges}) {
        for (const auto& e : *edges) {
            std::uint64_t mask = 0;
            for (FactId v : e) mask |= std::uint64_t{1} << v;
            closing[e.back()].push_back(mask);
        }
    }
    std::size_t best = 0;
    auto search = [&](auto&& self, std::size_t v, std::uint64_t chosen, std::size_t size) -> void {
        if (size + (n - v) <= best) return;
        if (v == n) {
            best = size;
            return;
        }
        const std::uint64_t with = chosen | (std::uint64_t{1} << v);
        const bool ok = std::none_of(closing[v].begin(), closing[v].end(),
                                     [&](std::uint64_t e) { return (e & with) == e; });
        if (ok) self(self, v + 1, with, size + 1);
        self(self, v + 1, chosen, size);
    };
    search(search, 0, 0, 0);
    return best;
}

}  // namespace repairkit
