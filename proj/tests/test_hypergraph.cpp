#include "doctest.h"
#include "helpers.hpp"
#include "repairkit/errors.hpp"
#include "repairkit/generators.hpp"
#include "repairkit/hypergraph.hpp"

using namespace repairkit;
using namespace testkit;

namespace {

// Subset-minimal sets with the property, by scanning every subset.
template <class Pred>
std::vector<FactSet> brute_minimal(std::size_t n, Pred has) {
    std::vector<FactSet> out;
    for (std::uint32_t m = 1; m < (1u << n); ++m) {
        if (!has(mask_set(m))) continue;
        bool minimal = true;
        for (std::uint32_t v = 0; v < n && minimal; ++v) {
            if ((m & (1u << v)) && has(mask_set(m & ~(1u << v)))) minimal = false;
        }
        if (minimal) out.push_back(mask_set(m));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<FactSet> sorted(std::vector<FactSet> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("minimal_conflicts examples") {
    const Database path5 = db_of(kFivePath);
    CHECK(minimal_conflicts(path5, sigma_of(kTwoKeys)) ==
          std::vector<FactSet>{{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    CHECK(minimal_conflicts(db_of("R(a,b)\nR(b,c)"), sigma_of(kTwoKeys)).empty());
    CHECK(minimal_conflicts(db_of("R(1)\nS(1)\nS(2)"), sigma_of("dc : R(?x), S(?x)")) ==
          std::vector<FactSet>{{0, 1}});
}

TEST_CASE("dc conflicts are subset-minimal across constraints") {
    // The single-fact conflict R(a,a) subsumes every pair containing it.
    const Database db = db_of("R(a,a)\nR(a,b)\nR(b,a)");
    const auto sigma = sigma_of("dc : R(?x,?x)\ndc : R(?x,?y), R(?y,?x)");
    CHECK(minimal_conflicts(db, sigma) == std::vector<FactSet>{{0}, {1, 2}});
}

TEST_CASE("minimal_solutions examples") {
    const Database path5 = db_of(kFivePath);
    CHECK(minimal_solutions(path5, query_of("R(a,b)")) == std::vector<FactSet>{{0}});
    CHECK(minimal_solutions(path5, Query::falsum()).empty());

    const Instance bip = gen_bipartite(3);
    CHECK(minimal_solutions(bip.db, bip.query).size() == 9);
    const Instance chain = gen_chain(4);
    CHECK(minimal_solutions(chain.db, chain.query).empty());
}

TEST_CASE("solution-conflict hypergraph of the five-fact path") {
    const Database path5 = db_of(kFivePath);
    const auto h = build_solution_conflict(path5, sigma_of(kTwoKeys), query_of("R(a,b)"));
    CHECK(h.node_count == 5);
    CHECK(h.conflict_edges.size() == 4);
    CHECK(h.solution_edges.size() == 1);

    const auto hf = build_solution_conflict(path5, sigma_of(kTwoKeys), Query::falsum());
    CHECK(hf == h.conflicts_only());

    const Graph g = primal_graph(h);
    CHECK(g.edge_count() == 4);
    for (Vertex v = 0; v + 1 < 5; ++v) CHECK(g.adjacent(v, v + 1));
}

TEST_CASE("primal graph") {
    LabeledHypergraph tri{3, {{0, 1, 2}}, {}};
    const Graph t = primal_graph(tri);
    CHECK(t.edge_count() == 3);

    LabeledHypergraph path{4, {{0, 1}, {1, 2}}, {{2, 3}}};
    const Graph p = primal_graph(path);
    CHECK(p.edges() == std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {1, 2}, {2, 3}});

    const Instance bip = gen_bipartite(3);
    const Graph k33 = primal_graph(build_solution_conflict(bip.db, bip.constraints, bip.query));
    CHECK(k33.edge_count() == 9);
}

TEST_CASE("max_independent_set_size") {
    CHECK(max_independent_set_size(LabeledHypergraph{6, {}, {}}) == 6);
    const Database path5 = db_of(kFivePath);
    const auto h = build_solution_conflict(path5, sigma_of(kTwoKeys), query_of("R(a,b)"));
    CHECK(max_independent_set_size(h.conflicts_only()) == 3);
    CHECK(max_independent_set_size(h) == 2);
    CHECK(max_independent_set_size(LabeledHypergraph{3, {{0, 1, 2}}, {}}) == 2);
    CHECK_THROWS_AS(max_independent_set_size(LabeledHypergraph{30, {}, {}}, 24), SizeGuardError);
}

TEST_CASE("minimize_sets") {
    CHECK(minimize_sets({{0, 1, 2}, {1}, {0, 2}, {1, 3}, {0, 2}}) ==
          std::vector<FactSet>{{1}, {0, 2}});
}

TEST_CASE("edges match brute force on random instances") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        GenSpec spec;
        spec.n = 9;
        spec.seed = 1000 + seed;
        spec.constraint_kind = static_cast<ConstraintKind>(seed % 3);
        spec.query_kind = seed % 2 ? QueryKind::bucq : QueryKind::bcq;
        const Instance inst = gen_random(spec);
        const std::size_t n = inst.db.size();
        const auto conflicts = brute_minimal(n, [&](const FactSet& s) {
            return !satisfies_constraints(inst.db, s, inst.constraints);
        });
        const auto solutions =
            brute_minimal(n, [&](const FactSet& s) { return evaluate_query(inst.db, s, inst.query); });
        CHECK(sorted(minimal_conflicts(inst.db, inst.constraints)) == conflicts);
        CHECK(sorted(minimal_solutions(inst.db, inst.query)) == solutions);
        if (is_fd_only(inst.constraints)) {
            for (const auto& e : conflicts) CHECK(e.size() == 2);
        }
        for (const auto& e : conflicts) CHECK(e.size() <= max_constraint_atoms(inst.constraints));
        for (const auto& e : solutions) CHECK(e.size() <= inst.query.max_relational_atoms());
    }
}
